mod common;

use common::{q, random_point, random_system};
use coopcap::rate_region::{
    fourier_motzkin_eliminate, max_sum_rate, max_sum_rate_bruteforce, max_sum_rate_fme, projection_contains_bruteforce,
    ConstraintSystem, LpStatus, Rational, Scalar,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scaled(sys: &ConstraintSystem<Rational>, lambda: &Rational) -> ConstraintSystem<Rational> {
    let names: Vec<&str> = sys.vars().iter().map(|v| v.as_str()).collect();
    let mut out = ConstraintSystem::new(&names).unwrap();
    for r in sys.rows() {
        let terms: Vec<(&str, Rational)> = names.iter().copied().zip(r.coeffs.iter().cloned()).collect();
        out.add_row(&terms, r.rhs.clone() * lambda.clone()).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_matches_bruteforce(seed in any::<u64>()) {
        let sys = random_system(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for var in sys.vars().iter().map(|v| v.as_str().to_string()).collect::<Vec<_>>() {
            let proj = fourier_motzkin_eliminate(&sys, &var).unwrap();
            for _ in 0..20 {
                let x = random_point(&mut rng, sys.num_vars() - 1);
                prop_assert_eq!(proj.is_feasible(&x), projection_contains_bruteforce(&sys, &var, &x).unwrap());
            }
        }
    }

    #[test]
    fn solvers_agree(seed in any::<u64>()) {
        let sys = random_system(seed);
        let lp = max_sum_rate(&sys);
        prop_assert_eq!(lp.status, LpStatus::Optimal);
        let opt = lp.into_optimum().unwrap();
        prop_assert_eq!(max_sum_rate_fme(&sys).unwrap(), opt.clone());
        let lattice = max_sum_rate_bruteforce(&sys, q(1, 2)).unwrap();
        prop_assert!(lattice <= opt);
    }

    #[test]
    fn optimum_scales_with_rhs(seed in any::<u64>(), n in 1i64..20, d in 1i64..20) {
        let sys = random_system(seed);
        let lambda = q(n, d);
        let a = max_sum_rate(&sys).into_optimum().unwrap();
        let b = max_sum_rate(&scaled(&sys, &lambda)).into_optimum().unwrap();
        prop_assert_eq!(a * lambda, b);
    }
}

#[test]
fn projection_of_box() {
    let mut sys = ConstraintSystem::new(&["a", "b"]).unwrap();
    sys.add_row(&[("a", Rational::one()), ("b", Rational::one())], Rational::from_i64(3)).unwrap();
    sys.add_row(&[("a", Rational::one()), ("b", -Rational::one())], Rational::from_i64(-1)).unwrap();
    // b >= a + 1 and a + b <= 3 leave a <= 1.
    let proj = fourier_motzkin_eliminate(&sys, "b").unwrap();
    assert!(proj.is_feasible(&[Rational::one()]));
    assert!(!proj.is_feasible(&[q(3, 2)]));
    assert!(projection_contains_bruteforce(&sys, "b", &[Rational::one()]).unwrap());
    assert!(!projection_contains_bruteforce(&sys, "b", &[q(3, 2)]).unwrap());
}
