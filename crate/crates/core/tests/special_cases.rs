use coopcap::gauss_capacity::{gauss_u2, gauss_u_terms};
use coopcap::ld_capacity::Levels;
use coopcap::sampling::{par_map, sample_channels};
use coopcap::special_cases::{
    dest_coop_bounds, feedback_bound, feedback_gap, feedback_to_coop, fig2_curve, fig2_limit, primed_mins_agree,
    reversibility_check, symmetric_report,
};

#[test]
fn primed_minimums_agree_on_grid() {
    let r = 0..=6i64;
    for n13 in r.clone() {
        for n14 in r.clone() {
            for n23 in r.clone() {
                for n24 in r.clone() {
                    for nc in r.clone() {
                        let l = Levels { n13, n14, n23, n24, nc };
                        assert!(primed_mins_agree(&l), "{l:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn source_and_destination_bounds_stay_close() {
    let channels = sample_channels(2000, 5, -20.0, 80.0).unwrap();
    for p in &channels {
        let r = reversibility_check(p);
        assert!(r.primed_equal, "{p:?}");
        assert!(r.min_diff <= 7.0, "{p:?}: {}", r.min_diff);
        let (u, v) = (gauss_u_terms(p), dest_coop_bounds(p));
        assert_eq!(u.u5, v.v5);
        assert!(u.u4 <= v.v4 + 1e-12 && v.v4 <= u.u4 + 2.0 + 1e-12, "{p:?}");
    }
}

#[test]
fn feedback_sweep() {
    let mut points = Vec::new();
    for i in 0..=30 {
        let hd = 10f64.powf(0.1 * i as f64);
        for j in 0..=30 {
            points.push((hd, hd.powf(0.05 * j as f64)));
        }
    }
    let gaps = par_map(&points, |&(hd, hi)| feedback_gap(hd, hi).unwrap());
    for (&(hd, hi), g) in points.iter().zip(gaps) {
        assert!(g <= 19.0, "hD={hd} hI={hi} gap={g}");
        let p = feedback_to_coop(hd, hi).unwrap();
        assert!((feedback_bound(hd, hi) - gauss_u2(&p)).abs() < 1e-9);
    }
}

#[test]
fn symmetric_channel_within_constant() {
    for hd in [1e3f64, 1e4, 1e5, 1e6] {
        for i in 0..=8 {
            let alpha = 0.25 * i as f64;
            let r = symmetric_report(hd, hd.powf(alpha)).unwrap();
            assert!(r.upper <= r.c + 0.5, "hD={hd} alpha={alpha}: {} vs {}", r.upper, r.c);
            assert!(r.achievable >= r.c - 6.5, "hD={hd} alpha={alpha}: {} vs {}", r.achievable, r.c);
            assert!(r.achievable <= r.upper + 1e-6);
        }
    }
}

#[test]
fn normalized_curve_shape() {
    let hd = 1e6;
    let mut prev = 0.0;
    for i in 0..=200 {
        let alpha = 0.01 * i as f64;
        let v = fig2_curve(alpha, hd).unwrap();
        assert!(v + 1e-12 >= prev, "alpha={alpha}");
        prev = v;
    }
    // The finite-hD curve sits above the limit by a vanishing constant.
    for i in 0..=8 {
        let alpha = 0.25 * i as f64;
        let near = fig2_curve(alpha, 1e6).unwrap() - fig2_limit(alpha);
        let far = fig2_curve(alpha, 1e15).unwrap() - fig2_limit(alpha);
        assert!(near >= 0.0 && far >= 0.0 && far <= near);
        assert!(far <= 0.05, "alpha={alpha}: {far}");
    }
}
