use super::simplex::{maximize, LpStatus};
use super::{ConstraintSystem, RateVar, Row, Scalar};
use crate::error::{Error, Result};

/// Projects the feasible set of `sys` (with implicit non-negativity) onto
/// all variables except `var`.
pub fn fourier_motzkin_eliminate<S: Scalar>(sys: &ConstraintSystem<S>, var: &str) -> Result<ConstraintSystem<S>> {
    let k = sys.index_of(var)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut rows = Vec::new();
    for r in sys.rows() {
        let a = &r.coeffs[k];
        if a.is_pos() {
            pos.push(r);
        } else if a.is_neg() {
            neg.push(r);
        } else {
            rows.push(drop_col(r, k));
        }
    }
    // Upper bounds against the implicit lower bound var >= 0.
    for p in &pos {
        rows.push(drop_col(p, k));
    }
    for p in &pos {
        for n in &neg {
            let (ap, an) = (p.coeffs[k].clone(), -n.coeffs[k].clone());
            let coeffs: Vec<S> =
                p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| an.clone() * x.clone() + ap.clone() * y.clone()).collect();
            let rhs = an.clone() * p.rhs.clone() + ap.clone() * n.rhs.clone();
            rows.push(drop_col(&Row { coeffs, rhs }, k));
        }
    }

    let mut vars: Vec<RateVar> = sys.vars().to_vec();
    vars.remove(k);
    let shift = |g: &[usize]| g.iter().filter(|&&i| i != k).map(|&i| if i > k { i - 1 } else { i }).collect();
    let (r1, r2) = sys.groups_raw();
    let (r1, r2) = (shift(r1), shift(r2));
    Ok(ConstraintSystem::from_parts(vars, prune_redundant(rows), r1, r2))
}

fn drop_col<S: Scalar>(r: &Row<S>, k: usize) -> Row<S> {
    let mut coeffs = r.coeffs.clone();
    coeffs.remove(k);
    Row { coeffs, rhs: r.rhs.clone() }
}

/// Scales a row so its largest absolute coefficient is one.
fn normalize<S: Scalar>(r: Row<S>) -> Row<S> {
    let scale = r.coeffs.iter().map(Scalar::abs).fold(S::zero(), |m, v| if v > m { v } else { m });
    if scale.is_zero() {
        return r;
    }
    Row { coeffs: r.coeffs.iter().map(|c| c.clone() / scale.clone()).collect(), rhs: r.rhs / scale }
}

/// Removes rows implied by the others together with non-negativity.
///
/// A row is dropped when maximizing its left side over the remaining rows
/// cannot exceed its right side. An infeasible trivial row `0 <= b < 0`
/// replaces the whole system.
pub fn prune_redundant<S: Scalar>(rows: Vec<Row<S>>) -> Vec<Row<S>> {
    let mut kept: Vec<Row<S>> = Vec::new();
    for r in rows.into_iter().map(normalize) {
        if r.is_trivial() {
            if r.rhs.is_neg() {
                return vec![r];
            }
            continue;
        }
        // All coefficients <= 0 with rhs >= 0 is implied by x >= 0.
        if !r.rhs.is_neg() && r.coeffs.iter().all(|c| !c.is_pos()) {
            continue;
        }
        if let Some(same) =
            kept.iter_mut().find(|k| k.coeffs.iter().zip(&r.coeffs).all(|(a, b)| (a.clone() - b.clone()).is_zero()))
        {
            if r.rhs < same.rhs {
                same.rhs = r.rhs;
            }
            continue;
        }
        kept.push(r);
    }

    let mut i = 0;
    while i < kept.len() {
        let target = kept[i].clone();
        let others: Vec<Row<S>> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        match maximize(&others, &target.coeffs) {
            (LpStatus::Optimal, x) => {
                let best = target.eval(&x);
                if !(best - target.rhs.clone()).is_pos() {
                    kept.remove(i);
                    continue;
                }
            }
            (LpStatus::Infeasible, _) => {
                // The others alone are contradictory; keep them.
                kept.remove(i);
                continue;
            }
            (LpStatus::Unbounded, _) => {}
        }
        i += 1;
    }
    kept
}

/// Maximum sum rate by projecting onto a fresh variable `t <= R1 + R2`.
pub fn max_sum_rate_fme<S: Scalar>(sys: &ConstraintSystem<S>) -> Result<S> {
    let mut names: Vec<String> = sys.vars().iter().map(|v| v.0.clone()).collect();
    let t = "__t";
    names.push(t.to_string());
    let mut ext = ConstraintSystem::new(&names)?;
    for r in sys.rows() {
        let mut coeffs = r.coeffs.clone();
        coeffs.push(S::zero());
        ext.push_row(Row { coeffs, rhs: r.rhs.clone() })?;
    }
    let mut link: Vec<S> = sys.objective().into_iter().map(|c| -c).collect();
    link.push(S::one());
    ext.push_row(Row { coeffs: link, rhs: S::zero() })?;

    for v in sys.vars() {
        ext = fourier_motzkin_eliminate(&ext, &v.0)?;
    }
    let mut upper: Option<S> = None;
    let mut lower = S::zero();
    for r in ext.rows() {
        let a = &r.coeffs[0];
        if a.is_pos() {
            let b = r.rhs.clone() / a.clone();
            if upper.as_ref().map_or(true, |u| b < *u) {
                upper = Some(b);
            }
        } else if a.is_neg() {
            let b = r.rhs.clone() / a.clone();
            if b > lower {
                lower = b;
            }
        } else if r.rhs.is_neg() {
            return Err(Error::Infeasible);
        }
    }
    match upper {
        None => Err(Error::Unbounded),
        Some(u) if (lower - u.clone()).is_pos() || u.is_neg() => Err(Error::Infeasible),
        Some(u) => Ok(u),
    }
}

#[cfg(test)]
mod tests {
    use super::super::Rational;
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn eliminate_upper_bounded_var() {
        let mut s = ConstraintSystem::new(&["r1", "r2"]).unwrap();
        s.add_bound(&["r1", "r2"], q(4)).unwrap();
        s.add_bound(&["r1"], q(1)).unwrap();
        let e = fourier_motzkin_eliminate(&s, "r1").unwrap();
        assert_eq!(e.vars().len(), 1);
        assert_eq!(e.rows(), &[Row { coeffs: vec![q(1)], rhs: q(4) }]);
    }

    #[test]
    fn infeasibility_certificate() {
        let mut s = ConstraintSystem::new(&["r1"]).unwrap();
        s.add_row(&[("r1", q(1))], q(2)).unwrap();
        s.add_row(&[("r1", q(-1))], q(-3)).unwrap();
        let e = fourier_motzkin_eliminate(&s, "r1").unwrap();
        assert_eq!(e.rows().len(), 1);
        assert!(e.rows()[0].is_trivial());
        assert_eq!(e.rows()[0].rhs, q(-1));
        assert!(fourier_motzkin_eliminate(&s, "zz").is_err());
    }

    #[test]
    fn sum_variable_projection() {
        let mut s = ConstraintSystem::new(&["a", "b"]).unwrap();
        s.add_bound(&["a", "b"], q(4)).unwrap();
        s.add_bound(&["a"], q(1)).unwrap();
        s.set_groups(&["a"], &["b"]).unwrap();
        assert_eq!(max_sum_rate_fme(&s).unwrap(), q(4));
    }
}
