use super::{ConstraintSystem, Scalar};
use crate::error::{Error, Result};

const MAX_VARS: usize = 8;

/// Largest objective value over feasible points of the lattice
/// `step · Z^n`, by depth-first search with bound pruning.
pub fn max_sum_rate_bruteforce<S: Scalar>(sys: &ConstraintSystem<S>, step: S) -> Result<S> {
    let n = sys.num_vars();
    if n > MAX_VARS {
        return Err(Error::TooManyVariables { max: MAX_VARS, got: n });
    }
    if !step.is_pos() {
        return Err(Error::NonPositiveStep);
    }
    // Per-variable lattice bound from rows with non-negative coefficients.
    let mut steps = Vec::with_capacity(n);
    for j in 0..n {
        let mut best: Option<S> = None;
        for r in sys.rows() {
            if r.coeffs[j].is_pos() && r.coeffs.iter().all(|c| !c.is_neg()) {
                let b = r.rhs.clone() / r.coeffs[j].clone();
                if best.as_ref().map_or(true, |v| b < *v) {
                    best = Some(b);
                }
            }
        }
        let ub = best.ok_or(Error::Unbounded)?;
        let mut k = 0usize;
        let mut v = S::zero();
        while !(v.clone() + step.clone() - ub.clone()).is_pos() {
            v = v + step.clone();
            k += 1;
        }
        steps.push(k);
    }
    let c = sys.objective();
    let mut x = vec![S::zero(); n];
    let mut best: Option<S> = None;
    search(sys, &c, &steps, &step, 0, &mut x, &mut best);
    best.ok_or(Error::Infeasible)
}

/// Whether `point` (values for every variable except `var`, in system
/// order) extends to a feasible point of `sys` for some `var >= 0`.
///
/// Tries `var = 0` and every value that makes one row tight; the feasible
/// values of `var` form an interval whose lower end is one of these.
pub fn projection_contains_bruteforce<S: Scalar>(sys: &ConstraintSystem<S>, var: &str, point: &[S]) -> Result<bool> {
    let k = sys.index_of(var)?;
    if point.len() + 1 != sys.num_vars() {
        return Err(Error::LengthMismatch { expected: sys.num_vars() - 1, got: point.len() });
    }
    let mut x: Vec<S> = point.to_vec();
    x.insert(k, S::zero());
    let mut candidates = vec![S::zero()];
    for r in sys.rows() {
        let a = &r.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest = r
            .coeffs
            .iter()
            .zip(&x)
            .enumerate()
            .filter(|(j, _)| *j != k)
            .fold(S::zero(), |acc, (_, (c, v))| acc + c.clone() * v.clone());
        let v = (r.rhs.clone() - rest) / a.clone();
        if !v.is_neg() {
            candidates.push(v);
        }
    }
    Ok(candidates.into_iter().any(|v| {
        x[k] = v;
        sys.is_feasible(&x)
    }))
}

fn search<S: Scalar>(
    sys: &ConstraintSystem<S>,
    c: &[S],
    steps: &[usize],
    step: &S,
    j: usize,
    x: &mut Vec<S>,
    best: &mut Option<S>,
) {
    let n = x.len();
    // Rows whose free variables all have non-negative coefficients can be
    // checked on the assigned prefix.
    for r in sys.rows() {
        if r.coeffs[j..].iter().all(|a| !a.is_neg()) {
            let partial = r.coeffs[..j].iter().zip(&x[..j]).fold(S::zero(), |a, (c, v)| a + c.clone() * v.clone());
            if (partial - r.rhs.clone()).is_pos() {
                return;
            }
        }
    }
    let value = |x: &[S]| c.iter().zip(x).fold(S::zero(), |a, (c, v)| a + c.clone() * v.clone());
    if j == n {
        if sys.is_feasible(x) {
            let v = value(x);
            if best.as_ref().map_or(true, |b| v > *b) {
                *best = Some(v);
            }
        }
        return;
    }
    if let Some(b) = best.as_ref() {
        let mut optimistic =
            value(&x[..j].iter().cloned().chain(std::iter::repeat(S::zero()).take(n - j)).collect::<Vec<_>>());
        for (k, &s) in steps.iter().enumerate().skip(j) {
            if c[k].is_pos() {
                optimistic = optimistic + c[k].clone() * S::from_i64(s as i64) * step.clone();
            }
        }
        if !(optimistic - b.clone()).is_pos() {
            return;
        }
    }
    for k in (0..=steps[j]).rev() {
        x[j] = S::from_i64(k as i64) * step.clone();
        search(sys, c, steps, step, j + 1, x, best);
    }
    x[j] = S::zero();
}
