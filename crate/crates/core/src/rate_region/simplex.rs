//! Dense two-phase tableau simplex with Bland's rule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConstraintSystem, Row, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult<S> {
    pub status: LpStatus,
    /// Zero unless `status` is optimal.
    pub optimum: S,
    pub witness: BTreeMap<String, S>,
}

impl<S: Scalar> LpResult<S> {
    pub fn into_optimum(self) -> Result<S> {
        match self.status {
            LpStatus::Optimal => Ok(self.optimum),
            LpStatus::Infeasible => Err(Error::Infeasible),
            LpStatus::Unbounded => Err(Error::Unbounded),
        }
    }
}

/// Maximizes the sum of all variables in the R1 and R2 groups.
pub fn max_sum_rate<S: Scalar>(sys: &ConstraintSystem<S>) -> LpResult<S> {
    let (status, x) = maximize(sys.rows(), &sys.objective());
    let optimum = match status {
        LpStatus::Optimal => sys.objective().iter().zip(&x).fold(S::zero(), |a, (c, v)| a + c.clone() * v.clone()),
        _ => S::zero(),
    };
    let witness = sys.vars().iter().map(|v| v.0.clone()).zip(x).collect();
    LpResult { status, optimum, witness }
}

struct Tableau<S> {
    a: Vec<Vec<S>>,
    b: Vec<S>,
    basis: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.a[r][col].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.b[r] = self.b[r].clone() / p;
        let pivot_row = self.a[r].clone();
        let pivot_b = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for (v, pr) in self.a[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *v = v.clone() - f.clone() * pr.clone();
                }
            }
            self.a[i][col] = S::zero();
            self.b[i] = self.b[i].clone() - f * pivot_b.clone();
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule on objective `c` over columns `< ncols`. Returns
    /// false when unbounded.
    fn optimize(&mut self, c: &[S], ncols: usize) -> bool {
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = c[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !c[bi].is_zero() && !self.a[i][j].is_zero() {
                        d = d - c[bi].clone() * self.a[i][j].clone();
                    }
                }
                d.is_pos()
            });
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, S)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].is_pos() {
                    continue;
                }
                let ratio = self.b[i].clone() / self.a[i][col].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.cmp_tol(lr) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*li],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Maximizes `c · x` subject to `rows` and `x >= 0`. The returned point is
/// empty unless the status is optimal.
pub fn maximize<S: Scalar>(rows: &[Row<S>], c: &[S]) -> (LpStatus, Vec<S>) {
    let n = c.len();
    let m = rows.len();
    let negated: Vec<bool> = rows.iter().map(|r| r.rhs.is_neg()).collect();
    let n_art = negated.iter().filter(|&&f| f).count();
    let width = n + m + n_art;

    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + m;
    for (i, row) in rows.iter().enumerate() {
        let sign = if negated[i] { -S::one() } else { S::one() };
        let mut line = vec![S::zero(); width];
        for (j, v) in row.coeffs.iter().enumerate() {
            line[j] = sign.clone() * v.clone();
        }
        line[n + i] = sign.clone();
        if negated[i] {
            line[next_art] = S::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(n + i);
        }
        a.push(line);
        b.push(sign * row.rhs.clone());
    }
    let mut t = Tableau { a, b, basis };

    if n_art > 0 {
        let mut c1 = vec![S::zero(); width];
        for v in c1.iter_mut().skip(n + m) {
            *v = -S::one();
        }
        t.optimize(&c1, width);
        let infeasible = t.basis.iter().zip(&t.b).any(|(&j, v)| j >= n + m && v.is_pos());
        if infeasible {
            return (LpStatus::Infeasible, Vec::new());
        }
        // Drive remaining artificials out of the basis at level zero.
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= n + m {
                match (0..n + m).find(|&j| !t.a[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.a.remove(i);
                        t.b.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut c2 = vec![S::zero(); width];
    c2[..n].clone_from_slice(c);
    if !t.optimize(&c2, n + m) {
        return (LpStatus::Unbounded, Vec::new());
    }
    let mut x = vec![S::zero(); n];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n {
            x[j] = t.b[i].clone();
        }
    }
    (LpStatus::Optimal, x)
}
