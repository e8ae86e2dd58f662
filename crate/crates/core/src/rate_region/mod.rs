//! Non-negative rate variables under linear inequalities, with exact
//! Fourier-Motzkin projection and sum-rate maximization.

mod brute;
mod fme;
mod scalar;
mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use brute::{max_sum_rate_bruteforce, projection_contains_bruteforce};
pub use fme::{fourier_motzkin_eliminate, max_sum_rate_fme, prune_redundant};
pub use scalar::{Rational, Scalar, F64_TOL};
pub use simplex::{max_sum_rate, maximize, LpResult, LpStatus};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RateVar(pub String);

impl RateVar {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RateVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `coeffs · x <= rhs`, with `coeffs` dense over the system's variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Row<S> {
    pub coeffs: Vec<S>,
    pub rhs: S,
}

impl<S: Scalar> Row<S> {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, x: &[S]) -> S {
        self.coeffs.iter().zip(x).fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem<S> {
    vars: Vec<RateVar>,
    rows: Vec<Row<S>>,
    r1: Vec<usize>,
    r2: Vec<usize>,
}

impl<S: Scalar> ConstraintSystem<S> {
    pub fn new<T: AsRef<str>>(vars: &[T]) -> Result<Self> {
        let mut out: Vec<RateVar> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if out.iter().any(|w| w.0 == v) {
                return Err(Error::DuplicateVariable(v.to_string()));
            }
            out.push(RateVar(v.to_string()));
        }
        Ok(ConstraintSystem { vars: out, rows: Vec::new(), r1: Vec::new(), r2: Vec::new() })
    }

    pub fn vars(&self) -> &[RateVar] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row<S>] {
        &self.rows
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v.0 == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Adds `Σ coeff·var <= rhs`.
    pub fn add_row(&mut self, terms: &[(&str, S)], rhs: S) -> Result<()> {
        let mut coeffs = vec![S::zero(); self.vars.len()];
        for (name, c) in terms {
            let i = self.index_of(name)?;
            coeffs[i] = coeffs[i].clone() + c.clone();
        }
        self.push_row(Row { coeffs, rhs })
    }

    /// Adds `Σ vars <= max(rhs, 0)`.
    pub fn add_bound(&mut self, vars: &[&str], rhs: S) -> Result<()> {
        let rhs = if rhs.is_neg() { S::zero() } else { rhs };
        let terms: Vec<_> = vars.iter().map(|v| (*v, S::one())).collect();
        self.add_row(&terms, rhs)
    }

    pub fn push_row(&mut self, row: Row<S>) -> Result<()> {
        if row.coeffs.len() != self.vars.len() {
            return Err(Error::LengthMismatch { expected: self.vars.len(), got: row.coeffs.len() });
        }
        if !row.rhs.is_finite() {
            return Err(Error::InvalidArgument("non-finite rhs".into()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn set_groups<T: AsRef<str>>(&mut self, r1: &[T], r2: &[T]) -> Result<()> {
        let idx = |names: &[T]| -> Result<Vec<usize>> { names.iter().map(|n| self.index_of(n.as_ref())).collect() };
        let (a, b) = (idx(r1)?, idx(r2)?);
        if let Some(&i) = a.iter().find(|i| b.contains(i)) {
            return Err(Error::OverlappingGroups(self.vars[i].0.clone()));
        }
        self.r1 = a;
        self.r2 = b;
        Ok(())
    }

    pub fn group(&self, name: &str) -> Vec<&RateVar> {
        let g = if name == "R1" { &self.r1 } else { &self.r2 };
        g.iter().map(|&i| &self.vars[i]).collect()
    }

    /// Objective weights: 1 on every variable in R1 or R2.
    pub fn objective(&self) -> Vec<S> {
        let mut c = vec![S::zero(); self.vars.len()];
        for &i in self.r1.iter().chain(&self.r2) {
            c[i] = S::one();
        }
        c
    }

    /// Checks every row within the arithmetic tolerance, plus non-negativity.
    pub fn is_feasible(&self, x: &[S]) -> bool {
        x.len() == self.vars.len()
            && x.iter().all(|v| !v.is_neg())
            && self.rows.iter().all(|r| !(r.eval(x) - r.rhs.clone()).is_pos())
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ConstraintSystem<T> {
        ConstraintSystem {
            vars: self.vars.clone(),
            rows: self.rows.iter().map(|r| Row { coeffs: r.coeffs.iter().map(&f).collect(), rhs: f(&r.rhs) }).collect(),
            r1: self.r1.clone(),
            r2: self.r2.clone(),
        }
    }

    /// Rows with variables renamed through `swap`; groups are kept.
    pub fn renamed(&self, swap: &SwapMap) -> Result<Self> {
        let perm = swap.permutation(self)?;
        let mut out = self.clone();
        for row in &mut out.rows {
            let mut c = vec![S::zero(); self.vars.len()];
            for (i, a) in row.coeffs.iter().enumerate() {
                c[perm[i]] = a.clone();
            }
            row.coeffs = c;
        }
        Ok(out)
    }

    /// Appends the rows of `other`, which must declare the same variables.
    pub fn extend_rows(&mut self, other: &ConstraintSystem<S>) -> Result<()> {
        if other.vars != self.vars {
            return Err(Error::InvalidArgument("systems declare different variables".into()));
        }
        for r in &other.rows {
            if !self.rows.contains(r) {
                self.rows.push(r.clone());
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts(vars: Vec<RateVar>, rows: Vec<Row<S>>, r1: Vec<usize>, r2: Vec<usize>) -> Self {
        ConstraintSystem { vars, rows, r1, r2 }
    }

    pub(crate) fn groups_raw(&self) -> (&[usize], &[usize]) {
        (&self.r1, &self.r2)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let coeffs: serde_json::Map<String, Value> = r
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (self.vars[i].0.clone(), c.to_json()))
                    .collect();
                serde_json::json!({ "coeffs": coeffs, "rhs": r.rhs.to_json() })
            })
            .collect();
        let names = |g: &[usize]| g.iter().map(|&i| self.vars[i].0.clone()).collect::<Vec<_>>();
        serde_json::json!({
            "vars": self.vars,
            "rows": rows,
            "objective_groups": { "R1": names(&self.r1), "R2": names(&self.r2) },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Serde(m.to_string());
        let vars: Vec<String> = serde_json::from_value(v.get("vars").cloned().ok_or_else(|| bad("missing vars"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let mut sys = ConstraintSystem::new(&vars)?;
        for row in v.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))? {
            let coeffs = row.get("coeffs").and_then(Value::as_object).ok_or_else(|| bad("missing coeffs"))?;
            let mut terms = Vec::new();
            for (name, c) in coeffs {
                terms.push((name.as_str(), S::from_json(c)?));
            }
            let rhs = S::from_json(row.get("rhs").ok_or_else(|| bad("missing rhs"))?)?;
            sys.add_row(&terms, rhs)?;
        }
        let groups = v.get("objective_groups").ok_or_else(|| bad("missing objective_groups"))?;
        let names = |k: &str| -> Result<Vec<String>> {
            serde_json::from_value(groups.get(k).cloned().unwrap_or(Value::Array(vec![])))
                .map_err(|e| bad(&e.to_string()))
        };
        sys.set_groups(&names("R1")?, &names("R2")?)?;
        Ok(sys)
    }
}

impl<S: Scalar> fmt::Display for ConstraintSystem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let terms: Vec<String> = r
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(
                    |(i, c)| {
                        if c.is_one() {
                            self.vars[i].0.clone()
                        } else {
                            format!("{}*{}", c.display(), self.vars[i])
                        }
                    },
                )
                .collect();
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "{lhs} <= {}", r.rhs.display())?;
        }
        Ok(())
    }
}

/// A renaming of variables; unmapped names map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapMap(BTreeMap<String, String>);

impl SwapMap {
    /// Directed entries, which must form an involution.
    pub fn from_entries<A: AsRef<str>, B: AsRef<str>>(entries: &[(A, B)]) -> Self {
        SwapMap(entries.iter().map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string())).collect())
    }

    /// Transpositions, inserted in both directions.
    pub fn pairs(pairs: &[(&str, &str)]) -> Self {
        let mut m = BTreeMap::new();
        for (a, b) in pairs {
            m.insert(a.to_string(), b.to_string());
            m.insert(b.to_string(), a.to_string());
        }
        SwapMap(m)
    }

    pub fn get<'a>(&'a self, v: &'a str) -> &'a str {
        self.0.get(v).map(String::as_str).unwrap_or(v)
    }

    fn permutation<S: Scalar>(&self, sys: &ConstraintSystem<S>) -> Result<Vec<usize>> {
        for (a, b) in &self.0 {
            sys.index_of(a)?;
            sys.index_of(b)?;
            if self.get(b) != a {
                return Err(Error::NotInvolution(a.clone()));
            }
        }
        sys.vars.iter().map(|v| sys.index_of(self.get(&v.0))).collect()
    }
}

/// `sys` together with every row renamed through `swap`, without duplicates.
pub fn symmetric_closure<S: Scalar>(sys: &ConstraintSystem<S>, swap: &SwapMap) -> Result<ConstraintSystem<S>> {
    let mut out = sys.clone();
    out.rows.clear();
    let mirrored = sys.renamed(swap)?;
    for r in sys.rows.iter().chain(&mirrored.rows) {
        if !out.rows.contains(r) {
            out.rows.push(r.clone());
        }
    }
    Ok(out)
}
