//! Achievable-rate constraint systems for the linear deterministic channel,
//! one per cooperation regime, and their exact sum-rate optimum.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ld_capacity::{
    classify_regime, condition14, n_prime_c_oriented, non_cooperative_min, oriented, u1, Levels, NPrimeC, Regime,
    RegimeTag,
};
use crate::ld_model::LdParams;
use crate::rate_region::{max_sum_rate, ConstraintSystem, Rational, Scalar, SwapMap};

pub const RATE_VARS: [&str; 6] = ["rV1", "rV2", "rU1", "rU2", "rZ1", "rZ2"];
pub const PRECODED_VARS: [&str; 6] = ["rV1", "rV2", "rS1", "rS2", "rZ1", "rZ2"];
pub const REGIME3_VARS: [&str; 7] = ["rV1", "rV2", "rU1", "rU2", "rZ1", "rZ2", "rS1"];

/// Exchanges the subscripts 1 and 2 of the variables present in `vars`.
pub fn user_swap(vars: &[&str]) -> SwapMap {
    let pairs: Vec<(&str, &str)> = [("rV1", "rV2"), ("rU1", "rU2"), ("rZ1", "rZ2"), ("rS1", "rS2")]
        .into_iter()
        .filter(|(a, b)| vars.contains(a) && vars.contains(b))
        .collect();
    SwapMap::pairs(&pairs)
}

#[derive(Debug, Clone, Serialize)]
pub struct LdSchemeInstance {
    pub regime: Regime,
    /// Cooperative system. In regime III it is stated for the relabeled
    /// users when `regime.swap_applied` is set.
    #[serde(serialize_with = "ser_system")]
    pub system: ConstraintSystem<Rational>,
    /// No-cooperation system, built in regimes I and II.
    #[serde(serialize_with = "ser_opt_system")]
    pub fallback: Option<ConstraintSystem<Rational>>,
    pub n_prime_c: Option<NPrimeC>,
    /// Cooperation level the cooperative system is evaluated at.
    pub effective_nc: i64,
    pub aux_note: &'static str,
}

fn ser_system<S: serde::Serializer>(sys: &ConstraintSystem<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    sys.to_json().serialize(s)
}

fn ser_opt_system<S: serde::Serializer>(
    sys: &Option<ConstraintSystem<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    sys.as_ref().map(ConstraintSystem::to_json).serialize(s)
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Builds `rows(l) ∪ rename(rows(swap(l)))`: the user-1 inequalities plus
/// their counterparts with subscripts 1 and 2 exchanged.
fn with_mirror(
    vars: &[&str],
    l: &Levels<i64>,
    rows: impl Fn(&mut ConstraintSystem<Rational>, &Levels<i64>) -> Result<()>,
) -> Result<ConstraintSystem<Rational>> {
    let mut own = ConstraintSystem::new(vars)?;
    rows(&mut own, l)?;
    let mut other = ConstraintSystem::new(vars)?;
    rows(&mut other, &l.swapped())?;
    own.extend_rows(&other.renamed(&user_swap(vars))?)?;
    Ok(own)
}

fn groups(sys: &mut ConstraintSystem<Rational>, vars: &[&str]) -> Result<()> {
    let (r1, r2): (Vec<&str>, Vec<&str>) = vars.iter().partition(|v| v.ends_with('1'));
    sys.set_groups(&r1, &r2)
}

/// Cooperative-public, public and private layering at cooperation level `nc`.
pub fn regime1_system(l: &Levels<i64>) -> Result<ConstraintSystem<Rational>> {
    let mut sys = with_mirror(&RATE_VARS, l, |s, l| {
        s.add_bound(&["rV1"], q(l.nc))?;
        s.add_bound(&["rZ1"], q((l.n13 - l.n14).max(0)))?;
        s.add_bound(&["rU1", "rZ1"], q(l.n13 - l.nc))?;
        s.add_bound(&["rU2", "rZ1"], q((l.n13 - l.n14).max(l.n23 - l.nc)))?;
        s.add_bound(&["rU1", "rU2", "rZ1"], q((l.n13 - l.nc).max(l.n23 - l.nc)))?;
        s.add_bound(&["rV1", "rV2", "rU1", "rU2", "rZ1"], q(l.n13.max(l.n23)))
    })?;
    groups(&mut sys, &RATE_VARS)?;
    Ok(sys)
}

/// Public/private split without cooperation; the V variables are constant.
pub fn no_cooperation_system(l: &Levels<i64>) -> Result<ConstraintSystem<Rational>> {
    let mut sys = with_mirror(&RATE_VARS, l, |s, l| {
        s.add_bound(&["rV1"], q(0))?;
        s.add_bound(&["rZ1"], q((l.n13 - l.n14).max(0)))?;
        s.add_bound(&["rU1", "rZ1"], q(l.n13))?;
        s.add_bound(&["rU2", "rZ1"], q((l.n13 - l.n14).max(l.n23)))?;
        s.add_bound(&["rU1", "rU2", "rZ1"], q(l.n13.max(l.n23)))
    })?;
    groups(&mut sys, &RATE_VARS)?;
    Ok(sys)
}

/// Rank of the precoded cooperative-private signal at destination 3.
pub fn n_s1(l: &Levels<i64>) -> i64 {
    if l.n13 + l.n24 == l.n14 + l.n23 {
        (l.n23 - l.n24).max(0)
    } else if l.n24 >= l.n14 {
        l.n13.max(l.n23 - (l.n24 - l.n14))
    } else {
        l.n23.max(l.n13 - (l.n14 - l.n24))
    }
}

/// Regime III construction on oriented levels (`n13 <= nc <= n24`) with
/// effective cooperation `npc` for the public message of user 2.
pub fn regime3_system(l: &Levels<i64>, npc: i64) -> Result<ConstraintSystem<Rational>> {
    let mut s = ConstraintSystem::new(&REGIME3_VARS)?;
    let z1 = (l.n13 - l.n14).max(0);
    let z2 = (l.n24 - l.n23).max(0);
    let ns = n_s1(l);
    s.add_bound(&["rU1"], q(0))?;
    s.add_bound(&["rS1"], q((l.nc - l.n13.max(l.n14)).max(0)))?;
    s.add_bound(&["rV1", "rU1", "rZ1", "rS1"], q(l.nc))?;
    s.add_bound(&["rV2"], q(npc))?;
    s.add_bound(&["rZ1"], q(z1))?;
    s.add_bound(&["rU2", "rZ1"], q(z1.max(l.n23 - npc)))?;
    s.add_bound(&["rS1", "rZ1"], q(z1.max(ns)))?;
    s.add_bound(&["rU2", "rS1", "rZ1"], q(z1.max(l.n23 - npc).max(ns)))?;
    s.add_bound(&["rV1", "rV2", "rU2", "rS1", "rZ1"], q(l.n13.max(l.n23)))?;
    s.add_bound(&["rZ2"], q(z2))?;
    s.add_bound(&["rU2", "rZ2"], q(z2.max(l.n24 - npc)))?;
    s.add_bound(&["rV1", "rV2", "rU2", "rZ2"], q(l.n24.max(l.n14)))?;
    groups(&mut s, &REGIME3_VARS)?;
    Ok(s)
}

/// Regime IV construction: both users carry precoded cooperative-private
/// messages.
pub fn regime4_system(l: &Levels<i64>) -> Result<ConstraintSystem<Rational>> {
    let mut sys = with_mirror(&PRECODED_VARS, l, |s, l| {
        let z1 = (l.n13 - l.n14).max(0);
        s.add_bound(&["rS1"], q((l.nc - l.n13.max(l.n14)).max(0)))?;
        s.add_bound(&["rV1", "rZ1", "rS1"], q(l.nc))?;
        s.add_bound(&["rZ1"], q(z1))?;
        s.add_bound(&["rS1", "rZ1"], q(z1.max(n_s1(l))))?;
        s.add_bound(&["rV1", "rV2", "rS1", "rZ1"], q(l.n13.max(l.n23)))
    })?;
    groups(&mut sys, &PRECODED_VARS)?;
    Ok(sys)
}

pub fn instantiate_ld_constraints(params: &LdParams) -> Result<LdSchemeInstance> {
    let l = Levels::from(params);
    let regime = classify_regime(params);
    let inst = match regime.tag {
        RegimeTag::I | RegimeTag::II => {
            let nc = if regime.tag == RegimeTag::I { l.nc } else { l.nmin() };
            LdSchemeInstance {
                regime,
                system: regime1_system(&l.with_nc(nc))?,
                fallback: Some(no_cooperation_system(&l)?),
                n_prime_c: None,
                effective_nc: nc,
                aux_note: "V cooperative-public, U public, Z private (superposition)",
            }
        }
        RegimeTag::III => {
            let o = oriented(&l, regime);
            let npc = n_prime_c_oriented(&o);
            LdSchemeInstance {
                regime,
                system: regime3_system(&o, npc.value)?,
                fallback: None,
                n_prime_c: Some(npc),
                effective_nc: l.nc,
                aux_note: if o.n24 >= o.n14 {
                    "U1 constant; S1 = (S~13, S_perp23) precoded to vanish at destination 4"
                } else {
                    "U1 constant; S1 = (S~23, S_perp23) precoded to vanish at destination 4"
                },
            }
        }
        RegimeTag::IV => LdSchemeInstance {
            regime,
            system: regime4_system(&l)?,
            fallback: None,
            n_prime_c: None,
            effective_nc: l.nc,
            aux_note: "U constant; S~/S_perp/S' precoding family for both users",
        },
    };
    Ok(inst)
}

fn integral(v: Rational) -> Result<i64> {
    if !v.is_integer() {
        return Err(Error::Precondition(format!("non-integral optimum {v}")));
    }
    v.to_integer().try_into().map_err(|_| Error::Precondition("optimum out of range".into()))
}

pub fn ld_achievable_sum_rate(params: &LdParams) -> Result<i64> {
    let inst = instantiate_ld_constraints(params)?;
    let mut best = max_sum_rate(&inst.system).into_optimum()?;
    if let Some(fb) = &inst.fallback {
        let alt = max_sum_rate(fb).into_optimum()?;
        if alt > best {
            best = alt;
        }
    }
    integral(best)
}

/// The explicit regime I rate assignment. Requires regime I, condition (14),
/// and `u1(nc) <= min(u2, u3, u4, u5)`.
pub fn ld_rate_choice_regime1(params: &LdParams) -> Result<BTreeMap<String, i64>> {
    let l = Levels::from(params);
    let regime = classify_regime(params);
    if regime.tag != RegimeTag::I {
        return Err(Error::WrongRegime { expected: "I", got: regime.tag.to_string() });
    }
    if !condition14(&l) {
        return Err(Error::Precondition("cooperation cannot improve on the no-cooperation optimum".into()));
    }
    if u1(&l) > non_cooperative_min(&l) {
        return Err(Error::Precondition(format!("u1 = {} exceeds min(u2..u5) = {}", u1(&l), non_cooperative_min(&l))));
    }
    let z1 = (l.n13 - l.n14).max(0);
    let z2 = (l.n24 - l.n23).max(0);
    let mut out = BTreeMap::new();
    out.insert("rZ1".to_string(), z1);
    out.insert("rZ2".to_string(), z2);
    out.insert("rV1".to_string(), l.nc);
    out.insert("rV2".to_string(), l.nc);
    out.insert("rU1".to_string(), ((l.n24 - l.n23).max(l.n14 - l.nc) - z2).max(0));
    out.insert("rU2".to_string(), ((l.n13 - l.n14).max(l.n23 - l.nc) - z1).max(0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ld_capacity::ld_sum_capacity;

    fn lp(a: [u32; 5]) -> LdParams {
        LdParams::from_array(a)
    }

    #[test]
    fn example_rates() {
        assert_eq!(ld_achievable_sum_rate(&lp([4, 2, 2, 4, 1])).unwrap(), 6);
        assert_eq!(ld_achievable_sum_rate(&lp([6, 3, 3, 4, 1])).unwrap(), 7);
        assert_eq!(ld_achievable_sum_rate(&lp([4, 3, 3, 4, 5])).unwrap(), 6);
    }

    #[test]
    fn regime1_rows_for_example1() {
        let inst = instantiate_ld_constraints(&lp([4, 2, 2, 4, 1])).unwrap();
        assert_eq!(inst.regime.tag, RegimeTag::I);
        let text = inst.system.to_string();
        for row in [
            "rV1 <= 1",
            "rZ1 <= 2",
            "rU1 + rZ1 <= 3",
            "rU2 + rZ1 <= 2",
            "rU1 + rU2 + rZ1 <= 3",
            "rV1 + rV2 + rU1 + rU2 + rZ1 <= 4",
            "rV2 <= 1",
            "rZ2 <= 2",
        ] {
            assert!(text.lines().any(|l| l == row), "missing `{row}` in\n{text}");
        }
        assert_eq!(inst.system.rows().len(), 12);
    }

    #[test]
    fn regime4_rows_for_example3() {
        let inst = instantiate_ld_constraints(&lp([4, 3, 3, 4, 5])).unwrap();
        assert_eq!(inst.regime.tag, RegimeTag::IV);
        assert_eq!(n_s1(&Levels::from(&lp([4, 3, 3, 4, 5]))), 4);
        let text = inst.system.to_string();
        assert!(text.lines().any(|l| l == "rS1 <= 1"));
        assert!(text.lines().any(|l| l == "rS1 + rZ1 <= 4"));
    }

    #[test]
    fn zero_channel() {
        let inst = instantiate_ld_constraints(&lp([0; 5])).unwrap();
        assert!(inst.system.rows().iter().all(|r| r.rhs == q(0)));
        assert_eq!(ld_achievable_sum_rate(&lp([0; 5])).unwrap(), 0);
    }

    #[test]
    fn rate_choice() {
        let r = ld_rate_choice_regime1(&lp([4, 2, 2, 4, 1])).unwrap();
        assert_eq!((r["rZ1"], r["rZ2"], r["rV1"], r["rV2"], r["rU1"], r["rU2"]), (2, 2, 1, 1, 0, 0));
        assert_eq!(r.values().sum::<i64>(), 6);
        assert!(ld_rate_choice_regime1(&lp([4, 3, 3, 4, 5])).is_err());
        assert!(ld_rate_choice_regime1(&lp([5, 3, 3, 5, 2])).is_err());
        let r = ld_rate_choice_regime1(&lp([5, 3, 3, 5, 1])).unwrap();
        assert_eq!(r.values().sum::<i64>(), 6);
        assert_eq!(ld_sum_capacity(&lp([5, 3, 3, 5, 1])), 6);
    }
}
