//! Uncoded GF(p) schemes for three fixed channels: block transmission with
//! source-side exchange and backwards decoding at the destinations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ld_model::{ld_channel_step, FieldElement, LdParams, LdVector, Prime};

/// A message symbol. Sources are numbered 1 and 2; `Z(k, j)` is the
/// private symbol of source `k` at sub-level `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Symbol {
    V(u8),
    U(u8),
    Z(u8, u8),
    S(u8),
}

impl Symbol {
    pub fn source(self) -> u8 {
        match self {
            Symbol::V(k) | Symbol::U(k) | Symbol::Z(k, _) | Symbol::S(k) => k,
        }
    }
}

/// Per-slot symbols of one source, indexed by slot `0..=T+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceMessages {
    pub v: Vec<u32>,
    pub u: Vec<u32>,
    pub z: Vec<Vec<u32>>,
    pub s: Vec<u32>,
}

impl SourceMessages {
    fn zeros(horizon: usize, z_levels: usize) -> Self {
        let len = horizon + 2;
        SourceMessages { v: vec![0; len], u: vec![0; len], z: vec![vec![0; len]; z_levels], s: vec![0; len] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MessageStream {
    pub horizon: usize,
    pub p: Prime,
    pub sources: [SourceMessages; 2],
}

impl MessageStream {
    pub fn get(&self, sym: Symbol, t: usize) -> u32 {
        let src = &self.sources[sym.source() as usize - 1];
        match sym {
            Symbol::V(_) => src.v[t],
            Symbol::U(_) => src.u[t],
            Symbol::Z(_, j) => src.z[j as usize][t],
            Symbol::S(_) => src.s[t],
        }
    }

    fn fe(&self, v: u32) -> FieldElement {
        FieldElement::new(v, self.p)
    }
}

/// The three example channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Example {
    One,
    Two,
    Three,
}

impl Example {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Example::One),
            2 => Ok(Example::Two),
            3 => Ok(Example::Three),
            _ => Err(Error::InvalidArgument(format!("no example {i}"))),
        }
    }

    pub fn params(self, p: Prime) -> LdParams {
        let a = match self {
            Example::One => [4, 2, 2, 4, 1],
            Example::Two => [6, 3, 3, 4, 1],
            Example::Three => [4, 3, 3, 4, 5],
        };
        LdParams::from_array(a).with_prime(p)
    }

    fn z_levels(self, source: usize) -> usize {
        match (self, source) {
            (Example::One, _) => 2,
            (Example::Two, 0) => 3,
            (Example::Two, _) => 1,
            (Example::Three, _) => 1,
        }
    }

    fn check(self, horizon: usize, p: Prime) -> Result<()> {
        if horizon < 2 {
            return Err(Error::Precondition(format!("horizon T = {horizon} must be at least 2")));
        }
        if self == Example::Three && p.get() == 2 {
            return Err(Error::Precondition("example 3 needs a field of characteristic other than 2".into()));
        }
        Ok(())
    }

    /// Message-carrying symbols of `source` (1 or 2), as `(symbol, slot)`.
    pub fn payload(self, source: u8, horizon: usize) -> Vec<(Symbol, usize)> {
        let k = source;
        let zl = self.z_levels(k as usize - 1) as u8;
        let mut out = Vec::new();
        let zs = |out: &mut Vec<(Symbol, usize)>, slots: std::ops::RangeInclusive<usize>| {
            for t in slots {
                for j in 0..zl {
                    out.push((Symbol::Z(k, j), t));
                }
            }
        };
        match self {
            Example::One => {
                out.extend((1..=horizon).map(|t| (Symbol::V(k), t)));
                zs(&mut out, 1..=horizon - 1);
            }
            Example::Two => {
                out.extend((1..horizon).map(|t| (Symbol::V(k), t)));
                if k == 1 {
                    out.extend((1..horizon).map(|t| (Symbol::U(1), t)));
                }
                zs(&mut out, 1..=horizon - 1);
            }
            Example::Three => {
                out.extend((1..horizon).map(|t| (Symbol::V(k), t)));
                out.extend((2..=horizon).map(|t| (Symbol::S(k), t)));
                zs(&mut out, 1..=horizon);
            }
        }
        out
    }

    pub fn zero_messages(self, horizon: usize, p: Prime) -> MessageStream {
        MessageStream {
            horizon,
            p,
            sources: [
                SourceMessages::zeros(horizon, self.z_levels(0)),
                SourceMessages::zeros(horizon, self.z_levels(1)),
            ],
        }
    }

    /// Uniform i.i.d. symbols on the message-carrying slots, zero elsewhere.
    pub fn random_messages(self, horizon: usize, seed: u64, p: Prime) -> MessageStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = self.zero_messages(horizon, p);
        for k in 1..=2u8 {
            for (sym, t) in self.payload(k, horizon) {
                let v = rng.random_range(0..p.get());
                let src = &mut m.sources[k as usize - 1];
                match sym {
                    Symbol::V(_) => src.v[t] = v,
                    Symbol::U(_) => src.u[t] = v,
                    Symbol::Z(_, j) => src.z[j as usize][t] = v,
                    Symbol::S(_) => src.s[t] = v,
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Recovered {
    pub destination: u8,
    pub symbol: Symbol,
    pub slot: usize,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimTrace {
    pub example: Example,
    pub params: [u32; 5],
    pub p: u32,
    pub horizon: usize,
    #[serde(serialize_with = "ser_vectors")]
    pub x1: Vec<LdVector>,
    #[serde(serialize_with = "ser_vectors")]
    pub x2: Vec<LdVector>,
    #[serde(serialize_with = "ser_vectors")]
    pub y1: Vec<LdVector>,
    #[serde(serialize_with = "ser_vectors")]
    pub y2: Vec<LdVector>,
    #[serde(serialize_with = "ser_vectors")]
    pub y3: Vec<LdVector>,
    #[serde(serialize_with = "ser_vectors")]
    pub y4: Vec<LdVector>,
    pub recovered: Vec<Recovered>,
    pub error_count: usize,
    /// Correctly recovered own-message symbols at destinations 3 and 4.
    pub own_symbols: [usize; 2],
}

fn ser_vectors<S: serde::Serializer>(v: &[LdVector], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<&[u32]> = v.iter().map(LdVector::values).collect();
    raw.serialize(s)
}

impl SimTrace {
    /// Own-message symbols delivered per slot, summed over both users.
    pub fn sum_rate(&self) -> f64 {
        (self.own_symbols[0] + self.own_symbols[1]) as f64 / self.horizon as f64
    }

    /// Every received vector equals the channel applied to the transmitted
    /// pair.
    pub fn channel_consistent(&self) -> bool {
        let params = self.example.params(Prime::new(self.p).expect("trace prime"));
        (0..self.horizon).all(|t| match ld_channel_step(&self.x1[t], &self.x2[t], &params) {
            Ok(o) => o.y1 == self.y1[t] && o.y2 == self.y2[t] && o.y3 == self.y3[t] && o.y4 == self.y4[t],
            Err(_) => false,
        })
    }
}

/// Transmission of `source` (0 or 1) at slot `t` from its own messages and
/// what it heard over the cooperation link in slots `1..t`.
pub fn encode(ex: Example, m: &MessageStream, source: usize, t: usize, heard: &[LdVector]) -> LdVector {
    debug_assert_eq!(heard.len(), t - 1);
    let own = &m.sources[source];
    let f = |v: u32| m.fe(v);
    let n = ex.params(m.p).n();
    let mut x = LdVector::zeros(n, m.p);
    // Partner's cooperative-public symbols, unrolled from the running sums
    // v(s) + v(s-1) it sends on its top level.
    let top = match ex {
        Example::One => 4,
        Example::Two => 6,
        Example::Three => 1,
    };
    let mut partner_v = vec![f(0)];
    for y in heard {
        let prev = *partner_v.last().expect("non-empty");
        partner_v.push(y.level(top) - prev);
    }
    let pv = partner_v[t - 1];
    let v_sum = f(own.v[t]) + f(own.v[t - 1]);
    match ex {
        Example::One => {
            x.set_level(1, v_sum);
            x.set_level(2, pv);
            x.set_level(3, f(own.z[0][t]));
            x.set_level(4, f(own.z[1][t]));
        }
        Example::Two if source == 0 => {
            x.set_level(1, v_sum);
            x.set_level(2, f(own.u[t]) + pv);
            x.set_level(3, f(own.u[t]));
            x.set_level(4, f(own.z[0][t]));
            x.set_level(5, f(own.z[1][t]));
            x.set_level(6, f(own.z[2][t]));
        }
        Example::Two => {
            x.set_level(1, v_sum);
            x.set_level(2, pv);
            x.set_level(4, f(own.z[0][t]));
        }
        Example::Three => {
            // The partner's s(t) arrived on the lowest level one slot early.
            let partner_s = if t >= 2 { heard[t - 2].level(5) } else { f(0) };
            x.set_level(1, v_sum);
            x.set_level(2, pv);
            x.set_level(3, f(own.s[t]));
            x.set_level(4, f(own.z[0][t]) - partner_s);
            x.set_level(5, f(own.s[t + 1]));
        }
    }
    x
}

fn record(out: &mut Vec<Recovered>, destination: u8, symbol: Symbol, slot: usize, value: FieldElement) {
    out.push(Recovered { destination, symbol, slot, value: value.value() });
}

/// Backwards decoding at destination `3 + own` (own = 0 or 1).
fn decode(ex: Example, ys: &[LdVector], own: u8, p: Prime) -> Vec<Recovered> {
    let horizon = ys.len();
    let dest = 3 + own;
    let (me, other) = (own + 1, 2 - own);
    let y = |t: usize, level: usize| ys[t - 1].level(level);
    let zero = FieldElement::zero(p);
    let mut out = Vec::new();
    match ex {
        Example::One => {
            // y(t) = (v_me(t)+v_me(t-1), v_o(t-1), z_a + v_o(t)+v_o(t-1), z_b + v_me(t-1))
            let big_t = horizon;
            let mut v_me_prev = y(big_t, 4);
            let mut v_o_prev = y(big_t, 2);
            let mut v_me = y(big_t, 1) - v_me_prev;
            let mut v_o = y(big_t, 3) - v_o_prev;
            record(&mut out, dest, Symbol::V(me), big_t, v_me);
            record(&mut out, dest, Symbol::V(other), big_t, v_o);
            for t in (1..big_t).rev() {
                (v_me, v_o) = (v_me_prev, v_o_prev);
                record(&mut out, dest, Symbol::V(me), t, v_me);
                record(&mut out, dest, Symbol::V(other), t, v_o);
                v_me_prev = y(t, 1) - v_me;
                v_o_prev = y(t, 2);
                record(&mut out, dest, Symbol::Z(me, 0), t, y(t, 3) - v_o - v_o_prev);
                record(&mut out, dest, Symbol::Z(me, 1), t, y(t, 4) - v_me_prev);
            }
        }
        Example::Two if own == 0 => {
            // y3(t) = (v1+v1', u1+v2', u1, z1a+v2+v2', z1b+v1', z1c)
            let mut v1 = y(horizon, 1);
            let mut v2 = y(horizon, 2);
            for t in (1..horizon).rev() {
                record(&mut out, dest, Symbol::V(1), t, v1);
                record(&mut out, dest, Symbol::V(2), t, v2);
                let v1_prev = y(t, 1) - v1;
                let u1 = y(t, 3);
                let v2_prev = y(t, 2) - u1;
                record(&mut out, dest, Symbol::U(1), t, u1);
                record(&mut out, dest, Symbol::Z(1, 0), t, y(t, 4) - v2 - v2_prev);
                record(&mut out, dest, Symbol::Z(1, 1), t, y(t, 5) - v1_prev);
                record(&mut out, dest, Symbol::Z(1, 2), t, y(t, 6));
                (v1, v2) = (v1_prev, v2_prev);
            }
        }
        Example::Two => {
            // y4(t) = (0, 0, v2+v2', v1+2v1', u1+v2', u1+z2)
            let two = FieldElement::new(2, p);
            let half = two.inv();
            let mut v2 = y(horizon, 3);
            let mut v1 = half.map(|h| y(horizon, 4) * h);
            for t in (1..horizon).rev() {
                record(&mut out, dest, Symbol::V(2), t, v2);
                let v2_prev = y(t, 3) - v2;
                let u1 = y(t, 5) - v2_prev;
                record(&mut out, dest, Symbol::U(1), t, u1);
                record(&mut out, dest, Symbol::Z(2, 0), t, y(t, 6) - u1);
                match (half, v1) {
                    (Some(h), Some(cur)) => {
                        record(&mut out, dest, Symbol::V(1), t, cur);
                        v1 = Some((y(t, 4) - cur) * h);
                    }
                    // In characteristic 2 the level reads v1(t) directly.
                    _ => record(&mut out, dest, Symbol::V(1), t, y(t, 4)),
                }
                v2 = v2_prev;
            }
        }
        Example::Three => {
            // y(t) = (0, v_me+v_me', v_o + 2v_o', s_me + v_me', z_me)
            let half = FieldElement::new(2, p).inv().expect("odd characteristic");
            let mut v_me = zero;
            let mut v_o = zero;
            for t in (1..=horizon).rev() {
                if t < horizon {
                    record(&mut out, dest, Symbol::V(me), t, v_me);
                    record(&mut out, dest, Symbol::V(other), t, v_o);
                }
                let v_me_prev = y(t, 2) - v_me;
                let v_o_prev = (y(t, 3) - v_o) * half;
                if t >= 2 {
                    record(&mut out, dest, Symbol::S(me), t, y(t, 4) - v_me_prev);
                }
                record(&mut out, dest, Symbol::Z(me, 0), t, y(t, 5));
                (v_me, v_o) = (v_me_prev, v_o_prev);
            }
        }
    }
    out
}

/// Runs an example on explicit messages.
pub fn run_with_messages(ex: Example, m: &MessageStream) -> Result<SimTrace> {
    ex.check(m.horizon, m.p)?;
    let params = ex.params(m.p);
    let horizon = m.horizon;
    let mut tr = SimTrace {
        example: ex,
        params: params.as_array(),
        p: m.p.get(),
        horizon,
        x1: Vec::with_capacity(horizon),
        x2: Vec::with_capacity(horizon),
        y1: Vec::with_capacity(horizon),
        y2: Vec::with_capacity(horizon),
        y3: Vec::with_capacity(horizon),
        y4: Vec::with_capacity(horizon),
        recovered: Vec::new(),
        error_count: 0,
        own_symbols: [0, 0],
    };
    for t in 1..=horizon {
        let x1 = encode(ex, m, 0, t, &tr.y1);
        let x2 = encode(ex, m, 1, t, &tr.y2);
        let o = ld_channel_step(&x1, &x2, &params)?;
        tr.x1.push(x1);
        tr.x2.push(x2);
        tr.y1.push(o.y1);
        tr.y2.push(o.y2);
        tr.y3.push(o.y3);
        tr.y4.push(o.y4);
    }
    let mut recovered = decode(ex, &tr.y3, 0, m.p);
    recovered.extend(decode(ex, &tr.y4, 1, m.p));
    for (d, own) in [(3u8, 1u8), (4, 2)] {
        let payload = ex.payload(own, horizon);
        tr.own_symbols[(d - 3) as usize] = payload
            .iter()
            .filter(|(sym, t)| {
                recovered
                    .iter()
                    .any(|r| r.destination == d && r.symbol == *sym && r.slot == *t && r.value == m.get(*sym, *t))
            })
            .count();
    }
    tr.error_count = recovered.iter().filter(|r| r.value != m.get(r.symbol, r.slot)).count();
    tr.recovered = recovered;
    Ok(tr)
}

pub fn run_example(ex: Example, horizon: usize, seed: u64, p: Prime) -> Result<SimTrace> {
    ex.check(horizon, p)?;
    run_with_messages(ex, &ex.random_messages(horizon, seed, p))
}

pub fn run_example1(horizon: usize, seed: u64, p: Prime) -> Result<SimTrace> {
    run_example(Example::One, horizon, seed, p)
}

pub fn run_example2(horizon: usize, seed: u64, p: Prime) -> Result<SimTrace> {
    run_example(Example::Two, horizon, seed, p)
}

pub fn run_example3(horizon: usize, seed: u64, p: Prime) -> Result<SimTrace> {
    run_example(Example::Three, horizon, seed, p)
}

/// Re-derives every transmission from the source's own messages and its
/// received history up to the previous slot, and compares with the trace.
pub fn causality_audit(trace: &SimTrace, m: &MessageStream) -> Result<()> {
    for t in 1..=trace.horizon {
        for (source, (xs, heard)) in [(&trace.x1, &trace.y1), (&trace.x2, &trace.y2)].into_iter().enumerate() {
            let again = encode(trace.example, m, source, t, &heard[..t - 1]);
            if again != xs[t - 1] {
                return Err(Error::Precondition(format!(
                    "source {} at slot {t} used unavailable information",
                    source + 1
                )));
            }
        }
    }
    Ok(())
}
