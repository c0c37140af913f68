//! Level divisors, scalar idele classes and the triviality oracle.
//!
//! Only ideles with scalar unit components are materialized; these are the
//! central ones, which is all that order computations need.

use std::collections::BTreeMap;

use hol_arith::{Place, Poly, Q};
use serde::{Deserialize, Serialize};

use crate::descriptor::{parse_place, OrderDescriptor};
use crate::error::{GlobalError, Result};

/// An effective divisor `sum n_x x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelDivisor {
    mult: BTreeMap<Place, u32>,
}

impl LevelDivisor {
    pub fn zero() -> Self {
        LevelDivisor::default()
    }

    pub fn new(mult: impl IntoIterator<Item = (Place, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (x, n) in mult {
            *m.entry(x).or_insert(0) += n;
        }
        m.retain(|_, n| *n > 0);
        LevelDivisor { mult: m }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }
    pub fn mult(&self, x: &Place) -> u32 {
        self.mult.get(x).copied().unwrap_or(0)
    }
    pub fn contains(&self, x: &Place) -> bool {
        self.mult(x) > 0
    }
    pub fn places(&self) -> impl Iterator<Item = (&Place, &u32)> {
        self.mult.iter()
    }
    pub fn divides(&self, o: &LevelDivisor) -> bool {
        self.mult.iter().all(|(x, n)| o.mult(x) >= *n)
    }

    pub fn from_json(o: &OrderDescriptor, j: &LevelJson) -> Result<Self> {
        let mut out = Vec::new();
        for p in &j.places {
            let x = match &p.kind {
                Some(k) => parse_place(o.field(), k, p.poly.as_deref())?,
                None => {
                    let s = p.poly.as_deref().ok_or_else(|| GlobalError::InvalidArgument("level entry without poly".into()))?;
                    Place::parse(o.field(), s)?
                }
            };
            out.push((x, p.n));
        }
        Ok(LevelDivisor::new(out))
    }
}

/// Serialized level: `{"places": [{"poly": "t", "n": 1}]}`; `"kind": "infinity"` or
/// `"poly": "infinity"` name the place at infinity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    #[serde(default)]
    pub places: Vec<LevelPlaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPlaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    pub n: u32,
}

/// Local parameter at a place: the monic irreducible, or `t` standing for `1/t` at infinity.
fn local_parameter(o: &OrderDescriptor, x: &Place) -> Poly {
    match x {
        Place::Finite(p) => p.clone(),
        Place::Infinity => Poly::t(o.field()),
    }
}

fn modulus(o: &OrderDescriptor, x: &Place, n: u32) -> Poly {
    local_parameter(o, x).pow(n as u64)
}

/// An idele with scalar unit components: valuations in `(1/e_x) Z` and, at
/// level places, a unit of `O_x / p_x^n` written as a polynomial in the local
/// parameter (missing entries mean 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Idele {
    pub vals: BTreeMap<Place, Q>,
    pub units: BTreeMap<Place, Poly>,
}

impl Idele {
    pub fn one() -> Self {
        Idele::default()
    }

    pub fn valuation(x: &Place, v: Q) -> Self {
        let mut i = Idele::one();
        if v != Q::from_integer(0) {
            i.vals.insert(x.clone(), v);
        }
        i
    }

    pub fn degree(&self) -> Q {
        self.vals.iter().map(|(x, v)| *v * Q::from_integer(x.degree() as i64)).sum()
    }

    pub fn is_unit_free(&self) -> bool {
        self.units.is_empty()
    }

    /// Product of two ideles, with unit components reduced modulo the level.
    pub fn mul(&self, o_: &Idele, ord: &OrderDescriptor, level: &LevelDivisor) -> Idele {
        let mut vals = self.vals.clone();
        for (x, v) in &o_.vals {
            *vals.entry(x.clone()).or_insert_with(|| Q::from_integer(0)) += *v;
        }
        vals.retain(|_, v| *v != Q::from_integer(0));
        let mut units = BTreeMap::new();
        for (x, n) in level.places() {
            let m = modulus(ord, x, *n);
            let one = Poly::one(ord.field());
            let a = self.units.get(x).unwrap_or(&one);
            let b = o_.units.get(x).unwrap_or(&one);
            let c = a.mul_mod(b, &m);
            if c != one {
                units.insert(x.clone(), c);
            }
        }
        Idele { vals, units }
    }

    pub fn inv(&self, ord: &OrderDescriptor, level: &LevelDivisor) -> Result<Idele> {
        let vals = self.vals.iter().map(|(x, v)| (x.clone(), -*v)).collect();
        let mut units = BTreeMap::new();
        for (x, u) in &self.units {
            let m = modulus(ord, x, level.mult(x).max(1));
            let i = u
                .inv_mod(&m)
                .ok_or_else(|| GlobalError::InvalidArgument(format!("unit component at {x} is not invertible")))?;
            units.insert(x.clone(), i);
        }
        Ok(Idele { vals, units })
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64, ord: &OrderDescriptor, level: &LevelDivisor) -> Result<Idele> {
        let mut base = if n < 0 { self.inv(ord, level)? } else { self.clone() };
        let mut acc = Idele::one();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, ord, level);
            }
            base = base.mul(&base, ord, level);
            k >>= 1;
        }
        Ok(acc)
    }
}

/// Unit part of `c * prod P_y^{v_y}` at `x`, modulo the `n`-th power of the local parameter.
fn unit_part(o: &OrderDescriptor, c: u32, exps: &BTreeMap<Poly, i64>, x: &Place, n: u32) -> Option<Poly> {
    let m = modulus(o, x, n);
    let mut acc = Poly::constant(o.field(), c).rem(&m);
    for (p, &v) in exps {
        if matches!(x, Place::Finite(q) if q == p) {
            continue;
        }
        let local = match x {
            Place::Finite(_) => p.clone(),
            // P(t) = t^{deg P} rec(P)(1/t)
            Place::Infinity => p.reciprocal(),
        };
        let f = if v >= 0 { local.pow_mod(v as u64, &m) } else { local.inv_mod(&m)?.pow_mod((-v) as u64, &m) };
        acc = acc.mul_mod(&f, &m);
    }
    Some(acc)
}

/// Whether `a` lies in `U_I F^*`. Valuations must be integral of total degree
/// 0, which pins down `f` up to a scalar; all `q - 1` scalars are then tested
/// against the unit congruences at the level places.
pub fn idele_trivial(o: &OrderDescriptor, level: &LevelDivisor, a: &Idele) -> Result<bool> {
    for (x, v) in &a.vals {
        if !(*v * Q::from_integer(o.e(x) as i64)).is_integer() {
            return Err(GlobalError::InvalidArgument(format!("valuation {v} at {x} not in (1/e_x)Z")));
        }
    }
    if a.vals.values().any(|v| !v.is_integer()) || a.degree() != Q::from_integer(0) {
        return Ok(false);
    }
    let exps: BTreeMap<Poly, i64> = a
        .vals
        .iter()
        .filter_map(|(x, v)| match x {
            Place::Finite(p) => Some((p.clone(), v.to_integer())),
            Place::Infinity => None,
        })
        .collect();
    if level.is_zero() {
        return Ok(true);
    }
    let f = o.field();
    'scalar: for c in 1..f.order() {
        for (x, &n) in level.places() {
            let m = modulus(o, x, n);
            let Some(u) = unit_part(o, c, &exps, x, n) else { continue 'scalar };
            let target = a.units.get(x).cloned().unwrap_or_else(|| Poly::one(f)).rem(&m);
            if u != target {
                continue 'scalar;
            }
        }
        return Ok(true);
    }
    Ok(false)
}
