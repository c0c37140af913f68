//! Central simple algebras over `F_q(t)` given by local invariants, and
//! locally principal orders given by their local indices.

use std::collections::BTreeMap;

use hol_arith::ratmodz::{format_rational, parse_rational};
use hol_arith::{Fq, Place, RatModZ, Q};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{GlobalError, Result};

/// A central simple algebra of degree `d`, recorded by its nonzero invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsaDescriptor {
    field: Fq,
    d: u32,
    inv: BTreeMap<Place, RatModZ>,
}

impl CsaDescriptor {
    /// Builds the descriptor without checking reciprocity; see [`validate_csa`].
    pub fn new(field: &Fq, d: u32, inv: impl IntoIterator<Item = (Place, RatModZ)>) -> Result<Self> {
        if d == 0 {
            return Err(GlobalError::InvalidDescriptor("d must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (x, a) in inv {
            if map.insert(x.clone(), a).is_some() {
                return Err(GlobalError::InvalidDescriptor(format!("place {x} listed twice")));
            }
        }
        map.retain(|_, a| !a.is_zero());
        Ok(CsaDescriptor { field: field.clone(), d, inv: map })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.order()
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn inv(&self, x: &Place) -> RatModZ {
        self.inv.get(x).copied().unwrap_or_else(RatModZ::zero)
    }
    /// Places with nonzero invariant, in place order.
    pub fn ramified(&self) -> impl Iterator<Item = (&Place, &RatModZ)> {
        self.inv.iter()
    }
    pub fn invariant_sum(&self) -> RatModZ {
        self.inv.values().fold(RatModZ::zero(), |s, &a| s + a)
    }
}

/// Accepts iff the invariants sum to zero and each denominator divides `d`.
pub fn validate_csa(c: &CsaDescriptor) -> Result<()> {
    let s = c.invariant_sum();
    if !s.is_zero() {
        return Err(GlobalError::BrauerSum(s.to_string()));
    }
    for (x, a) in c.ramified() {
        if !a.killed_by(c.d as i64) {
            return Err(GlobalError::Denominator { place: x.to_string(), d: c.d });
        }
    }
    Ok(())
}

/// A locally principal order in a central simple algebra: the algebra plus
/// the local index `e_x` at each place (1 where omitted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderDescriptor {
    csa: CsaDescriptor,
    e: BTreeMap<Place, u32>,
}

impl OrderDescriptor {
    /// Builds and validates: the algebra must pass [`validate_csa`] and every
    /// place must satisfy `h_x | e_x | d`.
    pub fn new(csa: CsaDescriptor, e: impl IntoIterator<Item = (Place, u32)>) -> Result<Self> {
        let o = Self::unchecked(csa, e)?;
        o.validate()?;
        Ok(o)
    }

    fn unchecked(csa: CsaDescriptor, e: impl IntoIterator<Item = (Place, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, k) in e {
            if k == 0 {
                return Err(GlobalError::InvalidDescriptor(format!("e = 0 at {x}")));
            }
            if map.insert(x.clone(), k).is_some() {
                return Err(GlobalError::InvalidDescriptor(format!("place {x} listed twice")));
            }
        }
        map.retain(|_, k| *k > 1);
        Ok(OrderDescriptor { csa, e: map })
    }

    pub fn validate(&self) -> Result<()> {
        validate_csa(&self.csa)?;
        let d = self.d();
        for x in self.support() {
            let (h, e) = (self.csa.inv(&x).denominator() as u32, self.e(&x));
            if e % h != 0 || d % e != 0 {
                return Err(GlobalError::InvalidDescriptor(format!(
                    "at {x} need h | e | d, got h = {h}, e = {e}, d = {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn csa(&self) -> &CsaDescriptor {
        &self.csa
    }
    pub fn field(&self) -> &Fq {
        self.csa.field()
    }
    pub fn q(&self) -> u32 {
        self.csa.q()
    }
    pub fn d(&self) -> u32 {
        self.csa.d()
    }
    pub fn inv(&self, x: &Place) -> RatModZ {
        self.csa.inv(x)
    }
    pub fn e(&self, x: &Place) -> u32 {
        self.e.get(x).copied().unwrap_or(1)
    }

    /// Places with `e_x > 1`, in place order.
    pub fn bad_places(&self) -> Vec<Place> {
        self.e.keys().cloned().collect()
    }

    /// Places with a nonzero invariant or `e_x > 1`.
    pub fn support(&self) -> Vec<Place> {
        let mut s: Vec<Place> = self.e.keys().chain(self.csa.inv.keys()).cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    /// The same order with the invariants replaced.
    pub fn with_invariants(&self, inv: BTreeMap<Place, RatModZ>) -> Result<Self> {
        let csa = CsaDescriptor::new(self.field(), self.d(), inv)?;
        Self::new(csa, self.e.clone())
    }

    pub fn invariant_map(&self) -> BTreeMap<Place, RatModZ> {
        self.csa.inv.clone()
    }

    pub fn from_json(j: &OrderJson) -> Result<Self> {
        let (field, d, places) = parse_places(j)?;
        let csa = CsaDescriptor::new(&field, d, places.iter().map(|(x, a, _)| (x.clone(), *a)))?;
        Self::unchecked(csa, places.into_iter().map(|(x, _, e)| (x, e)))
    }

    pub fn to_json(&self) -> OrderJson {
        let places = self
            .support()
            .into_iter()
            .map(|x| PlaceJson {
                kind: if x.is_infinity() { "infinity" } else { "finite" }.into(),
                poly: (!x.is_infinity()).then(|| x.to_string()),
                inv: Some(self.inv(&x).to_string()),
                e: Some(self.e(&x)),
            })
            .collect();
        OrderJson { q: self.q(), d: self.d(), places }
    }
}

/// Serialized form: `{"q", "d", "places": [{"kind", "poly", "inv", "e"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderJson {
    pub q: u32,
    pub d: u32,
    #[serde(default)]
    pub places: Vec<PlaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
}

/// Reads a place from its JSON entry.
pub fn parse_place(field: &Fq, kind: &str, poly: Option<&str>) -> Result<Place> {
    match (kind, poly) {
        ("infinity", _) => Ok(Place::Infinity),
        ("finite", Some(p)) => Ok(Place::parse(field, p)?),
        ("finite", None) => Err(GlobalError::InvalidDescriptor("finite place without poly".into())),
        (k, _) => Err(GlobalError::InvalidDescriptor(format!("unknown place kind '{k}'"))),
    }
}

fn parse_places(j: &OrderJson) -> Result<(Fq, u32, Vec<(Place, RatModZ, u32)>)> {
    let field = Fq::of_order(j.q)?;
    let mut out = Vec::new();
    for p in &j.places {
        let x = parse_place(&field, &p.kind, p.poly.as_deref())?;
        let inv = match &p.inv {
            Some(s) => RatModZ::from_rational(parse_rational(s)?),
            None => RatModZ::zero(),
        };
        out.push((x, inv, p.e.unwrap_or(1)));
    }
    Ok((field, j.d, out))
}

/// The numerical data attached to an order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericInvariants {
    /// Coefficients `e_x - 1` of the divisor of bad places.
    pub bad: BTreeMap<Place, u32>,
    /// Least common multiple of the local indices.
    pub e: u32,
    /// Least common multiple of the numerators of `e_x / deg(x)`.
    pub delta: u32,
    /// `-(d^2/2) sum (1 - 1/e_x) deg(x)`.
    pub degree: Q,
}

impl NumericInvariants {
    pub fn degree_string(&self) -> String {
        format_rational(&self.degree)
    }
}

pub fn numeric_invariants(o: &OrderDescriptor) -> NumericInvariants {
    let mut bad = BTreeMap::new();
    let (mut e, mut delta) = (1u32, 1u32);
    let mut sum = Q::from_integer(0);
    for x in o.bad_places() {
        let ex = o.e(&x);
        bad.insert(x.clone(), ex - 1);
        e = e.lcm(&ex);
        delta = delta.lcm(&(*Q::new(ex as i64, x.degree() as i64).numer() as u32));
        sum += (Q::from_integer(1) - Q::new(1, ex as i64)) * Q::from_integer(x.degree() as i64);
    }
    let d2 = (o.d() as i64).pow(2);
    NumericInvariants { bad, e, delta, degree: -Q::new(d2, 2) * sum }
}

/// Outcome of comparing two orders up to Morita equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaReport {
    pub equivalent: bool,
    /// Whether an invertible bimodule of degree 0 exists.
    pub strongly: bool,
    /// Number of strong classes in the Morita class, `e / delta`.
    pub strong_classes: u32,
    /// The degrees of invertible bimodules form `offset + (1/delta) Z`.
    pub degree_offset: Q,
    pub degree_step: Q,
}

/// Equivalent iff the invariants and bad divisors agree. The degrees of the
/// bimodules form a coset of `(1/delta) Z`, found from any divisor matching
/// the invariants; the zero divisor does whenever the orders are equivalent.
pub fn morita_equivalent(o1: &OrderDescriptor, o2: &OrderDescriptor) -> Result<MoritaReport> {
    if o1.q() != o2.q() || o1.d() != o2.d() {
        return Err(GlobalError::NotComparable("q and d must agree".into()));
    }
    let n1 = numeric_invariants(o1);
    let n2 = numeric_invariants(o2);
    let equivalent = o1.invariant_map() == o2.invariant_map() && n1.bad == n2.bad;
    let step = Q::new(1, n1.delta as i64);
    Ok(MoritaReport {
        equivalent,
        strongly: equivalent,
        strong_classes: n1.e / n1.delta,
        degree_offset: Q::from_integer(0),
        degree_step: step,
    })
}

/// The cosets of `(1/delta) Z` inside `(1/e) Z`, as representatives in `[0, 1/delta)`.
pub fn strong_class_cosets(inv: &NumericInvariants) -> Vec<Q> {
    let step = Q::new(1, inv.delta as i64);
    let mut reps: Vec<Q> = Vec::new();
    for k in 0..inv.e as i64 {
        let x = Q::new(k, inv.e as i64);
        let r = x - (x / step).floor() * step;
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    reps
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn place(f: &Fq, s: &str) -> Place {
        Place::parse(f, s).unwrap()
    }

    /// `entries`: (place, invariant, e).
    pub fn order(q: u32, d: u32, entries: &[(&str, &str, u32)]) -> OrderDescriptor {
        let f = Fq::of_order(q).unwrap();
        let inv = entries.iter().map(|(x, a, _)| (place(&f, x), a.parse::<RatModZ>().unwrap()));
        let csa = CsaDescriptor::new(&f, d, inv).unwrap();
        OrderDescriptor::new(csa, entries.iter().map(|(x, _, e)| (place(&f, x), *e))).unwrap()
    }

    pub fn quaternion() -> OrderDescriptor {
        order(2, 2, &[("infinity", "1/2", 2), ("t", "1/2", 2)])
    }

    pub fn drinfeld() -> OrderDescriptor {
        order(2, 2, &[("infinity", "0", 2)])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn csa(entries: &[(&str, &str)]) -> CsaDescriptor {
        let f = Fq::prime(2).unwrap();
        CsaDescriptor::new(&f, 2, entries.iter().map(|(x, a)| (place(&f, x), a.parse().unwrap()))).unwrap()
    }

    #[test]
    fn reciprocity_and_denominators() {
        assert!(validate_csa(&csa(&[("infinity", "1/2"), ("t", "1/2")])).is_ok());
        assert!(matches!(validate_csa(&csa(&[("infinity", "1/2")])), Err(GlobalError::BrauerSum(_))));
        assert!(matches!(
            validate_csa(&csa(&[("infinity", "1/3"), ("t", "2/3")])),
            Err(GlobalError::Denominator { .. })
        ));
    }

    #[test]
    fn index_must_be_divisible_by_invariant_denominator() {
        let f = Fq::prime(2).unwrap();
        let c = csa(&[("infinity", "1/2"), ("t", "1/2")]);
        assert!(OrderDescriptor::new(c.clone(), [(place(&f, "t"), 2)]).is_err());
        assert!(OrderDescriptor::new(c, [(place(&f, "t"), 2), (Place::Infinity, 2)]).is_ok());
    }

    #[test]
    fn numeric_invariants_match_hand_values() {
        let n = numeric_invariants(&quaternion());
        assert_eq!((n.e, n.delta, n.degree), (2, 2, Q::from_integer(-2)));
        let n = numeric_invariants(&order(2, 2, &[("t^2+t+1", "0", 2)]));
        assert_eq!((n.e, n.delta, n.degree), (2, 1, Q::from_integer(-2)));
        let n = numeric_invariants(&order(3, 2, &[]));
        assert_eq!((n.e, n.delta, n.degree), (1, 1, Q::from_integer(0)));
    }

    #[test]
    fn morita_classes() {
        let a = quaternion();
        let r = morita_equivalent(&a, &a).unwrap();
        assert!(r.equivalent && r.strongly);
        assert_eq!(r.strong_classes, 1);
        let b = order(2, 2, &[("infinity", "1/2", 2), ("t", "1/2", 2), ("t+1", "0", 2)]);
        assert!(!morita_equivalent(&a, &b).unwrap().equivalent);
        let c = order(2, 2, &[("t^2+t+1", "0", 2)]);
        assert_eq!(strong_class_cosets(&numeric_invariants(&c)).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let a = quaternion();
        assert_eq!(OrderDescriptor::from_json(&a.to_json()).unwrap(), a);
    }
}
