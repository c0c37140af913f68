//! Invertible Frobenius bimodules of a given slope: the existence criterion,
//! the group `W(A, B, I, D)`, its Frobenius element and the resulting torsor.

use std::collections::BTreeMap;

use hol_arith::ratmodz::{format_rational, parse_rational};
use hol_arith::{Exec, Place, Q};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::descriptor::{numeric_invariants, parse_place, OrderDescriptor};
use crate::error::{GlobalError, Result};
use crate::idele::{idele_trivial, Idele, LevelDivisor};
use crate::level::level_kernel_order;
use crate::pic::pic_group;

/// `D = sum m_x x` with rational coefficients summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeDivisor {
    coeffs: BTreeMap<Place, Q>,
}

impl SlopeDivisor {
    pub fn new(o: &OrderDescriptor, coeffs: impl IntoIterator<Item = (Place, Q)>) -> Result<Self> {
        let mut map: BTreeMap<Place, Q> = BTreeMap::new();
        for (x, m) in coeffs {
            *map.entry(x).or_insert_with(|| Q::from_integer(0)) += m;
        }
        map.retain(|_, m| *m != Q::from_integer(0));
        if map.is_empty() {
            return Err(GlobalError::InvalidArgument("slope divisor is zero".into()));
        }
        if map.values().copied().sum::<Q>() != Q::from_integer(0) {
            return Err(GlobalError::InvalidArgument("slope coefficients must sum to 0".into()));
        }
        for (x, m) in &map {
            if !(*m * Q::from_integer(o.e(x) as i64)).is_integer() {
                return Err(GlobalError::InvalidArgument(format!("slope {m} at {x} not in (1/e_x)Z")));
            }
        }
        Ok(SlopeDivisor { coeffs: map })
    }

    pub fn coeffs(&self) -> &BTreeMap<Place, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &Place) -> Q {
        self.coeffs.get(x).copied().unwrap_or_else(|| Q::from_integer(0))
    }

    pub fn from_json(o: &OrderDescriptor, j: &SlopeJson) -> Result<Self> {
        let mut out = Vec::new();
        for p in &j.places {
            out.push((parse_place(o.field(), &p.kind, p.poly.as_deref())?, parse_rational(&p.m)?));
        }
        Self::new(o, out)
    }
}

/// Serialized slope: `{"places": [{"kind": "infinity", "m": "1/2"}, {"kind": "finite", "poly": "t", "m": "-1/2"}]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeJson {
    pub places: Vec<SlopePlaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopePlaceJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    pub m: String,
}

fn comparable(a: &OrderDescriptor, b: &OrderDescriptor) -> Result<()> {
    if a.q() != b.q() || a.d() != b.d() {
        return Err(GlobalError::NotComparable("q and d must agree".into()));
    }
    if numeric_invariants(a).bad != numeric_invariants(b).bad {
        return Err(GlobalError::NotComparable("bad divisors differ".into()));
    }
    Ok(())
}

/// Whether `inv_x(B) = inv_x(A) + m_x` modulo `Z` at every place.
pub fn se_exists(a: &OrderDescriptor, b: &OrderDescriptor, d: &SlopeDivisor) -> Result<bool> {
    comparable(a, b)?;
    let mut places: Vec<Place> = a.support();
    places.extend(b.support());
    places.extend(d.coeffs().keys().cloned());
    Ok(places.iter().all(|x| b.inv(x) == a.inv(x) + hol_arith::RatModZ::from_rational(d.coeff(x))))
}

/// One adjoined generator `theta_x` with `k * theta_x = xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaGen {
    pub place: Place,
    /// `deg(theta_x) = -slope`.
    pub slope: Q,
    pub k: u32,
    pub xi: Idele,
}

/// Idele classes of level `I` with the generators `theta_x` adjoined.
/// Only central elements are represented: `sum a_x theta_x + g` with `g` a scalar idele.
#[derive(Clone, Debug)]
pub struct ThetaGroup {
    order: OrderDescriptor,
    level: LevelDivisor,
    gens: Vec<ThetaGen>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaElem {
    pub theta: Vec<i64>,
    pub idele: Idele,
}

impl ThetaGroup {
    /// At a place outside the level `deg(x) theta_x` has valuation `-m_x` at `x`;
    /// inside it `e_x deg(x) theta_x` is the uniformizer power `-m_x e_x`.
    pub fn new(o: &OrderDescriptor, level: &LevelDivisor, slopes: &[(Place, Q)]) -> Result<Self> {
        let gens = slopes
            .iter()
            .map(|(x, m)| {
                if level.contains(x) {
                    let v = -*m * Q::from_integer(o.e(x) as i64);
                    if !v.is_integer() {
                        return Err(GlobalError::InvalidArgument(format!("slope {m} at {x} not in (1/e_x)Z")));
                    }
                    Ok(ThetaGen { place: x.clone(), slope: *m, k: o.e(x) * x.degree(), xi: Idele::valuation(x, v) })
                } else {
                    Ok(ThetaGen { place: x.clone(), slope: *m, k: x.degree(), xi: Idele::valuation(x, -*m) })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ThetaGroup { order: o.clone(), level: level.clone(), gens })
    }

    pub fn gens(&self) -> &[ThetaGen] {
        &self.gens
    }

    pub fn index_of(&self, x: &Place) -> Option<usize> {
        self.gens.iter().position(|g| &g.place == x)
    }

    pub fn identity(&self) -> ThetaElem {
        ThetaElem { theta: vec![0; self.gens.len()], idele: Idele::one() }
    }

    pub fn theta(&self, coeffs: &[i64]) -> ThetaElem {
        ThetaElem { theta: coeffs.to_vec(), idele: Idele::one() }
    }

    pub fn degree(&self, x: &ThetaElem) -> Q {
        let t: Q = x.theta.iter().zip(&self.gens).map(|(&a, g)| -Q::from_integer(a) * g.slope).sum();
        t + x.idele.degree()
    }

    pub fn add(&self, x: &ThetaElem, y: &ThetaElem) -> ThetaElem {
        ThetaElem {
            theta: x.theta.iter().zip(&y.theta).map(|(a, b)| a + b).collect(),
            idele: x.idele.mul(&y.idele, &self.order, &self.level),
        }
    }

    pub fn neg(&self, x: &ThetaElem) -> Result<ThetaElem> {
        Ok(ThetaElem { theta: x.theta.iter().map(|a| -a).collect(), idele: x.idele.inv(&self.order, &self.level)? })
    }

    pub fn scale(&self, x: &ThetaElem, n: i64) -> Result<ThetaElem> {
        Ok(ThetaElem { theta: x.theta.iter().map(|a| a * n).collect(), idele: x.idele.pow(n, &self.order, &self.level)? })
    }

    /// Reduces each theta coefficient into `[0, k_x)`, moving multiples into the idele.
    pub fn normalize(&self, x: &ThetaElem) -> Result<ThetaElem> {
        let mut out = ThetaElem { theta: x.theta.clone(), idele: x.idele.clone() };
        for (a, g) in out.theta.iter_mut().zip(&self.gens) {
            let q = a.div_euclid(g.k as i64);
            *a -= q * g.k as i64;
            out.idele = out.idele.mul(&g.xi.pow(q, &self.order, &self.level)?, &self.order, &self.level);
        }
        Ok(out)
    }

    pub fn is_trivial(&self, x: &ThetaElem) -> Result<bool> {
        let n = self.normalize(x)?;
        Ok(n.theta.iter().all(|&a| a == 0) && idele_trivial(&self.order, &self.level, &n.idele)?)
    }

    pub fn equal(&self, x: &ThetaElem, y: &ThetaElem) -> Result<bool> {
        self.is_trivial(&self.add(x, &self.neg(y)?))
    }

    /// Least `N > 0` with `N x` trivial, searched up to `bound`.
    pub fn order_of(&self, x: &ThetaElem, bound: u128) -> Result<u128> {
        let step = x
            .theta
            .iter()
            .zip(&self.gens)
            .fold(1i64, |acc, (&a, g)| acc.lcm(&(g.k as i64 / (g.k as i64).gcd(&a))));
        let mut n = step as u128;
        while n <= bound {
            if self.is_trivial(&self.scale(x, n as i64)?)? {
                return Ok(n);
            }
            n += step as u128;
        }
        Err(GlobalError::Internal(format!("no trivial multiple up to {bound}")))
    }
}

/// Status of the degree-zero part of the torsor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeZeroStatus {
    Empty,
    NonemptyByCriterion,
    Undetermined,
}

/// `W(A, B, I, D)` as order data together with its presentation.
#[derive(Clone, Debug)]
pub struct WFrobGroup {
    pub group: ThetaGroup,
    pub kernel_order: u128,
    pub pic0_order: u128,
    pub delta: u32,
    /// Image of `W` in `prod Z/k_x`, listed in lexicographic order.
    pub image: Vec<Vec<u64>>,
    pub order: u128,
    pub degree_zero: DegreeZeroStatus,
}

impl WFrobGroup {
    /// `Theta_D = sum_x theta_x`, of degree `-sum m_x = 0`.
    pub fn theta_d(&self) -> ThetaElem {
        self.group.theta(&vec![1; self.group.gens().len()])
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.group.gens().iter().map(|g| g.k as u64).collect()
    }

    pub fn theta_d_order(&self) -> Result<u128> {
        self.group.order_of(&self.theta_d(), self.order)
    }
}

/// All `a` in `prod Z/k_x` with `sum a_x m_x` in `(1/delta) Z`, in lexicographic order.
fn theta_image(moduli: &[u64], slopes: &[Q], delta: u32) -> Vec<Vec<u64>> {
    let total: u64 = moduli.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut a = vec![0; moduli.len()];
            for (slot, &k) in a.iter_mut().zip(moduli).rev() {
                *slot = idx % k;
                idx /= k;
            }
            a
        })
        .filter(|a| {
            let s: Q = a.iter().zip(slopes).map(|(&x, &m)| Q::from_integer(x as i64) * m).sum();
            (s * Q::from_integer(delta as i64)).is_integer()
        })
        .collect()
}

pub fn w_frob_group(a: &OrderDescriptor, b: &OrderDescriptor, level: &LevelDivisor, d: &SlopeDivisor, exec: Exec) -> Result<WFrobGroup> {
    if !se_exists(a, b, d)? {
        return Err(GlobalError::EmptyTorsor("invariants of B differ from those of A shifted by D".into()));
    }
    let slopes: Vec<(Place, Q)> = d.coeffs().iter().map(|(x, m)| (x.clone(), *m)).collect();
    let group = ThetaGroup::new(a, level, &slopes)?;
    let (kernel_order, _) = level_kernel_order(a, None, level, exec)?;
    let pic = pic_group(a)?;
    let pic0_order = pic.pic0.order().expect("finite");
    let moduli: Vec<u64> = group.gens().iter().map(|g| g.k as u64).collect();
    let ms: Vec<Q> = slopes.iter().map(|(_, m)| *m).collect();
    let image = theta_image(&moduli, &ms, pic.delta);
    let order = kernel_order * pic0_order * image.len() as u128;
    let span = rational_span(&ms);
    let degree_zero = if span == Q::new(1, a.d() as i64) { DegreeZeroStatus::NonemptyByCriterion } else { DegreeZeroStatus::Undetermined };
    Ok(WFrobGroup { group, kernel_order, pic0_order, delta: pic.delta, image, order, degree_zero })
}

fn rational_span(values: &[Q]) -> Q {
    crate::pic::rational_span_generator(values)
}

/// The torsor as finite data: `SE(F_{q^n})` has `|W|` points when
/// `ord(Theta_D)` divides `n` and none otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorDescriptor {
    pub nonempty: bool,
    pub w_order: u128,
    pub theta_order: u128,
    pub orbit_count: u128,
    /// `[k(x)_* : F_q]` for each place of the slope divisor.
    pub residue_degrees: Vec<(Place, u32)>,
    pub degree_zero: DegreeZeroStatus,
}

impl TorsorDescriptor {
    pub fn count(&self, n: u64) -> u128 {
        if n > 0 && (n as u128) % self.theta_order == 0 {
            self.w_order
        } else {
            0
        }
    }

    pub fn counts(&self, max_n: u64) -> Vec<(u64, u128)> {
        (1..=max_n).map(|n| (n, self.count(n))).collect()
    }

    /// Closed points of degree exactly `n`.
    pub fn closed_points(&self, n: u64) -> u128 {
        if n as u128 == self.theta_order {
            self.orbit_count
        } else {
            0
        }
    }
}

pub fn torsor(a: &OrderDescriptor, b: &OrderDescriptor, level: &LevelDivisor, d: &SlopeDivisor, exec: Exec) -> Result<TorsorDescriptor> {
    let w = w_frob_group(a, b, level, d, exec)?;
    let theta_order = w.theta_d_order()?;
    if w.order % theta_order != 0 {
        return Err(GlobalError::Internal("ord(Theta_D) does not divide |W|".into()));
    }
    Ok(TorsorDescriptor {
        nonempty: true,
        w_order: w.order,
        theta_order,
        orbit_count: w.order / theta_order,
        residue_degrees: w.group.gens().iter().map(|g| (g.place.clone(), g.k)).collect(),
        degree_zero: w.degree_zero,
    })
}

/// Pole pairs reachable from a base point, as classes in `Z/k_pole x Z/k_other`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePairs {
    pub k_pole: u64,
    pub k_other: u64,
    pub pairs: Vec<(u64, u64)>,
    /// Every class at the first pole is matched by some class at the second.
    pub surjective: bool,
}

pub fn admissible_pairs(w: &WFrobGroup, pole: &Place, other: &Place) -> Result<AdmissiblePairs> {
    let (i, j) = match (w.group.index_of(pole), w.group.index_of(other)) {
        (Some(i), Some(j)) if i != j => (i, j),
        _ => return Err(GlobalError::InvalidArgument("both poles must lie in the slope divisor".into())),
    };
    let mut pairs: Vec<(u64, u64)> = w.image.iter().map(|a| (a[i], a[j])).collect();
    pairs.sort();
    pairs.dedup();
    let k_pole = w.group.gens()[i].k as u64;
    let k_other = w.group.gens()[j].k as u64;
    let surjective = (0..k_pole).all(|l| pairs.iter().any(|p| p.0 == l));
    Ok(AdmissiblePairs { k_pole, k_other, pairs, surjective })
}

/// Moving the pole from `pole` to `new_pole`: the order `B`, the degree `m`
/// of the new residue field, and `w = m theta - xi_p` in `W(A, I, pole)`.
#[derive(Clone, Debug)]
pub struct TwistDatum {
    pub b: OrderDescriptor,
    pub m: u32,
    pub xi_p: Idele,
    pub w: ThetaElem,
    pub w_order: u128,
    pub w_group_order: u128,
    /// `m Theta_D = m theta_pole + xi_p` holds in `W(A, B, I, D)`.
    pub identity_holds: bool,
    pub statement: String,
}

pub fn twist_datum(a: &OrderDescriptor, pole: &Place, new_pole: &Place, level: &LevelDivisor, exec: Exec) -> Result<TwistDatum> {
    if pole == new_pole {
        return Err(GlobalError::InvalidArgument("the new pole must differ from the pole".into()));
    }
    let d = a.d() as i64;
    for x in [pole, new_pole] {
        if a.e(x) != a.d() {
            return Err(GlobalError::Assumption(format!("e at {x} is {}, not d = {d}", a.e(x))));
        }
    }
    let step = hol_arith::RatModZ::new(1, d)?;
    let mut inv = a.invariant_map();
    inv.insert(pole.clone(), a.inv(pole) + step);
    inv.insert(new_pole.clone(), a.inv(new_pole) - step);
    let b = a.with_invariants(inv)?;
    let p_in_level = level.contains(new_pole);
    let m = if p_in_level { a.d() * new_pole.degree() } else { new_pole.degree() };
    let xi_p = if p_in_level {
        Idele::valuation(new_pole, Q::from_integer(1))
    } else {
        Idele::valuation(new_pole, Q::new(1, d))
    };

    // W(A, I, pole): one generator of degree 1/d
    let wg = ThetaGroup::new(a, level, &[(pole.clone(), Q::new(-1, d))])?;
    let w = ThetaElem { theta: vec![m as i64], idele: xi_p.inv(a, level)? };
    if wg.degree(&w) != Q::from_integer(0) {
        return Err(GlobalError::Internal("w has nonzero degree".into()));
    }
    let w_group_order = crate::level::w_level_group(a, pole, level, exec)?.order;
    let w_order = wg.order_of(&w, w_group_order)?;

    let slope = SlopeDivisor::new(a, [(pole.clone(), Q::new(1, d)), (new_pole.clone(), Q::new(-1, d))])?;
    let fg = w_frob_group(a, &b, level, &slope, exec)?;
    let g = &fg.group;
    let (ip, iq) = (g.index_of(pole).expect("pole"), g.index_of(new_pole).expect("new pole"));
    if g.gens()[iq].k != m {
        return Err(GlobalError::Internal("residue degree at the new pole differs from m".into()));
    }
    let lhs = g.scale(&fg.theta_d(), m as i64)?;
    let mut theta = vec![0; g.gens().len()];
    theta[ip] = m as i64;
    let rhs = ThetaElem { theta, idele: g.gens()[iq].xi.clone() };
    let identity_holds = g.equal(&lhs, &rhs)?;
    let statement = format!(
        "El^{new_pole}_B = (El^{pole}_A x F_q-bar) / <w ⊗ Frob^{m}>, w = {m} theta - xi_p of order {w_order}",
    );
    Ok(TwistDatum { b, m, xi_p, w, w_order, w_group_order, identity_holds, statement })
}

/// Human-readable form of a slope coefficient map.
pub fn format_slope(d: &SlopeDivisor) -> String {
    d.coeffs()
        .iter()
        .map(|(x, m)| format!("{}({x})", format_rational(m)))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::fixtures::*;

    fn split() -> OrderDescriptor {
        order(2, 2, &[("infinity", "0", 2), ("t", "0", 2)])
    }

    fn slope(o: &OrderDescriptor, at_inf: Q) -> SlopeDivisor {
        SlopeDivisor::new(o, [(Place::Infinity, at_inf), (place(o.field(), "t"), -at_inf)]).unwrap()
    }

    #[test]
    fn existence_criterion() {
        let (a, b) = (quaternion(), split());
        assert!(se_exists(&a, &b, &slope(&a, Q::new(1, 2))).unwrap());
        assert!(se_exists(&a, &b, &slope(&a, Q::new(-1, 2))).unwrap());
        assert!(!se_exists(&a, &a, &slope(&a, Q::new(1, 2))).unwrap());
        assert!(matches!(se_exists(&a, &drinfeld(), &slope(&a, Q::new(1, 2))), Err(GlobalError::NotComparable(_))));
    }

    #[test]
    fn quaternion_torsor() {
        let (a, b) = (quaternion(), split());
        let t = torsor(&a, &b, &LevelDivisor::zero(), &slope(&a, Q::new(1, 2)), Exec::Parallel).unwrap();
        assert_eq!((t.w_order, t.theta_order), (2, 2));
        assert_eq!(t.counts(4).iter().map(|c| c.1).collect::<Vec<_>>(), vec![0, 2, 0, 2]);
        assert_eq!(t.closed_points(2), 1);
        let level = LevelDivisor::new([(place(a.field(), "t+1"), 1)]);
        let t = torsor(&a, &b, &level, &slope(&a, Q::new(1, 2)), Exec::Parallel).unwrap();
        assert_eq!(t.counts(4).iter().map(|c| c.1).collect::<Vec<_>>(), vec![0, 12, 0, 12]);
    }

    #[test]
    fn empty_torsor_is_reported() {
        let a = quaternion();
        let r = w_frob_group(&a, &a, &LevelDivisor::zero(), &slope(&a, Q::new(1, 2)), Exec::Sequential);
        assert!(matches!(r, Err(GlobalError::EmptyTorsor(_))));
    }

    #[test]
    fn pairs_cover_every_pole_class() {
        let (a, b) = (quaternion(), split());
        let w = w_frob_group(&a, &b, &LevelDivisor::zero(), &slope(&a, Q::new(1, 2)), Exec::Sequential).unwrap();
        let p = admissible_pairs(&w, &Place::Infinity, &place(a.field(), "t")).unwrap();
        assert_eq!(p.pairs, vec![(0, 0)]);
        assert!(p.surjective);
    }

    #[test]
    fn twist_of_the_quaternion_order() {
        let a = quaternion();
        let t = place(a.field(), "t");
        let tw = twist_datum(&a, &Place::Infinity, &t, &LevelDivisor::zero(), Exec::Parallel).unwrap();
        assert_eq!(tw.b, split());
        assert_eq!((tw.m, tw.w_order, tw.w_group_order), (1, 2, 2));
        assert!(tw.identity_holds);
        assert!(tw.statement.contains("w ⊗ Frob^1"));
        let back = twist_datum(&tw.b, &t, &Place::Infinity, &LevelDivisor::zero(), Exec::Parallel).unwrap();
        assert_eq!(back.b, a);
    }

    #[test]
    fn twist_to_a_degree_two_pole() {
        let a = order(2, 2, &[("infinity", "1/2", 2), ("t^2+t+1", "1/2", 2)]);
        let p = place(a.field(), "t^2+t+1");
        let tw = twist_datum(&a, &Place::Infinity, &p, &LevelDivisor::zero(), Exec::Parallel).unwrap();
        assert_eq!(tw.m, 2);
        assert!(tw.identity_holds);
        assert_eq!(tw.w.theta, vec![2]);
    }
}
