//! Fractional divisors, the Picard group of an order and the group `W(A, pole)`.

use std::collections::BTreeMap;

use hol_arith::{FgAbelianGroup, Place, Q};
use num_integer::Integer;

use crate::descriptor::{numeric_invariants, OrderDescriptor};
use crate::error::{GlobalError, Result};

/// A divisor `sum n_x x` with `e_x n_x` integral.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivElem {
    coeffs: BTreeMap<Place, Q>,
}

impl DivElem {
    pub fn new(o: &OrderDescriptor, coeffs: impl IntoIterator<Item = (Place, Q)>) -> Result<Self> {
        let mut map: BTreeMap<Place, Q> = BTreeMap::new();
        for (x, n) in coeffs {
            *map.entry(x).or_insert_with(|| Q::from_integer(0)) += n;
        }
        map.retain(|_, n| *n != Q::from_integer(0));
        for (x, n) in &map {
            if !(*n * Q::from_integer(o.e(x) as i64)).is_integer() {
                return Err(GlobalError::InvalidArgument(format!("coefficient {n} at {x} not in (1/e_x)Z")));
            }
        }
        Ok(DivElem { coeffs: map })
    }

    pub fn coeffs(&self) -> &BTreeMap<Place, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &Place) -> Q {
        self.coeffs.get(x).copied().unwrap_or_else(|| Q::from_integer(0))
    }

    pub fn degree(&self) -> Q {
        self.coeffs.iter().map(|(x, n)| *n * Q::from_integer(x.degree() as i64)).sum()
    }

    pub fn add(&self, o: &DivElem) -> DivElem {
        let mut map = self.coeffs.clone();
        for (x, n) in &o.coeffs {
            *map.entry(x.clone()).or_insert_with(|| Q::from_integer(0)) += *n;
        }
        map.retain(|_, n| *n != Q::from_integer(0));
        DivElem { coeffs: map }
    }
}

/// Canonical form of a class in `Pic(A)`: fractional parts at bad places and the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicElem {
    pub frac: BTreeMap<Place, Q>,
    pub degree: Q,
}

impl PicElem {
    pub fn add(&self, o: &PicElem) -> PicElem {
        let mut frac = self.frac.clone();
        for (x, n) in &o.frac {
            let v = frac.entry(x.clone()).or_insert_with(|| Q::from_integer(0));
            *v = fract(*v + *n);
        }
        frac.retain(|_, n| *n != Q::from_integer(0));
        PicElem { frac, degree: self.degree + o.degree }
    }
}

fn fract(x: Q) -> Q {
    x - x.floor()
}

/// Over the projective line the principal divisors are the integral divisors
/// of degree 0, so a class is determined by fractional parts and degree.
pub fn pic_canonicalize(o: &OrderDescriptor, d: &DivElem) -> PicElem {
    let frac = o
        .bad_places()
        .into_iter()
        .map(|x| {
            let f = fract(d.coeff(&x));
            (x, f)
        })
        .filter(|(_, f)| *f != Q::from_integer(0))
        .collect();
    PicElem { frac, degree: d.degree() }
}

/// `Pic(A)` presented on generators `(1/e_y) y` for the bad places `y`
/// followed by the class of a degree-one place.
#[derive(Clone, Debug)]
pub struct PicGroup {
    pub bad: Vec<Place>,
    pub group: FgAbelianGroup,
    /// Degree of each generator.
    pub degrees: Vec<Q>,
    pub delta: u32,
    pub pic0: FgAbelianGroup,
    /// Generators of `Pic_0` in the coordinates of `group`.
    pub pic0_gens: Vec<Vec<i64>>,
}

impl PicGroup {
    pub fn ngens(&self) -> usize {
        self.bad.len() + 1
    }

    /// Coordinates of the class of an arbitrary divisor.
    pub fn class_of(&self, o: &OrderDescriptor, d: &DivElem) -> Vec<i64> {
        let mut v = vec![0i64; self.ngens()];
        let w = self.bad.len();
        for (x, n) in d.coeffs() {
            match self.bad.iter().position(|y| y == x) {
                Some(i) => v[i] += (*n * Q::from_integer(o.e(x) as i64)).to_integer(),
                None => v[w] += (*n * Q::from_integer(x.degree() as i64)).to_integer(),
            }
        }
        v
    }

    pub fn degree(&self, v: &[i64]) -> Q {
        v.iter().zip(&self.degrees).map(|(&a, &b)| Q::from_integer(a) * b).sum()
    }
}

/// Positive generator of the subgroup of `Q` spanned by `values`.
pub fn rational_span_generator(values: &[Q]) -> Q {
    let l = values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
    let g = values.iter().fold(0i64, |acc, v| acc.gcd(&(*v.numer() * (l / *v.denom()))));
    Q::new(g, l)
}

pub fn pic_group(o: &OrderDescriptor) -> Result<PicGroup> {
    let bad = o.bad_places();
    let n = bad.len();
    let rels = bad
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let mut r = vec![0i64; n + 1];
            r[i] = o.e(y) as i64;
            r[n] = -(y.degree() as i64);
            r
        })
        .collect();
    let group = FgAbelianGroup::new(n + 1, rels)?;
    let mut degrees: Vec<Q> = bad.iter().map(|y| Q::new(y.degree() as i64, o.e(y) as i64)).collect();
    degrees.push(Q::from_integer(1));
    let delta = numeric_invariants(o).delta;
    if rational_span_generator(&degrees) != Q::new(1, delta as i64) {
        return Err(GlobalError::Internal("degree image differs from (1/delta)Z".into()));
    }
    let (pic0, pic0_gens) = group.kernel_of_rational_map(&degrees)?;
    if pic0.order().is_none() {
        return Err(GlobalError::Internal("Pic_0 is infinite".into()));
    }
    Ok(PicGroup { bad, group, degrees, delta, pic0, pic0_gens })
}

/// `W(A, pole)`: the kernel of the degree on `Pic(A)[theta]`, where
/// `deg(pole) theta` is the class of `(1/d) pole`.
#[derive(Clone, Debug)]
pub struct WGroup {
    pub pic: PicGroup,
    pub pole: Place,
    /// `Pic(A)[theta]`, with `theta` as the last generator.
    pub extended: FgAbelianGroup,
    pub degrees: Vec<Q>,
    pub w: FgAbelianGroup,
    /// Generators of `W` in the coordinates of `extended`.
    pub w_gens: Vec<Vec<i64>>,
    /// `[k(pole) : F_q]`, the order of the Galois target.
    pub galois_degree: u32,
    /// Order of the image of `W` in `Z/deg(pole)`, found from the generators.
    pub galois_image_order: u64,
    /// `delta deg(pole) / d`.
    pub predicted_image_order: Q,
    pub galois_kernel_order: u128,
}

impl WGroup {
    pub fn order(&self) -> u128 {
        self.w.order().expect("W is finite")
    }

    pub fn theta_index(&self) -> usize {
        self.pic.ngens()
    }

    /// Coordinates in `extended` of `theta_mult * theta + [D]`.
    pub fn element(&self, o: &OrderDescriptor, theta_mult: i64, d: &DivElem) -> Vec<i64> {
        let mut v = self.pic.class_of(o, d);
        v.push(theta_mult);
        v
    }

    pub fn degree(&self, v: &[i64]) -> Q {
        v.iter().zip(&self.degrees).map(|(&a, &b)| Q::from_integer(a) * b).sum()
    }

    /// Image in `Z/deg(pole)` of an element of `W`.
    pub fn galois_image(&self, v: &[i64]) -> u64 {
        v[self.theta_index()].rem_euclid(self.galois_degree as i64) as u64
    }
}

/// Checks `e_pole = d`, the standing assumption for `W(A, pole)`.
pub fn require_full_index(o: &OrderDescriptor, pole: &Place) -> Result<()> {
    if o.e(pole) != o.d() {
        return Err(GlobalError::Assumption(format!("e at {pole} is {}, not d = {}", o.e(pole), o.d())));
    }
    Ok(())
}

pub fn w_group(o: &OrderDescriptor, pole: &Place) -> Result<WGroup> {
    require_full_index(o, pole)?;
    let pic = pic_group(o)?;
    let g = pic.ngens();
    let d = o.d() as i64;
    let deg = pole.degree() as i64;
    let mut rels: Vec<Vec<i64>> = pic
        .group
        .relations()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(0);
            r
        })
        .collect();
    // deg(pole) theta = class of (1/d) pole
    let one_over_d = DivElem::new(o, [(pole.clone(), Q::new(1, d))])?;
    let mut rel: Vec<i64> = pic.class_of(o, &one_over_d).iter().map(|c| -c).collect();
    rel.push(deg);
    rels.push(rel);
    let extended = FgAbelianGroup::new(g + 1, rels)?;
    let mut degrees = pic.degrees.clone();
    degrees.push(Q::new(1, d));
    let (w, w_gens) = extended.kernel_of_rational_map(&degrees)?;
    let theta_coords: Vec<i64> = w_gens.iter().map(|v| v[g]).collect();
    let galois_image_order = (deg / theta_coords.iter().fold(deg, |a, b| a.gcd(b))) as u64;
    let order = w.order().ok_or_else(|| GlobalError::Internal("W is infinite".into()))?;
    let galois_kernel_order = order / galois_image_order as u128;
    if galois_kernel_order != pic.pic0.order().unwrap_or(0) {
        return Err(GlobalError::Internal("kernel of the Galois map differs from Pic_0".into()));
    }
    let predicted_image_order = Q::new(pic.delta as i64 * deg, d);
    Ok(WGroup {
        pic,
        pole: pole.clone(),
        extended,
        degrees,
        w,
        w_gens,
        galois_degree: deg as u32,
        galois_image_order,
        predicted_image_order,
        galois_kernel_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::fixtures::*;

    fn div(o: &OrderDescriptor, entries: &[(&str, i64, i64)]) -> DivElem {
        let f = o.field().clone();
        DivElem::new(o, entries.iter().map(|(x, a, b)| (place(&f, x), Q::new(*a, *b)))).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let a = quaternion();
        let principal = pic_canonicalize(&a, &div(&a, &[("t", 1, 1), ("infinity", -1, 1)]));
        assert!(principal.frac.is_empty() && principal.degree == Q::from_integer(0));
        let half = pic_canonicalize(&a, &div(&a, &[("t", 1, 2)]));
        assert_eq!(half.degree, Q::new(1, 2));
        assert_eq!(half.frac.values().copied().collect::<Vec<_>>(), vec![Q::new(1, 2)]);
        let more = pic_canonicalize(&a, &div(&a, &[("t", 1, 2), ("t^2+t+1", 3, 1)]));
        assert_eq!(more.degree, Q::new(13, 2));
        assert_eq!(more.frac, half.frac);
        assert!(DivElem::new(&a, [(place(a.field(), "t+1"), Q::new(1, 2))]).is_err());
    }

    #[test]
    fn picard_groups() {
        let p = pic_group(&quaternion()).unwrap();
        assert_eq!(p.pic0.invariant_factors(), vec![2]);
        assert_eq!(p.group.free_rank(), 1);
        let gen = p.class_of(&quaternion(), &div(&quaternion(), &[("t", 1, 2), ("infinity", -1, 2)]));
        assert_eq!(p.degree(&gen), Q::from_integer(0));
        assert_eq!(p.group.element_order(&gen), Some(2));
        assert!(pic_group(&drinfeld()).unwrap().pic0.is_trivial());
        let plain = order(3, 2, &[]);
        let p = pic_group(&plain).unwrap();
        assert!(p.pic0.is_trivial() && p.group.free_rank() == 1 && p.delta == 1);
    }

    #[test]
    fn w_groups() {
        let w = w_group(&quaternion(), &Place::Infinity).unwrap();
        assert_eq!(w.order(), 2);
        assert_eq!(w.galois_image_order, 1);
        assert_eq!(Q::from_integer(w.galois_image_order as i64), w.predicted_image_order);
        assert_eq!(w_group(&drinfeld(), &Place::Infinity).unwrap().order(), 1);
        let wide = order(2, 2, &[("t^2+t+1", "1/2", 2), ("t", "1/2", 2)]);
        let pole = place(wide.field(), "t^2+t+1");
        let w = w_group(&wide, &pole).unwrap();
        assert_eq!(w.galois_image_order, 2);
        assert_eq!(w.predicted_image_order, Q::from_integer(2));
        let mut hit = vec![false; 2];
        for v in w.w.elements().unwrap() {
            let x: Vec<i64> = (0..w.extended.ngens())
                .map(|i| w.w_gens.iter().zip(&v).map(|(g, c)| g[i] * c).sum())
                .collect();
            hit[w.galois_image(&x) as usize] = true;
        }
        assert!(hit.iter().all(|&h| h), "Galois map is surjective");
    }

    #[test]
    fn full_index_is_required() {
        let a = order(2, 2, &[("t", "0", 2)]);
        assert!(matches!(w_group(&a, &Place::Infinity), Err(GlobalError::Assumption(_))));
    }
}
