//! Closed points of the projective line over `F_q`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{ArithError, Result};
use crate::fq::Fq;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// A finite place; the polynomial must be monic irreducible.
    pub fn finite(p: Poly) -> Result<Place> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(ArithError::InvalidArgument(format!("{p} is not monic irreducible")));
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0) as u32,
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// Size of the residue field.
    pub fn residue_order(&self, field: &Fq) -> u64 {
        (field.order() as u64).pow(self.degree())
    }

    /// Accepts `infinity`, `inf`, `∞` or a monic irreducible polynomial in `t`.
    pub fn parse(field: &Fq, s: &str) -> Result<Place> {
        match s.trim() {
            "infinity" | "inf" | "∞" => Ok(Place::Infinity),
            other => Place::finite(Poly::parse(field, other)?),
        }
    }

    /// Valuation of a nonzero polynomial at this place.
    pub fn valuation_of(&self, f: &Poly) -> i64 {
        match self {
            Place::Finite(p) => f.valuation_at(p) as i64,
            Place::Infinity => -(f.degree().expect("nonzero polynomial") as i64),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Infinity first, then finite places by degree and coefficients.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        }
    }
}

/// Infinity followed by every finite place of degree at most `max_degree`.
pub fn places_up_to(field: &Fq, max_degree: u32) -> Result<Vec<Place>> {
    if max_degree == 0 {
        return Err(ArithError::InvalidArgument("max_degree must be >= 1".into()));
    }
    let mut out = vec![Place::Infinity];
    for m in 1..=max_degree as usize {
        out.extend(Poly::monic_irreducibles(field, m).into_iter().map(Place::Finite));
    }
    Ok(out)
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `m` over `F_q`: `(1/m) sum_{k | m} mu(k) q^{m/k}`.
pub fn necklace_count(q: u64, m: u32) -> u64 {
    let m64 = m as u64;
    let total: i128 = (1..=m64)
        .filter(|k| m64 % k == 0)
        .map(|k| mobius(k) as i128 * (q as i128).pow((m64 / k) as u32))
        .sum();
    (total / m64 as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_places_over_f2() {
        let f = Fq::prime(2).unwrap();
        let pl: Vec<String> = places_up_to(&f, 1).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(pl, ["infinity", "t", "t+1"]);
    }

    #[test]
    fn necklace_small_values() {
        assert_eq!(necklace_count(2, 1), 2);
        assert_eq!(necklace_count(2, 2), 1);
        assert_eq!(necklace_count(2, 4), 3);
        assert_eq!(necklace_count(3, 2), 3);
    }

    #[test]
    fn parse_rejects_reducible() {
        let f = Fq::prime(2).unwrap();
        assert!(Place::parse(&f, "t^2+1").is_err());
        assert_eq!(Place::parse(&f, "infinity").unwrap(), Place::Infinity);
    }
}
