//! Rationals and rationals modulo the integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{ArithError, Result};

pub type Q = Rational64;

/// Parses `a`, `a/b` or `-a/b`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || ArithError::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// An element of `Q/Z`, stored as `n/d` with `0 <= n < d` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatModZ {
    num: i64,
    den: i64,
}

impl RatModZ {
    pub fn zero() -> Self {
        RatModZ { num: 0, den: 1 }
    }

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(ArithError::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::from_rational(Q::new(num, den)))
    }

    pub fn from_rational(x: Q) -> Self {
        let fl = x.floor();
        let r = x - fl;
        RatModZ { num: *r.numer(), den: *r.denom() }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }
    pub fn denominator(&self) -> i64 {
        self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The representative in `[0, 1)`.
    pub fn to_rational(&self) -> Q {
        Q::new(self.num, self.den)
    }

    /// Whether `den` kills this class.
    pub fn killed_by(&self, n: i64) -> bool {
        n.is_multiple_of(&self.den)
    }
}

impl Add for RatModZ {
    type Output = RatModZ;
    fn add(self, o: RatModZ) -> RatModZ {
        RatModZ::from_rational(self.to_rational() + o.to_rational())
    }
}

impl Neg for RatModZ {
    type Output = RatModZ;
    fn neg(self) -> RatModZ {
        RatModZ::from_rational(-self.to_rational())
    }
}

impl Sub for RatModZ {
    type Output = RatModZ;
    fn sub(self, o: RatModZ) -> RatModZ {
        self + (-o)
    }
}

impl fmt::Display for RatModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for RatModZ {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(RatModZ::from_rational)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_mod_one() {
        let a: RatModZ = "3/2".parse().unwrap();
        assert_eq!(a.to_string(), "1/2");
        let b: RatModZ = "-1/3".parse().unwrap();
        assert_eq!(b.to_string(), "2/3");
        assert!((a + a).is_zero());
        assert!(RatModZ::new(1, 0).is_err());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&parse_rational("-4/6").unwrap()), "-2/3");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
    }
}
