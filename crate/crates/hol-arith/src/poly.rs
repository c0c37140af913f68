//! Dense univariate polynomials in `t` over a finite field.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{ArithError, Result};
use crate::fq::{Elem, Fq};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Fq,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn new(field: &Fq, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Fq) -> Self {
        Poly { field: field.clone(), coeffs: vec![] }
    }

    pub fn constant(field: &Fq, c: Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &Fq) -> Self {
        Self::constant(field, 1)
    }

    /// The monomial `c t^k`.
    pub fn monomial(field: &Fq, c: Elem, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    pub fn t(field: &Fq) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Poly::new(f, v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(f);
        }
        let mut v = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.leading());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut quo = vec![0; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c == 0 {
                continue;
            }
            quo[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = f.sub(r[k - dd + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        (Poly::new(f, quo), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, u)` with `s*self + u*o = g` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = u0.sub(&qt.mul(&u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let c = f.inv(r0.leading());
        (r0.scale(c), s0.scale(c), u0.scale(c))
    }

    /// Inverse modulo `m`, if `self` is a unit there.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.field.eval(&self.coeffs, x)
    }

    /// `t^deg * self(1/t)`, the reversed coefficient list.
    pub fn reciprocal(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::new(&self.field, v)
    }

    /// Multiplicity of `p` as a factor of `self` (nonzero `self`).
    pub fn valuation_at(&self, p: &Poly) -> u32 {
        assert!(!self.is_zero());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (qt, r) = cur.divrem(p);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = qt;
        }
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.order() as u64;
        let x = Poly::t(&self.field);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(q, self);
            if self.gcd(&h.sub(&x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Iterates over all monic polynomials of the given degree, in code order of the lower coefficients.
    pub fn monics(field: &Fq, degree: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.order() as u64;
        let count = q.pow(degree as u32);
        (0..count).map(move |mut code| {
            let mut v = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                v.push((code % q) as Elem);
                code /= q;
            }
            v.push(1);
            Poly::new(field, v)
        })
    }

    pub fn monic_irreducibles(field: &Fq, degree: usize) -> Vec<Poly> {
        Self::monics(field, degree).filter(|p| p.is_irreducible()).collect()
    }

    /// Parses expressions such as `t^2+t+1`, `2t^3+1` or `3*t`; coefficients are element codes.
    pub fn parse(field: &Fq, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ArithError::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero(field);
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let bad = || ArithError::Parse(format!("bad term '{term}'"));
            let (coef_str, rest) = match body.find('t') {
                Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
                None => (body, None),
            };
            let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
            let coef: Elem = if coef_str.is_empty() {
                if rest.is_none() {
                    return Err(bad());
                }
                1
            } else {
                coef_str.parse().map_err(|_| bad())?
            };
            if coef >= field.order() {
                return Err(ArithError::Parse(format!("coefficient {coef} outside the field")));
            }
            let exp = match rest {
                None => 0,
                Some("") => 1,
                Some(r) => r.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
            };
            let c = if neg { field.neg(coef) } else { coef };
            acc = acc.add(&Poly::monomial(field, c, exp));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}
