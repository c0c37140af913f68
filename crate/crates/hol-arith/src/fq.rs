//! Finite fields `F_{p^r}` with `p <= 13` and at most 4096 elements.
//!
//! Elements are `u32` codes: the code `sum c_i p^i` stands for the residue
//! class of `sum c_i x^i` modulo the defining polynomial. Multiplication goes
//! through exp/log tables built from a primitive element, which doubles as the
//! irreducibility proof for the modulus.

use std::fmt;
use std::sync::Arc;

use crate::error::{ArithError, Result};

pub type Elem = u32;

pub const MAX_ORDER: u32 = 4096;
pub const MAX_CHAR: u32 = 13;

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field, cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.r > 1 {
            write!(f, "[mod {:?}]", self.0.modulus)?;
        }
        Ok(())
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn digits_of(mut a: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(a % p);
        a /= p;
    }
    out
}

fn code_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Schoolbook product of two residues modulo a monic polynomial over `F_p`.
fn raw_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let r = modulus.len() - 1;
    let da = digits_of(a, p, r as u32);
    let db = digits_of(b, p, r as u32);
    let mut prod = vec![0u32; 2 * r];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (r..2 * r).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate().take(r) {
            let idx = k - r + j;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
        prod[k] = 0;
    }
    code_of(&prod[..r], p)
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue")
}

/// Monic gcd of two polynomials over `F_p` (coefficients low first).
fn gcd_mod_p(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod_p(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let off = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[off + j] = (a[off + j] + (p - c) * bj % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Ben-Or test over the prime field, working in `F_p[x]/(f)` with code arithmetic.
fn irreducible_over_prime(p: u32, modulus: &[u32]) -> bool {
    let r = modulus.len() - 1;
    if r == 1 {
        return true;
    }
    let x = p; // code of the class of x
    let mut h = x;
    for _ in 1..=r / 2 {
        // h <- h^p
        let mut acc = 1u32;
        for _ in 0..p {
            acc = raw_mul(acc, h, p, modulus);
        }
        h = acc;
        let mut diff = digits_of(h, p, r as u32);
        diff[1] = (diff[1] + p - 1) % p;
        if gcd_mod_p(diff, modulus.to_vec(), p).len() != 1 {
            return false;
        }
    }
    true
}

/// Looks for a primitive element; `None` exactly when the quotient ring is not a field.
fn primitive_tables(p: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let r = (modulus.len() - 1) as u32;
    let q = p.pow(r);
    if q == 2 {
        return Some((vec![1], vec![0, 0]));
    }
    'cand: for g in 2..q {
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut x = 1u32;
        for _ in 0..q - 1 {
            exp.push(x);
            x = raw_mul(x, g, p, modulus);
            if x == 0 {
                return None;
            }
            if x == 1 && exp.len() < (q - 1) as usize {
                continue 'cand;
            }
        }
        if x != 1 {
            continue;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        return Some((exp, log));
    }
    None
}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_modulus(p, vec![0, 1])
    }

    /// `F_{p^r}` defined by the first monic irreducible of degree `r` in code order.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(ArithError::InvalidArgument("extension degree must be >= 1".into()));
        }
        if !is_prime(p) || p > MAX_CHAR {
            return Err(ArithError::InvalidArgument(format!("characteristic {p} not a prime <= 13")));
        }
        let q = p.checked_pow(r).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            ArithError::InvalidArgument(format!("field of order {p}^{r} exceeds {MAX_ORDER}"))
        })?;
        if r == 1 {
            return Self::prime(p);
        }
        for tail in 0..q {
            let mut modulus = digits_of(tail, p, r);
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            if let Ok(f) = Self::with_modulus(p, modulus) {
                return Ok(f);
            }
        }
        Err(ArithError::InvalidArgument(format!("no irreducible of degree {r} over F_{p}")))
    }

    /// The field with `q` elements, `q` a prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let p = (2..=q.max(2))
            .find(|&p| q % p == 0)
            .ok_or_else(|| ArithError::InvalidArgument(format!("{q} is not a prime power")))?;
        let mut r = 0;
        let mut m = q;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        if m != 1 || q < 2 {
            return Err(ArithError::InvalidArgument(format!("{q} is not a prime power")));
        }
        Self::new(p, r)
    }

    /// The field `F_p[x]/(modulus)`; `modulus` is monic, low degree first.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) || p > MAX_CHAR {
            return Err(ArithError::InvalidArgument(format!("characteristic {p} not a prime <= 13")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(ArithError::InvalidArgument("modulus must be monic of degree >= 1".into()));
        }
        let r = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| ArithError::InvalidArgument(format!("field of order {p}^{r} too large")))?;
        let (exp, log) = if r == 1 {
            // For prime fields any monic linear modulus gives the same field; normalize.
            let m = vec![0, 1];
            let (e, l) = primitive_tables(p, &m).expect("prime field");
            return Ok(Fq(Arc::new(Inner {
                p,
                r,
                q,
                modulus: m,
                pow_p: vec![1],
                exp: e,
                log: l,
            })));
        } else {
            if !irreducible_over_prime(p, &modulus) {
                return Err(ArithError::InvalidArgument(format!(
                    "modulus {modulus:?} is reducible over F_{p}"
                )));
            }
            primitive_tables(p, &modulus).ok_or_else(|| {
                ArithError::InvalidArgument(format!("modulus {modulus:?} is reducible over F_{p}"))
            })?
        };
        let pow_p = (0..r).map(|i| p.pow(i)).collect();
        Ok(Fq(Arc::new(Inner { p, r, q, modulus, pow_p, exp, log })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.r
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    pub fn zero(&self) -> Elem {
        0
    }
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    /// The class of `x`, a generator of the field over `F_p` (equal to 1 for prime fields).
    pub fn gen(&self) -> Elem {
        if self.0.r == 1 {
            1
        } else {
            self.0.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        digits_of(a, self.0.p, self.0.r)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        debug_assert!(digits.len() <= self.0.r as usize);
        code_of(digits, self.0.p)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.r == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &self.0.pow_p {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.r == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        for &w in &self.0.pow_p {
            out += ((p - a % p) % p) * w;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let s = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[(if s >= n { s - n } else { s }) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in {self:?}");
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        self.0.exp[((n - l) % n) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % n)) % n) as usize]
    }

    /// `a^(p^k)`, the k-th power of absolute Frobenius.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        let k = k % self.0.r;
        self.pow(a, (self.0.p as u64).pow(k))
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        if self.0.q == 2 {
            1
        } else {
            self.0.exp[1]
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> u32 {
        assert!(a != 0);
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        n / num_integer::gcd(n, l)
    }

    /// Evaluates a polynomial with coefficients (low first) in this field at `x`.
    pub fn eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// A field embedding `src -> dst`, determined by the image of `src.gen()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub src: Fq,
    pub dst: Fq,
    pub gen_image: Elem,
}

impl Embedding {
    pub fn identity(f: &Fq) -> Self {
        Embedding { src: f.clone(), dst: f.clone(), gen_image: f.gen() }
    }

    pub fn apply(&self, a: Elem) -> Elem {
        if self.src.is_prime_field() {
            return a;
        }
        let d = self.src.digits(a);
        self.dst.eval(&d, self.gen_image)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Embedding) -> Result<Embedding> {
        if self.dst != other.src {
            return Err(ArithError::InvalidArgument("embeddings do not compose".into()));
        }
        Ok(Embedding {
            src: self.src.clone(),
            dst: other.dst.clone(),
            gen_image: other.apply(self.gen_image),
        })
    }

    /// Whether the two embeddings agree after some automorphism of the common target.
    pub fn agrees_up_to_frobenius(&self, other: &Embedding) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && (0..self.dst.degree())
                .any(|k| self.dst.frobenius(self.gen_image, k) == other.gen_image)
    }
}

/// The degree-`n` extension of `base` together with its embedding of `base`.
pub fn field_tower(base: &Fq, n: u32) -> Result<(Fq, Embedding)> {
    if n == 0 {
        return Err(ArithError::InvalidArgument("tower degree must be >= 1".into()));
    }
    if n == 1 {
        return Ok((base.clone(), Embedding::identity(base)));
    }
    let dst = Fq::new(base.characteristic(), base.degree() * n)?;
    if base.is_prime_field() {
        return Ok((dst.clone(), Embedding { src: base.clone(), dst, gen_image: 1 }));
    }
    let root = dst
        .elements()
        .find(|&x| dst.eval(base.modulus(), x) == 0)
        .ok_or_else(|| ArithError::InvalidArgument("base modulus has no root in the extension".into()))?;
    Ok((dst.clone(), Embedding { src: base.clone(), dst, gen_image: root }))
}

/// Elements of `big` fixed by `x -> x^{|small|}`, i.e. the image of the subfield of order `small_order`.
pub fn subfield_elements(big: &Fq, small_order: u32) -> Vec<Elem> {
    big.elements().filter(|&x| big.pow(x, small_order as u64) == x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields_are_fields() {
        for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (13, 3), (2, 12)] {
            let f = Fq::new(p, r).unwrap();
            assert_eq!(f.order(), p.pow(r));
            for a in f.elements().skip(1).step_by(7) {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(Fq::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Fq::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(Fq::with_modulus(2, vec![1, 0, 1]).is_err());
        assert!(Fq::new(4, 1).is_err());
        assert!(Fq::new(2, 13).is_err());
    }

    #[test]
    fn mul_matches_schoolbook() {
        let f = Fq::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), raw_mul(a, b, 3, f.modulus()));
            }
        }
    }

    #[test]
    fn tower_embedding_is_a_ring_map() {
        let f4 = Fq::new(2, 2).unwrap();
        let (f16, e) = field_tower(&f4, 2).unwrap();
        assert_eq!(f16.order(), 16);
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(e.apply(f4.mul(a, b)), f16.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f4.add(a, b)), f16.add(e.apply(a), e.apply(b)));
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = Fq::new(5, 2).unwrap();
        for a in 0..5 {
            assert_eq!(f.frobenius(a, 1), a);
        }
        assert_eq!(subfield_elements(&f, 5).len(), 5);
    }
}
