//! Laurent polynomials (exact, finite support) and truncated Laurent series in `t`.

use std::fmt;

use crate::fq::{Elem, Fq};

/// A Laurent polynomial `sum c_i t^(val+i)`. Coefficients are interpreted in a
/// field supplied by the caller, which keeps matrices of these light.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    val: i64,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{c}t^{}", self.val + i as i64))
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn from_coeffs(val: i64, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == coeffs.len() {
            return LPoly::zero();
        }
        coeffs.drain(..lead);
        LPoly { val: val + lead as i64, coeffs }
    }

    pub fn monomial(c: Elem, k: i64) -> Self {
        if c == 0 {
            LPoly::zero()
        } else {
            LPoly { val: k, coeffs: vec![c] }
        }
    }

    pub fn constant(c: Elem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn top(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.val + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> Elem {
        let i = k - self.val;
        if i < 0 {
            0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// Iterates over `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.val + i as i64, c))
    }

    pub fn add(&self, o: &LPoly, f: &Fq) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(o.val);
        let hi = self.top().unwrap().max(o.top().unwrap());
        let v = (lo..=hi).map(|k| f.add(self.coeff(k), o.coeff(k))).collect();
        LPoly::from_coeffs(lo, v)
    }

    pub fn neg(&self, f: &Fq) -> LPoly {
        LPoly { val: self.val, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, o: &LPoly, f: &Fq) -> LPoly {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, c: Elem, f: &Fq) -> LPoly {
        if c == 0 {
            return LPoly::zero();
        }
        LPoly { val: self.val, coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LPoly {
        if self.is_zero() {
            return LPoly::zero();
        }
        LPoly { val: self.val + k, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, o: &LPoly, f: &Fq) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        let mut v = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if b != 0 {
                    v[i + j] = f.add(v[i + j], f.mul(a, b));
                }
            }
        }
        LPoly::from_coeffs(self.val + o.val, v)
    }

    /// Applies a coefficient map (Frobenius, an embedding, ...).
    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> LPoly {
        LPoly::from_coeffs(self.val, self.coeffs.iter().map(|&c| g(c)).collect())
    }

    /// Drops all terms of exponent `>= h`.
    pub fn truncate(&self, h: i64) -> LPoly {
        if self.is_zero() || h <= self.val {
            return LPoly::zero();
        }
        let keep = ((h - self.val) as usize).min(self.coeffs.len());
        LPoly::from_coeffs(self.val, self.coeffs[..keep].to_vec())
    }

    /// Evaluation at `t = x` for polynomials (no negative exponents).
    pub fn eval(&self, x: Elem, f: &Fq) -> Elem {
        assert!(self.is_zero() || self.val >= 0, "evaluating a polynomial with poles");
        self.terms().fold(0, |acc, (k, c)| f.add(acc, f.mul(c, f.pow(x, k as u64))))
    }
}

/// A truncated Laurent series `sum_{i < N} c_i t^(v+i)` with fixed relative precision `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Fq,
    val: i64,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(t^{})", self.val + self.precision() as i64);
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                write!(f, "{c}t^{} + ", self.val + i as i64)?;
            }
        }
        write!(f, "O(t^{})", self.val + self.precision() as i64)
    }
}

impl LaurentSeries {
    /// Zero with relative precision `n`, stored at valuation 0.
    pub fn zero(field: &Fq, n: usize) -> Self {
        assert!(n >= 1, "precision must be positive");
        LaurentSeries { field: field.clone(), val: 0, coeffs: vec![0; n] }
    }

    /// Truncates a Laurent polynomial to `n` significant coefficients.
    pub fn from_lpoly(field: &Fq, p: &LPoly, n: usize) -> Self {
        assert!(n >= 1, "precision must be positive");
        match p.valuation() {
            None => Self::zero(field, n),
            Some(v) => LaurentSeries {
                field: field.clone(),
                val: v,
                coeffs: (0..n).map(|i| p.coeff(v + i as i64)).collect(),
            },
        }
    }

    fn normalized(field: &Fq, val: i64, mut coeffs: Vec<Elem>, n: usize) -> Self {
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == coeffs.len() {
            return Self::zero(field, n);
        }
        coeffs.drain(..lead);
        coeffs.resize(n, 0);
        LaurentSeries { field: field.clone(), val: val + lead as i64, coeffs }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; `None` beyond the known range.
    pub fn coeff(&self, k: i64) -> Option<Elem> {
        let i = k - self.val;
        if i < 0 {
            Some(0)
        } else {
            self.coeffs.get(i as usize).copied()
        }
    }

    /// Drops the error term; exact as a Laurent polynomial.
    pub fn to_lpoly(&self) -> LPoly {
        LPoly::from_coeffs(self.val, self.coeffs.clone())
    }

    /// Sum, known up to the smaller absolute precision.
    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.precision().min(o.precision());
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(o.val);
        let abs = (self.val + self.precision() as i64).min(o.val + o.precision() as i64);
        let v = (lo..abs)
            .map(|k| f.add(self.coeff(k).unwrap_or(0), o.coeff(k).unwrap_or(0)))
            .collect();
        Self::normalized(f, lo, v, n)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.precision().min(o.precision());
        if self.is_zero() || o.is_zero() {
            return Self::zero(f, n);
        }
        let mut v = vec![0; n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..n - i {
                v[i + j] = f.add(v[i + j], f.mul(a, o.coeffs[j]));
            }
        }
        Self::normalized(f, self.val + o.val, v, n)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let f = &self.field;
        let n = self.precision();
        let a0inv = f.inv(self.coeffs[0]);
        let mut b = vec![0; n];
        b[0] = a0inv;
        for k in 1..n {
            let mut s = 0;
            for i in 1..=k {
                s = f.add(s, f.mul(self.coeffs[i], b[k - i]));
            }
            b[k] = f.neg(f.mul(s, a0inv));
        }
        Some(LaurentSeries { field: f.clone(), val: -self.val, coeffs: b })
    }

    /// Coefficientwise `x -> x^(p^k)`.
    pub fn frobenius(&self, k: u32) -> Self {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.frobenius(c, k)).collect(),
        }
    }

    /// Equality modulo the coarser of the two absolute precisions.
    pub fn approx_eq(&self, o: &Self) -> bool {
        let abs = (self.val + self.precision() as i64).min(o.val + o.precision() as i64);
        let lo = self.val.min(o.val);
        (lo..abs).all(|k| self.coeff(k).unwrap_or(0) == o.coeff(k).unwrap_or(0))
    }
}
