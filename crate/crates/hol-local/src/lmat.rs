//! Matrices of Laurent polynomials over a finite field.

use std::fmt;

use hol_arith::{Elem, Fq, LPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct LMat {
    field: Fq,
    rows: usize,
    cols: usize,
    entries: Vec<LPoly>,
}

impl fmt::Debug for LMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl LMat {
    pub fn zeros(field: &Fq, rows: usize, cols: usize) -> Self {
        LMat { field: field.clone(), rows, cols, entries: vec![LPoly::zero(); rows * cols] }
    }

    pub fn identity(field: &Fq, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, LPoly::one());
        }
        m
    }

    pub fn from_entries(field: &Fq, rows: usize, cols: usize, entries: Vec<LPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        LMat { field: field.clone(), rows, cols, entries }
    }

    /// Matrix with constant entries given row by row.
    pub fn from_consts(field: &Fq, rows: usize, cols: usize, vals: &[Elem]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Self::from_entries(field, rows, cols, vals.iter().map(|&c| LPoly::constant(c)).collect())
    }

    /// The matrix unit `c t^k E_ij`.
    pub fn unit(field: &Fq, rows: usize, cols: usize, i: usize, j: usize, c: Elem, k: i64) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.set(i, j, LPoly::monomial(c, k));
        m
    }

    pub fn diagonal(field: &Fq, d: &[LPoly]) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// `I + x E_ij` with `i != j`.
    pub fn elementary(field: &Fq, n: usize, i: usize, j: usize, x: LPoly) -> Self {
        assert_ne!(i, j);
        let mut m = Self::identity(field, n);
        m.set(i, j, x);
        m
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn entries(&self) -> &[LPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &LPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LPoly) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Smallest exponent occurring in any entry.
    pub fn valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.valuation()).min()
    }

    /// Largest exponent occurring in any entry.
    pub fn top(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.top()).max()
    }

    fn zip(&self, o: &LMat, g: impl Fn(&LPoly, &LPoly) -> LPoly) -> LMat {
        assert_eq!(self.shape(), o.shape(), "shape mismatch");
        LMat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| g(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &LMat) -> LMat {
        let f = self.field.clone();
        self.zip(o, |a, b| a.add(b, &f))
    }

    pub fn sub(&self, o: &LMat) -> LMat {
        let f = self.field.clone();
        self.zip(o, |a, b| a.sub(b, &f))
    }

    pub fn neg(&self) -> LMat {
        self.map_entries(|e| e.neg(&self.field))
    }

    pub fn map_entries(&self, g: impl Fn(&LPoly) -> LPoly) -> LMat {
        LMat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(g).collect(),
        }
    }

    pub fn scale(&self, c: Elem) -> LMat {
        self.map_entries(|e| e.scale(c, &self.field))
    }

    pub fn scale_poly(&self, p: &LPoly) -> LMat {
        self.map_entries(|e| e.mul(p, &self.field))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LMat {
        self.map_entries(|e| e.shift(k))
    }

    /// Drops all terms of exponent `>= h`.
    pub fn truncate(&self, h: i64) -> LMat {
        self.map_entries(|e| e.truncate(h))
    }

    /// Applies `x -> x^(p^k)` to every coefficient.
    pub fn frobenius(&self, k: u32) -> LMat {
        let f = self.field.clone();
        self.map_entries(|e| e.map(|c| f.frobenius(c, k)))
    }

    pub fn mul(&self, o: &LMat) -> LMat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = LMat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b, f), f);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> LMat {
        let mut out = LMat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> LMat {
        let mut e = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                e.push(self.get(i, j).clone());
            }
        }
        LMat::from_entries(&self.field, self.rows - 1, self.cols - 1, e)
    }

    /// Determinant by cofactor expansion (sizes stay small here).
    pub fn det(&self) -> LPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = &self.field;
        match self.rows {
            0 => LPoly::one(),
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0).mul(self.get(1, 1), f).sub(&self.get(0, 1).mul(self.get(1, 0), f), f),
            n => {
                let mut acc = LPoly::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a.mul(&self.minor(0, j).det(), f);
                    acc = if j % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
                }
                acc
            }
        }
    }

    /// Classical adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> LMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        if n == 1 {
            return LMat::identity(f, 1);
        }
        let mut out = LMat::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(j, i).det();
                out.set(i, j, if (i + j) % 2 == 0 { m } else { m.neg(f) });
            }
        }
        out
    }

    /// Coefficients at exponent `k`, row-major.
    pub fn coeffs_at(&self, k: i64) -> Vec<Elem> {
        self.entries.iter().map(|e| e.coeff(k)).collect()
    }

    /// Block permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(field: &Fq, perm: &[usize]) -> LMat {
        let n = perm.len();
        let mut m = LMat::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, LPoly::one());
        }
        m
    }

    /// Horizontal block `[self | o]`.
    pub fn hcat(&self, o: &LMat) -> LMat {
        assert_eq!(self.rows, o.rows);
        let mut out = LMat::zeros(&self.field, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Vertical block `[self; o]`.
    pub fn vcat(&self, o: &LMat) -> LMat {
        assert_eq!(self.cols, o.cols);
        let mut e = self.entries.clone();
        e.extend(o.entries.iter().cloned());
        LMat::from_entries(&self.field, self.rows + o.rows, self.cols, e)
    }

    /// Rows `r0..r1`.
    pub fn row_block(&self, r0: usize, r1: usize) -> LMat {
        LMat::from_entries(&self.field, r1 - r0, self.cols, self.entries[r0 * self.cols..r1 * self.cols].to_vec())
    }

    /// Re-reads the same coefficients in another field (used after embeddings).
    pub fn with_field(&self, field: &Fq, g: impl Fn(Elem) -> Elem) -> LMat {
        LMat {
            field: field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.map(&g)).collect(),
        }
    }
}
