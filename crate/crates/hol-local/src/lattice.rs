//! Full-rank `O`-lattices in spaces of matrices over `K = F((t))`, `O = F[[t]]`.
//!
//! A lattice `L` with `t^hi O^n <= L <= t^lo O^n` is stored as the subspace
//! `L / t^hi O^n` of the finite-dimensional window `t^lo O^n / t^hi O^n`, in
//! reduced echelon form. The window is normalized (largest `lo`, smallest
//! `hi`), which makes equality a comparison of echelon rows. Coordinates are
//! ordered exponent-major, so pivots sit at the lowest exponent of a vector.
//!
//! All operations are exact: generators are Laurent polynomials and every
//! result comes with a proven floor `t^h O^n`. The precision budget only caps
//! window widths.

use hol_arith::{Echelon, Elem, Embedding, Fq, LPoly};
use rand::Rng;

use crate::error::{LocalError, Result};
use crate::lmat::LMat;

#[derive(Clone, Debug)]
pub struct Lattice {
    field: Fq,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    space: Echelon,
    prec: usize,
}

impl PartialEq for Lattice {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.rows == o.rows
            && self.cols == o.cols
            && self.lo == o.lo
            && self.hi == o.hi
            && self.space == o.space
    }
}
impl Eq for Lattice {}

pub(crate) fn vectorize(x: &LMat, lo: i64, hi: i64) -> Vec<Elem> {
    let n = x.rows() * x.cols();
    let mut v = Vec::with_capacity(((hi - lo).max(0) as usize) * n);
    for k in lo..hi {
        v.extend(x.entries().iter().map(|e| e.coeff(k)));
    }
    debug_assert_eq!(v.len(), ((hi - lo).max(0) as usize) * n);
    v
}

pub(crate) fn devectorize(field: &Fq, rows: usize, cols: usize, v: &[Elem], lo: i64) -> LMat {
    let n = rows * cols;
    let width = v.len() / n.max(1);
    let entries = (0..n)
        .map(|c| LPoly::from_coeffs(lo, (0..width).map(|k| v[k * n + c]).collect()))
        .collect();
    LMat::from_entries(field, rows, cols, entries)
}

impl Lattice {
    fn n(&self) -> usize {
        self.rows * self.cols
    }

    /// `t^k` times all `rows x cols` matrices over `O`.
    pub fn full(field: &Fq, rows: usize, cols: usize, k: i64, prec: usize) -> Lattice {
        Lattice {
            field: field.clone(),
            rows,
            cols,
            lo: k,
            hi: k,
            space: Echelon::new(field, 0),
            prec,
        }
    }

    /// `{x : x_c in t^{exps[c]} O}` for entries `c` in row-major order.
    pub fn monomial(field: &Fq, rows: usize, cols: usize, exps: &[i64], prec: usize) -> Result<Lattice> {
        assert_eq!(exps.len(), rows * cols);
        let hi = *exps.iter().max().unwrap();
        let gens: Vec<LMat> = exps
            .iter()
            .enumerate()
            .map(|(c, &k)| LMat::unit(field, rows, cols, c / cols, c % cols, 1, k))
            .collect();
        Self::from_span(field, rows, cols, &gens, hi, prec)
    }

    /// The `O`-span of `gens`, given that it contains `t^floor O^n`.
    pub fn from_span(
        field: &Fq,
        rows: usize,
        cols: usize,
        gens: &[LMat],
        floor: i64,
        prec: usize,
    ) -> Result<Lattice> {
        let n = rows * cols;
        let lo = gens.iter().filter_map(|g| g.valuation()).min().unwrap_or(floor).min(floor);
        if (floor - lo) as usize > prec {
            return Err(LocalError::PrecisionFailure(format!(
                "lattice window [{lo}, {floor}) wider than precision {prec}"
            )));
        }
        let width = (floor - lo) as usize * n;
        let mut space = Echelon::new(field, width);
        for g in gens {
            assert_eq!(g.shape(), (rows, cols), "generator shape mismatch");
            let mut v = vectorize(g, lo, floor);
            while v.iter().any(|&x| x != 0) {
                if !space.insert(v.clone()) {
                    break;
                }
                // multiply by t: move every coordinate one block up
                v.rotate_right(n);
                v[..n].iter_mut().for_each(|x| *x = 0);
            }
        }
        let mut l = Lattice { field: field.clone(), rows, cols, lo, hi: floor, space, prec };
        l.normalize();
        Ok(l)
    }

    fn normalize(&mut self) {
        let n = self.n();
        // Shrink `hi` while the top block is entirely contained.
        while self.hi > self.lo {
            let base = (self.hi - 1 - self.lo) as usize * n;
            let full = (0..n).all(|c| {
                let mut v = vec![0; self.space.width()];
                v[base + c] = 1;
                self.space.contains(&v)
            });
            if !full {
                break;
            }
            let rows: Vec<Vec<Elem>> = self.space.rows().iter().map(|r| r[..base].to_vec()).collect();
            self.space = Echelon::from_rows(&self.field, base, rows);
            self.hi -= 1;
        }
        // Raise `lo` while nothing lives in the bottom block.
        while self.lo < self.hi && self.space.pivots().first().is_none_or(|&p| p >= n) {
            let w = self.space.width() - n;
            let rows: Vec<Vec<Elem>> = self.space.rows().iter().map(|r| r[n..].to_vec()).collect();
            self.space = Echelon::from_rows(&self.field, w, rows);
            self.lo += 1;
        }
        if self.lo == self.hi {
            self.space = Echelon::new(&self.field, 0);
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    /// `(lo, hi)` with `t^hi O^n <= L <= t^lo O^n`, both tight.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Result<Lattice> {
        if (self.hi - self.lo) as usize > prec {
            return Err(LocalError::PrecisionFailure("window exceeds the requested precision".into()));
        }
        let mut l = self.clone();
        l.prec = prec;
        Ok(l)
    }

    pub fn contains(&self, x: &LMat) -> bool {
        assert_eq!(x.shape(), self.shape());
        match x.valuation() {
            None => true,
            Some(v) if v < self.lo => false,
            Some(_) => self.space.contains(&vectorize(x, self.lo, self.hi)),
        }
    }

    /// The echelon subspace in a larger window.
    pub(crate) fn embed(&self, lo: i64, hi: i64) -> Echelon {
        assert!(lo <= self.lo && hi >= self.hi);
        let n = self.n();
        let pre = (self.lo - lo) as usize * n;
        let width = (hi - lo) as usize * n;
        let mut rows: Vec<Vec<Elem>> = self
            .space
            .rows()
            .iter()
            .map(|r| {
                let mut v = vec![0; pre];
                v.extend_from_slice(r);
                v.resize(width, 0);
                v
            })
            .collect();
        for k in self.hi..hi {
            for c in 0..n {
                let mut v = vec![0; width];
                v[(k - lo) as usize * n + c] = 1;
                rows.push(v);
            }
        }
        Echelon::from_rows(&self.field, width, rows)
    }

    fn common(&self, o: &Lattice) -> (i64, i64) {
        assert_eq!(self.shape(), o.shape(), "lattices of different shapes");
        (self.lo.min(o.lo), self.hi.max(o.hi))
    }

    fn from_window(&self, lo: i64, hi: i64, space: Echelon) -> Lattice {
        let mut l = Lattice {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            lo,
            hi,
            space,
            prec: self.prec,
        };
        l.normalize();
        l
    }

    pub fn is_subset_of(&self, o: &Lattice) -> bool {
        let (lo, hi) = self.common(o);
        self.embed(lo, hi).is_subspace_of(&o.embed(lo, hi))
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        let (lo, hi) = self.common(o);
        let s = self.embed(lo, hi).sum(&o.embed(lo, hi));
        self.from_window(lo, hi, s)
    }

    pub fn intersection(&self, o: &Lattice) -> Lattice {
        let (lo, hi) = self.common(o);
        let s = self.embed(lo, hi).intersection(&o.embed(lo, hi));
        self.from_window(lo, hi, s)
    }

    /// `dim_F (self / sub)` when `sub <= self`.
    pub fn colength(&self, sub: &Lattice) -> Option<usize> {
        let (lo, hi) = self.common(sub);
        let a = self.embed(lo, hi);
        let b = sub.embed(lo, hi);
        b.is_subspace_of(&a).then(|| a.rank() - b.rank())
    }

    /// `t^k L`.
    pub fn shift(&self, k: i64) -> Lattice {
        let mut l = self.clone();
        l.lo += k;
        l.hi += k;
        l
    }

    /// An `O`-basis: one generator per matrix entry.
    pub fn generators(&self) -> Vec<LMat> {
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for c in 0..n {
            let row = self.space.rows().iter().zip(self.space.pivots()).find(|(_, &p)| p % n == c);
            out.push(match row {
                Some((r, _)) => devectorize(&self.field, self.rows, self.cols, r, self.lo),
                None => LMat::unit(&self.field, self.rows, self.cols, c / self.cols, c % self.cols, 1, self.hi),
            });
        }
        out
    }

    /// An `F`-basis of `L / t^hi O^n`, as matrices.
    pub fn residue_basis(&self) -> Vec<LMat> {
        self.space
            .rows()
            .iter()
            .map(|r| devectorize(&self.field, self.rows, self.cols, r, self.lo))
            .collect()
    }

    /// Valuations of the `O`-basis entries, in entry order.
    pub fn valuation_profile(&self) -> Vec<i64> {
        self.generators().iter().map(|g| g.valuation().unwrap_or(self.hi)).collect()
    }

    /// Product lattice `self * o`.
    pub fn product(&self, o: &Lattice) -> Result<Lattice> {
        assert_eq!(self.cols, o.rows, "incompatible lattice shapes");
        let ga = self.generators();
        let gb = o.generators();
        let gens: Vec<LMat> = ga.iter().flat_map(|a| gb.iter().map(move |b| a.mul(b))).collect();
        Self::from_span(&self.field, self.rows, o.cols, &gens, self.hi + o.hi, self.prec.max(o.prec))
    }

    fn floor_shift(g: &LMat) -> Result<i64> {
        let det = g.det();
        let vd = det
            .valuation()
            .ok_or_else(|| LocalError::InvalidArgument("singular matrix".into()))?;
        let va = g.adjugate().valuation().unwrap_or(0);
        Ok(vd - va)
    }

    /// `g L` for an invertible square `g`.
    pub fn left_mul(&self, g: &LMat) -> Result<Lattice> {
        assert_eq!(g.cols(), self.rows);
        let floor = self.hi + Self::floor_shift(g)?;
        let gens: Vec<LMat> = self.generators().iter().map(|x| g.mul(x)).collect();
        Self::from_span(&self.field, g.rows(), self.cols, &gens, floor, self.prec)
    }

    /// `L g` for an invertible square `g`.
    pub fn right_mul(&self, g: &LMat) -> Result<Lattice> {
        assert_eq!(g.rows(), self.cols);
        let floor = self.hi + Self::floor_shift(g)?;
        let gens: Vec<LMat> = self.generators().iter().map(|x| x.mul(g)).collect();
        Self::from_span(&self.field, self.rows, g.cols(), &gens, floor, self.prec)
    }

    pub fn transpose(&self) -> Lattice {
        let gens: Vec<LMat> = self.generators().iter().map(|g| g.transpose()).collect();
        Self::from_span(&self.field, self.cols, self.rows, &gens, self.hi, self.prec)
            .expect("transpose keeps the window")
    }

    /// Extension of scalars along a field embedding.
    pub fn base_change(&self, emb: &Embedding) -> Lattice {
        assert_eq!(emb.src, self.field);
        let gens: Vec<LMat> = self.generators().iter().map(|g| g.with_field(&emb.dst, |c| emb.apply(c))).collect();
        Self::from_span(&emb.dst, self.rows, self.cols, &gens, self.hi, self.prec)
            .expect("base change keeps the window")
    }

    /// `{f : f X <= Y}` (`left = true`) or `{f : X f <= Y}` (`left = false`).
    fn hom(x: &Lattice, y: &Lattice, left: bool) -> Result<Lattice> {
        let field = &x.field;
        let (fr, fc) = if left {
            assert_eq!(x.cols, y.cols, "hom shapes");
            (y.rows, x.rows)
        } else {
            assert_eq!(x.rows, y.rows, "hom shapes");
            (x.cols, y.cols)
        };
        let lo = y.lo - x.hi;
        let top = y.hi - x.lo;
        let prec = x.prec.max(y.prec);
        if lo >= top {
            return Ok(Lattice::full(field, fr, fc, top, prec));
        }
        if (top - lo) as usize > prec {
            return Err(LocalError::PrecisionFailure(format!(
                "hom window [{lo}, {top}) wider than precision {prec}"
            )));
        }
        let xs = x.generators();
        let below_lo = lo + x.lo;
        let ny = y.n();
        let mut columns = Vec::new();
        let mut unknowns = Vec::new();
        for k in lo..top {
            for i in 0..fr {
                for j in 0..fc {
                    let mut col = Vec::new();
                    for g in &xs {
                        // (t^k E_ij) g or g (t^k E_ij), built directly
                        let mut img = LMat::zeros(field, y.rows, y.cols);
                        if left {
                            for c in 0..g.cols() {
                                img.set(i, c, g.get(j, c).shift(k));
                            }
                        } else {
                            for r in 0..g.rows() {
                                img.set(r, j, g.get(r, i).shift(k));
                            }
                        }
                        if below_lo < y.lo {
                            col.extend(vectorize(&img, below_lo, y.lo));
                        }
                        let mut v = vectorize(&img, y.lo, y.hi);
                        y.space.reduce(&mut v);
                        col.extend(v);
                    }
                    columns.push(col);
                    unknowns.push((k, i, j));
                }
            }
        }
        let height = columns.first().map_or(0, |c| c.len());
        debug_assert!(columns.iter().all(|c| c.len() == height));
        let _ = ny;
        let ker = hol_arith::linalg::kernel_of_columns(field, height, &columns);
        let gens: Vec<LMat> = ker
            .iter()
            .map(|c| {
                let mut m = LMat::zeros(field, fr, fc);
                for (&coef, &(k, i, j)) in c.iter().zip(&unknowns) {
                    if coef != 0 {
                        let cur = m.get(i, j).add(&LPoly::monomial(coef, k), field);
                        m.set(i, j, cur);
                    }
                }
                m
            })
            .collect();
        Self::from_span(field, fr, fc, &gens, top, prec)
    }

    /// `{f : f X <= Y}`.
    pub fn hom_left(x: &Lattice, y: &Lattice) -> Result<Lattice> {
        Self::hom(x, y, true)
    }

    /// `{f : X f <= Y}`.
    pub fn hom_right(x: &Lattice, y: &Lattice) -> Result<Lattice> {
        Self::hom(x, y, false)
    }

    /// A uniformly random element of `L / t^hi O^n`, lifted with no terms at or above `hi`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> LMat {
        let q = self.field.order();
        let f = &self.field;
        let mut v = vec![0; self.space.width()];
        for r in self.space.rows() {
            let c = rng.gen_range(0..q);
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(r) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        devectorize(f, self.rows, self.cols, &v, self.lo)
    }
}
