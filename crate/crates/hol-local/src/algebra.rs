//! Finite-dimensional algebras over `F_q` arising as quotients of orders.

use hol_arith::linalg::{kernel_of_columns, rank_of};
use hol_arith::{Echelon, Elem, Exec, Fq};

use crate::error::{LocalError, Result};
use crate::lattice::{devectorize, vectorize, Lattice};
use crate::lmat::LMat;

/// Default cap on exhaustive enumerations.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

/// The quotient of two nested subspaces of `F^width`, with a fixed basis of
/// representatives taken from the rows of the bigger space.
#[derive(Clone, Debug)]
pub struct VecQuotient {
    field: Fq,
    width: usize,
    reps: Vec<Vec<Elem>>,
    // rows [s | 0] for the small space and [b_i | e_i] for representatives
    aug: Echelon,
}

impl VecQuotient {
    pub fn new(field: &Fq, width: usize, small: &[Vec<Elem>], big: &[Vec<Elem>]) -> Self {
        let mut acc = Echelon::from_rows(field, width, small.iter().cloned());
        let reps: Vec<Vec<Elem>> = big.iter().filter(|r| acc.insert(r.to_vec())).cloned().collect();
        let k = reps.len();
        let mut aug = Echelon::new(field, width + k);
        for r in small {
            let mut v = r.clone();
            v.resize(width + k, 0);
            aug.insert(v);
        }
        for (i, r) in reps.iter().enumerate() {
            let mut v = r.clone();
            v.resize(width + k, 0);
            v[width + i] = 1;
            aug.insert(v);
        }
        VecQuotient { field: field.clone(), width, reps, aug }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vec<Elem>] {
        &self.reps
    }

    /// Coordinates of the class of `v`, or `None` if `v` is outside the big space.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let mut w = v.to_vec();
        w.resize(self.width + self.dim(), 0);
        self.aug.reduce(&mut w);
        if w[..self.width].iter().any(|&c| c != 0) {
            return None;
        }
        Some(w[self.width..].iter().map(|&c| self.field.neg(c)).collect())
    }
}

/// The `F`-space `big / small` for lattices `small <= big`, with a fixed
/// basis of representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    field: Fq,
    shape: (usize, usize),
    lo: i64,
    hi: i64,
    basis: Vec<LMat>,
    inner: VecQuotient,
}

impl Quotient {
    pub fn new(big: &Lattice, small: &Lattice) -> Result<Self> {
        if !small.is_subset_of(big) {
            return Err(LocalError::InvalidArgument("quotient of non-nested lattices".into()));
        }
        let field = big.field().clone();
        let (rows, cols) = big.shape();
        let (lo, hi) = (big.window().0.min(small.window().0), big.window().1.max(small.window().1));
        let s = small.embed(lo, hi);
        let b = big.embed(lo, hi);
        let inner = VecQuotient::new(&field, s.width(), s.rows(), b.rows());
        let basis = inner.reps().iter().map(|r| devectorize(&field, rows, cols, r, lo)).collect();
        Ok(Quotient { field, shape: (rows, cols), lo, hi, basis, inner })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LMat] {
        &self.basis
    }

    /// Coordinates of the class of `x`, or `None` if `x` is not in the big lattice.
    pub fn coords(&self, x: &LMat) -> Option<Vec<Elem>> {
        if x.valuation().is_some_and(|v| v < self.lo) {
            return None;
        }
        self.inner.coords(&vectorize(x, self.lo, self.hi))
    }

    /// A representative of the class with coordinates `c`.
    pub fn lift(&self, c: &[Elem]) -> LMat {
        let mut out = LMat::zeros(&self.field, self.shape.0, self.shape.1);
        for (&ci, b) in c.iter().zip(&self.basis) {
            if ci != 0 {
                out = out.add(&b.scale(ci));
            }
        }
        out
    }
}

/// An associative unital algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    field: Fq,
    dim: usize,
    table: Vec<Vec<Elem>>,
    one: Vec<Elem>,
}

impl FiniteAlgebra {
    /// `table[i * dim + j]` holds the coordinates of `b_i b_j`.
    pub fn from_table(field: &Fq, dim: usize, table: Vec<Vec<Elem>>, one: Vec<Elem>) -> Self {
        assert_eq!(table.len(), dim * dim);
        FiniteAlgebra { field: field.clone(), dim, table, one }
    }

    /// `order / ideal` for a square-matrix order and a two-sided ideal in it.
    pub fn quotient(order: &Lattice, ideal: &Lattice) -> Result<(Self, Quotient)> {
        let q = Quotient::new(order, ideal)?;
        let dim = q.dim();
        let mut table = Vec::with_capacity(dim * dim);
        for a in q.basis() {
            for b in q.basis() {
                table.push(
                    q.coords(&a.mul(b))
                        .ok_or_else(|| LocalError::InvalidArgument("lattice is not closed under products".into()))?,
                );
            }
        }
        let id = LMat::identity(order.field(), order.shape().0);
        let one = q
            .coords(&id)
            .ok_or_else(|| LocalError::InvalidArgument("order does not contain the identity".into()))?;
        Ok((Self::from_table(order.field(), dim, table, one), q))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn one(&self) -> &[Elem] {
        &self.one
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, &y)| y != 0) {
                let c = f.mul(x, y);
                for (o, &t) in out.iter_mut().zip(&self.table[i * self.dim + j]) {
                    *o = f.add(*o, f.mul(c, t));
                }
            }
        }
        out
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    fn unit_vec(&self, i: usize) -> Vec<Elem> {
        hol_arith::linalg::unit(self.dim, i)
    }

    /// Rank of `x -> a x`.
    pub fn left_rank(&self, a: &[Elem]) -> usize {
        let cols: Vec<Vec<Elem>> = (0..self.dim).map(|j| self.mul(a, &self.unit_vec(j))).collect();
        rank_of(&self.field, self.dim, &cols)
    }

    pub fn is_unit(&self, a: &[Elem]) -> bool {
        self.left_rank(a) == self.dim
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i * self.dim + j] == self.table[j * self.dim + i]))
    }

    /// A basis of the center.
    pub fn center(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let n = self.dim;
        // column for unknown c_i: the stacked commutators [b_i, b_j] over all j
        let cols: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|j| self.sub(&self.table[i * n + j], &self.table[j * n + i]))
                    .collect()
            })
            .collect();
        kernel_of_columns(f, n * n, &cols)
    }

    /// The element with base-`q` digits of `idx` as coordinates.
    pub fn element(&self, mut idx: u64) -> Vec<Elem> {
        let q = self.field.order() as u64;
        (0..self.dim)
            .map(|_| {
                let c = (idx % q) as Elem;
                idx /= q;
                c
            })
            .collect()
    }

    /// Number of elements, if within `budget`.
    pub fn size(&self, budget: u64) -> Result<u64> {
        let q = self.field.order() as u64;
        let mut n: u64 = 1;
        for _ in 0..self.dim {
            n = n.checked_mul(q).filter(|&n| n <= budget).ok_or_else(|| {
                LocalError::BudgetExceeded(format!("algebra of order {}^{} is too large to enumerate", q, self.dim))
            })?;
        }
        Ok(n)
    }

    /// Counts invertible elements by exhaustive enumeration.
    pub fn count_units(&self, exec: Exec, budget: u64) -> Result<u64> {
        let n = self.size(budget)?;
        Ok(exec.count_range(n, |i| self.is_unit(&self.element(i))))
    }

    /// Whether a nonzero non-invertible element exists.
    pub fn has_zero_divisors(&self, exec: Exec, budget: u64) -> Result<bool> {
        let n = self.size(budget)?;
        Ok(exec.count_range(n, |i| i != 0 && !self.is_unit(&self.element(i))) > 0)
    }

    pub fn is_nilpotent(&self, a: &[Elem]) -> bool {
        let mut p = a.to_vec();
        for _ in 0..self.dim {
            if p.iter().all(|&c| c == 0) {
                return true;
            }
            p = self.mul(&p, a);
        }
        p.iter().all(|&c| c == 0)
    }

    pub fn has_nonzero_nilpotent(&self, exec: Exec, budget: u64) -> Result<bool> {
        let n = self.size(budget)?;
        Ok(exec.count_range(n, |i| i != 0 && self.is_nilpotent(&self.element(i))) > 0)
    }

    pub fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Whether the Jacobson radical vanishes: no nonzero `x` with `y x`
    /// nilpotent for every `y`. Enumerates pairs, so the budget applies to
    /// the square of the size.
    pub fn is_semisimple(&self, exec: Exec, budget: u64) -> Result<bool> {
        let n = self.size(budget)?;
        if n.checked_mul(n).is_none_or(|nn| nn > budget) {
            return Err(LocalError::BudgetExceeded(format!("radical search over {n}^2 pairs")));
        }
        let in_radical = |i: u64| {
            let x = self.element(i);
            (0..n).all(|j| self.is_nilpotent(&self.mul(&self.element(j), &x)))
        };
        Ok(exec.count_range(n, |i| i != 0 && in_radical(i)) == 0)
    }

    /// Whether the algebra is a (commutative) field, by exhaustive search.
    pub fn is_field(&self, exec: Exec, budget: u64) -> Result<bool> {
        Ok(self.is_commutative() && !self.has_zero_divisors(exec, budget)?)
    }
}
