//! Dense square matrices over a finite field.

use hol_arith::linalg::rank_of;
use hol_arith::{Elem, Embedding, Fq};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMat {
    field: Fq,
    n: usize,
    /// Row-major entries.
    data: Vec<Elem>,
}

impl FMat {
    pub fn zeros(field: &Fq, n: usize) -> Self {
        FMat { field: field.clone(), n, data: vec![0; n * n] }
    }

    pub fn identity(field: &Fq, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &Fq, n: usize, c: Elem) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// From rows; `None` unless the rows form a square matrix of field elements.
    pub fn from_rows(field: &Fq, rows: &[Vec<Elem>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) || rows.iter().flatten().any(|&x| x >= field.order()) {
            return None;
        }
        Some(FMat { field: field.clone(), n, data: rows.concat() })
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.n + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn add(&self, o: &FMat) -> FMat {
        let f = &self.field;
        FMat { field: f.clone(), n: self.n, data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn mul(&self, o: &FMat) -> FMat {
        let (f, n) = (&self.field, self.n);
        let mut out = Self::zeros(f, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = f.add(out.data[i * n + j], f.mul(a, o.get(k, j)));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> FMat {
        (0..e).fold(Self::identity(&self.field, self.n), |acc, _| acc.mul(self))
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.n)
            .map(|i| (0..self.n).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.n, &self.rows())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn inverse(&self) -> Option<FMat> {
        let (f, n) = (&self.field, self.n);
        let mut a = self.rows();
        let mut inv = Self::identity(f, n).rows();
        for c in 0..n {
            let p = (c..n).find(|&r| a[r][c] != 0)?;
            a.swap(c, p);
            inv.swap(c, p);
            let s = f.inv(a[c][c]);
            for j in 0..n {
                a[c][j] = f.mul(a[c][j], s);
                inv[c][j] = f.mul(inv[c][j], s);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let k = a[r][c];
                    for j in 0..n {
                        a[r][j] = f.sub(a[r][j], f.mul(k, a[c][j]));
                        inv[r][j] = f.sub(inv[r][j], f.mul(k, inv[c][j]));
                    }
                }
            }
        }
        Self::from_rows(f, &inv)
    }

    pub fn random_invertible<R: Rng>(field: &Fq, n: usize, rng: &mut R) -> (FMat, FMat) {
        loop {
            let mut m = Self::zeros(field, n);
            m.data.iter_mut().for_each(|x| *x = rng.gen_range(0..field.order()));
            if let Some(i) = m.inverse() {
                return (m, i);
            }
        }
    }

    pub fn base_change(&self, emb: &Embedding, big: &Fq) -> FMat {
        FMat { field: big.clone(), n: self.n, data: self.data.iter().map(|&x| emb.apply(x)).collect() }
    }
}
