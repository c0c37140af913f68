//! Dense linear algebra over a finite field: reduced row echelon subspaces and kernels.

use crate::fq::{Elem, Fq};

/// A subspace of `F^width` held in reduced row echelon form.
///
/// The basis is canonical, so two subspaces are equal exactly when their rows are.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fq,
    width: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl PartialEq for Echelon {
    fn eq(&self, o: &Self) -> bool {
        self.width == o.width && self.rows == o.rows
    }
}
impl Eq for Echelon {}

impl Echelon {
    pub fn new(field: &Fq, width: usize) -> Self {
        Echelon { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Elem>>>(field: &Fq, width: usize, rows: I) -> Self {
        let mut e = Self::new(field, width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn full(field: &Fq, width: usize) -> Self {
        Self::from_rows(field, width, (0..width).map(|i| unit(width, i)))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the projection onto the pivot columns; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row).skip(pc) {
                if r != 0 {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds a vector; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field.clone();
        let inv = f.inv(v[pc]);
        for x in v.iter_mut().skip(pc) {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in row.iter_mut().zip(&v).skip(pc) {
                if r != 0 {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, v);
        true
    }

    pub fn sum(&self, o: &Echelon) -> Echelon {
        let mut e = self.clone();
        for r in &o.rows {
            e.insert(r.clone());
        }
        e
    }

    pub fn is_subspace_of(&self, o: &Echelon) -> bool {
        self.rows.iter().all(|r| o.contains(r))
    }

    pub fn intersection(&self, o: &Echelon) -> Echelon {
        let f = &self.field;
        // Dependencies among [self rows; o rows] give the common vectors.
        let cols: Vec<Vec<Elem>> = self.rows.iter().chain(o.rows.iter()).cloned().collect();
        let ker = kernel_of_columns(f, self.width, &cols);
        let k = self.rows.len();
        let mut out = Echelon::new(f, self.width);
        for c in ker {
            let mut v = vec![0; self.width];
            for (coef, row) in c[..k].iter().zip(&self.rows) {
                if *coef == 0 {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(*coef, r));
                }
            }
            out.insert(v);
        }
        out
    }

    /// Coordinates of `v` in the row basis, if it lies in the span.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let coords: Vec<Elem> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            for (x, &r) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        w.iter().all(|&x| x == 0).then_some(coords)
    }
}

pub fn unit(width: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; width];
    v[i] = 1;
    v
}

/// Basis of `{c : sum_j c_j cols[j] = 0}`, each vector of length `cols.len()`.
pub fn kernel_of_columns(field: &Fq, height: usize, cols: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = cols.len();
    let mut ech = Echelon::new(field, height + n);
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        debug_assert_eq!(c.len(), height);
        let mut v = c.clone();
        v.extend(unit(n, j));
        ech.reduce(&mut v);
        if v[..height].iter().all(|&x| x == 0) {
            out.push(v[height..].to_vec());
        } else {
            ech.insert(v);
        }
    }
    // The collected dependencies are linearly independent (each involves a new column),
    // but are not reduced; normalize for a canonical answer.
    let ker = Echelon::from_rows(field, n, out);
    ker.rows().to_vec()
}

/// Matrix-vector product for a matrix given by rows.
pub fn mat_vec(field: &Fq, rows: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b))))
        .collect()
}

/// Rank of a list of vectors.
pub fn rank_of(field: &Fq, width: usize, vecs: &[Vec<Elem>]) -> usize {
    Echelon::from_rows(field, width, vecs.iter().cloned()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_is_canonical() {
        let f = Fq::prime(3).unwrap();
        let a = Echelon::from_rows(&f, 3, [vec![1, 2, 0], vec![0, 1, 1]]);
        let b = Echelon::from_rows(&f, 3, [vec![1, 0, 1], vec![2, 1, 0]]);
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&[1, 0, 1]));
        assert_eq!(a.rows(), Echelon::from_rows(&f, 3, a.rows().to_vec()).rows());
        assert_eq!(a, b.sum(&a));
    }

    #[test]
    fn kernel_and_intersection() {
        let f = Fq::prime(2).unwrap();
        let cols = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let ker = kernel_of_columns(&f, 2, &cols);
        assert_eq!(ker, vec![vec![1, 1, 1]]);
        let u = Echelon::from_rows(&f, 3, [vec![1, 0, 0], vec![0, 1, 0]]);
        let w = Echelon::from_rows(&f, 3, [vec![1, 1, 0], vec![0, 0, 1]]);
        let i = u.intersection(&w);
        assert_eq!(i.rank(), 1);
        assert!(i.contains(&[1, 1, 0]));
    }

    #[test]
    fn coordinates_in_basis() {
        let f = Fq::new(2, 2).unwrap();
        let e = Echelon::from_rows(&f, 3, [vec![1, 2, 0], vec![0, 0, 1]]);
        let v = vec![3, f.mul(3, 2), 1];
        let c = e.coordinates(&v).unwrap();
        assert_eq!(c, vec![3, 1]);
        assert!(e.coordinates(&[0, 1, 0]).is_none());
    }
}
