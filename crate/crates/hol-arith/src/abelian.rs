//! Finitely generated abelian groups `Z^g / <relations>` via Smith normal form.

use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{ArithError, Result};
use crate::ratmodz::Q;

type Mat = Vec<Vec<i128>>;

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(ArithError::Overflow("Smith normal form"))
}

/// Column-reduction state: `a * q = current`, with `qinv = q^{-1}`.
struct Reducer {
    a: Mat,
    q: Mat,
    qinv: Mat,
}

impl Reducer {
    fn new(a: Mat, g: usize) -> Self {
        let id: Mat = (0..g).map(|i| (0..g).map(|j| i128::from(i == j)).collect()).collect();
        Reducer { a, q: id.clone(), qinv: id }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut().chain(self.q.iter_mut()) {
            row.swap(i, j);
        }
        self.qinv.swap(i, j);
    }

    /// col_j -= c * col_i (and the inverse row operation on `qinv`).
    fn col_axpy(&mut self, j: usize, i: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for row in self.a.iter_mut().chain(self.q.iter_mut()) {
            row[j] = ck(row[j].checked_sub(ck(c.checked_mul(row[i]))?))?;
        }
        // The inverse column operation acts on `qinv` as row_i += c * row_j.
        let row_j = self.qinv[j].clone();
        for (x, y) in self.qinv[i].iter_mut().zip(row_j.iter()) {
            *x = ck(x.checked_add(ck(c.checked_mul(*y))?))?;
        }
        Ok(())
    }

    fn negate_col(&mut self, j: usize) {
        for row in self.a.iter_mut().chain(self.q.iter_mut()) {
            row[j] = -row[j];
        }
        for x in self.qinv[j].iter_mut() {
            *x = -*x;
        }
    }

    fn row_axpy(&mut self, j: usize, i: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let ri = self.a[i].clone();
        for (x, y) in self.a[j].iter_mut().zip(ri.iter()) {
            *x = ck(x.checked_sub(ck(c.checked_mul(*y))?))?;
        }
        Ok(())
    }

    /// Diagonalizes `a` in place; returns the diagonal.
    fn smith(&mut self) -> Result<Vec<i128>> {
        let m = self.a.len();
        let g = self.q.len();
        let mut diag = Vec::new();
        for t in 0..m.min(g) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..g {
                        let v = self.a[i][j];
                        if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < self.a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else {
                    return Ok(diag);
                };
                self.a.swap(t, bi);
                self.swap_cols(t, bj);
                let piv = self.a[t][t];
                let mut clean = true;
                for i in t + 1..m {
                    let c = Integer::div_floor(&self.a[i][t], &piv);
                    self.row_axpy(i, t, c)?;
                    if self.a[i][t] != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..g {
                    let c = Integer::div_floor(&self.a[t][j], &piv);
                    self.col_axpy(j, t, c)?;
                    if self.a[t][j] != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..g).any(|j| self.a[i][j] % piv != 0));
                match bad {
                    Some(i) => self.row_axpy(t, i, -1)?,
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_col(t);
            }
            diag.push(self.a[t][t]);
        }
        Ok(diag)
    }
}

#[derive(Debug, Clone)]
struct Normal {
    /// One entry per generator: 0 means a free factor `Z`.
    divisors: Vec<i128>,
    q: Mat,
    qinv: Mat,
}

/// A finitely generated abelian group given by a relation matrix.
#[derive(Debug, Clone)]
pub struct FgAbelianGroup {
    ngens: usize,
    relations: Vec<Vec<i64>>,
    normal: OnceLock<Normal>,
}

impl FgAbelianGroup {
    pub fn new(ngens: usize, relations: Vec<Vec<i64>>) -> Result<Self> {
        if relations.iter().any(|r| r.len() != ngens) {
            return Err(ArithError::InvalidArgument("relation length differs from generator count".into()));
        }
        let g = FgAbelianGroup { ngens, relations, normal: OnceLock::new() };
        g.compute()?;
        Ok(g)
    }

    fn compute(&self) -> Result<&Normal> {
        if let Some(n) = self.normal.get() {
            return Ok(n);
        }
        let a: Mat = self.relations.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut red = Reducer::new(a, self.ngens);
        let mut divisors = red.smith()?;
        divisors.resize(self.ngens, 0);
        let n = Normal { divisors, q: red.q, qinv: red.qinv };
        Ok(self.normal.get_or_init(|| n))
    }

    fn nf(&self) -> &Normal {
        self.compute().expect("normal form computed at construction")
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    /// Diagonal of the normal form, one entry per generator (1 = trivial, 0 = infinite cyclic).
    pub fn diagonal(&self) -> &[i128] {
        &self.nf().divisors
    }

    /// Nontrivial invariant factors `d_1 | d_2 | ...`, with 0 standing for `Z`.
    pub fn invariant_factors(&self) -> Vec<i128> {
        let mut v: Vec<i128> = self.diagonal().iter().copied().filter(|&d| d != 1).collect();
        v.sort_by_key(|&d| if d == 0 { i128::MAX } else { d });
        v
    }

    pub fn free_rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion_factors(&self) -> Vec<i128> {
        self.invariant_factors().into_iter().filter(|&d| d > 1).collect()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.diagonal().iter().map(|&d| d as u128).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// Canonical coordinates of an element: one per generator of the normal form,
    /// reduced into `[0, d)` on finite factors and 0 on trivial ones.
    pub fn coords(&self, x: &[i64]) -> Vec<i128> {
        assert_eq!(x.len(), self.ngens);
        let nf = self.nf();
        (0..self.ngens)
            .map(|j| {
                let y: i128 = (0..self.ngens).map(|i| x[i] as i128 * nf.q[i][j]).sum();
                match nf.divisors[j] {
                    0 => y,
                    d => y.rem_euclid(d),
                }
            })
            .collect()
    }

    /// Lifts canonical coordinates back to a word in the original generators.
    pub fn from_coords(&self, y: &[i128]) -> Vec<i64> {
        let nf = self.nf();
        (0..self.ngens)
            .map(|i| (0..self.ngens).map(|j| y[j] * nf.qinv[j][i]).sum::<i128>() as i64)
            .collect()
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.coords(x).iter().all(|&c| c == 0)
    }

    pub fn equal(&self, x: &[i64], y: &[i64]) -> bool {
        self.coords(x) == self.coords(y)
    }

    /// Order of an element, `None` if it has infinite order.
    pub fn element_order(&self, x: &[i64]) -> Option<u128> {
        let c = self.coords(x);
        let mut ord: u128 = 1;
        for (j, &y) in c.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let d = self.diagonal()[j];
            if d == 0 {
                return None;
            }
            ord = ord.lcm(&((d / d.gcd(&y)) as u128));
        }
        Some(ord)
    }

    /// All elements of a finite group, as words in the original generators.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        let ord = self.order()?;
        let divs = self.diagonal().to_vec();
        let mut out = Vec::with_capacity(ord as usize);
        let mut y = vec![0i128; self.ngens];
        loop {
            out.push(self.from_coords(&y));
            let mut k = 0;
            loop {
                if k == self.ngens {
                    return Some(out);
                }
                if divs[k] > 1 {
                    y[k] += 1;
                    if y[k] < divs[k] {
                        break;
                    }
                    y[k] = 0;
                }
                k += 1;
            }
        }
    }

    /// Kernel of a homomorphism to `Q` given by its values on the generators.
    /// Returns the kernel as a group together with its generators written in the
    /// original generators.
    pub fn kernel_of_rational_map(&self, values: &[Q]) -> Result<(FgAbelianGroup, Vec<Vec<i64>>)> {
        assert_eq!(values.len(), self.ngens);
        let l = values.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
        let a: Vec<i128> = values.iter().map(|v| (*v.numer() * (l / *v.denom())) as i128).collect();
        for r in &self.relations {
            let s: i128 = r.iter().zip(&a).map(|(&x, &y)| x as i128 * y).sum();
            if s != 0 {
                return Err(ArithError::InvalidArgument("map does not vanish on the relations".into()));
            }
        }
        let g = self.ngens;
        if a.iter().all(|&x| x == 0) {
            let basis = (0..g).map(|i| (0..g).map(|j| i64::from(i == j)).collect()).collect();
            return Ok((self.clone(), basis));
        }
        let mut red = Reducer::new(vec![a], g);
        red.smith()?;
        let basis: Vec<Vec<i64>> = (1..g).map(|j| (0..g).map(|i| red.q[i][j] as i64).collect()).collect();
        let rels: Vec<Vec<i64>> = self
            .relations
            .iter()
            .map(|r| {
                (1..g)
                    .map(|j| (0..g).map(|k| red.qinv[j][k] * r[k] as i128).sum::<i128>() as i64)
                    .collect()
            })
            .collect();
        Ok((FgAbelianGroup::new(g - 1, rels)?, basis))
    }
}

/// `smith_form` as a free function: the same group with its normal form forced.
pub fn smith_form(g: &FgAbelianGroup) -> FgAbelianGroup {
    let _ = g.nf();
    g.clone()
}

/// The subgroup of `Z/m_1 x ... x Z/m_k` generated by `gens`, listed in sorted order.
pub fn span_in_cyclic_product(moduli: &[u64], gens: &[Vec<i64>]) -> Vec<Vec<u64>> {
    use std::collections::BTreeSet;
    let norm = |v: &[i64]| -> Vec<u64> {
        v.iter().zip(moduli).map(|(&x, &m)| x.rem_euclid(m as i64) as u64).collect()
    };
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let zero = vec![0u64; moduli.len()];
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    let gens: Vec<Vec<u64>> = gens.iter().map(|g| norm(g)).collect();
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<u64> = x.iter().zip(g).zip(moduli).map(|((a, b), m)| (a + b) % m).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_examples() {
        let g = FgAbelianGroup::new(1, vec![vec![2]]).unwrap();
        assert_eq!(g.order(), Some(2));
        let z = FgAbelianGroup::new(1, vec![]).unwrap();
        assert_eq!(z.order(), None);
        assert_eq!(z.free_rank(), 1);
    }

    #[test]
    fn z2_times_z3_is_z6() {
        let g = FgAbelianGroup::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(g.invariant_factors(), vec![6]);
        assert_eq!(g.order(), Some(6));
        assert_eq!(g.element_order(&[1, 1]), Some(6));
        assert_eq!(g.element_order(&[1, 0]), Some(2));
    }

    #[test]
    fn coords_respect_relations() {
        let g = FgAbelianGroup::new(3, vec![vec![2, 4, 6], vec![0, 3, 9]]).unwrap();
        assert!(g.is_zero(&[2, 4, 6]));
        assert!(g.is_zero(&[2, 7, 15]));
        assert!(!g.is_zero(&[1, 0, 0]));
        let c = g.coords(&[5, -3, 2]);
        let back = g.from_coords(&c);
        assert!(g.equal(&back, &[5, -3, 2]));
    }

    #[test]
    fn kernel_of_degree() {
        // u1, u2, w with 2u1 = w, 2u2 = w and deg = (1/2, 1/2, 1).
        let g = FgAbelianGroup::new(3, vec![vec![2, 0, -1], vec![0, 2, -1]]).unwrap();
        let deg = [Q::new(1, 2), Q::new(1, 2), Q::from_integer(1)];
        let (k, basis) = g.kernel_of_rational_map(&deg).unwrap();
        assert_eq!(k.order(), Some(2));
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn enumerates_elements() {
        let g = FgAbelianGroup::new(2, vec![vec![2, 0], vec![0, 4]]).unwrap();
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 8);
        for (i, a) in els.iter().enumerate() {
            for b in &els[i + 1..] {
                assert!(!g.equal(a, b));
            }
        }
    }

    #[test]
    fn cyclic_span() {
        let s = span_in_cyclic_product(&[4, 2], &[vec![2, 1]]);
        assert_eq!(s.len(), 2);
    }
}
