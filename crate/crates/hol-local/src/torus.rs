//! Split maximal tori of chain orders.

use hol_arith::linalg::kernel_of_columns;
use hol_arith::{Elem, LPoly};
use rand::Rng;

use crate::error::{LocalError, Result};
use crate::lattice::{vectorize, Lattice};
use crate::lmat::LMat;
use crate::order::ChainOrder;

/// A split torus given by its primitive idempotents; the torus is their `O`-span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxTorus {
    pub idempotents: Vec<LMat>,
}

/// Outcome of the equivalent characterizations of a maximal torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusReport {
    pub commutative: bool,
    pub rank: usize,
    pub self_centralizing: bool,
    /// `Rad(T) = T cap P = tT`.
    pub radical_is_t_cap_p: bool,
    /// `dim T / (T cap P)`; equals `d` exactly when the residue torus is a
    /// maximal commutative separable subalgebra of `A/P`.
    pub residue_dim: usize,
}

impl TorusReport {
    pub fn passes(&self, d: usize) -> bool {
        self.commutative && self.rank == d && self.self_centralizing && self.radical_is_t_cap_p && self.residue_dim == d
    }
}

impl MaxTorus {
    /// The diagonal torus `diag(O, ..., O)`.
    pub fn diagonal(a: &ChainOrder) -> Result<Self> {
        let d = a.dim();
        let f = a.chain().field();
        let idempotents: Vec<LMat> = (0..d).map(|k| LMat::unit(f, d, d, k, k, 1, 0)).collect();
        if idempotents.iter().any(|e| !a.lattice().contains(e)) {
            return Err(LocalError::InvalidChain("chain is not adapted to the standard basis".into()));
        }
        Ok(MaxTorus { idempotents })
    }

    pub fn conjugate(&self, u: &LMat, u_inv: &LMat) -> MaxTorus {
        MaxTorus { idempotents: self.idempotents.iter().map(|e| u.mul(e).mul(u_inv)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.idempotents.len()
    }
}

/// `{x : x_c in t^diag O on the diagonal, t^off O off it}`.
fn diag_window(a: &ChainOrder, diag: i64, off: i64) -> Result<Lattice> {
    let d = a.dim();
    let exps: Vec<i64> = (0..d * d).map(|c| if c / d == c % d { diag } else { off }).collect();
    Lattice::monomial(a.chain().field(), d, d, &exps, a.chain().precision().max((off - diag).unsigned_abs() as usize))
}

/// Checks the diagonal torus of `a` against the equivalent criteria.
pub fn check_diagonal_torus(a: &ChainOrder, t: &MaxTorus) -> Result<TorusReport> {
    let d = a.dim();
    let f = a.chain().field();
    let commutative = t
        .idempotents
        .iter()
        .all(|x| t.idempotents.iter().all(|y| x.mul(y) == y.mul(x)));
    let sum = t.idempotents.iter().fold(LMat::zeros(f, d, d), |s, e| s.add(e));
    let rank = if sum == LMat::identity(f, d) { t.rank() } else { 0 };
    // Everything of exponent >= n off the diagonal lies in A and P, so
    // intersecting with the window isolates the diagonal parts exactly.
    let n = a.lattice().window().1.max(a.radical().window().1).max(1);
    let t_n = diag_window(a, 0, n)?;
    let self_centralizing = a.lattice().intersection(&diag_window(a, a.lattice().window().0, n)?) == t_n;
    let t_cap_p = a.radical().intersection(&t_n);
    let radical_is_t_cap_p = t_cap_p == diag_window(a, 1, n)?;
    let residue_dim = t_n.colength(&t_cap_p).expect("intersection lies inside");
    Ok(TorusReport { commutative, rank, self_centralizing, radical_is_t_cap_p, residue_dim })
}

/// A unit `u` of `A` with constant-plus-polynomial entries whose inverse is
/// polynomial as well: a product of constant diagonals and elementary
/// matrices lying in `A`.
pub fn random_unit<R: Rng>(a: &ChainOrder, steps: usize, rng: &mut R) -> (LMat, LMat) {
    let d = a.dim();
    let f = a.chain().field().clone();
    let q = f.order();
    let mut u = LMat::identity(&f, d);
    let mut v = LMat::identity(&f, d);
    for _ in 0..steps {
        if d >= 2 && rng.gen_bool(0.7) {
            let i = rng.gen_range(0..d);
            let j = (i + rng.gen_range(1..d)) % d;
            let c = rng.gen_range(1..q);
            let k = rng.gen_range(0..2);
            let x = LPoly::monomial(c, k);
            let e = LMat::elementary(&f, d, i, j, x.clone());
            if !a.lattice().contains(&e) {
                continue;
            }
            let e_inv = LMat::elementary(&f, d, i, j, x.neg(&f));
            u = u.mul(&e);
            v = e_inv.mul(&v);
        } else {
            let diag: Vec<Elem> = (0..d).map(|_| rng.gen_range(1..q)).collect();
            let dm = LMat::diagonal(&f, &diag.iter().map(|&c| LPoly::constant(c)).collect::<Vec<_>>());
            let dinv =
                LMat::diagonal(&f, &diag.iter().map(|&c| LPoly::constant(f.inv(c))).collect::<Vec<_>>());
            u = u.mul(&dm);
            v = dinv.mul(&v);
        }
    }
    (u, v)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches for a unit `v` of `a` with `v E_k v^{-1} = E'_{pi(k)}` for some
/// permutation `pi`, among matrices with entries supported on exponents
/// `[lo_A, lo_A + span)`.
pub fn conjugating_unit<R: Rng>(
    a: &ChainOrder,
    t1: &MaxTorus,
    t2: &MaxTorus,
    span: i64,
    samples: usize,
    rng: &mut R,
) -> Result<Option<(LMat, Vec<usize>)>> {
    let d = a.dim();
    let f = a.chain().field().clone();
    let q = f.order();
    let lo = a.lattice().window().0;
    for perm in permutations(d) {
        let mut images: Vec<Vec<LMat>> = Vec::new();
        let mut unknowns = Vec::new();
        for k in lo..lo + span {
            for i in 0..d {
                for j in 0..d {
                    let x = LMat::unit(&f, d, d, i, j, 1, k);
                    images.push(
                        (0..d)
                            .map(|l| x.mul(&t1.idempotents[l]).sub(&t2.idempotents[perm[l]].mul(&x)))
                            .collect(),
                    );
                    unknowns.push(x);
                }
            }
        }
        let vlo = images.iter().flatten().filter_map(|m| m.valuation()).min().unwrap_or(0);
        let vhi = images.iter().flatten().filter_map(|m| m.top()).max().unwrap_or(0) + 1;
        let cols: Vec<Vec<Elem>> =
            images.iter().map(|ms| ms.iter().flat_map(|m| vectorize(m, vlo, vhi)).collect()).collect();
        let height = cols[0].len();
        let ker = kernel_of_columns(&f, height, &cols);
        if ker.is_empty() {
            continue;
        }
        for _ in 0..samples {
            let mut v = LMat::zeros(&f, d, d);
            for b in &ker {
                let c = rng.gen_range(0..q);
                if c == 0 {
                    continue;
                }
                for (&bi, x) in b.iter().zip(&unknowns) {
                    if bi != 0 {
                        v = v.add(&x.scale(f.mul(c, bi)));
                    }
                }
            }
            if v.det().valuation() != Some(0) || !a.lattice().contains(&v) {
                continue;
            }
            if a.lattice().left_mul(&v)? == *a.lattice() {
                return Ok(Some((v, perm)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LatticeChain;
    use hol_arith::Fq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn order(q: u32, jumps: &[usize]) -> ChainOrder {
        let f = Fq::of_order(q).unwrap();
        ChainOrder::from_chain(&LatticeChain::standard(&f, jumps, 24).unwrap()).unwrap()
    }

    #[test]
    fn diagonal_torus_passes() {
        for jumps in [&[2][..], &[1, 1], &[1, 1, 1], &[2, 1]] {
            let a = order(2, jumps);
            let t = MaxTorus::diagonal(&a).unwrap();
            let d = a.dim();
            assert!(check_diagonal_torus(&a, &t).unwrap().passes(d), "{jumps:?}");
        }
    }

    #[test]
    fn conjugate_torus_is_found() {
        let a = order(3, &[1, 1]);
        let t = MaxTorus::diagonal(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (u, u_inv) = random_unit(&a, 6, &mut rng);
        assert_eq!(u.mul(&u_inv), LMat::identity(a.chain().field(), 2));
        let t2 = t.conjugate(&u, &u_inv);
        let span = u.top().unwrap().max(u_inv.top().unwrap()) + 1;
        let (v, perm) = conjugating_unit(&a, &t, &t2, span, 50, &mut rng).unwrap().expect("conjugate");
        for (k, e) in t.idempotents.iter().enumerate() {
            assert_eq!(v.mul(e), t2.idempotents[perm[k]].mul(&v));
        }
    }
}
