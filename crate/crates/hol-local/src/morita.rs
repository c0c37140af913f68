//! Bimodule chains between a chain order `A` and the maximal order
//! `B = End(L_0)`, and the induced equivalence on right lattices.
//!
//! With `I = K^{d x d}` as `A`-`B`-bimodule the chain is
//! `I_i = Hom(L_0, L_i)` and its dual `J_j = Hom(L_{-j}, L_0)`; tensor
//! products become matrix products inside `M_d(K)`.

use hol_arith::Elem;
use rand::Rng;

use crate::chain::LatticeChain;
use crate::error::Result;
use crate::lattice::Lattice;
use crate::lmat::LMat;
use crate::order::ChainOrder;

#[derive(Clone, Debug)]
pub struct BimoduleChain {
    a: ChainOrder,
    b: ChainOrder,
}

/// Verified structural identities of a bimodule chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainChecks {
    /// `P I_i = I_{i-1}`.
    pub radical_shifts_i: bool,
    /// `I_i M = I_{i-t}` with `M = rad B`.
    pub b_radical_shifts_i: bool,
    /// `J_i P = J_{i-1}`.
    pub radical_shifts_j: bool,
    /// `sum_{i+j=-t+1} I_i J_j = A`.
    pub sum_is_order: bool,
    /// `dim I_i/I_{i-1}` for one period.
    pub graded_dims: Vec<usize>,
}

/// A transported chain `M_i = M I_i`, one period of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BChain {
    pub period: usize,
    pub lattices: Vec<Lattice>,
}

impl BChain {
    /// `M_i` for any integer `i`, using `M_{i-t} = t M_i`.
    pub fn get(&self, i: i64) -> Lattice {
        let t = self.period as i64;
        self.lattices[i.rem_euclid(t) as usize].shift(-i.div_euclid(t))
    }
}

/// Certificate that two right lattices are isomorphic: `g M = N` for an
/// invertible `r x r` matrix `g`.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub g: LMat,
}

impl BimoduleChain {
    pub fn new(a: &ChainOrder) -> Result<Self> {
        let c = LatticeChain::new(a.chain().field(), vec![a.chain().lattice(0)])?;
        let b = ChainOrder::from_chain(&c)?;
        Ok(BimoduleChain { a: a.clone(), b })
    }

    pub fn order(&self) -> &ChainOrder {
        &self.a
    }
    pub fn maximal_order(&self) -> &ChainOrder {
        &self.b
    }
    /// Type of `A`, which is also the period of the chains.
    pub fn type_t(&self) -> usize {
        self.a.invariants().type_t
    }

    pub fn i_lattice(&self, i: i64) -> Result<Lattice> {
        let c = self.a.chain();
        Lattice::hom_left(&c.lattice(0), &c.lattice(i))
    }

    pub fn j_lattice(&self, j: i64) -> Result<Lattice> {
        let c = self.a.chain();
        Lattice::hom_left(&c.lattice(-j), &c.lattice(0))
    }

    /// `sum_{i+j=-t+1} X_i J_j` over one period of `i`.
    fn glue(&self, x: impl Fn(i64) -> Result<Lattice>) -> Result<Lattice> {
        let t = self.type_t() as i64;
        let mut acc: Option<Lattice> = None;
        for i in 0..t {
            let term = x(i)?.product(&self.j_lattice(-t + 1 - i)?)?;
            acc = Some(match acc {
                None => term,
                Some(s) => s.sum(&term),
            });
        }
        Ok(acc.expect("t >= 1"))
    }

    pub fn check(&self) -> Result<ChainChecks> {
        let t = self.type_t() as i64;
        let p = self.a.radical();
        let m = self.b.radical();
        let mut radical_shifts_i = true;
        let mut b_radical_shifts_i = true;
        let mut radical_shifts_j = true;
        let mut graded_dims = Vec::new();
        for i in -t..=t {
            let ii = self.i_lattice(i)?;
            radical_shifts_i &= p.product(&ii)? == self.i_lattice(i - 1)?;
            b_radical_shifts_i &= ii.product(m)? == self.i_lattice(i - t)?;
            radical_shifts_j &= self.j_lattice(i)?.product(p)? == self.j_lattice(i - 1)?;
            if (1..=t).contains(&i) {
                graded_dims.push(ii.colength(&self.i_lattice(i - 1)?).expect("chain increases"));
            }
        }
        let sum_is_order = self.glue(|i| self.i_lattice(i))? == *self.a.lattice();
        Ok(ChainChecks { radical_shifts_i, b_radical_shifts_i, radical_shifts_j, sum_is_order, graded_dims })
    }

    /// `J_i I_j` as a `B`-`B`-bimodule lattice.
    pub fn ji_product(&self, i: i64, j: i64) -> Result<Lattice> {
        self.j_lattice(i)?.product(&self.i_lattice(j)?)
    }

    /// The functor `M -> {M I_i}`.
    pub fn transport(&self, m: &Lattice) -> Result<BChain> {
        let t = self.type_t();
        let lattices = (0..t as i64).map(|i| m.product(&self.i_lattice(i)?)).collect::<Result<_>>()?;
        Ok(BChain { period: t, lattices })
    }

    /// The quasi-inverse `{M_i} -> sum_{i+j=-t+1} M_i J_j`.
    pub fn untransport(&self, chain: &BChain) -> Result<Lattice> {
        self.glue(|i| Ok(chain.get(i)))
    }

    /// Checks that a transported chain is an increasing chain of right
    /// `B`-lattices with `M_i rad(B) = M_{i-t}`.
    pub fn is_b_chain(&self, chain: &BChain) -> Result<bool> {
        let t = chain.period as i64;
        for i in 0..t {
            let mi = chain.get(i);
            if !mi.product(self.b.lattice())?.is_subset_of(&mi)
                || !chain.get(i - 1).is_subset_of(&mi)
                || mi.product(self.b.radical())? != chain.get(i - t)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A random right `A`-lattice of shape `r x d`: the `A`-span of a few random
/// rows plus `t^floor O^{r x d}`.
pub fn random_right_lattice<R: Rng>(a: &ChainOrder, r: usize, floor: i64, rng: &mut R) -> Result<Lattice> {
    let d = a.dim();
    let f = a.chain().field().clone();
    let q = f.order();
    let basis = a.lattice().generators();
    let mut gens = Vec::new();
    for _ in 0..r + 1 {
        let mut x = LMat::zeros(&f, r, d);
        for i in 0..r {
            for j in 0..d {
                let k = rng.gen_range(-1..floor);
                let c: Elem = rng.gen_range(0..q);
                if c != 0 {
                    x = x.add(&LMat::unit(&f, r, d, i, j, c, k));
                }
            }
        }
        gens.extend(basis.iter().map(|b| x.mul(b)));
    }
    for i in 0..r {
        for j in 0..d {
            gens.push(LMat::unit(&f, r, d, i, j, 1, floor));
        }
    }
    Lattice::from_span(&f, r, d, &gens, floor, a.chain().precision())
}

/// The indecomposable right lattice `E_kk A` attached to coordinate `k`.
pub fn indecomposable(a: &ChainOrder, k: usize) -> Result<Lattice> {
    let d = a.dim();
    let f = a.chain().field();
    let gens: Vec<LMat> = a
        .lattice()
        .generators()
        .iter()
        .map(|g| LMat::from_entries(f, 1, d, (0..d).map(|j| g.get(k, j).clone()).collect()))
        .collect();
    let floor = a.lattice().window().1;
    Lattice::from_span(f, 1, d, &gens, floor, a.chain().precision())
}

/// Direct sum of two right lattices with the same row length.
pub fn direct_sum(x: &Lattice, y: &Lattice) -> Result<Lattice> {
    let (rx, d) = x.shape();
    let (ry, dy) = y.shape();
    assert_eq!(d, dy);
    let f = x.field();
    let mut gens: Vec<LMat> = x.generators().iter().map(|g| g.vcat(&LMat::zeros(f, ry, d))).collect();
    gens.extend(y.generators().iter().map(|g| LMat::zeros(f, rx, d).vcat(g)));
    let floor = x.window().1.max(y.window().1);
    Lattice::from_span(f, rx + ry, d, &gens, floor, x.precision().max(y.precision()))
}

/// Searches for an invertible `g` with `g M = N` among elements of
/// `Hom(M, N)`; exact verification of every candidate.
pub fn find_isomorphism<R: Rng>(m: &Lattice, n: &Lattice, samples: usize, rng: &mut R) -> Result<Option<IsoCertificate>> {
    if n.shape() != m.shape() {
        return Ok(None);
    }
    // g acts on the left, so g ranges over {g : g M <= N}
    let homs = Lattice::hom_left(m, n)?;
    let (r, c) = homs.shape();
    let f = m.field();
    let hi = homs.window().1;
    for _ in 0..samples {
        // `random_element` stops below `t^hi`; add a random term at `t^hi`
        // so that homomorphism lattices equal to `t^hi O^n` are sampled too
        let top: Vec<Elem> = (0..r * c).map(|_| rng.gen_range(0..f.order())).collect();
        let g = homs.random_element(rng).add(&LMat::from_consts(f, r, c, &top).shift(hi));
        if g.det().is_zero() {
            continue;
        }
        if m.left_mul(&g)? == *n {
            return Ok(Some(IsoCertificate { g }));
        }
    }
    Ok(None)
}

/// A random invertible `r x r` matrix over `F[t, 1/t]` with determinant `t`.
pub fn random_basis_change<R: Rng>(field: &hol_arith::Fq, r: usize, rng: &mut R) -> LMat {
    let q = field.order();
    let mut g = LMat::identity(field, r);
    for _ in 0..3 * r {
        if r >= 2 {
            let i = rng.gen_range(0..r);
            let j = (i + rng.gen_range(1..r)) % r;
            let x = hol_arith::LPoly::monomial(rng.gen_range(1..q), rng.gen_range(-1..2));
            g = g.mul(&LMat::elementary(field, r, i, j, x));
        }
    }
    let k = rng.gen_range(0..r);
    let mut scale = LMat::identity(field, r);
    scale.set(k, k, hol_arith::LPoly::monomial(1, 1));
    g.mul(&scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hol_arith::Fq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn order(jumps: &[usize]) -> ChainOrder {
        let f = Fq::prime(2).unwrap();
        let d: usize = jumps.iter().sum();
        ChainOrder::from_chain(&LatticeChain::standard(&f, jumps, 4 * d * jumps.len()).unwrap()).unwrap()
    }

    #[test]
    fn chain_identities() {
        for jumps in [&[2][..], &[1, 1], &[1, 1, 1], &[2, 1]] {
            let bc = BimoduleChain::new(&order(jumps)).unwrap();
            let c = bc.check().unwrap();
            assert!(c.radical_shifts_i && c.b_radical_shifts_i && c.radical_shifts_j && c.sum_is_order, "{jumps:?}");
        }
    }

    #[test]
    fn ji_products_jump_at_multiples_of_t() {
        let bc = BimoduleChain::new(&order(&[1, 1, 1])).unwrap();
        let t = 3;
        for i in -3..=3i64 {
            for j in -3..=3i64 {
                let base = bc.ji_product(i, j).unwrap();
                let up = bc.ji_product(i + 1, j).unwrap();
                assert_eq!(up, bc.ji_product(i, j + 1).unwrap());
                let expect = if (i + j).rem_euclid(t) == 0 { base.shift(-1) } else { base };
                assert_eq!(up, expect, "i={i} j={j}");
            }
        }
        assert_eq!(bc.ji_product(0, 0).unwrap(), *bc.maximal_order().lattice());
    }

    #[test]
    fn round_trip_of_regular_module() {
        let a = order(&[1, 1]);
        let bc = BimoduleChain::new(&a).unwrap();
        let ch = bc.transport(a.lattice()).unwrap();
        assert!(bc.is_b_chain(&ch).unwrap());
        assert_eq!(ch.get(0), bc.i_lattice(0).unwrap());
        assert_eq!(bc.untransport(&ch).unwrap(), *a.lattice());
    }

    #[test]
    fn isomorphism_search_finds_basis_change() {
        let a = order(&[1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_right_lattice(&a, 2, 2, &mut rng).unwrap();
        let g0 = random_basis_change(a.chain().field(), 2, &mut rng);
        let n = m.left_mul(&g0).unwrap();
        let cert = find_isomorphism(&m, &n, 200, &mut rng).unwrap().expect("isomorphic");
        assert_eq!(m.left_mul(&cert.g).unwrap(), n);
    }

    #[test]
    fn direct_sum_rank() {
        let a = order(&[1, 1]);
        let s = direct_sum(a.lattice(), &indecomposable(&a, 0).unwrap()).unwrap();
        assert_eq!(s.shape(), (3, 2));
    }
}
