//! Hereditary orders `End(L_*)` of lattice chains and their ideal theory.

use hol_arith::{Embedding, Q};

use crate::algebra::{FiniteAlgebra, Quotient};
use crate::chain::LatticeChain;
use crate::error::{LocalError, Result};
use crate::lattice::Lattice;
use crate::lmat::LMat;

/// Structural invariants of a chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderInvariants {
    /// Number of distinct maximal overorders.
    pub type_t: usize,
    pub invariants: Vec<usize>,
    pub index_e: usize,
    pub principal: bool,
    /// `n_1` when principal, so that `d = e f`.
    pub f: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ChainOrder {
    chain: LatticeChain,
    order: Lattice,
    radical: Lattice,
    inv: OrderInvariants,
}

impl PartialEq for ChainOrder {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order
    }
}

/// `{f : f L_i <= L_{i+m} for all i}`.
fn end_shift(chain: &LatticeChain, m: i64) -> Result<Lattice> {
    let e = chain.period() as i64;
    let mut acc: Option<Lattice> = None;
    for i in 0..e {
        let h = Lattice::hom_left(&chain.lattice(i), &chain.lattice(i + m))?;
        acc = Some(match acc {
            None => h,
            Some(a) => a.intersection(&h),
        });
    }
    Ok(acc.expect("period is positive"))
}

impl ChainOrder {
    /// Builds `End(L_*)` and verifies the order axioms and the radical identity.
    pub fn from_chain(chain: &LatticeChain) -> Result<Self> {
        let d = chain.dim();
        let field = chain.field().clone();
        let order = end_shift(chain, 0)?;
        if !order.contains(&LMat::identity(&field, d)) || order.product(&order)? != order {
            return Err(LocalError::InvalidChain("endomorphism lattice is not an order".into()));
        }
        let radical = end_shift(chain, -1)?;
        let invariants = chain.invariants();
        let t = order.shift(1);
        let mut index_e = 0;
        let mut pw = radical.clone();
        for k in 1..=d {
            if pw == t {
                index_e = k;
                break;
            }
            pw = pw.product(&radical)?;
        }
        if index_e == 0 {
            return Err(LocalError::PrecisionFailure("no power of the radical equals tA".into()));
        }
        let mut distinct: Vec<Lattice> = Vec::new();
        for i in 0..chain.period() as i64 {
            let l = chain.lattice(i);
            let m = Lattice::hom_left(&l, &l)?;
            if !distinct.contains(&m) {
                distinct.push(m);
            }
        }
        let principal = invariants.windows(2).all(|w| w[0] == w[1]);
        let inv = OrderInvariants {
            type_t: distinct.len(),
            f: principal.then_some(invariants[0]),
            invariants,
            index_e,
            principal,
        };
        Ok(ChainOrder { chain: chain.clone(), order, radical, inv })
    }

    pub fn chain(&self) -> &LatticeChain {
        &self.chain
    }
    pub fn lattice(&self) -> &Lattice {
        &self.order
    }
    pub fn radical(&self) -> &Lattice {
        &self.radical
    }
    pub fn invariants(&self) -> &OrderInvariants {
        &self.inv
    }
    pub fn dim(&self) -> usize {
        self.chain.dim()
    }
    pub fn index(&self) -> usize {
        self.inv.index_e
    }

    /// `P^m = End^{-m}(L_*)`.
    pub fn ideal_power(&self, m: i64) -> Result<Lattice> {
        if m.unsigned_abs() as usize > self.chain.precision() {
            return Err(LocalError::PrecisionFailure(format!("|{m}| exceeds the precision budget")));
        }
        end_shift(&self.chain, -m)
    }

    /// `P^m` as a product of copies of `P` or `P^{-1}`.
    pub fn ideal_power_by_products(&self, m: i64) -> Result<Lattice> {
        let base = if m >= 0 { self.radical.clone() } else { self.ideal_power(-1)? };
        let mut acc = self.order.clone();
        for _ in 0..m.unsigned_abs() {
            acc = acc.product(&base)?;
        }
        Ok(acc)
    }

    /// `A / P` as a finite algebra.
    pub fn residue_algebra(&self) -> Result<(FiniteAlgebra, Quotient)> {
        FiniteAlgebra::quotient(&self.order, &self.radical)
    }

    /// Checks the defining properties of the radical: a two-sided ideal, a
    /// semisimple quotient and `P^e = tA`.
    pub fn verify_radical(&self) -> Result<bool> {
        let p = &self.radical;
        let a = &self.order;
        if !p.is_subset_of(a) || !a.product(p)?.is_subset_of(p) || !p.product(a)?.is_subset_of(p) {
            return Ok(false);
        }
        Ok(self.residue_is_semisimple()? && self.ideal_power_by_products(self.index() as i64)? == a.shift(1))
    }

    /// `A/P` embeds into the product of `End(L_i / L_{i-1})`; it is semisimple
    /// exactly when it fills that product, i.e. has dimension `sum n_i^2`.
    pub fn residue_is_semisimple(&self) -> Result<bool> {
        let dim = self.order.colength(&self.radical).expect("P <= A");
        let target: usize = self.inv.invariants.iter().map(|n| n * n).sum();
        Ok(dim == target)
    }

    /// Among the ideals `P^k`, `k = 0..=e`, the proper ones with semisimple
    /// quotient and `e`-th power `tA`. Non-semisimplicity of `A/P^k`, `k >= 2`,
    /// is witnessed by the nonzero nilpotent ideal `P/P^k`.
    pub fn radical_candidates(&self) -> Result<Vec<usize>> {
        let e = self.index();
        let t = self.order.shift(1);
        let mut out = Vec::new();
        for k in 0..=e {
            let m = self.ideal_power(k as i64)?;
            if m == self.order {
                continue;
            }
            let semisimple = if k == 1 {
                self.residue_is_semisimple()?
            } else {
                // P/P^k is an ideal of A/P^k with (P/P^k)^k = 0
                let nilpotent_witness =
                    self.radical != m && self.ideal_power_by_products(k as i64)?.is_subset_of(&m);
                !nilpotent_witness
            };
            if !semisimple {
                continue;
            }
            let mut pw = self.order.clone();
            for _ in 0..e {
                pw = pw.product(&m)?;
            }
            if pw == t {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// The orders `End(L_i)` containing `A`, one per distinct lattice class.
    pub fn maximal_overorders(&self) -> Result<Vec<ChainOrder>> {
        let mut out: Vec<ChainOrder> = Vec::new();
        for i in 0..self.chain.period() as i64 {
            let c = LatticeChain::new(self.chain.field(), vec![self.chain.lattice(i)])?;
            let o = ChainOrder::from_chain(&c)?;
            if !out.contains(&o) {
                out.push(o);
            }
        }
        Ok(out)
    }

    /// `v_A(g) = m/e` when `gA = Ag = P^m`; `None` when `g` does not normalize `A`.
    pub fn normalizer_valuation(&self, g: &LMat) -> Result<Option<Q>> {
        let d = self.dim() as i64;
        let e = self.index() as i64;
        let vdet = g
            .det()
            .valuation()
            .ok_or_else(|| LocalError::InvalidArgument("singular matrix".into()))?;
        let left = self.order.left_mul(g)?;
        if left != self.order.right_mul(g)? {
            return Ok(None);
        }
        // gA = P^m forces d * m / e = v(det g)
        if (vdet * e) % d != 0 {
            return Ok(None);
        }
        let m = vdet * e / d;
        Ok((left == self.ideal_power(m)?).then(|| Q::new(m, e)))
    }

    /// The order `A (x) O'` for `O' = O (x) F'` along `emb`.
    pub fn base_change(&self, emb: &Embedding) -> Result<ChainOrder> {
        ChainOrder::from_chain(&self.chain.base_change(emb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hol_arith::{Fq, LPoly};

    fn order(q: u32, jumps: &[usize]) -> ChainOrder {
        let f = Fq::of_order(q).unwrap();
        let d: usize = jumps.iter().sum();
        ChainOrder::from_chain(&LatticeChain::standard(&f, jumps, 4 * d * jumps.len()).unwrap()).unwrap()
    }

    fn mono(q: u32, d: usize, exps: &[i64]) -> Lattice {
        Lattice::monomial(&Fq::of_order(q).unwrap(), d, d, exps, 32).unwrap()
    }

    #[test]
    fn maximal_order() {
        let a = order(2, &[2]);
        assert_eq!(*a.lattice(), mono(2, 2, &[0, 0, 0, 0]));
        assert_eq!(*a.radical(), mono(2, 2, &[1, 1, 1, 1]));
        let inv = a.invariants();
        assert_eq!((inv.type_t, inv.index_e, inv.principal, inv.f), (1, 1, true, Some(2)));
        assert_eq!(a.ideal_power(-1).unwrap(), mono(2, 2, &[-1, -1, -1, -1]));
    }

    #[test]
    fn iwahori_order() {
        let a = order(2, &[1, 1]);
        // upper triangular mod t
        assert_eq!(*a.lattice(), mono(2, 2, &[0, 0, 1, 0]));
        assert_eq!(*a.radical(), mono(2, 2, &[1, 0, 1, 1]));
        assert!(a.verify_radical().unwrap());
        assert_eq!(a.ideal_power(2).unwrap(), a.lattice().shift(1));
        assert_eq!(a.ideal_power(-1).unwrap(), mono(2, 2, &[0, -1, 0, 0]));
        let inv = a.invariants();
        assert_eq!((inv.type_t, inv.index_e, inv.f), (2, 2, Some(1)));
    }

    #[test]
    fn unequal_invariants() {
        let a = order(3, &[2, 1]);
        assert_eq!(a.invariants().invariants, vec![2, 1]);
        assert!(!a.invariants().principal);
        assert_eq!(a.index(), 2);
        assert!(a.verify_radical().unwrap());
    }

    #[test]
    fn overorders_sum_to_inverse_power() {
        let a = order(2, &[1, 1, 1]);
        let maxes = a.maximal_overorders().unwrap();
        assert_eq!(maxes.len(), 3);
        let sum = maxes.iter().skip(1).fold(maxes[0].lattice().clone(), |s, m| s.sum(m.lattice()));
        let meet = maxes.iter().skip(1).fold(maxes[0].lattice().clone(), |s, m| s.intersection(m.lattice()));
        assert_eq!(sum, a.ideal_power(-2).unwrap());
        assert_eq!(meet, *a.lattice());
    }

    #[test]
    fn normalizer_examples() {
        let a = order(2, &[1, 1]);
        let f = a.chain().field().clone();
        let mut pi = LMat::zeros(&f, 2, 2);
        pi.set(0, 1, LPoly::one());
        pi.set(1, 0, LPoly::monomial(1, 1));
        assert_eq!(a.normalizer_valuation(&pi).unwrap(), Some(Q::new(1, 2)));
        assert_eq!(a.normalizer_valuation(&LMat::identity(&f, 2).shift(1)).unwrap(), Some(Q::from(1)));
        let u = LMat::from_consts(&f, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(a.normalizer_valuation(&u).unwrap(), Some(Q::from(0)));
        let w = LMat::from_consts(&f, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.normalizer_valuation(&w).unwrap(), None);
        assert!(a.normalizer_valuation(&LMat::zeros(&f, 2, 2)).is_err());
    }

    #[test]
    fn radical_is_the_unique_candidate() {
        for jumps in [&[1, 1][..], &[2, 1], &[1, 1, 1]] {
            assert_eq!(order(2, jumps).radical_candidates().unwrap(), vec![1]);
        }
    }
}
