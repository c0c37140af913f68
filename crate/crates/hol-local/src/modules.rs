//! Right lattices over chain orders: decomposition into indecomposables and
//! the stably-free test.

use crate::error::{LocalError, Result};
use crate::lattice::Lattice;
use crate::lmat::LMat;
use crate::order::ChainOrder;

/// Multiplicities of the indecomposable classes in a right `A`-lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `multiplicities[j]` counts copies of the class attached to `L_{j+1}/L_j`.
    pub multiplicities: Vec<usize>,
    pub o_rank: usize,
    pub stably_free: bool,
    pub free: bool,
}

/// For each standard basis vector, the chain step `j` (0-based) on whose
/// quotient `L_{j+1}/L_j` the idempotent `E_kk` acts nontrivially.
pub fn coordinate_blocks(a: &ChainOrder) -> Result<Vec<usize>> {
    let d = a.dim();
    let f = a.chain().field();
    let chain = a.chain();
    (0..d)
        .map(|k| {
            let e = LMat::unit(f, d, d, k, k, 1, 0);
            if !a.lattice().contains(&e) {
                return Err(LocalError::InvalidChain("chain is not adapted to the standard basis".into()));
            }
            (0..chain.period())
                .find(|&j| {
                    let (lo, hi) = (chain.lattice(j as i64), chain.lattice(j as i64 + 1));
                    hi.generators().iter().any(|g| !lo.contains(&e.mul(g)))
                })
                .ok_or_else(|| LocalError::InvalidChain("idempotent acts trivially on every step".into()))
        })
        .collect()
}

/// The central idempotents of `A/P`, lifted to diagonal matrices.
pub fn block_idempotents(a: &ChainOrder) -> Result<Vec<LMat>> {
    let d = a.dim();
    let f = a.chain().field();
    let blocks = coordinate_blocks(a)?;
    Ok((0..a.chain().period())
        .map(|j| {
            let mut m = LMat::zeros(f, d, d);
            for (k, _) in blocks.iter().enumerate().filter(|(_, &b)| b == j) {
                m = m.add(&LMat::unit(f, d, d, k, k, 1, 0));
            }
            m
        })
        .collect())
}

/// Decomposes a right `A`-lattice `m` (of shape `r x d`) as a sum of
/// indecomposables, reading multiplicities off the isotypic parts of `M/MP`.
pub fn stably_free_test(a: &ChainOrder, m: &Lattice) -> Result<Decomposition> {
    let d = a.dim();
    if m.shape().1 != d {
        return Err(LocalError::InvalidModule(format!("module rows must have length {d}")));
    }
    if !m.product(a.lattice())?.is_subset_of(m) {
        return Err(LocalError::InvalidModule("lattice is not stable under the order".into()));
    }
    let mp = m.product(a.radical())?;
    let gens = m.generators();
    let invariants = &a.invariants().invariants;
    let mut multiplicities = Vec::new();
    for (j, eps) in block_idempotents(a)?.iter().enumerate() {
        let mut span: Vec<LMat> = gens.iter().map(|g| g.mul(eps)).collect();
        span.extend(mp.generators());
        let part = Lattice::from_span(m.field(), m.shape().0, d, &span, mp.window().1, m.precision())?;
        let dim = part.colength(&mp).expect("MP lies in the span");
        if dim % invariants[j] != 0 {
            return Err(LocalError::InvalidModule("isotypic dimension not a multiple of the block size".into()));
        }
        multiplicities.push(dim / invariants[j]);
    }
    let o_rank = m.shape().0 * d;
    let stably_free = multiplicities.windows(2).all(|w| w[0] == w[1]) && multiplicities[0] > 0;
    let e = a.index();
    if stably_free {
        debug_assert_eq!(o_rank % (e * d), 0);
    }
    let free = stably_free && o_rank % (d * d) == 0 && a.invariants().principal;
    Ok(Decomposition { multiplicities, o_rank, stably_free, free })
}
