//! Periodic lattice chains in `K^d`.

use hol_arith::{Embedding, Fq};
use serde::{Deserialize, Serialize};

use crate::error::{LocalError, Result};
use crate::lattice::Lattice;

/// A chain `L_0 < L_1 < ... < L_{e-1} < L_e = t^{-1} L_0`, extended to all
/// indices by `L_{i-e} = t L_i`. Lattices are column lattices of shape `d x 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeChain {
    field: Fq,
    d: usize,
    period: Vec<Lattice>,
}

/// JSON form of a standard chain with prescribed invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDescriptor {
    pub q: u32,
    pub d: usize,
    pub e: usize,
    pub jumps: Vec<usize>,
}

/// Working precision adopted for a chain of dimension `d` and period `e`.
pub fn default_precision(d: usize, e: usize) -> usize {
    4 * d * e
}

impl LatticeChain {
    /// Validates a chain given by one period `L_0, ..., L_{e-1}`.
    pub fn new(field: &Fq, lattices: Vec<Lattice>) -> Result<Self> {
        let e = lattices.len();
        let d = lattices
            .first()
            .map(|l| l.shape().0)
            .ok_or_else(|| LocalError::InvalidChain("empty chain".into()))?;
        if e > d {
            return Err(LocalError::InvalidChain(format!("period {e} exceeds dimension {d}")));
        }
        if lattices.iter().any(|l| l.shape() != (d, 1) || l.field() != field) {
            return Err(LocalError::InvalidChain("lattices must be d x 1 columns over one field".into()));
        }
        let chain = LatticeChain { field: field.clone(), d, period: lattices };
        for i in 0..e as i64 {
            let (a, b) = (chain.lattice(i), chain.lattice(i + 1));
            if !a.is_subset_of(&b) || a == b {
                return Err(LocalError::InvalidChain(format!("L_{i} is not strictly inside L_{}", i + 1)));
            }
        }
        Ok(chain)
    }

    /// The standard chain with invariants `jumps`: `L_i` for `0 <= i < e` is
    /// `t^{-1} O` on the first `n_1 + ... + n_i` coordinates and `O` elsewhere.
    pub fn standard(field: &Fq, jumps: &[usize], prec: usize) -> Result<Self> {
        if jumps.is_empty() || jumps.contains(&0) {
            return Err(LocalError::InvalidChain("jumps must be positive".into()));
        }
        let d: usize = jumps.iter().sum();
        let mut lattices = Vec::with_capacity(jumps.len());
        let mut s = 0;
        for n in jumps {
            let exps: Vec<i64> = (0..d).map(|k| if k < s { -1 } else { 0 }).collect();
            lattices.push(Lattice::monomial(field, d, 1, &exps, prec)?);
            s += n;
        }
        Self::new(field, lattices)
    }

    pub fn from_descriptor(desc: &ChainDescriptor, prec: Option<usize>) -> Result<Self> {
        if desc.jumps.len() != desc.e {
            return Err(LocalError::InvalidChain(format!(
                "{} jumps given for period {}",
                desc.jumps.len(),
                desc.e
            )));
        }
        if desc.jumps.iter().sum::<usize>() != desc.d {
            return Err(LocalError::InvalidChain("jumps must sum to d".into()));
        }
        if desc.d == 0 || desc.d > 6 {
            return Err(LocalError::InvalidChain("d must lie in 1..=6".into()));
        }
        let field = Fq::of_order(desc.q)?;
        Self::standard(&field, &desc.jumps, prec.unwrap_or(default_precision(desc.d, desc.e)))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn period(&self) -> usize {
        self.period.len()
    }
    pub fn precision(&self) -> usize {
        self.period[0].precision()
    }

    /// `L_i` for any integer `i`.
    pub fn lattice(&self, i: i64) -> Lattice {
        let e = self.period() as i64;
        let (q, r) = (i.div_euclid(e), i.rem_euclid(e));
        self.period[r as usize].shift(-q)
    }

    /// `n_i = dim L_i / L_{i-1}` for `i = 1..=e`.
    pub fn invariants(&self) -> Vec<usize> {
        (1..=self.period() as i64)
            .map(|i| self.lattice(i).colength(&self.lattice(i - 1)).expect("chain is increasing"))
            .collect()
    }

    /// The chain re-indexed by `L'_i = L_{i+k}`.
    pub fn reindexed(&self, k: i64) -> Self {
        let period = (0..self.period() as i64).map(|i| self.lattice(i + k)).collect();
        LatticeChain { field: self.field.clone(), d: self.d, period }
    }

    pub fn with_precision(&self, prec: usize) -> Result<Self> {
        let period = self.period.iter().map(|l| l.with_precision(prec)).collect::<Result<_>>()?;
        Ok(LatticeChain { field: self.field.clone(), d: self.d, period })
    }

    /// Extension of scalars along `emb`.
    pub fn base_change(&self, emb: &Embedding) -> Self {
        let period = self.period.iter().map(|l| l.base_change(emb)).collect();
        LatticeChain { field: emb.dst.clone(), d: self.d, period }
    }
}
