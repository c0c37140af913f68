//! Short exact sequences `0 -> M' -> M -> K -> 0` of right modules over the
//! standard chain order of index `d`, with `M` free and `K` killed by `t`.

use hol_arith::{Elem, Exec, Fq};
use hol_local::phi::radical_generator;
use hol_local::{stably_free_test, ChainOrder, Lattice, LatticeChain, LMat, Quotient};
use rand::Rng;

use crate::candidate::SpecialCandidate;
use crate::error::{Result, SpecialError};
use crate::fmat::FMat;

/// The order of `d x d` matrices that are upper triangular modulo `t`.
pub fn standard_model(field: &Fq, d: usize) -> Result<ChainOrder> {
    let prec = 4 * d * d + 4;
    Ok(ChainOrder::from_chain(&LatticeChain::standard(field, &vec![1; d], prec)?)?)
}

/// Places `g` in block row `k` of an `r d x d` matrix.
fn block(g: &LMat, k: usize, r: usize) -> LMat {
    let (d, f) = (g.cols(), g.field().clone());
    let mut out = LMat::zeros(&f, r * d, d);
    for i in 0..d {
        for j in 0..d {
            out.set(k * d + i, j, g.get(i, j).clone());
        }
    }
    out
}

/// `A^r`, written as `r d x d` matrices whose `d x d` blocks lie in `A`.
pub fn free_module(a: &ChainOrder, r: usize) -> Result<Lattice> {
    let lat = a.lattice();
    let d = a.dim();
    let gens: Vec<LMat> = (0..r).flat_map(|k| lat.generators().into_iter().map(move |g| block(&g, k, r))).collect();
    Ok(Lattice::from_span(lat.field(), r * d, d, &gens, lat.window().1, lat.precision())?)
}

/// `t M + sum_k x_k A`.
pub fn submodule_generated(a: &ChainOrder, m: &Lattice, xs: &[LMat]) -> Result<Lattice> {
    let mut gens = m.shift(1).generators();
    let order_gens = a.lattice().generators();
    for x in xs {
        gens.extend(order_gens.iter().map(|b| x.mul(b)));
    }
    let (rows, cols) = m.shape();
    Ok(Lattice::from_span(m.field(), rows, cols, &gens, m.shift(1).window().1, m.precision())?)
}

/// A random sequence with `M = A^r`: `M'` is generated by `t M` and a few
/// random elements, each optionally cut down to one eigenspace so that
/// both special and non-special quotients occur.
pub fn random_sequence<R: Rng>(a: &ChainOrder, r: usize, rng: &mut R) -> Result<(Lattice, Lattice)> {
    let m = free_module(a, r)?;
    let d = a.dim();
    let f = m.field().clone();
    let count = rng.gen_range(0..=r * d);
    let xs: Vec<LMat> = (0..count)
        .map(|_| {
            let x = m.random_element(rng);
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..d);
                x.mul(&LMat::unit(&f, d, d, i, i, 1, 0))
            } else {
                x
            }
        })
        .collect();
    let sub = submodule_generated(a, &m, &xs)?;
    Ok((m, sub))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    /// `dim K e_i` for each diagonal idempotent.
    pub dims: Vec<usize>,
    pub quotient_special: bool,
    /// The common dimension when `K` is special.
    pub rank: Option<usize>,
    pub kernel_stably_free: bool,
    pub kernel_free: bool,
}

impl FiltrationReport {
    /// Whether the two independently computed sides agree.
    pub fn consistent(&self) -> bool {
        self.quotient_special == self.kernel_stably_free
    }
}

/// Decides whether `K = m / sub` is special by its eigenspace dimensions,
/// and separately whether `sub` is (stably) free by decomposing it.
pub fn residue_filtration_test(a: &ChainOrder, m: &Lattice, sub: &Lattice) -> Result<FiltrationReport> {
    let d = a.dim();
    if a.index() != d {
        return Err(SpecialError::InvalidArgument("the model order must have index d".into()));
    }
    let bad = |s: &str| Err(SpecialError::InvalidArgument(s.into()));
    if m.shape().1 != d || m.shape().0 % d != 0 || sub.shape() != m.shape() {
        return bad("module shapes do not match the order");
    }
    if !stably_free_test(a, m)?.free {
        return bad("M is not free");
    }
    if !sub.is_subset_of(m) || !m.shift(1).is_subset_of(sub) {
        return bad("need t M <= M' <= M");
    }
    if !sub.product(a.lattice())?.is_subset_of(sub) {
        return bad("M' is not a submodule");
    }
    let f = m.field().clone();
    let (rows, _) = m.shape();
    let gens = m.generators();
    let dims = (0..d)
        .map(|i| {
            let e = LMat::unit(&f, d, d, i, i, 1, 0);
            let mut span: Vec<LMat> = gens.iter().map(|g| g.mul(&e)).collect();
            span.extend(sub.generators());
            let part = Lattice::from_span(&f, rows, d, &span, sub.window().1, m.precision())?;
            part.colength(sub).ok_or_else(|| SpecialError::InvalidArgument("M' is not inside M e_i + M'".into()))
        })
        .collect::<Result<Vec<usize>>>()?;
    let quotient_special = dims.windows(2).all(|w| w[0] == w[1]);
    let kernel = stably_free_test(a, sub)?;
    Ok(FiltrationReport {
        rank: quotient_special.then(|| dims[0]),
        dims,
        quotient_special,
        kernel_stably_free: kernel.stably_free,
        kernel_free: kernel.free,
    })
}

/// The quotient `m / sub` as a module over `A / tA`: the idempotents and
/// the radical generator act on the right.
pub fn candidate_from_quotient(a: &ChainOrder, m: &Lattice, sub: &Lattice) -> Result<SpecialCandidate> {
    let q = Quotient::new(m, sub)?;
    let d = a.dim();
    let f = m.field().clone();
    let matrix_of = |g: &LMat| -> Result<FMat> {
        let mut out = FMat::zeros(&f, q.dim());
        for (j, b) in q.basis().iter().enumerate() {
            let c: Vec<Elem> = q
                .coords(&b.mul(g))
                .ok_or_else(|| SpecialError::InvalidArgument("M is not stable under the order".into()))?;
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    };
    let idempotents = (0..d).map(|i| matrix_of(&LMat::unit(&f, d, d, i, i, 1, 0))).collect::<Result<_>>()?;
    let pi = matrix_of(&radical_generator(a)?)?;
    Ok(SpecialCandidate { idempotents, pi, uniformizer: 0 })
}

/// Runs the filtration test over `count` random sequences, returning the reports in order.
pub fn batch_reports<R: Rng>(a: &ChainOrder, r: usize, count: usize, rng: &mut R, exec: Exec) -> Result<Vec<FiltrationReport>> {
    let seqs = (0..count).map(|_| random_sequence(a, r, rng)).collect::<Result<Vec<_>>>()?;
    exec.map(&seqs, |(m, sub)| residue_filtration_test(a, m, sub)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidate::{chart_point, special_test};

    fn iwahori() -> ChainOrder {
        standard_model(&Fq::prime(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn radical_quotient_is_special() {
        let a = iwahori();
        let m = free_module(&a, 1).unwrap();
        let rep = residue_filtration_test(&a, &m, a.radical()).unwrap();
        assert_eq!(rep.dims, vec![1, 1]);
        assert!(rep.quotient_special && rep.kernel_stably_free);
        let k = candidate_from_quotient(&a, &m, a.radical()).unwrap();
        assert!(special_test(&k, 1).unwrap());
        assert_eq!(chart_point(&k).unwrap().iter().product::<u32>(), 0);
    }

    #[test]
    fn column_quotient_is_not_special() {
        // M' = t M + M e_1 A kills the second eigenspace of K
        let a = iwahori();
        let f = a.chain().field().clone();
        let m = free_module(&a, 2).unwrap();
        let e1 = LMat::unit(&f, 2, 2, 1, 1, 1, 0);
        let cols: Vec<LMat> = m.generators().iter().map(|g| g.mul(&e1)).collect();
        let sub = submodule_generated(&a, &m, &cols).unwrap();
        let rep = residue_filtration_test(&a, &m, &sub).unwrap();
        assert_eq!(rep.dims, vec![2, 0]);
        assert!(!rep.quotient_special && !rep.kernel_stably_free);
    }

    #[test]
    fn zero_quotient() {
        let a = iwahori();
        let m = free_module(&a, 1).unwrap();
        let rep = residue_filtration_test(&a, &m, &m).unwrap();
        assert_eq!((rep.dims.clone(), rep.rank), (vec![0, 0], Some(0)));
        assert!(rep.kernel_free);
    }

    #[test]
    fn rejects_non_submodules() {
        let a = iwahori();
        let m = free_module(&a, 1).unwrap();
        assert!(matches!(residue_filtration_test(&a, &m, &m.shift(2)), Err(SpecialError::InvalidArgument(_))));
    }
}
