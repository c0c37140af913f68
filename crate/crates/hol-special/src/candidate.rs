//! Finite modules over the principal order of index `d`, given by the action
//! of the diagonal idempotents and of the radical generator.

use hol_arith::{Elem, Embedding, Fq};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpecialError};
use crate::fmat::FMat;

/// A `k'`-space with commuting projectors `e_0, ..., e_{d-1}` and an operator
/// `pi` that moves each eigenspace to a neighbouring one, with `pi^d` the
/// scalar `uniformizer`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialCandidate {
    pub idempotents: Vec<FMat>,
    pub pi: FMat,
    /// Image of the uniformizer in `k'`.
    pub uniformizer: Elem,
}

/// Direction in which `pi` moves the eigenspaces: `pi e_i = e_{i + shift} pi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Up,
    Down,
}

impl Shift {
    fn target(self, i: usize, d: usize) -> usize {
        match self {
            Shift::Up => (i + 1) % d,
            Shift::Down => (i + d - 1) % d,
        }
    }
}

impl SpecialCandidate {
    pub fn field(&self) -> &Fq {
        self.pi.field()
    }

    pub fn d(&self) -> usize {
        self.idempotents.len()
    }

    pub fn dim(&self) -> usize {
        self.pi.n()
    }

    /// Checks the structural invariants and returns the direction of `pi`.
    pub fn validate(&self) -> Result<Shift> {
        let bad = |s: &str| Err(SpecialError::InvalidModule(s.into()));
        let (d, n) = (self.d(), self.dim());
        if d == 0 {
            return bad("no idempotents");
        }
        let f = self.field().clone();
        if self.idempotents.iter().any(|e| e.n() != n || e.field() != &f) {
            return bad("matrices differ in size or field");
        }
        let mut sum = FMat::zeros(&f, n);
        for (i, e) in self.idempotents.iter().enumerate() {
            if e.mul(e) != *e {
                return bad("an idempotent is not a projector");
            }
            for (j, g) in self.idempotents.iter().enumerate() {
                if i != j && !e.mul(g).is_zero() {
                    return bad("idempotents are not orthogonal");
                }
            }
            sum = sum.add(e);
        }
        if sum != FMat::identity(&f, n) {
            return bad("idempotents do not sum to the identity");
        }
        if self.pi.pow(d) != FMat::scalar(&f, n, self.uniformizer) {
            return bad("pi^d is not the uniformizer scalar");
        }
        let moves = |s: Shift| {
            (0..d).all(|i| self.pi.mul(&self.idempotents[i]) == self.idempotents[s.target(i, d)].mul(&self.pi))
        };
        if moves(Shift::Down) {
            Ok(Shift::Down)
        } else if moves(Shift::Up) {
            Ok(Shift::Up)
        } else {
            bad("pi does not permute the eigenspaces cyclically")
        }
    }

    pub fn eigenspace_dims(&self) -> Vec<usize> {
        self.idempotents.iter().map(|e| e.rank()).collect()
    }

    /// Extension of scalars along `emb`.
    pub fn base_change(&self, emb: &Embedding, big: &Fq) -> SpecialCandidate {
        SpecialCandidate {
            idempotents: self.idempotents.iter().map(|e| e.base_change(emb, big)).collect(),
            pi: self.pi.base_change(emb, big),
            uniformizer: emb.apply(self.uniformizer),
        }
    }

    /// Conjugates every action by an invertible `g` (with inverse `g_inv`).
    pub fn conjugate(&self, g: &FMat, g_inv: &FMat) -> SpecialCandidate {
        SpecialCandidate {
            idempotents: self.idempotents.iter().map(|e| g.mul(e).mul(g_inv)).collect(),
            pi: g.mul(&self.pi).mul(g_inv),
            uniformizer: self.uniformizer,
        }
    }

    /// Rank one module with `pi b_{i+1} = a_i b_i` in the standard basis (indices mod `d`).
    pub fn weighted_cycle(field: &Fq, a: &[Elem]) -> SpecialCandidate {
        let d = a.len();
        let idempotents = (0..d)
            .map(|i| {
                let mut e = FMat::zeros(field, d);
                e.set(i, i, 1);
                e
            })
            .collect();
        let mut pi = FMat::zeros(field, d);
        for (i, &x) in a.iter().enumerate() {
            pi.set(i, (i + 1) % d, x);
        }
        let uniformizer = a.iter().fold(1, |acc, &x| field.mul(acc, x));
        SpecialCandidate { idempotents, pi, uniformizer }
    }
}

/// Free of rank `r` over the residue torus: every eigenspace has dimension `r`.
pub fn special_test(m: &SpecialCandidate, r: usize) -> Result<bool> {
    m.validate()?;
    Ok(m.eigenspace_dims().iter().all(|&k| k == r))
}

/// Chart coordinates of a special module of rank one. With `b_i` spanning
/// the `i`-th eigenspace, `a_i` is the weight of `pi` on the edge between
/// `i` and `i + 1`: `pi b_i = a_i b_{i+1}` if `pi` raises indices and
/// `pi b_{i+1} = a_i b_i` if it lowers them. The product is the uniformizer.
pub fn chart_point(m: &SpecialCandidate) -> Result<Vec<Elem>> {
    let shift = m.validate()?;
    if !m.eigenspace_dims().iter().all(|&k| k == 1) {
        return Err(SpecialError::InvalidModule("chart needs a special module of rank 1".into()));
    }
    let basis = adapted_basis(m);
    chart_in_basis(m, shift, &basis)
}

/// One nonzero vector per eigenspace: the first nonzero column of each projector.
pub fn adapted_basis(m: &SpecialCandidate) -> Vec<Vec<Elem>> {
    m.idempotents
        .iter()
        .map(|e| {
            (0..e.n()).map(|j| e.column(j)).find(|c| c.iter().any(|&x| x != 0)).expect("nonzero eigenspace")
        })
        .collect()
}

/// Chart coordinates read in a given adapted basis.
pub fn chart_in_basis(m: &SpecialCandidate, shift: Shift, basis: &[Vec<Elem>]) -> Result<Vec<Elem>> {
    let f = m.field();
    let d = m.d();
    (0..d)
        .map(|i| {
            let (src, dst) = match shift {
                Shift::Up => (i, (i + 1) % d),
                Shift::Down => ((i + 1) % d, i),
            };
            let image = m.pi.apply(&basis[src]);
            let target = &basis[dst];
            let k = target.iter().position(|&x| x != 0).expect("basis vectors are nonzero");
            let a = f.div(image[k], target[k]);
            let expected: Vec<Elem> = target.iter().map(|&x| f.mul(a, x)).collect();
            if expected != image {
                return Err(SpecialError::InvalidModule("pi does not map basis vectors to multiples".into()));
            }
            Ok(a)
        })
        .collect()
}

/// Candidate JSON: `{"q", "uniformizer", "idempotents": [matrix, ...], "pi": matrix, "rank"}`;
/// matrices are lists of rows of field elements in the integer encoding of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub q: u32,
    pub rank: usize,
    pub uniformizer: Elem,
    pub idempotents: Vec<Vec<Vec<Elem>>>,
    pub pi: Vec<Vec<Elem>>,
}

impl CandidateJson {
    pub fn to_candidate(&self) -> Result<SpecialCandidate> {
        let f = Fq::of_order(self.q).map_err(|e| SpecialError::InvalidArgument(e.to_string()))?;
        let mat = |rows: &Vec<Vec<Elem>>| {
            FMat::from_rows(&f, rows).ok_or_else(|| SpecialError::InvalidModule("matrix is not square over F_q".into()))
        };
        if self.uniformizer >= f.order() {
            return Err(SpecialError::InvalidModule("uniformizer is not a field element".into()));
        }
        Ok(SpecialCandidate {
            idempotents: self.idempotents.iter().map(mat).collect::<Result<_>>()?,
            pi: mat(&self.pi)?,
            uniformizer: self.uniformizer,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hol_arith::field_tower;

    fn swap(f: &Fq, a: Elem, b: Elem) -> SpecialCandidate {
        let e0 = FMat::from_rows(f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let e1 = FMat::from_rows(f, &[vec![0, 0], vec![0, 1]]).unwrap();
        let pi = FMat::from_rows(f, &[vec![0, a], vec![b, 0]]).unwrap();
        SpecialCandidate { idempotents: vec![e0, e1], pi, uniformizer: f.mul(a, b) }
    }

    #[test]
    fn two_by_two_chart() {
        let f = Fq::prime(3).unwrap();
        let m = swap(&f, 2, 1);
        assert!(special_test(&m, 1).unwrap());
        assert_eq!(chart_point(&m).unwrap(), vec![2, 1]);
        let degenerate = swap(&f, 0, 1);
        assert!(special_test(&degenerate, 1).unwrap());
        assert!(chart_point(&degenerate).unwrap().contains(&0));
    }

    #[test]
    fn rank_failure() {
        let f = Fq::prime(2).unwrap();
        let m = SpecialCandidate {
            idempotents: vec![FMat::identity(&f, 2), FMat::zeros(&f, 2)],
            pi: FMat::zeros(&f, 2),
            uniformizer: 0,
        };
        assert_eq!(m.eigenspace_dims(), vec![2, 0]);
        assert!(!special_test(&m, 1).unwrap());
        assert!(chart_point(&m).is_err());
    }

    #[test]
    fn rank_two_in_three_blocks() {
        // two copies of a rank one cycle
        let f = Fq::prime(2).unwrap();
        let one = SpecialCandidate::weighted_cycle(&f, &[1, 1, 0]);
        let mut idempotents = Vec::new();
        for e in &one.idempotents {
            let mut big = FMat::zeros(&f, 6);
            for i in 0..3 {
                for j in 0..3 {
                    big.set(i, j, e.get(i, j));
                    big.set(i + 3, j + 3, e.get(i, j));
                }
            }
            idempotents.push(big);
        }
        let mut pi = FMat::zeros(&f, 6);
        for i in 0..3 {
            for j in 0..3 {
                pi.set(i, j, one.pi.get(i, j));
                pi.set(i + 3, j + 3, one.pi.get(i, j));
            }
        }
        let m = SpecialCandidate { idempotents, pi, uniformizer: 0 };
        assert!(special_test(&m, 2).unwrap());
    }

    #[test]
    fn invalid_structures_are_rejected() {
        let f = Fq::prime(2).unwrap();
        let mut m = swap(&f, 1, 1);
        m.uniformizer = 0;
        assert!(matches!(special_test(&m, 1), Err(SpecialError::InvalidModule(_))));
    }

    #[test]
    fn base_change_preserves_specialness() {
        let f = Fq::prime(2).unwrap();
        let (big, emb) = field_tower(&f, 2).unwrap();
        let m = swap(&f, 1, 1);
        let n = m.base_change(&emb, &big);
        assert_eq!(special_test(&m, 1).unwrap(), special_test(&n, 1).unwrap());
        assert_eq!(n.eigenspace_dims(), m.eigenspace_dims());
    }
}
