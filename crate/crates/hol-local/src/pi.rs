//! The principal order `O^d{Pi}` of index `d`: sums `sum_i diag(a_i) Pi^i`
//! with `Pi diag(x_1, ..., x_d) = diag(x_2, ..., x_d, x_1) Pi` and `Pi^d = t`.

use hol_arith::{Fq, LPoly};

use crate::error::Result;
use crate::lattice::Lattice;
use crate::lmat::LMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiOrder {
    field: Fq,
    d: usize,
}

/// `sum_i diag(coeffs[i]) Pi^i` for `i = 0..d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiElem {
    pub coeffs: Vec<Vec<LPoly>>,
}

impl PiOrder {
    pub fn new(field: &Fq, d: usize) -> Self {
        assert!(d >= 1, "d must be positive");
        PiOrder { field: field.clone(), d }
    }

    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn zero(&self) -> PiElem {
        PiElem { coeffs: vec![vec![LPoly::zero(); self.d]; self.d] }
    }

    /// `diag(a) Pi^i`.
    pub fn term(&self, a: Vec<LPoly>, i: usize) -> PiElem {
        assert_eq!(a.len(), self.d);
        let mut z = self.zero();
        z.coeffs[i % self.d] = a;
        if i >= self.d {
            let t = LPoly::monomial(1, (i / self.d) as i64);
            z.coeffs[i % self.d] = z.coeffs[i % self.d].iter().map(|x| x.mul(&t, &self.field)).collect();
        }
        z
    }

    pub fn one(&self) -> PiElem {
        self.term(vec![LPoly::one(); self.d], 0)
    }

    pub fn pi(&self) -> PiElem {
        self.term(vec![LPoly::one(); self.d], 1)
    }

    pub fn add(&self, x: &PiElem, y: &PiElem) -> PiElem {
        PiElem {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u.add(v, &self.field)).collect())
                .collect(),
        }
    }

    pub fn mul(&self, x: &PiElem, y: &PiElem) -> PiElem {
        let d = self.d;
        let f = &self.field;
        let mut out = self.zero();
        for (i, a) in x.coeffs.iter().enumerate() {
            for (j, b) in y.coeffs.iter().enumerate() {
                // diag(a) Pi^i diag(b) Pi^j = diag(a * shift^i b) Pi^{i+j}
                let wrap = i + j >= d;
                let k = (i + j) % d;
                for s in 0..d {
                    let mut c = a[s].mul(&b[(s + i) % d], f);
                    if c.is_zero() {
                        continue;
                    }
                    if wrap {
                        c = c.shift(1);
                    }
                    out.coeffs[k][s] = out.coeffs[k][s].add(&c, f);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &PiElem, n: usize) -> PiElem {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// The matrix of `Pi` in the upper-triangular-mod-`t` model: ones on the
    /// superdiagonal and `t` in the lower left corner.
    pub fn pi_matrix(&self) -> LMat {
        let d = self.d;
        let mut m = LMat::zeros(&self.field, d, d);
        for i in 0..d - 1 {
            m.set(i, i + 1, LPoly::one());
        }
        m.set(d - 1, 0, LPoly::monomial(1, 1));
        m
    }

    /// The algebra map into `M_d(K)`.
    pub fn to_matrix(&self, x: &PiElem) -> LMat {
        let pim = self.pi_matrix();
        let mut pw = LMat::identity(&self.field, self.d);
        let mut out = LMat::zeros(&self.field, self.d, self.d);
        for a in &x.coeffs {
            out = out.add(&LMat::diagonal(&self.field, a).mul(&pw));
            pw = pw.mul(&pim);
        }
        out
    }

    /// The `O`-basis `E_kk Pi^i`.
    pub fn basis(&self) -> Vec<PiElem> {
        let d = self.d;
        (0..d)
            .flat_map(|i| {
                (0..d).map(move |k| {
                    let a = (0..d).map(|s| if s == k { LPoly::one() } else { LPoly::zero() }).collect();
                    (a, i)
                })
            })
            .map(|(a, i)| self.term(a, i))
            .collect()
    }

    /// The image of the order in `M_d(K)` as a lattice.
    pub fn image(&self, prec: usize) -> Result<Lattice> {
        let gens: Vec<LMat> = self.basis().iter().map(|b| self.to_matrix(b)).collect();
        Lattice::from_span(&self.field, self.d, self.d, &gens, 1, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LatticeChain;
    use crate::order::ChainOrder;

    #[test]
    fn relations_hold() {
        let f = Fq::prime(3).unwrap();
        let r = PiOrder::new(&f, 3);
        let pi = r.pi();
        assert_eq!(r.pow(&pi, 3), r.term(vec![LPoly::monomial(1, 1); 3], 0));
        let x = vec![LPoly::constant(1), LPoly::constant(2), LPoly::monomial(1, 1)];
        let lhs = r.mul(&pi, &r.term(x.clone(), 0));
        let shifted = vec![x[1].clone(), x[2].clone(), x[0].clone()];
        assert_eq!(lhs, r.mul(&r.term(shifted, 0), &pi));
    }

    #[test]
    fn matrix_map_is_multiplicative() {
        let f = Fq::prime(2).unwrap();
        let r = PiOrder::new(&f, 2);
        assert_eq!(r.pi_matrix(), r.to_matrix(&r.pi()));
        let b = r.basis();
        for x in &b {
            for y in &b {
                assert_eq!(r.to_matrix(&r.mul(x, y)), r.to_matrix(x).mul(&r.to_matrix(y)));
            }
        }
    }

    #[test]
    fn image_is_the_full_flag_order() {
        for d in 1..=3 {
            let f = Fq::prime(2).unwrap();
            let r = PiOrder::new(&f, d);
            let a = ChainOrder::from_chain(&LatticeChain::standard(&f, &vec![1; d], 4 * d * d).unwrap()).unwrap();
            assert_eq!(r.image(32).unwrap(), *a.lattice());
            assert_eq!(a.lattice().left_mul(&r.pi_matrix()).unwrap(), *a.radical());
        }
    }
}
