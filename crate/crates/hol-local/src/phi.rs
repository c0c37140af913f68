//! Frobenius bimodules over `O' = O (x) F_{q^n}`: a free right `A'`-module of
//! rank one with a semilinear isomorphism `sigma(M P'^m) -> M`, its
//! endomorphism order and the scalar of its `n`-fold composite.
//!
//! `M = A'` with its standard basis, so `phi(x) = Phi sigma(x)` for a matrix
//! `Phi` generating `P'^{-m}`. Endomorphisms are left multiplications by
//! `b in A'` with `Phi sigma(b) = b Phi`.

use hol_arith::linalg::kernel_of_columns;
use hol_arith::{field_tower, Echelon, Elem, Embedding, Exec, Fq, LPoly, LaurentSeries, Q};
use rand::Rng;

use crate::algebra::{FiniteAlgebra, Quotient, VecQuotient};
use crate::error::{LocalError, Result};
use crate::lattice::Lattice;
use crate::lmat::LMat;
use crate::order::ChainOrder;
use crate::torus::random_unit;

#[derive(Clone, Debug)]
pub struct PhiBimodule {
    base: ChainOrder,
    ext: ChainOrder,
    emb: Embedding,
    n: u32,
    m: i64,
    phi: LMat,
}

/// The endomorphism order of a Frobenius bimodule, known modulo `t^depth`.
#[derive(Clone, Debug)]
pub struct PhiEndomorphisms {
    /// `O`-rank, read off from the `F_p`-dimension of the fixed space.
    pub rank: usize,
    /// Least `k` with `rad(B)^k = tB`.
    pub index: Option<usize>,
    pub residue: ResidueReport,
    pub depth: usize,
}

/// Structure of `B / rad(B)` as an algebra over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub dim_over_fp: usize,
    pub size: u64,
    pub commutative: bool,
    pub zero_divisors: bool,
    pub semisimple: bool,
    pub center_dim_over_fp: usize,
    /// Number of simple factors.
    pub blocks: usize,
    /// Local index of the ambient algebra, `e / blocks`.
    pub local_index: usize,
    pub is_field: bool,
}

impl ResidueReport {
    /// A single matrix algebra `M_k(F_q)` with `k >= 2`.
    pub fn is_matrix_algebra_over(&self, q: u64, k: usize) -> bool {
        k >= 2
            && self.semisimple
            && !self.commutative
            && self.blocks == 1
            && self.local_index == 1
            && self.size == q.pow((k * k) as u32)
    }
}

/// The scalar by which the `n`-fold composite of `phi` acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerScalar {
    pub valuation: i64,
    /// `x t^{-v}`, with coefficients in the base field.
    pub unit: LaurentSeries,
}

/// A generator of the radical of a principal standard-chain order with
/// `Pi^e = t`: identity blocks on the block superdiagonal and `t` in the
/// lower left block.
pub fn radical_generator(a: &ChainOrder) -> Result<LMat> {
    let inv = &a.invariants().invariants;
    if !a.invariants().principal {
        return Err(LocalError::InvalidArgument("Frobenius bimodules need a principal order".into()));
    }
    let d = a.dim();
    let e = a.index();
    let f = d / e;
    let field = a.chain().field();
    debug_assert!(inv.iter().all(|&x| x == f));
    let mut pi = LMat::zeros(field, d, d);
    for i in 0..d {
        let (blk, off) = (i / f, i % f);
        if blk + 1 < e {
            pi.set(i, (blk + 1) * f + off, LPoly::one());
        } else {
            pi.set(i, off, LPoly::monomial(1, 1));
        }
    }
    if a.lattice().left_mul(&pi)? != *a.radical() {
        return Err(LocalError::InvalidChain("chain is not in standard position".into()));
    }
    Ok(pi)
}

fn sigma_of(x: &LMat, r: u32) -> LMat {
    x.frobenius(r)
}

impl PhiBimodule {
    /// Builds `(A', phi)` of slope `-m/e` over the degree-`n` extension.
    ///
    /// `Phi = g Pi^{-m} sigma(g)^{-1} u` for a random unit `g` of `A'` and a
    /// random scalar unit `u`; this keeps `phi` a descent datum, so that the
    /// endomorphism order has full rank.
    pub fn new<R: Rng>(a: &ChainOrder, n: u32, m: i64, rng: &mut R) -> Result<Self> {
        let e = a.index();
        if n == 0 || n as usize % e != 0 {
            return Err(LocalError::InvalidArgument(format!(
                "extension degree {n} must be a positive multiple of the index {e}"
            )));
        }
        let pi = radical_generator(a)?;
        let (big, emb) = field_tower(a.chain().field(), n)?;
        let ext = a.base_change(&emb)?;
        let r = a.chain().field().degree();
        let d = a.dim();
        let pi_ext = pi.with_field(&big, |c| emb.apply(c));
        // Pi^{-1} = t^{-1} Pi^{e-1}
        let pi_inv = (0..e - 1).fold(LMat::identity(&big, d), |acc, _| acc.mul(&pi_ext)).shift(-1);
        let step = if m >= 0 { &pi_inv } else { &pi_ext };
        let pi_m = (0..m.abs()).fold(LMat::identity(&big, d), |acc, _| acc.mul(step));
        let (g, g_inv) = random_unit(&ext, 2 * d + 2, rng);
        let q = big.order();
        let u = LPoly::from_coeffs(0, vec![rng.gen_range(1..q), rng.gen_range(0..q)]);
        let phi = g.mul(&pi_m).mul(&sigma_of(&g_inv, r)).scale_poly(&u);
        let out = PhiBimodule { base: a.clone(), ext, emb, n, m, phi };
        if !out.is_isomorphism()? {
            return Err(LocalError::SearchFailed("phi does not map sigma(P'^m) onto M".into()));
        }
        Ok(out)
    }

    pub fn base(&self) -> &ChainOrder {
        &self.base
    }
    pub fn extended(&self) -> &ChainOrder {
        &self.ext
    }
    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }
    pub fn degree(&self) -> u32 {
        self.n
    }
    pub fn twist(&self) -> i64 {
        self.m
    }
    pub fn matrix(&self) -> &LMat {
        &self.phi
    }

    pub fn slope(&self) -> Q {
        Q::new(-self.m, self.base.index() as i64)
    }

    fn r(&self) -> u32 {
        self.base.chain().field().degree()
    }

    /// `sigma` applied to a matrix over `F'`.
    pub fn sigma(&self, x: &LMat) -> LMat {
        sigma_of(x, self.r())
    }

    /// `phi(x) = Phi sigma(x)`.
    pub fn apply(&self, x: &LMat) -> LMat {
        self.phi.mul(&self.sigma(x))
    }

    /// `Phi sigma(P'^m) = A'`.
    pub fn is_isomorphism(&self) -> Result<bool> {
        let src = self.ext.ideal_power(self.m)?;
        Ok(src.left_mul(&self.phi)? == *self.ext.lattice())
    }

    /// `phi(x a) = phi(x) sigma(a)` on `O`-generators of `P'^m` and `A'`.
    pub fn is_twisted_linear(&self) -> Result<bool> {
        let src = self.ext.ideal_power(self.m)?;
        let gens = self.ext.lattice().generators();
        Ok(src
            .generators()
            .iter()
            .all(|x| gens.iter().all(|a| self.apply(&x.mul(a)) == self.apply(x).mul(&self.sigma(a)))))
    }

    /// The `n`-fold composite `Phi sigma(Phi) ... sigma^{n-1}(Phi)`.
    pub fn composite(&self) -> LMat {
        let mut acc = LMat::identity(self.phi.field(), self.base.dim());
        let mut cur = self.phi.clone();
        for _ in 0..self.n {
            acc = acc.mul(&cur);
            cur = self.sigma(&cur);
        }
        acc
    }

    /// The scalar `x in K` by which the `n`-fold composite of the induced maps
    /// `M -> sigma(M P'^m) -> ... -> M p^m` acts, i.e. the inverse of
    /// [`Self::composite`]; `prec` significant terms of the unit are kept.
    pub fn power_scalar(&self, prec: usize) -> Result<PowerScalar> {
        let c = self.composite();
        let d = self.base.dim();
        let x = c.get(0, 0).clone();
        let big = self.phi.field();
        if c != LMat::identity(big, d).scale_poly(&x) {
            return Err(LocalError::PrecisionFailure("composite of phi is not scalar".into()));
        }
        let v = x.valuation().ok_or_else(|| LocalError::PrecisionFailure("composite of phi is zero".into()))?;
        let small = self.base.chain().field();
        let back: std::collections::HashMap<Elem, Elem> =
            small.elements().map(|a| (self.emb.apply(a), a)).collect();
        let mut coeffs = Vec::new();
        for k in v..=x.top().unwrap_or(v) {
            let c = x.coeff(k);
            coeffs.push(
                *back
                    .get(&c)
                    .ok_or_else(|| LocalError::PrecisionFailure("scalar of phi^n is not defined over K".into()))?,
            );
        }
        let unit = LaurentSeries::from_lpoly(small, &LPoly::from_coeffs(0, coeffs), prec.max(1))
            .inv()
            .expect("leading coefficient is nonzero");
        Ok(PowerScalar { valuation: -v, unit })
    }

    /// The `O`-order `{b in A' : Phi sigma(b) = b Phi}`, computed modulo `t^depth`.
    pub fn endomorphisms(&self, depth: usize, exec: Exec, budget: u64) -> Result<PhiEndomorphisms> {
        Fixed::new(self, depth)?.analyze(self, exec, budget)
    }

    /// The exponent `k` with `Hom(Phi_1 A', Phi_2 A') = P'^k`, when both
    /// bimodules share the extension and base order.
    pub fn difference_exponent(&self, other: &PhiBimodule) -> Result<Option<i64>> {
        let x = self.ext.lattice().left_mul(&self.phi)?;
        let y = self.ext.lattice().left_mul(&other.phi)?;
        let hom = Lattice::hom_right(&x, &y)?;
        let e = self.base.index() as i64;
        let guess = self.m - other.m;
        for k in guess - e..=guess + e {
            if hom == self.ext.ideal_power(k)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// The fixed space of `f -> Phi sigma(f) Phi^{-1}` on `A' / t^H A'` as an
/// `F_p`-space, in digit coordinates.
struct Fixed {
    prime: Fq,
    domain: Quotient,
    digits: usize,
    basis: Vec<Vec<Elem>>,
}

impl Fixed {
    fn new(l: &PhiBimodule, depth: usize) -> Result<Self> {
        let a = l.ext.lattice();
        let h = depth as i64;
        let domain = Quotient::new(a, &a.shift(h))?;
        let target_big = l.ext.ideal_power(-l.m)?;
        let target = Quotient::new(&target_big, &target_big.shift(h))?;
        let big = l.phi.field().clone();
        let prime = Fq::prime(big.characteristic())?;
        let digits = big.degree() as usize;
        let mut cols = Vec::new();
        for b in domain.basis() {
            let mut alpha = 1;
            for _ in 0..digits {
                let x = b.scale(alpha);
                let image = l.apply(&x).sub(&x.mul(&l.phi));
                let c = target
                    .coords(&image)
                    .ok_or_else(|| LocalError::InvalidArgument("phi does not land in P'^{-m}".into()))?;
                cols.push(expand(&big, &c));
                alpha = big.mul(alpha, big.gen());
            }
        }
        let height = target.dim() * digits;
        let basis = kernel_of_columns(&prime, height, &cols);
        Ok(Fixed { prime, domain, digits, basis })
    }

    fn big(&self) -> &Fq {
        self.domain.basis()[0].field()
    }

    fn lift(&self, v: &[Elem]) -> LMat {
        let big = self.big();
        let coords: Vec<Elem> = v.chunks(self.digits).map(|ch| big.from_digits(ch)).collect();
        self.domain.lift(&coords)
    }

    fn vector(&self, x: &LMat) -> Result<Vec<Elem>> {
        let c = self
            .domain
            .coords(x)
            .ok_or_else(|| LocalError::InvalidArgument("element escapes the order".into()))?;
        Ok(expand(self.big(), &c))
    }

    fn analyze(&self, l: &PhiBimodule, exec: Exec, budget: u64) -> Result<PhiEndomorphisms> {
        let d = l.base.dim();
        let e = l.base.index();
        let r = l.r() as usize;
        let depth = self.domain.dim() / (d * d);
        let rank = self.basis.len() / (r * depth);
        if self.basis.len() != r * depth * d * d {
            return Err(LocalError::PrecisionFailure(format!(
                "fixed space has F_p-dimension {} instead of {}",
                self.basis.len(),
                r * depth * d * d
            )));
        }
        let width = self.basis[0].len();
        let p = &self.prime;

        // rad(B) = B cap P'
        let rad_q = Quotient::new(l.ext.lattice(), l.ext.radical())?;
        let cols: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .map(|v| Ok(expand(self.big(), &rad_q.coords(&self.lift(v)).expect("fixed vectors lie in A'"))))
            .collect::<Result<_>>()?;
        let rad: Vec<Vec<Elem>> = kernel_of_columns(p, rad_q.dim() * self.digits, &cols)
            .iter()
            .map(|c| combine(p, &self.basis, c, width))
            .collect();

        let t_b = Echelon::from_rows(
            p,
            width,
            self.basis.iter().map(|v| self.vector(&self.lift(v).shift(1))).collect::<Result<Vec<_>>>()?,
        );
        let rad_lifts: Vec<LMat> = rad.iter().map(|v| self.lift(v)).collect();
        let mut power = Echelon::from_rows(p, width, rad.iter().cloned());
        let mut index = None;
        for k in 1..=2 * e + 1 {
            if power.is_subspace_of(&t_b) && t_b.is_subspace_of(&power) {
                index = Some(k);
                break;
            }
            let rows: Vec<Vec<Elem>> = power.rows().to_vec();
            let mut next = Echelon::new(p, width);
            for x in &rows {
                let xl = self.lift(x);
                for y in &rad_lifts {
                    next.insert(self.vector(&xl.mul(y))?);
                }
            }
            power = next;
        }

        let residue = self.residue(l, &rad, exec, budget)?;
        Ok(PhiEndomorphisms { rank, index, residue, depth })
    }

    fn residue(&self, l: &PhiBimodule, rad: &[Vec<Elem>], exec: Exec, budget: u64) -> Result<ResidueReport> {
        let p = &self.prime;
        let width = self.basis[0].len();
        let vq = VecQuotient::new(p, width, rad, &self.basis);
        let reps: Vec<LMat> = vq.reps().iter().map(|v| self.lift(v)).collect();
        let dim = vq.dim();
        let mut table = Vec::with_capacity(dim * dim);
        for x in &reps {
            for y in &reps {
                table.push(
                    vq.coords(&self.vector(&x.mul(y))?)
                        .ok_or_else(|| LocalError::PrecisionFailure("fixed space is not closed".into()))?,
                );
            }
        }
        let id = LMat::identity(self.big(), l.base.dim());
        let one = vq.coords(&self.vector(&id)?).expect("identity is fixed");
        let alg = FiniteAlgebra::from_table(p, dim, table, one);
        let size = alg.size(budget)?;
        let commutative = alg.is_commutative();
        let zero_divisors = alg.has_zero_divisors(exec, budget)?;
        let semisimple = alg.is_semisimple(exec, budget)?;
        let center = alg.center();
        let q = l.base.chain().field().order() as u64;
        let r = l.r() as usize;
        // z -> z^q - z on the center; its kernel is one copy of F_q per block
        let cols: Vec<Vec<Elem>> = center.iter().map(|z| alg.sub(&alg.pow(z, q), z)).collect();
        let fixed = kernel_of_columns(p, dim, &cols).len();
        let blocks = fixed / r;
        let local_index = if blocks == 0 { 0 } else { l.base.index() / blocks };
        Ok(ResidueReport {
            dim_over_fp: dim,
            size,
            commutative,
            zero_divisors,
            semisimple,
            center_dim_over_fp: center.len(),
            blocks,
            local_index,
            is_field: commutative && !zero_divisors,
        })
    }
}

fn expand(big: &Fq, coords: &[Elem]) -> Vec<Elem> {
    let r = big.degree() as usize;
    coords
        .iter()
        .flat_map(|&c| {
            let mut dg = big.digits(c);
            dg.resize(r, 0);
            dg
        })
        .collect()
}

fn combine(p: &Fq, basis: &[Vec<Elem>], c: &[Elem], width: usize) -> Vec<Elem> {
    let mut out = vec![0; width];
    for (&ci, b) in c.iter().zip(basis) {
        if ci != 0 {
            for (o, &x) in out.iter_mut().zip(b) {
                *o = p.add(*o, p.mul(ci, x));
            }
        }
    }
    out
}
