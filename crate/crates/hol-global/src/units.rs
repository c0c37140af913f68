//! Orders of the unit groups `(A_x / p_x^n A_x)^*`.

use hol_arith::{Exec, Fq, Place, RatModZ};
use hol_local::{ChainOrder, FiniteAlgebra, LatticeChain, PhiBimodule, ENUMERATION_BUDGET};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::descriptor::OrderDescriptor;
use crate::error::{GlobalError, Result};

/// `|GL_k(F_Q)|`.
pub fn gl_order(big_q: u128, k: u32) -> u128 {
    (0..k).map(|i| big_q.pow(k) - big_q.pow(i)).product()
}

fn standard_order(field: &Fq, d: u32, e: u32, n: u32) -> Result<ChainOrder> {
    let jumps = vec![(d / e) as usize; e as usize];
    let prec = 4 * (d * e) as usize + 2 * n as usize + 4;
    Ok(ChainOrder::from_chain(&LatticeChain::standard(field, &jumps, prec)?)?)
}

/// Units of `A / t^n A` for the standard principal order of index `e`, by
/// exhaustive enumeration of the finite ring.
pub fn split_units_exhaustive(field: &Fq, d: u32, e: u32, n: u32, exec: Exec, budget: u64) -> Result<u128> {
    let a = standard_order(field, d, e, n)?;
    let (alg, _) = FiniteAlgebra::quotient(a.lattice(), &a.lattice().shift(n as i64))?;
    Ok(alg.count_units(exec, budget)? as u128)
}

/// Units of `B / t^n B` where `B` is the order of index `e` in the local
/// algebra of invariant `inv`, realized as the endomorphisms of a Frobenius
/// bimodule. The residue ring `B/R` is a product of `c` copies of
/// `M_k(F_Q)`, and `R / t^n B` contributes its full size.
pub fn twisted_units(field: &Fq, d: u32, e: u32, inv: RatModZ, n: u32, exec: Exec) -> Result<u128> {
    let scaled = inv.to_rational() * hol_arith::Q::from_integer(e as i64);
    if !scaled.is_integer() {
        return Err(GlobalError::InvalidDescriptor(format!("invariant {inv} needs index divisible by {}", inv.denominator())));
    }
    let m = scaled.to_integer();
    let a = standard_order(field, d, e, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let phi = PhiBimodule::new(&a, e, m, &mut rng)?;
    let b = phi.endomorphisms(2 * e as usize + 2, exec, ENUMERATION_BUDGET)?;
    let res = &b.residue;
    let p = field.characteristic() as u128;
    let c = res.blocks as u32;
    if c == 0 || res.center_dim_over_fp % res.blocks != 0 || res.dim_over_fp % res.center_dim_over_fp != 0 {
        return Err(GlobalError::Internal("residue ring is not a product of equal matrix blocks".into()));
    }
    let big_q = p.pow((res.center_dim_over_fp / res.blocks) as u32);
    let k2 = res.dim_over_fp / res.center_dim_over_fp;
    let k = (k2 as f64).sqrt().round() as u32;
    if (k * k) as usize != k2 {
        return Err(GlobalError::Internal("residue blocks are not square matrix algebras".into()));
    }
    let residue_units = gl_order(big_q, k).pow(c);
    let full = (field.order() as u128).pow(d * d * n);
    Ok(residue_units * full / res.size as u128)
}

/// `|(A_x / p^n A_x)^*|` for the local order with invariant `inv` and index `e`.
pub fn local_unit_order(field: &Fq, d: u32, e: u32, inv: RatModZ, n: u32, exec: Exec) -> Result<u128> {
    if n == 0 {
        return Err(GlobalError::InvalidArgument("level exponent must be at least 1".into()));
    }
    let qx = field.order() as u128;
    match (inv.is_zero(), e) {
        (true, 1) => Ok(gl_order(qx, d) * qx.pow(d * d * (n - 1))),
        (true, _) => split_units_exhaustive(field, d, e, n, exec, ENUMERATION_BUDGET),
        (false, _) => twisted_units(field, d, e, inv, n, exec),
    }
}

/// Residue field of a place as a standalone finite field.
pub fn residue_field(o: &OrderDescriptor, x: &Place) -> Result<Fq> {
    let qx = (o.q() as u64).pow(x.degree());
    let qx = u32::try_from(qx).map_err(|_| GlobalError::InvalidArgument(format!("residue field at {x} too large")))?;
    Ok(Fq::of_order(qx)?)
}

pub fn unit_group_order(o: &OrderDescriptor, x: &Place, n: u32, exec: Exec) -> Result<u128> {
    local_unit_order(&residue_field(o, x)?, o.d(), o.e(x), o.inv(x), n, exec)
}

/// The same count for the maximal order of the division algebra replacing
/// `A` at the pole, of invariant `inv_pole + 1/d` and index `d`.
pub fn pole_division_unit_order(o: &OrderDescriptor, pole: &Place, n: u32, exec: Exec) -> Result<u128> {
    let inv = o.inv(pole) + RatModZ::new(1, o.d() as i64)?;
    local_unit_order(&residue_field(o, pole)?, o.d(), o.d(), inv, n, exec)
}
