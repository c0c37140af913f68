//! The groups `W(A, I, pole)` with level structure, as order data.

use hol_arith::{Exec, Place};

use crate::descriptor::OrderDescriptor;
use crate::error::{GlobalError, Result};
use crate::idele::LevelDivisor;
use crate::pic::{pic_group, require_full_index, w_group};
use crate::units::{pole_division_unit_order, unit_group_order};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceUnits {
    pub place: Place,
    pub n: u32,
    pub units: u128,
}

/// Orders along `0 -> A_I^*/k^* -> W(A, I, pole) -> image -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WLevelGroup {
    pub order: u128,
    /// `|A_I^* / k^*|`, or its division-algebra analogue when the pole divides `I`.
    pub kernel_order: u128,
    pub unit_orders: Vec<PlaceUnits>,
    pub pic0_order: u128,
    pub pole_in_level: bool,
    /// Degree over `F_q` of the residue extension the Galois map lands in.
    pub galois_degree: u32,
    pub galois_image_order: u64,
}

/// `prod_x |(A_x/p^n)^*| / (q - 1)`, trivial for `I = 0`.
pub fn level_kernel_order(o: &OrderDescriptor, pole: Option<&Place>, level: &LevelDivisor, exec: Exec) -> Result<(u128, Vec<PlaceUnits>)> {
    if level.is_zero() {
        return Ok((1, Vec::new()));
    }
    let mut list = Vec::new();
    let mut prod: u128 = 1;
    for (x, &n) in level.places() {
        let u = match pole {
            Some(p) if p == x => pole_division_unit_order(o, x, n, exec)?,
            _ => unit_group_order(o, x, n, exec)?,
        };
        prod = prod.checked_mul(u).ok_or_else(|| GlobalError::InvalidArgument("unit group order overflows".into()))?;
        list.push(PlaceUnits { place: x.clone(), n, units: u });
    }
    let scalars = o.q() as u128 - 1;
    if prod % scalars != 0 {
        return Err(GlobalError::Internal("constants do not divide the unit group order".into()));
    }
    Ok((prod / scalars, list))
}

pub fn w_level_group(o: &OrderDescriptor, pole: &Place, level: &LevelDivisor, exec: Exec) -> Result<WLevelGroup> {
    require_full_index(o, pole)?;
    let pole_in_level = level.contains(pole);
    let (kernel_order, unit_orders) = level_kernel_order(o, Some(pole), level, exec)?;
    if !pole_in_level {
        let w = w_group(o, pole)?;
        return Ok(WLevelGroup {
            order: kernel_order * w.order(),
            kernel_order,
            unit_orders,
            pic0_order: w.galois_kernel_order,
            pole_in_level,
            galois_degree: w.galois_degree,
            galois_image_order: w.galois_image_order,
        });
    }
    // theta^{d deg(pole)} is a uniformizer at the pole; the image in
    // Z/(d deg pole) consists of the multiples of d/delta
    let pic = pic_group(o)?;
    let pic0_order = pic.pic0.order().expect("finite");
    let d = o.d() as u64;
    let target = d * pole.degree() as u64;
    let step = d / pic.delta as u64;
    let image = (0..target).filter(|a| a % step == 0).count() as u64;
    if image != pic.delta as u64 * pole.degree() as u64 {
        return Err(GlobalError::Internal("Galois image differs from delta deg(pole)".into()));
    }
    Ok(WLevelGroup {
        order: kernel_order * pic0_order * image as u128,
        kernel_order,
        unit_orders,
        pic0_order,
        pole_in_level,
        galois_degree: target as u32,
        galois_image_order: image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::fixtures::*;

    #[test]
    fn drinfeld_level_t() {
        let a = drinfeld();
        let level = LevelDivisor::new([(place(a.field(), "t"), 1)]);
        let w = w_level_group(&a, &Place::Infinity, &level, Exec::Parallel).unwrap();
        assert_eq!(w.order, 6);
    }

    #[test]
    fn quaternion_levels() {
        let a = quaternion();
        let w0 = w_level_group(&a, &Place::Infinity, &LevelDivisor::zero(), Exec::Parallel).unwrap();
        assert_eq!(w0.order, 2);
        let level = LevelDivisor::new([(place(a.field(), "t+1"), 1)]);
        let w = w_level_group(&a, &Place::Infinity, &level, Exec::Parallel).unwrap();
        assert_eq!((w.kernel_order, w.order), (6, 12));
    }

    #[test]
    fn pole_in_level_uses_division_units() {
        let a = drinfeld();
        let level = LevelDivisor::new([(Place::Infinity, 1)]);
        let w = w_level_group(&a, &Place::Infinity, &level, Exec::Parallel).unwrap();
        // maximal order of the quaternion division algebra mod p: 12 units
        assert_eq!(w.kernel_order, 12);
        assert_eq!((w.galois_degree, w.galois_image_order), (2, 2));
        assert_eq!(w.order, 24);
    }
}
