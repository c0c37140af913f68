use hol_arith::{Exec, Fq, Place, RatModZ, Q};
use hol_global::units::{local_unit_order, split_units_exhaustive};
use hol_global::{
    numeric_invariants, pic_group, torsor, twist_datum, w_group, w_level_group, CsaDescriptor, DivElem, LevelDivisor,
    OrderDescriptor, SlopeDivisor,
};
use hol_local::ENUMERATION_BUDGET;

fn order(q: u32, d: u32, entries: &[(&str, &str, u32)]) -> OrderDescriptor {
    let f = Fq::of_order(q).unwrap();
    let p = |s: &str| Place::parse(&f, s).unwrap();
    let csa = CsaDescriptor::new(&f, d, entries.iter().map(|(x, a, _)| (p(x), a.parse::<RatModZ>().unwrap()))).unwrap();
    OrderDescriptor::new(csa, entries.iter().map(|(x, _, e)| (p(x), *e))).unwrap()
}

/// Five fixed descriptors with hand-evaluated (e, delta, deg, |Pic_0|, |W|).
fn fixed() -> Vec<(OrderDescriptor, Place, (u32, u32, Q, u128, u128))> {
    let f2 = Fq::prime(2).unwrap();
    let g = Place::parse(&f2, "t^2+t+1").unwrap();
    vec![
        (order(2, 2, &[("infinity", "1/2", 2), ("t", "1/2", 2)]), Place::Infinity, (2, 2, Q::from_integer(-2), 2, 2)),
        (order(2, 2, &[("infinity", "0", 2)]), Place::Infinity, (2, 2, Q::from_integer(-1), 1, 1)),
        (order(2, 2, &[("t^2+t+1", "1/2", 2), ("t", "1/2", 2)]), g, (2, 2, Q::from_integer(-3), 2, 4)),
        (order(3, 3, &[("infinity", "1/3", 3), ("t", "2/3", 3)]), Place::Infinity, (3, 3, Q::from_integer(-6), 3, 3)),
        (order(2, 1, &[]), Place::Infinity, (1, 1, Q::from_integer(0), 1, 1)),
    ]
}

#[test]
fn fixed_descriptors() {
    for (o, pole, (e, delta, deg, pic0, w)) in fixed() {
        let n = numeric_invariants(&o);
        assert_eq!((n.e, n.delta, n.degree), (e, delta, deg), "{o:?}");
        assert_eq!(pic_group(&o).unwrap().pic0.order(), Some(pic0));
        let wg = w_group(&o, &pole).unwrap();
        assert_eq!(wg.order(), w);
        assert_eq!(Q::from_integer(wg.galois_image_order as i64), wg.predicted_image_order);
    }
}

#[test]
fn twist_element_matches_the_presentation() {
    let a = order(2, 2, &[("infinity", "1/2", 2), ("t", "1/2", 2)]);
    let t = Place::parse(a.field(), "t").unwrap();
    let tw = twist_datum(&a, &Place::Infinity, &t, &LevelDivisor::zero(), Exec::Parallel).unwrap();
    let w = w_group(&a, &Place::Infinity).unwrap();
    let xi_inv = DivElem::new(&a, [(t, Q::new(-1, 2))]).unwrap();
    let v = w.element(&a, tw.m as i64, &xi_inv);
    assert_eq!(w.degree(&v), Q::from_integer(0));
    assert!(!w.extended.is_zero(&v));
    assert_eq!(w.extended.element_order(&v), Some(tw.w_order));
}

#[test]
fn level_kernels_are_multiplicative() {
    let a = order(2, 2, &[("infinity", "0", 2)]);
    let f = a.field().clone();
    let t = Place::parse(&f, "t").unwrap();
    let t1 = Place::parse(&f, "t+1").unwrap();
    let small = LevelDivisor::new([(t.clone(), 1)]);
    let big = LevelDivisor::new([(t.clone(), 2), (t1.clone(), 1)]);
    assert!(small.divides(&big));
    let ws = w_level_group(&a, &Place::Infinity, &small, Exec::Parallel).unwrap();
    let wb = w_level_group(&a, &Place::Infinity, &big, Exec::Parallel).unwrap();
    // kernel of A_J^* -> A_I^*, computed from exhaustive local counts
    let f2 = Fq::prime(2).unwrap();
    let u = |e: u32, n: u32| split_units_exhaustive(&f2, 2, e, n, Exec::Parallel, ENUMERATION_BUDGET).unwrap();
    let local_kernel = (u(1, 2) / u(1, 1)) * u(1, 1);
    assert_eq!(wb.order / ws.order, local_kernel);
    assert_eq!(wb.order % ws.order, 0);
}

#[test]
fn unit_counts_at_non_split_places() {
    // degree-3 division algebra over F_2((t)): residue F_8, 7 units, radical of size 8^2
    let f2 = Fq::prime(2).unwrap();
    let inv = RatModZ::new(1, 3).unwrap();
    assert_eq!(local_unit_order(&f2, 3, 3, inv, 1, Exec::Parallel).unwrap(), 7 * 64);
}

#[test]
fn torsor_with_level_and_degree_two_place() {
    let a = order(2, 2, &[("infinity", "1/2", 2), ("t^2+t+1", "1/2", 2)]);
    let b = order(2, 2, &[("infinity", "0", 2), ("t^2+t+1", "0", 2)]);
    let p = Place::parse(a.field(), "t^2+t+1").unwrap();
    let d = SlopeDivisor::new(&a, [(Place::Infinity, Q::new(1, 2)), (p, Q::new(-1, 2))]).unwrap();
    let tor = torsor(&a, &b, &LevelDivisor::zero(), &d, Exec::Parallel).unwrap();
    assert_eq!(tor.w_order % tor.theta_order, 0);
    let total: u128 = (1..=8).map(|n| tor.count(n)).sum();
    assert_eq!(total, tor.w_order * (8 / tor.theta_order));
}
