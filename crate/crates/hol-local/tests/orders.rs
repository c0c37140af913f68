use hol_arith::{field_tower, Fq};
use hol_local::modules::block_idempotents;
use hol_local::torus::{check_diagonal_torus, conjugating_unit, random_unit};
use hol_local::{stably_free_test, ChainOrder, LatticeChain, MaxTorus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Ordered compositions of `d`, i.e. all standard jump sequences.
fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn order(q: u32, jumps: &[usize], prec: usize) -> ChainOrder {
    let f = Fq::of_order(q).unwrap();
    ChainOrder::from_chain(&LatticeChain::standard(&f, jumps, prec).unwrap()).unwrap()
}

#[test]
fn radical_power_is_t_times_order() {
    for q in [2, 3] {
        for d in 1..=3 {
            for jumps in compositions(d) {
                let e = jumps.len();
                for prec in [4 * d * e, 8 * d * e] {
                    let a = order(q, &jumps, prec);
                    let pe = a.ideal_power_by_products(e as i64).unwrap();
                    assert_eq!(pe, a.lattice().shift(1), "q={q} jumps={jumps:?} prec={prec}");
                    assert!(a.verify_radical().unwrap());
                }
            }
        }
    }
}

#[test]
fn principal_iff_equal_jumps() {
    for d in 1..=4 {
        for jumps in compositions(d) {
            let a = order(2, &jumps, 4 * d * jumps.len());
            let equal = jumps.iter().all(|&j| j == jumps[0]);
            assert_eq!(a.invariants().principal, equal, "{jumps:?}");
            let dec = stably_free_test(&a, a.lattice()).unwrap();
            assert_eq!(dec.multiplicities, jumps);
            if equal {
                assert_eq!(d, a.index() * dec.multiplicities[0]);
            }
        }
    }
}

#[test]
fn overorders_sum_to_inverse_radical_power() {
    for d in 1..=3 {
        for jumps in compositions(d) {
            let a = order(3, &jumps, 4 * d * jumps.len());
            let t = a.index() as i64;
            let overs = a.maximal_overorders().unwrap();
            assert_eq!(overs.len(), jumps.len());
            let sum = overs.iter().skip(1).fold(overs[0].lattice().clone(), |s, o| s.sum(o.lattice()));
            assert_eq!(sum, a.ideal_power(1 - t).unwrap(), "{jumps:?}");
        }
    }
}

#[test]
fn reindexing_rotates_invariants() {
    let f = Fq::prime(2).unwrap();
    let chain = LatticeChain::standard(&f, &[1, 2, 1], 48).unwrap();
    let a = ChainOrder::from_chain(&chain).unwrap();
    for k in 1..3 {
        let b = ChainOrder::from_chain(&chain.reindexed(k)).unwrap();
        assert_eq!(a.lattice(), b.lattice());
        let mut rotated = a.invariants().invariants.clone();
        rotated.rotate_left(k as usize);
        assert_eq!(b.invariants().invariants, rotated);
    }
}

#[test]
fn base_change_commutes_with_radical() {
    let f = Fq::prime(2).unwrap();
    let (big, emb) = field_tower(&f, 2).unwrap();
    for jumps in [&[1, 1][..], &[2, 1], &[1, 1, 1]] {
        let a = order(2, jumps, 24);
        let b = a.base_change(&emb).unwrap();
        assert_eq!(b.chain().field(), &big);
        assert_eq!(*b.radical(), a.radical().base_change(&emb));
        assert_eq!(b.invariants().invariants, a.invariants().invariants);
        assert_eq!(block_idempotents(&b).unwrap().len(), jumps.len());
    }
}

#[test]
fn conjugate_tori_over_extension() {
    let f = Fq::prime(2).unwrap();
    let (_, emb) = field_tower(&f, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for jumps in [&[1, 1][..], &[2, 1]] {
        let a = order(2, jumps, 24).base_change(&emb).unwrap();
        let t = MaxTorus::diagonal(&a).unwrap();
        assert!(check_diagonal_torus(&a, &t).unwrap().passes(a.dim()));
        let (u, u_inv) = random_unit(&a, 5, &mut rng);
        let t2 = t.conjugate(&u, &u_inv);
        let span = u.top().unwrap().max(u_inv.top().unwrap()) + 1;
        let (v, perm) = conjugating_unit(&a, &t, &t2, span, 80, &mut rng).unwrap().expect("tori are conjugate");
        for (k, e) in t.idempotents.iter().enumerate() {
            assert_eq!(v.mul(e), t2.idempotents[perm[k]].mul(&v));
        }
    }
}
