use hol_arith::Fq;
use hol_local::algebra::Quotient;
use hol_local::morita::random_right_lattice;
use hol_local::{stably_free_test, BimoduleChain, ChainOrder, LMat, Lattice, LatticeChain};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn jumps() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..3, 1..4).prop_filter("d <= 4", |j| j.iter().sum::<usize>() <= 4)
}

fn order(q: u32, jumps: &[usize]) -> ChainOrder {
    let f = Fq::of_order(q).unwrap();
    let d: usize = jumps.iter().sum();
    ChainOrder::from_chain(&LatticeChain::standard(&f, jumps, 4 * d * jumps.len()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radical_is_the_unique_candidate(q in prop::sample::select(vec![2u32, 3]), j in jumps()) {
        let a = order(q, &j);
        prop_assert_eq!(a.radical_candidates().unwrap(), vec![1]);
        prop_assert!(a.residue_is_semisimple().unwrap());
    }

    #[test]
    fn ideal_powers_multiply(j in jumps(), x in -3i64..3, y in -3i64..3) {
        let a = order(2, &j);
        let px = a.ideal_power(x).unwrap();
        let py = a.ideal_power(y).unwrap();
        prop_assert_eq!(px.product(&py).unwrap(), a.ideal_power(x + y).unwrap());
    }

    #[test]
    fn random_lattices_are_stable_and_round_trip(j in jumps(), seed in 0u64..1000) {
        let a = order(2, &j);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_right_lattice(&a, 1, 2, &mut rng).unwrap();
        prop_assert!(m.product(a.lattice()).unwrap().is_subset_of(&m));
        let dec = stably_free_test(&a, &m).unwrap();
        // every indecomposable row lattice has O-rank d
        prop_assert_eq!(dec.multiplicities.iter().sum::<usize>(), m.shape().0);
        prop_assert_eq!(dec.o_rank, a.dim());
        let bc = BimoduleChain::new(&a).unwrap();
        prop_assert_eq!(bc.untransport(&bc.transport(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn lattice_sum_and_intersection(seed in 0u64..1000) {
        let a = order(3, &[1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_right_lattice(&a, 1, 2, &mut rng).unwrap();
        let y = random_right_lattice(&a, 1, 2, &mut rng).unwrap();
        let s = x.sum(&y);
        let i = x.intersection(&y);
        prop_assert!(x.is_subset_of(&s) && i.is_subset_of(&x) && i.is_subset_of(&y));
        // colength is additive along i <= x <= s and i <= y <= s
        let lhs = s.colength(&x).unwrap() + x.colength(&i).unwrap();
        prop_assert_eq!(lhs, s.colength(&y).unwrap() + y.colength(&i).unwrap());
        prop_assert_eq!(s.colength(&x).unwrap(), y.colength(&i).unwrap());
    }

    #[test]
    fn quotient_coordinates_round_trip(seed in 0u64..1000) {
        let f = Fq::prime(3).unwrap();
        let big = Lattice::full(&f, 2, 2, 0, 16);
        let small = Lattice::full(&f, 2, 2, 2, 16);
        let q = Quotient::new(&big, &small).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = big.random_element(&mut rng);
        let c = q.coords(&x).unwrap();
        let back = q.lift(&c);
        prop_assert!(small.contains(&x.sub(&back)));
        prop_assert!(q.coords(&LMat::unit(&f, 2, 2, 0, 1, 1, -1)).is_none());
    }
}
