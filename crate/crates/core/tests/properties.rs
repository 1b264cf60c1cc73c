//! Property tests over randomly generated small groups.

use std::collections::HashSet;

use closure_core::closure::{closure_brute, closure_within, m_closure, one_closure, two_closure};
use closure_core::linear::{field_make, FqMatrix, MatrixGroup, VectorDomain};
use closure_core::orbits::{are_m_equivalent, TupleColoring};
use closure_core::perm::{is_block_system, minimal_block_system, PermGroup, Permutation};
use closure_core::pipeline::{condition_a, condition_b};
use closure_core::products::{direct_sum, wreath_imprimitive, wreath_product_action};
use closure_core::closure::{ClosureBudget, PointSearch};
use num_bigint::BigUint;
use proptest::prelude::*;

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group_strategy(degrees: std::ops::RangeInclusive<usize>, max_gens: usize) -> impl Strategy<Value = PermGroup> {
    degrees.prop_flat_map(move |n| {
        prop::collection::vec(perm_strategy(n), 1..=max_gens)
            .prop_map(move |gens| PermGroup::new(n, gens).unwrap())
    })
}

fn le(g: &PermGroup, h: &PermGroup) -> bool {
    g.is_subgroup_of(h)
}

/// Derived subgroup from all commutators of element pairs.
fn derived_brute(g: &PermGroup) -> PermGroup {
    let elems: Vec<Permutation> = g.elements().unwrap().collect();
    let mut comms: HashSet<Vec<usize>> = HashSet::new();
    for x in &elems {
        for y in &elems {
            comms.insert(x.commutator(y).images());
        }
    }
    let gens = comms.into_iter().map(|v| Permutation::from_images(v).unwrap()).collect();
    PermGroup::new(g.degree(), gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_stabilizer(g in group_strategy(2..=8, 3), a in 0usize..8) {
        let a = a % g.degree();
        let (orbit, stab) = g.orbit_and_stabilizer(a).unwrap();
        prop_assert_eq!(BigUint::from(orbit.len()) * stab.order(), g.order().clone());
    }

    #[test]
    fn chain_soundness(g in group_strategy(2..=10, 3), seed in any::<u64>()) {
        for x in g.generators() {
            prop_assert!(g.contains(x).unwrap());
        }
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let mut w = Permutation::identity(g.degree());
        for _ in 0..20 {
            let i = rand::Rng::gen_range(&mut rng, 0..g.generators().len().max(1));
            if let Some(x) = g.generators().get(i) {
                w = w.compose(x).unwrap();
            }
            prop_assert!(g.contains(&w).unwrap());
        }
    }

    #[test]
    fn solvability_matches_brute(g in group_strategy(2..=6, 2)) {
        let mut h = g.clone();
        let mut brute_solvable = h.is_trivial();
        for _ in 0..8 {
            let d = derived_brute(&h);
            if d.is_trivial() { brute_solvable = true; break; }
            if d.order() == h.order() { break; }
            h = d;
        }
        prop_assert_eq!(g.is_solvable().unwrap(), brute_solvable);
    }

    #[test]
    fn block_systems_are_invariant(g in group_strategy(3..=8, 2), a in 0usize..8, b in 0usize..8) {
        let (a, b) = (a % g.degree(), b % g.degree());
        prop_assume!(a != b && g.is_transitive());
        let blocks = minimal_block_system(&g, a, b).unwrap();
        prop_assert!(is_block_system(&g, &blocks));
        prop_assert!(blocks.iter().any(|blk| blk.contains(&a) && blk.contains(&b)));
    }

    #[test]
    fn normalizer_matches_filter(g in group_strategy(3..=6, 2), x in perm_strategy(6)) {
        let n = g.degree();
        let x = Permutation::from_images(x.images().into_iter().filter(|&i| i < n).collect());
        prop_assume!(x.is_ok());
        let sub = PermGroup::new(n, vec![x.unwrap()]).unwrap();
        prop_assume!(sub.is_subgroup_of(&g));
        let fast = g.normalizer_by_enumeration(&sub, 1_000_000).unwrap();
        let sub_set: HashSet<Vec<usize>> = sub.elements().unwrap().map(|e| e.images()).collect();
        let count = g.elements().unwrap()
            .filter(|y| sub_set.iter().all(|s| sub_set.contains(&Permutation::from_images(s.clone()).unwrap().conjugate_by(y).images())))
            .count();
        prop_assert_eq!(fast.order().clone(), BigUint::from(count));
        prop_assert!(le(&fast, &g));
    }

    #[test]
    fn colorings_are_generator_invariant(g in group_strategy(2..=6, 3), m in 1usize..=3) {
        let c = TupleColoring::new(&g, m).unwrap();
        for x in g.generators() {
            prop_assert!(c.preserved_by(x));
        }
    }

    #[test]
    fn equivalence_monotone_and_hereditary(g in group_strategy(3..=6, 2), m in 2usize..=3) {
        let h = m_closure(&g, m).unwrap().closed_group;
        prop_assert!(are_m_equivalent(&g, &h, m).unwrap());
        prop_assert!(are_m_equivalent(&g, &h, m - 1).unwrap());
        for a in 0..g.degree() {
            let ga = g.pointwise_stabilizer(&[a]).unwrap();
            let ha = h.pointwise_stabilizer(&[a]).unwrap();
            prop_assert!(are_m_equivalent(&ga, &ha, m - 1).unwrap());
        }
    }

    #[test]
    fn equivalence_of_random_pairs_is_monotone(g in group_strategy(3..=5, 2), h in group_strategy(3..=5, 2)) {
        prop_assume!(g.degree() == h.degree());
        for m in (2..=3).rev() {
            if are_m_equivalent(&g, &h, m).unwrap() {
                prop_assert!(are_m_equivalent(&g, &h, m - 1).unwrap());
            }
        }
    }

    #[test]
    fn color_count_bound(g in group_strategy(3..=6, 3), m in 3usize..=4) {
        prop_assume!(g.degree() >= m);
        let c = TupleColoring::new(&g, m).unwrap();
        prop_assert!(c.num_colors() >= m + 2);
    }

    #[test]
    fn closure_operator_laws(g in group_strategy(2..=7, 2), x in perm_strategy(7), m in 1usize..=3) {
        let n = g.degree();
        prop_assume!(m < 3 || n <= 6);
        let c = m_closure(&g, m).unwrap().closed_group;
        prop_assert!(le(&g, &c));
        prop_assert!(m_closure(&c, m).unwrap().closed_group.same_group(&c));
        if let Ok(x) = Permutation::from_images(x.images().into_iter().filter(|&i| i < n).collect()) {
            let h = g.extended(&[x]).unwrap();
            prop_assert!(le(&c, &m_closure(&h, m).unwrap().closed_group));
        }
    }

    #[test]
    fn closure_chain(g in group_strategy(2..=7, 2)) {
        let two = two_closure(&g).unwrap().closed_group;
        let three = m_closure(&g, 3).unwrap().closed_group;
        prop_assert!(le(&g, &three));
        prop_assert!(le(&three, &two));
        prop_assert!(le(&two, &one_closure(&g)));
    }

    #[test]
    fn closures_match_oracles(g in group_strategy(2..=7, 2)) {
        let two = two_closure(&g).unwrap().closed_group;
        prop_assert!(two.same_group(&closure_brute(&g, 2).unwrap()));
        prop_assert!(two.same_group(&closure_within(&g, &PermGroup::symmetric(g.degree()), 2).unwrap()));
        if g.degree() <= 6 {
            let three = m_closure(&g, 3).unwrap().closed_group;
            prop_assert!(three.same_group(&closure_brute(&g, 3).unwrap()));
        }
    }

    #[test]
    fn two_transitive_closure_is_symmetric(g in group_strategy(3..=8, 2)) {
        let n = g.degree();
        let two_transitive = g.is_transitive()
            && g.pointwise_stabilizer(&[0]).unwrap().orbits().len() == 2;
        if two_transitive {
            prop_assert_eq!(two_closure(&g).unwrap().closed_order, PermGroup::symmetric(n).order().clone());
        }
    }

    #[test]
    fn closed_stabilizer_lifts(g in group_strategy(3..=6, 2)) {
        prop_assume!(g.is_transitive());
        let stab = g.pointwise_stabilizer(&[0]).unwrap();
        for m in 2..=3 {
            if m_closure(&stab, m - 1).unwrap().is_closed() {
                prop_assert!(m_closure(&g, m).unwrap().is_closed());
            }
        }
    }

    #[test]
    fn partly_regular_stabilizer_gives_three_closed(g in group_strategy(3..=6, 2)) {
        prop_assume!(g.is_transitive());
        let stab = g.pointwise_stabilizer(&[0]).unwrap();
        let domain: Vec<usize> = (0..g.degree()).filter(|&x| x != 0).collect();
        if closure_core::closure::partly_regular_point(&stab, &domain, PointSearch::Exhaustive).is_some() {
            prop_assert!(m_closure(&g, 3).unwrap().is_closed());
        }
    }

    #[test]
    fn direct_sum_closure_contained(k in group_strategy(1..=4, 2), l in group_strategy(1..=4, 2), m in 2usize..=3) {
        let lhs = m_closure(&direct_sum(&k, &l), m).unwrap().closed_group;
        let kc = m_closure(&k, m).unwrap().closed_group;
        let lc = m_closure(&l, m).unwrap().closed_group;
        let rhs = direct_sum(&kc, &lc);
        prop_assert!(le(&lhs, &rhs));
        if k.degree() <= 3 && l.degree() <= 3 {
            prop_assert!(lhs.same_group(&rhs));
        }
    }

    #[test]
    fn product_orders(k in group_strategy(2..=3, 2), l in group_strategy(1..=3, 2)) {
        let d = l.degree() as u32;
        let expected = k.order().pow(d) * l.order();
        let w = wreath_imprimitive(&k, &l);
        prop_assert_eq!(w.degree(), k.degree() * l.degree());
        prop_assert_eq!(w.order().clone(), expected.clone());
        if let Ok(p) = wreath_product_action(&k, &l) {
            prop_assert_eq!(p.degree(), k.degree().pow(d));
            prop_assert_eq!(p.order().clone(), expected);
        }
    }

    #[test]
    fn matrix_orders_survive_the_action(pq in prop::sample::select(vec![(2u64, 1u32, 3usize), (3, 1, 2), (5, 1, 2), (2, 2, 2), (3, 1, 3)]), entries in prop::collection::vec(any::<u32>(), 9)) {
        let (p, k, d) = pq;
        let f = field_make(p, k).unwrap();
        let m = FqMatrix::new(f.clone(), d, entries[..d * d].iter().map(|e| e % f.order()).collect()).unwrap();
        prop_assume!(m.is_invertible());
        let g = MatrixGroup::new(f, d, vec![m.clone()]).unwrap();
        for domain in [VectorDomain::AllVectors, VectorDomain::NonzeroVectors] {
            let x = g.vector_permutation(&m, domain);
            prop_assert_eq!(x.order(), BigUint::from(m.order(1 << 20).unwrap()));
        }
        prop_assert_eq!(g.order().unwrap(), BigUint::from(m.order(1 << 20).unwrap()));
    }

    #[test]
    fn regular_witness_passes_condition_b(pq in prop::sample::select(vec![(3u64, 2usize), (5, 2), (2, 3), (7, 2)]), entries in prop::collection::vec(any::<u32>(), 18)) {
        let (p, d) = pq;
        let f = field_make(p, 1).unwrap();
        let gens: Vec<FqMatrix> = entries
            .chunks(9)
            .map(|c| FqMatrix::new(f.clone(), d, c[..d * d].iter().map(|e| e % f.order()).collect()).unwrap())
            .filter(FqMatrix::is_invertible)
            .collect();
        let h = MatrixGroup::new(f, d, gens).unwrap().perm_image(VectorDomain::NonzeroVectors).unwrap();
        if let Some(w) = condition_a(&h, PointSearch::Exhaustive) {
            prop_assert!(condition_b(&h, w.point, &ClosureBudget::default()).unwrap().holds);
        }
    }
}

#[test]
fn odd_order_and_p_groups_stay_in_class() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let s8 = PermGroup::symmetric(8);
    let mut seen = 0;
    for _ in 0..300 {
        let gens: Vec<Permutation> = (0..2).map(|_| s8.random_element(&mut rng)).collect();
        let g = PermGroup::new(8, gens).unwrap();
        for prime in [2u64, 3] {
            let p = g.sylow_subgroup(prime, 5_000_000).unwrap();
            let c = two_closure(&p).unwrap().closed_group;
            assert!(closure_core::perm::is_power_of(c.order(), prime), "{:?}", p.generators());
        }
        let odd: Vec<Permutation> = g
            .generators()
            .iter()
            .map(|x| {
                let o = x.order();
                let two = closure_core::perm::prime_part(&o, 2);
                x.pow(u64::try_from(two).unwrap())
            })
            .collect();
        let h = PermGroup::new(8, odd).unwrap();
        if h.order() % 2u32 == BigUint::from(1u32) {
            seen += 1;
            let c = two_closure(&h).unwrap().closed_group;
            assert_eq!(c.order() % 2u32, BigUint::from(1u32));
        }
    }
    assert!(seen > 20, "only {seen} odd-order groups sampled");
}
