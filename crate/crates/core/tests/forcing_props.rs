use butterfly_core::butterfly::{f_of, generate, LayerVertex, Ordering};
use butterfly_core::forcing::{
    brute_force_z, closure, construct_s, is_zero_forcing, layered_prediction, layered_rounds, recursive_labels,
    size_formula, size_sum_form, ForcingIntervals,
};
use butterfly_core::{jacobsthal, Budget, Graph, VertexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};

/// One force at a time, in a random order, until nothing applies.
fn sequential_closure(g: &Graph, s: &VertexSet, rng: &mut StdRng) -> VertexSet {
    let mut colored = s.clone();
    loop {
        let mut candidates: Vec<(usize, usize)> = colored
            .iter()
            .filter_map(|v| {
                let white: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| !colored.contains(w)).collect();
                (white.len() == 1).then(|| (v, white[0]))
            })
            .collect();
        if candidates.is_empty() {
            return colored;
        }
        candidates.shuffle(rng);
        colored.insert(candidates[0].1);
    }
}

fn random_set(n: usize, bits: &[bool]) -> VertexSet {
    VertexSet::from_ids(n, (0..n).filter(|&v| bits[v % bits.len()])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_monotone_and_idempotent(r in 1u32..=5, bits in prop::collection::vec(any::<bool>(), 1..200), extra in prop::collection::vec(any::<prop::sample::Index>(), 0..8)) {
        let bf = generate(r).unwrap();
        let n = bf.n();
        let s = random_set(n, &bits);
        let cl = closure(&bf.graph, &s).unwrap();
        let fin = cl.final_set().clone();
        prop_assert!(s.is_subset(&fin));
        let again = closure(&bf.graph, &fin).unwrap();
        prop_assert_eq!(again.final_set(), &fin);
        prop_assert!(again.rounds.is_empty());

        let mut bigger = s.clone();
        for ix in &extra {
            bigger.insert(ix.index(n));
        }
        prop_assert!(fin.is_subset(closure(&bf.graph, &bigger).unwrap().final_set()));
    }

    #[test]
    fn sequential_and_simultaneous_closures_agree(r in 1u32..=4, bits in prop::collection::vec(any::<bool>(), 1..100), seed in any::<u64>()) {
        let bf = generate(r).unwrap();
        let s = random_set(bf.n(), &bits);
        let mut rng = StdRng::seed_from_u64(seed);
        let seq = sequential_closure(&bf.graph, &s, &mut rng);
        let simultaneous = closure(&bf.graph, &s).unwrap();
        prop_assert_eq!(&seq, simultaneous.final_set());
    }

    #[test]
    fn closure_commutes_with_relabeling(r in 1u32..=4, bits in prop::collection::vec(any::<bool>(), 1..100)) {
        let bf = generate(r).unwrap();
        let perm = bf.labeling.layer_to_recursive_index();
        let s = random_set(bf.n(), &bits);
        let n = bf.n();
        let fin = closure(&bf.graph, &s).unwrap().final_set().mapped(n, |v| perm[v]).unwrap();
        let rg = bf.recursive_graph();
        let relabeled = s.mapped(n, |v| perm[v]).unwrap();
        let trace = closure(&rg, &relabeled).unwrap();
        prop_assert_eq!(trace.final_set(), &fin);
    }
}

#[test]
fn s_is_zero_forcing_of_the_closed_size_up_to_10() {
    for r in 1..=10u32 {
        let bf = generate(r).unwrap();
        let s = construct_s(r, Ordering::Layer).unwrap();
        let z = size_formula(r).unwrap();
        assert_eq!(s.len() as u64, z, "r={r}");
        assert_eq!(size_sum_form(r), z);
        let trace = closure(&bf.graph, &s).unwrap();
        assert!(trace.is_forcing(), "r={r}");
        assert!(trace.propagation_time().unwrap() <= 2 * r as usize);
    }
}

#[test]
fn s_level_counts_follow_jacobsthal() {
    for r in 1..=12u32 {
        let iv = ForcingIntervals::new(r).unwrap();
        for i in 0..r {
            let expect = (1u64 << (r - i - 1)) * jacobsthal(i as usize + 1);
            assert_eq!(iv.level_count(i), expect, "r={r} i={i}");
        }
        assert_eq!(iv.level_count(r), jacobsthal(r as usize + 1));
    }
    let iv = ForcingIntervals::new(4).unwrap();
    assert_eq!((0..=4).map(|i| iv.level_count(i)).collect::<Vec<_>>(), [8, 4, 6, 5, 11]);
}

#[test]
fn recursive_construction_matches_layer_form_up_to_12() {
    // S^(1) = {1, 3}; each step keeps S^(r-1), copies its low part up by
    // r 2^(r-1) and appends the first J_(r+1) labels of the top level.
    let mut s: Vec<usize> = vec![1, 3];
    for r in 1..=12u32 {
        if r > 1 {
            let shift = r as usize * (1 << (r - 1));
            let low: Vec<usize> = s.iter().copied().filter(|&i| i <= (r as usize - 1) * (1 << (r - 1))).collect();
            s.extend(low.iter().map(|i| i + shift));
            let top = r as usize * (1 << r);
            s.extend(top + 1..=top + jacobsthal(r as usize + 1) as usize);
        }
        let mut sorted = s.clone();
        sorted.sort_unstable();
        assert_eq!(recursive_labels(r).unwrap(), sorted, "r={r}");

        let iv = ForcingIntervals::new(r).unwrap();
        let mut via_f: Vec<usize> = (0..=r)
            .flat_map(|i| (0..1u64 << r).filter(move |&x| iv.contains(x, i)).map(move |x| f_of(x, i) as usize))
            .collect();
        via_f.sort_unstable();
        assert_eq!(via_f, sorted, "r={r}");

        let bf = generate(r).unwrap();
        let layer = construct_s(r, Ordering::Layer).unwrap();
        let rec = construct_s(r, Ordering::Recursive).unwrap();
        let perm = bf.labeling.layer_to_recursive_index();
        assert_eq!(layer.mapped(bf.n(), |v| perm[v]).unwrap(), rec);
    }
}

#[test]
fn layered_schedule_matches_prediction_up_to_8() {
    for r in 1..=8u32 {
        let bf = generate(r).unwrap();
        let sets = layered_rounds(&bf).unwrap();
        assert_eq!(sets.len(), 2 * r as usize + 1);
        for (k, set) in sets.iter().enumerate() {
            assert_eq!(set, &layered_prediction(r, k as u32).unwrap(), "r={r} k={k}");
        }
        assert!(sets.last().unwrap().is_full());
    }
}

#[test]
fn unrestricted_closure_dominates_the_schedule() {
    for r in 1..=6u32 {
        let bf = generate(r).unwrap();
        let s = construct_s(r, Ordering::Layer).unwrap();
        let trace = closure(&bf.graph, &s).unwrap();
        for (k, set) in layered_rounds(&bf).unwrap().iter().enumerate() {
            assert!(set.is_subset(trace.colored_after(k)), "r={r} k={k}");
        }
    }
}

#[test]
fn down_sweep_example_r4() {
    // After one round on BF(4), level 3 holds x mod 8 < J_4 = 5.
    let bf = generate(4).unwrap();
    let sets = layered_rounds(&bf).unwrap();
    let level3: Vec<usize> =
        (0..16).filter(|&x| sets[1].contains(bf.labeling.layer_id(LayerVertex { x, i: 3 }))).collect();
    assert_eq!(level3, [0, 1, 2, 3, 4, 8, 9, 10, 11, 12]);
}

#[test]
fn brute_force_matches_closed_form_for_small_r() {
    for (r, z) in [(1u32, 2usize), (2, 6)] {
        let bf = generate(r).unwrap();
        let min = brute_force_z(&bf.graph, Budget::seconds(10.0)).unwrap();
        assert_eq!(min.size, z);
        assert_eq!(min.size as u64, size_formula(r).unwrap());
        let w = VertexSet::from_ids(bf.n(), min.witness.iter().copied()).unwrap();
        assert!(is_zero_forcing(&bf.graph, &w).unwrap());
    }
}

#[test]
fn no_smaller_forcing_set_for_bf2() {
    // Oracle independent of the pruning: all 5-subsets of the 12 vertices fail.
    let bf = generate(2).unwrap();
    let n = bf.n();
    for mask in 0u32..1 << n {
        if mask.count_ones() == 5 {
            let s = VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1)).unwrap();
            assert!(!is_zero_forcing(&bf.graph, &s).unwrap());
        }
    }
}
