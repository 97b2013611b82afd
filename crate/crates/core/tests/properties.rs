//! Property tests for the library's cross-module invariants.

mod common;

use proptest::prelude::*;
use rrobust::{
    degree_witness, either_side_reachable, exact_is_r_robust, exact_max_robustness,
    extend_partition, generate_planted, generate_uniform_digraph, move_pass, random_partition,
    sample_vertices, Digraph, PlantedSpec, Ratio, SamplePartition, SampleSet, TestConfig,
    VertexSet,
};
use rrobust::seeds::rng_from_seed;
use rrobust::tester::exceeds_move_threshold;

fn arb_graph() -> impl Strategy<Value = Digraph> {
    (2usize..=12, 0u64..=10, any::<u64>()).prop_map(|(n, tenths, seed)| {
        generate_uniform_digraph(n, Ratio::new(tenths, 10).unwrap(), seed)
    })
}

fn nonempty_subset(n: usize, bits: u16) -> VertexSet {
    let mut ids: Vec<usize> = (0..n).filter(|&v| bits >> v & 1 == 1).collect();
    if ids.is_empty() {
        ids.push(bits as usize % n);
    }
    VertexSet::new(ids)
}

proptest! {
    #[test]
    fn edge_list_round_trips(g in arb_graph()) {
        let text = g.write_edge_list();
        let parsed = Digraph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(parsed, g);
    }

    #[test]
    fn reachability_is_monotone_and_matches_reach_index(
        g in arb_graph(),
        bits in any::<u16>(),
        r in 0usize..=13,
    ) {
        let s = nonempty_subset(g.n(), bits);
        let idx = g.reach_index(&s);
        prop_assert_eq!(g.is_r_reachable(&s, r), idx >= r);
        if g.is_r_reachable(&s, r) {
            for r_lower in 0..r {
                prop_assert!(g.is_r_reachable(&s, r_lower));
            }
        }
    }

    #[test]
    fn degree_witness_agrees_with_min_degree(
        g in arb_graph(),
        r in 1usize..=4,
        delta in 0usize..=4,
    ) {
        let (_, d_min) = g.min_in_degree();
        match degree_witness(&g, r, delta) {
            None => prop_assert!(d_min > 2 * r + delta),
            Some(v) => {
                prop_assert!(d_min <= 2 * r + delta);
                prop_assert_eq!(g.in_degree(v), d_min);
                // the witness pair refutes (2r + delta + 1)-robustness
                let single = VertexSet::singleton(v);
                prop_assert!(!g.is_r_reachable(&single, 2 * r + delta + 1));
                prop_assert!(!g.is_r_reachable(&single.complement(g.n()), 2 * r + delta + 1));
            }
        }
    }

    #[test]
    fn oracle_is_monotone_with_valid_witnesses(g in arb_graph()) {
        let rbar = exact_max_robustness(&g).unwrap();
        // max robustness never exceeds ceil(n/2) on any tested graph
        prop_assert!(rbar <= g.n().div_ceil(2));
        for r in 0..=g.n().min(rbar + 2) {
            let verdict = exact_is_r_robust(&g, r).unwrap();
            prop_assert_eq!(verdict.is_robust(), r <= rbar);
            if let Some(w) = verdict.witness() {
                prop_assert!(w.is_valid_for(g.n()));
                prop_assert!(!g.is_r_reachable(&w.a, r));
                prop_assert!(!g.is_r_reachable(&w.b, r));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_preserves_support_blocks(
        seed in any::<u64>(),
        t in 2usize..=6,
    ) {
        let g = generate_uniform_digraph(14, Ratio::new(6, 10).unwrap(), seed);
        let mut rng = rng_from_seed(seed ^ 0xABCD);
        let sample = sample_vertices(g.n(), t, &mut rng);
        if sample.support_len() < 2 {
            return Ok(());
        }
        let part = random_partition(&sample, &mut rng);
        let cfg = TestConfig::practical(1, 3, 0).with_t(t);
        let full = extend_partition(&g, &sample, &part, &cfg);
        prop_assert!(full.is_valid_for(g.n()));
        for (i, &v) in sample.support().iter().enumerate() {
            let expected = match part.block(i) {
                rrobust::Block::A => full.a.contains(v),
                rrobust::Block::B => full.b.contains(v),
                rrobust::Block::C => full.c.contains(v),
            };
            prop_assert!(expected, "support vertex {} left its block", v);
        }
    }

    #[test]
    fn move_pass_postcondition_against_frozen_partition(
        seed in any::<u64>(),
        r in 1usize..=3,
        delta in 1usize..=4,
        practical in any::<bool>(),
    ) {
        let g = generate_uniform_digraph(12, Ratio::new(5, 10).unwrap(), seed);
        let mut rng = rng_from_seed(seed ^ 0x1234);
        let sample = sample_vertices(g.n(), 4, &mut rng);
        if sample.support_len() < 2 {
            return Ok(());
        }
        let spart = random_partition(&sample, &mut rng);
        let cfg = TestConfig::practical(r, delta, 0).with_t(4);
        let frozen = extend_partition(&g, &sample, &spart, &cfg);
        let after = move_pass(&g, &frozen, &sample, &cfg, practical);

        prop_assert!(after.is_valid_for(g.n()));
        if practical {
            // the guard keeps both sides nonempty
            prop_assert!(!after.a.is_empty() && !after.b.is_empty());
        }
        let is_support = |v: usize| sample.support_position(v).is_some();
        for v in 0..g.n() {
            let home = if frozen.a.contains(v) {
                Some((&frozen.a, &after.a))
            } else if frozen.b.contains(v) {
                Some((&frozen.b, &after.b))
            } else {
                None
            };
            let Some((frozen_home, after_home)) = home else { continue };
            let moved = !after_home.contains(v);
            let above = exceeds_move_threshold(r, delta, g.outside_count(v, frozen_home));
            if moved {
                // only vertices above the frozen threshold ever move
                prop_assert!(above, "vertex {} moved while below threshold", v);
            }
            if !practical && is_support(v) {
                prop_assert!(!moved, "exhaustive mode moved support vertex {}", v);
            }
            if !practical && !is_support(v) && above {
                prop_assert!(moved, "vertex {} above threshold did not move", v);
            }
        }
    }

    #[test]
    fn planted_ground_truth_invariants(
        seed in any::<u64>(),
        rbar in 1usize..=3,
        extra in 0usize..=3,
    ) {
        let size = 2 * rbar + extra;
        let spec = PlantedSpec { n: 3 * size, size_a: size, size_b: size, rbar, seed };
        let (g, truth) = generate_planted(&spec).unwrap();
        for v in truth.a.iter() {
            prop_assert_eq!(g.outside_count(v, &truth.a), rbar);
        }
        for v in truth.b.iter() {
            prop_assert_eq!(g.outside_count(v, &truth.b), rbar);
        }
        let (_, d_min) = g.min_in_degree();
        prop_assert_eq!(d_min, size - 1 + rbar);
        // the truth partition is a witness at threshold rbar + 1
        let cfg = TestConfig::practical(rbar, 1, 0);
        prop_assert!(!either_side_reachable(&g, &truth, &cfg));
    }
}

/// Random-mode pipeline on raw SamplePartitions keeps sides nonempty and
/// support vertices movable: spot-check the practical-mode composition.
#[test]
fn practical_pipeline_keeps_sides_nonempty_on_planted() {
    let (g, _) = generate_planted(&PlantedSpec { n: 60, size_a: 20, size_b: 20, rbar: 3, seed: 4 })
        .unwrap();
    let cfg = TestConfig::practical(4, 9, 0);
    for seed in 0..30u64 {
        let mut rng = rng_from_seed(seed);
        let sample = sample_vertices(g.n(), 9, &mut rng);
        if sample.support_len() < 2 {
            continue;
        }
        let part = random_partition(&sample, &mut rng);
        let full = extend_partition(&g, &sample, &part, &cfg);
        let moved = move_pass(&g, &full, &sample, &cfg, true);
        assert!(!moved.a.is_empty() && !moved.b.is_empty());
        assert!(moved.is_valid_for(g.n()));
    }
}

/// Rejection frequency rises with amplification repeats: a weak
/// configuration (t = 2 on a small planted graph) fails often in a
/// single run, and three runs recover most of the misses.
#[test]
fn amplification_raises_rejection_frequency() {
    use rrobust::{amplified_test, sampled_test, Mode};
    let (g, _) = generate_planted(&PlantedSpec { n: 12, size_a: 4, size_b: 4, rbar: 2, seed: 0 })
        .unwrap();
    // r = 1, delta = 2: d_min = 5 > 4 holds; the planted pair is a
    // witness at threshold 3
    let seeds = 0..60u64;
    let mut single = 0;
    let mut amplified = 0;
    for seed in seeds {
        let cfg = TestConfig::practical(1, 2, seed)
            .with_t(2)
            .with_mode(Mode::Exhaustive);
        if sampled_test(&g, &cfg).unwrap().is_reject() {
            single += 1;
        }
        if amplified_test(&g, &cfg, Ratio::new(1, 20).unwrap())
            .unwrap()
            .is_reject()
        {
            amplified += 1;
        }
    }
    assert!(
        amplified > single,
        "amplified {} should beat single {}",
        amplified,
        single
    );
    assert!(single > 0, "weak config should still reject sometimes");
}

/// Feeding the pipeline the true blocks of a sample reconstructs a
/// witness only when the sample's leak stays below the move threshold;
/// at t = 9 that is a minority of samples (the extension misplaces
/// vertices whose random cross-edges hit "wrong" samples, and the move
/// pass then evacuates the over-leaked side). Assert the measured
/// behavior: some samples reconstruct, and every reconstruction is a
/// sound witness.
#[test]
fn true_sample_blocks_sometimes_reconstruct_a_witness() {
    let (g, truth) = generate_planted(&PlantedSpec {
        n: 200,
        size_a: 70,
        size_b: 70,
        rbar: 10,
        seed: 1,
    })
    .unwrap();
    let cfg = TestConfig::practical(11, 30, 0);
    let mut reconstructed = 0;
    for seed in 0..40u64 {
        let mut rng = rng_from_seed(seed);
        let sample = sample_vertices(200, 9, &mut rng);
        let blocks: Vec<rrobust::Block> = sample
            .support()
            .iter()
            .map(|&v| {
                if truth.a.contains(v) {
                    rrobust::Block::A
                } else if truth.b.contains(v) {
                    rrobust::Block::B
                } else {
                    rrobust::Block::C
                }
            })
            .collect();
        let part = SamplePartition::new(blocks);
        if !part.has_nonempty_a_and_b() {
            continue;
        }
        let full = extend_partition(&g, &sample, &part, &cfg);
        let moved = move_pass(&g, &full, &sample, &cfg, true);
        if !either_side_reachable(&g, &moved, &cfg) {
            reconstructed += 1;
            assert!(moved.is_valid_for(200));
            assert!(!g.is_r_reachable(&moved.a, 41));
            assert!(!g.is_r_reachable(&moved.b, 41));
        }
    }
    // 4/37 at these fixed seeds; keep slack against future reseeding
    assert!(reconstructed >= 2, "only {} reconstructions", reconstructed);
}

/// Interval estimation on the planted 200-vertex instance: the bracket
/// must contain the known robustness 10 and respect the slack bound
/// (1 + 1/2) * 30 = 45. The first probe lands at r = 35 where the
/// degree gate fires (2*35 + 30 = 100 > d_min = 79), exercising the
/// degree-reject update path.
#[test]
fn interval_estimate_brackets_planted_200() {
    use rrobust::interval_estimate;
    let (g, _) = generate_planted(&PlantedSpec {
        n: 200,
        size_a: 70,
        size_b: 70,
        rbar: 10,
        seed: 2,
    })
    .unwrap();
    for seed in 0..3u64 {
        let est = interval_estimate(&g, 30, 1, 2, Ratio::new(1, 10).unwrap(), seed).unwrap();
        assert!(est.contains(10), "{:?}", est);
        assert!(est.width() <= 45, "{:?}", est);
        assert!(est.probes[0].from_degree_check, "{:?}", est);
    }
}

/// Multiset draws: repeated vertices stay in one block and keep their
/// multiplicity in counts (regression guard on SampleSet bookkeeping).
#[test]
fn repeated_draws_share_one_block() {
    let sample = SampleSet::from_draws(vec![5, 5, 2, 5, 2, 7]);
    assert_eq!(sample.support(), &[2, 5, 7]);
    assert_eq!(sample.multiplicity(0), 2);
    assert_eq!(sample.multiplicity(1), 3);
    assert_eq!(sample.multiplicity(2), 1);
    assert_eq!(sample.len(), 6);
}
