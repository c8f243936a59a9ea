//! Cross-module properties of the public API.

use eyefree::constructions::{blowup, blue_construction, red_construction, weight_b, weight_r, PartSizes};
use eyefree::extremal::{kex_bruteforce, SearchMode};
use eyefree::pattern::{contains, is_free};
use eyefree::randmodel::{exact_ifree_probability, is_ifree, sample_conditioned, sample_conditioned_batch, Sampler};
use eyefree::typecalc::{kappa_formula, lambda_p, TypeGraph};
use eyefree::{IGraph, Pattern, Rat};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (0i64..=12, 1i64..=12).prop_map(|(a, b)| Rat::new(a.min(b), b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructions_avoid_the_eye(a in 1usize..=3, b in 2usize..=4, n in 1usize..=11) {
        let eye = Pattern::eye(a, b).unwrap();
        prop_assert!(is_free(&blue_construction(a, n), &eye));
        prop_assert!(is_free(&red_construction(b - 1, n), &eye));
    }

    #[test]
    fn closed_forms_match_blowups(a in 1usize..=5, n in 1usize..=40, p in rat()) {
        let b_graph = blowup(&TypeGraph::tau(0, a), &PartSizes::balanced(n, a));
        prop_assert_eq!(b_graph.weight(&p), weight_b(n, a, &p).unwrap().value);
        let r_graph = blowup(&TypeGraph::tau(a, 0), &PartSizes::balanced(n, a));
        prop_assert_eq!(r_graph.weight(&p), weight_r(n, a + 1, &p).unwrap().value);
    }

    #[test]
    fn kappa_is_the_better_tau_value(a in 1usize..=4, b in 2usize..=4, p in rat()) {
        let f = kappa_formula(a, b, &p).unwrap();
        let blue = lambda_p(&TypeGraph::tau(0, a), &p).unwrap().value;
        let red = lambda_p(&TypeGraph::tau(b - 1, 0), &p).unwrap().value;
        prop_assert_eq!(&f.blue_branch, &blue);
        prop_assert_eq!(&f.red_branch, &red);
        prop_assert_eq!(f.value, blue.max(red));
    }

    #[test]
    fn conditioned_samples_are_ifree_and_reproducible(n in 4usize..=9, seed in any::<u64>()) {
        let eye = Pattern::eye(2, 2).unwrap();
        let p = Rat::new(1, 2);
        let first = sample_conditioned(n, &p, &eye, seed, 100_000).unwrap();
        prop_assert!(is_ifree(&first.graph, &eye));
        let again = sample_conditioned(n, &p, &eye, seed, 100_000).unwrap();
        prop_assert_eq!(first.graph, again.graph);
    }
}

#[test]
fn below_pattern_size_first_draw_is_accepted() {
    let eye = Pattern::eye(2, 3).unwrap();
    for seed in 0..20 {
        assert_eq!(sample_conditioned(4, &Rat::new(1, 3), &eye, seed, 1).unwrap().trials, 1);
    }
}

#[test]
fn batch_streams_are_independent_of_batch_size() {
    let eye = Pattern::eye(2, 2).unwrap();
    let p = Rat::new(1, 2);
    let small = sample_conditioned_batch(7, &p, &eye, 5, 3, 10_000).unwrap();
    let large = sample_conditioned_batch(7, &p, &eye, 5, 8, 10_000).unwrap();
    for (s, l) in small.iter().zip(&large) {
        assert_eq!(s.graph, l.graph);
        assert_eq!(s.trials, l.trials);
    }
}

#[test]
fn exact_probability_matches_stream_frequency() {
    // 2^15 graphs at n = 6; 20000 draws keep the error near 0.003
    let eye = Pattern::eye(2, 2).unwrap();
    let p = Rat::new(1, 2);
    let exact = exact_ifree_probability(6, &p, &eye).unwrap().probability.to_f64();
    let s = Sampler::new(6, &p, 11).unwrap();
    let mut rng = s.stream(0);
    let hits = (0..20_000).filter(|_| is_ifree(&s.draw(&mut rng), &eye)).count();
    let freq = hits as f64 / 20_000.0;
    assert!((freq - exact).abs() < 0.015, "freq {freq} exact {exact}");
}

#[test]
fn kex_dominates_constructions_and_witnesses_are_free() {
    let eye = Pattern::eye(2, 2).unwrap();
    for p in [Rat::new(1, 3), Rat::new(1, 2), Rat::new(3, 4)] {
        for n in 3..=6 {
            let rep = kex_bruteforce(&eye, n, &p, SearchMode::Exhaustive).unwrap();
            assert!(rep.optimum >= weight_b(n, 2, &p).unwrap().value);
            assert!(rep.optimum >= weight_r(n, 2, &p).unwrap().value);
            for s in &rep.extremal {
                let g = IGraph::from_color_string(n, s).unwrap();
                assert!(contains(&g, &eye).is_none());
                assert_eq!(g.weight(&p), rep.optimum);
            }
            let bnb = kex_bruteforce(&eye, n, &p, SearchMode::Bnb).unwrap();
            assert_eq!(bnb.optimum, rep.optimum);
        }
    }
}
