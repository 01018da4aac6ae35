//! Property tests for invariants that hold on every input.

mod common;

use proptest::prelude::*;

use private_littlestone::classes::{
    empirical_distribution, error_band, hypothesis_from_code, make_random, make_thresholds, restrict,
    sample, ConstraintSet, Dataset, Distribution, Hypothesis, HypothesisClass, Label, LabeledExample,
};
use private_littlestone::dimensions::{dual_class, ldim, ldim_witness, vcdim, verify_shattered};
use private_littlestone::dp::{
    exponential_probabilities, generic_learner_distribution, sparse_selection, sparse_selection_distribution,
    Selection, SparseSelectionParams,
};
use private_littlestone::learners::{
    build_cover_sized, poly_pri_learn, ppp_learn, reduce_tree, solve_soa_game, LearnerConfig, ReduceTreeConfig,
    Schedule,
};
use private_littlestone::structure::{is_k_irreducible, soa, tilde_class};
use private_littlestone::RandomSource;

fn class_from(n: usize, codes: &[u64]) -> HypothesisClass {
    HypothesisClass::new(n, codes.iter().map(|&c| hypothesis_from_code(n, c % (1 << n)))).unwrap()
}

/// Nonempty classes on up to `max_n` points.
fn classes(max_n: usize, max_size: usize) -> impl Strategy<Value = HypothesisClass> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0u64..1 << n, 1..=max_size).prop_map(move |codes| class_from(n, &codes))
    })
}

fn label(b: bool) -> Label {
    if b {
        Label::Pos
    } else {
        Label::Neg
    }
}

fn constraints(n: usize, max: usize) -> impl Strategy<Value = ConstraintSet> {
    prop::collection::vec((0..n, any::<bool>()), 0..=max)
        .prop_map(|v| ConstraintSet::new(v.into_iter().map(|(x, b)| (x, label(b))).collect()))
}

/// A class with a distribution whose marginal has integer weights.
fn class_and_dist() -> impl Strategy<Value = (HypothesisClass, Distribution)> {
    classes(4, 8).prop_flat_map(|c| {
        let n = c.domain_size();
        let len = c.len();
        (Just(c), prop::collection::vec((0..n, any::<bool>(), 1u32..5), 1..6), 0..len)
    })
    .prop_map(|(c, atoms, _)| {
        let total: u32 = atoms.iter().map(|a| a.2).sum();
        let mut weights = std::collections::BTreeMap::new();
        for (x, b, w) in atoms {
            *weights.entry((x, label(b))).or_insert(0u32) += w;
        }
        let d = Distribution::from_weights(weights.into_iter().map(|(k, w)| {
            (k, num_rational::BigRational::new(w.into(), total.into()))
        }))
        .unwrap();
        (c, d)
    })
}

fn dataset(n: usize, len: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec((0..n, any::<bool>()), len)
        .prop_map(|v| Dataset::new(v.into_iter().map(|(x, b)| LabeledExample::new(x, label(b))).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_shrinks_and_composes(c in classes(4, 10), a in constraints(4, 2), b in constraints(4, 2)) {
        let n = c.domain_size();
        let keep = |s: &ConstraintSet| ConstraintSet::new(s.pairs().iter().copied().filter(|p| p.0 < n).collect());
        let (a, b) = (keep(&a), keep(&b));
        let ca = restrict(&c, &a).unwrap();
        prop_assert!(ca.is_subset_of(&c));
        let twice = restrict(&ca, &b).unwrap();
        let once = restrict(&c, &a.union(&b)).unwrap();
        prop_assert_eq!(twice.fingerprint(), once.fingerprint());
    }

    #[test]
    fn dimensions_are_ordered(c in classes(4, 12)) {
        let (l, v) = (ldim(&c).unwrap(), vcdim(&c));
        prop_assert!(-1 <= v && v <= l);
        prop_assert!((1usize << l) <= c.len());
        prop_assert_eq!(v, common::vc_brute(&common::fns(&c)));
    }

    #[test]
    fn ldim_matches_tree_search(c in classes(4, 10)) {
        let l = ldim(&c).unwrap();
        prop_assert_eq!(l, common::ldim_by_trees(&common::fns(&c)));
        if let Some(t) = ldim_witness(&c).unwrap() {
            prop_assert_eq!(t.depth as i32, l);
            prop_assert!(verify_shattered(&c, &t));
        }
    }

    #[test]
    fn restriction_never_raises_ldim(c in classes(4, 10), s in constraints(4, 3)) {
        let n = c.domain_size();
        let s = ConstraintSet::new(s.pairs().iter().copied().filter(|p| p.0 < n).collect());
        prop_assert!(ldim(&restrict(&c, &s).unwrap()).unwrap() <= ldim(&c).unwrap());
    }

    #[test]
    fn subclasses_have_smaller_ldim(c in classes(4, 10), keep in prop::collection::vec(any::<bool>(), 10)) {
        let mut i = 0;
        let h = c.filter(|_| { i += 1; keep[i - 1] });
        prop_assert!(ldim(&h).unwrap() <= ldim(&c).unwrap());
    }

    #[test]
    fn dual_of_dual_is_the_class(c in classes(4, 10)) {
        let columns: std::collections::BTreeSet<Vec<Label>> =
            (0..c.domain_size()).map(|x| c.iter().map(|h| h.label(x)).collect()).collect();
        prop_assume!(columns.len() == c.domain_size());
        let dd = dual_class(&dual_class(&c));
        prop_assert_eq!(dd.fingerprint(), c.fingerprint());
    }

    #[test]
    fn irreducibility_is_monotone_in_k(c in classes(3, 8)) {
        let mut prev = true;
        for k in 0..=3u64 {
            let now = is_k_irreducible(&c, k).unwrap();
            prop_assert!(prev || !now, "k-irreducible without (k-1)-irreducibility at k={}", k);
            prop_assert_eq!(now, common::irreducible_by_trees(&common::fns(&c), k as usize));
            prev = now;
        }
    }

    #[test]
    fn soa_matches_oracle(c in classes(4, 10)) {
        prop_assert_eq!(soa(&c).unwrap().signs(), common::soa_by_trees(&common::fns(&c)));
    }

    #[test]
    fn tilde_class_contains_and_keeps_ldim(c in classes(3, 8)) {
        let d = ldim(&c).unwrap();
        let t = tilde_class(&c, (d + 1) as u64).unwrap();
        prop_assert!(c.is_subset_of(&t));
        prop_assert_eq!(ldim(&t).unwrap(), d);
    }

    #[test]
    fn error_band_is_monotone((c, d) in class_and_dist(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(error_band(&c, &d, lo).unwrap().is_subset_of(&error_band(&c, &d, hi).unwrap()));
        prop_assert_eq!(error_band(&c, &d, 1.0).unwrap().len(), c.len());
    }

    #[test]
    fn empirical_distribution_has_unit_mass(data in dataset(5, 7)) {
        let p = empirical_distribution(&data).unwrap();
        prop_assert_eq!(p.total(), num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn sampled_empirical_has_unit_mass((_, d) in class_and_dist(), n in 1u64..10_000, seed: u64) {
        let p = d.sample_empirical(n, &mut RandomSource::from_seed(seed)).unwrap();
        prop_assert_eq!(p.total(), num_rational::BigRational::from_integer(1.into()));
        prop_assert!(p.atoms().all(|(x, y, _)| d.weight(x, y) > num_rational::BigRational::from_integer(0.into())));
    }

    #[test]
    fn generators_are_deterministic(n in 1usize..6, m in 1usize..8, seed: u64) {
        let m = m.min(1 << n);
        let (a, b) = (make_random(n, m, seed).unwrap(), make_random(n, m, seed).unwrap());
        prop_assert_eq!(a.hypotheses(), b.hypotheses());
        prop_assert_eq!(a.len(), m);
    }

    #[test]
    fn exponential_mechanism_ignores_shifts(scores in prop::collection::vec(-20.0f64..20.0, 1..6), shift in -50.0f64..50.0, eps in 0.1f64..3.0) {
        let p = exponential_probabilities(&scores, 1.0, eps).unwrap();
        let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
        let q = exponential_probabilities(&shifted, 1.0, eps).unwrap();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generic_learner_is_private_pointwise(c in classes(3, 6), s in dataset(3, 3), i in 0usize..3, x in 0usize..3, b: bool, eps in 0.1f64..2.0) {
        let n = c.domain_size();
        let clip = |d: &Dataset| Dataset::new(d.examples().iter().map(|e| LabeledExample::new(e.point % n, e.label)).collect());
        let s = clip(&s);
        let mut t = s.examples().to_vec();
        t[i] = LabeledExample::new(x % n, label(b));
        let t = Dataset::new(t);
        let p = generic_learner_distribution(&c, &s, eps).unwrap();
        let q = generic_learner_distribution(&c, &t, eps).unwrap();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!(*a <= eps.exp() * b * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sparse_selection_stays_in_the_union(sets in prop::collection::vec(prop::collection::btree_set(0u32..20, 1..=3), 1..12), seed: u64) {
        let sets: Vec<Vec<u32>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let params = SparseSelectionParams::new(3, 1.0, 1e-3, 0.1).unwrap();
        let dist = sparse_selection_distribution(&sets, &params).unwrap();
        prop_assert!((dist.iter().map(|d| d.1).sum::<f64>() - 1.0).abs() < 1e-9);
        let run = |seed| sparse_selection(&sets, &params, &mut RandomSource::from_seed(seed)).unwrap();
        let sel = run(seed);
        prop_assert_eq!(&sel, &run(seed));
        if let Selection::Element(e) = sel {
            prop_assert!(sets.iter().any(|s| s.contains(&e)));
        }
    }

    #[test]
    fn alpha_levels_line_up(d in 0i32..6, alpha_delta in 1e-4f64..0.2, t in 0usize..6) {
        let s = Schedule { d, alpha_delta, k_prime: 1 };
        prop_assert_eq!(s.alpha_minus_sixths(t, 6).to_bits(), s.alpha(t + 1).to_bits());
        prop_assert!(s.alpha(t + 1) < s.alpha(t));
    }

    #[test]
    fn game_value_matches_support_enumeration(c in classes(3, 6), f in 0u64..8) {
        let n = c.domain_size();
        let f_hat = hypothesis_from_code(n, f % (1 << n));
        let g = solve_soa_game(&c, &f_hat).unwrap();
        let oracle = common::game_value_by_supports(&common::fns(&c), &f_hat.signs());
        prop_assert!((g.value - oracle).abs() < 1e-7, "{} vs {}", g.value, oracle);
        prop_assert!(g.gap.abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cover_is_a_pure_function(c in classes(3, 6), f in 0u64..8, m in 1usize..30) {
        let n = c.domain_size();
        let f_hat = hypothesis_from_code(n, f % (1 << n));
        let a = build_cover_sized(&c, &f_hat, 0.5, m).unwrap();
        let b = build_cover_sized(&c, &f_hat, 0.5, m).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.hypotheses.is_subset_of(&c));
        prop_assert_eq!(a.draws.len(), m);
    }

    #[test]
    fn reduce_tree_is_deterministic_and_bounded(t in 0usize..=8, n in 20usize..80, seed: u64) {
        let class = make_thresholds(8).unwrap();
        let target = class.get(t).unwrap().clone();
        let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(8)).unwrap();
        let data = sample(&p, n, &mut RandomSource::from_seed(seed)).unwrap();
        let p_hat = empirical_distribution(&data).unwrap();
        let alpha_delta = 0.05;
        let k_prime = (n as f64 * 6.0 * alpha_delta).ceil() as u64;
        let cfg = ReduceTreeConfig::new(n as u64, k_prime, 0.1).with_alpha_delta(alpha_delta);
        let a = reduce_tree(&class, &p_hat, &cfg).unwrap();
        prop_assert_eq!(&a, &reduce_tree(&class, &p_hat, &cfg).unwrap());
        prop_assert!(!a.s_hat.is_empty());
        prop_assert!(a.s_hat.len() as u128 <= a.schedule.output_bound());
        prop_assert!(a.s_hat.iter().all(|h| class.contains(h)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn learners_are_proper(c in classes(4, 8), target in 0usize..8, seed: u64) {
        let target: Hypothesis = c.get(target % c.len()).unwrap().clone();
        let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(c.domain_size())).unwrap();
        let cfg = LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true);
        let out = ppp_learn(&c, &p, &cfg, &RandomSource::from_seed(seed)).unwrap();
        prop_assert!(c.contains(&out.hypothesis));
        prop_assert!(out.generic_range.0 >= out.poly.plan.samples);
    }

    #[test]
    fn poly_chunks_tile_the_sample(c in classes(4, 8), seed: u64) {
        let target = c.get(0).unwrap().clone();
        let p = Distribution::labeled_by(&target, &Distribution::uniform_marginal(c.domain_size())).unwrap();
        let cfg = LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true);
        let out = poly_pri_learn(&c, &p, &cfg, &RandomSource::from_seed(seed)).unwrap();
        prop_assert_eq!(out.chunks.len(), out.plan.m);
        let mut next = 0;
        for ch in &out.chunks {
            prop_assert_eq!(ch.start, next);
            prop_assert_eq!(ch.end - ch.start, out.plan.n0);
            next = ch.end;
        }
        prop_assert_eq!(next, out.plan.samples);
        let streams: std::collections::BTreeSet<_> = out.chunks.iter().map(|c| c.stream.clone()).collect();
        prop_assert_eq!(streams.len(), out.chunks.len());
    }
}
