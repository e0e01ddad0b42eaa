//! Property tests for the spec'd invariants.

use proptest::prelude::*;

use spice_core::corpus::{
    build_trial_matrix, bundled_corpus, render_trial, Condition, PreambleMode,
    PresentationFormat, Question, QuestionTemplates,
};
use spice_core::numerics::{beta_cdf, beta_quantile, chi2_sf};
use spice_core::runner::{parse_answer, ParseMode};
use spice_core::stats::freq::{bh_adjust, holm_adjust, wilson_interval};

proptest! {
    #[test]
    fn wilson_contains_the_point_estimate(k in 0u64..200, extra in 1u64..200) {
        let n = k + extra;
        let (lo, hi) = wilson_interval(k, n, 0.95).unwrap();
        let p = k as f64 / n as f64;
        prop_assert!(lo <= p && p <= hi);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn wilson_width_shrinks_in_n_at_fixed_rate(k in 1u64..20, scale in 2u64..12) {
        let n = k * 5;
        let (lo1, hi1) = wilson_interval(k, n, 0.95).unwrap();
        let (lo2, hi2) = wilson_interval(k * scale, n * scale, 0.95).unwrap();
        prop_assert!(hi2 - lo2 < hi1 - lo1);
    }

    #[test]
    fn holm_and_bh_are_monotone_and_order_invariant(
        ps in proptest::collection::vec(0.0f64..=1.0, 1..8),
        swap_a in 0usize..8,
        swap_b in 0usize..8,
    ) {
        let holm = holm_adjust(&ps).unwrap();
        let bh = bh_adjust(&ps).unwrap();
        // Adjusted values never fall below the raw ones and stay in [0, 1].
        for (raw, adj) in ps.iter().zip(holm.iter().chain(bh.iter())) {
            prop_assert!(*adj >= *raw - 1e-12);
            prop_assert!(*adj <= 1.0);
        }
        // Monotone: a smaller raw p never gets a larger adjusted p.
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if ps[i] <= ps[j] {
                    prop_assert!(holm[i] <= holm[j] + 1e-12);
                    prop_assert!(bh[i] <= bh[j] + 1e-12);
                }
            }
        }
        // Order invariance up to reordering.
        let (a, b) = (swap_a % ps.len(), swap_b % ps.len());
        let mut swapped = ps.clone();
        swapped.swap(a, b);
        let mut holm_swapped = holm_adjust(&swapped).unwrap();
        holm_swapped.swap(a, b);
        for (x, y) in holm.iter().zip(&holm_swapped) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn chi2_sf_is_monotone_decreasing(x in 0.0f64..80.0, step in 0.01f64..20.0, df in 1u32..10) {
        let a = chi2_sf(x, df).unwrap();
        let b = chi2_sf(x + step, df).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn beta_quantile_inverts_cdf(
        x in 0.02f64..0.98,
        a in 0.5f64..50.0,
        b in 0.5f64..50.0,
    ) {
        let q = beta_cdf(x, a, b).unwrap();
        prop_assume!(q > 1e-8 && q < 1.0 - 1e-8);
        let back = beta_quantile(q, a, b).unwrap();
        prop_assert!((back - x).abs() < 1e-7, "a={a} b={b} x={x} -> {back}");
    }

    #[test]
    fn parse_answer_is_total_and_deterministic(raw in ".{0,40}") {
        let strict = parse_answer(&raw, ParseMode::Strict);
        prop_assert_eq!(strict, parse_answer(&raw, ParseMode::Strict));
        let lenient = parse_answer(&raw, ParseMode::Lenient);
        prop_assert_eq!(lenient, parse_answer(&raw, ParseMode::Lenient));
        // Strict compliance implies lenient compliance.
        if strict.is_compliant() {
            prop_assert_eq!(strict, lenient);
        }
    }

    #[test]
    fn trial_matrix_size_and_uniqueness(n_models in 1usize..5, n_questions in 1usize..4) {
        let corpus = bundled_corpus();
        let models: Vec<String> = (0..n_models).map(|i| format!("model{i}")).collect();
        let questions = &Question::ALL[..n_questions];
        let specs = build_trial_matrix(&corpus, &models, questions).unwrap();
        prop_assert_eq!(specs.len(), corpus.len() * n_models * 4 * n_questions);
        let unique: std::collections::HashSet<_> = specs.iter().map(|s| &s.trial_id).collect();
        prop_assert_eq!(unique.len(), specs.len());
    }

    #[test]
    fn rendering_respects_preamble_and_message_counts(
        interaction_idx in 0usize..30,
        format_flag in proptest::bool::ANY,
        preamble_flag in proptest::bool::ANY,
        question_idx in 0usize..3,
    ) {
        let corpus = bundled_corpus();
        let interaction = &corpus.interactions()[interaction_idx];
        let templates = QuestionTemplates::default();
        let condition = Condition {
            format: if format_flag { PresentationFormat::Prompt } else { PresentationFormat::Interaction },
            preamble: if preamble_flag { PreambleMode::Included } else { PreambleMode::Omitted },
        };
        let spec = spice_core::TrialSpec::new(
            &interaction.id,
            "model",
            condition,
            Question::ALL[question_idx],
        );
        let rendered = render_trial(&spec, interaction, &templates).unwrap();
        let expected = match condition.format {
            PresentationFormat::Prompt => 1,
            PresentationFormat::Interaction => interaction.turns.len() + 1,
        };
        prop_assert_eq!(rendered.messages.len(), expected);
        let text: String = rendered.messages.iter().map(|m| m.content.as_str()).collect();
        prop_assert_eq!(
            text.contains(&templates.preamble_text),
            condition.preamble == PreambleMode::Included
        );
    }
}
