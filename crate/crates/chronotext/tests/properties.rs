//! Randomized invariant checks across the analysis pipeline.

mod common;

use chronotext::ca::correspondence_analysis;
use chronotext::chrono::{
    benjamini_hochberg, hypergeometric_p, segment_year_ranges, HypergeomQuery, TailDirection,
};
use chronotext::corpus::tokenize_text;
use chronotext::mfact::{mfact, TrajectoryGap, TrajectoryPoint, YearTrajectory};
use chronotext::report::{render_svg_string, LabelPolicy, PlotKind, PlotPoint, PlotSpec};
use common::random_tables;
use proptest::prelude::*;

/// A hand-built trajectory over `years` with the given axis-1 coords.
fn trajectory_from(years: &[i32], coords: &[f64]) -> YearTrajectory {
    let points: Vec<TrajectoryPoint> = years
        .iter()
        .zip(coords)
        .map(|(&year, &c)| TrajectoryPoint {
            year,
            coords: vec![c],
            members: 1,
            weight: 1.0 / years.len() as f64,
        })
        .collect();
    let gaps = points
        .windows(2)
        .map(|w| TrajectoryGap {
            from_year: w[0].year,
            to_year: w[1].year,
            delta: w[1].coords[0] - w[0].coords[0],
        })
        .collect();
    YearTrajectory { points, gaps }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tokens_are_wellformed_and_stable(text in "\\PC{0,200}") {
        let tokens = tokenize_text(&text);
        for token in &tokens {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.starts_with('-') && !token.ends_with('-'));
            prop_assert!(token.chars().all(|c| c.is_alphanumeric() || c == '-'));
            prop_assert!(!token.contains("--"));
        }
        // Tokenizing the joined tokens reproduces them (idempotence).
        let rejoined = tokens.join(" ");
        prop_assert_eq!(tokenize_text(&rejoined), tokens);
    }

    #[test]
    fn ca_satisfies_weighted_centroid_and_contribution_invariants(seed in any::<u64>()) {
        let table = &random_tables(1, 8, 8, seed)[0];
        let result = correspondence_analysis(table, 10).unwrap();
        for k in 0..result.eigenvalues.len() {
            // Row and column clouds are weighted-centered per axis.
            let row_mean: f64 = (0..table.n_rows())
                .map(|i| result.row_weights[i] * result.row_coords[(i, k)])
                .sum();
            let col_mean: f64 = (0..table.n_cols())
                .map(|j| result.col_weights[j] * result.col_coords[(j, k)])
                .sum();
            prop_assert!(row_mean.abs() <= 1e-9);
            prop_assert!(col_mean.abs() <= 1e-9);
            // Contributions are shares of the axis inertia.
            let row_contrib: f64 = (0..table.n_rows()).map(|i| result.row_contrib[(i, k)]).sum();
            let col_contrib: f64 = (0..table.n_cols()).map(|j| result.col_contrib[(j, k)]).sum();
            prop_assert!((row_contrib - 1.0).abs() <= 1e-9);
            prop_assert!((col_contrib - 1.0).abs() <= 1e-9);
            prop_assert!(result.eigenvalues[k] <= result.total_inertia + 1e-12);
        }
        // Squared cosines are bounded and sum to at most 1 per point.
        for i in 0..table.n_rows() {
            let total: f64 = (0..result.eigenvalues.len())
                .map(|k| result.row_cos2[(i, k)])
                .sum();
            prop_assert!(total <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn joint_analysis_eigenvalues_stay_in_group_bounds(seed in any::<u64>()) {
        let table = &random_tables(1, 8, 8, seed)[0];
        let years: Vec<f64> = (0..table.n_rows()).map(|i| 2000.0 + (i % 5) as f64).collect();
        let result = mfact(table, &years, 3).unwrap();
        prop_assert!(result.eigenvalues[0] >= 1.0 - 1e-9);
        prop_assert!(result.eigenvalues[0] <= 2.0 + 1e-9);
        for pair in result.eigenvalues.windows(2) {
            prop_assert!(pair[0] >= pair[1] - 1e-12);
        }
    }

    #[test]
    fn hypergeometric_tails_are_probabilities_and_cover(
        grand in 1u64..80,
        word_pct in 0u64..=100,
        part_pct in 0u64..=100,
        pick in 0.0f64..1.0,
    ) {
        let word = (grand * word_pct / 100).max(1).min(grand);
        let part = (grand * part_pct / 100).max(1).min(grand);
        let lo = (word + part).saturating_sub(grand);
        let hi = word.min(part);
        let observed = lo + ((hi - lo + 1) as f64 * pick) as u64;
        let observed = observed.min(hi);
        let query = |direction| HypergeomQuery {
            grand_total: grand,
            part_total: part,
            word_total: word,
            observed,
            direction,
        };
        let over = hypergeometric_p(&query(TailDirection::Over)).unwrap();
        let under = hypergeometric_p(&query(TailDirection::Under)).unwrap();
        prop_assert!(over > 0.0 && over <= 1.0);
        prop_assert!(under > 0.0 && under <= 1.0);
        // The tails overlap exactly at `observed`.
        prop_assert!(over + under >= 1.0 - 1e-12);
        // Over-representation evidence only grows with the count.
        if observed < hi {
            let mut next = query(TailDirection::Over);
            next.observed = observed + 1;
            prop_assert!(hypergeometric_p(&next).unwrap() <= over + 1e-15);
        }
    }

    #[test]
    fn benjamini_hochberg_dominates_raw_p(raw in prop::collection::vec(0.0f64..=1.0, 1..40)) {
        let adjusted = benjamini_hochberg(&raw);
        prop_assert_eq!(adjusted.len(), raw.len());
        for (a, p) in adjusted.iter().zip(&raw) {
            prop_assert!(*a >= *p - 1e-15);
            prop_assert!(*a <= 1.0);
        }
        // Adjusted values are monotone along the raw ranking.
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&x, &y| raw[x].total_cmp(&raw[y]));
        for pair in order.windows(2) {
            prop_assert!(adjusted[pair[0]] <= adjusted[pair[1]] + 1e-15);
        }
    }

    #[test]
    fn segmentation_partitions_observed_years(
        n_years in 2usize..12,
        k_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut years: Vec<i32> = Vec::new();
        let mut year = 1990;
        for _ in 0..n_years {
            year += rng.gen_range(1..=3);
            years.push(year);
        }
        let coords: Vec<f64> = (0..n_years).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let trajectory = trajectory_from(&years, &coords);
        let k = 2 + (k_frac * (n_years - 2) as f64) as usize;
        let ranges = segment_year_ranges(&trajectory, k).unwrap();
        prop_assert_eq!(ranges.len(), k);
        // Contiguous, ordered, and jointly covering every observed year.
        prop_assert_eq!(ranges[0].0, years[0]);
        prop_assert_eq!(ranges[k - 1].1, *years.last().unwrap());
        let mut covered: Vec<i32> = Vec::new();
        for (i, &(start, end)) in ranges.iter().enumerate() {
            prop_assert!(start <= end);
            if i > 0 {
                // The next range starts at the next observed year.
                let previous_end = ranges[i - 1].1;
                let next = years.iter().find(|&&y| y > previous_end).copied().unwrap();
                prop_assert_eq!(start, next);
            }
            covered.extend(years.iter().filter(|&&y| (start..=end).contains(&y)));
        }
        prop_assert_eq!(covered, years);
    }

    #[test]
    fn float_display_round_trips(value in any::<f64>()) {
        prop_assume!(value.is_finite());
        let text = format!("{value}");
        prop_assert_eq!(text.parse::<f64>().unwrap(), value);
        // The serialized form never uses scientific notation, so any
        // CSV consumer can parse it.
        prop_assert!(!text.contains('e') && !text.contains('E'));
    }

    #[test]
    fn svg_rendering_is_deterministic_and_complete(
        points in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 1..30),
        kind_pick in 0usize..3,
    ) {
        let kind = [PlotKind::Scatter, PlotKind::Trajectory, PlotKind::Bar][kind_pick];
        let spec = PlotSpec {
            kind,
            title: "property".into(),
            points: points
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| PlotPoint {
                    label: format!("p{i}"),
                    x,
                    y,
                    class: "doc".into(),
                    importance: x.abs(),
                })
                .collect(),
            x_label: "x".into(),
            y_label: "y".into(),
            width: 400,
            height: 300,
            label_policy: LabelPolicy::All,
        };
        let first = render_svg_string(&spec).unwrap();
        let second = render_svg_string(&spec).unwrap();
        prop_assert_eq!(&first, &second);
        let glyphs = match kind {
            PlotKind::Bar => first.matches("<rect class=\"bar").count(),
            _ => first.matches("<circle").count(),
        };
        prop_assert_eq!(glyphs, points.len());
        prop_assert_eq!(first.matches("class=\"pt-label\"").count(), points.len());
    }
}
