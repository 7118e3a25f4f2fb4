//! Randomized invariants over the whole pipeline: hulls, normal forms,
//! text formats, and the capture-recapture estimators.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reflat::linalg::random_unimodular;
use reflat::normal_form::{affine_normal_form, linear_normal_form, NormalFormKey};
use reflat::polytope::{format_polytope, parse_polytope, Polytope};
use reflat::stats::{estimate_population, involution_counts};
use reflat::weights::{format_weight_line, parse_weight_line, WeightInput, WeightMatrix};

fn point_sets(dim: usize) -> impl Strategy<Value = Vec<Vec<i128>>> {
    prop::collection::vec(prop::collection::vec(-4i128..=4, dim), dim + 1..=8)
}

fn full_dim(points: &[Vec<i128>], dim: usize) -> Option<Polytope> {
    Polytope::from_points(points, dim).ok().filter(|p| p.is_full_dimensional())
}

proptest! {
    #[test]
    fn hull_contains_inputs_and_vertices_span_it(points in point_sets(3)) {
        let Some(p) = full_dim(&points, 3) else { return Ok(()) };
        for q in &points {
            prop_assert!(p.contains(q));
        }
        let rebuilt = Polytope::from_points(p.vertices(), 3).unwrap();
        prop_assert_eq!(&rebuilt, &p);
        let verts: std::collections::HashSet<_> = p.vertices().iter().cloned().collect();
        prop_assert!(verts.iter().all(|v| points.contains(v)));
    }

    #[test]
    fn linear_normal_form_is_a_coordinate_invariant(
        points in point_sets(3),
        seed in 0u64..1 << 40,
    ) {
        let Some(p) = full_dim(&points, 3) else { return Ok(()) };
        let affine_key = affine_normal_form(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_unimodular(&mut rng, 3, 10);
        let image = p.linear_image(&m).unwrap();
        prop_assert_eq!(affine_normal_form(&image), affine_key);
        // the stricter origin-preserving form applies only to centered polytopes
        if let Ok(key) = linear_normal_form(&p) {
            prop_assert_eq!(linear_normal_form(&image).unwrap(), key);
        }
    }

    #[test]
    fn affine_normal_form_ignores_translations(
        points in point_sets(2),
        shift in prop::collection::vec(-20i128..=20, 2),
    ) {
        let Some(p) = Polytope::from_points(&points, 2).ok() else { return Ok(()) };
        prop_assert_eq!(affine_normal_form(&p.translate(&shift)), affine_normal_form(&p));
    }

    #[test]
    fn polytope_text_round_trips(points in point_sets(3)) {
        let Some(p) = full_dim(&points, 3) else { return Ok(()) };
        let back = parse_polytope(&format_polytope(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn normal_form_key_encodings_round_trip(points in point_sets(2)) {
        let Some(p) = full_dim(&points, 2) else { return Ok(()) };
        let key = affine_normal_form(&p);
        prop_assert_eq!(NormalFormKey::parse_text(&key.to_text()).unwrap(), key.clone());
        let (decoded, used) = NormalFormKey::from_bytes(key.as_bytes()).unwrap();
        prop_assert_eq!(used, key.as_bytes().len());
        prop_assert_eq!(decoded, key);
    }

    #[test]
    fn weight_lines_round_trip(
        rows in prop::collection::vec(prop::collection::vec(1i128..=9, 4), 1..=2),
        order in 2i128..=6,
        action in prop::collection::vec(0i128..=5, 4),
    ) {
        let Ok(matrix) = WeightMatrix::new(rows) else { return Ok(()) };
        let quotient = reflat::weights::Quotient { order, action };
        for q in [None, Some(quotient)] {
            let input = WeightInput { matrix: matrix.clone(), quotient: q };
            let line = format_weight_line(&input);
            prop_assert_eq!(parse_weight_line(&line).unwrap(), input);
        }
    }

    #[test]
    fn pair_estimator_grows_with_p_and_shrinks_with_m(
        p in 10u64..10_000,
        m in 1u64..500,
        s in 1u64..100,
    ) {
        let base = estimate_population(p, m, s);
        let more_p = estimate_population(p + 1, m, s);
        let more_m = estimate_population(p, m + 1, s);
        let more_s = estimate_population(p, m, s + 1);
        prop_assert!(more_p.0.unwrap() > base.0.unwrap());
        prop_assert!(more_m.0.unwrap() < base.0.unwrap());
        prop_assert!(more_s.1.unwrap() < base.1.unwrap());
    }
}

#[test]
fn involution_counts_satisfy_the_recurrence() {
    // Z_n = Z_{n-1} + (n−1)·Z_{n-2}
    for n in 2..=120usize {
        let z = |k: usize| involution_counts(k).0;
        assert_eq!(z(n), z(n - 1) + z(n - 2) * (n as u64 - 1));
    }
}

#[test]
fn degenerate_point_sets_are_rejected_or_flattened() {
    let flat = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![-3, 0]];
    let p = Polytope::from_points(&flat, 2).unwrap();
    assert_eq!(p.affine_dim(), 1);
    assert!(!p.is_full_dimensional());
    assert_eq!(p.vertices().len(), 2);
}
