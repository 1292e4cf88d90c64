//! Property tests for the measurement, surgery and solver invariants.

use proptest::prelude::*;

use stretchlab::conformal::StabilityForm;
use stretchlab::geometry::{fixtures, Cycle, Region, TriangulatedSurface};
use stretchlab::solver::{self, SolverSettings};
use stretchlab::surgery::{self, StretchParams, SurgeredMetric};

fn meshes() -> Vec<TriangulatedSurface> {
    vec![
        fixtures::tetrahedron(),
        fixtures::octahedron(),
        fixtures::moebius_torus(),
        fixtures::dumbbell(0.5, 5, 4).unwrap().surface,
    ]
}

fn region_strategy(max_faces: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), max_faces)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perimeter_symmetric_under_complement(mask in region_strategy(42), pick in 0usize..4) {
        let surface = &meshes()[pick];
        let region = Region::from_mask(&mask[..surface.face_count()]);
        let complement = region.complement(surface);
        let a = surface.perimeter(&region).unwrap();
        let b = surface.perimeter(&complement).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn volume_additive(mask in region_strategy(42), pick in 0usize..4) {
        let surface = &meshes()[pick];
        let region = Region::from_mask(&mask[..surface.face_count()]);
        let complement = region.complement(surface);
        let total = surface.total_area();
        let sum = surface.volume(&region).unwrap() + surface.volume(&complement).unwrap();
        prop_assert!((sum - total).abs() <= 1e-12 * total.max(1.0));
    }

    #[test]
    fn boundary_roundtrip_through_separation(mask in region_strategy(42), pick in 0usize..4) {
        let surface = &meshes()[pick];
        let region = Region::from_mask(&mask[..surface.face_count()]);
        let cycle = Cycle::boundary_of(surface, &region).unwrap();
        let (separates, a, b) = surface.separates(&cycle).unwrap();
        if separates {
            prop_assert_eq!(&Cycle::boundary_of(surface, &a).unwrap(), &cycle);
            prop_assert_eq!(&Cycle::boundary_of(surface, &b).unwrap(), &cycle);
        }
    }

    #[test]
    fn stretch_monotone_in_r(r1 in 1.0f64..40.0, r2 in 1.0f64..40.0) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let d = fixtures::dumbbell(0.5, 13, 4).unwrap();
        let cutoff = surgery::make_cutoff(3.0).unwrap();
        let base = SurgeredMetric::already_cylindrical(&d.surface, &d.collar, &cutoff).unwrap();
        let g_lo = surgery::stretch(&base, &StretchParams::standard(3.0, lo), &cutoff).unwrap();
        let g_hi = surgery::stretch(&base, &StretchParams::standard(3.0, hi), &cutoff).unwrap();
        for (a, b) in g_lo.surface().edge_lengths().iter().zip(g_hi.surface().edge_lengths()) {
            prop_assert!(b >= a);
        }
    }

    #[test]
    fn stability_lambda_min_monotone_in_potential(
        base in proptest::collection::vec(-3.0f64..3.0, 8),
        drop in proptest::collection::vec(0.0f64..2.0, 8),
    ) {
        let lens = vec![0.5f64; 8];
        let lower: Vec<f64> = base.iter().zip(&drop).map(|(b, d)| b - d).collect();
        let f_hi = StabilityForm::on_ring(&lens, &base).unwrap();
        let f_lo = StabilityForm::on_ring(&lens, &lower).unwrap();
        // decreasing the potential pointwise never decreases λ_min
        prop_assert!(f_lo.lambda_min >= f_hi.lambda_min - 1e-9);
    }

    #[test]
    fn stability_constant_shift(base in proptest::collection::vec(-2.0f64..2.0, 6), c in -3.0f64..3.0) {
        let lens = vec![0.7f64; 6];
        let shifted: Vec<f64> = base.iter().map(|b| b + c).collect();
        let f0 = StabilityForm::on_ring(&lens, &base).unwrap();
        let f1 = StabilityForm::on_ring(&lens, &shifted).unwrap();
        prop_assert!((f1.lambda_min - (f0.lambda_min - c)).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_complement_symmetry(frac in 0.02f64..0.98) {
        let surface = fixtures::octahedron();
        let settings = SolverSettings::default();
        let total = surface.total_area();
        let a = solver::constrained_min_at_volume(&surface, frac * total, &settings).unwrap();
        let b = solver::constrained_min_at_volume(&surface, (1.0 - frac) * total, &settings).unwrap();
        prop_assert!((a.perimeter - b.perimeter).abs() < 1e-9);
    }

    #[test]
    fn sweep_points_certified_at_own_volume(lambda in 0.0f64..20.0) {
        // a Lagrangian minimizer is a global minimum at its own volume
        let surface = fixtures::moebius_torus();
        let pts = solver::mincut_sweep(&surface, &[lambda]).unwrap();
        let p = &pts[0];
        let mut settings = SolverSettings::default();
        settings.volume_tolerance = Some(1e-9);
        let oracle = solver::brute_force_min(&surface, p.volume, &settings).unwrap();
        prop_assert!(p.perimeter <= oracle.perimeter + 1e-9);
    }
}
