//! Property checks of the eigenvalue hierarchy: one-sided-bound soundness
//! against sampled points, monotonicity across levels, and the empty-level
//! conventions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xarability::hierarchy::{nu_max, nu_min, optimize_over_variety, Direction};
use xarability::linalg::{random_hermitian, C64};
use xarability::varieties::{sample_point_rng, BasisCache, VarietySpec};

/// Sampled variety optima never beat the one-sided bounds.
#[test]
fn sandwich_bounds_hold_on_sampled_points() {
    let cache = BasisCache::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7001);
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Schmidt {
            r: 1,
            dims: vec![2, 3],
        },
        VarietySpec::Bosonic { m: 2, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
        VarietySpec::Bisep {
            dims: vec![2, 2, 2],
        },
    ];
    for spec in &specs {
        let n = spec.ambient_dim().unwrap();
        for k in 1..=2usize {
            for _ in 0..20 {
                let h = random_hermitian(&mut rng, n);
                let lo = nu_min(&h, spec, k, &cache).unwrap().value;
                let hi = nu_max(&h, spec, k, &cache).unwrap().value;
                let mut seen_min = f64::INFINITY;
                let mut seen_max = f64::NEG_INFINITY;
                for _ in 0..200 {
                    let psi = sample_point_rng(spec, &mut rng).unwrap();
                    let v = (psi.adjoint() * &h * &psi)[(0, 0)].re;
                    seen_min = seen_min.min(v);
                    seen_max = seen_max.max(v);
                }
                assert!(
                    seen_min >= lo - 1e-8,
                    "{} k={k}: sampled min {seen_min} below bound {lo}",
                    spec.name()
                );
                assert!(
                    seen_max <= hi + 1e-8,
                    "{} k={k}: sampled max {seen_max} above bound {hi}",
                    spec.name()
                );
            }
        }
    }
}

#[test]
fn traces_are_monotone_for_random_observables() {
    let cache = BasisCache::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7002);
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Bosonic { m: 2, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
    ];
    for spec in &specs {
        let n = spec.ambient_dim().unwrap();
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, n);
            let up = optimize_over_variety(&h, spec, 3, Direction::Max, &cache).unwrap();
            assert!(
                up.monotone,
                "{}: max trace not monotone: {:?}",
                spec.name(),
                up.entries
            );
            let down = optimize_over_variety(&h, spec, 3, Direction::Min, &cache).unwrap();
            assert!(
                down.monotone,
                "{}: min trace not monotone: {:?}",
                spec.name(),
                down.entries
            );
        }
    }
}

#[test]
fn cap_truncation_warns_instead_of_failing() {
    let cache = BasisCache::new(xarability::Config::with_cap(2000));
    let spec = VarietySpec::Sep { dims: vec![2, 3] };
    let h = random_hermitian(&mut ChaCha8Rng::seed_from_u64(1), 6);
    let trace = optimize_over_variety(&h, &spec, 6, Direction::Max, &cache).unwrap();
    assert!(trace.truncated.is_some());
    assert!(!trace.entries.is_empty());
}

#[test]
fn diagonal_observables_reach_their_extremes_at_level_one() {
    // Product basis states achieve every diagonal entry, so for diagonal H
    // the level bounds coincide with the true optimum at every level.
    let cache = BasisCache::default();
    let spec = VarietySpec::Sep { dims: vec![2, 2] };
    let mut rng = ChaCha8Rng::seed_from_u64(7003);
    for _ in 0..5 {
        let entries: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let h = xarability::linalg::CMat::from_diagonal(&xarability::linalg::CVec::from_iterator(
            4,
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let best = entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for k in 1..=3 {
            let nu = nu_max(&h, &spec, k, &cache).unwrap().value;
            assert!((nu - best).abs() < 1e-9, "k={k}: {nu} vs {best}");
        }
    }
}
