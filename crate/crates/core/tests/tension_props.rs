//! Feasibility invariants of the extension hierarchy across the catalog:
//! explicit mixtures are always feasible at low levels, the solver never
//! contradicts itself across levels, and the de Finetti bounds are exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xarability::linalg::CVec;
use xarability::varieties::{sample_point_rng, BasisCache, VarietySpec};
use xarability::xtension::{
    definetti_bound, mixture_tension, partial_trace_tension, tension_feasibility, verify_tension,
    TensionVerdict, DEFAULT_MAX_ITERS, DEFAULT_TOL,
};

fn random_mixture<R: Rng>(
    spec: &VarietySpec,
    rng: &mut R,
    max_points: usize,
) -> (Vec<CVec>, Vec<f64>) {
    let count = 1 + rng.random_range(0..max_points);
    let points: Vec<CVec> = (0..count)
        .map(|_| sample_point_rng(spec, rng).unwrap())
        .collect();
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    (points, raw.iter().map(|x| x / total).collect())
}

/// Explicit mixtures of up to 10 sampled points admit verified tensions at
/// k = 2 and k = 3 for every catalog entry within caps.
#[test]
fn catalog_mixtures_are_feasible_at_low_levels() {
    let cache = BasisCache::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1618);
    let specs = vec![
        (VarietySpec::Sep { dims: vec![2, 2] }, 100),
        (
            VarietySpec::Schmidt {
                r: 1,
                dims: vec![2, 3],
            },
            100,
        ),
        (VarietySpec::Bosonic { m: 2, n: 2 }, 100),
        (VarietySpec::Fermionic { m: 2, n: 4 }, 30),
        (
            VarietySpec::Bisep {
                dims: vec![2, 2, 2],
            },
            20,
        ),
        (
            VarietySpec::LSep {
                l: 2,
                dims: vec![2, 2, 2],
            },
            20,
        ),
        (
            VarietySpec::TProd {
                t: 2,
                dims: vec![2, 2, 2],
            },
            20,
        ),
        (
            VarietySpec::Mps {
                r: 2,
                dims: vec![2, 2, 2],
            },
            20,
        ),
        (
            VarietySpec::SchmidtSurrogate {
                r: 2,
                dims: vec![2, 2, 2],
                bipartition: vec![0],
            },
            20,
        ),
    ];
    for (spec, instances) in &specs {
        for k in 2..=3usize {
            for i in 0..*instances {
                let (points, weights) = random_mixture(spec, &mut rng, 10);
                let t = mixture_tension(&points, &weights, spec, k, &cache).unwrap();
                assert!(
                    verify_tension(&t, &cache).unwrap(),
                    "{} instance {i} at k={k}: explicit mixture tension failed verification",
                    spec.name()
                );
            }
        }
    }
}

#[test]
fn traced_mixture_tensions_stay_valid() {
    let cache = BasisCache::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Bosonic { m: 2, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
    ];
    for spec in &specs {
        for _ in 0..5 {
            let (points, weights) = random_mixture(spec, &mut rng, 6);
            let t3 = mixture_tension(&points, &weights, spec, 3, &cache).unwrap();
            let t2 = partial_trace_tension(&t3, &cache).unwrap();
            assert!(verify_tension(&t2, &cache).unwrap(), "{}", spec.name());
            let t1 = partial_trace_tension(&t2, &cache).unwrap();
            assert!(verify_tension(&t1, &cache).unwrap(), "{}", spec.name());
        }
    }
}

/// The solver's three-valued contract: it never declares a constructibly
/// feasible state infeasible, and the singlet witness chain is consistent
/// between levels.
#[test]
fn solver_never_contradicts_explicit_feasibility() {
    let cache = BasisCache::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3141);
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Bosonic { m: 2, n: 2 },
    ];
    for spec in &specs {
        for _ in 0..10 {
            let (points, weights) = random_mixture(spec, &mut rng, 8);
            let t = mixture_tension(&points, &weights, spec, 2, &cache).unwrap();
            let res = tension_feasibility(t.rho(), spec, 2, DEFAULT_MAX_ITERS, DEFAULT_TOL, &cache)
                .unwrap();
            assert_ne!(
                res.verdict,
                TensionVerdict::Infeasible,
                "{}: solver contradicted an explicit tension",
                spec.name()
            );
            if let Some(found) = res.tension {
                assert!(verify_tension(&found, &cache).unwrap());
            }
        }
    }
}

#[test]
fn definetti_bounds_are_exact_rationals() {
    // The implementation must match the closed forms exactly (the ratio is
    // formed in integer arithmetic), spot-checked over random parameter
    // tuples.
    let mut rng = ChaCha8Rng::seed_from_u64(9000);
    for _ in 0..20 {
        let m = 1 + rng.random_range(0..4usize);
        let extra = rng.random_range(0..4usize);
        let n = m + extra.max(1);
        let k = 1 + rng.random_range(0..40usize);
        let f = VarietySpec::Fermionic { m, n };
        let expect = (4 * m * (n - m)) as f64 / (n + k) as f64;
        assert_eq!(definetti_bound(&f, k).unwrap(), expect);

        let dims: Vec<usize> = (0..1 + rng.random_range(0..4usize))
            .map(|_| 2 + rng.random_range(0..4usize))
            .collect();
        let s = VarietySpec::Sep { dims: dims.clone() };
        let max = *dims.iter().max().unwrap();
        let expect = (4 * dims.len() * (max - 1)) as f64 / (k + 1) as f64;
        assert_eq!(definetti_bound(&s, k).unwrap(), expect);

        let b = VarietySpec::Bosonic { m, n };
        let expect = (4 * m * (n - 1)) as f64 / (k + 1) as f64;
        assert_eq!(definetti_bound(&b, k).unwrap(), expect);
    }
}
