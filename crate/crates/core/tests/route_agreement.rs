//! Cross-validation of the three complement constructions: closed form,
//! sampling span, and generator-kernel, plus the structural consistency of
//! the ideal components across levels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xarability::linalg::{kron_vec, vec_power, CVec};
use xarability::symalg::sym_basis;
use xarability::varieties::{
    ideal_component_from_generators, ikperp_closed_form, ikperp_sampling, minor_generators,
    sample_point_rng, VarietySpec,
};
use xarability::Config;

fn agreement_grid() -> Vec<VarietySpec> {
    vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Sep { dims: vec![2, 3] },
        VarietySpec::Schmidt {
            r: 1,
            dims: vec![2, 2],
        },
        VarietySpec::Schmidt {
            r: 1,
            dims: vec![2, 3],
        },
        VarietySpec::Bosonic { m: 2, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
        VarietySpec::Bisep {
            dims: vec![2, 2, 2],
        },
    ]
}

#[test]
fn sampling_and_closed_form_span_the_same_space() {
    let cfg = Config::default();
    for spec in agreement_grid() {
        for k in 1..=3usize {
            let closed = match ikperp_closed_form(&spec, k, &cfg) {
                Ok(b) => b,
                Err(xarability::Error::CapExceeded { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let sampled = ikperp_sampling(&spec, k, None, 1234 + k as u64, &cfg).unwrap();
            assert_eq!(
                closed.dim(),
                sampled.dim(),
                "{} k={k}: closed {} vs sampled {}",
                spec.name(),
                closed.dim(),
                sampled.dim()
            );
            for j in 0..sampled.dim() {
                let col = sampled.basis().column(j).clone_owned();
                let r = closed.projection_residual(&col).unwrap();
                assert!(
                    r < 1e-8,
                    "{} k={k}: sampled column {j} residual {r:.3e}",
                    spec.name()
                );
            }
            for j in 0..closed.dim() {
                let col = closed.basis().column(j).clone_owned();
                let r = sampled.projection_residual(&col).unwrap();
                assert!(
                    r < 1e-8,
                    "{} k={k}: closed column {j} residual {r:.3e}",
                    spec.name()
                );
            }
        }
    }
}

#[test]
fn undersampled_span_is_contained_in_closed_form() {
    let cfg = Config::default();
    let spec = VarietySpec::Sep { dims: vec![2, 3] };
    let closed = ikperp_closed_form(&spec, 2, &cfg).unwrap();
    // Far fewer samples than the dimension (18): the span must still sit
    // inside the closed-form space, flagged as undersampled.
    let sampled = ikperp_sampling(&spec, 2, Some(7), 99, &cfg).unwrap();
    assert!(sampled.undersampled());
    assert!(sampled.dim() < closed.dim());
    for j in 0..sampled.dim() {
        let col = sampled.basis().column(j).clone_owned();
        assert!(closed.projection_residual(&col).unwrap() < 1e-8);
    }
}

/// Ideal-structure consistency across levels, in both valid forms: a
/// sampled point's power extends to the next level's complement, and
/// contracting a level-(k+1) basis column on one slot lands in the level-k
/// complement (the degree-(k+1) ideal component contains everything the
/// degree-k component generates).
#[test]
fn complement_levels_are_consistent() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2] },
        VarietySpec::Schmidt {
            r: 1,
            dims: vec![2, 3],
        },
        VarietySpec::Bosonic { m: 2, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
    ];
    for spec in specs {
        let k = 2usize;
        let n = spec.ambient_dim().unwrap();
        let low = ikperp_closed_form(&spec, k, &cfg).unwrap();
        let high = ikperp_closed_form(&spec, k + 1, &cfg).unwrap();
        let sym_high = sym_basis(n, k + 1, &cfg.caps).unwrap();
        for trial in 0..20 {
            // (a) power consistency: ψ^{⊗k} ⊗ ψ = ψ^{⊗(k+1)} lies in the
            // level-(k+1) complement.
            let psi = sample_point_rng(&spec, &mut rng).unwrap();
            let w = sym_high
                .symmetrize(&kron_vec(&vec_power(&psi, k), &psi))
                .unwrap();
            let r = high.projection_residual(&w).unwrap() / w.norm();
            assert!(
                r < 1e-8,
                "{} trial {trial}: power residual {r:.3e}",
                spec.name()
            );

            // (b) contraction consistency: a random single-slot contraction
            // of a level-(k+1) column lies in the level-k complement.
            let col_idx = rng.random_range(0..high.dim());
            let col = high.basis().column(col_idx).clone_owned();
            let probe = xarability::linalg::random_unit_vector(&mut rng, n);
            // Contract the first slot: out[rest] = Σ_i conj(probe[i]) col[(i, rest)].
            let rest: usize = n.pow(k as u32);
            let mut contracted = CVec::zeros(rest);
            for i in 0..n {
                for idx in 0..rest {
                    contracted[idx] += probe[i].conj() * col[i * rest + idx];
                }
            }
            let norm = contracted.norm();
            if norm > 1e-10 {
                let r = low.projection_residual(&contracted).unwrap() / norm;
                assert!(
                    r < 1e-8,
                    "{} trial {trial}: contraction residual {r:.3e}",
                    spec.name()
                );
            }
        }
    }
}

#[test]
fn schmidt_kernel_dimension_identity() {
    // dim I_{r+1}^⊥ = dim S^{r+1}(H) - C(n1, r+1) C(n2, r+1).
    let cfg = Config::default();
    for (r, n1, n2) in [(1usize, 2usize, 2usize), (1, 2, 3), (1, 3, 3), (2, 3, 3)] {
        let spec = VarietySpec::Schmidt {
            r,
            dims: vec![n1, n2],
        };
        let k = r + 1;
        let icb = match ikperp_closed_form(&spec, k, &cfg) {
            Ok(b) => b,
            Err(xarability::Error::CapExceeded { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let n = n1 * n2;
        let full = xarability::symalg::binomial((n + k - 1) as u64, k as u64).unwrap();
        let minors = xarability::symalg::binomial(n1 as u64, k as u64).unwrap()
            * xarability::symalg::binomial(n2 as u64, k as u64).unwrap();
        assert_eq!(icb.dim() as u128, full - minors, "r={r} n1={n1} n2={n2}");
    }
}

#[test]
fn generator_route_agrees_on_determinantal_cases() {
    let cfg = Config::default();
    for (n1, n2) in [(2usize, 2usize), (2, 3)] {
        let gens = minor_generators(n1, n2, 1, &cfg).unwrap();
        let n = n1 * n2;
        for k in 2..=3usize {
            let gi = ideal_component_from_generators(&gens, n, 2, k, &cfg).unwrap();
            let spec = VarietySpec::Sep { dims: vec![n1, n2] };
            let closed = ikperp_closed_form(&spec, k, &cfg).unwrap();
            assert_eq!(gi.complement_dim, closed.dim(), "n1={n1} n2={n2} k={k}");
            for j in 0..gi.complement.ncols() {
                let col = gi.complement.column(j).clone_owned();
                assert!(closed.projection_residual(&col).unwrap() < 1e-8);
            }
        }
    }
}

#[test]
fn surrogate_matches_plain_schmidt_after_grouping() {
    // A surrogate over the bipartition {0} of a 3-factor space is the
    // Schmidt variety on (n0, n1*n2) up to factor ordering; dimensions
    // must match and membership of its own samples must hold.
    let cfg = Config::default();
    let spec = VarietySpec::SchmidtSurrogate {
        r: 1,
        dims: vec![2, 2, 2],
        bipartition: vec![1],
    };
    let icb = ikperp_closed_form(&spec, 2, &cfg).unwrap();
    let flat = VarietySpec::Schmidt {
        r: 1,
        dims: vec![2, 4],
    };
    let flat_icb = ikperp_closed_form(&flat, 2, &cfg).unwrap();
    assert_eq!(icb.dim(), flat_icb.dim());
    let sampled = ikperp_sampling(&spec, 2, None, 5, &cfg).unwrap();
    assert_eq!(sampled.dim(), icb.dim());
    for j in 0..sampled.dim() {
        let col = sampled.basis().column(j).clone_owned();
        assert!(icb.projection_residual(&col).unwrap() < 1e-8);
    }
}

#[test]
fn catalog_closed_forms_verify_their_invariants() {
    let cfg = Config::default();
    let specs = vec![
        VarietySpec::Sep { dims: vec![2, 2, 2] },
        VarietySpec::Schmidt { r: 2, dims: vec![3, 3] },
        VarietySpec::Bosonic { m: 3, n: 2 },
        VarietySpec::Fermionic { m: 2, n: 4 },
        VarietySpec::Bisep { dims: vec![2, 2, 2] },
        VarietySpec::LSep { l: 3, dims: vec![2, 2, 2] },
        VarietySpec::TProd { t: 2, dims: vec![2, 2, 2] },
        VarietySpec::Mps { r: 2, dims: vec![2, 2, 2] },
        VarietySpec::SchmidtSurrogate { r: 1, dims: vec![2, 2, 2], bipartition: vec![2] },
    ];
    for spec in specs {
        let icb = ikperp_closed_form(&spec, 2, &cfg).unwrap();
        icb.verify(&cfg).unwrap_or_else(|e| panic!("{}: {e}", spec.name()));
        assert!(icb.dim() >= 1, "{}", spec.name());
    }
}
