use shapeinv::catalog::{FamilyId, ParamSet, SuperpotentialSpec};
use shapeinv::ladder::{annihilation_residual, ground_state, hamiltonian, ladder_chain, overlap, Superpotential};
use shapeinv::models::{
    default_grid, guarded_level_count, model_gap_formula, model_potential, model_spectrum_check, ModelId, ModelParams, ModelSystem,
};
use shapeinv::spectral::{eigen_lowest, refine_and_extrapolate, GridSpec, SolverOptions};
use shapeinv::verifier::{shape_residual, SampleGrid};

fn params(id: ModelId, label: &str, v: f64) -> ModelParams {
    let mut p = ModelParams::defaults(id);
    p.set(label, v).unwrap();
    p
}

/// Same L as the default grid, smaller inner cutoff.
fn radial_grid(id: ModelId, p: &ModelParams, levels: usize, eps: f64, n: usize) -> GridSpec {
    let g = default_grid(id, p, levels, n).unwrap();
    GridSpec::new(eps, g.xmax, n, g.channels).unwrap()
}

#[test]
fn radial_models_follow_the_coulomb_gap_formula() {
    let cases = [
        (ModelId::Spinor3d, "j", 0.5),
        (ModelId::Spinor3d, "j", 1.5),
        (ModelId::PsRadial, "m", 1.0),
        (ModelId::PsRadial, "m", 2.0),
        (ModelId::Vector3d, "j", 1.0),
        (ModelId::Vector2d, "m", 2.0),
    ];
    for (id, label, v) in cases {
        let p = params(id, label, v);
        let rep = model_spectrum_check(id, &p, 3, &radial_grid(id, &p, 3, 1e-3, 4000), &SolverOptions::default()).unwrap();
        let dev = rep.max_deviation().unwrap();
        assert_eq!(rep.deviations.as_ref().unwrap().len(), 3);
        assert!(dev < 2e-3, "{id} {label}={v}: {dev:e} {:?}", rep.gaps);
    }
}

// At c = 0 the σ₁ channels decouple into radial oscillators with levels ω(2n + 2κ + 1 ∓ 2μ).
// Their union has uniform gaps nω only when 4μ is an odd integer.
#[test]
fn oscillator_b_levels_are_two_shifted_ladders() {
    let id = ModelId::OscillatorB;
    for (mu, kappa) in [(0.1, 2.0), (0.25, 2.0), (0.4, 2.5)] {
        let p = ModelParams { mu, kappa, ..ModelParams::defaults(id) };
        let w = p.omega;
        let mut want: Vec<f64> = (0..3)
            .flat_map(|n| [-1.0, 1.0].map(|s| w * (2.0 * n as f64 + 2.0 * kappa + 1.0 + s * 2.0 * mu)))
            .collect();
        want.sort_by(f64::total_cmp);
        let rep = refine_and_extrapolate(|x| model_potential(id, &p, x), &default_grid(id, &p, 4, 2000).unwrap(), 4, &SolverOptions::default())
            .unwrap();
        for (e, t) in rep.eigenvalues.iter().zip(&want) {
            assert!((e - t).abs() < 1e-3, "μ={mu} κ={kappa}: {:?} vs {want:?}", rep.eigenvalues);
        }
        let uniform_dev = (1..4).map(|n| (rep.gaps[n] - n as f64 * w).abs()).fold(0.0, f64::max);
        assert_eq!(uniform_dev < 2e-3, mu == 0.25, "μ={mu}: {uniform_dev}");
    }
}

#[test]
fn bound_state_count_matches_guards() {
    let cases = [
        (ModelId::Scarf, ModelParams::defaults(ModelId::Scarf)),
        (ModelId::Scarf, ModelParams { kappa: -4.0, omega: 3.0, ..ModelParams::defaults(ModelId::Scarf) }),
        (ModelId::Tanhexp, ModelParams::defaults(ModelId::Tanhexp)),
        (ModelId::Tanhexp, ModelParams { kappa: -2.0, lambda: 1.5, ..ModelParams::defaults(ModelId::Tanhexp) }),
    ];
    for (id, p) in cases {
        let want = guarded_level_count(id, &p).unwrap();
        let levels = want + 2;
        let rep = model_spectrum_check(id, &p, levels, &default_grid(id, &p, levels, 3000).unwrap(), &SolverOptions::default()).unwrap();
        assert_eq!(rep.bound_levels, Some(want), "{id} {p:?}: {:?} threshold {:?}", rep.eigenvalues, rep.threshold);
        assert!(rep.max_deviation().unwrap() < 5e-3, "{id}: {:?}", rep.deviations);
        assert!(!rep.notes.is_empty());
    }
}

#[test]
fn tanhexp_gaps() {
    let id = ModelId::Tanhexp;
    let p = ModelParams::defaults(id);
    assert_eq!(model_gap_formula(id, &p, 2).unwrap(), 8.0);
    let rep = model_spectrum_check(id, &p, 3, &default_grid(id, &p, 3, 2000).unwrap(), &SolverOptions::default()).unwrap();
    assert!(rep.max_deviation().unwrap() < 1e-4);
}

// Dirichlet at the inner end: at κ = 1 the potential is σ₁/x + 1 and the attractive
// channel is the one-dimensional Coulomb problem, with levels 1 − 1/(4n²).
#[test]
fn hydrogenlike_dirichlet_levels_follow_one_dimensional_coulomb() {
    let id = ModelId::Hydrogenlike;
    let p = ModelParams::defaults(id);
    let grid = GridSpec::new(1e-4, 60.0, 6000, 2).unwrap();
    let rep = refine_and_extrapolate(|x| model_potential(id, &p, x), &grid, 3, &SolverOptions::default()).unwrap();
    for (n, e) in rep.eigenvalues.iter().enumerate() {
        let k = (n + 1) as f64;
        let want = 1.0 - 1.0 / (4.0 * k * k);
        assert!((e - want).abs() < 2e-3, "level {n}: {e} vs {want}");
    }
    assert!((rep.gaps[1] - 0.75).abs() > 0.5);
}

#[test]
fn oscillator_a_ladder_levels_and_extra_dirichlet_level() {
    let id = ModelId::OscillatorA;
    let p = ModelParams::defaults(id);
    let rep = refine_and_extrapolate(|x| model_potential(id, &p, x), &default_grid(id, &p, 5, 2000).unwrap(), 5, &SolverOptions::default())
        .unwrap();
    let e = &rep.eigenvalues;
    for want in [0.0, 2.0, 4.0, 6.0] {
        assert!(e.iter().any(|v| (v - want).abs() < 1e-3), "{want} missing from {e:?}");
    }
    assert!(e.iter().any(|v| *v > 2.1 && *v < 3.9), "{e:?}");
}

#[test]
fn vector2d_zero_m_lacks_the_formula_ground_state() {
    let id = ModelId::Vector2d;
    let p = ModelParams::defaults(id);
    let rep = refine_and_extrapolate(|x| model_potential(id, &p, x), &radial_grid(id, &p, 4, 1e-3, 4000), 3, &SolverOptions::default())
        .unwrap();
    // numerical levels line up with formula levels n = 1, 2, 3
    let f = |n| model_gap_formula(id, &p, n).unwrap();
    for n in 1..3 {
        let want = f(n + 1) - f(1);
        assert!((rep.gaps[n] - want).abs() < 1e-3, "{n}: {} vs {want}", rep.gaps[n]);
    }
}

#[test]
fn ladder_energy_consistency() {
    let cases = [
        (ModelId::OscillatorA, ModelParams::defaults(ModelId::OscillatorA), GridSpec::new(0.0, 12.0, 3000, 2).unwrap(), 2),
        (ModelId::Spinor3d, params(ModelId::Spinor3d, "j", 1.5), GridSpec::new(0.0, 120.0, 6000, 2).unwrap(), 1),
        (ModelId::Tanhexp, ModelParams::defaults(ModelId::Tanhexp), GridSpec::new(-25.0, 25.0, 4000, 2).unwrap(), 2),
    ];
    for (id, p, grid, n) in cases {
        let sys = ModelSystem::new(id, &p).unwrap();
        let k = sys.kappa();
        let chain = ladder_chain(&sys, k, n, &grid).unwrap();
        let h = hamiltonian(&sys, k, &grid).unwrap();
        // oscillatorA has an extra Dirichlet level between ladder levels, so match the nearest one
        let pairs = eigen_lowest(&h, n + 2).unwrap();
        let e = h.expectation(&chain.state).unwrap();
        let i = (0..pairs.values.len()).min_by(|&a, &b| (pairs.values[a] - e).abs().total_cmp(&(pairs.values[b] - e).abs())).unwrap();
        assert!((e - pairs.values[i]).abs() < 2e-3 * pairs.values[i].abs().max(1.0), "{id}: {e} vs {:?}", pairs.values);
        assert!(overlap(&chain.state, &pairs.vectors[i]).unwrap() > 0.995, "{id}");
        for g in &chain.ground_states {
            assert!((g.state.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn annihilation_residual_shrinks_under_refinement() {
    let cases = [
        (ModelId::OscillatorA, GridSpec::new(0.0, 12.0, 500, 2).unwrap()),
        (ModelId::Scarf, GridSpec::new(-20.0, 20.0, 500, 2).unwrap()),
        (ModelId::Tanhexp, GridSpec::new(-20.0, 20.0, 500, 2).unwrap()),
        (ModelId::PsRadial, GridSpec::new(0.0, 100.0, 1000, 2).unwrap()),
    ];
    for (id, grid) in cases {
        let p = ModelParams::defaults(id);
        let sys = ModelSystem::new(id, &p).unwrap();
        let k = sys.kappa();
        let coarse = ground_state(&sys, k, &grid).unwrap().annihilation;
        let fine = ground_state(&sys, k, &grid.refined()).unwrap().annihilation;
        assert!(coarse / fine >= 2.0, "{id}: {coarse:e} -> {fine:e}");
    }
}

// The numerical first gap of W² − W' on the grid equals the shape constant fitted by the verifier.
#[test]
fn spectral_gap_equals_fitted_shape_constant() {
    let cases = [
        (SuperpotentialSpec::new(FamilyId::W17, ParamSet { omega: 2.0, mu: 0.7, ..ParamSet::default() }).unwrap(), 1.0, GridSpec::new(0.0, 12.0, 3000, 2).unwrap()),
        (SuperpotentialSpec::new(FamilyId::W17, ParamSet { omega: 1.0, mu: -0.3, ..ParamSet::default() }).unwrap(), 2.0, GridSpec::new(0.0, 16.0, 3000, 2).unwrap()),
    ];
    for (spec, k, grid) in cases {
        let c = shape_residual(&spec, k, &SampleGrid::for_spec(&spec, 50).unwrap()).unwrap().fit("c_kappa");
        let h = hamiltonian(&spec, k, &grid).unwrap();
        let e = eigen_lowest(&h, 2).unwrap().values;
        assert!((e[1] - e[0] - c).abs() < 2e-3, "{}: gap {} vs C {c}", spec.family, e[1] - e[0]);
        let gs = ground_state(&spec, k, &grid).unwrap();
        assert!(annihilation_residual(&spec, k, &gs.state).unwrap() < 1e-2);
        assert_eq!(spec.channels(), 2);
    }
}
