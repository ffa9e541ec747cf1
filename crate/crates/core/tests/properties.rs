use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapeinv::catalog::{build_generic, sampling_window, FamilyId, ParamSet, SuperpotentialSpec};
use shapeinv::ladder::{apply_aminus, apply_aplus, overlap};
use shapeinv::matrix::{conjugate, spin1, CMatrix, HermitianMatrix, SpinBasis, UnitaryMatrix};
use shapeinv::models::{check_reduction, reduction_grid, ModelId, ModelParams, ModelSystem};
use shapeinv::riccati::{MatrixRiccatiSolution, RiccatiKind, RiccatiTag};
use shapeinv::spectral::{assemble, GridFunction, GridSpec};
use shapeinv::verifier::{determining_residuals, shape_residual, SampleGrid};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, c(rng.gen_range(-1.0..1.0), 0.0));
        for j in i + 1..n {
            let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    HermitianMatrix::new(m).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng, f: FamilyId) -> ParamSet {
    let mut p = ParamSet {
        lambda: rng.gen_range(0.5..2.0),
        mu: rng.gen_range(-1.5..1.5),
        mu1: rng.gen_range(-1.5..1.5),
        mu2: rng.gen_range(-1.5..1.5),
        mu3: rng.gen_range(-1.5..1.5),
        c: rng.gen_range(-0.6..0.6),
        c1: rng.gen_range(-0.8..0.8),
        c2: rng.gen_range(-0.8..0.8),
        omega: rng.gen_range(0.3..2.5),
        nu: rng.gen_range(-1.0..1.0),
        tau: rng.gen_range(-1.0..1.0),
        delta: rng.gen_range(-1.0..1.0),
        ..ParamSet::default()
    };
    if f.uses_r23() {
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        p.r2 = Some(p.omega * phi.sin());
        p.r3 = Some(p.omega * phi.cos());
    }
    p
}

fn family() -> impl Strategy<Value = FamilyId> {
    (0usize..FamilyId::PRINTED.len()).prop_map(|i| FamilyId::PRINTED[i])
}

fn interior(spec: &SuperpotentialSpec, rng: &mut ChaCha8Rng) -> f64 {
    let (a, b) = sampling_window(spec.interval(), 6.0);
    rng.gen_range(a + 0.05 * (b - a)..b - 0.05 * (b - a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_preserves_trace_and_determinant(seed in 0u64..1_000_000, n in 2usize..=3, theta in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, n);
        let u = UnitaryMatrix::exp_i(&random_hermitian(&mut rng, n), theta).unwrap();
        let b = conjugate(&u, &a).unwrap();
        prop_assert!(b.as_matrix().hermiticity_defect() < 1e-12);
        prop_assert!((b.trace() - a.trace()).abs() < 1e-10);
        prop_assert!((b.as_matrix().determinant() - a.as_matrix().determinant()).norm() < 1e-10);
    }

    #[test]
    fn superpotentials_are_hermitian_and_reassemble(f in family(), seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = SuperpotentialSpec::new(f, random_params(&mut rng, f)).unwrap();
        let dec = spec.decomposition();
        let kappa = rng.gen_range(0.6..2.5);
        let x = interior(&spec, &mut rng);
        let w = spec.eval_w(kappa, x).unwrap();
        prop_assert!(w.as_matrix().hermiticity_defect() < 1e-12);
        let re = &(&dec.q(x).unwrap().scale(kappa) + &dec.p(x).unwrap()) + &dec.r.scale(1.0 / kappa);
        prop_assert!((&re - &w).max_abs() < 1e-12 * w.max_abs().max(1.0));
    }

    #[test]
    fn every_family_is_shape_invariant(f in family(), seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = SuperpotentialSpec::new(f, random_params(&mut rng, f)).unwrap();
        let kappa = rng.gen_range(0.6..2.5);
        let grid = SampleGrid::for_spec(&spec, 50).unwrap();
        let det = determining_residuals(spec.decomposition(), &grid).unwrap();
        prop_assert!(det.passes(1e-9), "{f}: {det:?}");
        let shape = shape_residual(&spec, kappa, &grid).unwrap();
        prop_assert!(shape.residual("shape") < 1e-9, "{f}: {shape:?}");
        let refined = shape_residual(&spec, kappa, &grid.refined()).unwrap();
        prop_assert!((refined.fit("c_kappa") - shape.fit("c_kappa")).abs() < 1e-10 * shape.fit("c_kappa").abs().max(1.0));
    }

    #[test]
    fn generic_r_squares_to_omega(seed in 0u64..1_000_000, n in 1usize..=2, m in 1usize..=2, omega in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = n + m;
        let kinds = vec![RiccatiKind::zero(1.0).unwrap(); k];
        let full = random_hermitian(&mut rng, k);
        let mut mu = CMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                if (i < n) != (j < n) {
                    mu.set(i, j, full.get(i, j));
                }
            }
        }
        let spec = build_generic(n, m, kinds, HermitianMatrix::new(mu).unwrap(), omega, true, None).unwrap();
        let r = &spec.decomposition().r;
        prop_assert_eq!(r.square(), HermitianMatrix::identity(k).scale(omega * omega));
    }

    #[test]
    fn matrix_riccati_keeps_its_eigenbasis(seed in 0u64..1_000_000, tag_ix in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tag = RiccatiTag::ALL[tag_ix];
        let base = RiccatiKind::new(tag, 1.0, rng.gen_range(0.5..1.5), 0.0).unwrap();
        let x0 = match tag {
            RiccatiTag::Inverse | RiccatiTag::Coth => 1.0,
            _ => 0.0,
        };
        let sol = MatrixRiccatiSolution::new(base, random_hermitian(&mut rng, 3), x0, 3.0).unwrap();
        let (lo, hi) = base.component(x0).unwrap();
        let (lo, hi) = (lo.max(x0 - 0.8), hi.min(x0 + 0.8));
        let x1 = rng.gen_range(lo + 0.1 * (hi - lo)..hi - 0.1 * (hi - lo));
        let x2 = rng.gen_range(lo + 0.1 * (hi - lo)..hi - 0.1 * (hi - lo));
        if let (Ok(q1), Ok(q2)) = (sol.eval(x1), sol.eval(x2)) {
            let comm = q1.as_matrix().commutator(q2.as_matrix()).unwrap();
            prop_assert!(comm.norm() < 1e-8 * (1.0 + q1.norm() * q2.norm()));
        }
    }

    #[test]
    fn discrete_hamiltonian_is_hermitian(seed in 0u64..1_000_000, channels in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_hermitian(&mut rng, channels);
        let grid = GridSpec::new(-1.0, 2.0, 80, channels).unwrap();
        let h = assemble(|x| Ok(v.scale(x * x)), &grid).unwrap();
        let dim = h.dim();
        let a: Vec<Complex64> = (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let b: Vec<Complex64> = (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 { x.iter().zip(y).map(|(p, q)| p.conj() * q).sum() };
        let lhs = dot(&a, &h.apply_raw(&b));
        let rhs = dot(&h.apply_raw(&a), &b);
        prop_assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0));
    }

    #[test]
    fn ladder_operators_are_adjoint(seed in 0u64..1_000_000, kappa in 0.5f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = ModelSystem::new(ModelId::Scarf, &ModelParams::defaults(ModelId::Scarf)).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 200, 2).unwrap();
        let coeffs: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let smooth = |shift: usize| {
            let coeffs = coeffs.clone();
            GridFunction::from_fn(grid, move |x| {
                let s = (x * 0.6 + coeffs[shift]).sin();
                vec![c(coeffs[shift + 1] * s, coeffs[shift + 2] * x.cos()), c(coeffs[shift + 3] * (x / 2.0).cos(), 0.0)]
            })
            .unwrap()
        };
        let (phi, psi) = (smooth(0), smooth(4));
        let lhs = apply_aplus(&sys, -kappa, &phi).unwrap().inner(&psi).unwrap();
        let rhs = phi.inner(&apply_aminus(&sys, -kappa, &psi).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        let ov = overlap(&phi, &psi).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ov));
    }

    #[test]
    fn reductions_hold_for_random_labels(model_ix in 0usize..9, label in 0u32..5) {
        let id = ModelId::ALL[model_ix];
        let mut p = ModelParams::defaults(id);
        let l = label as f64;
        match id {
            ModelId::Spinor3d => p.j = 0.5 + l,
            ModelId::Vector3d => p.j = 1.0 + l,
            ModelId::PsRadial => p.m = 1.0 + l,
            ModelId::Vector2d => p.m = l,
            ModelId::Scarf | ModelId::Tanhexp => p.kappa = -2.0 - l,
            _ => p.kappa = 1.0 + l,
        }
        let rep = check_reduction(id, &p, &reduction_grid(id, &p, 60).unwrap()).unwrap();
        prop_assert!(rep.max_deviation < 1e-10, "{id}: {rep:?}");
    }
}

#[test]
fn spin_casimir_is_two() {
    for basis in [SpinBasis::Cartesian, SpinBasis::GelfandTsetlin] {
        let s: Vec<HermitianMatrix> = (1..=3).map(|k| spin1(k, basis).unwrap()).collect();
        let sum = &(&s[0].square() + &s[1].square()) + &s[2].square();
        let dev = (&sum - &HermitianMatrix::identity(3).scale(2.0)).max_abs();
        // the Gelfand–Tsetlin entries carry 1/√2, exact only up to rounding
        match basis {
            SpinBasis::Cartesian => assert_eq!(dev, 0.0),
            SpinBasis::GelfandTsetlin => assert!(dev < 1e-15, "{dev}"),
        }
    }
}
