//! Discretized factorization operators a∓ = ±d/dx + W and the SUSY ladder
//! ψ_n(κ) = a⁺_κ a⁺_{κ+1} ⋯ a⁺_{κ+n−1} ψ₀(κ+n).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::SuperpotentialSpec;
use crate::matrix::HermitianMatrix;
use crate::spectral::{assemble, eigen_lowest, DiscreteHamiltonian, GridFunction, GridSpec};
use crate::{Error, Result};

/// Annihilation residual above which a ground state is not accepted.
pub const GROUND_STATE_TOL: f64 = 1e-2;

/// Anything that yields W_κ(x) and its derivative.
pub trait Superpotential {
    fn channels(&self) -> usize;
    fn w(&self, kappa: f64, x: f64) -> Result<HermitianMatrix>;
    fn w_prime(&self, kappa: f64, x: f64) -> Result<HermitianMatrix>;

    /// W² − W'.
    fn v_minus(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        let w = self.w(kappa, x)?;
        Ok(&w.square() - &self.w_prime(kappa, x)?)
    }

    /// W² + W'.
    fn v_plus(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        let w = self.w(kappa, x)?;
        Ok(&w.square() + &self.w_prime(kappa, x)?)
    }
}

impl Superpotential for SuperpotentialSpec {
    fn channels(&self) -> usize {
        self.dim
    }
    fn w(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.eval_w(kappa, x)
    }
    fn w_prime(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.eval_w_prime(kappa, x)
    }
}

fn check_channels(sup: &dyn Superpotential, psi: &GridFunction) -> Result<()> {
    if psi.grid.channels != sup.channels() {
        return Err(Error::DimensionMismatch { expected: sup.channels(), found: psi.grid.channels });
    }
    Ok(())
}

/// Central difference; the Dirichlet endpoint values (zero) serve as neighbours
/// of the first and last interior points.
pub fn derivative(psi: &GridFunction) -> GridFunction {
    let n = psi.grid.channels;
    let np = psi.grid.n_points;
    let inv = 0.5 / psi.grid.h();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = GridFunction::zeros(psi.grid);
    for i in 0..np {
        for c in 0..n {
            let left = if i > 0 { psi.values[(i - 1) * n + c] } else { zero };
            let right = if i + 1 < np { psi.values[(i + 1) * n + c] } else { zero };
            out.values[i * n + c] = (right - left) * inv;
        }
    }
    out
}

fn apply_w(sup: &dyn Superpotential, kappa: f64, psi: &GridFunction, sign: f64) -> Result<GridFunction> {
    check_channels(sup, psi)?;
    let n = psi.grid.channels;
    let mut out = derivative(psi).scaled(Complex64::new(sign, 0.0));
    for i in 0..psi.grid.n_points {
        let w = sup.w(kappa, psi.grid.x(i))?;
        let wpsi = w.as_matrix().mul_vec(psi.at(i));
        for c in 0..n {
            out.values[i * n + c] += wpsi[c];
        }
    }
    Ok(out)
}

/// a⁻ψ = ψ' + Wψ.
pub fn apply_aminus(sup: &dyn Superpotential, kappa: f64, psi: &GridFunction) -> Result<GridFunction> {
    apply_w(sup, kappa, psi, 1.0)
}

/// a⁺ψ = −ψ' + Wψ.
pub fn apply_aplus(sup: &dyn Superpotential, kappa: f64, psi: &GridFunction) -> Result<GridFunction> {
    apply_w(sup, kappa, psi, -1.0)
}

/// |⟨a,b⟩| / (‖a‖‖b‖).
pub fn overlap(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    let (na, nb) = (a.norm(), b.norm());
    if !(na > 0.0 && nb > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok((a.inner(b)?.norm() / (na * nb)).min(1.0))
}

/// Euclidean norm over interior points, skipping `skip` points at each end.
pub fn interior_norm(f: &GridFunction, skip: usize) -> f64 {
    let n = f.grid.channels;
    let np = f.grid.n_points;
    if np <= 2 * skip {
        return 0.0;
    }
    let s: f64 = f.values[skip * n..(np - skip) * n].iter().map(|v| v.norm_sqr()).sum();
    (s * f.grid.h()).sqrt()
}

/// ‖a⁻ψ‖/‖ψ‖ with the endpoints left out of both norms.
pub fn annihilation_residual(sup: &dyn Superpotential, kappa: f64, psi: &GridFunction) -> Result<f64> {
    let a = apply_aminus(sup, kappa, psi)?;
    let den = interior_norm(psi, 1);
    if !(den > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(interior_norm(&a, 1) / den)
}

/// The discretized H_κ = −d² + W² − W'.
pub fn hamiltonian(sup: &dyn Superpotential, kappa: f64, grid: &GridSpec) -> Result<DiscreteHamiltonian> {
    assemble(|x| sup.v_minus(kappa, x), grid)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundState {
    pub kappa: f64,
    pub state: GridFunction,
    /// Lowest eigenvalue of W² − W', i.e. the factorization energy.
    pub energy: f64,
    pub annihilation: f64,
}

pub fn ground_state(sup: &dyn Superpotential, kappa: f64, grid: &GridSpec) -> Result<GroundState> {
    let h = hamiltonian(sup, kappa, grid)?;
    let pairs = eigen_lowest(&h, 1)?;
    let state = pairs.vectors.into_iter().next().expect("one level requested");
    let annihilation = annihilation_residual(sup, kappa, &state)?;
    Ok(GroundState { kappa, state, energy: pairs.values[0], annihilation })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderChain {
    pub base_kappa: f64,
    pub length: usize,
    /// Ground states of H_{κ+j}, j = 0..=length, each normalized.
    pub ground_states: Vec<GroundState>,
    /// ψ_n(κ), normalized.
    pub state: GridFunction,
}

impl LadderChain {
    pub fn factorization_energies(&self) -> Vec<f64> {
        self.ground_states.iter().map(|g| g.energy).collect()
    }
}

/// Builds the chain; fails if any H_{κ+j} lacks a ground state annihilated by a⁻.
pub fn ladder_chain(sup: &dyn Superpotential, kappa: f64, n: usize, grid: &GridSpec) -> Result<LadderChain> {
    let mut ground_states = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let k = kappa + j as f64;
        let g = ground_state(sup, k, grid)?;
        if !(g.annihilation < GROUND_STATE_TOL) {
            return Err(Error::MissingGroundState { kappa: k, residual: g.annihilation });
        }
        ground_states.push(g);
    }
    let mut psi = ground_states[n].state.clone();
    for j in (0..n).rev() {
        psi = apply_aplus(sup, kappa + j as f64, &psi)?.normalized()?;
    }
    Ok(LadderChain { base_kappa: kappa, length: n, ground_states, state: psi })
}

pub fn ladder_state(sup: &dyn Superpotential, kappa: f64, n: usize, grid: &GridSpec) -> Result<GridFunction> {
    Ok(ladder_chain(sup, kappa, n, grid)?.state)
}

/// ‖a⁻_κ H_κ ψ − (H_{κ+1} + C_κ) a⁻_κ ψ‖ / ‖a⁻_κ H_κ ψ‖, skipping `skip` points per end.
pub fn intertwining_residual(
    sup: &dyn Superpotential,
    kappa: f64,
    c_kappa: f64,
    psi: &GridFunction,
    skip: usize,
) -> Result<f64> {
    let h0 = hamiltonian(sup, kappa, &psi.grid)?;
    let h1 = hamiltonian(sup, kappa + 1.0, &psi.grid)?;
    let left = apply_aminus(sup, kappa, &h0.apply(psi)?)?;
    let a = apply_aminus(sup, kappa, psi)?;
    let mut right = h1.apply(&a)?;
    right.axpy(Complex64::new(c_kappa, 0.0), &a)?;
    let mut diff = left.clone();
    diff.axpy(Complex64::new(-1.0, 0.0), &right)?;
    let den = interior_norm(&left, skip);
    if !(den > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(interior_norm(&diff, skip) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FamilyId, ParamSet};
    use crate::spectral::eigen_lowest;

    fn oscillator() -> SuperpotentialSpec {
        SuperpotentialSpec::new(FamilyId::W17, ParamSet { omega: 2.0, mu: 0.5, c: 0.0, ..Default::default() }).unwrap()
    }

    fn osc_grid(n: usize) -> GridSpec {
        GridSpec::new(0.0, 12.0, n, 2).unwrap()
    }

    fn smooth(grid: GridSpec) -> GridFunction {
        let (a, b) = (grid.xmin, grid.xmax);
        GridFunction::from_fn(grid, |x| {
            let t = (x - a) / (b - a);
            let bump = (t * (1.0 - t)).powi(3);
            vec![Complex64::new(bump * (1.0 + x), 0.3 * bump), Complex64::new(bump * x.cos(), -bump)]
        })
        .unwrap()
    }

    #[test]
    fn zero_maps_to_zero() {
        let sup = oscillator();
        let z = GridFunction::zeros(osc_grid(200));
        assert!(apply_aminus(&sup, 1.0, &z).unwrap().norm() == 0.0);
        assert!(apply_aplus(&sup, 1.0, &z).unwrap().norm() == 0.0);
    }

    #[test]
    fn discrete_adjointness() {
        let sup = oscillator();
        let g = osc_grid(300);
        let phi = smooth(g);
        let psi = GridFunction::from_fn(g, |x| {
            let t = x / 12.0;
            let b = (t * (1.0 - t)).powi(2);
            vec![Complex64::new(b * x.sin(), b), Complex64::new(b, 0.2 * x * b)]
        })
        .unwrap();
        let lhs = apply_aplus(&sup, 1.3, &phi).unwrap().inner(&psi).unwrap();
        let rhs = phi.inner(&apply_aminus(&sup, 1.3, &psi).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-6, "{lhs} {rhs}");
    }

    #[test]
    fn factorization_matches_hamiltonian() {
        let sup = oscillator();
        let g = osc_grid(3000);
        let psi = smooth(g);
        let lhs = apply_aplus(&sup, 1.0, &apply_aminus(&sup, 1.0, &psi).unwrap()).unwrap();
        let rhs = hamiltonian(&sup, 1.0, &g).unwrap().apply(&psi).unwrap();
        let mut d = lhs.clone();
        d.axpy(Complex64::new(-1.0, 0.0), &rhs).unwrap();
        let rel = interior_norm(&d, 2) / interior_norm(&rhs, 2);
        assert!(rel < 1e-3, "{rel}");
    }

    #[test]
    fn oscillator_ground_state_is_annihilated() {
        let sup = oscillator();
        let g = ground_state(&sup, 1.0, &osc_grid(2000)).unwrap();
        assert!(g.annihilation < 5e-3, "{}", g.annihilation);
        assert!(g.energy.abs() < 1e-3);
    }

    #[test]
    fn annihilation_improves_under_refinement() {
        let sup = oscillator();
        let r1 = ground_state(&sup, 1.0, &osc_grid(500)).unwrap().annihilation;
        let r2 = ground_state(&sup, 1.0, &osc_grid(1001)).unwrap().annihilation;
        assert!(r1 / r2 >= 2.0, "{r1} {r2}");
    }

    #[test]
    fn ladder_reproduces_first_excited_state() {
        let sup = oscillator();
        let grid = osc_grid(2000);
        let chain = ladder_chain(&sup, 1.0, 1, &grid).unwrap();
        let h = hamiltonian(&sup, 1.0, &grid).unwrap();
        let pairs = eigen_lowest(&h, 2).unwrap();
        let ov = overlap(&chain.state, &pairs.vectors[1]).unwrap();
        assert!(ov > 0.999, "{ov}");
        let e = h.expectation(&chain.state).unwrap();
        assert!((e - pairs.values[1]).abs() < 2e-3 * pairs.values[1].abs().max(1.0));
        assert!(overlap(&pairs.vectors[0], &pairs.vectors[1]).unwrap() < 1e-6);
    }

    #[test]
    fn n_zero_is_the_ground_state() {
        let sup = oscillator();
        let grid = osc_grid(400);
        let s = ladder_state(&sup, 1.0, 0, &grid).unwrap();
        let g = ground_state(&sup, 1.0, &grid).unwrap();
        assert!((overlap(&s, &g.state).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intertwining_on_eigenvectors() {
        let sup = oscillator();
        let grid = osc_grid(2000);
        let pairs = eigen_lowest(&hamiltonian(&sup, 1.0, &grid).unwrap(), 3).unwrap();
        for v in &pairs.vectors[1..] {
            // Stencils touching the singular end at x = 0 are left out.
            let r = intertwining_residual(&sup, 1.0, 2.0, v, 10).unwrap();
            assert!(r < 1e-2, "{r}");
        }
    }

    #[test]
    fn overlap_basics() {
        let f = smooth(osc_grid(100));
        assert!((overlap(&f, &f).unwrap() - 1.0).abs() < 1e-14);
        let rot = f.scaled(Complex64::from_polar(2.0, 1.1));
        assert!((overlap(&f, &rot).unwrap() - 1.0).abs() < 1e-14);
        assert!(overlap(&f, &GridFunction::zeros(f.grid)).is_err());
        assert!(overlap(&f, &smooth(osc_grid(101))).is_err());
    }

    struct Inverted;

    impl Superpotential for Inverted {
        fn channels(&self) -> usize {
            1
        }
        fn w(&self, _: f64, x: f64) -> Result<HermitianMatrix> {
            Ok(HermitianMatrix::from_real_diagonal(&[-x]))
        }
        fn w_prime(&self, _: f64, _: f64) -> Result<HermitianMatrix> {
            Ok(HermitianMatrix::from_real_diagonal(&[-1.0]))
        }
    }

    #[test]
    fn broken_susy_is_reported() {
        // a⁻ψ = 0 gives exp(x²/2), which is not normalizable.
        let r = ladder_chain(&Inverted, 1.0, 1, &GridSpec::new(-6.0, 6.0, 400, 1).unwrap());
        assert!(matches!(r, Err(Error::MissingGroundState { .. })), "{r:?}");
    }
}
