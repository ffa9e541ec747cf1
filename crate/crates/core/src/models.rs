//! Worked physical systems: printed potentials, level-gap formulas, and their
//! reconstruction from catalog families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{FamilyId, Interval, ParamSet, SuperpotentialSpec};
use crate::ladder::Superpotential;
use crate::matrix::{conjugate, hermitian_eigen, pauli, sigma_plus, spin1, CMatrix, HermitianMatrix, SpinBasis, UnitaryMatrix};
use crate::spectral::{refine_and_extrapolate, GridSpec, SolverOptions, SpectrumReport};
use crate::verifier::SampleGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    #[serde(rename = "hydrogenlike")]
    Hydrogenlike,
    #[serde(rename = "oscillatorA")]
    OscillatorA,
    #[serde(rename = "oscillatorB")]
    OscillatorB,
    #[serde(rename = "scarf")]
    Scarf,
    #[serde(rename = "tanhexp")]
    Tanhexp,
    #[serde(rename = "spinor3d")]
    Spinor3d,
    #[serde(rename = "ps_radial")]
    PsRadial,
    #[serde(rename = "vector2d")]
    Vector2d,
    #[serde(rename = "vector3d")]
    Vector3d,
}

use ModelId::*;

impl ModelId {
    pub const ALL: [ModelId; 9] = [Hydrogenlike, OscillatorA, OscillatorB, Scarf, Tanhexp, Spinor3d, PsRadial, Vector2d, Vector3d];

    pub fn name(self) -> &'static str {
        match self {
            Hydrogenlike => "hydrogenlike",
            OscillatorA => "oscillatorA",
            OscillatorB => "oscillatorB",
            Scarf => "scarf",
            Tanhexp => "tanhexp",
            Spinor3d => "spinor3d",
            PsRadial => "ps_radial",
            Vector2d => "vector2d",
            Vector3d => "vector3d",
        }
    }

    pub fn family(self) -> FamilyId {
        match self {
            Hydrogenlike => FamilyId::W8,
            OscillatorA => FamilyId::W17,
            OscillatorB => FamilyId::W16,
            Scarf | Tanhexp => FamilyId::W5,
            Spinor3d | PsRadial => FamilyId::W7,
            Vector2d | Vector3d => FamilyId::T1,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Vector2d | Vector3d => 3,
            _ => 2,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Hydrogenlike => "κ(κ−1)σ₊/x² + ωσ₁/x + ω²/κ², hydrogen-like spectrum −ω²/(κ+n)²",
            OscillatorA => "W²−W' of the x^(1/2)-coupled oscillator superpotential (c = 0), spectrum nω",
            OscillatorB => "W²−W' of the shifted-pole oscillator superpotential (δ = 0)",
            Scarf => "matrix Scarf-type potential with sech² and tanh entries",
            Tanhexp => "tanh / exponential coupled potential, spectrum −λ²(κ+n)²",
            Spinor3d => "radial Pauli Hamiltonian with B = x/|x|², 2×2",
            PsRadial => "radial Pron'ko–Stroganov Hamiltonian m(m−σ₃)/r² + σ₁/r",
            Vector2d => "spin-one planar Pron'ko model, Gelfand–Tsetlin basis",
            Vector3d => "spin-one radial model in the field x/|x|²",
        }
    }

    pub fn substitution(self) -> &'static str {
        match self {
            Hydrogenlike => "W8 with μ=0, r3=0, r2=−ω; U=(1+iσ₃)/√2",
            OscillatorA => "W17 with c=0",
            OscillatorB => "W16 with δ=0",
            Scarf => "W5 with μ=0, r3=0, r2=ω; U=(1+iσ₃)/√2",
            Tanhexp => "W5 with ω=0 and μ → −μ",
            Spinor3d => "W7 with c=0, κ=j+1, μ=1/2, r2=0, r3=−ω/2; U=(1+iσ₂)/√2",
            PsRadial => "W7 with c=0, κ=m+1/2, μ=1/2, r2=0, r3=1/2; U=(1+iσ₂)/√2",
            Vector2d => "T1 with c1=c2=μ2=0, μ1=1, ω → −ω/2, κ=m+1/2; rotation S₁→S₃, then Gelfand–Tsetlin basis",
            Vector3d => "as vector2d with κ=j+1",
        }
    }

    pub fn params_used(self) -> &'static [&'static str] {
        match self {
            Hydrogenlike => &["kappa", "omega"],
            OscillatorA => &["kappa", "omega", "mu"],
            OscillatorB => &["kappa", "omega", "mu", "c"],
            Scarf => &["kappa", "omega", "lambda"],
            Tanhexp => &["kappa", "mu", "lambda"],
            Spinor3d => &["j", "omega"],
            PsRadial => &["m"],
            Vector2d => &["m", "omega"],
            Vector3d => &["j", "omega"],
        }
    }

    /// True when the model lives on a half line with a 1/x² or 1/x singularity at the left end.
    pub fn is_radial(self) -> bool {
        !matches!(self, Scarf | Tanhexp)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        ModelId::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == t)
            .ok_or_else(|| Error::ParameterGuard(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    pub delta: f64,
    pub kappa: f64,
    pub m: f64,
    pub j: f64,
}

impl ModelParams {
    pub const NAMES: [&'static str; 8] = ["omega", "lambda", "mu", "c", "delta", "kappa", "m", "j"];

    pub fn defaults(id: ModelId) -> Self {
        let base = Self { omega: 1.0, lambda: 1.0, mu: 0.0, c: 0.0, delta: 0.0, kappa: 1.0, m: 1.0, j: 0.5 };
        match id {
            Hydrogenlike => base,
            OscillatorA => Self { omega: 2.0, mu: 0.5, ..base },
            OscillatorB => Self { omega: 2.0, mu: 0.1, kappa: 2.0, ..base },
            Scarf => Self { omega: 2.0, kappa: -3.0, ..base },
            Tanhexp => Self { mu: 0.5, kappa: -3.0, ..base },
            Spinor3d => base,
            PsRadial => base,
            Vector2d => Self { m: 0.0, ..base },
            Vector3d => Self { j: 1.0, ..base },
        }
    }

    pub fn set(&mut self, name: &str, v: f64) -> Result<()> {
        let slot = match name {
            "omega" => &mut self.omega,
            "lambda" => &mut self.lambda,
            "mu" => &mut self.mu,
            "c" => &mut self.c,
            "delta" => &mut self.delta,
            "kappa" => &mut self.kappa,
            "m" => &mut self.m,
            "j" => &mut self.j,
            _ => return Err(Error::ParameterGuard(format!("unknown model parameter '{name}'"))),
        };
        *slot = v;
        Ok(())
    }
}

fn guard(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterGuard(msg()))
    }
}

/// The catalog κ the model is built at.
pub fn model_kappa(id: ModelId, p: &ModelParams) -> f64 {
    match id {
        Spinor3d | Vector3d => p.j + 1.0,
        PsRadial | Vector2d => p.m + 0.5,
        _ => p.kappa,
    }
}

fn check_params(id: ModelId, p: &ModelParams) -> Result<()> {
    let k = model_kappa(id, p);
    let finite = [p.omega, p.lambda, p.mu, p.c, p.delta, p.kappa, p.m, p.j].iter().all(|v| v.is_finite());
    guard(finite, || "parameters must be finite".into())?;
    match id {
        Hydrogenlike => {
            guard(k > 0.0, || format!("hydrogenlike needs κ > 0, got {k}"))?;
            guard(p.omega > 0.0, || format!("hydrogenlike needs ω > 0, got {}", p.omega))
        }
        OscillatorA | OscillatorB => {
            guard(k > 0.0, || format!("{id} needs κ > 0, got {k}"))?;
            guard(id == OscillatorA || p.delta == 0.0, || "oscillatorB is the δ = 0 member".into())?;
            guard(p.omega > 0.0, || format!("{id} needs ω > 0, got {}", p.omega))
        }
        Scarf => {
            guard(p.lambda > 0.0, || format!("scarf needs λ > 0, got {}", p.lambda))?;
            guard(k < 0.0, || format!("scarf needs κ < 0, got {k}"))?;
            guard(p.omega > 0.0, || format!("scarf needs ω > 0, got {}", p.omega))
        }
        Tanhexp => {
            guard(p.lambda > 0.0, || format!("tanhexp needs λ > 0, got {}", p.lambda))?;
            guard(k < 0.0, || format!("tanhexp needs κ < 0, got {k}"))
        }
        Spinor3d | Vector3d => {
            guard(p.j > -0.5, || format!("{id} needs j > −1/2, got {}", p.j))?;
            guard(p.omega != 0.0, || format!("{id} needs ω ≠ 0"))
        }
        PsRadial => guard(p.m > 0.0, || format!("ps_radial needs m > 0, got {}", p.m)),
        Vector2d => {
            guard(p.m >= 0.0, || format!("vector2d needs m ≥ 0, got {}", p.m))?;
            guard(p.omega != 0.0, || "vector2d needs ω ≠ 0".into())
        }
    }
}

pub fn model_domain(id: ModelId, p: &ModelParams) -> Interval {
    match id {
        Scarf | Tanhexp => Interval::REAL,
        OscillatorB => Interval { lo: p.c.abs(), hi: f64::INFINITY },
        _ => Interval { lo: 0.0, hi: f64::INFINITY },
    }
}

fn check_x(id: ModelId, p: &ModelParams, x: f64) -> Result<()> {
    if model_domain(id, p).contains(x) {
        Ok(())
    } else {
        Err(Error::Domain { x, reason: format!("{id} is defined on {:?}", model_domain(id, p)) })
    }
}

fn sum(dim: usize, terms: Vec<HermitianMatrix>) -> HermitianMatrix {
    terms.into_iter().fold(HermitianMatrix::zeros(dim), |a, b| &a + &b)
}

fn gt(k: usize) -> HermitianMatrix {
    spin1(k, SpinBasis::GelfandTsetlin).expect("valid index")
}

fn s(k: usize) -> HermitianMatrix {
    pauli(k).expect("valid index")
}

/// The model's potential as printed, with the known misprints corrected (see README).
pub fn model_potential(id: ModelId, p: &ModelParams, x: f64) -> Result<HermitianMatrix> {
    check_params(id, p)?;
    check_x(id, p, x)?;
    let k = model_kappa(id, p);
    let (w, l, mu, c) = (p.omega, p.lambda, p.mu, p.c);
    let sp = sigma_plus();
    let sm = crate::matrix::sigma_minus();
    let one = HermitianMatrix::identity(2);
    let v = match id {
        Hydrogenlike => sum(2, vec![sp.scale(k * (k - 1.0) / (x * x)), s(1).scale(w / x), one.scale(w * w / (k * k))]),
        OscillatorA => sum(
            2,
            vec![
                sp.scale((4.0 * k * k - 1.0) / (4.0 * x * x) + w * w * x * x / 16.0 + mu * mu / x - (k + 1.0) * w / 2.0),
                sm.scale(w * w * x * x / 4.0 + mu * mu / x - w / 2.0),
                s(1).scale(-(3.0 * w * x / 4.0 - k / x) * mu / x.sqrt()),
            ],
        ),
        OscillatorB => {
            let (xp, xm) = (x + c, x - c);
            let r2 = x * x - c * c;
            sum(
                2,
                vec![
                    one.scale(w * w / 4.0 * (x * x + c * c) + mu * mu / r2 + (k + 0.5) * w),
                    s(3).scale(c * w * w * x / 2.0),
                    s(1).scale(-mu * x * ((2.0 * k - 1.0) / r2.powf(1.5) + w / r2.sqrt())),
                    sp.scale(k * (k - 1.0) / (xp * xp)),
                    sm.scale(k * (k - 1.0) / (xm * xm)),
                ],
            )
        }
        Scarf => {
            let t = (l * x).tanh();
            let sech2 = 1.0 - t * t;
            sum(
                2,
                vec![
                    sp.scale(-k * (k - 1.0) * sech2),
                    s(1).scale(-w * (t + 1.0)),
                    one.scale(w * w / (k * k) + k * k),
                ],
            )
            .scale(l * l)
        }
        Tanhexp => {
            let sech = 1.0 / (l * x).cosh();
            sum(
                2,
                vec![
                    sp.scale(-k * (k - 1.0) * sech * sech),
                    one.scale(k * k + mu * mu * sech * (-l * x).exp()),
                    s(1).scale(mu * (k - 0.5) * (l * x / 2.0).exp() * sech.powf(1.5)),
                ],
            )
            .scale(l * l)
        }
        Spinor3d => sum(
            2,
            vec![
                one.scale((p.j * (p.j + 1.0) + 0.25) / (x * x)),
                s(3).scale(-(p.j + 0.5) / (x * x)),
                s(1).scale(-w / x),
            ],
        ),
        PsRadial => sum(2, vec![one.scale(p.m * p.m / (x * x)), s(3).scale(-p.m / (x * x)), s(1).scale(1.0 / x)]),
        Vector2d => {
            let a = gt(3).scale(-1.0).shift(p.m);
            let r = gt(1).square().scale(2.0).shift(-1.0);
            sum(3, vec![a.square().shift(-0.25).scale(1.0 / (x * x)), r.scale(w / x), HermitianMatrix::identity(3).scale(w * w / (2.0 * p.m + 1.0).powi(2))])
        }
        Vector3d => {
            let jj = p.j;
            let s3 = gt(3);
            let r = gt(1).square().scale(2.0).shift(-1.0);
            sum(3, vec![(&s3.square() + &s3.scale(-(2.0 * jj + 1.0))).shift(jj * (jj + 1.0)).scale(1.0 / (x * x)), r.scale(w / x)])
        }
    };
    Ok(v)
}

/// Constant dropped from the printed potential relative to W² − W'.
pub fn omitted_constant(id: ModelId, p: &ModelParams) -> f64 {
    let k = model_kappa(id, p);
    match id {
        Spinor3d | Vector3d => p.omega * p.omega / (4.0 * k * k),
        PsRadial => 1.0 / (4.0 * k * k),
        _ => 0.0,
    }
}

/// Rotation exp(iθS₂) (θ = ±π/2, whichever maps S₁ to S₃), followed by the
/// Cartesian → Gelfand–Tsetlin change of basis.
fn vector_unitary() -> Result<UnitaryMatrix> {
    let cart = |k| spin1(k, SpinBasis::Cartesian).expect("valid index");
    let mut rot = None;
    for theta in [std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2] {
        let u = UnitaryMatrix::exp_i(&cart(2), theta)?;
        if (&conjugate(&u, &cart(1))? - &cart(3)).max_abs() < 1e-12 {
            rot = Some(u);
            break;
        }
    }
    let rot = rot.ok_or_else(|| Error::Numerical("no rotation maps S₁ to S₃".into()))?;

    // Standard phases: |0⟩ = S₋|1⟩/√2, |−1⟩ = S₋|0⟩/√2.
    let eig = hermitian_eigen(&cart(3));
    let top = eig.vectors.column(2);
    let i = Complex64::new(0.0, 1.0);
    let s_minus = (cart(1).as_matrix()) - &cart(2).as_matrix().scale(i);
    let lower = |v: &[Complex64]| -> Vec<Complex64> { s_minus.mul_vec(v).into_iter().map(|z| z / 2f64.sqrt()).collect() };
    let mid = lower(&top);
    let bottom = lower(&mid);
    let rows: Vec<Vec<Complex64>> = [top, mid, bottom].iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
    let basis = UnitaryMatrix::new(CMatrix::from_rows(&rows))?;
    basis.compose(&rot)
}

/// A model as a conjugated catalog superpotential, W = U W_cat U†.
#[derive(Debug, Clone)]
pub struct ModelSystem {
    pub id: ModelId,
    pub params: ModelParams,
    pub spec: SuperpotentialSpec,
    pub unitary: UnitaryMatrix,
}

impl ModelSystem {
    pub fn new(id: ModelId, p: &ModelParams) -> Result<Self> {
        check_params(id, p)?;
        let base = ParamSet::default();
        let (params, unitary) = match id {
            Hydrogenlike => (
                ParamSet { mu: 0.0, omega: p.omega, r2: Some(-p.omega), r3: Some(0.0), ..base },
                UnitaryMatrix::from_identity_plus_i(&s(3), 1.0)?,
            ),
            OscillatorA => (ParamSet { omega: p.omega, mu: p.mu, c: 0.0, ..base }, UnitaryMatrix::identity(2)),
            OscillatorB => (ParamSet { omega: p.omega, mu: p.mu, c: p.c, delta: 0.0, ..base }, UnitaryMatrix::identity(2)),
            Scarf => (
                ParamSet { lambda: p.lambda, mu: 0.0, omega: p.omega, r2: Some(p.omega), r3: Some(0.0), ..base },
                UnitaryMatrix::from_identity_plus_i(&s(3), 1.0)?,
            ),
            Tanhexp => (ParamSet { lambda: p.lambda, mu: -p.mu, omega: 0.0, ..base }, UnitaryMatrix::identity(2)),
            Spinor3d => (
                ParamSet { c: 0.0, mu: 0.5, omega: p.omega.abs() / 2.0, r2: Some(0.0), r3: Some(-p.omega / 2.0), ..base },
                UnitaryMatrix::from_identity_plus_i(&s(2), 1.0)?,
            ),
            PsRadial => (
                ParamSet { c: 0.0, mu: 0.5, omega: 0.5, r2: Some(0.0), r3: Some(0.5), ..base },
                UnitaryMatrix::from_identity_plus_i(&s(2), 1.0)?,
            ),
            Vector2d | Vector3d => (
                ParamSet { c1: 0.0, c2: 0.0, mu1: 1.0, mu2: 0.0, omega: -p.omega / 2.0, ..base },
                vector_unitary()?,
            ),
        };
        let spec = SuperpotentialSpec::new(id.family(), params)?;
        Ok(Self { id, params: *p, spec, unitary })
    }

    pub fn kappa(&self) -> f64 {
        model_kappa(self.id, &self.params)
    }

    pub fn domain(&self) -> Interval {
        model_domain(self.id, &self.params)
    }
}

impl Superpotential for ModelSystem {
    fn channels(&self) -> usize {
        self.id.dim()
    }
    fn w(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        conjugate(&self.unitary, &self.spec.eval_w(kappa, x)?)
    }
    fn w_prime(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        conjugate(&self.unitary, &self.spec.eval_w_prime(kappa, x)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartnerSign {
    /// W² − W'.
    Minus,
    /// W² + W'.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub model: ModelId,
    pub kappa: f64,
    pub sign: PartnerSign,
    /// Scalar subtracted from the reconstructed potential before comparing.
    pub constant_offset: f64,
    pub max_deviation: f64,
    pub samples: usize,
}

pub fn check_reduction(id: ModelId, p: &ModelParams, grid: &SampleGrid) -> Result<ReductionReport> {
    check_reduction_with(id, p, grid, PartnerSign::Minus)
}

pub fn check_reduction_with(id: ModelId, p: &ModelParams, grid: &SampleGrid, sign: PartnerSign) -> Result<ReductionReport> {
    let sys = ModelSystem::new(id, p)?;
    let k = sys.kappa();
    let offset = omitted_constant(id, p);
    let mut dev: f64 = 0.0;
    for &x in &grid.xs {
        let v = match sign {
            PartnerSign::Minus => sys.v_minus(k, x)?,
            PartnerSign::Plus => sys.v_plus(k, x)?,
        };
        let printed = model_potential(id, p, x)?;
        dev = dev.max((&v.shift(-offset) - &printed).max_abs());
    }
    Ok(ReductionReport { model: id, kappa: k, sign, constant_offset: offset, max_deviation: dev, samples: grid.len() })
}

/// Default sample grid for reduction checks: a window inside the model domain.
pub fn reduction_grid(id: ModelId, p: &ModelParams, count: usize) -> Result<SampleGrid> {
    let d = model_domain(id, p);
    if d.lo.is_finite() {
        SampleGrid::uniform(d.lo + 0.05, d.lo + 6.0, count)
    } else {
        SampleGrid::uniform(-4.0, 4.0, count)
    }
}

/// Levels allowed by the bound-state guards; `None` for unbounded ladders.
pub fn guarded_level_count(id: ModelId, p: &ModelParams) -> Option<usize> {
    let k = model_kappa(id, p);
    match id {
        Scarf => Some((0..).take_while(|&n| k + n as f64 <= -1e-12 && (k + n as f64).powi(2) > p.omega).count()),
        Tanhexp => Some((0..).take_while(|&n| k + n as f64 <= -1e-12).count()),
        _ => None,
    }
}

/// Analytic E_n − E_0.
pub fn model_gap_formula(id: ModelId, p: &ModelParams, n: usize) -> Result<f64> {
    check_params(id, p)?;
    if let Some(count) = guarded_level_count(id, p) {
        if n >= count {
            let kn = model_kappa(id, p) + n as f64;
            let why = match id {
                Scarf => format!("scarf level {n} needs κ+n < 0 and (κ+n)² > ω; κ+n = {kn}, ω = {}", p.omega),
                _ => format!("tanhexp level {n} needs κ+n < 0; κ+n = {kn}"),
            };
            return Err(Error::NoBoundState(why));
        }
    }
    let k = model_kappa(id, p);
    let kn = k + n as f64;
    let (w, l) = (p.omega, p.lambda);
    let coulomb = |b: f64| b * b * (1.0 / (k * k) - 1.0 / (kn * kn));
    Ok(match id {
        Hydrogenlike => coulomb(w),
        OscillatorA | OscillatorB => n as f64 * w,
        Scarf => l * l * (w * w / (k * k) + k * k - w * w / (kn * kn) - kn * kn),
        Tanhexp => l * l * (k * k - kn * kn),
        Spinor3d | Vector2d | Vector3d => coulomb(w / 2.0),
        PsRadial => coulomb(0.5),
    })
}

/// Lowest asymptotic value of the printed potential, for models with a finite number of bound states.
pub fn continuum_threshold(id: ModelId, p: &ModelParams) -> Option<f64> {
    let k = model_kappa(id, p);
    let l2 = p.lambda * p.lambda;
    match id {
        Scarf => Some(l2 * (k * k + p.omega * p.omega / (k * k) - 2.0 * p.omega.abs())),
        Tanhexp => Some(l2 * k * k),
        _ => None,
    }
}

/// Truncation [ε, L] (radial) or [−L, L], sized so the slowest-decaying requested level is below 1e-8 at the edge.
pub fn default_grid(id: ModelId, p: &ModelParams, levels: usize, n_points: usize) -> Result<GridSpec> {
    check_params(id, p)?;
    let k = model_kappa(id, p);
    let top = k + levels.saturating_sub(1) as f64;
    let edge = 20.0;
    let n = id.dim();
    match id {
        Scarf | Tanhexp => {
            let l = 25.0 / p.lambda;
            GridSpec::new(-l, l, n_points, n)
        }
        OscillatorA | OscillatorB => {
            let l = (4.0 * (edge + 5.0 + 2.0 * levels as f64) / p.omega).sqrt();
            let lo = p.c.abs();
            GridSpec::new(lo + 1e-3 * l, lo + l, n_points, n)
        }
        _ => {
            let rate = match id {
                Hydrogenlike => p.omega / top,
                PsRadial => 0.5 / top,
                _ => p.omega.abs() / (2.0 * top),
            };
            let l = edge / rate;
            GridSpec::new(1e-3 * l, l, n_points, n)
        }
    }
}

/// Numerical gaps (Richardson-extrapolated) against the analytic gap formula.
pub fn model_spectrum_check(
    id: ModelId,
    p: &ModelParams,
    levels: usize,
    grid: &GridSpec,
    opts: &SolverOptions,
) -> Result<SpectrumReport> {
    check_params(id, p)?;
    let mut report = refine_and_extrapolate(|x| model_potential(id, p, x), grid, levels, opts)?;
    if let Some(t) = continuum_threshold(id, p) {
        report = report.with_threshold(t);
    }
    let mut gaps = Vec::new();
    for n in 0..levels {
        match model_gap_formula(id, p, n) {
            Ok(g) => gaps.push(g),
            Err(e) => {
                report.notes.push(e.to_string());
                break;
            }
        }
    }
    Ok(report.with_analytic(gaps))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelInfo {
    pub id: ModelId,
    pub dim: usize,
    pub family: FamilyId,
    pub description: &'static str,
    pub substitution: &'static str,
    pub params: Vec<&'static str>,
    pub defaults: ModelParams,
}

pub fn model_registry() -> Vec<ModelInfo> {
    ModelId::ALL
        .into_iter()
        .map(|id| ModelInfo {
            id,
            dim: id.dim(),
            family: id.family(),
            description: id.description(),
            substitution: id.substitution(),
            params: id.params_used().to_vec(),
            defaults: ModelParams::defaults(id),
        })
        .collect()
}
