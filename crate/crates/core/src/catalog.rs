//! Shape-invariant matrix superpotentials `W(κ, x) = κ Q(x) + P(x) + R/κ`.
//!
//! Every family is stored in one normal form: `Q = diag(q_1, …, q_K)` with
//! each `q_a` a scalar Riccati branch (α = 1), a hermitian coefficient matrix
//! `μ` with `P_ab = μ_ab · exp(½∫(q_a + q_b))`, an optional diagonal linear
//! part `a_a x + b_a` added to `P`, and a constant `R`.
//!
//! Two-by-two families (λ > 0 throughout, σ± = (1 ± σ₃)/2, R = r₃σ₃ + r₂σ₂):
//!
//! | id  | q₊ / q₋                          | notes                            |
//! |-----|----------------------------------|----------------------------------|
//! | W1  | λtan(λx+c) / λtan(λx−c)          | coupling λμ, R scaled by λ       |
//! | W2  | −λcoth(λx+c) / −λcoth(λx−c)      |                                  |
//! | W3  | −λtanh(λx+c) / −λtanh(λx−c)      |                                  |
//! | W4  | −λtanh(λx+c) / −λcoth(λx−c)      |                                  |
//! | W5  | −λtanh(λx) / −λ                  |                                  |
//! | W6  | −λcoth(λx) / −λ                  |                                  |
//! | W7  | −1/(x+c) / −1/(x−c)              | coupling μ, R unscaled           |
//! | W8  | −1/x / 0                         |                                  |
//! | W9  | −λ / −λ                          | R = −λωσ₃                        |
//! | W10 | as W1                            | R = 0, diagonal ν, τ terms       |
//! | W11 | as W2                            |                                  |
//! | W12 | as W4                            |                                  |
//! | W13 | as W3                            |                                  |
//! | W14 | as W5                            |                                  |
//! | W15 | as W6                            |                                  |
//! | W16 | as W7                            | δ terms, linear part −ω(x±c)/2   |
//! | W17 | as W8                            | linear parts ωx/4 and ωx/2 + c   |
//!
//! Three-by-three families use the cartesian spin-1 matrices, for which
//! `S_k² − 1 = −e_k e_kᵀ`; T1–T4 carry `R = ω(2S₃² − 1)`, T5–T7 have R = 0.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, pauli, spin1, CMatrix, HermitianMatrix, SpinBasis};
use crate::riccati::{RiccatiKind, RiccatiTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    W1,
    W2,
    W3,
    W4,
    W5,
    W6,
    W7,
    W8,
    W9,
    W10,
    W11,
    W12,
    W13,
    W14,
    W15,
    W16,
    W17,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    #[serde(rename = "GEN")]
    Gen,
}

use FamilyId::*;

impl FamilyId {
    /// The 24 printed families, two-by-two first.
    pub const PRINTED: [FamilyId; 24] = [
        W1, W2, W3, W4, W5, W6, W7, W8, W9, W10, W11, W12, W13, W14, W15, W16, W17, T1, T2, T3, T4, T5, T6, T7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            W1 => "W1",
            W2 => "W2",
            W3 => "W3",
            W4 => "W4",
            W5 => "W5",
            W6 => "W6",
            W7 => "W7",
            W8 => "W8",
            W9 => "W9",
            W10 => "W10",
            W11 => "W11",
            W12 => "W12",
            W13 => "W13",
            W14 => "W14",
            W15 => "W15",
            W16 => "W16",
            W17 => "W17",
            T1 => "T1",
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T6 => "T6",
            T7 => "T7",
            Gen => "GEN",
        }
    }

    /// Matrix dimension; `None` for the generic builder.
    pub fn dim(self) -> Option<usize> {
        match self {
            Gen => None,
            T1 | T2 | T3 | T4 | T5 | T6 | T7 => Some(3),
            _ => Some(2),
        }
    }

    pub fn has_r(self) -> bool {
        matches!(self, W1 | W2 | W3 | W4 | W5 | W6 | W7 | W8 | W9 | T1 | T2 | T3 | T4)
    }

    /// R is parametrized as r₃σ₃ + r₂σ₂ with r₂² + r₃² = ω².
    pub fn uses_r23(self) -> bool {
        matches!(self, W1 | W2 | W3 | W4 | W5 | W6 | W7 | W8)
    }

    pub fn description(self) -> &'static str {
        match self {
            W1 => "tan/tan with R",
            W2 => "coth/coth with R",
            W3 => "tanh/tanh with R",
            W4 => "tanh/coth with R",
            W5 => "tanh/constant with R",
            W6 => "coth/constant with R",
            W7 => "inverse/inverse with R",
            W8 => "inverse/zero with R",
            W9 => "constant/constant with exponential coupling and R",
            W10 => "tan/tan, R = 0",
            W11 => "coth/coth, R = 0",
            W12 => "tanh/coth, R = 0",
            W13 => "tanh/tanh, R = 0",
            W14 => "tanh/constant, R = 0",
            W15 => "coth/constant, R = 0",
            W16 => "inverse/inverse with linear terms, R = 0",
            W17 => "inverse/zero with linear terms, R = 0",
            T1 => "spin-1, three inverse branches, R = ω(2S₃²−1)",
            T2 => "spin-1, two inverse branches, R = ω(2S₃²−1)",
            T3 => "spin-1, inverse branches on rows 1 and 3, R = ω(2S₃²−1)",
            T4 => "spin-1, one inverse branch with constant coupling, R = ω(2S₃²−1)",
            T5 => "spin-1, three inverse branches, R = 0",
            T6 => "spin-1, two inverse branches, R = 0",
            T7 => "spin-1, one inverse branch with constant coupling, R = 0",
            Gen => "generic N-dimensional builder",
        }
    }

    pub fn params_used(self) -> &'static [&'static str] {
        match self {
            W1 | W2 | W3 | W4 => &["lambda", "c", "mu", "omega", "r2", "r3"],
            W5 | W6 => &["lambda", "mu", "omega", "r2", "r3"],
            W7 => &["c", "mu", "omega", "r2", "r3"],
            W8 => &["mu", "omega", "r2", "r3"],
            W9 => &["lambda", "mu", "omega"],
            W10 | W11 | W12 | W13 => &["lambda", "c", "mu", "nu", "tau"],
            W14 | W15 => &["lambda", "mu", "nu"],
            W16 => &["c", "mu", "omega", "delta"],
            W17 => &["c", "mu", "omega"],
            T1 => &["c1", "c2", "mu1", "mu2", "omega"],
            T2 | T3 => &["c", "mu1", "mu2", "omega"],
            T4 => &["c", "mu", "omega"],
            T5 => &["c1", "c2", "mu1", "mu2", "mu3"],
            T6 => &["c", "mu1", "mu2", "mu3"],
            T7 => &["c", "mu1", "mu2"],
            Gen => &["n", "m", "kinds", "mu_matrix", "omega", "with_r"],
        }
    }

    pub fn domain_rule(self) -> &'static str {
        match self {
            W1 | W10 => "|λx| < π/2 − |c|",
            W2 | W11 => "x > |c|/λ",
            W4 | W12 => "x > c/λ",
            W3 | W5 | W9 | W13 | W14 => "all real x",
            W6 | W8 | W15 | W17 | T4 | T7 => "x > 0",
            W7 | W16 => "x > |c|",
            T1 | T5 => "x > max(0, −c1, −c2)",
            T2 | T3 | T6 => "x > max(0, −c)",
            Gen => "intersection of the branch components",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        if up == "GEN" {
            return Ok(Gen);
        }
        FamilyId::PRINTED
            .iter()
            .copied()
            .find(|f| f.name() == up)
            .ok_or_else(|| Error::ParameterGuard(format!("unknown family '{s}'")))
    }
}

/// Family parameters. Each family reads only the ones it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub lambda: f64,
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub omega: f64,
    pub r2: Option<f64>,
    pub r3: Option<f64>,
    pub nu: f64,
    pub tau: f64,
    pub delta: f64,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            mu: 0.0,
            mu1: 0.0,
            mu2: 0.0,
            mu3: 0.0,
            c: 0.0,
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            omega: 0.0,
            r2: None,
            r3: None,
            nu: 0.0,
            tau: 0.0,
            delta: 0.0,
        }
    }
}

impl ParamSet {
    pub const NAMES: [&'static str; 15] =
        ["lambda", "mu", "mu1", "mu2", "mu3", "c", "c1", "c2", "c3", "omega", "r2", "r3", "nu", "tau", "delta"];

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::ParameterGuard(format!("{name} must be finite")));
        }
        match name {
            "lambda" => self.lambda = value,
            "mu" => self.mu = value,
            "mu1" => self.mu1 = value,
            "mu2" => self.mu2 = value,
            "mu3" => self.mu3 = value,
            "c" => self.c = value,
            "c1" => self.c1 = value,
            "c2" => self.c2 = value,
            "c3" => self.c3 = value,
            "omega" => self.omega = value,
            "r2" => self.r2 = Some(value),
            "r3" => self.r3 = Some(value),
            "nu" => self.nu = value,
            "tau" => self.tau = value,
            "delta" => self.delta = value,
            _ => return Err(Error::ParameterGuard(format!("unknown parameter '{name}'"))),
        }
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value).expect("valid parameter name");
        self
    }

    /// (r₂, r₃); with neither given, R = ωσ₃.
    pub fn resolved_r(&self) -> (f64, f64) {
        match (self.r2, self.r3) {
            (None, None) => (0.0, self.omega),
            (r2, r3) => (r2.unwrap_or(0.0), r3.unwrap_or(0.0)),
        }
    }
}

/// Open interval; infinite ends serialize as null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "lower_end")]
    pub lo: f64,
    #[serde(with = "upper_end")]
    pub hi: f64,
}

macro_rules! infinite_end {
    ($name:ident, $inf:expr) => {
        mod $name {
            use serde::{Deserialize, Deserializer, Serializer};
            pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
                if v.is_finite() {
                    s.serialize_some(v)
                } else {
                    s.serialize_none()
                }
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                Ok(Option::<f64>::deserialize(d)?.unwrap_or($inf))
            }
        }
    };
}
infinite_end!(lower_end, f64::NEG_INFINITY);
infinite_end!(upper_end, f64::INFINITY);

impl Interval {
    pub const REAL: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }
}

/// Normal form shared by every family; see the module docs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub kinds: Vec<RiccatiKind>,
    /// Hermitian coefficients of `P_ab = μ_ab exp(½∫(q_a + q_b))`.
    pub coupling: HermitianMatrix,
    /// Diagonal linear part of P, `(slope, offset)` per row.
    pub linear: Vec<(f64, f64)>,
    pub r: HermitianMatrix,
    /// Shared Riccati constant of the branches.
    pub nu: f64,
    /// Analytic constant of the P equation `P' − ½{Q,P} + ϰ = 0`.
    pub varkappa: f64,
    /// Eigenvalue modulus of R.
    pub omega: f64,
}

impl Decomposition {
    fn assemble(kinds: Vec<RiccatiKind>, coupling: HermitianMatrix, linear: Vec<(f64, f64)>, r: HermitianMatrix, varkappa: f64) -> Self {
        let nu = kinds.first().map_or(0.0, |k| k.nu());
        let omega = (r.square().trace() / r.dim() as f64).max(0.0).sqrt();
        Self { kinds, coupling, linear, r, nu, varkappa, omega }
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn has_r(&self) -> bool {
        self.r.max_abs() > 0.0
    }

    pub fn q(&self, x: f64) -> Result<HermitianMatrix> {
        let d = self.kinds.iter().map(|k| k.eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(HermitianMatrix::from_real_diagonal(&d))
    }

    pub fn q_prime(&self, x: f64) -> Result<HermitianMatrix> {
        let d = self.kinds.iter().map(|k| k.derivative(x)).collect::<Result<Vec<_>>>()?;
        Ok(HermitianMatrix::from_real_diagonal(&d))
    }

    /// P(x) and P'(x).
    pub fn p_and_prime(&self, x: f64) -> Result<(HermitianMatrix, HermitianMatrix)> {
        let n = self.dim();
        let a = self.kinds.iter().map(|k| k.antiderivative(x)).collect::<Result<Vec<_>>>()?;
        let q = self.kinds.iter().map(|k| k.eval(x)).collect::<Result<Vec<_>>>()?;
        let mut p = CMatrix::zeros(n);
        let mut dp = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mu = self.coupling.get(i, j);
                if mu == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let e = mu * (0.5 * (a[i] + a[j])).exp();
                p.set(i, j, e);
                dp.set(i, j, e * (0.5 * (q[i] + q[j])));
            }
        }
        for (i, &(slope, offset)) in self.linear.iter().enumerate() {
            p.set(i, i, p.get(i, i) + slope * x + offset);
            dp.set(i, i, dp.get(i, i) + slope);
        }
        Ok((HermitianMatrix::new(p)?, HermitianMatrix::new(dp)?))
    }

    pub fn p(&self, x: f64) -> Result<HermitianMatrix> {
        Ok(self.p_and_prime(x)?.0)
    }

    pub fn p_prime(&self, x: f64) -> Result<HermitianMatrix> {
        Ok(self.p_and_prime(x)?.1)
    }

    fn check_kappa(&self, kappa: f64) -> Result<()> {
        if !kappa.is_finite() || (kappa == 0.0 && self.has_r()) {
            return Err(Error::ParameterGuard(format!("kappa = {kappa} is not allowed when R is nonzero")));
        }
        Ok(())
    }

    /// κQ + P + R/κ.
    pub fn w(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.check_kappa(kappa)?;
        let mut w = self.q(x)?.scale(kappa);
        w += &self.p(x)?;
        if self.has_r() {
            w += &self.r.scale(1.0 / kappa);
        }
        Ok(w)
    }

    pub fn w_prime(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.check_kappa(kappa)?;
        Ok(&self.q_prime(x)?.scale(kappa) + &self.p_prime(x)?)
    }
}

/// Input of the generic builder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericParams {
    pub n: usize,
    pub m: usize,
    pub kinds: Vec<RiccatiKind>,
    pub mu: HermitianMatrix,
    pub omega: f64,
    pub with_r: bool,
    /// Point fixing the domain component; defaults to 0 for tan branches and
    /// to the right-most component otherwise.
    pub reference_x: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperpotentialSpec {
    pub family: FamilyId,
    pub params: ParamSet,
    pub generic: Option<GenericParams>,
    pub dim: usize,
    pub domain: Vec<Interval>,
    decomposition: Decomposition,
}

fn pm(i: usize) -> HermitianMatrix {
    pauli(i).expect("pauli index")
}

fn spin(k: usize) -> HermitianMatrix {
    spin1(k, SpinBasis::Cartesian).expect("spin index")
}

fn sym2(a: f64, b: f64, d: f64) -> HermitianMatrix {
    HermitianMatrix::from_real_rows(&[[a, b], [b, d]]).expect("real symmetric")
}

fn guard(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterGuard(msg.into()))
    }
}

impl SuperpotentialSpec {
    /// Build one of the printed families.
    pub fn new(family: FamilyId, params: ParamSet) -> Result<Self> {
        let dec = build_family(family, &params)?;
        let domain = components_domain(&dec.kinds, None)?;
        Ok(Self { family, params, generic: None, dim: dec.dim(), domain: vec![domain], decomposition: dec })
    }

    pub fn decompose(&self) -> Decomposition {
        self.decomposition.clone()
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn has_r(&self) -> bool {
        self.decomposition.has_r()
    }

    /// The principal domain component.
    pub fn interval(&self) -> Interval {
        self.domain[0]
    }

    pub fn contains(&self, x: f64) -> bool {
        self.domain.iter().any(|i| i.contains(x))
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            let i = self.interval();
            Err(Error::Domain { x, reason: format!("{} is defined on ({}, {})", self.family, i.lo, i.hi) })
        }
    }

    pub fn eval_w(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.check_x(x)?;
        self.decomposition.w(kappa, x)
    }

    pub fn eval_w_prime(&self, kappa: f64, x: f64) -> Result<HermitianMatrix> {
        self.check_x(x)?;
        self.decomposition.w_prime(kappa, x)
    }
}

fn build_family(family: FamilyId, p: &ParamSet) -> Result<Decomposition> {
    let l = p.lambda;
    let uses_lambda = p_uses(family, "lambda");
    if uses_lambda {
        guard(l.is_finite() && l > 0.0, format!("{family} needs lambda > 0, got {l}"))?;
    }
    let r23 = if family.uses_r23() {
        let (r2, r3) = p.resolved_r();
        let w2 = p.omega * p.omega;
        guard(
            (r2 * r2 + r3 * r3 - w2).abs() <= 1e-9 * w2.max(1.0),
            format!("{family} needs r2² + r3² = ω², got r2 = {r2}, r3 = {r3}, ω = {}", p.omega),
        )?;
        &pm(3).scale(r3) + &pm(2).scale(r2)
    } else {
        HermitianMatrix::zeros(2)
    };
    if matches!(family, W1 | W10) {
        guard(p.c.abs() < FRAC_PI_2, format!("{family} needs |c| < π/2, got {}", p.c))?;
    }
    let off = |mu: f64| sym2(0.0, mu, 0.0);
    let zero2 = HermitianMatrix::zeros(2);
    let kind = |tag: RiccatiTag, c: f64| RiccatiKind::new(tag, 1.0, l, c);
    use RiccatiTag as R;
    let dec = match family {
        W1 => Decomposition::assemble(vec![kind(R::Tan, p.c)?, kind(R::Tan, -p.c)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W2 => Decomposition::assemble(vec![kind(R::Coth, p.c)?, kind(R::Coth, -p.c)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W3 => Decomposition::assemble(vec![kind(R::Tanh, p.c)?, kind(R::Tanh, -p.c)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W4 => Decomposition::assemble(vec![kind(R::Tanh, p.c)?, kind(R::Coth, -p.c)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W5 => Decomposition::assemble(vec![kind(R::Tanh, 0.0)?, kind(R::ConstNeg, 0.0)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W6 => Decomposition::assemble(vec![kind(R::Coth, 0.0)?, kind(R::ConstNeg, 0.0)?], off(l * p.mu), vec![], r23.scale(l), 0.0),
        W7 => Decomposition::assemble(vec![RiccatiKind::inverse(1.0, p.c)?, RiccatiKind::inverse(1.0, -p.c)?], off(p.mu), vec![], r23, 0.0),
        W8 => Decomposition::assemble(vec![RiccatiKind::inverse(1.0, 0.0)?, RiccatiKind::zero(1.0)?], off(p.mu), vec![], r23, 0.0),
        W9 => Decomposition::assemble(
            vec![kind(R::ConstNeg, 0.0)?, kind(R::ConstNeg, 0.0)?],
            off(l * p.mu),
            vec![],
            pm(3).scale(-l * p.omega),
            0.0,
        ),
        W10 => Decomposition::assemble(vec![kind(R::Tan, p.c)?, kind(R::Tan, -p.c)?], sym2(l * p.nu, l * p.mu, l * p.tau), vec![], zero2, 0.0),
        W11 => Decomposition::assemble(vec![kind(R::Coth, p.c)?, kind(R::Coth, -p.c)?], sym2(p.nu, p.mu, p.tau).scale(-l), vec![], zero2, 0.0),
        W12 => Decomposition::assemble(vec![kind(R::Tanh, p.c)?, kind(R::Coth, -p.c)?], sym2(p.nu, p.mu, p.tau).scale(-l), vec![], zero2, 0.0),
        W13 => Decomposition::assemble(vec![kind(R::Tanh, p.c)?, kind(R::Tanh, -p.c)?], sym2(p.nu, p.mu, p.tau).scale(-l), vec![], zero2, 0.0),
        W14 => Decomposition::assemble(vec![kind(R::Tanh, 0.0)?, kind(R::ConstNeg, 0.0)?], sym2(p.nu, p.mu, 0.0).scale(-l), vec![], zero2, 0.0),
        W15 => Decomposition::assemble(vec![kind(R::Coth, 0.0)?, kind(R::ConstNeg, 0.0)?], sym2(p.nu, p.mu, 0.0).scale(-l), vec![], zero2, 0.0),
        W16 => Decomposition::assemble(
            vec![RiccatiKind::inverse(1.0, p.c)?, RiccatiKind::inverse(1.0, -p.c)?],
            sym2(-p.delta, p.mu, p.delta),
            vec![(-p.omega / 2.0, -p.omega * p.c / 2.0), (-p.omega / 2.0, p.omega * p.c / 2.0)],
            zero2,
            p.omega,
        ),
        W17 => Decomposition::assemble(
            vec![RiccatiKind::inverse(1.0, 0.0)?, RiccatiKind::zero(1.0)?],
            sym2(-0.5, -p.mu, 0.0),
            vec![(p.omega / 4.0, 0.0), (p.omega / 2.0, p.c)],
            zero2,
            -p.omega / 2.0,
        ),
        T1 | T2 | T3 | T4 | T5 | T6 | T7 => {
            let inv = |c: f64| RiccatiKind::inverse(1.0, c);
            let z = RiccatiKind::zero(1.0)?;
            let (kinds, coupling) = match family {
                T1 => (vec![inv(p.c1)?, inv(p.c2)?, inv(0.0)?], &spin(1).scale(p.mu1) + &spin(2).scale(p.mu2)),
                T2 => (vec![inv(0.0)?, inv(p.c)?, z], &spin(1).scale(p.mu1) + &spin(2).scale(p.mu2)),
                T3 => (vec![inv(p.c)?, z, inv(0.0)?], &spin(1).scale(p.mu1) + &spin(2).scale(p.mu2)),
                T4 => (vec![inv(0.0)?, z, z], &spin(1).scale(p.c) + &spin(2).scale(p.mu)),
                T5 => (
                    vec![inv(p.c1)?, inv(p.c2)?, inv(0.0)?],
                    &(&spin(1).scale(p.mu1) + &spin(2).scale(p.mu2)) + &spin(3).scale(p.mu3),
                ),
                T6 => (vec![inv(0.0)?, inv(p.c)?, z], &(&spin(1).scale(p.mu1) + &spin(2).scale(p.mu2)) + &spin(3).scale(p.mu3)),
                _ => (vec![inv(0.0)?, z, z], &(&spin(1).scale(p.c) + &spin(3).scale(p.mu1)) + &spin(2).scale(p.mu2)),
            };
            let r = if family.has_r() {
                HermitianMatrix::from_real_diagonal(&[p.omega, p.omega, -p.omega])
            } else {
                HermitianMatrix::zeros(3)
            };
            Decomposition::assemble(kinds, coupling, vec![], r, 0.0)
        }
        Gen => return Err(Error::ParameterGuard("use build_generic for GEN".into())),
    };
    Ok(dec)
}

fn p_uses(family: FamilyId, name: &str) -> bool {
    family.params_used().contains(&name)
}

/// The component of a branch that extends to +∞, if any.
fn right_component(k: &RiccatiKind) -> Option<Interval> {
    match k.tag {
        RiccatiTag::Inverse => Some(Interval { lo: -k.c / k.alpha, hi: f64::INFINITY }),
        RiccatiTag::Coth => Some(Interval { lo: -k.c / k.lambda, hi: f64::INFINITY }),
        RiccatiTag::Tan => None,
        _ => Some(Interval::REAL),
    }
}

fn components_domain(kinds: &[RiccatiKind], reference: Option<f64>) -> Result<Interval> {
    let mut dom = Interval::REAL;
    let has_tan = kinds.iter().any(|k| k.tag == RiccatiTag::Tan);
    for k in kinds {
        let comp = match (reference, has_tan) {
            (Some(x), _) => {
                let (lo, hi) = k.component(x)?;
                Interval { lo, hi }
            }
            (None, true) => {
                let (lo, hi) = k.component(0.0).map_err(|_| Error::ParameterGuard(format!("{} branch has a pole at 0", k.tag.name())))?;
                Interval { lo, hi }
            }
            (None, false) => right_component(k).expect("non-periodic branch"),
        };
        dom = dom.intersect(&comp);
    }
    if dom.is_empty() {
        return Err(Error::ParameterGuard("the branches have no common domain".into()));
    }
    Ok(dom)
}

/// Generic N-dimensional superpotential `κ diag(q) + P + (ω/κ) diag(I_n, −I_m)`.
pub fn build_generic(
    n: usize,
    m: usize,
    kinds: Vec<RiccatiKind>,
    mu: HermitianMatrix,
    omega: f64,
    with_r: bool,
    reference_x: Option<f64>,
) -> Result<SuperpotentialSpec> {
    let k = n + m;
    guard(k >= 1, "n + m must be positive")?;
    if kinds.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: kinds.len() });
    }
    if mu.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, found: mu.dim() });
    }
    guard(kinds.iter().all(|q| q.alpha == 1.0), "generic builder needs alpha = 1 for every branch")?;
    let nu = kinds[0].nu();
    guard(
        kinds.iter().all(|q| (q.nu() - nu).abs() <= 1e-12 * nu.abs().max(1.0)),
        "all branches must share the same ν",
    )?;
    guard(omega.is_finite(), "omega must be finite")?;
    let (coupling, r) = if with_r {
        let mut c = CMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                let same_block = (i < n) == (j < n);
                let v = mu.get(i, j);
                if same_block {
                    guard(v.norm() == 0.0, format!("with R the coupling must be off-diagonal-block, found μ[{i}][{j}] = {v}"))?;
                } else {
                    c.set(i, j, v);
                }
            }
        }
        let diag: Vec<f64> = (0..k).map(|i| if i < n { omega } else { -omega }).collect();
        (HermitianMatrix::new(c)?, HermitianMatrix::from_real_diagonal(&diag))
    } else {
        (mu.clone(), HermitianMatrix::zeros(k))
    };
    let domain = components_domain(&kinds, reference_x)?;
    let dec = Decomposition::assemble(kinds.clone(), coupling, vec![], r, 0.0);
    Ok(SuperpotentialSpec {
        family: Gen,
        params: ParamSet { omega, ..ParamSet::default() },
        generic: Some(GenericParams { n, m, kinds, mu, omega, with_r, reference_x }),
        dim: k,
        domain: vec![domain],
        decomposition: dec,
    })
}

/// Machine-readable description of one family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub id: FamilyId,
    pub dim: Option<usize>,
    pub description: &'static str,
    pub params: &'static [&'static str],
    pub domain: &'static str,
    pub has_r: bool,
}

pub fn family_info(id: FamilyId) -> FamilyInfo {
    FamilyInfo {
        id,
        dim: id.dim(),
        description: id.description(),
        params: id.params_used(),
        domain: id.domain_rule(),
        has_r: id.has_r(),
    }
}

pub fn catalog_document() -> serde_json::Value {
    let families: Vec<FamilyInfo> = FamilyId::PRINTED.iter().copied().chain([Gen]).map(family_info).collect();
    serde_json::json!({ "families": families })
}

/// A point strictly inside `domain` for sampling, and a finite window of it.
pub fn sampling_window(interval: Interval, span: f64) -> (f64, f64) {
    match (interval.lo.is_finite(), interval.hi.is_finite()) {
        (true, true) => (interval.lo, interval.hi),
        (true, false) => (interval.lo, interval.lo + span),
        (false, true) => (interval.hi - span, interval.hi),
        (false, false) => (-span / 2.0, span / 2.0),
    }
}

/// Spread of the eigenvalues of Q at x, zero when Q is a multiple of I.
pub fn q_anisotropy(dec: &Decomposition, x: f64) -> Result<f64> {
    let q = dec.q(x)?;
    let t = q.trace() / q.dim() as f64;
    Ok(q.shift(-t).max_abs())
}

/// Eigenvalues of R, ascending.
pub fn r_spectrum(dec: &Decomposition) -> Vec<f64> {
    hermitian_eigen(&dec.r).values
}
