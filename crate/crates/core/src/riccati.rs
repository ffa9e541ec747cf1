//! Scalar Riccati solutions `q' = α(q² + ν)` and the matrix Riccati solver
//! built on them.
//!
//! The six solution branches are
//!
//! | tag        | q(x)                    | ν        |
//! |------------|-------------------------|----------|
//! | zero       | 0                       | 0        |
//! | inverse    | −1/(αx + c)             | 0        |
//! | tan        | (λ/α) tan(λx + c)       | +λ²/α²   |
//! | tanh       | −(λ/α) tanh(λx + c)     | −λ²/α²   |
//! | coth       | −(λ/α) coth(λx + c)     | −λ²/α²   |
//! | const_neg  | −λ/α                    | −λ²/α²   |
//!
//! A matrix solution is `Q = M + q I` with `M⁻¹ = ρ I + θ C`, `C` a constant
//! hermitian matrix; its eigenvectors are those of `C` and do not depend on x.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, HermitianMatrix};

/// Denominators below this are treated as poles.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiccatiTag {
    Zero,
    Inverse,
    Tan,
    Tanh,
    Coth,
    ConstNeg,
}

impl RiccatiTag {
    pub const ALL: [RiccatiTag; 6] =
        [RiccatiTag::Zero, RiccatiTag::Inverse, RiccatiTag::Tan, RiccatiTag::Tanh, RiccatiTag::Coth, RiccatiTag::ConstNeg];

    pub fn name(self) -> &'static str {
        match self {
            RiccatiTag::Zero => "zero",
            RiccatiTag::Inverse => "inverse",
            RiccatiTag::Tan => "tan",
            RiccatiTag::Tanh => "tanh",
            RiccatiTag::Coth => "coth",
            RiccatiTag::ConstNeg => "const_neg",
        }
    }
}

/// One branch of the scalar Riccati catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiKind {
    pub tag: RiccatiTag,
    pub alpha: f64,
    /// Unused (zero) for `zero` and `inverse`.
    pub lambda: f64,
    pub c: f64,
}

impl RiccatiKind {
    pub fn new(tag: RiccatiTag, alpha: f64, lambda: f64, c: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha != 0.0) {
            return Err(Error::ParameterGuard(format!("alpha must be nonzero and finite, got {alpha}")));
        }
        if !c.is_finite() {
            return Err(Error::ParameterGuard(format!("c must be finite, got {c}")));
        }
        let lambda = match tag {
            RiccatiTag::Zero | RiccatiTag::Inverse => 0.0,
            _ => {
                if !(lambda.is_finite() && lambda > 0.0) {
                    return Err(Error::ParameterGuard(format!(
                        "{} branch needs lambda > 0, got {lambda}",
                        tag.name()
                    )));
                }
                lambda
            }
        };
        Ok(Self { tag, alpha, lambda, c })
    }

    pub fn zero(alpha: f64) -> Result<Self> {
        Self::new(RiccatiTag::Zero, alpha, 0.0, 0.0)
    }
    pub fn inverse(alpha: f64, c: f64) -> Result<Self> {
        Self::new(RiccatiTag::Inverse, alpha, 0.0, c)
    }
    pub fn tan(alpha: f64, lambda: f64, c: f64) -> Result<Self> {
        Self::new(RiccatiTag::Tan, alpha, lambda, c)
    }
    pub fn tanh(alpha: f64, lambda: f64, c: f64) -> Result<Self> {
        Self::new(RiccatiTag::Tanh, alpha, lambda, c)
    }
    pub fn coth(alpha: f64, lambda: f64, c: f64) -> Result<Self> {
        Self::new(RiccatiTag::Coth, alpha, lambda, c)
    }
    pub fn const_neg(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(RiccatiTag::ConstNeg, alpha, lambda, 0.0)
    }

    pub fn nu(&self) -> f64 {
        let r = self.lambda * self.lambda / (self.alpha * self.alpha);
        match self.tag {
            RiccatiTag::Zero | RiccatiTag::Inverse => 0.0,
            RiccatiTag::Tan => r,
            RiccatiTag::Tanh | RiccatiTag::Coth | RiccatiTag::ConstNeg => -r,
        }
    }

    fn arg(&self, x: f64) -> f64 {
        self.lambda * x + self.c
    }

    /// The quantity that vanishes at a pole, if the branch has poles.
    fn pole_denominator(&self, x: f64) -> Option<f64> {
        match self.tag {
            RiccatiTag::Inverse => Some(self.alpha * x + self.c),
            RiccatiTag::Tan => Some(self.arg(x).cos()),
            RiccatiTag::Coth => Some(self.arg(x).sinh()),
            _ => None,
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain { x, reason: "non-finite x".into() });
        }
        match self.pole_denominator(x) {
            Some(d) if d.abs() < POLE_TOL => Err(Error::Pole { x, kind: self.tag.name() }),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (a, l) = (self.alpha, self.lambda);
        Ok(match self.tag {
            RiccatiTag::Zero => 0.0,
            RiccatiTag::Inverse => -1.0 / (a * x + self.c),
            RiccatiTag::Tan => l / a * self.arg(x).tan(),
            RiccatiTag::Tanh => -l / a * self.arg(x).tanh(),
            RiccatiTag::Coth => -l / a / self.arg(x).tanh(),
            RiccatiTag::ConstNeg => -l / a,
        })
    }

    /// Closed-form q'(x).
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (a, l) = (self.alpha, self.lambda);
        Ok(match self.tag {
            RiccatiTag::Zero | RiccatiTag::ConstNeg => 0.0,
            RiccatiTag::Inverse => {
                let d = a * x + self.c;
                a / (d * d)
            }
            RiccatiTag::Tan => {
                let s = 1.0 / self.arg(x).cos();
                l * l / a * s * s
            }
            RiccatiTag::Tanh => {
                let s = 1.0 / self.arg(x).cosh();
                -l * l / a * s * s
            }
            RiccatiTag::Coth => {
                let s = 1.0 / self.arg(x).sinh();
                l * l / a * s * s
            }
        })
    }

    /// `|q' − α(q² + ν)| / max(1, |q'|)`.
    pub fn residual(&self, x: f64) -> Result<f64> {
        let q = self.eval(x)?;
        let dq = self.derivative(x)?;
        Ok((dq - self.alpha * (q * q + self.nu())).abs() / dq.abs().max(1.0))
    }

    /// Closed-form ∫q dx on the connected component containing x.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (a, l) = (self.alpha, self.lambda);
        Ok(match self.tag {
            RiccatiTag::Zero => 0.0,
            RiccatiTag::Inverse => -(a * x + self.c).abs().ln() / a,
            RiccatiTag::Tan => -self.arg(x).cos().abs().ln() / a,
            RiccatiTag::Tanh => -ln_cosh(self.arg(x)) / a,
            RiccatiTag::Coth => -ln_abs_sinh(self.arg(x)) / a,
            RiccatiTag::ConstNeg => -l / a * x,
        })
    }

    /// The maximal open interval containing `x` on which the branch is smooth.
    pub fn component(&self, x: f64) -> Result<(f64, f64)> {
        self.check(x)?;
        Ok(match self.tag {
            RiccatiTag::Inverse => {
                let p = -self.c / self.alpha;
                if x > p {
                    (p, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, p)
                }
            }
            RiccatiTag::Coth => {
                let p = -self.c / self.lambda;
                if x > p {
                    (p, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, p)
                }
            }
            RiccatiTag::Tan => {
                // poles at λx + c = π/2 + kπ
                let k = ((self.arg(x) - PI / 2.0) / PI).floor();
                let lo = (PI / 2.0 + k * PI - self.c) / self.lambda;
                let hi = (PI / 2.0 + (k + 1.0) * PI - self.c) / self.lambda;
                (lo, hi)
            }
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        })
    }

    pub fn same_component(&self, x1: f64, x2: f64) -> Result<bool> {
        let (lo, hi) = self.component(x1)?;
        Ok(x2 > lo && x2 < hi)
    }
}

fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn ln_abs_sinh(t: f64) -> f64 {
    let a = t.abs();
    a + (-(-2.0 * a).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute accuracy `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Matrix solution `Q(x) = (ρ(x) I + θ(x) C)⁻¹ + q(x) I` of `Q' = α(Q² + ν I)`.
///
/// `θ = F(x₀)/F(x)` and `ρ = (ρ₀ − α ∫_{x₀}^{x} F/F(x₀) dt) · F(x₀)/F(x)` with
/// `F = exp(2α ∫q dx)`, so that `M⁻¹(x₀) = ρ₀ I + C`.
#[derive(Debug, Clone)]
pub struct MatrixRiccatiSolution {
    pub base: RiccatiKind,
    pub c: HermitianMatrix,
    pub x0: f64,
    pub rho0: f64,
}

const QUAD_TOL: f64 = 1e-10;
const SINGULAR_TOL: f64 = 1e-8;

impl MatrixRiccatiSolution {
    pub fn new(base: RiccatiKind, c: HermitianMatrix, x0: f64, rho0: f64) -> Result<Self> {
        base.check(x0)?;
        Ok(Self { base, c, x0, rho0 })
    }

    /// ln(F(t)/F(x₀)).
    fn log_f_ratio(&self, t: f64) -> Result<f64> {
        Ok(2.0 * self.base.alpha * (self.base.antiderivative(t)? - self.base.antiderivative(self.x0)?))
    }

    fn ensure_component(&self, x: f64) -> Result<()> {
        if !self.base.same_component(self.x0, x)? {
            return Err(Error::Domain {
                x,
                reason: format!("not on the component of x0 = {} for the {} branch", self.x0, self.base.tag.name()),
            });
        }
        Ok(())
    }

    pub fn theta(&self, x: f64) -> Result<f64> {
        self.ensure_component(x)?;
        Ok((-self.log_f_ratio(x)?).exp())
    }

    pub fn rho(&self, x: f64) -> Result<f64> {
        self.ensure_component(x)?;
        let a0 = self.base.antiderivative(self.x0)?;
        let base = self.base;
        let alpha = base.alpha;
        let g = move |t: f64| (2.0 * alpha * (base.antiderivative(t).unwrap_or(f64::NAN) - a0)).exp();
        let integral = adaptive_simpson(&g, self.x0, x, QUAD_TOL);
        if !integral.is_finite() {
            return Err(Error::Numerical(format!("quadrature of F failed between {} and {x}", self.x0)));
        }
        Ok((self.rho0 - alpha * integral) * (-self.log_f_ratio(x)?).exp())
    }

    /// M⁻¹(x) = ρ I + θ C.
    pub fn m_inverse(&self, x: f64) -> Result<HermitianMatrix> {
        let n = self.c.dim();
        Ok(&HermitianMatrix::identity(n).scale(self.rho(x)?) + &self.c.scale(self.theta(x)?))
    }

    pub fn eval(&self, x: f64) -> Result<HermitianMatrix> {
        let (rho, theta) = (self.rho(x)?, self.theta(x)?);
        // eigenvalues of M⁻¹ are ρ + θ c_k; ρ carries the quadrature error
        let cs = hermitian_eigen(&self.c).values;
        let scale = 1.0 + rho.abs() + theta.abs() * cs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if cs.iter().any(|ck| (rho + theta * ck).abs() <= SINGULAR_TOL * scale) {
            return Err(Error::SingularMatrix { x });
        }
        let n = self.c.dim();
        let minv = &HermitianMatrix::identity(n).scale(rho) + &self.c.scale(theta);
        let m = minv.inverse().ok_or(Error::SingularMatrix { x })?;
        Ok(m.shift(self.base.eval(x)?))
    }
}

/// Convenience wrapper: evaluate the matrix solution with initial data at `x0`.
pub fn matrix_riccati_solve(base: RiccatiKind, c: &HermitianMatrix, x0: f64, rho0: f64, x: f64) -> Result<HermitianMatrix> {
    MatrixRiccatiSolution::new(base, c.clone(), x0, rho0)?.eval(x)
}
