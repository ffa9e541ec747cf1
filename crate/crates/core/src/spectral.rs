//! Finite-difference spectra of H = −d²/dx² + V(x) on n coupled channels.
//!
//! The discretized operator is block tridiagonal (n×n blocks, one per grid
//! point), so it is never stored densely. Eigenvalues come from bisection on
//! the block LDLᴴ inertia count, eigenvectors from inverse iteration with a
//! block Thomas solve. Both cost O(N·n³) per sweep.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::{CMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Default cap on the number of unknowns N·n.
pub const DEFAULT_MAX_UNKNOWNS: usize = 200_000;
pub const MIN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    /// Interior points; the two Dirichlet endpoints are not unknowns.
    pub n_points: usize,
    pub channels: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, n_points: usize, channels: usize) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
            return Err(Error::Grid(format!("need finite xmin < xmax, got [{xmin}, {xmax}]")));
        }
        if n_points < MIN_POINTS {
            return Err(Error::Grid(format!("need at least {MIN_POINTS} points, got {n_points}")));
        }
        if channels == 0 {
            return Err(Error::Grid("zero channels".into()));
        }
        Ok(Self { xmin, xmax, n_points, channels })
    }

    pub fn h(&self) -> f64 {
        (self.xmax - self.xmin) / (self.n_points + 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xmin + (i + 1) as f64 * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    pub fn unknowns(&self) -> usize {
        self.n_points * self.channels
    }

    /// Same interval with h halved: N' = 2N + 1.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points + 1, ..*self }
    }
}

/// Values on the interior points, point-major: `values[i * channels + c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); grid.unknowns()], grid }
    }

    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.unknowns() {
            return Err(Error::DimensionMismatch { expected: grid.unknowns(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Vec<Complex64>) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.unknowns());
        for x in grid.points() {
            let v = f(x);
            if v.len() != grid.channels {
                return Err(Error::DimensionMismatch { expected: grid.channels, found: v.len() });
            }
            values.extend(v);
        }
        Ok(Self { grid, values })
    }

    pub fn at(&self, i: usize) -> &[Complex64] {
        let n = self.grid.channels;
        &self.values[i * n..(i + 1) * n]
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.h())
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h()).sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * s).collect() }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn axpy(&mut self, a: Complex64, x: &Self) -> Result<()> {
        if self.grid != x.grid {
            return Err(Error::GridMismatch);
        }
        for (s, v) in self.values.iter_mut().zip(&x.values) {
            *s += a * v;
        }
        Ok(())
    }

    /// Columns: x, then Re and Im per channel.
    pub fn to_csv(&self) -> String {
        let n = self.grid.channels;
        let mut out = String::from("x");
        for c in 1..=n {
            let _ = write!(out, ",re_{c},im_{c}");
        }
        out.push('\n');
        for i in 0..self.grid.n_points {
            let _ = write!(out, "{:?}", self.grid.x(i));
            for v in self.at(i) {
                let _ = write!(out, ",{:?},{:?}", v.re, v.im);
            }
            out.push('\n');
        }
        out
    }
}

/// The discretized Hamiltonian: diagonal blocks 2/h² + V(x_i), off-diagonal blocks −1/h².
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    grid: GridSpec,
    /// `blocks[i*n*n + r*n + c]`, exactly hermitian per block.
    blocks: Vec<Complex64>,
}

pub fn assemble(potential: impl Fn(f64) -> Result<HermitianMatrix>, grid: &GridSpec) -> Result<DiscreteHamiltonian> {
    assemble_within(potential, grid, DEFAULT_MAX_UNKNOWNS)
}

pub fn assemble_within(
    potential: impl Fn(f64) -> Result<HermitianMatrix>,
    grid: &GridSpec,
    max_unknowns: usize,
) -> Result<DiscreteHamiltonian> {
    if grid.unknowns() > max_unknowns {
        return Err(Error::MemoryBudget { requested: grid.unknowns(), budget: max_unknowns });
    }
    let n = grid.channels;
    let kin = 2.0 / (grid.h() * grid.h());
    let mut blocks = Vec::with_capacity(grid.n_points * n * n);
    for x in grid.points() {
        let v = potential(x)?;
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        for r in 0..n {
            for c in 0..n {
                let e = v.get(r, c);
                if !(e.re.is_finite() && e.im.is_finite()) {
                    return Err(Error::Domain { x, reason: "potential is not finite".into() });
                }
                blocks.push(if r == c { Complex64::new(e.re + kin, 0.0) } else { e });
            }
        }
    }
    Ok(DiscreteHamiltonian { grid: *grid, blocks })
}

impl DiscreteHamiltonian {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.unknowns()
    }

    fn block(&self, i: usize) -> &[Complex64] {
        let nn = self.grid.channels * self.grid.channels;
        &self.blocks[i * nn..(i + 1) * nn]
    }

    pub fn apply_raw(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.channels;
        let np = self.grid.n_points;
        let off = 1.0 / (self.grid.h() * self.grid.h());
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        for i in 0..np {
            let a = self.block(i);
            for r in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for c in 0..n {
                    s += a[r * n + c] * x[i * n + c];
                }
                if i > 0 {
                    s -= x[(i - 1) * n + r] * off;
                }
                if i + 1 < np {
                    s -= x[(i + 1) * n + r] * off;
                }
                y[i * n + r] = s;
            }
        }
        y
    }

    pub fn apply(&self, psi: &GridFunction) -> Result<GridFunction> {
        if psi.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(GridFunction { grid: self.grid, values: self.apply_raw(&psi.values) })
    }

    /// ⟨ψ, Hψ⟩ / ⟨ψ, ψ⟩.
    pub fn expectation(&self, psi: &GridFunction) -> Result<f64> {
        let hpsi = self.apply(psi)?;
        let den = psi.inner(psi)?.re;
        if !(den > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(psi.inner(&hpsi)?.re / den)
    }

    /// Dense copy, for small problems and tests.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.grid.channels;
        let np = self.grid.n_points;
        let off = Complex64::new(-1.0 / (self.grid.h() * self.grid.h()), 0.0);
        let mut m = CMatrix::zeros(n * np);
        for i in 0..np {
            let a = self.block(i);
            for r in 0..n {
                for c in 0..n {
                    m.set(i * n + r, i * n + c, a[r * n + c]);
                }
                if i + 1 < np {
                    m.set(i * n + r, (i + 1) * n + r, off);
                    m.set((i + 1) * n + r, i * n + r, off);
                }
            }
        }
        m
    }

    fn pivot_floor(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.grid.channels;
        let coupling = 2.0 / (self.grid.h() * self.grid.h());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.grid.n_points {
            let a = self.block(i);
            for r in 0..n {
                let radius: f64 = (0..n).filter(|&c| c != r).map(|c| a[r * n + c].norm()).sum::<f64>() + coupling;
                lo = lo.min(a[r * n + r].re - radius);
                hi = hi.max(a[r * n + r].re + radius);
            }
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia of the block LDLᴴ pivots).
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.grid.channels;
        let h4 = self.grid.h().powi(4);
        let mut s = vec![Complex64::new(0.0, 0.0); n * n];
        let mut sinv = vec![Complex64::new(0.0, 0.0); n * n];
        let mut work = vec![Complex64::new(0.0, 0.0); n * n];
        let tiny = self.pivot_floor();
        let mut count = 0;
        for i in 0..self.grid.n_points {
            s.copy_from_slice(self.block(i));
            for r in 0..n {
                s[r * n + r] -= sigma;
            }
            if i > 0 {
                for (e, p) in s.iter_mut().zip(&sinv) {
                    *e -= p / h4;
                }
            }
            hermitize(&mut s, n);
            count += negative_pivots(&s, n, &mut work, tiny);
            invert_regularized(&s, n, &mut sinv, &mut work, tiny);
        }
        count
    }

    /// Solves (H − σ)x = b by block Thomas elimination.
    fn shifted_solve(&self, sigma: f64, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.channels;
        let np = self.grid.n_points;
        let h2 = self.grid.h().powi(2);
        let h4 = h2 * h2;
        let nn = n * n;
        let mut sinvs = vec![Complex64::new(0.0, 0.0); np * nn];
        let mut y = b.to_vec();
        let mut s = vec![Complex64::new(0.0, 0.0); nn];
        let mut work = vec![Complex64::new(0.0, 0.0); nn];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        let tiny = self.pivot_floor();
        for i in 0..np {
            s.copy_from_slice(self.block(i));
            for r in 0..n {
                s[r * n + r] -= sigma;
            }
            if i > 0 {
                let (done, rest) = sinvs.split_at_mut(i * nn);
                let prev = &done[(i - 1) * nn..];
                for (e, p) in s.iter_mut().zip(prev) {
                    *e -= p / h4;
                }
                matvec(prev, &y[(i - 1) * n..i * n], n, &mut tmp);
                for r in 0..n {
                    y[i * n + r] += tmp[r] / h2;
                }
                invert_regularized(&s, n, &mut rest[..nn], &mut work, tiny);
            } else {
                invert_regularized(&s, n, &mut sinvs[..nn], &mut work, tiny);
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); np * n];
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..np).rev() {
            rhs.copy_from_slice(&y[i * n..(i + 1) * n]);
            if i + 1 < np {
                for r in 0..n {
                    rhs[r] += x[(i + 1) * n + r] / h2;
                }
            }
            matvec(&sinvs[i * nn..(i + 1) * nn], &rhs, n, &mut tmp);
            x[i * n..(i + 1) * n].copy_from_slice(&tmp);
        }
        x
    }
}

fn matvec(a: &[Complex64], x: &[Complex64], n: usize, out: &mut [Complex64]) {
    for r in 0..n {
        out[r] = (0..n).map(|c| a[r * n + c] * x[c]).sum();
    }
}

fn hermitize(s: &mut [Complex64], n: usize) {
    for r in 0..n {
        s[r * n + r].im = 0.0;
        for c in r + 1..n {
            let v = (s[r * n + c] + s[c * n + r].conj()) * 0.5;
            s[r * n + c] = v;
            s[c * n + r] = v.conj();
        }
    }
}

/// Negative pivots of the unpivoted LDLᴴ of a hermitian block. Pivots
/// smaller than `tiny` are replaced by `tiny`, as in the scalar Sturm count.
fn negative_pivots(s: &[Complex64], n: usize, l: &mut [Complex64], tiny: f64) -> usize {
    if n == 1 {
        return usize::from(s[0].re <= -tiny);
    }
    let mut d = [0.0_f64; 16];
    let mut dv = vec![0.0; if n > 16 { n } else { 0 }];
    let dd: &mut [f64] = if n > 16 { &mut dv } else { &mut d[..n] };
    let mut neg = 0;
    for k in 0..n {
        let mut dk = s[k * n + k].re;
        for j in 0..k {
            dk -= l[k * n + j].norm_sqr() * dd[j];
        }
        if dk.abs() < tiny {
            dk = tiny;
        }
        dd[k] = dk;
        if dk < 0.0 {
            neg += 1;
        }
        for i in k + 1..n {
            let mut v = s[i * n + k];
            for j in 0..k {
                v -= l[i * n + j] * l[k * n + j].conj() * dd[j];
            }
            l[i * n + k] = v / dk;
        }
    }
    neg
}

/// Gauss-Jordan inverse with partial pivoting; a vanishing pivot is nudged
/// off zero so the elimination chain stays finite.
fn invert_regularized(s: &[Complex64], n: usize, out: &mut [Complex64], a: &mut [Complex64], tiny: f64) {
    if n == 1 {
        let v = if s[0].norm() < tiny { Complex64::new(tiny, 0.0) } else { s[0] };
        out[0] = v.inv();
        return;
    }
    a.copy_from_slice(s);
    for (k, o) in out.iter_mut().enumerate() {
        *o = if k / n == k % n { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm())).unwrap();
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
                out.swap(piv * n + c, col * n + c);
            }
        }
        if a[col * n + col].norm() < tiny {
            a[col * n + col] = Complex64::new(tiny, 0.0);
        }
        let inv = a[col * n + col].inv();
        for c in 0..n {
            a[col * n + c] *= inv;
            out[col * n + c] *= inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                let (ac, oc) = (a[col * n + c], out[col * n + c]);
                a[r * n + c] -= f * ac;
                out[r * n + c] -= f * oc;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    /// Normalized to ‖ψ‖ = 1 with the trapezoid weight h.
    pub vectors: Vec<GridFunction>,
    /// ‖Hψ − Eψ‖/‖ψ‖.
    pub residuals: Vec<f64>,
}

impl Eigenpairs {
    pub fn report(&self) -> SpectrumReport {
        SpectrumReport::from_levels(vec![self.grid], vec![self.values.clone()], self.residuals.clone())
    }
}

/// Bisection to the k-th eigenvalue (0-based) inside [lo, hi].
fn kth_eigenvalue(h: &DiscreteHamiltonian, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        if h.count_below(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn seed_vector(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|j| {
            let t = j as f64;
            Complex64::new(1.0 + 0.5 * (1.7 * t + 0.3).sin(), 0.25 * (0.9 * t).cos())
        })
        .collect()
}

fn euclid(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The `k` lowest eigenpairs.
pub fn eigen_lowest(h: &DiscreteHamiltonian, k: usize) -> Result<Eigenpairs> {
    let dim = h.dim();
    if k == 0 || k > dim {
        return Err(Error::Grid(format!("requested {k} levels from a {dim}-dimensional problem")));
    }
    let (glo, ghi) = h.gershgorin();
    let mut values = Vec::with_capacity(k);
    let mut lo = glo;
    for level in 0..k {
        let e = kth_eigenvalue(h, level, lo, ghi);
        values.push(e);
        lo = e;
    }

    let mut raw: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (level, &e) in values.iter().enumerate() {
        let scale = e.abs().max(1.0);
        let cluster: Vec<usize> = (0..level).filter(|&j| (values[j] - e).abs() <= 1e-9 * scale).collect();
        let mut v = seed_vector(dim);
        let mut res = f64::INFINITY;
        for _ in 0..6 {
            for &j in &cluster {
                let p = dot(&raw[j], &v);
                for (a, b) in v.iter_mut().zip(&raw[j]) {
                    *a -= p * b;
                }
            }
            let mut w = h.shifted_solve(e, &v);
            for &j in &cluster {
                let p = dot(&raw[j], &w);
                for (a, b) in w.iter_mut().zip(&raw[j]) {
                    *a -= p * b;
                }
            }
            let nw = euclid(&w);
            if !(nw.is_finite() && nw > 0.0) {
                return Err(Error::Numerical(format!("inverse iteration broke down at level {level}")));
            }
            for z in w.iter_mut() {
                *z /= nw;
            }
            let hv = h.apply_raw(&w);
            let r: Vec<Complex64> = hv.iter().zip(&w).map(|(a, b)| a - b * e).collect();
            res = euclid(&r);
            v = w;
            if res < 1e-11 * scale {
                break;
            }
        }
        // Fix the phase: largest component real positive.
        let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
        if big.norm() > 0.0 {
            let ph = big.conj() / big.norm();
            for z in v.iter_mut() {
                *z *= ph;
            }
        }
        residuals.push(res);
        raw.push(v);
    }

    let inv_sqrt_h = 1.0 / h.grid.h().sqrt();
    let vectors = raw
        .into_iter()
        .map(|v| GridFunction { grid: h.grid, values: v.into_iter().map(|z| z * inv_sqrt_h).collect() })
        .collect();
    Ok(Eigenpairs { grid: h.grid, values, vectors, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_unknowns: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_unknowns: DEFAULT_MAX_UNKNOWNS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Coarse to fine.
    pub grids: Vec<GridSpec>,
    pub h: Vec<f64>,
    /// Raw eigenvalues per grid.
    pub raw: Vec<Vec<f64>>,
    /// (4E_{h/2} − E_h)/3 from the two finest grids.
    pub extrapolated: Option<Vec<f64>>,
    /// Best estimate: extrapolated when available.
    pub eigenvalues: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Eigen-residuals on the finest grid.
    pub residuals: Vec<f64>,
    pub threshold: Option<f64>,
    pub bound_levels: Option<usize>,
    pub analytic_gaps: Option<Vec<f64>>,
    pub deviations: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

impl SpectrumReport {
    pub fn from_levels(grids: Vec<GridSpec>, raw: Vec<Vec<f64>>, residuals: Vec<f64>) -> Self {
        let extrapolated = (raw.len() >= 2).then(|| {
            let (c, f) = (&raw[raw.len() - 2], &raw[raw.len() - 1]);
            c.iter().zip(f).map(|(ec, ef)| (4.0 * ef - ec) / 3.0).collect::<Vec<_>>()
        });
        let eigenvalues = extrapolated.clone().unwrap_or_else(|| raw.last().cloned().unwrap_or_default());
        let gaps = eigenvalues.iter().map(|e| e - eigenvalues[0]).collect();
        Self {
            h: grids.iter().map(GridSpec::h).collect(),
            grids,
            raw,
            extrapolated,
            eigenvalues,
            gaps,
            residuals,
            threshold: None,
            bound_levels: None,
            analytic_gaps: None,
            deviations: None,
            notes: Vec::new(),
        }
    }

    /// Levels at or above `threshold` are treated as discretized continuum.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.bound_levels = Some(self.eigenvalues.iter().filter(|&&e| e < threshold).count());
        self.threshold = Some(threshold);
        self
    }

    /// Deviations |numerical − analytic| for the levels both sides cover,
    /// restricted to bound levels when a threshold is set.
    pub fn with_analytic(mut self, gaps: Vec<f64>) -> Self {
        let usable = self.bound_levels.unwrap_or(self.gaps.len()).min(self.gaps.len()).min(gaps.len());
        self.deviations = Some((0..usable).map(|i| (self.gaps[i] - gaps[i]).abs()).collect());
        self.analytic_gaps = Some(gaps);
        self
    }

    pub fn max_deviation(&self) -> Option<f64> {
        self.deviations.as_ref().map(|d| d.iter().copied().fold(0.0, f64::max))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,eigenvalue,gap");
        for k in 0..self.raw.len() {
            let _ = write!(out, ",raw_{k}");
        }
        out.push_str(",analytic_gap,deviation\n");
        for i in 0..self.eigenvalues.len() {
            let _ = write!(out, "{i},{:?},{:?}", self.eigenvalues[i], self.gaps[i]);
            for r in &self.raw {
                let _ = write!(out, ",{:?}", r[i]);
            }
            let a = self.analytic_gaps.as_ref().and_then(|g| g.get(i));
            let d = self.deviations.as_ref().and_then(|g| g.get(i));
            let opt = |v: Option<&f64>| v.map(|v| format!("{v:?}")).unwrap_or_default();
            let _ = writeln!(out, ",{},{}", opt(a), opt(d));
        }
        out
    }
}

/// Solves on `grid` and on each of `refinements` successively halved grids.
pub fn convergence_study(
    potential: impl Fn(f64) -> Result<HermitianMatrix>,
    grid: &GridSpec,
    levels: usize,
    refinements: usize,
    opts: &SolverOptions,
) -> Result<SpectrumReport> {
    let mut grids = vec![*grid];
    for _ in 0..refinements {
        grids.push(grids.last().unwrap().refined());
    }
    if let Some(g) = grids.iter().find(|g| g.unknowns() > opts.max_unknowns) {
        return Err(Error::MemoryBudget { requested: g.unknowns(), budget: opts.max_unknowns });
    }
    let mut raw = Vec::with_capacity(grids.len());
    let mut residuals = Vec::new();
    for g in &grids {
        let h = assemble_within(&potential, g, opts.max_unknowns)?;
        let pairs = eigen_lowest(&h, levels)?;
        raw.push(pairs.values);
        residuals = pairs.residuals;
    }
    Ok(SpectrumReport::from_levels(grids, raw, residuals))
}

pub fn refine_and_extrapolate(
    potential: impl Fn(f64) -> Result<HermitianMatrix>,
    grid: &GridSpec,
    levels: usize,
    opts: &SolverOptions,
) -> Result<SpectrumReport> {
    convergence_study(potential, grid, levels, 1, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eigen;
    use std::f64::consts::PI;

    fn zero(n: usize) -> impl Fn(f64) -> Result<HermitianMatrix> {
        move |_| Ok(HermitianMatrix::zeros(n))
    }

    #[test]
    fn box_ground_state() {
        let g = GridSpec::new(0.0, PI, 2000, 1).unwrap();
        let pairs = eigen_lowest(&assemble(zero(1), &g).unwrap(), 3).unwrap();
        assert!((pairs.values[0] - 1.0).abs() < 1e-3);
        for (k, e) in pairs.values.iter().enumerate() {
            let h = g.h();
            let exact = 4.0 / (h * h) * ((k + 1) as f64 * h / 2.0).sin().powi(2);
            assert!((e - exact).abs() < 1e-9 * exact, "{e} vs {exact}");
        }
        assert!(pairs.residuals.iter().all(|&r| r < 1e-8));
    }

    #[test]
    fn box_extrapolation() {
        let g = GridSpec::new(0.0, PI, 400, 1).unwrap();
        let rep = refine_and_extrapolate(zero(1), &g, 3, &SolverOptions::default()).unwrap();
        for (k, e) in rep.eigenvalues.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((e - exact).abs() < 1e-6 * exact, "{e}");
        }
        assert_eq!(rep.raw.len(), 2);
        assert!(rep.gaps.iter().all(|&g| g >= 0.0));
    }

    #[test]
    fn error_ratio_near_four() {
        let g = GridSpec::new(0.0, PI, 100, 1).unwrap();
        let rep = convergence_study(zero(1), &g, 1, 2, &SolverOptions::default()).unwrap();
        let err: Vec<f64> = rep.raw.iter().map(|r| (r[0] - 1.0).abs()).collect();
        for w in err.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.8..=4.2).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn decoupled_channels_union() {
        let g = GridSpec::new(0.0, PI, 300, 2).unwrap();
        let pot = |_| Ok(HermitianMatrix::from_real_diagonal(&[0.0, 10.0]));
        let pairs = eigen_lowest(&assemble(pot, &g).unwrap(), 5).unwrap();
        let single = eigen_lowest(&assemble(zero(1), &GridSpec { channels: 1, ..g }).unwrap(), 5).unwrap();
        let mut union: Vec<f64> = single.values.iter().chain(single.values.iter().map(|e| e + 10.0).collect::<Vec<_>>().iter()).copied().collect();
        union.sort_by(f64::total_cmp);
        for (a, b) in pairs.values.iter().zip(&union) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn degenerate_channels_give_orthogonal_vectors() {
        let g = GridSpec::new(0.0, PI, 200, 2).unwrap();
        let pairs = eigen_lowest(&assemble(zero(2), &g).unwrap(), 4).unwrap();
        assert!((pairs.values[0] - pairs.values[1]).abs() < 1e-10);
        for i in 0..4 {
            for j in 0..i {
                assert!(pairs.vectors[i].inner(&pairs.vectors[j]).unwrap().norm() < 1e-8);
            }
            assert!((pairs.vectors[i].norm() - 1.0).abs() < 1e-12);
        }
    }

    fn coupled_potential(x: f64) -> Result<HermitianMatrix> {
        let i = Complex64::new(0.0, 1.0);
        HermitianMatrix::new(CMatrix::from_rows(&[
            vec![Complex64::new(x * x, 0.0), 0.5 * i * x.sin(), Complex64::new(0.2, 0.0)],
            vec![-0.5 * i * x.sin(), Complex64::new(1.0 + x, 0.0), Complex64::new(0.1 * x, 0.3)],
            vec![Complex64::new(0.2, 0.0), Complex64::new(0.1 * x, -0.3), Complex64::new(-x.cos(), 0.0)],
        ]))
    }

    #[test]
    fn dense_oracle_agrees() {
        let g = GridSpec::new(-2.0, 3.0, 64, 3).unwrap();
        let h = assemble(coupled_potential, &g).unwrap();
        let dense = h.to_dense();
        assert_eq!(dense.hermiticity_defect(), 0.0);
        let oracle = hermitian_eigen(&HermitianMatrix::new(dense).unwrap());
        let pairs = eigen_lowest(&h, 8).unwrap();
        for (k, e) in pairs.values.iter().enumerate() {
            assert!((e - oracle.values[k]).abs() < 1e-9 * oracle.values[k].abs().max(1.0), "{e} vs {}", oracle.values[k]);
            assert!(pairs.residuals[k] < 1e-8);
        }
        for sigma in [-5.0, 0.0, 3.0, 50.0, 500.0] {
            let expected = oracle.values.iter().filter(|&&v| v < sigma).count();
            assert_eq!(h.count_below(sigma), expected);
        }
    }

    #[test]
    fn vectors_solve_the_eigenproblem() {
        let g = GridSpec::new(-2.0, 3.0, 500, 3).unwrap();
        let h = assemble(coupled_potential, &g).unwrap();
        let pairs = eigen_lowest(&h, 4).unwrap();
        for (v, e) in pairs.vectors.iter().zip(&pairs.values) {
            assert!((h.expectation(v).unwrap() - e).abs() < 1e-9 * e.abs().max(1.0));
        }
    }

    #[test]
    fn guards() {
        assert!(GridSpec::new(1.0, 0.0, 100, 1).is_err());
        assert!(GridSpec::new(0.0, 1.0, 10, 1).is_err());
        let g = GridSpec::new(0.0, 1.0, 100, 1).unwrap();
        assert!(matches!(
            refine_and_extrapolate(zero(1), &g, 1, &SolverOptions { max_unknowns: 150 }),
            Err(Error::MemoryBudget { .. })
        ));
        assert!(eigen_lowest(&assemble(zero(1), &g).unwrap(), 101).is_err());
        assert!(assemble(zero(2), &g).is_err());
    }

    #[test]
    fn grid_function_csv_and_inner() {
        let g = GridSpec::new(0.0, 1.0, 64, 2).unwrap();
        let f = GridFunction::from_fn(g, |x| vec![Complex64::new(x, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let csv = f.to_csv();
        assert!(csv.starts_with("x,re_1,im_1,re_2,im_2\n"));
        assert_eq!(csv.lines().count(), 65);
        let rot = f.scaled(Complex64::from_polar(1.0, 0.7));
        assert!((f.inner(&rot).unwrap().norm() - f.norm() * rot.norm()).abs() < 1e-12);
        assert!(GridFunction::zeros(g).normalized().is_err());
    }
}
