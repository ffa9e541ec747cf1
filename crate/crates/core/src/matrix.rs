//! Small dense complex matrices and the fixed Pauli / spin-1 constants.
//!
//! [`CMatrix`] is a plain square complex matrix. [`HermitianMatrix`] and
//! [`UnitaryMatrix`] are checked wrappers; every operation that promises a
//! hermitian result returns a [`HermitianMatrix`] whose entries satisfy
//! `a[i][j] == conj(a[j][i])` to within [`HERMITIAN_TOL`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-12;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from rows. Panics on ragged input, which is a programming error.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), dim, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), dim, "ragged matrix rows");
            data.extend(r.iter().map(|&v| c(v)));
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect()
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |a_ij - conj(a_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Determinant by partial-pivot LU.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r1, &r2| a[r1 * n + col].norm().total_cmp(&a[r2 * n + col].norm()))
                .unwrap();
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting; `None` when (numerically) singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r1, &r2| a[r1 * n + col].norm().total_cmp(&a[r2 * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() <= 1e-14 * scale {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (av, iv) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * av;
                    inv[r * n + j] -= f * iv;
                }
            }
        }
        Some(Self { dim: n, data: inv })
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let v = self.get(i, j);
                write!(f, "{:>+.6}{:+.6}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix add");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sub");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Hermitian matrix; the invariant is enforced at construction and preserved by
/// every operation defined on this type.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "HermitianRepr", try_from = "HermitianRepr")]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Validates hermiticity at [`HERMITIAN_TOL`] (relative to the largest entry),
    /// then symmetrizes so the stored value is exactly hermitian.
    pub fn new(m: CMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(m))
    }

    /// Takes (M + M†)/2 without checking. Use only where hermiticity holds by construction.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let n = m.dim;
        let mut out = m;
        for i in 0..n {
            let d = out.get(i, i);
            out.set(i, i, c(d.re));
            for j in i + 1..n {
                let v = (out.get(i, j) + out.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        Self(out)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(CMatrix::from_diagonal(&diag.iter().map(|&d| c(d)).collect::<Vec<_>>()))
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(c(s)))
    }

    pub fn square(&self) -> Self {
        Self::symmetrized(self.0.matmul(&self.0).expect("same dimension"))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    /// Adds `s * I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim {
            let d = m.get(i, i);
            m.set(i, i, d + s);
        }
        Self(m)
    }

    /// Hermitian inverse, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().map(Self::symmetrized)
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian")?;
        self.0.fmt(f)
    }
}

impl<'a> Add<&'a HermitianMatrix> for &'a HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Add for HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self + &rhs
    }
}

impl AddAssign<&HermitianMatrix> for HermitianMatrix {
    fn add_assign(&mut self, rhs: &HermitianMatrix) {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in matrix add");
        for (a, b) in self.0.data.iter_mut().zip(&rhs.0.data) {
            *a += b;
        }
    }
}

impl<'a> Sub<&'a HermitianMatrix> for &'a HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, s: f64) -> HermitianMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, s: f64) -> HermitianMatrix {
        self.scale(s)
    }
}

impl Mul<&HermitianMatrix> for f64 {
    type Output = HermitianMatrix;
    fn mul(self, m: &HermitianMatrix) -> HermitianMatrix {
        m.scale(self)
    }
}

impl Mul<HermitianMatrix> for f64 {
    type Output = HermitianMatrix;
    fn mul(self, m: HermitianMatrix) -> HermitianMatrix {
        m.scale(self)
    }
}

impl Neg for HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct HermitianRepr {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<HermitianMatrix> for HermitianRepr {
    fn from(m: HermitianMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.0.data.iter().map(|v| v.re).collect(),
            im: m.0.data.iter().map(|v| v.im).collect(),
        }
    }
}

impl TryFrom<HermitianRepr> for HermitianMatrix {
    type Error = Error;
    fn try_from(r: HermitianRepr) -> Result<Self> {
        if r.re.len() != r.dim * r.dim || r.im.len() != r.dim * r.dim {
            return Err(Error::DimensionMismatch { expected: r.dim * r.dim, found: r.re.len() });
        }
        let data = r.re.iter().zip(&r.im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        HermitianMatrix::new(CMatrix { dim: r.dim, data })
    }
}

/// Unitary matrix, `U U† = I` within [`UNITARY_TOL`].
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let prod = m.matmul(&m.adjoint())?;
        let defect = (&prod - &CMatrix::identity(m.dim)).max_abs();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.matmul(&other.0)?))
    }

    /// Column `k` as a vector.
    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.0.get(i, k)).collect()
    }

    /// `(a·I + i b·G)` for a hermitian involution-like generator, normalized; e.g. `(1 + iσ₂)/√2`.
    pub fn from_identity_plus_i(generator: &HermitianMatrix, b: f64) -> Result<Self> {
        let n = generator.dim();
        let g = generator.as_matrix().scale(Complex64::new(0.0, b));
        let m = (&CMatrix::identity(n) + &g).scale(c(1.0 / (1.0 + b * b).sqrt()));
        Self::new(m)
    }

    /// `exp(i θ G)` for hermitian `G`, via its eigen-decomposition.
    pub fn exp_i(generator: &HermitianMatrix, theta: f64) -> Result<Self> {
        let eig = hermitian_eigen(generator);
        let n = generator.dim();
        let v = eig.vectors.as_matrix();
        let phases: Vec<Complex64> = eig.values.iter().map(|&l| Complex64::from_polar(1.0, theta * l)).collect();
        let d = CMatrix::from_diagonal(&phases);
        let m = v.matmul(&d)?.matmul(&v.adjoint())?;
        debug_assert_eq!(m.dim(), n);
        Self::new(m)
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary")?;
        self.0.fmt(f)
    }
}

/// Pauli matrix σ₀ (identity), σ₁, σ₂ or σ₃.
pub fn pauli(index: usize) -> Result<HermitianMatrix> {
    let m = match index {
        0 => CMatrix::identity(2),
        1 => CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
        2 => CMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
        3 => CMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
        _ => return Err(Error::IndexOutOfRange { index, range: "0..=3" }),
    };
    Ok(HermitianMatrix(m))
}

/// σ₊ = (σ₀ + σ₃)/2 = diag(1, 0).
pub fn sigma_plus() -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&[1.0, 0.0])
}

/// σ₋ = (σ₀ − σ₃)/2 = diag(0, 1).
pub fn sigma_minus() -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&[0.0, 1.0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinBasis {
    /// `(S_k)_{ij} = -i ε_{kij}`.
    Cartesian,
    /// Diagonal S₃.
    GelfandTsetlin,
}

/// Spin-1 matrix S₁, S₂ or S₃ in the requested basis.
pub fn spin1(index: usize, basis: SpinBasis) -> Result<HermitianMatrix> {
    if !(1..=3).contains(&index) {
        return Err(Error::IndexOutOfRange { index, range: "1..=3" });
    }
    let m = match basis {
        SpinBasis::Cartesian => {
            let mut m = CMatrix::zeros(3);
            // (S_k)_{ij} = -i eps_{kij}
            let (a, b) = match index {
                1 => (1, 2),
                2 => (2, 0),
                _ => (0, 1),
            };
            m.set(a, b, -I);
            m.set(b, a, I);
            m
        }
        SpinBasis::GelfandTsetlin => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            match index {
                1 => CMatrix::from_real_rows(&[[0.0, r, 0.0], [r, 0.0, r], [0.0, r, 0.0]]),
                2 => {
                    let p = Complex64::new(0.0, r);
                    CMatrix::from_rows(&[[ZERO, -p, ZERO], [p, ZERO, -p], [ZERO, p, ZERO]])
                }
                _ => CMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]]),
            }
        }
    };
    Ok(HermitianMatrix(m))
}

/// {A, B} = AB + BA.
pub fn anticommutator(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(a.dim(), b.dim())?;
    let ab = a.0.matmul(&b.0)?;
    let ba = b.0.matmul(&a.0)?;
    Ok(HermitianMatrix::symmetrized(&ab + &ba))
}

/// U A U†.
pub fn conjugate(u: &UnitaryMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(u.dim(), a.dim())?;
    let m = u.0.matmul(&a.0)?.matmul(&u.0.adjoint())?;
    Ok(HermitianMatrix::symmetrized(m))
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: UnitaryMatrix,
}

/// Cyclic complex Jacobi eigen-decomposition.
///
/// Eigenvalues ascending; each eigenvector's largest-magnitude component
/// (first one on ties) is made real positive.
pub fn hermitian_eigen(a: &HermitianMatrix) -> Eigen {
    let n = a.dim();
    let mut m = a.0.data.clone();
    let mut v = CMatrix::identity(n).data;
    let scale = a.norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let abs = apq.norm();
                if abs <= 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // Rotation J: J_pp = J_qq = c, J_pq = s·phase, J_qp = -s·conj(phase).
                let jpq = phase * sn;
                let jqp = -phase.conj() * sn;
                // M <- M J (columns p, q)
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = mkp * cs + mkq * jqp;
                    m[k * n + q] = mkp * jpq + mkq * cs;
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * cs + vkq * jqp;
                    v[k * n + q] = vkp * jpq + vkq * cs;
                }
                // M <- J† M (rows p, q)
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = mpk * cs + mqk * jqp.conj();
                    m[q * n + k] = mpk * jpq.conj() + mqk * cs;
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.total_cmp(&m[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i].re).collect();
    let mut vecs = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut best = 0;
        for i in 0..n {
            if v[i * n + src].norm() > v[best * n + src].norm() + 1e-12 {
                best = i;
            }
        }
        let piv = v[best * n + src];
        let fix = if piv.norm() > 0.0 { piv.conj() / piv.norm() } else { ONE };
        for i in 0..n {
            vecs.set(i, col, v[i * n + src] * fix);
        }
    }
    Eigen { values, vectors: UnitaryMatrix(vecs) }
}
