//! Small dense real/complex linear algebra.
//!
//! Sizes here stay in the low hundreds, so everything is row-major `Vec` storage
//! with textbook loops.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Default truncation tolerance of the matrix exponential.
pub const EXPM_TOL: f64 = 1e-12;
/// Largest 1-norm of the scaled matrix fed to the Taylor series.
const EXPM_SCALED_NORM: f64 = 0.5;
const EXPM_MAX_TERMS: usize = 64;
const JACOBI_MAX_SWEEPS: usize = 100;
const POWER_MAX_ITERS: usize = 100_000;
const POWER_REL_TOL: f64 = 1e-10;

/// Field element used by [`DenseMatrix`]: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn real(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn real(self) -> f64 {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn real(self) -> f64 {
        self.re
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Scalar = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(WalkError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(WalkError::Numeric("matrix entry is not finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(WalkError::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(WalkError::Dimension(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(WalkError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).abs() <= tol))
    }
}

impl DenseMatrix<f64> {
    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        self.map(|x| Complex64::new(x, 0.0))
    }
}

impl<T: Scalar> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `m·x`.
pub fn matvec<T: Scalar>(m: &DenseMatrix<T>, x: &[T]) -> Result<Vec<T>> {
    if m.cols != x.len() {
        return Err(WalkError::Dimension(format!(
            "{}x{} matrix times vector of length {}",
            m.rows,
            m.cols,
            x.len()
        )));
    }
    Ok((0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
        })
        .collect())
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    DenseMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// `e^{m·t}` by scaling and squaring with a truncated Taylor series.
///
/// The scaled matrix has 1-norm at most 0.5; the series stops once the next
/// term is below `tol·2^{-s}` or machine precision relative to the partial sum.
pub fn expm<T: Scalar>(m: &DenseMatrix<T>, t: f64, tol: f64) -> Result<DenseMatrix<T>> {
    if !m.is_square() {
        return Err(WalkError::Dimension(format!(
            "exponential of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if !(tol > 0.0) {
        return Err(WalkError::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !t.is_finite() || m.data.iter().any(|x| !x.is_finite()) {
        return Err(WalkError::Numeric("non-finite input to expm".into()));
    }
    let n = m.rows;
    let a = m.scale(T::from_real(t));
    let norm = a.norm_one();
    let squarings = if norm > EXPM_SCALED_NORM {
        (norm / EXPM_SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(T::from_real(0.5f64.powi(squarings)));
    let term_tol = tol * 0.5f64.powi(squarings);

    let mut sum = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    for k in 1..=EXPM_MAX_TERMS {
        term = term.matmul(&scaled)?.scale(T::from_real(1.0 / k as f64));
        sum = sum.add(&term)?;
        let term_norm = term.norm_one();
        if term_norm <= f64::EPSILON * sum.norm_one() || term_norm <= term_tol * f64::EPSILON {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    if sum.data.iter().any(|x| !x.is_finite()) {
        return Err(WalkError::Numeric("matrix exponential overflowed".into()));
    }
    Ok(sum)
}

/// `e^{m·t}·x`.
pub fn expm_apply<T: Scalar>(m: &DenseMatrix<T>, t: f64, x: &[T], tol: f64) -> Result<Vec<T>> {
    if m.cols != x.len() {
        return Err(WalkError::Dimension(format!(
            "{}x{} matrix applied to vector of length {}",
            m.rows,
            m.cols,
            x.len()
        )));
    }
    matvec(&expm(m, t, tol)?, x)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T: Scalar> {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix<T>,
}

impl<T: Scalar> EigenSystem<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.column(k)
    }

    /// `V·diag(f(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> T) -> DenseMatrix<T> {
        let n = self.values.len();
        let weights: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(T::zero(), |acc, k| {
                acc + self.vectors[(i, k)] * weights[k] * self.vectors[(j, k)].conj()
            })
        })
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        self.reconstruct_with(T::from_real)
    }
}

/// Cyclic Jacobi diagonalization of a real-symmetric or complex-Hermitian matrix.
pub fn hermitian_eigen<T: Scalar>(m: &DenseMatrix<T>) -> Result<EigenSystem<T>> {
    if !m.is_square() {
        return Err(WalkError::Dimension(format!(
            "eigen-decomposition of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if !m.is_hermitian(1e-12 * m.max_abs().max(1.0)) {
        return Err(WalkError::Contract("matrix is not Hermitian".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut v = DenseMatrix::<T>::identity(n);
    let scale = m.norm_frobenius();

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(WalkError::Convergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].real().total_cmp(&a[(j, j)].real()));
    let values = order.iter().map(|&k| a[(k, k)].real()).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary `G = diag(e^{iα}, 1)·R(θ)` on the (p, q) plane.
fn jacobi_rotate<T: Scalar>(a: &mut DenseMatrix<T>, v: &mut DenseMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.abs();
    if r == 0.0 {
        return;
    }
    let phase = apq / T::from_real(r);
    let app = a[(p, p)].real();
    let aqq = a[(q, q)].real();
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let (cr, sr) = (T::from_real(c), T::from_real(s));
    let n = a.rows;

    // columns: A ← A·G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * phase * cr - akq * sr;
        a[(k, q)] = akp * phase * sr + akq * cr;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * phase * cr - vkq * sr;
        v[(k, q)] = vkp * phase * sr + vkq * cr;
    }
    // rows: A ← G†·A
    let phase_c = phase.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = phase_c * cr * apk - sr * aqk;
        a[(q, k)] = phase_c * sr * apk + cr * aqk;
    }
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    a[(p, p)] = T::from_real(app - t * r);
    a[(q, q)] = T::from_real(aqq + t * r);
}

/// Largest singular value by power iteration on `m†m`.
pub fn spectral_norm<T: Scalar>(m: &DenseMatrix<T>) -> Result<f64> {
    if !m.is_square() {
        return Err(WalkError::Dimension(format!(
            "spectral norm of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 || m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let adj = m.adjoint();
    // Unequal entries keep the start vector off symmetric null spaces such as
    // the all-ones kernel of a graph Laplacian.
    let mut x: Vec<T> = (0..n)
        .map(|i| T::from_real(1.0 + 0.5 * (i as f64 + 1.0).sqrt().fract() + i as f64 / n as f64))
        .collect();
    normalize(&mut x);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let mut y = matvec(&adj, &matvec(m, &x)?)?;
        let next = vec_norm(&y);
        if next == 0.0 {
            return Ok(0.0);
        }
        for yi in y.iter_mut() {
            *yi = *yi / T::from_real(next);
        }
        x = y;
        if (next - lambda).abs() <= POWER_REL_TOL * next {
            return Ok(next.sqrt());
        }
        lambda = next;
    }
    Err(WalkError::Convergence(POWER_MAX_ITERS))
}

pub fn vec_norm<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize<T: Scalar>(x: &mut [T]) {
    let norm = vec_norm(x);
    for v in x.iter_mut() {
        *v = *v / T::from_real(norm);
    }
}
