//! Continuous-time quantum walk search under `H = -γ(A - D) - |a⟩⟨a|` (ħ = 1).
//!
//! `e^{-iHt}` is formed from the eigendecomposition of the real-symmetric `H`,
//! which keeps the propagator unitary up to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{hermitian_eigen, matvec, DenseMatrix, EigenSystem};
use crate::model::{
    time_grid, uniform_superposition_vertices, CompleteGraph, EvolutionRecord, VertexAmplitudeState,
};

/// The jumping rate `1/n` at which the search reaches probability 1.
pub fn critical_gamma(n: usize) -> f64 {
    1.0 / n as f64
}

pub fn is_critical(n: usize, gamma: f64) -> bool {
    (gamma - critical_gamma(n)).abs() <= 1e-12 * critical_gamma(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHamiltonian {
    matrix: DenseMatrix<f64>,
    gamma: f64,
}

impl SearchHamiltonian {
    pub fn matrix(&self) -> &DenseMatrix<f64> {
        &self.matrix
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn energy(&self, psi: &[Complex64]) -> Result<f64> {
        let h = self.matrix.to_complex();
        let hpsi = matvec(&h, psi)?;
        Ok(psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum())
    }
}

pub fn build_hamiltonian(g: &CompleteGraph, gamma: f64) -> Result<SearchHamiltonian> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(WalkError::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let n = g.n();
    let a = g.marked_index();
    let adjacency = DenseMatrix::from_fn(n, n, |i, j| if i != j { 1.0 } else { 0.0 });
    let degree = DenseMatrix::diag(&vec![(n - 1) as f64; n]);
    let laplacian = adjacency.sub(&degree)?;
    let oracle = DenseMatrix::from_fn(n, n, |i, j| if i == a && j == a { 1.0 } else { 0.0 });
    let matrix = laplacian.scale(-gamma).sub(&oracle)?;
    Ok(SearchHamiltonian { matrix, gamma })
}

/// Precomputed spectral propagator `t ↦ e^{-iHt}`.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: EigenSystem<f64>,
}

impl Propagator {
    pub fn new(h: &SearchHamiltonian) -> Result<Self> {
        Ok(Self {
            eigen: hermitian_eigen(h.matrix())?,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    /// `e^{-iHt}·ψ = V·e^{-iΛt}·Vᵀ·ψ`.
    pub fn apply(&self, t: f64, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let v = &self.eigen.vectors;
        let n = v.rows();
        if psi.len() != n {
            return Err(WalkError::Dimension(format!(
                "propagator of size {n} applied to vector of length {}",
                psi.len()
            )));
        }
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| {
                let overlap =
                    (0..n).fold(Complex64::new(0.0, 0.0), |acc, i| acc + psi[i] * v[(i, k)]);
                overlap * Complex64::from_polar(1.0, -self.eigen.values[k] * t)
            })
            .collect();
        Ok((0..n)
            .map(|i| {
                (0..n).fold(Complex64::new(0.0, 0.0), |acc, k| {
                    acc + coeffs[k] * v[(i, k)]
                })
            })
            .collect())
    }
}

/// Vertex state at time `t` from the uniform start.
pub fn state_at(g: &CompleteGraph, gamma: f64, t: f64) -> Result<VertexAmplitudeState> {
    let h = build_hamiltonian(g, gamma)?;
    let psi0 = uniform_superposition_vertices(g);
    VertexAmplitudeState::new(Propagator::new(&h)?.apply(t, psi0.amps())?)
}

/// Full-space evolution sampled on `0, dt, … , t_max`. Any positive `gamma` is
/// accepted; the closed forms only describe `gamma = 1/n`.
pub fn evolve_full(g: &CompleteGraph, gamma: f64, t_max: f64, dt: f64) -> Result<EvolutionRecord> {
    let grid = time_grid(t_max, dt)?;
    let h = build_hamiltonian(g, gamma)?;
    let propagator = Propagator::new(&h)?;
    let psi0 = uniform_superposition_vertices(g);
    let a = g.marked_index();
    let mut record = EvolutionRecord::with_capacity(grid.len());
    for t in grid {
        let psi = propagator.apply(t, psi0.amps())?;
        let norm: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
        record.push(t, psi[a].norm_sqr(), norm)?;
    }
    Ok(record)
}

/// Default sampling interval `√n/100`, a hundredth of `1/|E±|`.
pub fn default_dt(n: usize) -> f64 {
    (n as f64).sqrt() / 100.0
}

/// Coefficients in the orthonormal basis `{|a⟩, |b⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subspace2DQuantum {
    pub a: Complex64,
    pub b: Complex64,
}

impl Subspace2DQuantum {
    pub fn initial(n: usize) -> Self {
        let nf = n as f64;
        Self {
            a: Complex64::new(1.0 / nf.sqrt(), 0.0),
            b: Complex64::new(((nf - 1.0) / nf).sqrt(), 0.0),
        }
    }

    pub fn squared_norm(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn project(g: &CompleteGraph, state: &VertexAmplitudeState) -> Self {
        let a = g.marked_index();
        let amps = state.amps();
        let sum_b: Complex64 = amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a)
            .map(|(_, x)| *x)
            .sum();
        Self {
            a: amps[a],
            b: sum_b / ((g.n() - 1) as f64).sqrt(),
        }
    }
}

/// `H` restricted to `{|a⟩, |b⟩}` for a general `gamma`.
pub fn subspace_hamiltonian(n: usize, gamma: f64) -> DenseMatrix<f64> {
    let m = (n - 1) as f64;
    let off = -gamma * m.sqrt();
    DenseMatrix::from_rows(&[vec![gamma * m - 1.0, off], vec![off, gamma]]).expect("2x2")
}

/// 2D state at time `t` with `gamma = 1/n`, by exponentiating the 2×2 Hamiltonian.
pub fn evolve_subspace(g: &CompleteGraph, t: f64) -> Result<Subspace2DQuantum> {
    let n = g.n();
    let eigen = hermitian_eigen(&subspace_hamiltonian(n, critical_gamma(n)))?;
    let start = Subspace2DQuantum::initial(n);
    let v = eigen.vectors.to_complex();
    let phases: Vec<Complex64> = eigen
        .values
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    let psi = [start.a, start.b];
    let coeffs: Vec<Complex64> = (0..2)
        .map(|k| (v[(0, k)] * psi[0] + v[(1, k)] * psi[1]) * phases[k])
        .collect();
    Ok(Subspace2DQuantum {
        a: v[(0, 0)] * coeffs[0] + v[(0, 1)] * coeffs[1],
        b: v[(1, 0)] * coeffs[0] + v[(1, 1)] * coeffs[1],
    })
}

/// The displayed closed state `c_a = i·sin(t/√n) + cos(t/√n)/√n`, `c_b = √((n-1)/n)·cos(t/√n)`.
pub fn closed_form_state(n: usize, t: f64) -> Result<Subspace2DQuantum> {
    check_n(n)?;
    let nf = n as f64;
    let (s, c) = (t / nf.sqrt()).sin_cos();
    Ok(Subspace2DQuantum {
        a: Complex64::new(c / nf.sqrt(), s),
        b: Complex64::new(((nf - 1.0) / nf).sqrt() * c, 0.0),
    })
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(WalkError::Instance(format!(
            "the complete graph needs at least 2 vertices, got N = {n}"
        )));
    }
    Ok(())
}

/// `sin²(t/√n) + cos²(t/√n)/n`.
pub fn success_closed_form(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    if !(t >= 0.0) {
        return Err(WalkError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let nf = n as f64;
    let (s, c) = (t / nf.sqrt()).sin_cos();
    Ok(s * s + c * c / nf)
}

/// First time the success probability reaches 1: `π√n/2`.
pub fn runtime(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(PI * (n as f64).sqrt() / 2.0)
}
