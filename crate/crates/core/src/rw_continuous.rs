//! Continuous-time random walk search: `dp/dt = L p / ‖L‖` with an absorbing
//! marked vertex.
//!
//! `‖L‖` is fixed to `n`. The absorbing Laplacian is not symmetric, so its
//! largest singular value differs from `n`; [`AbsorbingLaplacian::measured_norm`]
//! reports that value for diagnostics only.

use crate::error::{Result, WalkError};
use crate::linalg::{expm, matvec, spectral_norm, DenseMatrix, EXPM_TOL};
use crate::model::{
    time_grid, uniform_distribution, CompleteGraph, EvolutionRecord, ProbabilityState,
};
use crate::rw_discrete::Subspace2DClassical;

pub use crate::rw_discrete::asymptotic_runtime;

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingLaplacian {
    matrix: DenseMatrix<f64>,
    norm: f64,
}

impl AbsorbingLaplacian {
    pub fn matrix(&self) -> &DenseMatrix<f64> {
        &self.matrix
    }

    /// The normalization used in the evolution, always `n`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Largest singular value of the matrix, computed numerically.
    pub fn measured_norm(&self) -> Result<f64> {
        spectral_norm(&self.matrix)
    }

    /// `L / ‖L‖`.
    pub fn generator(&self) -> DenseMatrix<f64> {
        self.matrix.scale(1.0 / self.norm)
    }
}

/// `L = A - D` of the complete graph with the marked column zeroed.
pub fn build_absorbing_laplacian(g: &CompleteGraph) -> AbsorbingLaplacian {
    let n = g.n();
    let a = g.marked_index();
    let adjacency = DenseMatrix::from_fn(n, n, |i, j| if i != j && j != a { 1.0 } else { 0.0 });
    let degree = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j && j != a {
            (n - 1) as f64
        } else {
            0.0
        }
    });
    let matrix = adjacency
        .sub(&degree)
        .expect("adjacency and degree share a shape");
    AbsorbingLaplacian {
        matrix,
        norm: n as f64,
    }
}

/// Default sampling interval `n/100`.
pub fn default_dt(n: usize) -> f64 {
    n as f64 / 100.0
}

/// Distribution at time `t` from the uniform start.
pub fn distribution_at(g: &CompleteGraph, t: f64) -> Result<ProbabilityState> {
    let lap = build_absorbing_laplacian(g);
    let propagator = expm(&lap.generator(), t, EXPM_TOL)?;
    ProbabilityState::new(matvec(&propagator, uniform_distribution(g).probs())?)
}

/// Full-space evolution sampled on `0, dt, 2dt, … , t_max`.
///
/// A single propagator `e^{L·dt/n}` is reused between grid points.
pub fn evolve_full(g: &CompleteGraph, t_max: f64, dt: f64) -> Result<EvolutionRecord> {
    let grid = time_grid(t_max, dt)?;
    let generator = build_absorbing_laplacian(g).generator();
    let step = expm(&generator, dt, EXPM_TOL)?;
    let a = g.marked_index();
    let mut state = uniform_distribution(g).into_vec();
    let mut record = EvolutionRecord::with_capacity(grid.len());
    let mut prev = 0.0;
    for (k, &t) in grid.iter().enumerate() {
        if k > 0 {
            let h = t - prev;
            state = if (h - dt).abs() <= 1e-12 * dt {
                matvec(&step, &state)?
            } else {
                matvec(&expm(&generator, h, EXPM_TOL)?, &state)?
            };
        }
        prev = t;
        record.push(t, state[a], state.iter().sum())?;
    }
    Ok(record)
}

/// The absorbing Laplacian restricted to `{ê_a, ê_b}`: `[[0, 1], [0, -1]]`.
pub fn subspace_laplacian() -> DenseMatrix<f64> {
    DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, -1.0]]).expect("2x2")
}

/// 2D state at time `t`, evolved with `e^{L₂ t / n}`.
pub fn evolve_subspace(g: &CompleteGraph, t: f64) -> Result<Subspace2DClassical> {
    if !(t >= 0.0) {
        return Err(WalkError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let n = g.n();
    let start = Subspace2DClassical::initial(n);
    let generator = subspace_laplacian().scale(1.0 / n as f64);
    let c = matvec(
        &expm(&generator, t, EXPM_TOL)?,
        &[start.marked, start.unmarked],
    )?;
    Ok(Subspace2DClassical {
        marked: c[0],
        unmarked: c[1],
    })
}

/// `1 - ((n-1)/n)·e^{-t/n}`.
pub fn success_closed_form(n: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(WalkError::Instance(format!(
            "the complete graph needs at least 2 vertices, got N = {n}"
        )));
    }
    if !(t >= 0.0) {
        return Err(WalkError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let nf = n as f64;
    Ok(1.0 - (nf - 1.0) / nf * (-t / nf).exp())
}

/// `n·ln(((n-1)/n)/eps)`.
pub fn runtime_for_epsilon(n: usize, eps: f64) -> Result<f64> {
    if n < 2 {
        return Err(WalkError::Instance(format!(
            "the complete graph needs at least 2 vertices, got N = {n}"
        )));
    }
    let nf = n as f64;
    let upper = (nf - 1.0) / nf;
    if !(eps > 0.0 && eps <= upper) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, {upper}] for N = {n}, got {eps}"
        )));
    }
    if eps == upper {
        return Ok(0.0);
    }
    Ok(nf * (upper / eps).ln())
}
