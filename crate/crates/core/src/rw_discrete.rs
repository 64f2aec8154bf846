//! Discrete-time random walk search with an absorbing marked vertex.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{matvec, DenseMatrix};
use crate::model::{uniform_distribution, CompleteGraph, EvolutionRecord, ProbabilityState};

/// Column-stochastic transition matrix: column `a` is `ê_a`, every other
/// column spreads `1/(n-1)` over the remaining vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    matrix: DenseMatrix<f64>,
}

impl TransitionMatrix {
    pub fn matrix(&self) -> &DenseMatrix<f64> {
        &self.matrix
    }

    pub fn step(&self, p: &[f64]) -> Result<Vec<f64>> {
        matvec(&self.matrix, p)
    }
}

pub fn build_transition(g: &CompleteGraph) -> TransitionMatrix {
    let n = g.n();
    let a = g.marked_index();
    let hop = 1.0 / (n - 1) as f64;
    let matrix = DenseMatrix::from_fn(n, n, |i, j| match (j == a, i == j) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => hop,
    });
    TransitionMatrix { matrix }
}

/// Coefficients along `ê_a` (marked probability) and `ê_b` (total unmarked probability).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subspace2DClassical {
    pub marked: f64,
    pub unmarked: f64,
}

impl Subspace2DClassical {
    pub fn initial(n: usize) -> Self {
        Self {
            marked: 1.0 / n as f64,
            unmarked: (n - 1) as f64 / n as f64,
        }
    }

    pub fn total(&self) -> f64 {
        self.marked + self.unmarked
    }

    /// Projects a full distribution onto `{ê_a, ê_b}`.
    pub fn project(g: &CompleteGraph, p: &ProbabilityState) -> Self {
        let a = g.marked_index();
        let marked = p.probs()[a];
        let unmarked = p
            .probs()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a)
            .map(|(_, x)| x)
            .sum();
        Self { marked, unmarked }
    }
}

/// The transition matrix restricted to `{ê_a, ê_b}`, exactly.
pub fn subspace_transition_exact(n: usize) -> [[Ratio<i64>; 2]; 2] {
    let m = n as i64 - 1;
    [
        [Ratio::from_integer(1), Ratio::new(1, m)],
        [Ratio::from_integer(0), Ratio::new(m - 1, m)],
    ]
}

pub fn subspace_transition(n: usize) -> DenseMatrix<f64> {
    let exact = subspace_transition_exact(n);
    DenseMatrix::from_fn(2, 2, |i, j| {
        let r = exact[i][j];
        *r.numer() as f64 / *r.denom() as f64
    })
}

/// Distribution after `steps` applications of `P` to the uniform start.
pub fn distribution_at(g: &CompleteGraph, steps: u64) -> Result<ProbabilityState> {
    let p = build_transition(g);
    let mut state = uniform_distribution(g).into_vec();
    for _ in 0..steps {
        state = p.step(&state)?;
    }
    ProbabilityState::new(state)
}

/// Full-space evolution sampled at every step `0..=steps`.
pub fn evolve_full(g: &CompleteGraph, steps: u64) -> Result<EvolutionRecord> {
    let p = build_transition(g);
    let a = g.marked_index();
    let mut state = uniform_distribution(g).into_vec();
    let mut record = EvolutionRecord::with_capacity(steps as usize + 1);
    for t in 0..=steps {
        if t > 0 {
            state = p.step(&state)?;
        }
        record.push(t as f64, state[a], state.iter().sum())?;
    }
    Ok(record)
}

/// 2D evolution, one entry per step `0..=steps`.
pub fn evolve_subspace(g: &CompleteGraph, steps: u64) -> Result<Vec<Subspace2DClassical>> {
    let p = subspace_transition(g.n());
    let mut c = Subspace2DClassical::initial(g.n());
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(c);
    for _ in 0..steps {
        let next = matvec(&p, &[c.marked, c.unmarked])?;
        c = Subspace2DClassical {
            marked: next[0],
            unmarked: next[1],
        };
        out.push(c);
    }
    Ok(out)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(WalkError::Instance(format!(
            "the complete graph needs at least 2 vertices, got N = {n}"
        )));
    }
    Ok(())
}

/// `1 - ((n-1)/n)·((n-2)/(n-1))^t`; `t` may be fractional.
pub fn success_closed_form(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    if !(t >= 0.0) {
        return Err(WalkError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let nf = n as f64;
    let decay = if n == 2 {
        if t == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        ((nf - 2.0) / (nf - 1.0)).powf(t)
    };
    Ok(1.0 - (nf - 1.0) / nf * decay)
}

/// Real-valued time at which the closed form reaches `1 - eps`.
///
/// The integer step count is `ceil` of the result. `n = 2` is rejected since the
/// walk is absorbed after exactly one step.
pub fn runtime_for_epsilon(n: usize, eps: f64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let upper = (nf - 1.0) / nf;
    if !(eps > 0.0 && eps <= upper) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, {upper}] for N = {n}, got {eps}"
        )));
    }
    if n == 2 {
        return Err(WalkError::Domain(
            "for N = 2 the walk is absorbed after one step; the logarithmic runtime is undefined"
                .into(),
        ));
    }
    if eps == upper {
        return Ok(0.0);
    }
    // log base (n-2)/(n-1) of (n/(n-1))·eps
    let base = (-1.0 / (nf - 1.0)).ln_1p();
    Ok((nf / (nf - 1.0) * eps).ln() / base)
}

/// Smallest integer step count whose success is at least `1 - eps`.
pub fn steps_for_epsilon(n: usize, eps: f64) -> Result<u64> {
    let mut steps = runtime_for_epsilon(n, eps)?.ceil();
    // an exact integer runtime can land one ulp high and ceil past itself
    if steps >= 1.0 && success_closed_form(n, steps - 1.0)? >= 1.0 - eps - 1e-12 {
        steps -= 1.0;
    }
    Ok(steps as u64)
}

/// `n·ln(1/eps)`.
pub fn asymptotic_runtime(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, 1], got {eps}"
        )));
    }
    Ok(n as f64 * (1.0 / eps).ln())
}
