//! Coined discrete-time quantum walk search on the arcs of the complete graph.
//!
//! One search step is `U = S·C·Q`:
//!
//! - `Q = I - 2|a,s_c⟩⟨a,s_c|` reflects the marked vertex's coin about the uniform direction,
//! - `C = I ⊗ (2|s_c⟩⟨s_c| - I)` inverts every amplitude about its vertex average,
//! - `S|i→j⟩ = |j→i⟩` is the flip-flop shift.
//!
//! The operators are applied as implicit maps over any [`Amplitude`] type, so the
//! same code runs in floating point and in exact rational arithmetic.
//! [`CoinedOperators`] materializes the matrices for small `n`.

use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{kron, matvec, DenseMatrix};
use crate::model::{
    arc_slot, uniform_superposition_arcs, ArcState, CompleteGraph, EvolutionRecord,
};

/// Largest `n` for which [`CoinedOperators::explicit`] builds matrices.
pub const EXPLICIT_MAX_N: usize = 12;

/// Number type the implicit operators act on.
pub trait Amplitude: Copy + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    /// `self / k`.
    fn div_count(self, k: usize) -> Self;
}

impl Amplitude for f64 {
    fn zero() -> Self {
        0.0
    }
    fn div_count(self, k: usize) -> Self {
        self / k as f64
    }
}

impl Amplitude for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn div_count(self, k: usize) -> Self {
        self / k as f64
    }
}

impl Amplitude for Ratio<i64> {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
    fn div_count(self, k: usize) -> Self {
        self / Ratio::from_integer(k as i64)
    }
}

/// States after each stage of one search step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace<T> {
    pub after_oracle: Vec<T>,
    pub after_coin: Vec<T>,
    pub after_shift: Vec<T>,
}

/// Implicit `Q`, `C`, `S` for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoinedWalk {
    n: usize,
    marked: usize,
}

impl CoinedWalk {
    pub fn new(g: &CompleteGraph) -> Result<Self> {
        g.require_coined()?;
        Ok(Self {
            n: g.n(),
            marked: g.marked_index(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n - 1)
    }

    fn check<T>(&self, amps: &[T]) -> Result<()> {
        if amps.len() != self.dim() {
            return Err(WalkError::Dimension(format!(
                "arc state for N = {} needs {} amplitudes, got {}",
                self.n,
                self.dim(),
                amps.len()
            )));
        }
        Ok(())
    }

    fn block_mean<T: Amplitude>(block: &[T]) -> T {
        block
            .iter()
            .fold(T::zero(), |acc, &x| acc + x)
            .div_count(block.len())
    }

    /// `Q`: subtracts twice the coin average at the marked vertex.
    pub fn apply_oracle<T: Amplitude>(&self, amps: &mut [T]) -> Result<()> {
        self.check(amps)?;
        let d = self.n - 1;
        let block = &mut amps[self.marked * d..(self.marked + 1) * d];
        let mean = Self::block_mean(block);
        let twice = mean + mean;
        for x in block.iter_mut() {
            *x = *x - twice;
        }
        Ok(())
    }

    /// `Q' = (I - 2|a⟩⟨a|) ⊗ I`: negates every amplitude at the marked vertex.
    pub fn apply_phase_oracle<T: Amplitude>(&self, amps: &mut [T]) -> Result<()> {
        self.check(amps)?;
        let d = self.n - 1;
        for x in amps[self.marked * d..(self.marked + 1) * d].iter_mut() {
            *x = -*x;
        }
        Ok(())
    }

    /// `C`: inversion about the average at each vertex.
    pub fn apply_coin<T: Amplitude>(&self, amps: &mut [T]) -> Result<()> {
        self.check(amps)?;
        for block in amps.chunks_mut(self.n - 1) {
            let mean = Self::block_mean(block);
            let twice = mean + mean;
            for x in block.iter_mut() {
                *x = twice - *x;
            }
        }
        Ok(())
    }

    /// `S`: swaps `α_ij` and `α_ji`.
    pub fn apply_shift<T: Amplitude>(&self, amps: &mut [T]) -> Result<()> {
        self.check(amps)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                amps.swap(arc_slot(self.n, i, j), arc_slot(self.n, j, i));
            }
        }
        Ok(())
    }

    /// One search step `S·C·Q`, in place.
    pub fn step<T: Amplitude>(&self, amps: &mut [T]) -> Result<()> {
        self.apply_oracle(amps)?;
        self.apply_coin(amps)?;
        self.apply_shift(amps)
    }

    pub fn step_trace<T: Amplitude>(&self, amps: &[T]) -> Result<StepTrace<T>> {
        let mut state = amps.to_vec();
        self.apply_oracle(&mut state)?;
        let after_oracle = state.clone();
        self.apply_coin(&mut state)?;
        let after_coin = state.clone();
        self.apply_shift(&mut state)?;
        Ok(StepTrace {
            after_oracle,
            after_coin,
            after_shift: state,
        })
    }

    /// Sum of squared magnitudes over the arcs leaving the marked vertex.
    pub fn marked_probability(&self, amps: &[Complex64]) -> f64 {
        let d = self.n - 1;
        amps[self.marked * d..(self.marked + 1) * d]
            .iter()
            .map(|x| x.norm_sqr())
            .sum()
    }
}

/// Explicit `n(n-1) × n(n-1)` matrices built from the operator definitions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinedOperators {
    pub oracle: DenseMatrix<f64>,
    pub coin: DenseMatrix<f64>,
    pub shift: DenseMatrix<f64>,
}

impl CoinedOperators {
    pub fn explicit(g: &CompleteGraph) -> Result<Self> {
        g.require_coined()?;
        let n = g.n();
        if n > EXPLICIT_MAX_N {
            return Err(WalkError::Domain(format!(
                "explicit coined operators are limited to N <= {EXPLICIT_MAX_N}, got N = {n}"
            )));
        }
        let d = n - 1;
        let dim = n * d;
        let uniform_coin = 1.0 / (d as f64).sqrt();

        // |a, s_c⟩ = |a⟩ ⊗ |s_c⟩
        let a = g.marked_index();
        let marked_uniform: Vec<f64> = (0..dim)
            .map(|k| if k / d == a { uniform_coin } else { 0.0 })
            .collect();
        let oracle = DenseMatrix::from_fn(dim, dim, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - 2.0 * marked_uniform[i] * marked_uniform[j]
        });

        // C_G = 2|s_c⟩⟨s_c| - I
        let grover =
            DenseMatrix::from_fn(d, d, |i, j| 2.0 / d as f64 - if i == j { 1.0 } else { 0.0 });
        let coin = kron(&DenseMatrix::identity(n), &grover);

        let mut shift = DenseMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                shift[(arc_slot(n, j, i), arc_slot(n, i, j))] = 1.0;
            }
        }
        Ok(Self {
            oracle,
            coin,
            shift,
        })
    }

    /// `U = S·C·Q`.
    pub fn search_operator(&self) -> Result<DenseMatrix<f64>> {
        self.shift.matmul(&self.coin)?.matmul(&self.oracle)
    }
}

/// Coefficients in the orthonormal basis `{|ab⟩, |ba⟩, |bb⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subspace3D {
    pub ab: f64,
    pub ba: f64,
    pub bb: f64,
}

impl Subspace3D {
    pub fn initial(n: usize) -> Self {
        let nf = n as f64;
        Self {
            ab: 1.0 / nf.sqrt(),
            ba: 1.0 / nf.sqrt(),
            bb: ((nf - 2.0) / nf).sqrt(),
        }
    }

    pub fn squared_norm(&self) -> f64 {
        self.ab * self.ab + self.ba * self.ba + self.bb * self.bb
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.ab, self.ba, self.bb]
    }

    /// Projects a full arc state onto the subspace (real parts).
    pub fn project(g: &CompleteGraph, state: &ArcState) -> Self {
        let n = g.n();
        let a = g.marked_index();
        let amps = state.amps();
        let norm_b = 1.0 / ((n - 1) as f64).sqrt();
        let norm_bb = norm_b / ((n - 2) as f64).sqrt();
        let (mut ab, mut ba, mut bb) = (0.0, 0.0, 0.0);
        for i in (0..n).filter(|&i| i != a) {
            ab += amps[arc_slot(n, a, i)].re;
            ba += amps[arc_slot(n, i, a)].re;
            for j in (0..n).filter(|&j| j != a && j != i) {
                bb += amps[arc_slot(n, i, j)].re;
            }
        }
        Self {
            ab: ab * norm_b,
            ba: ba * norm_b,
            bb: bb * norm_bb,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(WalkError::Instance(format!(
            "the coined quantum walk requires N >= 3, got N = {n}"
        )));
    }
    Ok(())
}

/// The angle with `sin φ = √(2n-3)/(n-1)` and `cos φ = (n-2)/(n-1)`.
pub fn phi(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((2.0 * nf - 3.0).sqrt().atan2(nf - 2.0))
}

/// `U` restricted to `{|ab⟩, |ba⟩, |bb⟩}`.
pub fn subspace_operator(n: usize) -> Result<DenseMatrix<f64>> {
    check_n(n)?;
    let nf = n as f64;
    let r = (nf - 3.0) / (nf - 1.0);
    let s = 2.0 * (nf - 2.0).sqrt() / (nf - 1.0);
    DenseMatrix::from_rows(&[vec![0.0, -r, s], vec![-1.0, 0.0, 0.0], vec![0.0, s, r]])
}

/// Arc state after `steps` search steps from the uniform start.
pub fn state_at(g: &CompleteGraph, steps: u64) -> Result<ArcState> {
    let walk = CoinedWalk::new(g)?;
    let mut amps = uniform_superposition_arcs(g)?.into_vec();
    for _ in 0..steps {
        walk.step(&mut amps)?;
    }
    ArcState::new(g.n(), amps)
}

/// Full arc-space evolution sampled at every step `0..=steps`.
pub fn evolve_full(g: &CompleteGraph, steps: u64) -> Result<EvolutionRecord> {
    let walk = CoinedWalk::new(g)?;
    let mut amps = uniform_superposition_arcs(g)?.into_vec();
    let mut record = EvolutionRecord::with_capacity(steps as usize + 1);
    for t in 0..=steps {
        if t > 0 {
            walk.step(&mut amps)?;
        }
        let norm: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
        record.push(t as f64, walk.marked_probability(&amps), norm)?;
    }
    Ok(record)
}

/// 3D evolution, one entry per step `0..=steps`.
pub fn evolve_subspace(g: &CompleteGraph, steps: u64) -> Result<Vec<Subspace3D>> {
    g.require_coined()?;
    let u = subspace_operator(g.n())?;
    let mut c = Subspace3D::initial(g.n());
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(c);
    for _ in 0..steps {
        let next = matvec(&u, &c.to_vec())?;
        c = Subspace3D {
            ab: next[0],
            ba: next[1],
            bb: next[2],
        };
        out.push(c);
    }
    Ok(out)
}

/// Subspace coefficients at step `t` from the eigen-expansion of `U`.
pub fn closed_form_coefficients(n: usize, t: u64) -> Result<Subspace3D> {
    let angle = phi(n)? * t as f64;
    let nf = n as f64;
    let root = (2.0 * nf - 3.0).sqrt();
    let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
    let denom = (2.0 * nf - 3.0) * nf.sqrt();
    let (sin, cos) = angle.sin_cos();
    Ok(Subspace3D {
        ab: ((nf - 1.0) * (cos + sin * root) + sign * (nf - 2.0)) / denom,
        ba: ((nf - 1.0) * (cos - sin * root) + sign * (nf - 2.0)) / denom,
        bb: (nf - 2.0).sqrt() * (2.0 * (nf - 1.0) * cos - sign) / denom,
    })
}

/// Probability at the marked vertex after `t` steps: `|c_ab|²`.
pub fn success_closed_form(n: usize, t: u64) -> Result<f64> {
    let c = closed_form_coefficients(n, t)?;
    Ok(c.ab * c.ab)
}

/// Probability of the arcs pointing into the marked vertex: `|c_ba|²`.
pub fn ba_probability_closed_form(n: usize, t: u64) -> Result<f64> {
    let c = closed_form_coefficients(n, t)?;
    Ok(c.ba * c.ba)
}

/// `π/(2φ)` before rounding.
pub fn optimal_time(n: usize) -> Result<f64> {
    Ok(PI / (2.0 * phi(n)?))
}

/// `π/(2φ)` rounded to the nearest even integer, ties upward.
pub fn optimal_steps(n: usize) -> Result<u64> {
    let half = optimal_time(n)? / 2.0;
    Ok(2 * (half + 0.5).floor() as u64)
}

/// Leading term `n(√(2n)+1)²/(2n-3)²` of the success probability at the optimal step.
pub fn success_at_optimum(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let lead = (2.0 * nf).sqrt() + 1.0;
    Ok(nf * lead * lead / ((2.0 * nf - 3.0) * (2.0 * nf - 3.0)))
}

/// Large-`n` step count `(π/(2√2))·√n`.
pub fn asymptotic_steps(n: usize) -> f64 {
    PI / (2.0 * 2f64.sqrt()) * (n as f64).sqrt()
}

/// Large-`n` total step count `(π/(2√2))·√n·log₂(1/eps)` for success `1 - eps`.
pub fn asymptotic_total_steps(n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    Ok(asymptotic_steps(n) * (1.0 / eps).log2())
}

/// Repeating the search until the failure probability drops to `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepetitionPlan {
    pub runs: u64,
    pub total_steps: f64,
}

pub fn repetition_plan(n: usize, eps: f64) -> Result<RepetitionPlan> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    let steps = optimal_steps(n)?;
    // the small slack keeps exact powers of two from rounding up an extra run
    let runs = ((1.0 / eps).log2() - 1e-12).ceil().max(1.0) as u64;
    Ok(RepetitionPlan {
        runs,
        total_steps: (runs * steps) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VertexReadout;
    use approx::assert_relative_eq;

    fn g(n: usize, a: usize) -> CompleteGraph {
        CompleteGraph::new(n, a).unwrap()
    }

    fn r(num: i64, den: i64) -> Ratio<i64> {
        Ratio::new(num, den)
    }

    #[test]
    fn oracle_on_uniform_negates_marked_block() {
        let graph = g(4, 2);
        let walk = CoinedWalk::new(&graph).unwrap();
        let mut amps = uniform_superposition_arcs(&graph).unwrap().into_vec();
        walk.apply_oracle(&mut amps).unwrap();
        let x = 1.0 / (2.0 * 3f64.sqrt());
        for (slot, a) in amps.iter().enumerate() {
            let expected = if (3..6).contains(&slot) { -x } else { x };
            assert!((a.re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn oracle_ignores_states_off_the_marked_vertex() {
        let graph = g(5, 3);
        let walk = CoinedWalk::new(&graph).unwrap();
        let mut amps: Vec<f64> = (0..20)
            .map(|k| if k / 4 == 2 { 0.0 } else { k as f64 * 0.1 })
            .collect();
        let before = amps.clone();
        walk.apply_oracle(&mut amps).unwrap();
        assert_eq!(amps, before);
    }

    #[test]
    fn shift_swaps_reverse_arcs() {
        let graph = g(4, 1);
        let walk = CoinedWalk::new(&graph).unwrap();
        let mut amps: Vec<f64> = (0..12).map(|k| k as f64).collect();
        walk.apply_shift(&mut amps).unwrap();
        // alpha_12 (slot 0) <-> alpha_21 (slot 3), alpha_34 (slot 8) <-> alpha_43 (slot 11)
        assert_eq!(amps[0], 3.0);
        assert_eq!(amps[3], 0.0);
        assert_eq!(amps[8], 11.0);
        assert_eq!(amps[11], 8.0);
        walk.apply_shift(&mut amps).unwrap();
        assert_eq!(amps, (0..12).map(|k| k as f64).collect::<Vec<_>>());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let walk = CoinedWalk::new(&g(4, 1)).unwrap();
        let mut amps = vec![0.0; 11];
        assert!(matches!(walk.step(&mut amps), Err(WalkError::Dimension(_))));
    }

    #[test]
    fn exact_first_three_steps_n4() {
        // amplitudes scaled by √3
        let walk = CoinedWalk::new(&g(4, 2)).unwrap();
        let mut amps = vec![r(1, 2); 12];
        walk.step(&mut amps).unwrap();
        assert_eq!(amps[0], r(-1, 2));
        assert_eq!(amps[3], r(1, 2));
        walk.step(&mut amps).unwrap();
        assert_eq!(&amps[3..6], &[r(5, 6); 3]);
        let p: Ratio<i64> = amps[3..6].iter().map(|x| x * x / r(3, 1)).sum();
        assert_eq!(p, r(25, 36));
        walk.step(&mut amps).unwrap();
        let p: Ratio<i64> = amps[3..6].iter().map(|x| x * x / r(3, 1)).sum();
        assert_eq!(p, r(1, 324));
    }

    #[test]
    fn float_steps_match_table_probabilities() {
        let graph = g(4, 2);
        let s1 = state_at(&graph, 1).unwrap();
        for v in 1..=4 {
            assert!((s1.vertex_probability(v).unwrap() - 0.25).abs() < 1e-15);
        }
        let x = 1.0 / (2.0 * 3f64.sqrt());
        assert!((s1.amplitude(1, 2).unwrap().re + x).abs() < 1e-15);
        assert!((s1.amplitude(2, 1).unwrap().re - x).abs() < 1e-15);
        let s2 = state_at(&graph, 2).unwrap();
        assert!((s2.amplitude(2, 1).unwrap().re - 5.0 / (6.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((s2.vertex_probability(2).unwrap() - 25.0 / 36.0).abs() < 1e-14);
        let s3 = state_at(&graph, 3).unwrap();
        assert!((s3.vertex_probability(2).unwrap() - 1.0 / 324.0).abs() < 1e-14);
    }

    #[test]
    fn explicit_operators_are_orthogonal_and_match_implicit() {
        for n in 3..=8 {
            let graph = g(n, 1 + (n * 7) % n);
            let ops = CoinedOperators::explicit(&graph).unwrap();
            let dim = n * (n - 1);
            let id = DenseMatrix::identity(dim);
            for m in [&ops.oracle, &ops.coin, &ops.shift] {
                assert!(m.adjoint().matmul(m).unwrap().max_abs_diff(&id).unwrap() <= 1e-12);
            }
            assert!(
                ops.shift
                    .matmul(&ops.shift)
                    .unwrap()
                    .max_abs_diff(&id)
                    .unwrap()
                    == 0.0
            );
            let walk = CoinedWalk::new(&graph).unwrap();
            let x: Vec<f64> = (0..dim)
                .map(|k| ((k * 31 % 17) as f64 - 8.0) / 10.0)
                .collect();
            let mut y = x.clone();
            walk.step(&mut y).unwrap();
            let u = ops.search_operator().unwrap();
            let expected = matvec(&u, &x).unwrap();
            for (a, b) in y.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
        assert!(CoinedOperators::explicit(&g(13, 1)).is_err());
    }

    #[test]
    fn oracles_agree_on_symmetric_marked_block() {
        let graph = g(6, 4);
        let walk = CoinedWalk::new(&graph).unwrap();
        let mut x: Vec<f64> = (0..30).map(|k| (k as f64).sin()).collect();
        x[15..20].fill(0.3);
        let mut q = x.clone();
        let mut qp = x.clone();
        walk.apply_oracle(&mut q).unwrap();
        walk.apply_phase_oracle(&mut qp).unwrap();
        for (a, b) in q.iter().zip(&qp) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn subspace_operator_maps_ab_to_minus_ba() {
        let u = subspace_operator(7).unwrap();
        assert_eq!(matvec(&u, &[1.0, 0.0, 0.0]).unwrap(), vec![0.0, -1.0, 0.0]);
    }

    #[test]
    fn subspace_examples() {
        let s = evolve_subspace(&g(4, 2), 2).unwrap();
        assert!((s[2].ab * s[2].ab - 25.0 / 36.0).abs() < 1e-14);
        for c in evolve_subspace(&g(9, 2), 40).unwrap() {
            assert!((c.squared_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_of_full_state_matches_subspace() {
        let graph = g(7, 5);
        let sub = evolve_subspace(&graph, 9).unwrap();
        for (t, c) in sub.iter().enumerate() {
            let p = Subspace3D::project(&graph, &state_at(&graph, t as u64).unwrap());
            assert!((p.ab - c.ab).abs() < 1e-12);
            assert!((p.ba - c.ba).abs() < 1e-12);
            assert!((p.bb - c.bb).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(success_closed_form(4, 0).unwrap(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(
            success_closed_form(4, 2).unwrap(),
            25.0 / 36.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            success_closed_form(4, 3).unwrap(),
            1.0 / 324.0,
            epsilon = 1e-14
        );
        // confirmed by brute-force arc-space simulation
        assert!((success_closed_form(100, 12).unwrap() - 0.5501624868249708).abs() < 1e-12);
        assert!(success_closed_form(2, 1).is_err());
    }

    #[test]
    fn ba_probability_examples() {
        for n in 3..10 {
            assert_relative_eq!(
                ba_probability_closed_form(n, 0).unwrap(),
                1.0 / n as f64,
                epsilon = 1e-14
            );
        }
        assert_relative_eq!(
            ba_probability_closed_form(4, 1).unwrap(),
            0.25,
            epsilon = 1e-14
        );
        // the gap at the optimum shrinks like 1/√n with a constant near √2
        for n in [100, 10_000, 40_000] {
            let t = optimal_steps(n).unwrap();
            let gap = (success_closed_form(n, t).unwrap()
                - ba_probability_closed_form(n, t).unwrap())
            .abs();
            assert!(gap * (n as f64).sqrt() <= 1.5, "n={n} gap={gap}");
        }
    }

    #[test]
    fn optimal_steps_examples() {
        assert!((optimal_time(4).unwrap() - 1.8676).abs() < 1e-4);
        assert_eq!(optimal_steps(4).unwrap(), 2);
        assert!((optimal_time(100).unwrap() - 11.04).abs() < 1e-2);
        assert_eq!(optimal_steps(100).unwrap(), 12);
        assert_eq!(optimal_steps(3).unwrap(), 2);
        let n = 1_000_000;
        let ratio = optimal_steps(n).unwrap() as f64 / asymptotic_steps(n);
        assert!((ratio - 1.0).abs() < 1e-3);
        for n in 3..200 {
            assert_eq!(optimal_steps(n).unwrap() % 2, 0);
        }
    }

    #[test]
    fn success_at_optimum_examples() {
        assert!((success_at_optimum(100).unwrap() - 0.59).abs() <= 0.005);
        assert!((success_at_optimum(1_000_000).unwrap() - 0.5).abs() < 2e-3);
        // The leading term overshoots 1 at N = 4; the dropped O(1/N) part is not small there.
        let lead = success_at_optimum(4).unwrap();
        assert!((lead - 2.3450966799187807).abs() < 1e-12);
        assert!(lead > success_closed_form(4, 2).unwrap());
    }

    #[test]
    fn repetition_plan_examples() {
        assert_eq!(repetition_plan(100, 0.5).unwrap().runs, 1);
        assert_eq!(repetition_plan(100, 0.125).unwrap().runs, 3);
        let plan = repetition_plan(100, 0.25).unwrap();
        assert_eq!(plan.runs, 2);
        assert_eq!(plan.total_steps, 24.0);
        assert!(repetition_plan(100, 1.0).is_err());
        assert!(repetition_plan(100, 0.0).is_err());
    }

    #[test]
    fn phi_identities() {
        for n in 3..64 {
            let p = phi(n).unwrap();
            let nf = n as f64;
            assert!((p.cos() - (nf - 2.0) / (nf - 1.0)).abs() < 1e-14);
            assert!((p.sin() - (2.0 * nf - 3.0).sqrt() / (nf - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn amplitudes_stay_real_and_normalized() {
        let graph = g(9, 4);
        let walk = CoinedWalk::new(&graph).unwrap();
        let mut amps = uniform_superposition_arcs(&graph).unwrap().into_vec();
        for _ in 0..50 {
            walk.step(&mut amps).unwrap();
            assert!(amps.iter().all(|a| a.im.abs() <= 1e-14));
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() <= 1e-12);
        }
    }
}
