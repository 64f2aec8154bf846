//! Problem instances, walk states and Born-rule readout.
//!
//! Vertex labels are 1-based in every public signature and 0-based in storage.
//! The conversion happens in [`CompleteGraph::vertex_index`] and [`arc_index`].

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Tolerance for the normalization of a freshly built state.
pub const STATE_TOL: f64 = 1e-10;
/// Allowed drift of total probability or squared norm along an evolution.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// The complete graph on `n` vertices with one marked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompleteGraph {
    n: usize,
    marked: usize,
}

impl CompleteGraph {
    /// `marked` is a 1-based label.
    pub fn new(n: usize, marked: usize) -> Result<Self> {
        if n < 2 {
            return Err(WalkError::Instance(format!(
                "the complete graph needs at least 2 vertices, got N = {n}"
            )));
        }
        if marked == 0 || marked > n {
            return Err(WalkError::Instance(format!(
                "marked vertex {marked} is outside 1..={n}"
            )));
        }
        Ok(Self { n, marked })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based label of the marked vertex.
    pub fn marked(&self) -> usize {
        self.marked
    }

    pub(crate) fn marked_index(&self) -> usize {
        self.marked - 1
    }

    /// Same graph, different marked vertex.
    pub fn with_marked(&self, marked: usize) -> Result<Self> {
        Self::new(self.n, marked)
    }

    /// Converts a 1-based label into a storage index.
    pub fn vertex_index(&self, vertex: usize) -> Result<usize> {
        check_vertex(self.n, vertex)
    }

    /// The coined walk needs two distinct unmarked vertices to span `|bb⟩`.
    pub fn require_coined(&self) -> Result<()> {
        if self.n < 3 {
            return Err(WalkError::Instance(format!(
                "the coined quantum walk requires N >= 3, got N = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Number of arcs `n(n-1)`.
    pub fn arc_count(&self) -> usize {
        self.n * (self.n - 1)
    }
}

fn check_vertex(n: usize, vertex: usize) -> Result<usize> {
    if vertex == 0 || vertex > n {
        Err(WalkError::Index { vertex, n })
    } else {
        Ok(vertex - 1)
    }
}

/// Storage slot of the arc `from -> to` (1-based labels).
///
/// Arcs leaving a vertex are ordered by destination, lowest label first.
pub fn arc_index(n: usize, from: usize, to: usize) -> Result<usize> {
    let i = check_vertex(n, from)?;
    let j = check_vertex(n, to)?;
    if i == j {
        return Err(WalkError::Domain(format!(
            "the complete graph has no self-loop at vertex {from}"
        )));
    }
    Ok(arc_slot(n, i, j))
}

/// Inverse of [`arc_index`]: returns the 1-based `(from, to)` pair.
pub fn arc_endpoints(n: usize, slot: usize) -> Result<(usize, usize)> {
    if n < 2 || slot >= n * (n - 1) {
        return Err(WalkError::Dimension(format!(
            "arc slot {slot} does not exist for N = {n}"
        )));
    }
    let i = slot / (n - 1);
    let d = slot % (n - 1);
    let j = if d < i { d } else { d + 1 };
    Ok((i + 1, j + 1))
}

#[inline]
pub(crate) fn arc_slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j);
    i * (n - 1) + if j < i { j } else { j - 1 }
}

/// Born-rule readout shared by every state type.
pub trait VertexReadout {
    fn vertex_count(&self) -> usize;

    /// Probability of finding the walker at `vertex` (1-based).
    fn vertex_probability(&self, vertex: usize) -> Result<f64>;

    /// Total probability or squared norm.
    fn conserved(&self) -> f64;

    fn vertex_probabilities(&self) -> Vec<f64> {
        (1..=self.vertex_count())
            .map(|v| self.vertex_probability(v).unwrap_or(0.0))
            .collect()
    }
}

/// Probability distribution over vertices (random walks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityState {
    probs: Vec<f64>,
}

impl ProbabilityState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(WalkError::Dimension(format!(
                "a distribution needs at least 2 entries, got {}",
                probs.len()
            )));
        }
        if let Some((v, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < -1e-12)
        {
            return Err(WalkError::Numeric(format!(
                "probability {p} at vertex {} is negative or not finite",
                v + 1
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(WalkError::Numeric(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl VertexReadout for ProbabilityState {
    fn vertex_count(&self) -> usize {
        self.probs.len()
    }

    fn vertex_probability(&self, vertex: usize) -> Result<f64> {
        let v = check_vertex(self.probs.len(), vertex)?;
        Ok(self.probs[v])
    }

    fn conserved(&self) -> f64 {
        self.probs.iter().sum()
    }
}

fn squared_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_normalized(amps: &[Complex64]) -> Result<()> {
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(WalkError::Numeric("amplitude is not finite".into()));
    }
    let norm = squared_norm(amps);
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(WalkError::Numeric(format!("squared norm is {norm}, not 1")));
    }
    Ok(())
}

/// Superposition over vertices (continuous-time quantum walk).
#[derive(Debug, Clone, PartialEq)]
pub struct VertexAmplitudeState {
    amps: Vec<Complex64>,
}

impl VertexAmplitudeState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(WalkError::Dimension(format!(
                "a vertex state needs at least 2 amplitudes, got {}",
                amps.len()
            )));
        }
        check_normalized(&amps)?;
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.amps
    }
}

impl VertexReadout for VertexAmplitudeState {
    fn vertex_count(&self) -> usize {
        self.amps.len()
    }

    fn vertex_probability(&self, vertex: usize) -> Result<f64> {
        let v = check_vertex(self.amps.len(), vertex)?;
        Ok(self.amps[v].norm_sqr())
    }

    fn conserved(&self) -> f64 {
        squared_norm(&self.amps)
    }
}

/// Superposition over the `n(n-1)` arcs (coined quantum walk).
#[derive(Debug, Clone, PartialEq)]
pub struct ArcState {
    n: usize,
    amps: Vec<Complex64>,
}

impl ArcState {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n < 2 || amps.len() != n * (n - 1) {
            return Err(WalkError::Dimension(format!(
                "an arc state for N = {n} needs {} amplitudes, got {}",
                n.saturating_mul(n.saturating_sub(1)),
                amps.len()
            )));
        }
        check_normalized(&amps)?;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of the arc `from -> to` (1-based labels).
    pub fn amplitude(&self, from: usize, to: usize) -> Result<Complex64> {
        Ok(self.amps[arc_index(self.n, from, to)?])
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.amps
    }
}

impl VertexReadout for ArcState {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn vertex_probability(&self, vertex: usize) -> Result<f64> {
        let v = check_vertex(self.n, vertex)?;
        let block = &self.amps[v * (self.n - 1)..(v + 1) * (self.n - 1)];
        Ok(block.iter().map(|a| a.norm_sqr()).sum())
    }

    fn conserved(&self) -> f64 {
        squared_norm(&self.amps)
    }
}

/// `1/n` on every vertex.
pub fn uniform_distribution(g: &CompleteGraph) -> ProbabilityState {
    let n = g.n();
    ProbabilityState {
        probs: vec![1.0 / n as f64; n],
    }
}

/// `1/√n` on every vertex.
pub fn uniform_superposition_vertices(g: &CompleteGraph) -> VertexAmplitudeState {
    let n = g.n();
    VertexAmplitudeState {
        amps: vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n],
    }
}

/// `1/√(n(n-1))` on every arc. Requires `n >= 3`.
pub fn uniform_superposition_arcs(g: &CompleteGraph) -> Result<ArcState> {
    g.require_coined()?;
    let count = g.arc_count();
    Ok(ArcState {
        n: g.n(),
        amps: vec![Complex64::new(1.0 / (count as f64).sqrt(), 0.0); count],
    })
}

/// Collapses `state` to a single vertex. The same seed always yields the same vertex.
pub fn sample_vertex<S: VertexReadout + ?Sized>(state: &S, seed: u64) -> Result<usize> {
    let weights: Vec<f64> = state
        .vertex_probabilities()
        .into_iter()
        .map(|p| p.max(0.0))
        .collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| WalkError::Numeric(format!("cannot sample from state: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(dist.sample(&mut rng) + 1)
}

/// One point of a time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub success: f64,
    pub conserved: f64,
}

/// Success probability and conserved quantity sampled along an evolution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvolutionRecord {
    samples: Vec<Sample>,
}

impl EvolutionRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            samples: Vec::with_capacity(capacity),
        }
    }

    /// Appends a sample; times must increase strictly and the conserved
    /// quantity must stay within [`CONSERVATION_TOL`] of 1.
    pub fn push(&mut self, t: f64, success: f64, conserved: f64) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(t > last.t) {
                return Err(WalkError::Contract(format!(
                    "sample time {t} does not follow {}",
                    last.t
                )));
            }
        }
        if !success.is_finite() || (conserved - 1.0).abs() > CONSERVATION_TOL {
            return Err(WalkError::Numeric(format!(
                "conserved quantity drifted to {conserved} at t = {t}"
            )));
        }
        self.samples.push(Sample {
            t,
            success,
            conserved,
        });
        Ok(())
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn successes(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.success).collect()
    }
}

/// Sample times `0, dt, 2dt, …` up to `t_max`, with `t_max` itself appended
/// when it does not fall on the grid.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(WalkError::Domain(format!("dt must be positive, got {dt}")));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(WalkError::Domain(format!(
            "t_max must be nonnegative, got {t_max}"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let last = grid[grid.len() - 1];
    if t_max - last > 1e-9 * dt {
        grid.push(t_max);
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rejects_degenerate_instances() {
        assert!(matches!(
            CompleteGraph::new(1, 1),
            Err(WalkError::Instance(_))
        ));
        assert!(matches!(
            CompleteGraph::new(4, 0),
            Err(WalkError::Instance(_))
        ));
        assert!(matches!(
            CompleteGraph::new(4, 5),
            Err(WalkError::Instance(_))
        ));
        let g = CompleteGraph::new(2, 2).unwrap();
        assert!(g.require_coined().is_err());
        assert!(uniform_superposition_arcs(&g).is_err());
    }

    #[test]
    fn uniform_distribution_examples() {
        let p = uniform_distribution(&CompleteGraph::new(4, 2).unwrap());
        assert_eq!(p.probs(), &[0.25; 4]);
        let p = uniform_distribution(&CompleteGraph::new(2, 1).unwrap());
        assert_eq!(p.probs(), &[0.5; 2]);
        let p = uniform_distribution(&CompleteGraph::new(10, 1).unwrap());
        assert!(p.probs().iter().all(|&x| (x - 0.1).abs() < 1e-15));
        assert_relative_eq!(p.conserved(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_vertex_superposition() {
        let s = uniform_superposition_vertices(&CompleteGraph::new(4, 1).unwrap());
        for v in 1..=4 {
            assert_eq!(s.amps()[v - 1], Complex64::new(0.5, 0.0));
            assert_relative_eq!(s.vertex_probability(v).unwrap(), 0.25);
        }
        let s = uniform_superposition_vertices(&CompleteGraph::new(9, 1).unwrap());
        assert!(s.amps().iter().all(|a| (a.re - 1.0 / 3.0).abs() < 1e-15));
        assert_relative_eq!(s.conserved(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_arc_superposition() {
        let s = uniform_superposition_arcs(&CompleteGraph::new(4, 2).unwrap()).unwrap();
        assert_eq!(s.amps().len(), 12);
        let expected = 1.0 / (2.0 * 3f64.sqrt());
        assert!(s.amps().iter().all(|a| (a.re - expected).abs() < 1e-15));
        assert_relative_eq!(expected, 0.288675, epsilon = 1e-6);
        for v in 1..=4 {
            assert_relative_eq!(s.vertex_probability(v).unwrap(), 0.25, epsilon = 1e-15);
        }
        let s = uniform_superposition_arcs(&CompleteGraph::new(3, 1).unwrap()).unwrap();
        assert!(s
            .amps()
            .iter()
            .all(|a| (a.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn arc_index_follows_lowest_destination_first() {
        // alpha_12, alpha_13, alpha_14, alpha_21, alpha_23, ...
        let order = [
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 1),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (3, 4),
            (4, 1),
            (4, 2),
            (4, 3),
        ];
        for (slot, &(i, j)) in order.iter().enumerate() {
            assert_eq!(arc_index(4, i, j).unwrap(), slot);
            assert_eq!(arc_endpoints(4, slot).unwrap(), (i, j));
        }
        assert!(arc_index(4, 2, 2).is_err());
        assert!(matches!(arc_index(4, 5, 1), Err(WalkError::Index { .. })));
    }

    #[test]
    fn arc_index_is_a_bijection_up_to_ten_vertices() {
        for n in 2..=10 {
            let mut seen = vec![false; n * (n - 1)];
            for i in 1..=n {
                for j in (1..=n).filter(|&j| j != i) {
                    let slot = arc_index(n, i, j).unwrap();
                    // 1-based formula
                    let formula = (i - 1) * (n - 1) + if j < i { j - 1 } else { j - 2 };
                    assert_eq!(slot, formula);
                    assert!(!seen[slot]);
                    seen[slot] = true;
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn readout_rejects_out_of_range_vertices() {
        let g = CompleteGraph::new(4, 1).unwrap();
        let p = uniform_distribution(&g);
        assert!(matches!(
            p.vertex_probability(0),
            Err(WalkError::Index { .. })
        ));
        assert!(matches!(
            p.vertex_probability(5),
            Err(WalkError::Index { .. })
        ));
        let s = uniform_superposition_arcs(&g).unwrap();
        assert!(s.vertex_probability(5).is_err());
    }

    #[test]
    fn state_constructors_validate() {
        assert!(ProbabilityState::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityState::new(vec![1.1, -0.1]).is_err());
        assert!(VertexAmplitudeState::new(vec![Complex64::new(1.0, 0.0); 2]).is_err());
        assert!(ArcState::new(3, vec![Complex64::new(1.0, 0.0); 5]).is_err());
    }

    #[test]
    fn time_grid_appends_off_grid_endpoint() {
        assert_eq!(time_grid(4.0, 4.0).unwrap(), vec![0.0, 4.0]);
        assert_eq!(time_grid(1.0, 0.4).unwrap(), vec![0.0, 0.4, 0.8, 1.0]);
        assert_eq!(time_grid(0.0, 1.0).unwrap(), vec![0.0]);
        assert!(time_grid(1.0, 0.0).is_err());
        assert!(time_grid(-1.0, 1.0).is_err());
    }

    #[test]
    fn record_enforces_increasing_time_and_conservation() {
        let mut r = EvolutionRecord::new();
        r.push(0.0, 0.25, 1.0).unwrap();
        assert!(r.push(0.0, 0.25, 1.0).is_err());
        assert!(r.push(1.0, 0.25, 1.1).is_err());
        r.push(1.0, 0.5, 1.0 + 1e-12).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn sampling_is_reproducible_and_respects_support() {
        let p = ProbabilityState::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(sample_vertex(&p, 7).unwrap(), 2);
        let g = CompleteGraph::new(8, 3).unwrap();
        let u = uniform_distribution(&g);
        let a = sample_vertex(&u, 42).unwrap();
        assert_eq!(a, sample_vertex(&u, 42).unwrap());
        assert!((1..=8).contains(&a));
    }

    proptest! {
        #[test]
        fn uniform_states_sum_to_one(n in 3usize..60, marked_seed in 0usize..1000) {
            let g = CompleteGraph::new(n, 1 + marked_seed % n).unwrap();
            let states: Vec<Box<dyn VertexReadout>> = vec![
                Box::new(uniform_distribution(&g)),
                Box::new(uniform_superposition_vertices(&g)),
                Box::new(uniform_superposition_arcs(&g).unwrap()),
            ];
            for s in states {
                let total: f64 = s.vertex_probabilities().iter().sum();
                prop_assert!((total - 1.0).abs() <= 1e-10);
                prop_assert!((s.conserved() - 1.0).abs() <= 1e-10);
            }
        }
    }
}
