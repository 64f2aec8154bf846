//! Comparisons across walks and the summary table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::{qw_continuous, qw_discrete, rw_continuous, rw_discrete};

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(WalkError::Instance(format!(
            "the random-walk gap needs N >= 3, got N = {n}"
        )));
    }
    Ok(())
}

/// `ln((n-2)/(n-1))`, negative.
fn log_ratio(n: usize) -> f64 {
    (-1.0 / (n as f64 - 1.0)).ln_1p()
}

/// Gap between the two random walks: `e^{-t/n} - ((n-2)/(n-1))^t`.
pub fn delta(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    if !(t >= 0.0) {
        return Err(WalkError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    Ok((-t / n as f64).exp() - (t * log_ratio(n)).exp())
}

/// `dΔ/dt = -e^{-t/n}/n - ((n-2)/(n-1))^t·ln((n-2)/(n-1))`.
pub fn delta_rate(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let lr = log_ratio(n);
    Ok(-(-t / nf).exp() / nf - (t * lr).exp() * lr)
}

/// Closed-form maximizer `n·ln[n·ln((n-1)/(n-2))] / (n·ln((n-1)/(n-2)) - 1)`.
pub fn delta_argmax(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let x = nf * (1.0 / (nf - 2.0)).ln_1p();
    let xm1 = x - 1.0;
    Ok(nf * xm1.ln_1p() / xm1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub n: usize,
    pub t_star: f64,
    pub delta_max: f64,
    /// Leading term `3/(2e·n)`.
    pub asymptote: f64,
}

pub fn delta_max(n: usize) -> Result<DeltaReport> {
    let t_star = delta_argmax(n)?;
    Ok(DeltaReport {
        n,
        t_star,
        delta_max: delta(n, t_star)?,
        asymptote: 3.0 / (2.0 * std::f64::consts::E * n as f64),
    })
}

/// Large-`n` success curves `(½·sin²(√2·t/√n), sin²(t/√n))` of the coined and
/// continuous-time quantum walks.
pub fn quantum_asymptotic_comparison(n: usize, t: f64) -> Result<(f64, f64)> {
    check_n(n)?;
    let root = (n as f64).sqrt();
    let coined = 0.5 * (2f64.sqrt() * t / root).sin().powi(2);
    let continuous = (t / root).sin().powi(2);
    Ok((coined, continuous))
}

/// The four search dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    RwDiscrete,
    RwContinuous,
    QwDiscrete,
    QwContinuous,
}

impl WalkKind {
    pub const ALL: [WalkKind; 4] = [
        WalkKind::RwDiscrete,
        WalkKind::RwContinuous,
        WalkKind::QwDiscrete,
        WalkKind::QwContinuous,
    ];

    pub fn label(self) -> &'static str {
        match self {
            WalkKind::RwDiscrete => "rw-discrete",
            WalkKind::RwContinuous => "rw-continuous",
            WalkKind::QwDiscrete => "qw-discrete",
            WalkKind::QwContinuous => "qw-continuous",
        }
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, WalkKind::RwContinuous | WalkKind::QwContinuous)
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for WalkKind {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        WalkKind::ALL
            .into_iter()
            .find(|w| w.label() == s)
            .ok_or_else(|| WalkError::Domain(format!("unknown walk '{s}'")))
    }
}

/// A table entry: a number, or text for labels and unavailable values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    fn from_result(r: Result<f64>, unavailable: &str) -> Self {
        match r {
            Ok(x) => Cell::Number(x),
            Err(e) if unavailable.is_empty() => Cell::Text(e.to_string()),
            Err(_) => Cell::text(unavailable),
        }
    }
}

/// One column of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkColumn {
    pub walk: WalkKind,
    pub oracle: Cell,
    pub vector_space: Cell,
    pub subspace: Cell,
    pub probability: Cell,
    pub runtime: Cell,
    pub asymptotic_probability: Cell,
    pub asymptotic_runtime: Cell,
    /// Only the coined walk lists an amplified (repeated) variant.
    pub amplified_probability: Option<Cell>,
    pub amplified_runtime: Option<Cell>,
    pub overall_runtime: Cell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub n: usize,
    pub epsilon: f64,
    pub columns: Vec<WalkColumn>,
}

/// Row names in display order.
pub const TABLE_ROWS: [&str; 10] = [
    "Oracle",
    "Vector Space",
    "Subspace",
    "Probability",
    "Runtime",
    "Asymptotic Probability",
    "Asymptotic Runtime",
    "Amplified Probability",
    "Amplified Runtime",
    "Overall Runtime",
];

pub const COINED_MARKER: &str = "requires N >= 3";

impl SummaryTable {
    pub fn column(&self, walk: WalkKind) -> Option<&WalkColumn> {
        self.columns.iter().find(|c| c.walk == walk)
    }

    /// Cells of row `name`, one per column; `None` for an unknown row.
    pub fn row(&self, name: &str) -> Option<Vec<Option<Cell>>> {
        let pick = |c: &WalkColumn| -> Option<Cell> {
            match name {
                "Oracle" => Some(c.oracle.clone()),
                "Vector Space" => Some(c.vector_space.clone()),
                "Subspace" => Some(c.subspace.clone()),
                "Probability" => Some(c.probability.clone()),
                "Runtime" => Some(c.runtime.clone()),
                "Asymptotic Probability" => Some(c.asymptotic_probability.clone()),
                "Asymptotic Runtime" => Some(c.asymptotic_runtime.clone()),
                "Amplified Probability" => c.amplified_probability.clone(),
                "Amplified Runtime" => c.amplified_runtime.clone(),
                "Overall Runtime" => Some(c.overall_runtime.clone()),
                _ => None,
            }
        };
        TABLE_ROWS
            .contains(&name)
            .then(|| self.columns.iter().map(pick).collect())
    }
}

/// Assembles every cell from the owning module's operations.
pub fn summary_table(n: usize, eps: f64) -> Result<SummaryTable> {
    if n < 2 {
        return Err(WalkError::Instance(format!(
            "the complete graph needs at least 2 vertices, got N = {n}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WalkError::Domain(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    let target = Cell::Number(1.0 - eps);

    let rw_discrete = WalkColumn {
        walk: WalkKind::RwDiscrete,
        oracle: Cell::text("Absorbing"),
        vector_space: Cell::text("R^N"),
        subspace: Cell::text("R^2"),
        probability: target.clone(),
        runtime: Cell::from_result(rw_discrete::runtime_for_epsilon(n, eps), ""),
        asymptotic_probability: target.clone(),
        asymptotic_runtime: Cell::from_result(rw_discrete::asymptotic_runtime(n, eps), ""),
        amplified_probability: None,
        amplified_runtime: None,
        overall_runtime: Cell::text("O(N)"),
    };

    let rw_continuous = WalkColumn {
        walk: WalkKind::RwContinuous,
        oracle: Cell::text("Absorbing"),
        vector_space: Cell::text("R^N"),
        subspace: Cell::text("R^2"),
        probability: target.clone(),
        runtime: Cell::from_result(rw_continuous::runtime_for_epsilon(n, eps), ""),
        asymptotic_probability: target.clone(),
        asymptotic_runtime: Cell::from_result(rw_continuous::asymptotic_runtime(n, eps), ""),
        amplified_probability: None,
        amplified_runtime: None,
        overall_runtime: Cell::text("O(N)"),
    };

    let coined = |r: Result<f64>| Cell::from_result(r, COINED_MARKER);
    let qw_discrete = WalkColumn {
        walk: WalkKind::QwDiscrete,
        oracle: Cell::text("Phase"),
        vector_space: Cell::text("C^N (x) C^(N-1) -> R^N (x) R^(N-1)"),
        subspace: Cell::text("C^3 -> R^3"),
        probability: coined(qw_discrete::success_at_optimum(n)),
        runtime: coined(qw_discrete::optimal_steps(n).map(|s| s as f64)),
        asymptotic_probability: coined(qw_discrete::phi(n).map(|_| 0.5)),
        asymptotic_runtime: coined(qw_discrete::phi(n).map(|_| qw_discrete::asymptotic_steps(n))),
        amplified_probability: Some(coined(qw_discrete::phi(n).map(|_| 1.0 - eps))),
        amplified_runtime: Some(coined(
            qw_discrete::phi(n).and_then(|_| qw_discrete::asymptotic_total_steps(n, eps)),
        )),
        overall_runtime: Cell::text("O(sqrt(N))"),
    };

    let qw_continuous = WalkColumn {
        walk: WalkKind::QwContinuous,
        oracle: Cell::text("Hamiltonian Phase"),
        vector_space: Cell::text("C^N"),
        subspace: Cell::text("C^2"),
        probability: Cell::from_result(
            qw_continuous::runtime(n).and_then(|t| qw_continuous::success_closed_form(n, t)),
            "",
        ),
        runtime: Cell::from_result(qw_continuous::runtime(n), ""),
        asymptotic_probability: Cell::Number(1.0),
        asymptotic_runtime: Cell::from_result(qw_continuous::runtime(n), ""),
        amplified_probability: None,
        amplified_runtime: None,
        overall_runtime: Cell::text("O(sqrt(N))"),
    };

    Ok(SummaryTable {
        n,
        epsilon: eps,
        columns: vec![rw_discrete, rw_continuous, qw_discrete, qw_continuous],
    })
}
