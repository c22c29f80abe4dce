//! Report assembly and rendering: JSON summary, CSV residual dump and a
//! plain-text table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::{Suite, SuiteConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub suite: Suite,
    pub anchor: String,
    pub samples: usize,
    /// `None` when the check errored before producing residuals.
    pub max_residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub model: String,
    pub dim: usize,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
}

/// Residual counts in decade bins: `bins[k]` counts residuals in
/// `[10^(lo+k), 10^(lo+k+1))`; exact zeros and non-finite values are
/// counted apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lowest_decade: i32,
    pub bins: Vec<usize>,
    pub zeros: usize,
    pub non_finite: usize,
}

impl Histogram {
    pub fn of(residuals: &[f64]) -> Self {
        let mut zeros = 0;
        let mut non_finite = 0;
        let mut decades = Vec::with_capacity(residuals.len());
        for &r in residuals {
            if !r.is_finite() {
                non_finite += 1;
            } else if r == 0.0 {
                zeros += 1;
            } else {
                decades.push(r.abs().log10().floor() as i32);
            }
        }
        let lo = decades.iter().copied().min().unwrap_or(0);
        let hi = decades.iter().copied().max().unwrap_or(-1);
        let mut bins = vec![0; (hi - lo + 1).max(0) as usize];
        for d in decades {
            bins[(d - lo) as usize] += 1;
        }
        Histogram { lowest_decade: lo, bins, zeros, non_finite }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub checks: Vec<CheckOutcome>,
    pub histograms: BTreeMap<String, Histogram>,
    pub summary: Summary,
    #[serde(skip)]
    pub residuals: Vec<(String, Vec<f64>)>,
}

impl Report {
    pub fn build(cfg: &SuiteConfig, results: Vec<(CheckOutcome, Vec<f64>)>, skipped: Vec<String>) -> Self {
        let (name, dim) = match cfg.model {
            ptolemy_core::Model::Euclidean { dim } => ("euclidean", dim),
            ptolemy_core::Model::Heisenberg { m } => ("heisenberg", m),
        };
        let meta = Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            model: name.to_string(),
            dim,
            suites: cfg.suites.clone(),
            samples: cfg.samples,
            seed: cfg.seed,
            tol: cfg.tol,
        };
        let mut checks = Vec::with_capacity(results.len());
        let mut histograms = BTreeMap::new();
        let mut residuals = Vec::with_capacity(results.len());
        for (c, r) in results {
            histograms.insert(c.id.clone(), Histogram::of(&r));
            residuals.push((c.id.clone(), r));
            checks.push(c);
        }
        let summary = Summary {
            total: checks.len(),
            passed: checks.iter().filter(|c| c.pass).count(),
            failed: checks.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect(),
            skipped,
        };
        Report { meta, checks, histograms, summary, residuals }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per residual: `id,index,residual`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,index,residual\n");
        for (id, rs) in &self.residuals {
            for (i, r) in rs.iter().enumerate() {
                writeln!(s, "{id},{i},{r:e}").unwrap();
            }
        }
        s
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let m = &self.meta;
        writeln!(s, "model {} dim {}  samples {}  seed {:#x}", m.model, m.dim, m.samples, m.seed).unwrap();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let max = match (c.max_residual, &c.error) {
                (_, Some(e)) => format!("error: {e}"),
                (Some(v), None) => format!("{v:.3e} (tol {:.0e})", c.tol),
                (None, None) => "-".to_string(),
            };
            let time = c.seconds.map(|t| format!("  {t:.3}s")).unwrap_or_default();
            writeln!(s, "{status} {:width$}  n={:<7} {max}{time}", c.id, c.samples).unwrap();
        }
        for id in &self.summary.skipped {
            writeln!(s, "SKIP {id:width$}  not defined for this model").unwrap();
        }
        writeln!(s, "{}/{} passed", self.summary.passed, self.summary.total).unwrap();
        s
    }
}
