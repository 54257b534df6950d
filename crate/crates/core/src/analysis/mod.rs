//! Numerical studies built on the operators: ranks, thresholds and gaps, with
//! figure tables and identity checks on top.

mod figures;
mod gap;
mod identities;
mod rank;
mod thresholds;

use serde::Serialize;

pub use figures::*;
pub use gap::*;
pub use identities::*;
pub use rank::*;
pub use thresholds::*;

use crate::error::Result;
use crate::symmat::{eigenvalues, SymMatrix};

/// How a rank value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    Formula,
    PsdScan,
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankValue {
    Exact(usize),
    Bounds { lo: usize, hi: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResult {
    pub family: &'static str,
    pub n: usize,
    pub rho: f64,
    pub operator: &'static str,
    pub rank: RankValue,
    pub method: RankMethod,
    /// Smallest eigenvalue of the level-`k` test matrix, `k = 1, 2, ...`, for scans.
    pub lambda_min: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub n: usize,
    pub which: &'static str,
    pub mode: &'static str,
    pub value: f64,
    /// Verified bracket: the predicate holds at `lo` and fails at `hi`.
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    /// Maximizing `θ` for the chipped threshold.
    pub theta: Option<f64>,
}

/// Exact-sign PSD test used by every scan: `λ_min >= 0`.
pub(crate) fn psd_exact(m: &SymMatrix) -> Result<(bool, f64)> {
    let e = eigenvalues(m)?;
    Ok((e.min >= 0.0, e.min))
}

/// Shrinks `[lo, hi]` with `pred(lo)` true and `pred(hi)` false until `done`.
pub(crate) fn bisect(
    mut lo: f64,
    mut hi: f64,
    mut pred: impl FnMut(f64) -> Result<bool>,
    done: impl Fn(f64, f64) -> bool,
) -> Result<(f64, f64)> {
    while !done(lo, hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
