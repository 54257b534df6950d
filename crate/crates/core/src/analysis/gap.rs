//! Integrality gap of the level-`k` relaxations of the chipped hypercube along `ē`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::polytopes::{chipped, integer_hull_chipped, max_linear};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapResult {
    pub n: usize,
    pub k: usize,
    pub rho: f64,
    pub direction: Vec<f64>,
    pub gap: f64,
    /// LP maxima over the relaxation and the integer hull, when computed directly.
    pub numerator: Option<f64>,
    pub denominator: Option<f64>,
}

/// `1 + (n-k)(1-ρ) / ((n-1)(n-k+kρ))` for `n >= 2`, `ρ ∈ (0, 1)`, `k <= n`.
pub fn gap_chipped(n: usize, k: usize, rho: f64) -> Result<GapResult> {
    if n < 2 || k > n || !(rho > 0.0 && rho < 1.0) {
        return Err(invalid(format!("need n >= 2, k <= n, 0 < rho < 1; got n = {n}, k = {k}, rho = {rho}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let gap = 1.0 + (nf - kf) * (1.0 - rho) / ((nf - 1.0) * (nf - kf + kf * rho));
    Ok(GapResult { n, k, rho, direction: vec![1.0; n], gap, numerator: None, denominator: None })
}

/// Level-0 gap from two LPs: the chipped description and its integer hull.
pub fn gap_chipped_lp(n: usize, rho: f64) -> Result<GapResult> {
    let mut r = gap_chipped(n, 0, rho)?;
    let c = vec![1.0; n];
    let num = max_linear(&chipped(n, rho)?, &c)?;
    let den = max_linear(&integer_hull_chipped(n, rho)?, &c)?;
    r.gap = num / den;
    r.numerator = Some(num);
    r.denominator = Some(den);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(gap_chipped(10, 10, 0.5).unwrap().gap, 1.0);
        assert!((gap_chipped(10, 5, 0.5).unwrap().gap - (1.0 + 2.5 / 67.5)).abs() < 1e-15);
        let lp = gap_chipped_lp(10, 0.5).unwrap();
        assert!((lp.gap - 19.0 / 18.0).abs() < 1e-9);
        assert!((gap_chipped(10, 0, 0.5).unwrap().gap - 19.0 / 18.0).abs() < 1e-15);
        assert!(gap_chipped(3, 4, 0.5).is_err());
        assert!(gap_chipped(3, 1, 1.5).is_err());
    }

    #[test]
    fn strictly_decreasing_in_level() {
        for n in 2..=10 {
            for rho in [0.01, 0.3, 0.9] {
                let g: Vec<f64> = (0..=n).map(|k| gap_chipped(n, k, rho).unwrap().gap).collect();
                assert!(g.windows(2).all(|w| w[0] > w[1]));
                assert!(g[..n].iter().all(|&v| v > 1.0));
            }
        }
    }
}
