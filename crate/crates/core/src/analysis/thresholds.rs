//! Thresholds `q(n)` (cropped, full Las rank) and `p(n)` (chipped, product
//! certificate at level `n - 1`).

use crate::error::{guard, invalid, Error, Result, MAX_DIMENSION};
use crate::moments::{collapsed_w, localizer_chipped, localizer_cropped, moment_matrix, xi_norm_sq};

use super::{bisect, psd_exact, ThresholdResult};

/// Largest `n` for the full `M_{n-1}(w)` matrices.
pub const MAX_FULL_N: usize = 12;
/// Largest `n` for the eigen route of the chipped oracle.
pub const MAX_EIGEN_N: usize = 11;
/// Grid size for the outer maximization over `θ`.
pub const THETA_GRID: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    /// `n x n` cardinality-class matrix.
    Collapsed,
    /// `M_{n-1}(w)` over all subsets of size `<= n - 1`.
    Full,
}

impl QMode {
    fn name(self) -> &'static str {
        match self {
            QMode::Collapsed => "collapsed",
            QMode::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum POracle {
    /// Root of `ρ θ^n |ξ|^2 = 1`.
    Scalar,
    /// Eigenvalue bisection on `M_{n-1}` of the chipped localizer.
    Eigen,
}

impl POracle {
    fn name(self) -> &'static str {
        match self {
            POracle::Scalar => "scalar",
            POracle::Eigen => "eigen",
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// `(n+1) / (2^{n+2} - n - 3)`.
pub fn q_lower_bound(n: usize) -> f64 {
    (n as f64 + 1.0) / (2f64.powi(n as i32 + 2) - n as f64 - 3.0)
}

/// `n / (2^{n+1} - 2)`.
pub fn q_upper_bound(n: usize) -> f64 {
    n as f64 / (2f64.powi(n as i32 + 1) - 2.0)
}

/// `(n^2 - 1) / (2 n^{n+1} - n^2 - 1)`.
pub fn p_lower_bound(n: usize) -> f64 {
    let nf = n as f64;
    (nf * nf - 1.0) / (2.0 * nf.powi(n as i32 + 1) - nf * nf - 1.0)
}

/// Whether the cropped hypercube keeps full Las rank at `rho`.
pub fn q_predicate(n: usize, rho: f64, mode: QMode) -> Result<bool> {
    let m = match mode {
        QMode::Collapsed => collapsed_w(n, rho)?,
        QMode::Full => {
            guard("full threshold matrix", n, MAX_FULL_N)?;
            moment_matrix(&localizer_cropped(n, rho)?.w, n - 1)?
        }
    };
    Ok(psd_exact(&m)?.0)
}

fn verified(n: usize, lo: f64, hi: f64, mode: QMode) -> Result<bool> {
    Ok(lo > 0.0 && q_predicate(n, lo, mode)? && !q_predicate(n, hi, mode)?)
}

/// `q(n)`: the largest `ρ` with `M_{n-1}(w(ρ))` PSD, by bisection to absolute `tol`.
/// Full mode starts from the collapsed result `± 2 tol` when both ends verify.
pub fn q_of_n(n: usize, tol: f64, mode: QMode) -> Result<ThresholdResult> {
    check_tol(tol)?;
    if n < 2 {
        return Err(invalid("q(n) needs n >= 2"));
    }
    guard("collapsed threshold matrix", n, MAX_DIMENSION)?;
    let (lb, ub) = (q_lower_bound(n), q_upper_bound(n));
    let mut bracket = None;
    if mode == QMode::Full {
        guard("full threshold matrix", n, MAX_FULL_N)?;
        let seed = q_of_n(n, tol, QMode::Collapsed)?.value;
        let (lo, hi) = (seed - 2.0 * tol, seed + 2.0 * tol);
        if verified(n, lo, hi, mode)? {
            bracket = Some((lo, hi));
        }
    }
    let (lo, hi) = match bracket {
        Some(b) => b,
        None if verified(n, lb, ub, mode)? => (lb, ub),
        None => {
            let (lo, hi) = (1e-300, n as f64 / 2.0);
            if !verified(n, lo, hi, mode)? {
                return Err(Error::NoBracket { lo, hi });
            }
            (lo, hi)
        }
    };
    let (lo, hi) = bisect(lo, hi, |r| q_predicate(n, r, mode), |lo, hi| hi - lo <= tol)?;
    Ok(ThresholdResult { n, which: "q", mode: mode.name(), value: 0.5 * (lo + hi), lo, hi, tol, theta: None })
}

fn check_theta_window(n: usize, theta: f64) -> Result<()> {
    let a = (n as f64 - 1.0) / n as f64;
    if theta > a && theta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("theta must lie in ({a}, 1), got {theta}")))
    }
}

/// Largest `ρ` with `M_{n-1}` of the chipped localizer PSD at this `θ`, to relative `tol`.
/// Returns 0 when no positive `ρ` qualifies.
pub fn p_oracle(n: usize, theta: f64, tol: f64, oracle: POracle) -> Result<f64> {
    check_tol(tol)?;
    if n < 2 {
        return Err(invalid("p(n) needs n >= 2"));
    }
    check_theta_window(n, theta)?;
    // w[∅] = n(1-θ) - ρ must stay nonnegative, and n(1-θ) < 1 in this window.
    let cap = n as f64 * (1.0 - theta);
    let pred: Box<dyn Fn(f64) -> Result<bool>> = match oracle {
        POracle::Scalar => {
            guard("scalar chipped oracle", n, MAX_DIMENSION)?;
            Box::new(move |rho| Ok(rho * theta.powi(n as i32) * xi_norm_sq(n, theta, rho)? <= 1.0))
        }
        POracle::Eigen => {
            guard("eigen chipped oracle", n, MAX_EIGEN_N)?;
            Box::new(move |rho| Ok(psd_exact(&moment_matrix(&localizer_chipped(n, theta, rho)?.w, n - 1)?)?.0))
        }
    };
    let tiny = cap * 1e-200;
    if !pred(tiny)? {
        return Ok(0.0);
    }
    if pred(cap)? {
        return Ok(cap);
    }
    // Halve down to the first PSD point, then bisect to relative tolerance.
    let mut hi = cap;
    let lo = loop {
        let half = 0.5 * hi;
        if half <= tiny {
            break tiny;
        }
        if pred(half)? {
            break half;
        }
        hi = half;
    };
    let (lo, _) = bisect(lo, hi, &pred, |lo, hi| hi - lo <= tol * hi)?;
    Ok(lo)
}

/// `p(n) = max_θ p_oracle(n, θ)`: a `THETA_GRID`-point scan of `((n-1)/n, 1)`
/// refined by golden-section search around the best grid point.
pub fn p_of_n(n: usize, tol: f64, oracle: POracle) -> Result<ThresholdResult> {
    check_tol(tol)?;
    if n < 2 {
        return Err(invalid("p(n) needs n >= 2"));
    }
    let a = (n as f64 - 1.0) / n as f64;
    let step = (1.0 - a) / (THETA_GRID + 1) as f64;
    let grid: Vec<f64> = (1..=THETA_GRID).map(|j| a + step * j as f64).collect();
    let values = grid.iter().map(|&t| p_oracle(n, t, tol, oracle)).collect::<Result<Vec<_>>>()?;
    let best = (0..grid.len()).max_by(|&i, &j| values[i].total_cmp(&values[j])).expect("nonempty grid");
    let (mut x0, mut x3) = (a + step * best as f64, a + step * (best + 2) as f64);
    let f = |t: f64| p_oracle(n, t, tol, oracle);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (x3 - g * (x3 - x0), x0 + g * (x3 - x0));
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while x3 - x0 > 1e-12 * x3 {
        if f1 >= f2 {
            x3 = x2;
            (x2, f2) = (x1, f1);
            x1 = x3 - g * (x3 - x0);
            f1 = f(x1)?;
        } else {
            x0 = x1;
            (x1, f1) = (x2, f2);
            x2 = x0 + g * (x3 - x0);
            f2 = f(x2)?;
        }
    }
    let (mut theta, mut value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if values[best] > value {
        (theta, value) = (grid[best], values[best]);
    }
    Ok(ThresholdResult {
        n,
        which: "p",
        mode: oracle.name(),
        value,
        lo: value,
        hi: value * (1.0 + tol),
        tol,
        theta: Some(theta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_two_inside_bounds() {
        let r = q_of_n(2, 1e-10, QMode::Collapsed).unwrap();
        assert!(r.value > 3.0 / 11.0 && r.value < 1.0 / 3.0);
        assert!((r.value - 0.292893218813).abs() < 1e-9);
        let f = q_of_n(2, 1e-10, QMode::Full).unwrap();
        assert!((f.value - r.value).abs() <= 2e-10);
    }

    #[test]
    fn q_three_matches_grid_transition() {
        let r = q_of_n(3, 1e-9, QMode::Full).unwrap();
        assert!(r.value >= 0.177 && r.value < 0.178);
    }

    #[test]
    fn p_oracles_agree() {
        for n in 2..=5 {
            for j in 1..=5 {
                let a = (n as f64 - 1.0) / n as f64;
                let theta = a + (1.0 - a) * j as f64 / 6.0;
                let s = p_oracle(n, theta, 1e-12, POracle::Scalar).unwrap();
                let e = p_oracle(n, theta, 1e-12, POracle::Eigen).unwrap();
                assert!((s - e).abs() <= 1e-9 * s.max(1e-300) + 1e-15, "n={n} theta={theta}: {s} vs {e}");
            }
        }
    }

    #[test]
    fn p_two_and_bound() {
        let r = p_of_n(2, 1e-10, POracle::Scalar).unwrap();
        assert!((r.value.log2() + 1.775).abs() < 0.01);
        for n in 2..=6 {
            assert!(p_of_n(n, 1e-9, POracle::Scalar).unwrap().value >= p_lower_bound(n));
        }
        assert!((p_lower_bound(2).log2() - (3f64 / 11.0).log2()).abs() < 1e-15);
    }
}
