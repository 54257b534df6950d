//! Las rank of the cropped hypercube by PSD scans, and formula-based ranks.

use crate::error::{guard, invalid, Result};
use crate::moments::{localizer_cropped, moment_matrix};
use crate::operators::{sa_plus_rank_cropped, sa_plus_rank_lower, sa_plus_rank_upper, tilde_ls_rank};

use super::{psd_exact, RankMethod, RankResult, RankValue};

/// Largest `n` for cropped scans.
pub const MAX_SCAN_N: usize = 12;

fn check_scan(n: usize, rho: f64) -> Result<()> {
    guard("cropped Las scan", n, MAX_SCAN_N)?;
    if n == 0 || !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid(format!("need n >= 1 and rho > 0, got n = {n}, rho = {rho}")));
    }
    Ok(())
}

/// `(PSD, λ_min)` of `M_k(w)` for the cropped localizer.
pub fn cropped_level_psd(n: usize, rho: f64, k: usize) -> Result<(bool, f64)> {
    check_scan(n, rho)?;
    psd_exact(&moment_matrix(&localizer_cropped(n, rho)?.w, k)?)
}

/// Smallest `k` with an empty Las relaxation of `Q(n, rho)`: `0` when
/// `rho > n/2`, otherwise the first `k >= 1` whose `M_k(w)` is not PSD, or `n`.
pub fn las_rank_cropped(n: usize, rho: f64) -> Result<RankResult> {
    check_scan(n, rho)?;
    let mut lambda_min = Vec::new();
    let rank = if rho > n as f64 / 2.0 {
        0
    } else {
        let w = localizer_cropped(n, rho)?.w;
        let mut rank = n;
        for k in 1..n {
            let (ok, min) = psd_exact(&moment_matrix(&w, k)?)?;
            lambda_min.push(min);
            if !ok {
                rank = k;
                break;
            }
        }
        rank
    };
    Ok(RankResult {
        family: "cropped",
        n,
        rho,
        operator: "las",
        rank: RankValue::Exact(rank),
        method: RankMethod::PsdScan,
        lambda_min,
    })
}

/// For each level `k = 1..n-1`, the largest `λ` in `1..=max_millis` with
/// `M_k(w(λ/1000))` PSD, or 0 when none; PSD regions are intervals from 0.
pub fn cropped_level_drops(n: usize, max_millis: u32) -> Result<Vec<u32>> {
    check_scan(n, 1.0)?;
    let psd = |k: usize, l: u32| cropped_level_psd(n, l as f64 / 1000.0, k).map(|r| r.0);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut upper = max_millis;
    for k in 1..n {
        // Level k+1 contains level k as a principal submatrix, so drops never increase.
        let (mut lo, mut hi) = (0u32, upper);
        if upper > 0 && psd(k, upper)? {
            lo = upper;
        } else {
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if psd(k, mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        out.push(lo);
        upper = lo;
    }
    Ok(out)
}

/// Rank at `λ/1000` from per-level drops (valid for `λ/1000 <= n/2`).
pub fn rank_from_drops(drops: &[u32], millis: u32) -> usize {
    1 + drops.iter().filter(|&&d| millis <= d).count()
}

/// Closed-form ranks: `sa-plus` and `tilde-ls` on the chipped hypercube,
/// `sa-plus` on the cropped hypercube.
pub fn rank_formula(family: &str, operator: &str, n: usize, rho: f64) -> Result<RankResult> {
    let (family, operator, rank) = match (family, operator) {
        ("chipped", "sa-plus") => (
            "chipped",
            "sa-plus",
            RankValue::Bounds { lo: sa_plus_rank_lower(n, rho)?, hi: sa_plus_rank_upper(n, rho)? },
        ),
        ("chipped", "tilde-ls") => ("chipped", "tilde-ls", RankValue::Exact(tilde_ls_rank(n, rho)?)),
        ("cropped", "sa-plus") => ("cropped", "sa-plus", RankValue::Exact(sa_plus_rank_cropped(n, rho)?)),
        _ => return Err(invalid(format!("no rank formula for family `{family}` and operator `{operator}`"))),
    };
    Ok(RankResult { family, n, rho, operator, rank, method: RankMethod::Formula, lambda_min: Vec::new() })
}
