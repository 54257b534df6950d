//! Closed-form rank bounds for the chipped and cropped hypercubes.

use serde::Serialize;

use crate::error::{invalid, Result};

fn non_integer_in(rho: f64, hi: f64) -> Result<()> {
    if rho > 0.0 && rho < hi && rho.fract() != 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("rho must be non-integer in (0, {hi}), got {rho}")))
    }
}

/// SA+ rank of `P(n, rho)` is at most `n - ceil(rho) + 1`.
pub fn sa_plus_rank_upper(n: usize, rho: f64) -> Result<usize> {
    non_integer_in(rho, n as f64)?;
    Ok(n + 1 - rho.ceil() as usize)
}

/// `1 + max{k in Z : k < n (ceil(rho) - rho) / ceil(rho)}`.
pub fn sa_plus_rank_lower(n: usize, rho: f64) -> Result<usize> {
    non_integer_in(rho, n as f64)?;
    Ok(witness_levels(n, rho))
}

/// Number of `k >= 0` with `k < n (ceil(rho) - rho) / ceil(rho)`. A bound within
/// `1e-9` of an integer counts as that integer, so decimal inputs such as
/// `(5, 2.4)` give bound 1 rather than `1 + ulp`.
pub fn witness_levels(n: usize, rho: f64) -> usize {
    let c = rho.ceil();
    let bound = n as f64 * (c - rho) / c;
    let r = bound.round();
    if (bound - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        bound.ceil() as usize
    }
}

/// tilde-LS rank of `P(n, rho)`: `n` for non-integer `rho in (0, n - 1)`.
pub fn tilde_ls_rank(n: usize, rho: f64) -> Result<usize> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    non_integer_in(rho, n as f64 - 1.0)?;
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BzLower {
    pub rho_star: f64,
    pub epsilon: f64,
    pub rank_bound: usize,
}

/// `rho* = floor(sqrt n) + eps` with `eps = (1 - ceil(sqrt n)(sqrt n - 1)/n) / 2`,
/// rank bound `floor((sqrt n + 1)/2)`; `n >= 5` and not a perfect square.
pub fn bz_lower(n: usize) -> Result<BzLower> {
    let r = n.isqrt();
    if n < 5 || r * r == n {
        return Err(invalid(format!("n must be a non-square integer >= 5, got {n}")));
    }
    let s = (n as f64).sqrt();
    let epsilon = 0.5 * (1.0 - (r + 1) as f64 * (s - 1.0) / n as f64);
    Ok(BzLower { rho_star: r as f64 + epsilon, epsilon, rank_bound: ((s + 1.0) / 2.0).floor() as usize })
}

/// `rho + k/2`: the cropped-hypercube parameter after `k` rounds of SA+, `rho in (0, 1/2]`.
pub fn sa_plus_iterate_cropped(n: usize, rho: f64, k: usize) -> Result<f64> {
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(invalid(format!("rho must lie in (0, 1/2], got {rho}")));
    }
    if k > n {
        return Err(invalid(format!("level {k} exceeds n = {n}")));
    }
    Ok(rho + k as f64 / 2.0)
}

/// Smallest `k` whose iterate exceeds `n/2`, i.e. the first empty relaxation.
pub fn sa_plus_rank_cropped(n: usize, rho: f64) -> Result<usize> {
    for k in 0..=n {
        if sa_plus_iterate_cropped(n, rho, k)? > n as f64 / 2.0 {
            return Ok(k);
        }
    }
    Err(invalid("no level empties the relaxation"))
}

/// Externally established Las upper bound `n - 1` for even `n >= 4`, `rho >= 1/n`.
pub fn external_las_upper(n: usize, rho: f64) -> Option<usize> {
    (n >= 4 && n.is_multiple_of(2) && rho >= 1.0 / n as f64).then_some(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(sa_plus_rank_upper(10, 8.5).unwrap(), 2);
        assert_eq!(sa_plus_rank_lower(9, 2.5).unwrap(), 2);
        assert_eq!(sa_plus_rank_lower(4, 0.5).unwrap(), 2);
        assert_eq!(sa_plus_rank_lower(5, 2.4).unwrap(), 1);
        assert!(sa_plus_rank_upper(4, 2.0).is_err());
        assert_eq!(tilde_ls_rank(5, 3.5).unwrap(), 5);
        assert!(tilde_ls_rank(5, 4.5).is_err());
    }

    #[test]
    fn bz_examples() {
        let b = bz_lower(10).unwrap();
        assert_eq!(b.rank_bound, 2);
        let b5 = bz_lower(5).unwrap();
        assert_eq!(b5.rank_bound, 1);
        let expect = 2.0 + 0.5 * (1.0 - 3.0 * (5f64.sqrt() - 1.0) / 5.0);
        assert!((b5.rho_star - expect).abs() < 1e-15);
        assert!((b5.rho_star - 2.129).abs() < 1e-3);
        assert!(bz_lower(9).is_err());
        assert!(bz_lower(3).is_err());
    }

    #[test]
    fn cropped_iterate_reaches_full_rank() {
        for n in 1..=12 {
            for rho in [0.05, 0.3, 0.5] {
                assert_eq!(sa_plus_rank_cropped(n, rho).unwrap(), n);
            }
        }
        assert!(sa_plus_iterate_cropped(4, 0.6, 1).is_err());
    }

    #[test]
    fn external_bound_gate() {
        assert_eq!(external_las_upper(4, 0.3), Some(3));
        assert_eq!(external_las_upper(5, 0.3), None);
        assert_eq!(external_las_upper(4, 0.1), None);
    }
}
