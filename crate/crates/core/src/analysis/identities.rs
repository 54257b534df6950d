//! Numerical checks of the closed-form identities the thresholds rely on.

use serde::Serialize;

use crate::combinatorics::{family, zeta_matrix, FamilyKind};
use crate::error::{invalid, Result};
use crate::moments::{
    collapsed_w, localizer_chipped, localizer_cropped, mobius_transform, moment_matrix, xi_norm_sq, MomentVector,
};
use crate::symmat::{congruence, eigenvalues, SymMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub n: usize,
    pub passed: bool,
    pub worst: f64,
    pub tol: f64,
}

/// `max |M_n(y) - Z Diag(u) Z^T|` with `u` the Möbius transform of `y`.
pub fn mobius_factorization_deviation(y: &MomentVector) -> Result<f64> {
    let n = y.n();
    let u = mobius_transform(y)?;
    let fam = family(n, n, FamilyKind::Positive)?;
    let d = SymMatrix::diagonal(&fam.iter().map(|c| u.at(c.ones().0)).collect::<Vec<_>>());
    let rebuilt = congruence(&zeta_matrix(n)?, &d)?;
    Ok(moment_matrix(y, n)?.max_abs_diff(&rebuilt))
}

/// Largest gap between the Möbius transform of the chipped localizer and its
/// closed form, together with the factorization residual.
pub fn localizer_mobius_deviation(n: usize, theta: f64, rho: f64) -> Result<f64> {
    let loc = localizer_chipped(n, theta, rho)?;
    let u = mobius_transform(&loc.w)?;
    Ok(u.max_abs_diff(&loc.mobius).max(mobius_factorization_deviation(&loc.w)?))
}

/// Same comparison for the cropped localizer.
pub fn cropped_mobius_deviation(n: usize, rho: f64) -> Result<f64> {
    let loc = localizer_cropped(n, rho)?;
    Ok(mobius_transform(&loc.w)?.max_abs_diff(&loc.mobius))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionRule {
    /// `λ_min(M_{n-1}(w))` for the chipped localizer.
    pub lambda_min: f64,
    /// `1 - ρ θ^n |ξ|^2`.
    pub scalar: f64,
    /// Sign agreement, or `None` when `|scalar|` is within the margin.
    pub agree: Option<bool>,
}

/// Compares the eigenvalue sign with the scalar rule; `ρ ∈ (0, 1)`.
pub fn decision_rule(n: usize, theta: f64, rho: f64, margin: f64) -> Result<DecisionRule> {
    if n < 2 {
        return Err(invalid("decision rule needs n >= 2"));
    }
    let lambda_min = eigenvalues(&moment_matrix(&localizer_chipped(n, theta, rho)?.w, n - 1)?)?.min;
    let scalar = 1.0 - rho * theta.powi(n as i32) * xi_norm_sq(n, theta, rho)?;
    let agree = (scalar.abs() > margin).then_some((lambda_min >= 0.0) == (scalar > 0.0));
    Ok(DecisionRule { lambda_min, scalar, agree })
}

/// `max |W[i,j] - sum_{|S|=i,|T|=j} M_{n-1}(w)[S,T]|` relative to `max |W|`.
pub fn collapse_deviation(n: usize, rho: f64) -> Result<f64> {
    let w = collapsed_w(n, rho)?;
    let m = moment_matrix(&localizer_cropped(n, rho)?.w, n - 1)?;
    let fam = family(n, n - 1, FamilyKind::Positive)?;
    let sizes: Vec<usize> = fam.iter().map(|c| c.order()).collect();
    let mut sums = vec![0.0; n * n];
    for (p, &i) in sizes.iter().enumerate() {
        for (q, &j) in sizes.iter().enumerate() {
            sums[i * n + j] += m.get(p, q);
        }
    }
    let scale = w.as_slice().iter().fold(1.0f64, |a, v| a.max(v.abs()));
    Ok(w.as_slice().iter().zip(&sums).fold(0.0f64, |a, (x, y)| a.max((x - y).abs())) / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_small_cases() {
        let y = MomentVector::from_fn(4, 4, |m| 0.1 * m as f64 - 0.3).unwrap();
        assert!(mobius_factorization_deviation(&y).unwrap() < 1e-12);
        assert!(localizer_mobius_deviation(5, 0.7, 0.4).unwrap() < 1e-12);
        assert!(cropped_mobius_deviation(5, 0.4).unwrap() < 1e-12);
        for n in 2..=5 {
            assert!(collapse_deviation(n, 0.05).unwrap() < 1e-12);
        }
    }

    #[test]
    fn decision_rule_agrees() {
        for n in 2..=6 {
            for t in [0.2, 0.5, 0.9] {
                for r in [0.1, 0.5, 0.9] {
                    let d = decision_rule(n, t, r, 1e-8).unwrap();
                    assert_ne!(d.agree, Some(false), "n={n} theta={t} rho={r}: {d:?}");
                }
            }
        }
    }
}
