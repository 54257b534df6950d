//! Moment vectors on the subset lattice and their moment matrices, with the
//! Bernoulli-ansatz localizers of the chipped and cropped hypercubes.

use crate::combinatorics::{binomial, family, full_mask, ln_binomial, FamilyKind, SubsetId};
use crate::error::{guard, invalid, Error, Result, MAX_DIMENSION};
use crate::symmat::SymMatrix;

/// Real function on subsets of `[n]` with `|S| <= level`, stored densely by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    n: usize,
    level: usize,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn from_fn(n: usize, level: usize, f: impl Fn(u32) -> f64) -> Result<Self> {
        guard("moment vector", n, MAX_DIMENSION)?;
        if level > n {
            return Err(invalid(format!("level {level} exceeds n = {n}")));
        }
        let values: Vec<f64> =
            (0..=full_mask(n)).map(|m| if m.count_ones() as usize <= level { f(m) } else { f64::NAN }).collect();
        if values.iter().enumerate().any(|(m, v)| (m as u32).count_ones() as usize <= level && !v.is_finite()) {
            return Err(invalid("moment values must be finite"));
        }
        Ok(MomentVector { n, level, values })
    }

    /// Depends only on `|S|`.
    pub fn from_cardinality(n: usize, level: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        MomentVector::from_fn(n, level, |m| f(m.count_ones() as usize))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn get(&self, s: SubsetId) -> Result<f64> {
        if s.0 > full_mask(self.n) || s.len() > self.level {
            return Err(Error::LevelTooLow { mask: s.0, level: self.level });
        }
        Ok(self.values[s.0 as usize])
    }

    #[inline]
    pub(crate) fn at(&self, m: u32) -> f64 {
        self.values[m as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().filter(|v| !v.is_nan()).fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &MomentVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| !a.is_nan() && !b.is_nan())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// `M_k(y)[S, T] = y[S ∪ T]` over `A_k^+`.
pub fn moment_matrix(y: &MomentVector, k: usize) -> Result<SymMatrix> {
    if k > y.n {
        return Err(invalid(format!("level {k} exceeds n = {}", y.n)));
    }
    if y.level < y.n.min(2 * k) {
        return Err(invalid(format!("moment matrix of level {k} needs values up to level {}", y.n.min(2 * k))));
    }
    let fam = family(y.n, k, FamilyKind::Positive)?;
    let masks: Vec<u32> = fam.iter().map(|c| c.ones().0).collect();
    Ok(SymMatrix::from_fn(masks.len(), |i, j| y.at(masks[i] | masks[j])))
}

/// `y[S] = theta^{|S|}`.
pub fn bernoulli_moments(n: usize, theta: f64) -> Result<MomentVector> {
    check_theta(theta)?;
    MomentVector::from_cardinality(n, n, |s| theta.powi(s as i32))
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("theta must lie in (0, 1), got {theta}")))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("rho must be positive, got {rho}")))
    }
}

/// `u[S] = sum_{T ⊇ S} (-1)^{|T \ S|} y[T]`, so that `M_n(y) = Z Diag(u) Z^T`.
pub fn mobius_transform(y: &MomentVector) -> Result<MomentVector> {
    if y.level != y.n {
        return Err(invalid("Möbius transform needs a full-level moment vector"));
    }
    let mut u = y.values.clone();
    for b in 0..y.n {
        let bit = 1usize << b;
        for m in 0..u.len() {
            if m & bit == 0 {
                u[m] -= u[m | bit];
            }
        }
    }
    Ok(MomentVector { n: y.n, level: y.n, values: u })
}

/// Localizing vector together with its closed-form Möbius coefficients.
#[derive(Debug, Clone)]
pub struct Localizer {
    pub w: MomentVector,
    pub mobius: MomentVector,
}

/// `w[S] = ((n - |S|)(1 - theta) - rho) theta^{|S|}` with
/// `u[S] = (n - |S| - rho) theta^{|S|} (1 - theta)^{n - |S|}`.
pub fn localizer_chipped(n: usize, theta: f64, rho: f64) -> Result<Localizer> {
    check_theta(theta)?;
    check_rho(rho)?;
    let nf = n as f64;
    let w = MomentVector::from_cardinality(n, n, |s| ((nf - s as f64) * (1.0 - theta) - rho) * theta.powi(s as i32))?;
    let mobius = MomentVector::from_cardinality(n, n, |s| {
        (nf - s as f64 - rho) * theta.powi(s as i32) * (1.0 - theta).powi((n - s) as i32)
    })?;
    Ok(Localizer { w, mobius })
}

/// `w[S] = (n - |S| - 2 rho) 2^{-|S| - 1}` with `u[S] = (n - |S| - rho) 2^{-n}`.
pub fn localizer_cropped(n: usize, rho: f64) -> Result<Localizer> {
    check_rho(rho)?;
    let nf = n as f64;
    let w = MomentVector::from_cardinality(n, n, |s| (nf - s as f64 - 2.0 * rho) * 0.5f64.powi(s as i32 + 1))?;
    let mobius = MomentVector::from_cardinality(n, n, |s| (nf - s as f64 - rho) * 0.5f64.powi(n as i32))?;
    Ok(Localizer { w, mobius })
}

/// `sum_{i<n} C(n,i) / ((n - i - rho) theta^i (1 - theta)^{n-i})`; requires `0 < rho < 1`.
pub fn xi_norm_sq(n: usize, theta: f64, rho: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(invalid(format!("xi_norm_sq needs 0 < rho < 1, got {rho}")));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let nf = n as f64;
    let terms = (0..n).map(|i| {
        let d = nf - i as f64 - rho;
        if n > 12 {
            (ln_binomial(n, i) - d.ln() - i as f64 * theta.ln() - (n - i) as f64 * (1.0 - theta).ln()).exp()
        } else {
            binomial(n, i) / (d * theta.powi(i as i32) * (1.0 - theta).powi((n - i) as i32))
        }
    });
    Ok(terms.sum())
}

/// `(n+1) theta (1-theta)^n / (2 - ((n-1) theta + 2)(1-theta)^n)`.
pub fn alphabound(n: usize, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let nf = n as f64;
    let q = (1.0 - theta).powi(n as i32);
    Ok((nf + 1.0) * theta * q / (2.0 - ((nf - 1.0) * theta + 2.0) * q))
}

/// The `n x n` reduction of `M_{n-1}` of the cropped localizer to cardinality classes:
/// `W[i, j] = sum_{|S| = i, |T| = j} M_{n-1}(w)[S, T]`, from its binomial closed form.
pub fn collapsed_w(n: usize, rho: f64) -> Result<SymMatrix> {
    if n < 2 {
        return Err(invalid("collapsed matrix needs n >= 2"));
    }
    check_rho(rho)?;
    let nf = n as f64;
    Ok(SymMatrix::from_fn(n, |i, j| {
        let a: f64 = (0..=i.min(j)).map(|k| binomial(i, k) * binomial(j, k) / binomial(n - 1, k)).sum();
        let b: f64 = (0..=i.min(j)).map(|k| binomial(i, k) * binomial(j, k) / binomial(n, k)).sum();
        let pow = 0.5f64.powi((i + j) as i32);
        0.5 * pow * nf * binomial(n - 1, i) * binomial(n - 1, j) * a - rho * pow * binomial(n, i) * binomial(n, j) * b
    }))
}
