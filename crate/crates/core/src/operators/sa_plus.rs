//! SA+ certificates for the chipped hypercube, plus the coordinate-modification
//! sufficiency test.

use std::collections::HashMap;

use crate::combinatorics::{family, l_matrix, FamilyKind, IndexFamily, LTarget, SubsetId};
use crate::error::{invalid, Error, Result};
use crate::moments::{moment_matrix, MomentVector};
use crate::polytopes::{contains, LinearDescription};
use crate::symmat::{congruence, eigenvalues, SymMatrix};

use super::report::{CertificateReport, Tracker};

/// Lifted matrix over `A_k`.
#[derive(Debug, Clone)]
pub struct SaPlusCertificate {
    pub n: usize,
    pub level: usize,
    pub family: IndexFamily,
    pub y: SymMatrix,
}

impl SaPlusCertificate {
    pub fn new(n: usize, level: usize, y: SymMatrix) -> Result<Self> {
        let family = family(n, level, FamilyKind::Full)?;
        if family.len() != y.dim() {
            return Err(Error::DimensionMismatch { expected: family.len(), actual: y.dim() });
        }
        Ok(SaPlusCertificate { n, level, family, y })
    }

    /// `(Y[F, F], Y[1|1, F], ..., Y[n|1, F])`.
    pub fn projected(&self) -> Vec<f64> {
        self.column_projection(0)
    }

    /// `x̂(Y e_col)`.
    pub fn column_projection(&self, col: usize) -> Vec<f64> {
        let mut v = vec![self.y.get(0, col)];
        v.extend((0..self.n).map(|i| self.y.get(self.family.index_of_ones(1 << i).expect("level >= 1"), col)));
        v
    }

    /// Projected point `x` with `x̂(Y e_F) = (1; x)`.
    pub fn point(&self) -> Vec<f64> {
        self.projected()[1..].to_vec()
    }
}

/// Per intersection class: `(min, argmin row, argmin col, max, argmax row, argmax col)`.
type Extremes = (f64, usize, usize, f64, usize, usize);

/// Tests SA+1 through SA+5 and positive semidefiniteness, each to `tol`.
pub fn check_sa_plus(cert: &SaPlusCertificate, desc: &LinearDescription, tol: f64) -> Result<CertificateReport> {
    let fam = &cert.family;
    let y = &cert.y;
    let n = cert.n;
    if desc.n() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: desc.n() });
    }
    if y.dim() != fam.len() {
        return Err(Error::DimensionMismatch { expected: fam.len(), actual: y.dim() });
    }
    if cert.level == 0 {
        return Err(invalid("SA+ certificates need level >= 1"));
    }
    let dim = fam.len();

    let mut c1 = Tracker::new("SA+1", tol);
    c1.see((y.get(0, 0) - 1.0).abs(), || vec![0, 0]);

    let mut c2i = Tracker::new("SA+2(i)", tol);
    let unit_rows: Vec<usize> = (0..n).map(|i| fam.index_of_ones(1 << i).expect("level >= 1")).collect();
    for col in 0..dim {
        let y0 = y.get(0, col);
        c2i.see(-y0, || vec![col]);
        for (q, ineq) in desc.inequalities().iter().enumerate() {
            let v = ineq.a0 * y0 + ineq.a.iter().zip(&unit_rows).map(|(a, &r)| a * y.get(r, col)).sum::<f64>();
            c2i.see(-v, || vec![col, q]);
        }
    }

    let mut c2ii = Tracker::new("SA+2(ii)", tol);
    for i in 0..dim {
        for j in i..dim {
            c2ii.see(-y.get(i, j), || vec![i, j]);
        }
    }

    let mut c3 = Tracker::new("SA+3", tol);
    for (g, gamma) in fam.iter().enumerate() {
        if gamma.order() + 1 > cert.level {
            continue;
        }
        let (s, t) = (gamma.ones().0, gamma.zeros().0);
        for j in 0..n {
            let bit = 1u32 << j;
            if (s | t) & bit != 0 {
                continue;
            }
            let c_one = fam.index_of_masks(s | bit, t).expect("in family");
            let c_zero = fam.index_of_masks(s, t | bit).expect("in family");
            for r in 0..dim {
                let v = y.get(r, c_one) + y.get(r, c_zero) - y.get(r, g);
                c3.see(v.abs(), || vec![r, g, j]);
            }
        }
    }

    let mut c4 = Tracker::new("SA+4", tol);
    let mut groups: HashMap<(u32, u32), Extremes> = HashMap::new();
    for i in 0..dim {
        let a = fam.get(i);
        for j in 0..dim {
            let b = fam.get(j);
            let (s, t) = (a.ones().0 | b.ones().0, a.zeros().0 | b.zeros().0);
            let v = y.get(i, j);
            if s & t != 0 {
                c4.see(v.abs(), || vec![i, j]);
                continue;
            }
            let e = groups.entry((s, t)).or_insert((v, i, j, v, i, j));
            if v < e.0 {
                (e.0, e.1, e.2) = (v, i, j);
            }
            if v > e.3 {
                (e.3, e.4, e.5) = (v, i, j);
            }
        }
    }
    let mut c5 = Tracker::new("SA+5", tol);
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let (lo, i1, j1, hi, i2, j2) = groups[&k];
        c5.see(hi - lo, || vec![i1, j1, i2, j2]);
    }

    let eig = eigenvalues(y)?;
    let mut psd = Tracker::new("PSD", tol);
    psd.see(-eig.min, Vec::new);
    let psd = psd.finish_with(eig.is_psd(tol));

    Ok(CertificateReport::from_conditions(vec![
        c1.finish(),
        c2i.finish(),
        c2ii.finish(),
        c3.finish(),
        c4.finish(),
        c5.finish(),
        psd,
    ]))
}

fn check_unit_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("rho must lie in (0, 1), got {rho}")))
    }
}

/// Level `n-1` certificate for the chipped hypercube with `rho in (0, 1)`:
/// `Y[a, b] = 1 - rho |S| / D` if `a ∩ b = S|1`, `rho / D` if `a ∩ b = S|1 ∩ j|0`,
/// else 0, with `D = n rho + 1 - rho`.
pub fn build_sa_plus_top(n: usize, rho: f64) -> Result<SaPlusCertificate> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    check_unit_rho(rho)?;
    let d = n as f64 * rho + 1.0 - rho;
    let fam = family(n, n - 1, FamilyKind::Full)?;
    let y = SymMatrix::from_fn(fam.len(), |i, j| {
        let (a, b) = (fam.get(i), fam.get(j));
        let (s, t) = (a.ones().0 | b.ones().0, a.zeros().0 | b.zeros().0);
        match (s & t, t.count_ones()) {
            (0, 0) => 1.0 - rho * s.count_ones() as f64 / d,
            (0, 1) => rho / d,
            _ => 0.0,
        }
    });
    SaPlusCertificate::new(n, n - 1, y)
}

/// The `A_{n-1}^-` principal minor `Y'` of the level `n-1` certificate and the residual
/// `max |Y - L Y' L^T|` of its inclusion-exclusion factorization.
pub fn top_level_factorization(cert: &SaPlusCertificate) -> Result<(SymMatrix, f64)> {
    let neg = family(cert.n, cert.level, FamilyKind::Negative)?;
    let idx: Vec<usize> = neg.iter().map(|c| cert.family.index_of(c).expect("subfamily")).collect();
    let minor = cert.y.principal(&idx);
    let l = l_matrix(cert.n, cert.level, LTarget::Negative)?;
    let rebuilt = congruence(&l, &minor)?;
    Ok((minor.clone(), rebuilt.max_abs_diff(&cert.y)))
}

/// Moment vector `y[S] = 1 - |S| rho / (n - k + k rho)` used at level `k`.
pub fn chipped_level_moments(n: usize, rho: f64, k: usize) -> Result<MomentVector> {
    check_unit_rho(rho)?;
    if k == 0 || k > n {
        return Err(invalid(format!("level must satisfy 1 <= k <= n, got k = {k}")));
    }
    let d = (n - k) as f64 + k as f64 * rho;
    MomentVector::from_cardinality(n, n, |s| 1.0 - s as f64 * rho / d)
}

/// Level `k` certificate `Y = L M_k(y) L^T` with `y` from [`chipped_level_moments`].
pub fn build_sa_plus_chipped(n: usize, rho: f64, k: usize) -> Result<SaPlusCertificate> {
    let y = chipped_level_moments(n, rho, k)?;
    let m = moment_matrix(&y, k)?;
    let l = l_matrix(n, k, LTarget::Positive)?;
    SaPlusCertificate::new(n, k, congruence(&l, &m)?)
}

/// Closed-form projected coordinate `(n - k + (k-1) rho) / (n - k + k rho)`.
pub fn chipped_level_projection(n: usize, rho: f64, k: usize) -> f64 {
    let (nk, kf) = ((n - k) as f64, k as f64);
    (nk + (kf - 1.0) * rho) / (nk + kf * rho)
}

/// `x` with coordinates in `I` set to 1 and in `J` set to 0.
pub fn xij(x: &[f64], i: SubsetId, j: SubsetId) -> Result<Vec<f64>> {
    if i.0 & j.0 != 0 {
        return Err(invalid("I and J must be disjoint"));
    }
    Ok(x.iter()
        .enumerate()
        .map(|(p, &v)| {
            if i.0 >> p & 1 == 1 {
                1.0
            } else if j.0 >> p & 1 == 1 {
                0.0
            } else {
                v
            }
        })
        .collect())
}

/// `{i : 0 < x_i < 1}`.
pub fn support_fractional(x: &[f64]) -> SubsetId {
    SubsetId(x.iter().enumerate().filter(|(_, &v)| v > 0.0 && v < 1.0).fold(0, |m, (i, _)| m | 1 << i))
}

/// Sufficient test for SA+ level-`k` membership: every `x^I_J` with disjoint
/// `I, J ⊆ S(x)` and `|I| + |J| <= k` lies in the description.
pub fn sa_plus_sufficient(desc: &LinearDescription, x: &[f64], k: usize) -> Result<bool> {
    let sup = support_fractional(x);
    let mut ok = true;
    let mut result = Ok(());
    crate::combinatorics::for_each_submask(sup.0, |i| {
        if !ok || i.count_ones() as usize > k {
            return;
        }
        crate::combinatorics::for_each_submask(sup.0 & !i, |j| {
            if !ok || (i | j).count_ones() as usize > k {
                return;
            }
            match xij(x, SubsetId(i), SubsetId(j)).and_then(|p| contains(desc, &p, 1e-9)) {
                Ok(true) => {}
                Ok(false) => ok = false,
                Err(e) => {
                    ok = false;
                    result = Err(e);
                }
            }
        });
    });
    result.map(|_| ok)
}
