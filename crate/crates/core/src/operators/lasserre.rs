//! Lasserre certificates built from moment matrices, and their transport along
//! hypercube automorphisms.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::combinatorics::{family, full_mask, u_matrix, FamilyKind, IndexFamily};
use crate::error::{guard, invalid, Error, Result};
use crate::moments::{bernoulli_moments, localizer_cropped, moment_matrix};
use crate::polytopes::{chipped, cropped, Automorphism, Inequality, LinearDescription};
use crate::symmat::{congruence, eigenvalues, Matrix, SymMatrix};

use super::report::{CertificateReport, Tracker};

/// Largest ground set for the cropped construction.
pub const MAX_CROPPED_N: usize = 12;

/// Lifted matrix over `A_{k+1}^+` together with the description its localizers use.
#[derive(Debug, Clone)]
pub struct LasCertificate {
    pub n: usize,
    pub level: usize,
    pub family: IndexFamily,
    pub y: SymMatrix,
    pub description: LinearDescription,
}

impl LasCertificate {
    pub fn new(level: usize, y: SymMatrix, description: LinearDescription) -> Result<Self> {
        let n = description.n();
        if level + 1 > n {
            return Err(invalid(format!("level {level} needs k + 1 <= n = {n}")));
        }
        let family = family(n, level + 1, FamilyKind::Positive)?;
        if family.len() != y.dim() {
            return Err(Error::DimensionMismatch { expected: family.len(), actual: y.dim() });
        }
        Ok(LasCertificate { n, level, family, y, description })
    }

    /// `x` with `x̂(Y e_F) = (1; x)`.
    pub fn point(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.y.get(0, self.family.index_of_ones(1 << i).expect("level >= 0"))).collect()
    }

    /// Size of the `A_k^+` prefix of the family.
    fn inner_len(&self) -> usize {
        self.family.iter().take_while(|c| c.order() <= self.level).count()
    }

    /// `Y^i[S, T] = a0 Y[S, T] + sum_j a_j Y[S ∪ j, T ∪ j]` over `A_k^+`.
    pub fn localizer(&self, ineq: &Inequality) -> SymMatrix {
        let m = self.inner_len();
        let up: Vec<Vec<usize>> = (0..m)
            .map(|p| {
                let s = self.family.get(p).ones().0;
                (0..self.n).map(|j| self.family.index_of_ones(s | 1 << j).expect("level k+1")).collect()
            })
            .collect();
        let nz: Vec<usize> = (0..self.n).filter(|&j| ineq.a[j] != 0.0).collect();
        SymMatrix::from_fn(m, |p, q| {
            ineq.a0 * self.y.get(p, q) + nz.iter().map(|&j| ineq.a[j] * self.y.get(up[p][j], up[q][j])).sum::<f64>()
        })
    }

    /// Localizers of every inequality, in description order.
    pub fn localizers(&self) -> Vec<SymMatrix> {
        self.description.inequalities().par_iter().map(|i| self.localizer(i)).collect()
    }
}

/// Tests Las1, Las2 (every listed inequality), Las3 over `A_k^+`, and PSD of `Y`.
pub fn check_las(cert: &LasCertificate, tol: f64) -> Result<CertificateReport> {
    let y = &cert.y;
    let mut c1 = Tracker::new("Las1", tol);
    c1.see((y.get(0, 0) - 1.0).abs(), || vec![0, 0]);

    let spectra: Vec<Result<(f64, bool)>> = cert
        .description
        .inequalities()
        .par_iter()
        .map(|i| eigenvalues(&cert.localizer(i)).map(|e| (e.min, e.is_psd(tol))))
        .collect();
    let mut c2 = Tracker::new("Las2", tol);
    let mut all_psd = true;
    for (q, r) in spectra.into_iter().enumerate() {
        let (min, ok) = r?;
        all_psd &= ok;
        c2.see(-min, || vec![q]);
    }

    let m = cert.inner_len();
    let mut groups: HashMap<u32, (f64, usize, usize, f64, usize, usize)> = HashMap::new();
    for i in 0..m {
        let s = cert.family.get(i).ones().0;
        for j in 0..m {
            let key = s | cert.family.get(j).ones().0;
            let v = y.get(i, j);
            let e = groups.entry(key).or_insert((v, i, j, v, i, j));
            if v < e.0 {
                (e.0, e.1, e.2) = (v, i, j);
            }
            if v > e.3 {
                (e.3, e.4, e.5) = (v, i, j);
            }
        }
    }
    let mut c3 = Tracker::new("Las3", tol);
    let mut keys: Vec<u32> = groups.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let (lo, i1, j1, hi, i2, j2) = groups[&k];
        c3.see(hi - lo, || vec![i1, j1, i2, j2]);
    }

    let eig = eigenvalues(y)?;
    let mut psd = Tracker::new("PSD", tol);
    psd.see(-eig.min, Vec::new);

    Ok(CertificateReport::from_conditions(vec![
        c1.finish(),
        c2.finish_with(all_psd),
        c3.finish(),
        psd.finish_with(eig.is_psd(tol)),
    ]))
}

/// `Y = M_n(y)` with `y[S] = theta^{|S|}`, level `n-1`, over the chipped hypercube.
pub fn build_las_chipped(n: usize, theta: f64, rho: f64) -> Result<LasCertificate> {
    let desc = chipped(n, rho)?;
    let y = moment_matrix(&bernoulli_moments(n, theta)?, n)?;
    LasCertificate::new(n - 1, y, desc)
}

/// How the cut localizers of the uniform certificate relate to `M_k(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CroppedLocalizerCheck {
    /// `max |Y^cut - M_k(w)|` for the cut `sum_i (1 - x_i) >= rho`.
    pub full_cut_deviation: f64,
    /// Over all cuts `S`, `max |Y^S - C_S M_k(w) C_S^T|` with `C_S` the unimodular
    /// matrix expanding `prod_{i in A∩S} x_i prod_{i in A\S} (1 - x_i)`.
    pub congruence_deviation: f64,
}

/// `Y = M_{k+1}(2^{-|S|})`, level `k`, over the cropped hypercube, with the
/// localizer cross-check.
pub fn build_las_cropped(n: usize, k: usize, rho: f64) -> Result<(LasCertificate, CroppedLocalizerCheck)> {
    guard("cropped certificate", n, MAX_CROPPED_N)?;
    if k == 0 || k + 1 > n {
        return Err(invalid(format!("level must satisfy 1 <= k <= n - 1, got k = {k}")));
    }
    let desc = cropped(n, rho)?;
    let y = moment_matrix(&bernoulli_moments(n, 0.5)?, k + 1)?;
    let cert = LasCertificate::new(k, y, desc)?;
    let mk = moment_matrix(&localizer_cropped(n, rho)?.w, k)?;
    let inner = family(n, k, FamilyKind::Positive)?;
    let cuts_start = 2 * n;
    let full = full_mask(n);
    let devs: Vec<(f64, f64)> = (0..=full)
        .into_par_iter()
        .map(|s| {
            let loc = cert.localizer(&cert.description.inequalities()[cuts_start + s as usize]);
            let c = flip_expansion(&inner, s);
            let expected = congruence(&c, &mk).expect("square shapes");
            let cong = loc.max_abs_diff(&expected);
            let direct = if s == full { loc.max_abs_diff(&mk) } else { 0.0 };
            (direct, cong)
        })
        .collect();
    let check = CroppedLocalizerCheck {
        full_cut_deviation: devs.iter().map(|d| d.0).fold(0.0, f64::max),
        congruence_deviation: devs.iter().map(|d| d.1).fold(0.0, f64::max),
    };
    Ok((cert, check))
}

/// `C[A, U] = (-1)^{|U \ (A∩S)|}` for `A∩S ⊆ U ⊆ A`.
fn flip_expansion(fam: &IndexFamily, s: u32) -> Matrix {
    let mut c = Matrix::zeros(fam.len(), fam.len());
    for (p, a) in fam.iter().enumerate() {
        let a = a.ones().0;
        let keep = a & s;
        crate::combinatorics::for_each_submask(a & !s, |w| {
            let q = fam.index_of_ones(keep | w).expect("subset of member");
            c.set(p, q, crate::combinatorics::sign(w.count_ones()));
        });
    }
    c
}

/// Certificate for the image of the description under `g`.
pub fn transport_las(cert: &LasCertificate, g: &Automorphism) -> Result<LasCertificate> {
    if g.n() != cert.n {
        return Err(Error::DimensionMismatch { expected: cert.n, actual: g.n() });
    }
    let fam = &cert.family;
    let inv = g.inverse();
    let inv_perm_only = Automorphism::new(inv.perm().to_vec(), crate::combinatorics::SubsetId::EMPTY)?;
    // Relabel: new entry at (p(S), p(T)) is the old entry at (S, T).
    let old_index: Vec<usize> = fam
        .iter()
        .map(|c| fam.index_of_ones(inv_perm_only.permute_mask(c.ones().0)).expect("closed under relabeling"))
        .collect();
    let permuted = SymMatrix::from_fn(fam.len(), |i, j| cert.y.get(old_index[i], old_index[j]));
    let flip = g.flip().0;
    let y = if flip == 0 {
        permuted
    } else {
        let full = family(cert.n, cert.level + 1, FamilyKind::Full)?;
        let u = u_matrix(cert.n, cert.level + 1)?;
        let lifted = congruence(&u.transpose(), &permuted)?;
        let src: Vec<usize> = fam
            .iter()
            .map(|c| {
                let s = c.ones().0;
                full.index_of_masks(s & !flip, s & flip).expect("same order")
            })
            .collect();
        SymMatrix::from_fn(fam.len(), |i, j| lifted.get(src[i], src[j]))
    };
    LasCertificate::new(cert.level, y, g.apply_description(&cert.description)?)
}
