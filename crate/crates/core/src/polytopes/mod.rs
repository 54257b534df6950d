//! Inequality descriptions of 0/1 polytope families with their integer hulls,
//! and the hypercube automorphisms acting on them.

mod lp;

use serde::Serialize;

pub use lp::{lp_feasible, lp_max, LpOutcome, LpProblem};

use crate::combinatorics::{full_mask, SubsetId};
use crate::error::{guard, invalid, Error, Result, MAX_DIMENSION};
use crate::symmat::fmt_real;

/// `a0 + a^T x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub a0: f64,
    pub a: Vec<f64>,
}

impl Inequality {
    pub fn new(a0: f64, a: Vec<f64>) -> Result<Self> {
        if !a0.is_finite() || a.iter().any(|v| !v.is_finite()) {
            return Err(invalid("inequality coefficients must be finite"));
        }
        Ok(Inequality { a0, a })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.a0 + self.a.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    /// `a0 * y0 + a^T y` for a homogenized point `(y0; y)`.
    pub fn eval_homogenized(&self, y0: f64, y: &[f64]) -> f64 {
        self.a0 * y0 + self.a.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Whether this is one of the `x_i >= 0` or `1 - x_i >= 0` facets.
    pub fn box_facet(&self) -> Option<(usize, bool)> {
        let nz: Vec<usize> = (0..self.a.len()).filter(|&i| self.a[i] != 0.0).collect();
        match (nz.as_slice(), self.a0) {
            ([i], a0) if a0 == 0.0 && self.a[*i] == 1.0 => Some((*i, false)),
            ([i], a0) if a0 == 1.0 && self.a[*i] == -1.0 => Some((*i, true)),
            _ => None,
        }
    }

    /// One line `a0 a1 ... an`.
    pub fn dump(&self) -> String {
        std::iter::once(self.a0).chain(self.a.iter().copied()).map(fmt_real).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FamilyTag {
    Chipped { rho: f64 },
    Cropped { rho: f64 },
    Custom,
}

/// Box facets `x_1..x_n >= 0`, `1 - x_1..1 - x_n >= 0` first, then the cuts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearDescription {
    n: usize,
    inequalities: Vec<Inequality>,
    tag: FamilyTag,
}

fn box_facets(n: usize) -> Vec<Inequality> {
    let unit = |i: usize, v: f64| (0..n).map(|j| if j == i { v } else { 0.0 }).collect::<Vec<_>>();
    (0..n)
        .map(|i| Inequality { a0: 0.0, a: unit(i, 1.0) })
        .chain((0..n).map(|i| Inequality { a0: 1.0, a: unit(i, -1.0) }))
        .collect()
}

impl LinearDescription {
    /// Box facets followed by `cuts`.
    pub fn new(n: usize, cuts: Vec<Inequality>, tag: FamilyTag) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        if let Some(c) = cuts.iter().find(|c| c.a.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, actual: c.a.len() });
        }
        let mut inequalities = box_facets(n);
        inequalities.extend(cuts);
        Ok(LinearDescription { n, inequalities, tag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// Everything after the `2n` box facets.
    pub fn cuts(&self) -> &[Inequality] {
        &self.inequalities[2 * self.n..]
    }

    pub fn dump(&self) -> String {
        self.inequalities.iter().map(|i| i.dump() + "\n").collect()
    }
}

/// `{x in [0,1]^n : sum x_i <= n - rho}`.
pub fn chipped(n: usize, rho: f64) -> Result<LinearDescription> {
    if n == 0 || !(rho > 0.0 && rho < n as f64) {
        return Err(invalid(format!("chipped hypercube needs n >= 1 and 0 < rho < n, got n = {n}, rho = {rho}")));
    }
    Ok(chipped_unchecked(n, rho))
}

fn chipped_unchecked(n: usize, rho: f64) -> LinearDescription {
    let cut = Inequality { a0: n as f64 - rho, a: vec![-1.0; n] };
    LinearDescription::new(n, vec![cut], FamilyTag::Chipped { rho }).expect("valid shape")
}

/// `{x in [0,1]^n : sum_{i in S}(1 - x_i) + sum_{i not in S} x_i >= rho for all S}`,
/// cuts ordered by the mask of `S`.
pub fn cropped(n: usize, rho: f64) -> Result<LinearDescription> {
    if n == 0 || !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid(format!("cropped hypercube needs n >= 1 and rho > 0, got n = {n}, rho = {rho}")));
    }
    guard("cropped hypercube", n, MAX_DIMENSION)?;
    let cuts = (0..=full_mask(n)).map(|s| cropped_cut(n, s, rho)).collect();
    LinearDescription::new(n, cuts, FamilyTag::Cropped { rho })
}

/// The cut of the cropped hypercube attached to subset mask `s`.
pub fn cropped_cut(n: usize, s: u32, rho: f64) -> Inequality {
    let a = (0..n).map(|i| if s >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
    Inequality { a0: s.count_ones() as f64 - rho, a }
}

fn check_dim(desc: &LinearDescription, len: usize) -> Result<()> {
    if len != desc.n {
        return Err(Error::DimensionMismatch { expected: desc.n, actual: len });
    }
    Ok(())
}

/// Every inequality holds up to `-tol`.
pub fn contains(desc: &LinearDescription, x: &[f64], tol: f64) -> Result<bool> {
    check_dim(desc, x.len())?;
    Ok(desc.inequalities.iter().all(|i| i.eval(x) >= -tol))
}

/// Membership of `(y0; y)` in the cone over `desc`, without dividing by `y0`.
pub fn homogenized_contains(desc: &LinearDescription, y0: f64, y: &[f64], tol: f64) -> Result<bool> {
    check_dim(desc, y.len())?;
    Ok(y0 >= -tol && desc.inequalities.iter().all(|i| i.eval_homogenized(y0, y) >= -tol))
}

/// 0/1 points of the description, as masks in increasing order.
pub fn integer_points(desc: &LinearDescription) -> Result<Vec<u32>> {
    guard("integer point enumeration", desc.n, MAX_DIMENSION)?;
    let mut out = Vec::new();
    let mut x = vec![0.0; desc.n];
    for m in 0..=full_mask(desc.n) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (m >> i & 1) as f64;
        }
        if contains(desc, &x, 1e-9)? {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn mask_to_point(n: usize, m: u32) -> Vec<f64> {
    (0..n).map(|i| (m >> i & 1) as f64).collect()
}

/// Integer hull of the chipped hypercube: the chipped hypercube at `ceil(rho)`.
pub fn integer_hull_chipped(n: usize, rho: f64) -> Result<LinearDescription> {
    chipped(n, rho)?;
    Ok(chipped_unchecked(n, rho.ceil()))
}

/// Maximum of `c^T x` over the convex hull of 0/1 points given as masks.
pub fn max_over_hull(n: usize, points: &[u32], c: &[f64]) -> Result<f64> {
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: c.len() });
    }
    let mut lp = LpProblem::new(points.len());
    lp.add_eq(-1.0, vec![1.0; points.len()])?;
    let obj = points.iter().map(|&m| mask_to_point(n, m).iter().zip(c).map(|(a, b)| a * b).sum()).collect();
    lp.set_objective(obj)?;
    lp_max(&lp)
}

/// Maximum of `c^T x` over the description.
pub fn max_linear(desc: &LinearDescription, c: &[f64]) -> Result<f64> {
    check_dim(desc, c.len())?;
    let mut lp = LpProblem::new(desc.n);
    for i in &desc.inequalities {
        lp.add_ge(i.a0, i.a.clone())?;
    }
    lp.set_objective(c.to_vec())?;
    lp_max(&lp)
}

/// Hypercube automorphism: coordinate `i` moves to `perm[i]`, then coordinates in
/// `flip` are complemented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    perm: Vec<usize>,
    flip: SubsetId,
}

impl Automorphism {
    pub fn new(perm: Vec<usize>, flip: SubsetId) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(invalid("not a permutation of 0..n"));
            }
            seen[p] = true;
        }
        if flip.0 & !full_mask(n) != 0 {
            return Err(invalid("flip mask exceeds ground set"));
        }
        Ok(Automorphism { perm, flip })
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { perm: (0..n).collect(), flip: SubsetId::EMPTY }
    }

    pub fn flip_only(n: usize, flip: SubsetId) -> Result<Self> {
        Automorphism::new((0..n).collect(), flip)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flip(&self) -> SubsetId {
        self.flip
    }

    pub fn is_identity(&self) -> bool {
        self.flip.is_empty() && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Image of a subset mask under the permutation part.
    pub fn permute_mask(&self, m: u32) -> u32 {
        (0..self.n()).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << self.perm[i])
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        let flip = (0..self.n()).filter(|&j| self.flip.0 >> j & 1 == 1).fold(0, |acc, j| acc | 1 << inv[j]);
        Automorphism { perm: inv, flip: SubsetId(flip) }
    }

    pub fn apply_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: x.len() });
        }
        let mut y = vec![0.0; x.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = x[i];
        }
        for (j, yj) in y.iter_mut().enumerate() {
            if self.flip.0 >> j & 1 == 1 {
                *yj = 1.0 - *yj;
            }
        }
        Ok(y)
    }

    pub fn apply_inequality(&self, ineq: &Inequality) -> Inequality {
        let mut b = vec![0.0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            b[p] = ineq.a[i];
        }
        let mut a0 = ineq.a0;
        for (j, bj) in b.iter_mut().enumerate() {
            if self.flip.0 >> j & 1 == 1 {
                a0 += *bj;
                *bj = -*bj;
            }
        }
        Inequality { a0, a: b }
    }

    /// Cuts are rewritten in place; the box facets map onto themselves and stay canonical.
    pub fn apply_description(&self, desc: &LinearDescription) -> Result<LinearDescription> {
        check_dim(desc, self.n())?;
        if self.is_identity() {
            return Ok(desc.clone());
        }
        let cuts = desc.cuts().iter().map(|c| self.apply_inequality(c)).collect();
        LinearDescription::new(desc.n, cuts, FamilyTag::Custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;

    #[test]
    fn chipped_cut_and_layout() {
        let d = chipped(2, 0.5).unwrap();
        assert_eq!(d.inequalities().len(), 5);
        assert_eq!(d.cuts()[0], Inequality { a0: 1.5, a: vec![-1.0, -1.0] });
        assert_eq!(d.inequalities()[0].box_facet(), Some((0, false)));
        assert_eq!(d.inequalities()[3].box_facet(), Some((1, true)));
        assert!(chipped(2, 2.0).is_err() && chipped(2, 0.0).is_err());
    }

    #[test]
    fn all_ones_never_chipped() {
        for n in 1..6 {
            for rho in [0.01, 0.5, n as f64 - 0.5] {
                assert!(!contains(&chipped(n, rho).unwrap(), &vec![1.0; n], 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn chipped_integer_point_count() {
        for n in 1..=7 {
            for rho in [0.3, 1.0, 1.7, n as f64 - 0.2] {
                if rho >= n as f64 {
                    continue;
                }
                let brute = (0..1u32 << n).filter(|m| m.count_ones() as f64 <= n as f64 - rho).count();
                let formula: f64 = (0..=n - rho.ceil() as usize).map(|i| binomial(n, i)).sum();
                let got = integer_points(&chipped(n, rho).unwrap()).unwrap().len();
                assert_eq!(got, brute);
                assert_eq!(got as f64, formula);
            }
        }
        assert_eq!(integer_points(&chipped(3, 1.5).unwrap()).unwrap(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn cropped_layout_and_center() {
        let d = cropped(2, 0.5).unwrap();
        assert_eq!(d.cuts().len(), 4);
        assert_eq!(d.cuts()[0], Inequality { a0: -0.5, a: vec![1.0, 1.0] });
        let c = vec![0.5; 4];
        assert!(contains(&cropped(4, 0.5).unwrap(), &c, 1e-9).unwrap());
        assert!(contains(&cropped(4, 2.0).unwrap(), &c, 1e-9).unwrap());
        assert!(!contains(&cropped(4, 2.1).unwrap(), &c, 1e-9).unwrap());
        assert!(cropped(17, 0.5).is_err());
    }

    #[test]
    fn cropped_points_violate_own_cut_only() {
        for n in 1..=5 {
            let d = cropped(n, 0.7).unwrap();
            for m in 0..1u32 << n {
                let x = mask_to_point(n, m);
                let violated: Vec<usize> = (0..d.cuts().len()).filter(|&s| d.cuts()[s].eval(&x) < 0.0).collect();
                assert_eq!(violated, vec![m as usize]);
            }
            assert!(integer_points(&cropped(n, 0.3).unwrap()).unwrap().is_empty());
        }
    }

    #[test]
    fn membership_examples() {
        let d = chipped(2, 0.5).unwrap();
        assert!(contains(&d, &[2.0 / 3.0, 2.0 / 3.0], 1e-9).unwrap());
        assert!(homogenized_contains(&d, 0.0, &[0.0, 0.0], 1e-9).unwrap());
        assert!(!homogenized_contains(&d, 0.0, &[0.1, 0.0], 1e-9).unwrap());
        assert!(contains(&d, &[1.0], 1e-9).is_err());
    }

    #[test]
    fn hull_of_chipped() {
        for n in 2..6 {
            assert_eq!(integer_hull_chipped(n, 0.4).unwrap(), chipped(n, 1.0).unwrap());
        }
        assert_eq!(integer_hull_chipped(4, 2.5).unwrap(), chipped(4, 3.0).unwrap());
    }

    #[test]
    fn flip_rewrites_cut() {
        let g = Automorphism::flip_only(2, SubsetId::from_elements(&[1])).unwrap();
        let d = g.apply_description(&chipped(2, 0.5).unwrap()).unwrap();
        assert_eq!(d.cuts()[0], Inequality { a0: 0.5, a: vec![1.0, -1.0] });
        assert_eq!(&d.inequalities()[..4], &chipped(2, 0.5).unwrap().inequalities()[..4]);
    }

    #[test]
    fn identity_leaves_description() {
        let d = cropped(3, 0.4).unwrap();
        assert_eq!(Automorphism::identity(3).apply_description(&d).unwrap(), d);
    }

    #[test]
    fn lp_over_chipped_and_its_hull() {
        let one = vec![1.0; 3];
        assert!((max_linear(&chipped(3, 0.5).unwrap(), &one).unwrap() - 2.5).abs() < 1e-9);
        let pts = integer_points(&chipped(3, 0.5).unwrap()).unwrap();
        assert!((max_over_hull(3, &pts, &one).unwrap() - 2.0).abs() < 1e-9);
    }
}
