//! Cylinder sets `S|1 ∩ T|0` on `{0,1}^n` with the index families that label
//! lifted matrices, and the transform matrices between those families.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{guard, invalid, Error, Result, MAX_DIMENSION};
use crate::symmat::Matrix;

/// Largest ground set representable by a mask.
pub const MAX_GROUND_SET: usize = 24;

/// Subset of `[n]` as a bit mask; bit `i` stands for element `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubsetId(pub u32);

impl SubsetId {
    pub const EMPTY: SubsetId = SubsetId(0);

    pub fn full(n: usize) -> SubsetId {
        SubsetId(full_mask(n))
    }

    /// From 1-based element labels.
    pub fn from_elements(elems: &[usize]) -> SubsetId {
        SubsetId(elems.iter().fold(0, |m, &e| m | (1 << (e - 1))))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, elem: usize) -> bool {
        self.0 >> (elem - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetId) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 | other.0)
    }

    /// 1-based element labels in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 >> i & 1 == 1).map(|i| i + 1)
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Partial assignment `ones|1 ∩ zeros|0`. All empty cylinders are one canonical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cylinder {
    n: u8,
    ones: SubsetId,
    zeros: SubsetId,
    empty: bool,
}

impl Cylinder {
    /// The full space `F = ∅|1`.
    pub fn full(n: usize) -> Cylinder {
        Cylinder { n: n as u8, ones: SubsetId::EMPTY, zeros: SubsetId::EMPTY, empty: false }
    }

    pub fn empty(n: usize) -> Cylinder {
        Cylinder { n: n as u8, ones: SubsetId::EMPTY, zeros: SubsetId::EMPTY, empty: true }
    }

    /// Overlapping masks give the empty cylinder.
    pub fn new(n: usize, ones: SubsetId, zeros: SubsetId) -> Result<Cylinder> {
        if n > MAX_GROUND_SET {
            return Err(Error::SizeGuard { what: "cylinder", n, limit: MAX_GROUND_SET });
        }
        let fm = full_mask(n);
        if ones.0 & !fm != 0 || zeros.0 & !fm != 0 {
            return Err(invalid(format!("masks exceed ground set of size {n}")));
        }
        Ok(Cylinder::from_masks(n, ones.0, zeros.0))
    }

    pub(crate) fn from_masks(n: usize, ones: u32, zeros: u32) -> Cylinder {
        if ones & zeros != 0 {
            Cylinder::empty(n)
        } else {
            Cylinder { n: n as u8, ones: SubsetId(ones), zeros: SubsetId(zeros), empty: false }
        }
    }

    pub fn ones_set(n: usize, s: SubsetId) -> Cylinder {
        Cylinder::from_masks(n, s.0, 0)
    }

    pub fn zeros_set(n: usize, t: SubsetId) -> Cylinder {
        Cylinder::from_masks(n, 0, t.0)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn ones(&self) -> SubsetId {
        self.ones
    }

    pub fn zeros(&self) -> SubsetId {
        self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_full(&self) -> bool {
        !self.empty && self.ones.is_empty() && self.zeros.is_empty()
    }

    /// Number of fixed coordinates `|S| + |T|`.
    pub fn order(&self) -> usize {
        self.ones.len() + self.zeros.len()
    }

    /// Whether the 0/1 point `x` (bit mask of its ones) lies in the cylinder.
    pub fn contains_point(&self, x: u32) -> bool {
        !self.empty && self.ones.0 & !x == 0 && self.zeros.0 & x == 0
    }

    fn intersect_unchecked(&self, other: &Cylinder) -> Cylinder {
        if self.empty || other.empty {
            return Cylinder::empty(self.n());
        }
        Cylinder::from_masks(self.n(), self.ones.0 | other.ones.0, self.zeros.0 | other.zeros.0)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            write!(f, "∅")
        } else if self.is_full() {
            write!(f, "F")
        } else {
            write!(f, "{}|1∩{}|0", self.ones, self.zeros)
        }
    }
}

/// Intersection of two cylinders over the same ground set.
pub fn cylinder_intersect(a: &Cylinder, b: &Cylinder) -> Result<Cylinder> {
    if a.n != b.n {
        return Err(invalid(format!("ground sets differ: {} vs {}", a.n, b.n)));
    }
    Ok(a.intersect_unchecked(b))
}

/// Which cylinders a family admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    /// `S|1 ∩ T|0` with `|S| + |T| <= level`.
    Full,
    /// `S|1` with `|S| <= level`.
    Positive,
    /// `T|0` with `|T| <= level`.
    Negative,
}

/// Ordered family of cylinders with reverse lookup.
///
/// Order: ascending `|S| + |T|`, then ascending `(ones, zeros)` masks. `F` is first
/// and, for a positive family of level `n`, `[n]|1` is last.
#[derive(Debug, Clone)]
pub struct IndexFamily {
    n: usize,
    level: usize,
    kind: FamilyKind,
    members: Vec<Cylinder>,
    lookup: HashMap<(u32, u32), usize>,
}

impl IndexFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Cylinder] {
        &self.members
    }

    pub fn get(&self, i: usize) -> Cylinder {
        self.members[i]
    }

    pub fn index_of(&self, c: &Cylinder) -> Option<usize> {
        if c.empty || c.n() != self.n {
            return None;
        }
        self.lookup.get(&(c.ones.0, c.zeros.0)).copied()
    }

    pub fn index_of_masks(&self, ones: u32, zeros: u32) -> Option<usize> {
        if ones & zeros != 0 {
            return None;
        }
        self.lookup.get(&(ones, zeros)).copied()
    }

    /// Position of `S|1`.
    pub fn index_of_ones(&self, s: u32) -> Option<usize> {
        self.lookup.get(&(s, 0)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cylinder> {
        self.members.iter()
    }
}

/// Builds `A_level`, `A_level^+` or `A_level^-` over `[n]`.
pub fn family(n: usize, level: usize, kind: FamilyKind) -> Result<IndexFamily> {
    if level > n {
        return Err(invalid(format!("level {level} exceeds n = {n}")));
    }
    guard("index family", n, MAX_DIMENSION)?;
    let fm = full_mask(n);
    let mut keys: Vec<(usize, u32, u32)> = Vec::new();
    match kind {
        FamilyKind::Positive => {
            for s in 0..=fm {
                if s.count_ones() as usize <= level {
                    keys.push((s.count_ones() as usize, s, 0));
                }
            }
        }
        FamilyKind::Negative => {
            for t in 0..=fm {
                if t.count_ones() as usize <= level {
                    keys.push((t.count_ones() as usize, 0, t));
                }
            }
        }
        FamilyKind::Full => {
            for s in 0..=fm {
                let ps = s.count_ones() as usize;
                if ps > level {
                    continue;
                }
                let rest = fm & !s;
                // Enumerate submasks of the complement.
                let mut t = rest;
                loop {
                    let pt = t.count_ones() as usize;
                    if ps + pt <= level {
                        keys.push((ps + pt, s, t));
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & rest;
                }
            }
        }
    }
    keys.sort_unstable();
    let members: Vec<Cylinder> = keys.iter().map(|&(_, s, t)| Cylinder::from_masks(n, s, t)).collect();
    let lookup = keys.iter().enumerate().map(|(i, &(_, s, t))| ((s, t), i)).collect();
    Ok(IndexFamily { n, level, kind, members, lookup })
}

/// `Z[S, T] = 1` iff `S ⊆ T`, over `A_n^+`.
pub fn zeta_matrix(n: usize) -> Result<Matrix> {
    let fam = family(n, n, FamilyKind::Positive)?;
    Ok(Matrix::from_fn(
        fam.len(),
        fam.len(),
        |i, j| {
            if fam.get(i).ones.is_subset_of(fam.get(j).ones) {
                1.0
            } else {
                0.0
            }
        },
    ))
}

/// `M[S, T] = (-1)^{|T \ S|}` iff `S ⊆ T`, over `A_n^+`; the inverse of [`zeta_matrix`].
pub fn mobius_matrix(n: usize) -> Result<Matrix> {
    let fam = family(n, n, FamilyKind::Positive)?;
    Ok(Matrix::from_fn(fam.len(), fam.len(), |i, j| {
        let (s, t) = (fam.get(i).ones, fam.get(j).ones);
        if s.is_subset_of(t) {
            sign((t.0 & !s.0).count_ones())
        } else {
            0.0
        }
    }))
}

pub(crate) fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Target family of an [`l_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LTarget {
    Positive,
    Negative,
}

/// Inclusion-exclusion expansion of each `S|1 ∩ T|0 ∈ A_k` in the target basis.
///
/// Positive target: `L[S|1∩T|0, U|1] = (-1)^{|U \ S|}` for `S ⊆ U ⊆ S ∪ T`.
/// Negative target: `L[S|1∩T|0, U|0] = (-1)^{|U \ T|}` for `T ⊆ U ⊆ S ∪ T`.
/// With `M` the target-indexed moment matrix, `L M L^T` is the `A_k`-indexed one.
pub fn l_matrix(n: usize, k: usize, target: LTarget) -> Result<Matrix> {
    let rows = family(n, k, FamilyKind::Full)?;
    let cols = match target {
        LTarget::Positive => family(n, k, FamilyKind::Positive)?,
        LTarget::Negative => family(n, k, FamilyKind::Negative)?,
    };
    let mut l = Matrix::zeros(rows.len(), cols.len());
    for (i, c) in rows.iter().enumerate() {
        let (base, free) = match target {
            LTarget::Positive => (c.ones.0, c.zeros.0),
            LTarget::Negative => (c.zeros.0, c.ones.0),
        };
        for_each_submask(free, |w| {
            let u = base | w;
            let j = match target {
                LTarget::Positive => cols.index_of_masks(u, 0),
                LTarget::Negative => cols.index_of_masks(0, u),
            }
            .expect("expansion stays within level");
            l.set(i, j, sign(w.count_ones()));
        });
    }
    Ok(l)
}

/// `U[S|1, T|1∩W|0] = (-1)^{|S \ T|}` for `T ⊆ S ⊆ T ∪ W`, rows `A_l^+`, columns `A_l`.
pub fn u_matrix(n: usize, level: usize) -> Result<Matrix> {
    let rows = family(n, level, FamilyKind::Positive)?;
    let cols = family(n, level, FamilyKind::Full)?;
    Ok(Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let s = rows.get(i).ones.0;
        let (t, w) = (cols.get(j).ones.0, cols.get(j).zeros.0);
        if t & !s == 0 && s & !(t | w) == 0 {
            sign((s & !t).count_ones())
        } else {
            0.0
        }
    }))
}

/// Calls `f` on every submask of `m`, including `0` and `m`.
pub(crate) fn for_each_submask(m: u32, mut f: impl FnMut(u32)) {
    let mut s = m;
    loop {
        f(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyl(n: usize, ones: &[usize], zeros: &[usize]) -> Cylinder {
        Cylinder::new(n, SubsetId::from_elements(ones), SubsetId::from_elements(zeros)).unwrap()
    }

    #[test]
    fn full_space_is_identity() {
        let a = cyl(3, &[1], &[2]);
        assert_eq!(cylinder_intersect(&Cylinder::full(3), &a).unwrap(), a);
    }

    #[test]
    fn contradictory_assignment_is_empty() {
        let r = cylinder_intersect(&cyl(2, &[1], &[]), &cyl(2, &[], &[1])).unwrap();
        assert!(r.is_empty());
        assert_eq!(r, Cylinder::empty(2));
        assert_eq!(cyl(3, &[1, 2], &[2]), Cylinder::empty(3));
    }

    #[test]
    fn disjoint_unions() {
        let r = cylinder_intersect(&cyl(3, &[1], &[2]), &cyl(3, &[3], &[])).unwrap();
        assert_eq!(r, cyl(3, &[1, 3], &[2]));
    }

    #[test]
    fn mismatched_ground_sets_rejected() {
        assert!(cylinder_intersect(&Cylinder::full(2), &Cylinder::full(3)).is_err());
        assert!(Cylinder::new(2, SubsetId(4), SubsetId(0)).is_err());
    }

    #[test]
    fn level_one_family() {
        let f = family(2, 1, FamilyKind::Full).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.get(0).is_full());
        for c in [cyl(2, &[1], &[]), cyl(2, &[2], &[]), cyl(2, &[], &[1]), cyl(2, &[], &[2])] {
            assert!(f.index_of(&c).is_some());
        }
        for n in 1..7 {
            assert_eq!(family(n, 1, FamilyKind::Positive).unwrap().len(), n + 1);
        }
    }

    #[test]
    fn positive_family_ends_with_ground_set() {
        let f = family(3, 3, FamilyKind::Positive).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f.get(7), cyl(3, &[1, 2, 3], &[]));
        assert!(family(3, 4, FamilyKind::Full).is_err());
    }

    #[test]
    fn family_sizes_match_counts() {
        for n in 1..=6 {
            for l in 0..=n {
                let plus: f64 = (0..=l).map(|i| binomial(n, i)).sum();
                assert_eq!(family(n, l, FamilyKind::Positive).unwrap().len() as f64, plus);
                let full: f64 = (0..=l)
                    .flat_map(|s| (0..=l - s).map(move |t| (s, t)))
                    .map(|(s, t)| binomial(n, s) * binomial(n - s, t))
                    .sum();
                assert_eq!(family(n, l, FamilyKind::Full).unwrap().len() as f64, full);
            }
        }
    }

    #[test]
    fn one_dimensional_zeta_mobius() {
        let z = zeta_matrix(1).unwrap();
        assert_eq!(z.as_slice(), &[1.0, 1.0, 0.0, 1.0]);
        let m = mobius_matrix(1).unwrap();
        assert_eq!(m.as_slice(), &[1.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn mobius_sign_and_zeta_last_column() {
        let f = family(2, 2, FamilyKind::Positive).unwrap();
        let m = mobius_matrix(2).unwrap();
        assert_eq!(m.get(0, f.index_of_ones(0b11).unwrap()), 1.0);
        let z = zeta_matrix(4).unwrap();
        assert!((0..z.rows()).all(|i| z.get(i, z.cols() - 1) == 1.0));
    }

    #[test]
    fn zeta_times_mobius_is_identity() {
        for n in 1..=10 {
            let p = zeta_matrix(n).unwrap().mul(&mobius_matrix(n).unwrap()).unwrap();
            assert_eq!(p.max_abs_diff(&Matrix::identity(p.rows())), 0.0, "n = {n}");
        }
    }

    #[test]
    fn l_matrix_entries() {
        let rows = family(3, 2, FamilyKind::Full).unwrap();
        let cols = family(3, 2, FamilyKind::Positive).unwrap();
        let l = l_matrix(3, 2, LTarget::Positive).unwrap();
        assert_eq!(l.get(0, 0), 1.0);
        let r = rows.index_of(&cyl(3, &[1], &[2])).unwrap();
        assert_eq!(l.get(r, cols.index_of_ones(0b011).unwrap()), -1.0);
        assert_eq!(l.get(r, cols.index_of_ones(0b001).unwrap()), 1.0);
        let r = rows.index_of(&cyl(3, &[1, 2], &[])).unwrap();
        assert_eq!(l.get(r, cols.index_of_ones(0b011).unwrap()), 1.0);
        assert_eq!(l.row(r).iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn l_is_transpose_of_u() {
        for n in 1..=4 {
            for k in 0..=n {
                let l = l_matrix(n, k, LTarget::Positive).unwrap();
                assert_eq!(l, u_matrix(n, k).unwrap().transpose());
            }
        }
    }

    #[test]
    fn u_matrix_entries() {
        let rows = family(2, 2, FamilyKind::Positive).unwrap();
        let cols = family(2, 2, FamilyKind::Full).unwrap();
        let u = u_matrix(2, 2).unwrap();
        let at = |r: Cylinder, c: Cylinder| u.get(rows.index_of(&r).unwrap(), cols.index_of(&c).unwrap());
        assert_eq!(at(cyl(2, &[1], &[]), cyl(2, &[1], &[])), 1.0);
        assert_eq!(at(cyl(2, &[1], &[]), cyl(2, &[], &[1])), -1.0);
        assert_eq!(at(cyl(2, &[2], &[]), cyl(2, &[1], &[])), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 8), 12870.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert!((ln_binomial(30, 12) - binomial(30, 12).ln()).abs() < 1e-12);
    }
}
