//! k-small obstructions of a packing-type description and the refined polytope
//! that cuts them off.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::combinatorics::{for_each_submask, SubsetId};
use crate::error::{guard, invalid, Result, MAX_DIMENSION};
use crate::polytopes::{FamilyTag, Inequality, LinearDescription};

/// Which size clause admitted the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `|O| <= k + 1`.
    Small,
    /// `|O| >= |supp(a)| - (k + 1)`.
    Large,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub set: SubsetId,
    /// Position in `desc.inequalities()`.
    pub ineq_index: usize,
    pub branch: Branch,
}

/// `(A, b)` for the row `A x <= b` equivalent to `a0 + a^T x >= 0`.
fn packing_row(ineq: &Inequality, index: usize) -> Result<(Vec<f64>, f64)> {
    let a: Vec<f64> = ineq.a.iter().map(|v| -v).collect();
    let b = ineq.a0;
    if a.iter().any(|&v| v < 0.0) || b <= 0.0 {
        return Err(invalid(format!("inequality {index} is not of the form A x <= b with A >= 0 and b > 0")));
    }
    Ok((a, b))
}

fn branch_of(size: usize, support: usize, k: usize) -> Option<Branch> {
    let small = size <= k + 1;
    let large = size + k + 1 >= support;
    match (small, large) {
        (true, true) => Some(Branch::Both),
        (true, false) => Some(Branch::Small),
        (false, true) => Some(Branch::Large),
        (false, false) => None,
    }
}

/// Every `(O, i)` with `O ⊆ supp(A_i)`, `sum_{j in O} A_ij > b_i` and a size clause,
/// for each non-box inequality `i`. Sorted by inequality, then mask.
pub fn enumerate_obstructions(desc: &LinearDescription, k: usize) -> Result<Vec<Obstruction>> {
    guard("obstruction enumeration", desc.n(), MAX_DIMENSION)?;
    let mut out = Vec::new();
    for (q, ineq) in desc.inequalities().iter().enumerate() {
        if ineq.box_facet().is_some() {
            continue;
        }
        let (a, b) = packing_row(ineq, q)?;
        let supp = a.iter().enumerate().filter(|(_, &v)| v > 0.0).fold(0u32, |m, (j, _)| m | 1 << j);
        let support = supp.count_ones() as usize;
        let mut found = Vec::new();
        for_each_submask(supp, |o| {
            let weight: f64 = (0..a.len()).filter(|j| o >> j & 1 == 1).map(|j| a[j]).sum();
            if weight > b {
                if let Some(branch) = branch_of(o.count_ones() as usize, support, k) {
                    found.push(Obstruction { set: SubsetId(o), ineq_index: q, branch });
                }
            }
        });
        found.sort_by_key(|o| o.set.0);
        out.extend(found);
    }
    Ok(out)
}

/// The description with `sum_{i in O} x_i <= |O| - 1` appended for each distinct
/// obstruction set `O`.
pub fn refined_polytope(desc: &LinearDescription, k: usize) -> Result<LinearDescription> {
    let n = desc.n();
    let sets: BTreeSet<u32> = enumerate_obstructions(desc, k)?.into_iter().map(|o| o.set.0).collect();
    let mut cuts = desc.cuts().to_vec();
    for o in sets {
        let a = (0..n).map(|i| if o >> i & 1 == 1 { -1.0 } else { 0.0 }).collect();
        cuts.push(Inequality::new(o.count_ones() as f64 - 1.0, a)?);
    }
    LinearDescription::new(n, cuts, FamilyTag::Custom)
}
