//! tilde-LS membership: exact 2-D geometry on the diagonal of the chipped
//! hypercube, and the disjunctive LP for arbitrary descriptions.

use rayon::prelude::*;

use crate::combinatorics::{binomial, for_each_submask, full_mask};
use crate::error::{guard, invalid, Error, Result};
use crate::polytopes::{lp_feasible, lp_max, LinearDescription, LpProblem};

/// Largest `n` for the all-subsets disjunctive LP.
pub const MAX_LP_N: usize = 6;
/// Largest `n` for the single-subset symmetric LP.
pub const MAX_LP_N_SYMMETRIC: usize = 10;

/// `max{θ : θē ∈ tilde-LS^k(P(n, ρ))}` for non-integer `ρ ∈ (0, n)` and `1 <= k <= n`.
pub fn tilde_ls_max_symmetric(n: usize, rho: f64, k: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < n as f64) || rho.fract() == 0.0 {
        return Err(invalid(format!("rho must be non-integer in (0, {n}), got {rho}")));
    }
    if k == 0 || k > n {
        return Err(invalid(format!("level must satisfy 1 <= k <= n, got k = {k}")));
    }
    if k == n {
        return Ok((n as f64 - rho.ceil()) / n as f64);
    }
    // Block averages (fixed coordinates, free coordinates) of the pattern with i ones.
    let mut pts = Vec::with_capacity(2 * (k + 1));
    for i in 0..=k {
        let c = ((n - i) as f64 - rho) / (n - k) as f64;
        if c < 0.0 {
            continue;
        }
        let x = i as f64 / k as f64;
        pts.push((x, 0.0));
        pts.push((x, c.min(1.0)));
    }
    let mut best = f64::NEG_INFINITY;
    for (a, p) in pts.iter().enumerate() {
        let dp = p.0 - p.1;
        if dp == 0.0 {
            best = best.max(p.0);
        }
        for q in &pts[a + 1..] {
            let dq = q.0 - q.1;
            if dp * dq < 0.0 {
                let lam = dq / (dq - dp);
                best = best.max(lam * p.0 + (1.0 - lam) * q.0);
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Infeasible)
    }
}

/// Index sets `S` with `|S| = k` (or only `[k]`).
fn index_sets(n: usize, k: usize, symmetric_shortcut: bool) -> Result<Vec<u32>> {
    if k > n {
        return Err(invalid(format!("level {k} exceeds n = {n}")));
    }
    if symmetric_shortcut {
        guard("symmetric tilde-LS LP", n, MAX_LP_N_SYMMETRIC)?;
        return Ok(vec![full_mask(k)]);
    }
    guard("tilde-LS LP", n, MAX_LP_N)?;
    Ok((0..=full_mask(n)).filter(|s| s.count_ones() as usize == k).collect())
}

/// Appends the disjunctive blocks for `S` to `lp`, with variables starting at
/// `offset`; `x_i` is the coefficient vector (in the full variable space) that
/// the coupling rows must equal.
fn add_blocks(
    lp: &mut LpProblem,
    desc: &LinearDescription,
    s: u32,
    offset: usize,
    coupling: &dyn Fn(usize) -> (f64, Vec<f64>),
) -> Result<()> {
    let n = desc.n();
    let free: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 0).collect();
    let width = 1 + free.len();
    let mut patterns = Vec::new();
    for_each_submask(s, |t| patterns.push(t));
    let total = lp.num_vars();
    let var = |b: usize, slot: usize| offset + b * width + slot;
    for (b, &t) in patterns.iter().enumerate() {
        for ineq in desc.inequalities() {
            let mut row = vec![0.0; total];
            row[var(b, 0)] = ineq.a0 + (0..n).filter(|i| t >> i & 1 == 1).map(|i| ineq.a[i]).sum::<f64>();
            for (f, &i) in free.iter().enumerate() {
                row[var(b, 1 + f)] = ineq.a[i];
            }
            lp.add_ge(0.0, row)?;
        }
    }
    let mut row = vec![0.0; total];
    for b in 0..patterns.len() {
        row[var(b, 0)] = 1.0;
    }
    lp.add_eq(-1.0, row)?;
    for i in 0..n {
        let (c0, mut row) = coupling(i);
        for x in row.iter_mut() {
            *x = -*x;
        }
        if s >> i & 1 == 1 {
            for (b, &t) in patterns.iter().enumerate() {
                if t >> i & 1 == 1 {
                    row[var(b, 0)] += 1.0;
                }
            }
        } else {
            let f = free.iter().position(|&j| j == i).expect("free index");
            for b in 0..patterns.len() {
                row[var(b, 1 + f)] += 1.0;
            }
        }
        lp.add_eq(-c0, row)?;
    }
    Ok(())
}

fn block_vars(n: usize, k: usize) -> usize {
    (1usize << k) * (1 + n - k)
}

/// `x ∈ tilde-LS^k(desc)`: for every `S` (or `S = [k]` under the shortcut) the
/// disjunctive LP over the `2^k` patterns on `S` is feasible.
pub fn tilde_ls_membership_lp(desc: &LinearDescription, x: &[f64], k: usize, symmetric_shortcut: bool) -> Result<bool> {
    let n = desc.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
    }
    let sets = index_sets(n, k, symmetric_shortcut)?;
    let nv = block_vars(n, k);
    let verdicts: Vec<Result<bool>> = sets
        .par_iter()
        .map(|&s| {
            let mut lp = LpProblem::new(nv);
            add_blocks(&mut lp, desc, s, 0, &|i| (x[i], vec![0.0; nv]))?;
            Ok(lp_feasible(&lp))
        })
        .collect();
    for v in verdicts {
        if !v? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `max{θ : θē ∈ tilde-LS^k(desc)}` as a single LP with `θ` shared by all blocks.
pub fn tilde_ls_max_lp(desc: &LinearDescription, k: usize, symmetric_shortcut: bool) -> Result<f64> {
    let n = desc.n();
    let sets = index_sets(n, k, symmetric_shortcut)?;
    let per = block_vars(n, k);
    let nv = 1 + per * sets.len();
    let mut lp = LpProblem::new(nv);
    let theta = |_: usize| {
        let mut row = vec![0.0; nv];
        row[0] = 1.0;
        (0.0, row)
    };
    for (j, &s) in sets.iter().enumerate() {
        add_blocks(&mut lp, desc, s, 1 + j * per, &theta)?;
    }
    let mut c = vec![0.0; nv];
    c[0] = 1.0;
    lp.set_objective(c)?;
    lp_max(&lp)
}

/// Bisection on `θ` for `θē ∈ tilde-LS^k(desc)` via the membership LP; the
/// feasible set on the diagonal is an interval containing 0 when `0 ∈ desc`.
pub fn tilde_ls_max_bisect(desc: &LinearDescription, k: usize, symmetric_shortcut: bool, tol: f64) -> Result<f64> {
    let n = desc.n();
    let member = |t: f64| tilde_ls_membership_lp(desc, &vec![t; n], k, symmetric_shortcut);
    if !member(0.0)? {
        return Err(Error::Infeasible);
    }
    if member(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Number of disjunctive blocks the general LP solves.
pub fn tilde_ls_block_count(n: usize, k: usize) -> f64 {
    binomial(n, k) * (1u64 << k) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytopes::{chipped, contains, integer_hull_chipped, max_linear};

    fn closed_form(n: usize, rho: f64, k: usize) -> f64 {
        let (n, k) = (n as f64, k as f64);
        (n - k + (k - 1.0) * rho) / (n - k + k * rho)
    }

    #[test]
    fn geometry_matches_closed_form_below_one() {
        assert!((tilde_ls_max_symmetric(10, 0.5, 5).unwrap() - 14.0 / 15.0).abs() < 1e-15);
        for n in 2..=9 {
            for k in 1..=n {
                for r in 1..10 {
                    let rho = r as f64 / 10.0;
                    let g = tilde_ls_max_symmetric(n, rho, k).unwrap();
                    assert!((g - closed_form(n, rho, k)).abs() < 1e-12, "n={n} k={k} rho={rho}");
                }
            }
        }
    }

    #[test]
    fn geometry_at_full_level_is_hull_max() {
        for n in 2..=7 {
            for r in [0.3, 1.5, 2.7] {
                if r >= n as f64 {
                    continue;
                }
                let hull = max_linear(&integer_hull_chipped(n, r).unwrap(), &vec![1.0; n]).unwrap();
                assert!((tilde_ls_max_symmetric(n, r, n).unwrap() - hull / n as f64).abs() < 1e-9);
            }
        }
        assert!(tilde_ls_max_symmetric(4, 2.0, 1).is_err());
        assert!(tilde_ls_max_symmetric(4, 0.5, 0).is_err());
    }

    #[test]
    fn lp_matches_geometry() {
        for n in 2..=4 {
            for k in 1..=n {
                for rho in [0.3, 0.9, 1.4, 2.6] {
                    if rho >= n as f64 {
                        continue;
                    }
                    let desc = chipped(n, rho).unwrap();
                    let lp = tilde_ls_max_lp(&desc, k, false).unwrap();
                    let sym = tilde_ls_max_lp(&desc, k, true).unwrap();
                    let geo = tilde_ls_max_symmetric(n, rho, k).unwrap();
                    assert!((lp - geo).abs() < 1e-7, "n={n} k={k} rho={rho}: {lp} vs {geo}");
                    assert!((sym - geo).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn membership_brackets_closed_form() {
        let desc = chipped(4, 0.5).unwrap();
        let t = closed_form(4, 0.5, 2);
        assert!(tilde_ls_membership_lp(&desc, &[t - 1e-3; 4], 2, false).unwrap());
        assert!(!tilde_ls_membership_lp(&desc, &[t + 1e-3; 4], 2, false).unwrap());
        let b = tilde_ls_max_bisect(&desc, 2, true, 1e-9).unwrap();
        assert!((b - t).abs() < 1e-6);
    }

    #[test]
    fn full_rank_witness() {
        for (n, rho) in [(4usize, 1.5f64), (3, 0.4), (5, 2.3), (5, 3.7)] {
            let l = n as f64 - rho.ceil();
            let eps = f64::min(rho.ceil() - rho, l / (n - 1) as f64);
            let v = (l * (1.0 - eps) + eps) / (n as f64 * (1.0 - eps) + eps);
            let x = vec![v; n];
            let desc = chipped(n, rho).unwrap();
            assert!(tilde_ls_membership_lp(&desc, &x, n - 1, false).unwrap(), "n={n} rho={rho}");
            assert!(!contains(&integer_hull_chipped(n, rho).unwrap(), &x, 1e-12).unwrap());
        }
    }

    #[test]
    fn size_guards() {
        let desc = chipped(7, 0.5).unwrap();
        assert!(matches!(tilde_ls_membership_lp(&desc, &[0.5; 7], 2, false), Err(Error::SizeGuard { .. })));
        assert!(tilde_ls_membership_lp(&desc, &[0.5; 7], 2, true).unwrap());
        assert_eq!(tilde_ls_block_count(6, 3), 160.0);
    }
}
