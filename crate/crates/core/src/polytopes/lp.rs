//! Dense two-phase simplex with Bland's rule over nonnegative variables.

use crate::error::{Error, Result};

use super::Inequality;

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

/// `max c^T x` subject to `a0 + a^T x >= 0` rows, `a0 + a^T x = 0` rows, and `x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LpProblem {
    num_vars: usize,
    ge: Vec<Inequality>,
    eq: Vec<Inequality>,
    objective: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem { num_vars, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn check(&self, a: &[f64]) -> Result<()> {
        if a.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, actual: a.len() });
        }
        Ok(())
    }

    /// Adds `a0 + a^T x >= 0`.
    pub fn add_ge(&mut self, a0: f64, a: Vec<f64>) -> Result<&mut Self> {
        self.check(&a)?;
        self.ge.push(Inequality::new(a0, a)?);
        Ok(self)
    }

    /// Adds `a0 + a^T x = 0`.
    pub fn add_eq(&mut self, a0: f64, a: Vec<f64>) -> Result<&mut Self> {
        self.check(&a)?;
        self.eq.push(Inequality::new(a0, a)?);
        Ok(self)
    }

    pub fn set_objective(&mut self, c: Vec<f64>) -> Result<&mut Self> {
        self.check(&c)?;
        self.objective = Some(c);
        Ok(self)
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self.objective.as_deref())
    }
}

pub fn lp_feasible(p: &LpProblem) -> bool {
    let mut q = p.clone();
    q.objective = None;
    !matches!(q.solve(), LpOutcome::Infeasible)
}

/// Optimal objective value; errors distinguish infeasible from unbounded.
pub fn lp_max(p: &LpProblem) -> Result<f64> {
    match p.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Err(Error::Infeasible),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// Columns at or above this index are artificial.
    art_start: usize,
    width: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        let n = p.num_vars;
        let n_slack = p.ge.len();
        // Each row: coefficient vector over (x, slacks), rhs, slack column if any.
        let mut raw: Vec<(Vec<f64>, f64, Option<usize>)> = Vec::new();
        for (k, ineq) in p.ge.iter().enumerate() {
            // a^T x - s = -a0
            let mut r = ineq.a.clone();
            r.resize(n + n_slack, 0.0);
            r[n + k] = -1.0;
            raw.push((r, -ineq.a0, Some(n + k)));
        }
        for ineq in &p.eq {
            let mut r = ineq.a.clone();
            r.resize(n + n_slack, 0.0);
            raw.push((r, -ineq.a0, None));
        }
        let art_start = n + n_slack;
        let mut needs_art = Vec::new();
        let mut rows = Vec::with_capacity(raw.len());
        let mut basis = Vec::with_capacity(raw.len());
        for (i, (mut r, mut b, slack)) in raw.into_iter().enumerate() {
            if b < 0.0 || (b == 0.0 && slack.is_some()) {
                r.iter_mut().for_each(|v| *v = -*v);
                b = -b;
            }
            let slack_basic = slack.filter(|&s| r[s] == 1.0);
            r.push(b);
            rows.push(r);
            match slack_basic {
                Some(s) => basis.push(s),
                None => {
                    basis.push(usize::MAX);
                    needs_art.push(i);
                }
            }
        }
        let width = art_start + needs_art.len();
        for r in rows.iter_mut() {
            let b = r.pop().unwrap();
            r.resize(width, 0.0);
            r.push(b);
        }
        for (k, &i) in needs_art.iter().enumerate() {
            rows[i][art_start + k] = 1.0;
            basis[i] = art_start + k;
        }
        Tableau { rows, basis, num_vars: n, art_start, width }
    }

    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    row.iter_mut().zip(&pr).for_each(|(v, p)| *v -= f * p);
                    row[c] = 0.0;
                }
            }
        }
        let f = cost[c];
        if f != 0.0 {
            cost.iter_mut().zip(&pr).for_each(|(v, p)| *v -= f * p);
            cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Maximizes with reduced costs `cost` (last entry holds minus the objective value).
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &mut [f64], allowed: usize) -> bool {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..allowed).find(|&j| cost[j] > PIVOT_TOL) else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 * br.abs().max(1.0)
                                || (ratio <= br + 1e-12 * br.abs().max(1.0) && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c, cost),
            }
        }
        panic!("simplex exceeded {MAX_PIVOTS} pivots");
    }

    fn run(mut self, objective: Option<&[f64]>) -> LpOutcome {
        let scale = self.rows.iter().map(|r| r[self.width].abs()).fold(1.0, f64::max);
        if self.width > self.art_start {
            // Phase 1: maximize -(sum of artificials).
            let mut cost = vec![0.0; self.width + 1];
            for i in 0..self.rows.len() {
                if self.basis[i] >= self.art_start {
                    for (j, c) in cost.iter_mut().enumerate() {
                        if j < self.art_start || j == self.width {
                            *c += self.rows[i][j];
                        }
                    }
                }
            }
            self.optimize(&mut cost, self.art_start);
            if cost[self.width] > FEAS_TOL * scale {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }
        let Some(c) = objective else {
            return LpOutcome::Optimal { value: 0.0, x: self.solution() };
        };
        let mut cost = vec![0.0; self.width + 1];
        cost[..self.num_vars].copy_from_slice(c);
        for i in 0..self.rows.len() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.rows[i];
                for j in 0..=self.width {
                    if j != self.basis[i] {
                        cost[j] -= cb * row[j];
                    }
                }
                cost[self.basis[i]] = 0.0;
            }
        }
        if !self.optimize(&mut cost, self.art_start) {
            return LpOutcome::Unbounded;
        }
        let x = self.solution();
        let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, x }
    }

    fn drive_out_artificials(&mut self) {
        let mut dummy = vec![0.0; self.width + 1];
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.art_start {
                match (0..self.art_start).find(|&j| self.rows[i][j].abs() > PIVOT_TOL) {
                    Some(j) => {
                        self.pivot(i, j, &mut dummy);
                        i += 1;
                    }
                    None => {
                        // Redundant equality.
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rhs(i).max(0.0);
            }
        }
        x
    }
}
