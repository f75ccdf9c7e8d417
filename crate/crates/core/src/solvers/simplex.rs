//! Dense two-phase primal simplex with bounded variables and Bland's rule.
//!
//! Solves `min cᵀx  s.t.  row_i · x (= | ≤) b_i,  0 ≤ x ≤ u` for small dense
//! problems. Variables at their upper bound are handled by the substitution
//! `x = u − x̃`, so every nonbasic variable sits at zero in the working
//! coordinates. Entering and leaving candidates are always chosen by lowest
//! index, which prevents cycling and makes the returned vertex deterministic.

use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const FEASIBILITY_TOL: f64 = 1e-6;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Eq,
    Le,
}

#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub cost: Vec<f64>,
    /// Upper bounds, `f64::INFINITY` for none. Lower bounds are all zero.
    pub upper: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
    /// Variables that start nonbasic at their upper bound instead of zero.
    pub start_at_upper: Vec<bool>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    /// Some nonbasic variable has zero reduced cost at the optimum, so other
    /// optimal vertices may exist.
    pub tied: bool,
}

impl LinearProgram {
    pub fn new(cost: Vec<f64>) -> Self {
        let n = cost.len();
        Self {
            cost,
            upper: vec![f64::INFINITY; n],
            rows: Vec::new(),
            start_at_upper: vec![false; n],
        }
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::build(self).run()
    }
}

struct Tableau {
    /// Row-major `m × ncols` constraint coefficients in the current basis.
    t: Vec<f64>,
    rhs: Vec<f64>,
    m: usize,
    ncols: usize,
    n_structural: usize,
    first_artificial: usize,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    flipped: Vec<bool>,
    upper: Vec<f64>,
    cost: Vec<f64>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.cost.len();
        let m = lp.rows.len();
        let n_slack = lp.rows.iter().filter(|r| r.1 == Relation::Le).count();

        // Orient rows so the initial basic values are nonnegative, decide
        // which rows can start with their slack in the basis.
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (coef, _, b) in &lp.rows {
            let mut b = *b;
            for j in 0..n {
                if lp.start_at_upper[j] {
                    b -= coef[j] * lp.upper[j];
                }
            }
            let row = (0..n)
                .map(|j| {
                    if lp.start_at_upper[j] {
                        -coef[j]
                    } else {
                        coef[j]
                    }
                })
                .collect();
            rows.push(row);
            rhs.push(b);
        }
        let needs_artificial: Vec<bool> = lp
            .rows
            .iter()
            .zip(&rhs)
            .map(|((_, rel, _), b)| *rel == Relation::Eq || *b < 0.0)
            .collect();
        let n_art = needs_artificial.iter().filter(|&&a| a).count();
        let ncols = n + n_slack + n_art;
        let first_artificial = n + n_slack;

        let mut t = vec![0.0; m * ncols];
        let mut basis = vec![0; m];
        let mut slack = n;
        let mut art = first_artificial;
        for i in 0..m {
            let sign = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
            let r = &mut t[i * ncols..(i + 1) * ncols];
            for j in 0..n {
                r[j] = sign * rows[i][j];
            }
            rhs[i] *= sign;
            if lp.rows[i].1 == Relation::Le {
                r[slack] = sign;
                if !needs_artificial[i] {
                    basis[i] = slack;
                }
                slack += 1;
            }
            if needs_artificial[i] {
                r[art] = 1.0;
                basis[i] = art;
                art += 1;
            }
        }

        let mut upper = lp.upper.clone();
        upper.resize(ncols, f64::INFINITY);
        let mut flipped = lp.start_at_upper.clone();
        flipped.resize(ncols, false);
        let mut cost = lp.cost.clone();
        cost.resize(ncols, 0.0);
        let mut is_basic = vec![false; ncols];
        for &b in &basis {
            is_basic[b] = true;
        }
        Tableau {
            t,
            rhs,
            m,
            ncols,
            n_structural: n,
            first_artificial,
            basis,
            is_basic,
            flipped,
            upper,
            cost,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.ncols + j]
    }

    /// Cost of column `j` in working coordinates.
    fn working_cost(&self, c: &[f64], j: usize) -> f64 {
        if self.flipped[j] {
            -c[j]
        } else {
            c[j]
        }
    }

    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut d: Vec<f64> = (0..self.ncols).map(|j| self.working_cost(c, j)).collect();
        for i in 0..self.m {
            let cb = self.working_cost(c, self.basis[i]);
            if cb != 0.0 {
                let row = &self.t[i * self.ncols..(i + 1) * self.ncols];
                for (dj, a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    /// Substitutes `x_j = u_j − x̃_j` for a nonbasic column.
    fn flip(&mut self, j: usize, d: &mut [f64]) {
        let u = self.upper[j];
        for i in 0..self.m {
            let idx = i * self.ncols + j;
            self.rhs[i] -= self.t[idx] * u;
            self.t[idx] = -self.t[idx];
        }
        d[j] = -d[j];
        self.flipped[j] = !self.flipped[j];
    }

    fn pivot(&mut self, r: usize, j: usize, d: &mut [f64]) {
        let nc = self.ncols;
        let p = self.t[r * nc + j];
        for k in 0..nc {
            self.t[r * nc + k] /= p;
        }
        self.rhs[r] /= p;
        let (before, rest) = self.t.split_at_mut(r * nc);
        let (pivot_row, after) = rest.split_at_mut(nc);
        for (i, row) in before.chunks_exact_mut(nc).enumerate().chain(
            after
                .chunks_exact_mut(nc)
                .enumerate()
                .map(|(k, row)| (k + r + 1, row)),
        ) {
            let f = row[j];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(pivot_row.iter()) {
                    *a -= f * b;
                }
                row[j] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
            }
        }
        let f = d[j];
        if f != 0.0 {
            for (a, b) in d.iter_mut().zip(pivot_row.iter()) {
                *a -= f * b;
            }
            d[j] = 0.0;
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }

    /// Minimizes `c` over the current feasible basis; columns at or beyond
    /// `enter_limit` never enter.
    fn optimize(&mut self, c: &[f64], enter_limit: usize, pivots: &mut usize) -> Result<Vec<f64>> {
        let mut d = self.reduced_costs(c);
        loop {
            let Some(j) = (0..enter_limit).find(|&j| !self.is_basic[j] && d[j] < -COST_TOL) else {
                return Ok(d);
            };
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::IterationLimit);
            }

            // Ratio test: (row, step, leaves at upper bound). Ties go to the
            // basic variable with the lowest index.
            let mut best: Option<(usize, f64, bool)> = None;
            for i in 0..self.m {
                let a = self.at(i, j);
                let candidate = if a > PIVOT_TOL {
                    Some(((self.rhs[i].max(0.0)) / a, false))
                } else if a < -PIVOT_TOL && self.upper[self.basis[i]].is_finite() {
                    let room = (self.upper[self.basis[i]] - self.rhs[i]).max(0.0);
                    Some((room / -a, true))
                } else {
                    None
                };
                if let Some((step, at_upper)) = candidate {
                    let better = match best {
                        None => true,
                        Some((bi, bs, _)) => {
                            step < bs - 1e-12
                                || (step <= bs + 1e-12 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, step, at_upper));
                    }
                }
            }

            let own = self.upper[j];
            match best {
                Some((_, step, _)) if own <= step => self.flip(j, &mut d),
                None if own.is_finite() => self.flip(j, &mut d),
                None => return Err(Error::Unbounded),
                Some((r, _, at_upper)) => {
                    let leaving = self.basis[r];
                    self.pivot(r, j, &mut d);
                    if at_upper {
                        self.flip(leaving, &mut d);
                    }
                    for v in self.rhs.iter_mut() {
                        if *v < 0.0 && *v > -1e-11 {
                            *v = 0.0;
                        }
                    }
                }
            }
        }
    }

    fn run(mut self) -> Result<LpSolution> {
        let mut pivots = 0;
        if self.first_artificial < self.ncols {
            let phase1: Vec<f64> = (0..self.ncols)
                .map(|j| if j >= self.first_artificial { 1.0 } else { 0.0 })
                .collect();
            self.optimize(&phase1, self.ncols, &mut pivots)?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&i| self.basis[i] >= self.first_artificial)
                .map(|i| self.rhs[i].abs())
                .sum();
            if infeasibility > FEASIBILITY_TOL {
                return Err(Error::Infeasible {
                    residual: infeasibility,
                });
            }
            // Pivot zero-valued artificials out of the basis; rows where that
            // is impossible are redundant and keep their artificial at zero.
            let mut scratch = vec![0.0; self.ncols];
            for i in 0..self.m {
                if self.basis[i] >= self.first_artificial {
                    if let Some(j) = (0..self.first_artificial)
                        .find(|&j| !self.is_basic[j] && self.at(i, j).abs() > PIVOT_TOL)
                    {
                        self.pivot(i, j, &mut scratch);
                        self.rhs[i] = self.rhs[i].max(0.0);
                    }
                }
            }
        }

        let cost = self.cost.clone();
        let d = self.optimize(&cost, self.first_artificial, &mut pivots)?;
        let tied = (0..self.first_artificial).any(|j| !self.is_basic[j] && d[j].abs() <= 1e-9);

        let mut working = vec![0.0; self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            working[b] = self.rhs[i];
        }
        let x = (0..self.n_structural)
            .map(|j| {
                if self.flipped[j] {
                    self.upper[j] - working[j]
                } else {
                    working[j]
                }
            })
            .collect();
        Ok(LpSolution { x, tied })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(cost: &[f64], rows: &[(&[f64], Relation, f64)]) -> LinearProgram {
        let mut lp = LinearProgram::new(cost.to_vec());
        lp.rows = rows.iter().map(|(c, r, b)| (c.to_vec(), *r, *b)).collect();
        lp
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y  s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  (2, 6)
        let p = lp(
            &[-3.0, -5.0],
            &[
                (&[1.0, 0.0], Relation::Le, 4.0),
                (&[0.0, 2.0], Relation::Le, 12.0),
                (&[3.0, 2.0], Relation::Le, 18.0),
            ],
        );
        let s = p.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equality_with_phase_one() {
        // min x + 2y  s.t. x + y = 3, x − y ≤ 1  →  (2, 1)
        let p = lp(
            &[1.0, 2.0],
            &[
                (&[1.0, 1.0], Relation::Eq, 3.0),
                (&[1.0, -1.0], Relation::Le, 1.0),
            ],
        );
        let s = p.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_inequality() {
        // min x  s.t. −x ≤ −2  →  x = 2
        let p = lp(&[1.0], &[(&[-1.0], Relation::Le, -2.0)]);
        assert!((p.solve().unwrap().x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn upper_bounds_and_flips() {
        // max x + y  s.t. x + 2y ≤ 4, x ≤ 3 (bound), y ≤ 3 (bound)  →  (3, 0.5)
        let mut p = lp(&[-1.0, -1.0], &[(&[1.0, 2.0], Relation::Le, 4.0)]);
        p.upper = vec![3.0, 3.0];
        let s = p.solve().unwrap();
        assert!(
            (s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 0.5).abs() < 1e-12,
            "{:?}",
            s.x
        );
    }

    #[test]
    fn start_at_upper() {
        // min x − y  s.t. x + y = 1, 0 ≤ x, y ≤ 1, starting from y at its bound.
        let mut p = lp(&[1.0, -1.0], &[(&[1.0, 1.0], Relation::Eq, 1.0)]);
        p.upper = vec![1.0, 1.0];
        p.start_at_upper = vec![false, true];
        let s = p.solve().unwrap();
        assert!((s.x[0]).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible() {
        let p = lp(
            &[1.0],
            &[(&[1.0], Relation::Eq, 1.0), (&[1.0], Relation::Eq, 2.0)],
        );
        assert!(matches!(p.solve(), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn unbounded() {
        let p = lp(&[-1.0, 0.0], &[(&[1.0, -1.0], Relation::Le, 1.0)]);
        assert_eq!(p.solve().unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 stated twice.
        let p = lp(
            &[1.0, 3.0],
            &[
                (&[1.0, 1.0], Relation::Eq, 1.0),
                (&[2.0, 2.0], Relation::Eq, 2.0),
            ],
        );
        let s = p.solve().unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12 && s.x[1].abs() < 1e-12);
    }

    #[test]
    fn reports_ties() {
        // min x + y  s.t. x + y = 1 has a segment of optima.
        let p = lp(&[1.0, 1.0], &[(&[1.0, 1.0], Relation::Eq, 1.0)]);
        let s = p.solve().unwrap();
        assert_eq!(s.x, vec![1.0, 0.0]);
        assert!(s.tied);
    }
}
