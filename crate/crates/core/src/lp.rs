//! Dense two-phase simplex for small linear programs with bounded variables.
//!
//! Pivoting uses Bland's rule throughout, so runs are deterministic and
//! cannot cycle. Intended for the block-sized programs produced by the
//! functionals (a handful of variables per block).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Maximize `objective · x` subject to the constraints and
/// `lower <= x <= upper` (bounds may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-10;

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone, Copy)]
enum Split {
    /// `x = offset + col`.
    Shift { col: usize, offset: f64 },
    /// `x = offset - col`.
    Flip { col: usize, offset: f64 },
    /// `x = pos - neg`.
    Free { pos: usize, neg: usize },
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            lower: vec![f64::NEG_INFINITY; num_vars],
            upper: vec![f64::INFINITY; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars();
        for j in 0..n {
            if self.lower[j] > self.upper[j] + FEAS_EPS {
                return LpOutcome::Infeasible;
            }
        }

        // Columns for the nonnegative reformulation.
        let mut splits = Vec::with_capacity(n);
        let mut ncols = 0;
        let mut rows: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::new();
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_finite() {
                splits.push(Split::Shift { col: ncols, offset: lo });
                if hi.is_finite() {
                    rows.push((vec![(ncols, 1.0)], Relation::Le, (hi - lo).max(0.0)));
                }
                ncols += 1;
            } else if hi.is_finite() {
                splits.push(Split::Flip { col: ncols, offset: hi });
                ncols += 1;
            } else {
                splits.push(Split::Free { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
        let mut cost = vec![0.0; ncols];
        let mut cost_offset = 0.0;
        for j in 0..n {
            let c = self.objective[j];
            match splits[j] {
                Split::Shift { col, offset } => {
                    cost[col] += c;
                    cost_offset += c * offset;
                }
                Split::Flip { col, offset } => {
                    cost[col] -= c;
                    cost_offset += c * offset;
                }
                Split::Free { pos, neg } => {
                    cost[pos] += c;
                    cost[neg] -= c;
                }
            }
        }
        for con in &self.constraints {
            let mut coeffs = Vec::new();
            let mut rhs = con.rhs;
            for &(j, a) in &con.coeffs {
                match splits[j] {
                    Split::Shift { col, offset } => {
                        coeffs.push((col, a));
                        rhs -= a * offset;
                    }
                    Split::Flip { col, offset } => {
                        coeffs.push((col, -a));
                        rhs -= a * offset;
                    }
                    Split::Free { pos, neg } => {
                        coeffs.push((pos, a));
                        coeffs.push((neg, -a));
                    }
                }
            }
            rows.push((coeffs, con.relation, rhs));
        }

        let x = match Tableau::solve(ncols, &rows, &cost) {
            Phase::Infeasible => return LpOutcome::Infeasible,
            Phase::Unbounded => return LpOutcome::Unbounded,
            Phase::Optimal(x) => x,
        };
        let vals: Vec<f64> = splits
            .iter()
            .map(|s| match *s {
                Split::Shift { col, offset } => offset + x[col],
                Split::Flip { col, offset } => offset - x[col],
                Split::Free { pos, neg } => x[pos] - x[neg],
            })
            .collect();
        let value = cost_offset + cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
        LpOutcome::Optimal { value, x: vals }
    }
}

enum Phase {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Rows of `[coefficients..., rhs]`.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&prow) {
                        *v -= f * pv;
                    }
                    row[c] = 0.0;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns with `allowed[j]`; false if unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        let rhs = self.width;
        loop {
            let mut entering = None;
            for j in 0..self.width {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let d = cost[j] - self.a.iter().zip(&self.basis).map(|(row, &b)| cost[b] * row[j]).sum::<f64>();
                if d > PIVOT_EPS * (1.0 + cost[j].abs()) {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.a.iter().enumerate() {
                if row[c] > PIVOT_EPS {
                    let ratio = row[rhs] / row[c];
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - PIVOT_EPS
                                || (ratio <= lratio + PIVOT_EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }

    fn solve(ncols: usize, rows: &[(Vec<(usize, f64)>, Relation, f64)], cost: &[f64]) -> Phase {
        let m = rows.len();
        // Columns: structural | slack per inequality | artificial per row needing one.
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let mut needs_art = Vec::with_capacity(m);
        for (_, rel, rhs) in rows {
            let flipped = *rhs < 0.0;
            let rel = match (rel, flipped) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => *r,
            };
            needs_art.push(rel != Relation::Le);
        }
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let width = ncols + n_slack + n_art;
        let mut t = Tableau {
            a: vec![vec![0.0; width + 1]; m],
            basis: vec![0; m],
            width,
        };
        let mut slack = ncols;
        let mut art = ncols + n_slack;
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for &(j, a) in coeffs {
                t.a[i][j] += sign * a;
            }
            t.a[i][width] = sign * rhs;
            let rel = match (rel, sign < 0.0) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => *r,
            };
            match rel {
                Relation::Le => {
                    t.a[i][slack] = 1.0;
                    t.basis[i] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    t.a[i][slack] = -1.0;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            if needs_art[i] {
                t.a[i][art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
        }

        let is_art = |j: usize| j >= ncols + n_slack;
        if n_art > 0 {
            let phase1: Vec<f64> = (0..width).map(|j| if is_art(j) { -1.0 } else { 0.0 }).collect();
            let all = vec![true; width];
            t.optimize(&phase1, &all);
            let infeas: f64 = t
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| is_art(b))
                .map(|(i, _)| t.a[i][width])
                .sum();
            let scale = 1.0 + rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
            if infeas > FEAS_EPS * scale {
                return Phase::Infeasible;
            }
            for i in 0..m {
                if is_art(t.basis[i]) {
                    if let Some(j) = (0..ncols + n_slack).find(|&j| t.a[i][j].abs() > PIVOT_EPS) {
                        t.pivot(i, j);
                    }
                }
            }
        }
        let mut full_cost = cost.to_vec();
        full_cost.resize(width, 0.0);
        let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
        if !t.optimize(&full_cost, &allowed) {
            return Phase::Unbounded;
        }
        let mut x = vec![0.0; ncols];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < ncols {
                x[b] = t.a[i][width];
            }
        }
        Phase::Optimal(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18.
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![3.0, 5.0];
        lp.lower = vec![0.0, 0.0];
        lp.add(vec![(0, 1.0)], Relation::Le, 4.0);
        lp.add(vec![(1, 2.0)], Relation::Le, 12.0);
        lp.add(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0);
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 36.0).abs() < 1e-12);
                assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 6.0).abs() < 1e-12);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn free_and_flipped_variables() {
        // max -z, z >= x - 1, z >= 1 - x, x free, x <= 0.25.
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![0.0, -1.0];
        lp.upper[0] = 0.25;
        lp.add(vec![(1, 1.0), (0, -1.0)], Relation::Ge, -1.0);
        lp.add(vec![(1, 1.0), (0, 1.0)], Relation::Ge, 1.0);
        assert!((lp.solve().value().unwrap() + 0.75).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.add(vec![(0, 1.0)], Relation::Ge, 2.0);
        lp.add(vec![(0, 1.0)], Relation::Le, 1.0);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.lower[0] = 0.0;
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_rows_and_redundancy() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 1.0];
        lp.lower = vec![0.0, 0.0];
        lp.add(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 1.0);
        lp.add(vec![(0, 2.0), (1, 2.0)], Relation::Eq, 2.0);
        lp.add(vec![(0, 1.0)], Relation::Le, 0.3);
        assert!((lp.solve().value().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_variable() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![2.0];
        lp.lower[0] = -1.5;
        lp.upper[0] = -1.5;
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: -3.0,
                x: vec![-1.5]
            }
        );
    }
}
