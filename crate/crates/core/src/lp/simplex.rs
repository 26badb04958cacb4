use super::{check_column, LinearProgram, LpError, LpSolution, LpStatus, SparseColumn, VarBound};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub pivot_limit: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            pivot_limit: 1_000_000,
        }
    }
}

/// Internal nonnegative column. Free variables map to a `+`/`-` pair.
#[derive(Clone, Debug)]
struct Column<S> {
    orig: usize,
    negated: bool,
    cost: S,
    entries: SparseColumn<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    One,
    Two,
    Done(LpStatus),
}

/// Two-phase revised simplex with an explicit dense basis inverse and
/// Bland's rule for both entering and leaving choices.
///
/// Variable ids: artificial `i` is id `i`, internal column `k` is id `m + k`.
/// Artificials never re-enter once they leave; any still basic after phase
/// one sit at zero and are forced out as soon as an entering column touches
/// their row, so the equalities are never relaxed in phase two.
#[derive(Clone, Debug)]
pub struct Simplex<S> {
    m: usize,
    options: SolverOptions,
    /// Rows multiplied by -1 so that the right-hand side is nonnegative.
    row_negated: Vec<bool>,
    orig_costs: Vec<S>,
    cols: Vec<Column<S>>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    b_inv: Vec<Vec<S>>,
    x_b: Vec<S>,
    phase: Phase,
    pivots: u64,
}

impl<S: Scalar> Simplex<S> {
    pub fn new(lp: &LinearProgram<S>, options: SolverOptions) -> Result<Self, LpError> {
        lp.validate()?;
        let m = lp.num_rows;
        let row_negated: Vec<bool> = lp.rhs.iter().map(|b| b.is_negative()).collect();
        let x_b = lp.rhs.iter().map(|b| b.abs()).collect();
        let mut b_inv = vec![vec![S::zero(); m]; m];
        for (i, row) in b_inv.iter_mut().enumerate() {
            row[i] = S::one();
        }
        let mut s = Self {
            m,
            options,
            row_negated,
            orig_costs: Vec::new(),
            cols: Vec::new(),
            basis: (0..m).collect(),
            in_basis: Vec::new(),
            b_inv,
            x_b,
            phase: Phase::One,
            pivots: 0,
        };
        for j in 0..lp.num_vars() {
            s.push_var(lp.objective[j].clone(), lp.bounds[j], &lp.columns[j]);
        }
        Ok(s)
    }

    fn push_var(&mut self, cost: S, bound: VarBound, column: &SparseColumn<S>) -> usize {
        let orig = self.orig_costs.len();
        self.orig_costs.push(cost.clone());
        let entries: SparseColumn<S> = column
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(r, v)| (*r, if self.row_negated[*r] { -v.clone() } else { v.clone() }))
            .collect();
        let negative = (bound == VarBound::Free).then(|| Column {
            orig,
            negated: true,
            cost: -cost.clone(),
            entries: entries.iter().map(|(r, v)| (*r, -v.clone())).collect(),
        });
        self.cols.push(Column {
            orig,
            negated: false,
            cost,
            entries,
        });
        self.in_basis.push(false);
        if let Some(col) = negative {
            self.cols.push(col);
            self.in_basis.push(false);
        }
        orig
    }

    pub fn num_vars(&self) -> usize {
        self.orig_costs.len()
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    /// Adds a variable after a solve; the current basis stays valid, so the
    /// next [`solve`](Self::solve) continues from it.
    pub fn add_column(&mut self, cost: S, bound: VarBound, column: SparseColumn<S>) -> Result<usize, LpError> {
        check_column(&column, self.m)?;
        let idx = self.push_var(cost, bound, &column);
        self.phase = match self.phase {
            Phase::Done(LpStatus::Optimal) => Phase::Two,
            Phase::Done(LpStatus::Infeasible) => Phase::One,
            // a minimization stays unbounded when columns are added
            p => p,
        };
        Ok(idx)
    }

    /// `add_column` followed by `solve`.
    pub fn extend_and_resolve(
        &mut self,
        cost: S,
        bound: VarBound,
        column: SparseColumn<S>,
    ) -> Result<LpSolution<S>, LpError> {
        self.add_column(cost, bound, column)?;
        self.solve()
    }

    fn cost(&self, id: usize, phase: Phase) -> S {
        match (phase, id < self.m) {
            (Phase::One, true) => S::one(),
            (Phase::One, false) => S::zero(),
            (_, true) => S::zero(),
            (_, false) => self.cols[id - self.m].cost.clone(),
        }
    }

    /// Simplex multipliers `c_B B^{-1}`.
    fn multipliers(&self, phase: Phase) -> Vec<S> {
        let mut y = vec![S::zero(); self.m];
        for (i, &id) in self.basis.iter().enumerate() {
            let c = self.cost(id, phase);
            if c.is_zero() {
                continue;
            }
            for (k, v) in self.b_inv[i].iter().enumerate() {
                if !v.is_zero() {
                    y[k] = y[k].add_ref(&c.mul_ref(v));
                }
            }
        }
        y
    }

    /// Lowest-index internal column with a negative reduced cost.
    fn entering(&self, phase: Phase, y: &[S]) -> Option<usize> {
        for (k, col) in self.cols.iter().enumerate() {
            if self.in_basis[k] {
                continue;
            }
            let mut d = if phase == Phase::One {
                S::zero()
            } else {
                col.cost.clone()
            };
            for (r, a) in &col.entries {
                if !y[*r].is_zero() {
                    d = d.sub_ref(&y[*r].mul_ref(a));
                }
            }
            if d.is_clearly_negative() {
                return Some(k);
            }
        }
        None
    }

    fn direction(&self, k: usize) -> Vec<S> {
        let mut d = vec![S::zero(); self.m];
        for (r, a) in &self.cols[k].entries {
            for (i, di) in d.iter_mut().enumerate() {
                let b = &self.b_inv[i][*r];
                if !b.is_zero() {
                    *di = di.add_ref(&b.mul_ref(a));
                }
            }
        }
        d
    }

    fn leaving(&self, phase: Phase, dir: &[S]) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.m {
            let id = self.basis[i];
            let locked = phase == Phase::Two && id < self.m;
            let ratio = if locked && !dir[i].is_negligible() {
                S::zero()
            } else if dir[i].is_clearly_positive() {
                self.x_b[i].div_ref(&dir[i])
            } else {
                continue;
            };
            let better = match &best {
                None => true,
                Some((j, r)) => ratio < *r || (ratio == *r && id < self.basis[*j]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, k: usize, dir: &[S]) {
        let p = dir[r].clone();
        let nonzero: Vec<usize> = (0..self.m).filter(|&c| !self.b_inv[r][c].is_zero()).collect();
        for &c in &nonzero {
            self.b_inv[r][c] = self.b_inv[r][c].div_ref(&p);
        }
        self.x_b[r] = self.x_b[r].div_ref(&p);
        let (pivot_row, pivot_x) = (self.b_inv[r].clone(), self.x_b[r].clone());
        for i in 0..self.m {
            if i == r || dir[i].is_zero() {
                continue;
            }
            let f = &dir[i];
            for &c in &nonzero {
                self.b_inv[i][c] = self.b_inv[i][c].sub_ref(&f.mul_ref(&pivot_row[c]));
            }
            self.x_b[i] = self.x_b[i].sub_ref(&f.mul_ref(&pivot_x));
        }
        let old = self.basis[r];
        if old >= self.m {
            self.in_basis[old - self.m] = false;
        }
        self.basis[r] = self.m + k;
        self.in_basis[k] = true;
        self.pivots += 1;
    }

    fn artificial_sum(&self) -> S {
        self.basis
            .iter()
            .zip(&self.x_b)
            .filter(|(&id, _)| id < self.m)
            .fold(S::zero(), |acc, (_, x)| acc.add_ref(x))
    }

    /// Runs to termination from the current basis.
    pub fn solve(&mut self) -> Result<LpSolution<S>, LpError> {
        loop {
            let phase = match self.phase {
                Phase::Done(_) => break,
                p => p,
            };
            let y = self.multipliers(phase);
            let Some(k) = self.entering(phase, &y) else {
                self.phase = match phase {
                    Phase::One if !self.artificial_sum().is_negligible() => Phase::Done(LpStatus::Infeasible),
                    Phase::One => Phase::Two,
                    _ => Phase::Done(LpStatus::Optimal),
                };
                continue;
            };
            let dir = self.direction(k);
            let Some(r) = self.leaving(phase, &dir) else {
                // phase one is bounded below by zero, so this is phase two
                self.phase = Phase::Done(LpStatus::Unbounded);
                continue;
            };
            if self.pivots >= self.options.pivot_limit {
                return Err(LpError::PivotLimit(self.options.pivot_limit));
            }
            self.pivot(r, k, &dir);
        }
        Ok(self.solution())
    }

    pub fn status(&self) -> Option<LpStatus> {
        match self.phase {
            Phase::Done(s) => Some(s),
            _ => None,
        }
    }

    fn solution(&self) -> LpSolution<S> {
        let n = self.orig_costs.len();
        let mut primal = vec![S::zero(); n];
        let status = self.status().expect("solved");
        if status != LpStatus::Optimal {
            return LpSolution {
                status,
                value: None,
                primal,
            };
        }
        for (i, &id) in self.basis.iter().enumerate() {
            if id < self.m {
                continue;
            }
            let col = &self.cols[id - self.m];
            let v = &self.x_b[i];
            primal[col.orig] = if col.negated {
                primal[col.orig].sub_ref(v)
            } else {
                primal[col.orig].add_ref(v)
            };
        }
        let value = self
            .orig_costs
            .iter()
            .zip(&primal)
            .fold(S::zero(), |acc, (c, v)| acc.add_ref(&c.mul_ref(v)));
        LpSolution {
            status,
            value: Some(value),
            primal,
        }
    }

    /// Dual values for the original rows at an optimal basis.
    pub fn duals(&self) -> Option<Vec<S>> {
        if self.status() != Some(LpStatus::Optimal) {
            return None;
        }
        let y = self.multipliers(Phase::Two);
        Some(
            y.into_iter()
                .zip(&self.row_negated)
                .map(|(v, &neg)| if neg { -v } else { v })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::solve;
    use crate::scalar::{rat, Rational};

    #[test]
    fn single_free_variable() {
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add_var(rat(1, 1), VarBound::Free, vec![(0, rat(1, 1))]);
        lp.rhs[0] = rat(3, 1);
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, Some(rat(3, 1)));
    }

    #[test]
    fn contradictory_equalities() {
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.add_var(rat(0, 1), VarBound::NonNegative, vec![(0, rat(1, 1)), (1, rat(1, 1))]);
        lp.rhs = vec![rat(1, 1), rat(2, 1)];
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        // min -y1 s.t. y1 - y2 = 0
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add_var(rat(-1, 1), VarBound::NonNegative, vec![(0, rat(1, 1))]);
        lp.add_var(rat(0, 1), VarBound::NonNegative, vec![(0, rat(-1, 1))]);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn pivot_budget() {
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add_var(rat(1, 1), VarBound::NonNegative, vec![(0, rat(1, 1))]);
        lp.rhs[0] = rat(1, 1);
        let mut s = Simplex::new(&lp, SolverOptions { pivot_limit: 0 }).unwrap();
        assert_eq!(s.solve(), Err(LpError::PivotLimit(0)));
    }

    #[test]
    fn zero_column_leaves_optimum_unchanged() {
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add_var(rat(2, 1), VarBound::NonNegative, vec![(0, rat(1, 1))]);
        lp.rhs[0] = rat(5, 1);
        let mut s = Simplex::new(&lp, SolverOptions::default()).unwrap();
        assert_eq!(s.solve().unwrap().value, Some(rat(10, 1)));
        let after = s.extend_and_resolve(rat(0, 1), VarBound::NonNegative, vec![]).unwrap();
        assert_eq!(after.value, Some(rat(10, 1)));
    }

    #[test]
    fn generic_over_floats() {
        // min y1 + 2 y2 s.t. y1 + y2 = 4, y1 - y2 = 1
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add_var(1.0, VarBound::NonNegative, vec![(0, 1.0), (1, 1.0)]);
        lp.add_var(2.0, VarBound::NonNegative, vec![(0, 1.0), (1, -1.0)]);
        lp.rhs = vec![4.0, 1.0];
        let s = solve(&lp).unwrap();
        assert!((s.value.unwrap() - 5.5).abs() < 1e-12);
    }
}
