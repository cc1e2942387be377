//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex with Bland's rule on [`BigRational`] entries.
//! Problems here have a few dozen variables at most, so clarity wins over
//! speed.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Equality-constrained LP: `A x = b`, with `x_j ≥ 0` unless `free[j]`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    vars: usize,
    rows: Vec<(Vec<Rat>, Rat)>,
    free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(vars: usize) -> LinearProgram {
        LinearProgram { vars, rows: Vec::new(), free: vec![false; vars] }
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        assert_eq!(coeffs.len(), self.vars);
        self.rows.push((coeffs, rhs));
    }

    pub fn add_equality_i64(&mut self, coeffs: &[i64], rhs: i64) {
        self.add_equality(coeffs.iter().map(|&c| rat(c)).collect(), rat(rhs));
    }

    pub fn maximize(&self, c: &[Rat]) -> LpOutcome {
        let neg: Vec<Rat> = c.iter().map(|v| -v).collect();
        match self.minimize(&neg) {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal { value: -value, point },
            other => other,
        }
    }

    pub fn minimize(&self, c: &[Rat]) -> LpOutcome {
        assert_eq!(c.len(), self.vars);
        // Split free variables: x_j = y_j − y'_j.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.vars);
        let mut ncols = 0;
        for j in 0..self.vars {
            if self.free[j] {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let m = self.rows.len();
        let width = ncols + m + 1;
        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        for (i, (coeffs, rhs)) in self.rows.iter().enumerate() {
            let mut row = vec![Rat::zero(); width];
            let flip = rhs.is_negative();
            for (j, v) in coeffs.iter().enumerate() {
                let v = if flip { -v } else { v.clone() };
                let (p, n) = col_of[j];
                if let Some(n) = n {
                    row[n] = -v.clone();
                }
                row[p] = v;
            }
            row[ncols + i] = Rat::one();
            row[width - 1] = if flip { -rhs } else { rhs.clone() };
            tab.push(row);
        }
        let mut basis: Vec<usize> = (ncols..ncols + m).collect();

        let mut phase1 = vec![Rat::zero(); width - 1];
        for c in phase1.iter_mut().skip(ncols) {
            *c = Rat::one();
        }
        let allowed: Vec<bool> = (0..width - 1).map(|_| true).collect();
        run_simplex(&mut tab, &mut basis, &phase1, &allowed);
        let infeas: Rat = basis
            .iter()
            .zip(&tab)
            .filter(|(&b, _)| b >= ncols)
            .map(|(_, row)| row[width - 1].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= ncols {
                match (0..ncols).find(|&j| !tab[i][j].is_zero()) {
                    Some(j) => pivot(&mut tab, &mut basis, i, j),
                    None => {
                        tab.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut cost = vec![Rat::zero(); width - 1];
        for (j, cj) in c.iter().enumerate() {
            let (p, n) = col_of[j];
            cost[p] = cj.clone();
            if let Some(n) = n {
                cost[n] = -cj.clone();
            }
        }
        let allowed: Vec<bool> = (0..width - 1).map(|j| j < ncols).collect();
        if !run_simplex(&mut tab, &mut basis, &cost, &allowed) {
            return LpOutcome::Unbounded;
        }
        let mut y = vec![Rat::zero(); ncols];
        for (row, &b) in tab.iter().zip(&basis) {
            if b < ncols {
                y[b] = row[width - 1].clone();
            }
        }
        let point: Vec<Rat> = col_of
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &y[p] - &y[n],
                None => y[p].clone(),
            })
            .collect();
        let value = point.iter().zip(c).map(|(x, c)| x * c).sum();
        LpOutcome::Optimal { value, point }
    }
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v /= &p;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = c;
}

/// Minimizes `cost` from the current basic feasible solution. Returns false
/// if the objective is unbounded below.
fn run_simplex(tab: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], allowed: &[bool]) -> bool {
    let width = cost.len() + 1;
    loop {
        let entering = (0..cost.len()).find(|&j| {
            if !allowed[j] || basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (row, &b) in tab.iter().zip(basis.iter()) {
                if !row[j].is_zero() && !cost[b].is_zero() {
                    r -= &cost[b] * &row[j];
                }
            }
            r.is_negative()
        });
        let Some(j) = entering else { return true };
        let mut best: Option<(usize, Rat)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[width - 1] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            None => return false,
            Some((i, _)) => pivot(tab, basis, i, j),
        }
    }
}

/// Rank over Q of a family of integer vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<Rat>> = vectors.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pr[c];
                for (v, pv) in row.iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
