//! Exact two-phase primal simplex over arbitrary-precision rationals.
//!
//! Problems have the form: minimize `c·y` subject to equality rows
//! `A y = b` and `y >= 0`. Bland's rule keeps the method finite.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// `(column, coefficient)` pairs sorted by column, without zeros.
pub type SparseRow = Vec<(usize, Q)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<(SparseRow, Q)>,
    objective: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        values: Vec<Q>,
        objective: Q,
    },
    /// One multiplier `z_i` per row with `zᵀA <= 0` and `zᵀb > 0`.
    Infeasible {
        certificate: Vec<Q>,
    },
    Unbounded,
}

fn normalize(coeffs: impl IntoIterator<Item = (usize, Q)>) -> SparseRow {
    let mut row: SparseRow = coeffs.into_iter().collect();
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            objective: vec![Q::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[(SparseRow, Q)] {
        &self.rows
    }

    /// Adds `Σ coef·y = rhs`; repeated columns are summed.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, Q)>, rhs: Q) {
        let row = normalize(coeffs);
        assert!(row.iter().all(|(c, _)| *c < self.num_vars), "column out of range");
        self.rows.push((row, rhs));
    }

    pub fn set_objective(&mut self, var: usize, coef: Q) {
        self.objective[var] = coef;
    }

    /// Checks a Farkas certificate directly against the rows.
    pub fn verify_certificate(&self, z: &[Q]) -> bool {
        if z.len() != self.rows.len() {
            return false;
        }
        let mut combo = vec![Q::zero(); self.num_vars];
        let mut rhs = Q::zero();
        for ((row, b), zi) in self.rows.iter().zip(z) {
            for (c, v) in row {
                combo[*c] += v * zi;
            }
            rhs += b * zi;
        }
        combo.iter().all(|v| !v.is_positive()) && rhs.is_positive()
    }

    /// Checks `values >= 0` and every row.
    pub fn is_feasible(&self, values: &[Q]) -> bool {
        values.len() == self.num_vars
            && values.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(row, b)| {
                let lhs: Q = row.iter().map(|(c, v)| v * &values[*c]).sum();
                &lhs == b
            })
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars;
        let m = self.rows.len();
        let mut sign = vec![false; m];
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (row, b)) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            let mut b = b.clone();
            if b.is_negative() {
                sign[i] = true;
                for (_, v) in &mut r {
                    *v = -v.clone();
                }
                b = -b;
            }
            r.push((n + i, Q::one()));
            rows.push(r);
            rhs.push(b);
        }
        let mut cost = vec![Q::zero(); n + m];
        for r in &rows {
            for (c, v) in r {
                if *c < n {
                    cost[*c] -= v;
                }
            }
        }
        let value = rhs.iter().sum();
        let mut t = Tableau {
            rows,
            rhs,
            basis: (n..n + m).collect(),
            cost,
            value,
            allowed: n + m,
        };
        let bounded = t.run();
        debug_assert!(bounded, "phase 1 is bounded below by zero");

        if t.value.is_positive() {
            let certificate = (0..m)
                .map(|i| {
                    let y = Q::one() - &t.cost[n + i];
                    if sign[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            return LpOutcome::Infeasible { certificate };
        }

        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match t.rows[i].iter().find(|(c, _)| *c < n).map(|(c, _)| *c) {
                    Some(c) => t.pivot(i, c),
                    None => {
                        t.rows.swap_remove(i);
                        t.rhs.swap_remove(i);
                        t.basis.swap_remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for r in &mut t.rows {
            r.retain(|(c, _)| *c < n);
        }

        let mut cost: Vec<Q> = self.objective.clone();
        let mut value = Q::zero();
        for (i, r) in t.rows.iter().enumerate() {
            let cb = &self.objective[t.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (c, v) in r {
                cost[*c] -= cb * v;
            }
            value += cb * &t.rhs[i];
        }
        t.cost = cost;
        t.value = value;
        t.allowed = n;
        if !t.run() {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Q::zero(); n];
        for (i, &b) in t.basis.iter().enumerate() {
            values[b] = t.rhs[i].clone();
        }
        LpOutcome::Optimal {
            values,
            objective: t.value,
        }
    }
}

struct Tableau {
    rows: Vec<SparseRow>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Reduced costs; the objective equals `value + Σ cost_j y_j`.
    cost: Vec<Q>,
    value: Q,
    /// Columns `>= allowed` never enter the basis.
    allowed: usize,
}

fn entry(row: &SparseRow, col: usize) -> Option<&Q> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `target - factor * src`.
fn axpy(target: &SparseRow, factor: &Q, src: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(factor * &src[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &src[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Tableau {
    /// Runs Bland's rule to optimality; `false` when unbounded.
    fn run(&mut self) -> bool {
        loop {
            let Some(enter) = (0..self.allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let Some(a) = entry(&self.rows[i], enter) else { continue };
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((leave, _)) => self.pivot(leave, enter),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let a = entry(&self.rows[r], c).expect("pivot on nonzero entry").clone();
        if !a.is_one() {
            for (_, v) in &mut self.rows[r] {
                *v /= &a;
            }
            self.rhs[r] /= &a;
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            if let Some(f) = entry(&self.rows[i], c).cloned() {
                self.rows[i] = axpy(&self.rows[i], &f, &pivot_row);
                self.rhs[i] -= &f * &pivot_rhs;
            }
        }
        let dc = self.cost[c].clone();
        if !dc.is_zero() {
            for (j, v) in &pivot_row {
                self.cost[*j] -= &dc * v;
            }
            self.value += &dc * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(v: i64) -> Q {
        Q::from_integer(BigInt::from(v))
    }

    #[test]
    fn simple_optimum() {
        // min x + 2y  s.t.  x + y = 3, x - y = 1
        let mut lp = LinearProgram::new(2);
        lp.add_row([(0, q(1)), (1, q(1))], q(3));
        lp.add_row([(0, q(1)), (1, q(-1))], q(1));
        lp.set_objective(0, q(1));
        lp.set_objective(1, q(2));
        match lp.solve() {
            LpOutcome::Optimal { values, objective } => {
                assert_eq!(values, vec![q(2), q(1)]);
                assert_eq!(objective, q(4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // 3x = 1
        let mut lp = LinearProgram::new(1);
        lp.add_row([(0, q(3))], q(1));
        let LpOutcome::Optimal { values, .. } = lp.solve() else {
            panic!()
        };
        assert_eq!(values[0], Q::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = -1 has no nonnegative solution.
        let mut lp = LinearProgram::new(2);
        lp.add_row([(0, q(1)), (1, q(1))], q(-1));
        let LpOutcome::Infeasible { certificate } = lp.solve() else {
            panic!()
        };
        assert!(lp.verify_certificate(&certificate));
    }

    #[test]
    fn conflicting_rows_are_infeasible() {
        // x - y = 0, x - y = 2
        let mut lp = LinearProgram::new(2);
        lp.add_row([(0, q(1)), (1, q(-1))], q(0));
        lp.add_row([(0, q(1)), (1, q(-1))], q(2));
        let LpOutcome::Infeasible { certificate } = lp.solve() else {
            panic!()
        };
        assert!(lp.verify_certificate(&certificate));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2);
        lp.add_row([(0, q(1)), (1, q(-1))], q(0));
        lp.set_objective(0, q(-1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_and_empty_programs() {
        let mut lp = LinearProgram::new(2);
        lp.add_row([(0, q(1)), (1, q(1))], q(2));
        lp.add_row([(0, q(2)), (1, q(2))], q(4));
        lp.set_objective(1, q(1));
        let LpOutcome::Optimal { values, objective } = lp.solve() else {
            panic!()
        };
        assert_eq!(objective, q(0));
        assert_eq!(values, vec![q(2), q(0)]);

        let mut empty = LinearProgram::new(0);
        empty.add_row([], q(0));
        assert!(matches!(empty.solve(), LpOutcome::Optimal { .. }));
        let mut bad = LinearProgram::new(0);
        bad.add_row([], q(1));
        let LpOutcome::Infeasible { certificate } = bad.solve() else {
            panic!()
        };
        assert!(bad.verify_certificate(&certificate));
    }

    /// Minimum over all basic feasible solutions, by brute force over
    /// column subsets and Gaussian elimination.
    fn brute_force_min(lp: &LinearProgram) -> Option<Q> {
        let n = lp.num_vars();
        let m = lp.rows().len();
        let dense: Vec<Vec<Q>> = lp
            .rows()
            .iter()
            .map(|(r, _)| {
                let mut d = vec![Q::zero(); n];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect();
        let mut best: Option<Q> = None;
        for mask in 0u32..(1 << n) {
            let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            // Solve the restricted system A_S y_S = b by elimination.
            let mut mat: Vec<Vec<Q>> = (0..m)
                .map(|i| {
                    let mut row: Vec<Q> = cols.iter().map(|&j| dense[i][j].clone()).collect();
                    row.push(lp.rows()[i].1.clone());
                    row
                })
                .collect();
            let k = cols.len();
            let mut pivots = Vec::new();
            let mut r = 0;
            for col in 0..k {
                let Some(p) = (r..m).find(|&i| !mat[i][col].is_zero()) else {
                    continue;
                };
                mat.swap(r, p);
                let pv = mat[r][col].clone();
                for v in &mut mat[r] {
                    *v /= &pv;
                }
                let pivot_row = mat[r].clone();
                for (i, row) in mat.iter_mut().enumerate() {
                    if i != r && !row[col].is_zero() {
                        let f = row[col].clone();
                        for (v, p) in row.iter_mut().zip(&pivot_row) {
                            *v -= &f * p;
                        }
                    }
                }
                pivots.push(col);
                r += 1;
            }
            if pivots.len() != k || (r..m).any(|i| !mat[i][k].is_zero()) {
                continue;
            }
            let mut y = vec![Q::zero(); n];
            for (i, &col) in pivots.iter().enumerate() {
                y[cols[col]] = mat[i][k].clone();
            }
            if y.iter().any(|v| v.is_negative()) {
                continue;
            }
            let obj: Q = (0..n).map(|j| &lp.objective[j] * &y[j]).sum();
            if best.as_ref().is_none_or(|b| obj < *b) {
                best = Some(obj);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn agrees_with_basis_enumeration(
            n in 1usize..5,
            m in 1usize..4,
            coeffs in proptest::collection::vec(-3i64..=3, 16),
            rhs in proptest::collection::vec(-4i64..=4, 4),
            costs in proptest::collection::vec(0i64..=3, 4),
        ) {
            let mut lp = LinearProgram::new(n);
            for i in 0..m {
                lp.add_row((0..n).map(|j| (j, q(coeffs[i * 4 + j]))), q(rhs[i]));
            }
            for (j, &c) in costs.iter().enumerate().take(n) {
                lp.set_objective(j, q(c));
            }
            let expected = brute_force_min(&lp);
            match lp.solve() {
                LpOutcome::Optimal { values, objective } => {
                    prop_assert!(lp.is_feasible(&values));
                    prop_assert_eq!(Some(objective), expected);
                }
                LpOutcome::Infeasible { certificate } => {
                    prop_assert!(lp.verify_certificate(&certificate));
                    prop_assert!(expected.is_none());
                }
                LpOutcome::Unbounded => prop_assert!(false, "nonnegative costs cannot be unbounded"),
            }
        }
    }
}
