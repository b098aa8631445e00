//! Exact two-phase simplex over the rationals.
//!
//! Problems are in equality standard form: minimize `c·x` subject to
//! `A x = b`, `x ≥ 0`. Pivoting follows Bland's rule, so the method
//! terminates without cycling. Infeasible systems come back with a Farkas
//! certificate `z` satisfying `zᵀA ≥ 0` columnwise and `zᵀb < 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::{dot, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible { farkas: Vec<Q> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    cost: Vec<Q>,
    cost_rhs: Q,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
            self.rhs[i] = &self.rhs[i] - &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
            self.cost_rhs = &self.cost_rhs - &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots over columns `< limit`. Returns `false` if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(enter) = (0..limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    /// Current objective value (the tableau stores its negation).
    fn value(&self) -> Q {
        -self.cost_rhs.clone()
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpResult {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length must match row count");
    assert!(a.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // Phase I: flip rows to make b ≥ 0 and add one artificial per row.
    let sign: Vec<Q> = b
        .iter()
        .map(|x| if x.is_negative() { -Q::one() } else { Q::one() })
        .collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Q> = a[i].iter().map(|x| x * &sign[i]).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(row);
        rhs.push(&b[i] * &sign[i]);
    }
    let mut cost = vec![Q::zero(); n + m];
    for row in &rows {
        for (cj, x) in cost.iter_mut().zip(row).take(n) {
            *cj = &*cj - x;
        }
    }
    let cost_rhs = -rhs.iter().fold(Q::zero(), |acc, x| acc + x);
    let mut t = Tableau {
        rows,
        rhs,
        cost,
        cost_rhs,
        basis: (n..n + m).collect(),
    };
    let bounded = t.optimize(n);
    debug_assert!(bounded, "phase I objective is bounded below by zero");

    if t.value().is_positive() {
        let farkas = (0..m)
            .map(|i| -(&sign[i] * (Q::one() - &t.cost[n + i])))
            .collect();
        return LpResult::Infeasible { farkas };
    }

    // Drive artificials out of the basis; rows that cannot be cleared are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Phase II.
    t.cost = c.to_vec();
    t.cost.extend((0..m).map(|_| Q::zero()));
    t.cost_rhs = Q::zero();
    for i in 0..t.rows.len() {
        let cb = t.cost[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..n + m {
            let delta = &cb * &t.rows[i][j];
            t.cost[j] = &t.cost[j] - delta;
        }
        t.cost_rhs = &t.cost_rhs - &cb * &t.rhs[i];
    }
    if !t.optimize(n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs[i].clone();
    }
    let value = dot(c, &x);
    LpResult::Optimal { x, value }
}

/// Finds `x ≥ 0` with `A x = b`, or a Farkas certificate that none exists.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>, Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    match minimize(a, b, &vec![Q::zero(); n]) {
        LpResult::Optimal { x, .. } => Ok(x),
        LpResult::Infeasible { farkas } => Err(farkas),
        LpResult::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x1 - x2 with x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6.
        let a = m(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let res = minimize(&a, &v(&[4, 6]), &v(&[-1, -1, 0, 0]));
        match res {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, crate::rational::frac(-14, 5));
                assert_eq!(x[0], crate::rational::frac(8, 5));
                assert_eq!(x[1], crate::rational::frac(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_returns_valid_farkas_vector() {
        // x1 + x2 = -1 has no nonnegative solution.
        let a = m(&[&[1, 1]]);
        let b = v(&[-1]);
        let z = feasible_point(&a, &b).unwrap_err();
        assert!(dot(&z, &b).is_negative());
        for j in 0..2 {
            let col: Vec<Q> = a.iter().map(|r| r[j].clone()).collect();
            assert!(!dot(&z, &col).is_negative());
        }
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 with x1 - x2 = 0.
        let a = m(&[&[1, -1]]);
        assert_eq!(minimize(&a, &v(&[0]), &v(&[-1, 0])), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let x = feasible_point(&a, &v(&[3, 6])).unwrap();
        assert_eq!(&x[0] + &x[1], q(3));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example for the largest-coefficient rule (Beale).
        let a = vec![
            vec![
                crate::rational::frac(1, 4),
                q(-8),
                q(-1),
                q(9),
                q(1),
                q(0),
                q(0),
            ],
            vec![
                crate::rational::frac(1, 2),
                q(-12),
                crate::rational::frac(-1, 2),
                q(3),
                q(0),
                q(1),
                q(0),
            ],
            vec![q(0), q(0), q(1), q(0), q(0), q(0), q(1)],
        ];
        let c = vec![
            crate::rational::frac(-3, 4),
            q(20),
            crate::rational::frac(-1, 2),
            q(6),
            q(0),
            q(0),
            q(0),
        ];
        match minimize(&a, &v(&[0, 0, 1]), &c) {
            LpResult::Optimal { value, .. } => assert_eq!(value, crate::rational::frac(-5, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
