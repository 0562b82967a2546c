//! Exact two-phase primal simplex over the rationals.
//!
//! Solves `min cᵀx  s.t.  A x = b, x >= 0` with dense tableaux and Bland's
//! rule, so every pivot is exact and the method cannot cycle. The dual
//! solution is read off the reduced costs of the phase-one artificial
//! columns, which are kept in the tableau for that purpose.

use num_traits::{One, Signed, Zero};

use crate::linalg::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
}

impl From<LpError> for crate::error::Error {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Infeasible => Self::Infeasible,
            LpError::Unbounded => Self::Unbounded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    /// Optimal basic solution `x`.
    pub primal: Vec<Rational>,
    /// Dual solution `y` with `Aᵀy <= c` and `bᵀy = cᵀx`.
    pub dual: Vec<Rational>,
    pub objective: Rational,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    /// Negated objective value.
    neg_obj: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[c].clone();
        if !factor.is_zero() {
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.neg_obj -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        self.reduced = cost.to_vec();
        self.neg_obj = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (v, t) in self.reduced.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *v -= cb * t;
                }
            }
            self.neg_obj -= cb * &self.rhs[i];
        }
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Minimizes `cᵀx` subject to `A x = b`, `x >= 0`.
pub fn minimize(a: &Matrix, b: &[Rational], c: &[Rational]) -> Result<LpSolution, LpError> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "rhs length");
    assert_eq!(c.len(), n, "cost length");

    let mut signs = vec![Rational::one(); m];
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(n + m);
        for j in 0..n {
            row.push(if flip {
                -a[(i, j)].clone()
            } else {
                a[(i, j)].clone()
            });
        }
        for k in 0..m {
            row.push(if k == i {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        rows.push(row);
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
        if flip {
            signs[i] = -Rational::one();
        }
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        reduced: Vec::new(),
        neg_obj: Rational::zero(),
    };

    // Phase one: drive the artificial variables to zero.
    let mut phase_one = vec![Rational::zero(); n + m];
    for v in phase_one.iter_mut().skip(n) {
        *v = Rational::one();
    }
    t.set_costs(&phase_one);
    let bounded = t.optimize(n);
    debug_assert!(bounded, "phase one is bounded below by zero");
    if !t.neg_obj.is_zero() {
        return Err(LpError::Infeasible);
    }
    // Pivot remaining zero-level artificials out where possible; rows that
    // stay artificial are redundant and never become pivot rows again.
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
            t.pivot(r, j);
        }
    }

    // Phase two.
    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(Rational::zero(), m));
    t.set_costs(&cost);
    if !t.optimize(n) {
        return Err(LpError::Unbounded);
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            primal[bv] = t.rhs[i].clone();
        }
    }
    // y_flipped_i = -(reduced cost of artificial i), since its cost is zero.
    let dual = (0..m).map(|i| -&t.reduced[n + i] * &signs[i]).collect();
    Ok(LpSolution {
        primal,
        dual,
        objective: -t.neg_obj,
    })
}
