//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use crossnorm_core::rational::{int, Rational};
use num_traits::{Signed, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Solves the square system `m x = b` by Gauss-Jordan elimination.
pub fn solve(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let (pivot_row, pivot_b) = (m[col].clone(), b[col].clone());
        for (r, (row, rhs)) in m.iter_mut().zip(b.iter_mut()).enumerate() {
            if r != col && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                *rhs -= &f * &pivot_b;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Minimum of `Σ t` over basic feasible solutions of `Σ t_j c_j = target`,
/// `t >= 0`, columns `±dictionary`, in dimension 2.
pub fn brute_force_gauge(dictionary: &[[i64; 2]], target: &[Rational; 2]) -> Option<Rational> {
    let columns: Vec<[Rational; 2]> = dictionary
        .iter()
        .flat_map(|c| [[int(c[0]), int(c[1])], [int(-c[0]), int(-c[1])]])
        .collect();
    let mut best: Option<Rational> = None;
    let mut consider = |t: Rational| {
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    };
    if target.iter().all(Zero::is_zero) {
        return Some(Rational::zero());
    }
    for (i, a) in columns.iter().enumerate() {
        let k = if !a[0].is_zero() {
            &target[0] / &a[0]
        } else if !a[1].is_zero() {
            &target[1] / &a[1]
        } else {
            continue;
        };
        if !k.is_negative() && &a[0] * &k == target[0] && &a[1] * &k == target[1] {
            consider(k);
        }
        for b in &columns[i + 1..] {
            let m = vec![
                vec![a[0].clone(), b[0].clone()],
                vec![a[1].clone(), b[1].clone()],
            ];
            if let Some(x) = solve(m, target.to_vec()) {
                if x.iter().all(|t| !t.is_negative()) {
                    consider(x.iter().sum());
                }
            }
        }
    }
    best
}

/// All vectors in `{-1, 1}^n`.
pub fn sign_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..1u32 << n)
        .map(|mask| {
            (0..n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        int(-1)
                    } else {
                        int(1)
                    }
                })
                .collect()
        })
        .collect()
}

/// `max sᵀ A t` over sign vectors: the injective norm on `ℓ1 ⊗ ℓ1`.
pub fn sign_form_max(a: &[Vec<Rational>]) -> Rational {
    let (rows, cols) = (a.len(), a[0].len());
    let mut best = Rational::zero();
    for s in sign_vectors(rows) {
        for t in sign_vectors(cols) {
            let v: Rational = (0..rows)
                .flat_map(|i| (0..cols).map(move |j| (i, j)))
                .map(|(i, j)| &s[i] * &a[i][j] * &t[j])
                .sum();
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Nuclear and spectral norms of a 2x2 matrix from `σ1 ± σ2` closed forms.
pub fn singular_sum_and_max(a: [[f64; 2]; 2]) -> (f64, f64) {
    let f = a.iter().flatten().map(|x| x * x).sum::<f64>();
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    let nuclear = (f + 2.0 * det).sqrt();
    let spectral = ((f + (f * f - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt();
    (nuclear, spectral)
}

/// Minimum of a function of one rational variable over the grid
/// `k / den`, `|k| <= reach * den`.
pub fn grid_min(reach: i64, den: i64, f: impl Fn(&Rational) -> Rational) -> Rational {
    (-reach * den..=reach * den)
        .map(|k| f(&q(k, den)))
        .min()
        .expect("nonempty grid")
}
