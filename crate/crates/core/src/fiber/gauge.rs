//! Minkowski gauges of symmetric hulls, and distances to affine subspaces.

use num_traits::{One, Zero};

use super::{FiberVector, NormDescriptor, NormValue};
use crate::error::{unsupported, Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::rational::Rational;
use crate::simplex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeTerm {
    pub index: usize,
    pub negated: bool,
    pub weight: Rational,
}

/// Optimal decomposition of a target over `±dictionary` with its LP dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeSolution {
    pub value: Rational,
    /// Nonzero coefficients of a basic optimal solution.
    pub terms: Vec<GaugeTerm>,
    /// `y` with `|⟨y, c⟩| <= 1` on the dictionary and `⟨y, target⟩ = value`.
    pub dual_certificate: Vec<Rational>,
}

impl GaugeSolution {
    /// Rebuilds `Σ ± weight · dictionary[index]`.
    pub fn combination<V: AsRef<[Rational]>>(&self, dictionary: &[V], dim: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); dim];
        for t in &self.terms {
            let c = dictionary[t.index].as_ref();
            for (o, x) in out.iter_mut().zip(c) {
                if t.negated {
                    *o -= &t.weight * x;
                } else {
                    *o += &t.weight * x;
                }
            }
        }
        out
    }
}

/// Minimizes `Σ t` over `t >= 0` with `Σ t_j c_j = target`, where the `c_j`
/// run over the dictionary and its negation.
pub fn gauge_lp<V: AsRef<[Rational]>>(
    dictionary: &[V],
    target: &[Rational],
) -> Result<GaugeSolution> {
    let dim = target.len();
    if let Some(c) = dictionary.iter().find(|c| c.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: c.as_ref().len(),
        });
    }
    if target.iter().all(Zero::is_zero) {
        return Ok(GaugeSolution {
            value: Rational::zero(),
            terms: Vec::new(),
            dual_certificate: vec![Rational::zero(); dim],
        });
    }
    let k = dictionary.len();
    let mut a = Matrix::zeros(dim, 2 * k);
    for (j, c) in dictionary.iter().enumerate() {
        for (i, x) in c.as_ref().iter().enumerate() {
            if !x.is_zero() {
                a[(i, j)] = x.clone();
                a[(i, k + j)] = -x.clone();
            }
        }
    }
    let cost = vec![Rational::one(); 2 * k];
    let sol = simplex::minimize(&a, target, &cost)?;
    let terms = sol
        .primal
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(j, t)| GaugeTerm {
            index: j % k,
            negated: j >= k,
            weight: t.clone(),
        })
        .collect();
    Ok(GaugeSolution {
        value: sol.objective,
        terms,
        dual_certificate: sol.dual,
    })
}

/// Result of minimizing `‖point + s‖` over `s` in a subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMin {
    pub value: NormValue,
    /// The optimal `s`.
    pub shift: FiberVector,
    /// `point + shift`.
    pub minimizer: FiberVector,
}

/// Distance from `point` to the subspace spanned by `basis`, i.e. the
/// quotient norm of `point` modulo that subspace.
///
/// Polyhedral norms are handled exactly by projecting the unit ball along the
/// subspace and solving a gauge LP in the quotient; Euclidean norms by
/// orthogonal projection in the weighted inner product.
pub fn min_norm_over_affine(
    desc: &NormDescriptor,
    point: &[Rational],
    basis: &[FiberVector],
) -> Result<AffineMin> {
    let dim = desc.dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: point.len(),
        });
    }
    if let Some(b) = basis.iter().find(|b| b.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.len(),
        });
    }
    let vectors: Vec<Vec<Rational>> = basis.iter().map(|b| b.to_vec()).collect();
    let basis: Vec<Vec<Rational>> = independent_subset(&vectors, dim)
        .into_iter()
        .map(|i| vectors[i].clone())
        .collect();
    let point_vec = FiberVector::new(point.to_vec());

    if basis.is_empty() {
        return Ok(AffineMin {
            value: desc.norm(point)?,
            shift: FiberVector::zeros(dim),
            minimizer: point_vec,
        });
    }
    if basis.len() == dim {
        return Ok(AffineMin {
            value: NormValue::zero(),
            shift: point_vec.neg(),
            minimizer: FiberVector::zeros(dim),
        });
    }

    if let Some(weights) = desc.euclidean_weights() {
        let inner = |x: &[Rational], y: &[Rational]| -> Rational {
            x.iter()
                .zip(y)
                .zip(weights)
                .map(|((a, b), w)| a * b * w)
                .sum()
        };
        let k = basis.len();
        let mut gram = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = inner(&basis[i], &basis[j]);
            }
        }
        let rhs: Vec<Rational> = basis.iter().map(|b| -inner(b, point)).collect();
        let coef = gram
            .solve(&rhs)
            .expect("Gram matrix of independent vectors");
        let mut shift = vec![Rational::zero(); dim];
        for (c, b) in coef.iter().zip(&basis) {
            for (s, x) in shift.iter_mut().zip(b) {
                *s += c * x;
            }
        }
        let shift = FiberVector::new(shift);
        let minimizer = point_vec.add(&shift);
        let value = NormValue::from_squared(inner(&minimizer, &minimizer));
        return Ok(AffineMin {
            value,
            shift,
            minimizer,
        });
    }

    let vertices = desc.primal_vertices().ok_or_else(|| {
        unsupported(
            "min_norm_over_affine",
            format!(
                "fiber norm {} is neither polyhedral nor Euclidean",
                desc.label()
            ),
        )
    })?;
    let (value, minimizer) = min_gauge_over_affine(&vertices, point, &basis)?;
    let minimizer = FiberVector::new(minimizer);
    let shift = minimizer.sub(&point_vec);
    Ok(AffineMin {
        value: NormValue::Exact(value),
        shift,
        minimizer,
    })
}

/// Minimizes the gauge of `conv(±dictionary)` over `point + span(basis)`.
/// Returns the optimal value and a minimizer.
///
/// Projecting along the subspace turns this into a single gauge LP: the
/// rows of the projection span the annihilator of `basis`, so its kernel is
/// exactly the subspace.
pub fn min_gauge_over_affine<V: AsRef<[Rational]>>(
    dictionary: &[V],
    point: &[Rational],
    basis: &[Vec<Rational>],
) -> Result<(Rational, Vec<Rational>)> {
    let dim = point.len();
    let annihilator = Matrix::from_rows(basis.to_vec(), dim).null_space();
    let projection = Matrix::from_rows(annihilator, dim);
    let projected: Vec<Vec<Rational>> = dictionary
        .iter()
        .map(|v| projection.mul_vec(v.as_ref()))
        .collect();
    let target = projection.mul_vec(point);
    let sol = gauge_lp(&projected, &target)?;
    let minimizer = sol.combination(dictionary, dim);
    Ok((sol.value, minimizer))
}
