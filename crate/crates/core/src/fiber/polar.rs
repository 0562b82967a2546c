//! Polar pairs of symmetric polytopes in low dimension.
//!
//! Facets of `conv(±P)` are found by brute force: every `dim`-subset of the
//! points that determines a unique hyperplane `⟨a, x⟩ = 1` is tested against
//! all points. The normals `a` of supporting hyperplanes are exactly the
//! vertices of the polar body.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::FiberVector;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{one, sqrt_bounds, Rational};

/// Highest dimension handled by facet enumeration.
pub const MAX_ENUMERATION_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Facet enumeration confirms `conv(±D) = conv(±V)°`.
    Certified,
    /// Necessary pairing conditions hold; dimension too high to certify.
    Plausible,
    Refuted,
}

/// Drops zeros and keeps one vector per `±` pair (first nonzero entry positive).
pub fn canonical_representatives(points: &[FiberVector]) -> Vec<FiberVector> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in points {
        let Some(first) = p.iter().find(|q| !q.is_zero()) else {
            continue;
        };
        let rep = if first.is_negative() {
            p.neg()
        } else {
            p.clone()
        };
        if seen.insert(rep.clone()) {
            out.push(rep);
        }
    }
    out
}

fn symmetric_points(points: &[FiberVector]) -> Vec<FiberVector> {
    canonical_representatives(points)
        .into_iter()
        .flat_map(|p| [p.neg(), p])
        .collect()
}

fn spans(points: &[FiberVector], dim: usize) -> bool {
    let cols: Vec<Vec<Rational>> = points.iter().map(|p| p.to_vec()).collect();
    Matrix::from_columns(&cols, dim).rank() == dim
}

fn common_dim(points: &[FiberVector]) -> Result<usize> {
    let dim = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::Degenerate("empty point set".into()))?;
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    Ok(dim)
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of the polar of `conv(±points)` (all of them, both signs).
pub fn polar_vertices(points: &[FiberVector]) -> Result<Vec<FiberVector>> {
    let dim = common_dim(points)?;
    if dim > MAX_ENUMERATION_DIM {
        return Err(crate::error::unsupported(
            "facet enumeration",
            format!("dimension {dim} exceeds {MAX_ENUMERATION_DIM}"),
        ));
    }
    let sym = symmetric_points(points);
    if dim == 0 || !spans(&sym, dim) {
        return Err(Error::Degenerate("points do not span the space".into()));
    }
    let ones = vec![one(); dim];
    let mut normals = BTreeSet::new();
    for_each_subset(sym.len(), dim, |subset| {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| sym[i].to_vec()).collect();
        let m = Matrix::from_rows(rows, dim);
        let Some(inv) = m.inverse() else {
            return;
        };
        let a = FiberVector::new(inv.mul_vec(&ones));
        if sym.iter().all(|p| p.dot(&a) <= one()) {
            normals.insert(a);
        }
    });
    Ok(normals.into_iter().collect())
}

/// Representatives of the points of `±points` that are vertices of their
/// symmetric hull, in input order.
pub fn extreme_points(points: &[FiberVector]) -> Result<Vec<FiberVector>> {
    let dim = common_dim(points)?;
    let facets = polar_vertices(points)?;
    Ok(canonical_representatives(points)
        .into_iter()
        .filter(|p| {
            let active: Vec<Vec<Rational>> = facets
                .iter()
                .filter(|a| p.dot(a) == one())
                .map(|a| a.to_vec())
                .collect();
            !active.is_empty() && Matrix::from_columns(&active, dim).rank() == dim
        })
        .collect())
}

/// Decides whether `conv(±dual)` is the polar of `conv(±primal)`.
pub fn polarity_check(primal: &[FiberVector], dual: &[FiberVector]) -> Result<Polarity> {
    let dim = common_dim(primal)?;
    if common_dim(dual)? != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: dual[0].len(),
        });
    }
    if dim == 0 || !spans(primal, dim) || !spans(dual, dim) {
        return Err(Error::Degenerate(
            "vertex lists do not span the space".into(),
        ));
    }
    let one = one();
    for v in primal {
        let best = dual
            .iter()
            .map(|d| v.dot(d).abs())
            .max()
            .unwrap_or_default();
        if best != one {
            return Ok(Polarity::Refuted);
        }
    }
    for d in dual {
        let best = primal
            .iter()
            .map(|v| v.dot(d).abs())
            .max()
            .unwrap_or_default();
        if best != one {
            return Ok(Polarity::Refuted);
        }
    }
    if dim > MAX_ENUMERATION_DIM {
        return Ok(Polarity::Plausible);
    }
    // Every polar vertex is extreme in a body containing conv(±dual), so it
    // lies in conv(±dual) only if it is one of ±dual.
    let dual_set: BTreeSet<FiberVector> = symmetric_points(dual).into_iter().collect();
    let certified = polar_vertices(primal)?.iter().all(|a| dual_set.contains(a));
    Ok(if certified {
        Polarity::Certified
    } else {
        Polarity::Refuted
    })
}

/// A regular-ish polygon with rational vertices on the unit circle.
#[derive(Debug, Clone)]
pub struct InscribedPolygon {
    /// One representative per `±` pair, ordered by angle in `[-π/2, π/2)`.
    pub vertices: Vec<FiberVector>,
    /// Rational lower bound on the distance from the origin to every edge,
    /// so the disc lies inside `polygon / inradius_lower`.
    pub inradius_lower: Rational,
}

/// Inscribed `2^k`-gon of the unit disc with exactly rational vertices,
/// obtained from the rational parametrization of the circle.
pub fn inscribed_polygon(k: u32) -> InscribedPolygon {
    assert!((2..=12).contains(&k), "polygon refinement out of range");
    let n = 1usize << k;
    let half = n / 2;
    let denom: i64 = 1 << 20;
    let mut vertices = Vec::with_capacity(half);
    for j in 0..half {
        // angles -π/2 + jπ/half, parametrized by t = tan(θ/2) in [-1, 1)
        let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * j as f64 / half as f64;
        let t = crate::rational::rat(((theta / 2.0).tan() * denom as f64).round() as i64, denom);
        let t2 = &t * &t;
        let den = &one() + &t2;
        let x = (&one() - &t2) / &den;
        let y = (&t + &t) / &den;
        vertices.push(FiberVector::new(vec![x, y]));
    }
    let mut min_cos2: Option<Rational> = None;
    for j in 0..half {
        let u = &vertices[j];
        let v = if j + 1 < half {
            vertices[j + 1].clone()
        } else {
            vertices[0].neg()
        };
        // squared distance from origin to the chord uv is (1 + ⟨u,v⟩)/2
        let c2 = (one() + u.dot(&v)) / Rational::from_integer(2.into());
        min_cos2 = Some(match min_cos2 {
            Some(m) if m <= c2 => m,
            _ => c2,
        });
    }
    let (inradius_lower, _) = sqrt_bounds(&min_cos2.expect("nonempty"), 15);
    InscribedPolygon {
        vertices,
        inradius_lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, to_f64};

    fn fv(v: &[i64]) -> FiberVector {
        FiberVector::new(v.iter().map(|&x| int(x)).collect())
    }

    fn as_set(v: Vec<FiberVector>) -> BTreeSet<FiberVector> {
        v.into_iter().collect()
    }

    #[test]
    fn polar_of_cross_polytope_is_cube() {
        let pv = polar_vertices(&[fv(&[1, 0]), fv(&[0, 1])]).unwrap();
        assert_eq!(
            as_set(pv),
            as_set(vec![fv(&[1, 1]), fv(&[1, -1]), fv(&[-1, 1]), fv(&[-1, -1])])
        );
        let pv3 = polar_vertices(&[fv(&[1, 0, 0]), fv(&[0, 1, 0]), fv(&[0, 0, 1])]).unwrap();
        assert_eq!(pv3.len(), 8);
    }

    #[test]
    fn polarity_examples() {
        let cross = [fv(&[1, 0]), fv(&[0, 1])];
        let cube = [fv(&[1, 1]), fv(&[1, -1])];
        assert_eq!(polarity_check(&cross, &cube).unwrap(), Polarity::Certified);
        assert_eq!(polarity_check(&cross, &cross).unwrap(), Polarity::Refuted);
        assert_eq!(
            polarity_check(&[fv(&[1])], &[fv(&[1])]).unwrap(),
            Polarity::Certified
        );
        assert!(matches!(
            polarity_check(&[fv(&[1, 0])], &cube),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn extreme_points_drop_boundary_and_interior() {
        // (1,0) is an edge midpoint of the square with vertices ±(1,1), ±(1,-1).
        let pts = [fv(&[1, 1]), fv(&[1, -1]), fv(&[1, 0]), fv(&[0, 0])];
        assert_eq!(
            extreme_points(&pts).unwrap(),
            vec![fv(&[1, 1]), fv(&[1, -1])]
        );
    }

    #[test]
    fn hexagon_polar() {
        let hex = [fv(&[1, 0]), fv(&[0, 1]), fv(&[1, 1])];
        let pv = canonical_representatives(&polar_vertices(&hex).unwrap());
        assert_eq!(
            as_set(pv),
            as_set(vec![fv(&[1, 0]), fv(&[0, 1]), fv(&[1, -1])])
        );
    }

    #[test]
    fn polygon_is_inscribed() {
        let p = inscribed_polygon(6);
        assert_eq!(p.vertices.len(), 32);
        for v in &p.vertices {
            assert_eq!(v.dot(v), int(1));
        }
        let r = to_f64(&p.inradius_lower);
        let ideal = (std::f64::consts::PI / 64.0).cos();
        assert!(r <= 1.0 && (r - ideal).abs() < 1e-4);
    }
}
