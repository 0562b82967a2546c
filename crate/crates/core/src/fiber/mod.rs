//! Finite-dimensional fiber norms.
//!
//! Every fiber of a module is `R^n` with a norm described by a
//! [`NormDescriptor`]: weighted `ℓ1`/`ℓ2`/`ℓ∞`, a polyhedral norm given by a
//! polar pair of vertex sets, or a block combination of smaller fibers.
//! Polyhedral-kind norms (`ℓ1`, `ℓ∞`, polyhedral, blocks of those) expose
//! primal and dual vertex lists, which is what makes the exact LP routes in
//! the rest of the crate possible.
//!
//! Vertex lists are symmetric by convention: listing `v` implies `-v`, and
//! generated lists carry one representative per `±` pair.

mod gauge;
mod polar;
mod value;

use std::ops::Deref;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{dot, Rational};

pub use gauge::{
    gauge_lp, min_gauge_over_affine, min_norm_over_affine, AffineMin, GaugeSolution, GaugeTerm,
};
pub use polar::{
    canonical_representatives, extreme_points, inscribed_polygon, polar_vertices, polarity_check,
    InscribedPolygon, Polarity,
};
pub use value::{NormValue, EUCLIDEAN_TOL, SPECTRAL_TOL};

/// Coordinates of a fiber vector with respect to the local basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiberVector(Vec<Rational>);

impl Deref for FiberVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for FiberVector {
    fn from(v: Vec<Rational>) -> Self {
        Self(v)
    }
}

impl AsRef<[Rational]> for FiberVector {
    fn as_ref(&self) -> &[Rational] {
        &self.0
    }
}

impl FiberVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        dot(&self.0, other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    One,
    Two,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockCombine {
    /// Sum of the block norms (an `ℓ1`-sum).
    Sum,
    /// Maximum of the block norms (an `ℓ∞`-sum).
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormKind {
    Lp {
        exponent: Exponent,
        weights: Vec<Rational>,
    },
    Polyhedral {
        vertices: Vec<FiberVector>,
        dual_vertices: Vec<FiberVector>,
    },
    Block {
        combine: BlockCombine,
        blocks: Vec<NormDescriptor>,
    },
}

/// A norm on `R^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormDescriptor {
    dim: usize,
    kind: NormKind,
}

impl NormDescriptor {
    /// The zero fiber `R^0`.
    pub fn zero() -> Self {
        Self {
            dim: 0,
            kind: NormKind::Lp {
                exponent: Exponent::One,
                weights: Vec::new(),
            },
        }
    }

    pub fn lp(exponent: Exponent, weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidDescriptor(format!(
                "weight {w} is not positive"
            )));
        }
        Ok(Self {
            dim: weights.len(),
            kind: NormKind::Lp { exponent, weights },
        })
    }

    fn unweighted(exponent: Exponent, dim: usize) -> Self {
        Self {
            dim,
            kind: NormKind::Lp {
                exponent,
                weights: vec![Rational::one(); dim],
            },
        }
    }

    pub fn l1(dim: usize) -> Self {
        Self::unweighted(Exponent::One, dim)
    }

    pub fn l2(dim: usize) -> Self {
        Self::unweighted(Exponent::Two, dim)
    }

    pub fn linf(dim: usize) -> Self {
        Self::unweighted(Exponent::Inf, dim)
    }

    /// A polyhedral norm with unit ball `conv(±vertices)` and
    /// `‖x‖ = max_d |⟨x, d⟩|` over `dual_vertices`.
    ///
    /// The pairing invariants are always checked; in dimension at most 3 the
    /// pair is also certified polar by facet enumeration.
    pub fn polyhedral(vertices: Vec<FiberVector>, dual_vertices: Vec<FiberVector>) -> Result<Self> {
        let desc = Self::polyhedral_unverified(vertices, dual_vertices)?;
        if let NormKind::Polyhedral {
            vertices,
            dual_vertices,
        } = &desc.kind
        {
            if polarity_check(vertices, dual_vertices)? == Polarity::Refuted {
                return Err(Error::InvalidDescriptor(
                    "dual vertices do not describe the polar of the vertex hull".into(),
                ));
            }
        }
        Ok(desc)
    }

    /// Checks only the pairing invariants.
    pub(crate) fn polyhedral_unverified(
        vertices: Vec<FiberVector>,
        dual_vertices: Vec<FiberVector>,
    ) -> Result<Self> {
        let dim = vertices
            .first()
            .or(dual_vertices.first())
            .map(|v| v.len())
            .ok_or_else(|| Error::InvalidDescriptor("empty vertex lists".into()))?;
        if dim == 0 {
            return Err(Error::InvalidDescriptor("polyhedral norm on R^0".into()));
        }
        for v in vertices.iter().chain(&dual_vertices) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        for (name, list) in [("vertices", &vertices), ("dual vertices", &dual_vertices)] {
            let cols: Vec<Vec<Rational>> = list.iter().map(|v| v.to_vec()).collect();
            if Matrix::from_columns(&cols, dim).rank() < dim {
                return Err(Error::InvalidDescriptor(format!(
                    "{name} do not span R^{dim}"
                )));
            }
        }
        let one = Rational::one();
        for (name, list, other) in [
            ("vertex", &vertices, &dual_vertices),
            ("dual vertex", &dual_vertices, &vertices),
        ] {
            for v in list {
                let best = other
                    .iter()
                    .map(|d| v.dot(d).abs())
                    .max()
                    .unwrap_or_default();
                if best != one {
                    return Err(Error::InvalidDescriptor(format!(
                        "{name} {:?} pairs to {best} instead of 1",
                        v.iter().map(|q| q.to_string()).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            kind: NormKind::Polyhedral {
                vertices,
                dual_vertices,
            },
        })
    }

    /// Polyhedral norm whose unit ball is `conv(±points)`; the dual vertices
    /// are found by facet enumeration (dimension at most 3).
    pub fn polyhedral_from_vertices(points: Vec<FiberVector>) -> Result<Self> {
        let dual = polar_vertices(&points)?;
        let vertices = extreme_points(&points)?;
        Self::polyhedral_unverified(vertices, canonical_representatives(&dual))
    }

    /// `ℓ1`-sum of the blocks; collapses to plain `ℓ1` when every block is.
    pub fn block_sum(blocks: Vec<NormDescriptor>) -> Self {
        Self::block(BlockCombine::Sum, blocks)
    }

    /// `ℓ∞`-sum of the blocks; collapses to plain `ℓ∞` when every block is.
    pub fn block_max(blocks: Vec<NormDescriptor>) -> Self {
        Self::block(BlockCombine::Max, blocks)
    }

    fn block(combine: BlockCombine, blocks: Vec<NormDescriptor>) -> Self {
        let blocks: Vec<_> = blocks.into_iter().filter(|b| b.dim > 0).collect();
        match blocks.len() {
            0 => return Self::zero(),
            1 => return blocks.into_iter().next().expect("one block"),
            _ => {}
        }
        let target = match combine {
            BlockCombine::Sum => Exponent::One,
            BlockCombine::Max => Exponent::Inf,
        };
        let flat: Option<Vec<Rational>> = blocks
            .iter()
            .map(|b| match &b.kind {
                NormKind::Lp { exponent, weights }
                    if *exponent == target || (b.dim == 1 && *exponent != Exponent::Two) =>
                {
                    Some(weights.clone())
                }
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|ws| ws.concat());
        if let Some(weights) = flat {
            return Self {
                dim: weights.len(),
                kind: NormKind::Lp {
                    exponent: target,
                    weights,
                },
            };
        }
        Self {
            dim: blocks.iter().map(|b| b.dim).sum(),
            kind: NormKind::Block { combine, blocks },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Weights of a Euclidean fiber.
    pub fn euclidean_weights(&self) -> Option<&[Rational]> {
        match &self.kind {
            NormKind::Lp {
                exponent: Exponent::Two,
                weights,
            } if self.dim > 0 => Some(weights),
            _ => None,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean_weights().is_some()
    }

    /// Whether the unit ball is a polytope with known vertex lists.
    pub fn is_polyhedral(&self) -> bool {
        match &self.kind {
            NormKind::Lp { exponent, .. } => *exponent != Exponent::Two || self.dim == 0,
            NormKind::Polyhedral { .. } => true,
            NormKind::Block { blocks, .. } => blocks.iter().all(Self::is_polyhedral),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            NormKind::Lp { exponent, .. } => {
                let p = match exponent {
                    Exponent::One => "l1",
                    Exponent::Two => "l2",
                    Exponent::Inf => "linf",
                };
                format!("{p}^{}", self.dim)
            }
            NormKind::Polyhedral { .. } => format!("poly^{}", self.dim),
            NormKind::Block { combine, blocks } => {
                let inner: Vec<String> = blocks.iter().map(Self::label).collect();
                format!("{combine:?}({})", inner.join(","))
            }
        }
    }

    fn check_dim(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, x: &[Rational]) -> Result<NormValue> {
        self.check_dim(x)?;
        Ok(self.norm_unchecked(x))
    }

    fn norm_unchecked(&self, x: &[Rational]) -> NormValue {
        match &self.kind {
            NormKind::Lp { exponent, weights } => match exponent {
                Exponent::One => {
                    NormValue::Exact(x.iter().zip(weights).map(|(a, w)| a.abs() * w).sum())
                }
                Exponent::Inf => NormValue::Exact(
                    x.iter()
                        .zip(weights)
                        .map(|(a, w)| a.abs() * w)
                        .max()
                        .unwrap_or_default(),
                ),
                Exponent::Two => {
                    NormValue::from_squared(x.iter().zip(weights).map(|(a, w)| a * a * w).sum())
                }
            },
            NormKind::Polyhedral { dual_vertices, .. } => NormValue::Exact(
                dual_vertices
                    .iter()
                    .map(|d| d.dot(x).abs())
                    .max()
                    .unwrap_or_default(),
            ),
            NormKind::Block { combine, blocks } => {
                let mut offset = 0;
                let parts = blocks.iter().map(|b| {
                    let v = b.norm_unchecked(&x[offset..offset + b.dim]);
                    offset += b.dim;
                    v
                });
                match combine {
                    BlockCombine::Sum => NormValue::sum_of(parts),
                    BlockCombine::Max => NormValue::max_of(parts),
                }
            }
        }
    }

    /// The dual norm with respect to the plain coordinate pairing.
    pub fn dual(&self) -> Self {
        let kind = match &self.kind {
            NormKind::Lp { exponent, weights } => NormKind::Lp {
                exponent: match exponent {
                    Exponent::One => Exponent::Inf,
                    Exponent::Two => Exponent::Two,
                    Exponent::Inf => Exponent::One,
                },
                weights: weights.iter().map(Rational::recip).collect(),
            },
            NormKind::Polyhedral {
                vertices,
                dual_vertices,
            } => NormKind::Polyhedral {
                vertices: dual_vertices.clone(),
                dual_vertices: vertices.clone(),
            },
            NormKind::Block { combine, blocks } => NormKind::Block {
                combine: match combine {
                    BlockCombine::Sum => BlockCombine::Max,
                    BlockCombine::Max => BlockCombine::Sum,
                },
                blocks: blocks.iter().map(Self::dual).collect(),
            },
        };
        Self {
            dim: self.dim,
            kind,
        }
    }

    /// One representative per `±` pair of unit-ball vertices, in canonical
    /// order. `None` for non-polyhedral norms.
    pub fn primal_vertices(&self) -> Option<Vec<FiberVector>> {
        if self.dim == 0 {
            return Some(Vec::new());
        }
        match &self.kind {
            NormKind::Lp { exponent, weights } => match exponent {
                Exponent::One => Some(
                    (0..self.dim)
                        .map(|i| FiberVector::unit(self.dim, i).scale(&weights[i].recip()))
                        .collect(),
                ),
                Exponent::Inf => Some(
                    sign_patterns(self.dim)
                        .into_iter()
                        .map(|s| {
                            FiberVector::new(s.iter().zip(weights).map(|(si, w)| si / w).collect())
                        })
                        .collect(),
                ),
                Exponent::Two => None,
            },
            NormKind::Polyhedral { vertices, .. } => Some(vertices.clone()),
            NormKind::Block { combine, blocks } => {
                let per_block: Vec<Vec<FiberVector>> = blocks
                    .iter()
                    .map(Self::primal_vertices)
                    .collect::<Option<_>>()?;
                Some(match combine {
                    BlockCombine::Sum => embed_blocks(blocks, &per_block),
                    BlockCombine::Max => product_blocks(&per_block),
                })
            }
        }
    }

    /// Representatives of the dual unit ball's vertices (a norming set).
    pub fn dual_vertices(&self) -> Option<Vec<FiberVector>> {
        self.dual().primal_vertices()
    }
}

/// Sign vectors in `{±1}^n` with first entry `+1`.
fn sign_patterns(n: usize) -> Vec<Vec<Rational>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..1usize << (n - 1))
        .map(|mask| {
            (0..n)
                .map(|i| {
                    if i > 0 && mask & (1 << (i - 1)) != 0 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect()
}

fn embed_blocks(blocks: &[NormDescriptor], per_block: &[Vec<FiberVector>]) -> Vec<FiberVector> {
    let dim: usize = blocks.iter().map(NormDescriptor::dim).sum();
    let mut out = Vec::new();
    let mut offset = 0;
    for (b, verts) in blocks.iter().zip(per_block) {
        for v in verts {
            let mut x = vec![Rational::zero(); dim];
            x[offset..offset + b.dim].clone_from_slice(v);
            out.push(FiberVector::new(x));
        }
        offset += b.dim;
    }
    out
}

/// Vertices of a product of symmetric polytopes: every choice of a signed
/// vertex per block, with the first block's sign fixed.
fn product_blocks(per_block: &[Vec<FiberVector>]) -> Vec<FiberVector> {
    let mut acc: Vec<Vec<Rational>> = vec![Vec::new()];
    for (k, verts) in per_block.iter().enumerate() {
        let mut next = Vec::with_capacity(acc.len() * verts.len() * 2);
        for prefix in &acc {
            for v in verts {
                let mut x = prefix.clone();
                x.extend(v.iter().cloned());
                next.push(x);
                if k > 0 {
                    let mut y = prefix.clone();
                    y.extend(v.iter().map(|q| -q));
                    next.push(y);
                }
            }
        }
        acc = next;
    }
    acc.into_iter().map(FiberVector::new).collect()
}
