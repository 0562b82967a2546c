//! Tensors of modules and their pointwise crossnorms.
//!
//! A tensor over `(M, N)` is stored as one coefficient matrix per atom:
//! `Σ v_i ⊗ w_i` becomes `Σ v_i w_iᵀ`. The representation is canonical, so
//! two representations give the same tensor exactly when their matrices
//! agree.
//!
//! Projective norm. When both fibers are polyhedral, the projective unit
//! ball is the symmetric convex hull of `x yᵀ` with `x`, `y` running over the
//! vertices of the two unit balls: any `v ⊗ w` with `|v| = |w| = 1` is a
//! convex combination of such products, by expanding `v` and `w` separately.
//! The norm is therefore a gauge, computed exactly by one LP whose optimal
//! basis is a finite optimal decomposition and whose dual solution is a
//! bilinear form of norm at most 1 attaining the value. Two Euclidean fibers
//! give the nuclear norm. A two-dimensional Euclidean fiber against a
//! polyhedral one is replaced by an inscribed regular polygon, which yields
//! certified bounds.
//!
//! Injective norm. Dual ball vertices are norming, so `ε(A)` is the maximum
//! of `|dᵀ A e|` over dual vertex pairs, or of `‖Aᵀd‖` when only one side is
//! polyhedral.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{unsupported, Error, Result};
use crate::fiber::{
    gauge_lp, inscribed_polygon, min_gauge_over_affine, FiberVector, NormDescriptor, NormValue,
    SPECTRAL_TOL,
};
use crate::hom::{bilinear_norm, max_value, weighted_f64, BilinearForm, Homomorphism};
use crate::linalg::Matrix;
use crate::measure::{same_space, L0Function};
use crate::module::{check_module, Element, ModuleSpec, NormField};
use crate::rational::{exact_sqrt, Rational};
use crate::svd;

/// Default polygon refinement `2^k` for mixed Euclidean/polyhedral fibers.
pub const DEFAULT_POLYGON_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Crossnorm {
    /// Projective.
    Pi,
    /// Injective.
    Eps,
    /// Hilbert–Schmidt.
    Hs,
}

impl fmt::Display for Crossnorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pi => "pi",
            Self::Eps => "eps",
            Self::Hs => "hs",
        })
    }
}

impl FromStr for Crossnorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Self::Pi),
            "eps" => Ok(Self::Eps),
            "hs" => Ok(Self::Hs),
            _ => Err(Error::InvalidInput(format!(
                "unknown crossnorm `{s}` (expected pi, eps or hs)"
            ))),
        }
    }
}

/// An element of the algebraic tensor product `M ⊗ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    left: Arc<ModuleSpec>,
    right: Arc<ModuleSpec>,
    matrices: Vec<Matrix>,
}

impl Tensor {
    /// `matrices[k]` is `left_dim × right_dim` at atom `k`.
    pub fn new(
        left: Arc<ModuleSpec>,
        right: Arc<ModuleSpec>,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        let b = BilinearForm::new(left, right, matrices)?;
        Ok(Self {
            left: b.left().clone(),
            right: b.right().clone(),
            matrices: b.matrices().to_vec(),
        })
    }

    pub fn zero(left: Arc<ModuleSpec>, right: Arc<ModuleSpec>) -> Result<Self> {
        let matrices = left
            .fibers()
            .iter()
            .zip(right.fibers())
            .map(|(l, r)| Matrix::zeros(l.dim(), r.dim()))
            .collect();
        Self::new(left, right, matrices)
    }

    /// `v ⊗ w`.
    pub fn elementary(v: &Element, w: &Element) -> Result<Self> {
        if !same_space(v.space(), w.space()) {
            return Err(Error::SpaceMismatch);
        }
        let matrices = v
            .fibers()
            .iter()
            .zip(w.fibers())
            .map(|(x, y)| Matrix::outer(x, y))
            .collect();
        Ok(Self {
            left: v.module().clone(),
            right: w.module().clone(),
            matrices,
        })
    }

    /// `Σ v_i ⊗ w_i`.
    pub fn from_representation(
        left: Arc<ModuleSpec>,
        right: Arc<ModuleSpec>,
        pairs: &[(Element, Element)],
    ) -> Result<Self> {
        let mut acc = Self::zero(left, right)?;
        for (v, w) in pairs {
            acc = acc.add(&Self::elementary(v, w)?)?;
        }
        Ok(acc)
    }

    pub fn left(&self) -> &Arc<ModuleSpec> {
        &self.left
    }

    pub fn right(&self) -> &Arc<ModuleSpec> {
        &self.right
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, atom: usize) -> &Matrix {
        &self.matrices[atom]
    }

    pub fn space(&self) -> &Arc<crate::measure::MeasureSpace> {
        self.left.space()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        check_module(&self.left, &other.left)?;
        check_module(&self.right, &other.right)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrices(
            self.matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.add(b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrices(
            self.matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.sub(b))
                .collect(),
        ))
    }

    /// The module action `f·α`.
    pub fn scalar_action(&self, f: &L0Function) -> Result<Self> {
        if !same_space(f.space(), self.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.with_matrices(
            self.matrices
                .iter()
                .enumerate()
                .map(|(k, a)| a.scale(f.value(k)))
                .collect(),
        ))
    }

    pub(crate) fn with_matrices(&self, matrices: Vec<Matrix>) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            matrices,
        }
    }

    pub fn is_null(&self) -> bool {
        self.matrices.iter().all(Matrix::is_zero)
    }

    pub fn norm(&self, flavor: Crossnorm) -> Result<NormField> {
        match flavor {
            Crossnorm::Pi => Ok(self.projective_norm()?.field),
            Crossnorm::Eps => self.injective_norm(),
            Crossnorm::Hs => {
                let squared = self.hs_norm_squared()?;
                NormField::new(
                    self.space().clone(),
                    squared
                        .values()
                        .iter()
                        .cloned()
                        .map(NormValue::from_squared)
                        .collect(),
                )
            }
        }
    }

    pub fn projective_norm(&self) -> Result<ProjectiveNorm> {
        self.projective_norm_with(DEFAULT_POLYGON_LEVEL)
    }

    /// Projective norm, using inscribed `2^level`-gons for two-dimensional
    /// Euclidean fibers paired with polyhedral ones.
    pub fn projective_norm_with(&self, level: u32) -> Result<ProjectiveNorm> {
        let atoms = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, a)| projective_atom(a, self.left.fiber(k), self.right.fiber(k), level))
            .collect::<Result<Vec<_>>>()?;
        let field = NormField::new(
            self.space().clone(),
            atoms.iter().map(|a| a.value.clone()).collect(),
        )?;
        Ok(ProjectiveNorm { field, atoms })
    }

    pub fn injective_norm(&self) -> Result<NormField> {
        let values = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, a)| injective_atom(a, self.left.fiber(k), self.right.fiber(k)))
            .collect::<Result<Vec<_>>>()?;
        NormField::new(self.space().clone(), values)
    }

    /// Squared Hilbert–Schmidt norm: the weighted Frobenius norm, exact.
    pub fn hs_norm_squared(&self) -> Result<L0Function> {
        let values = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, a)| hs_squared_atom(a, self.left.fiber(k), self.right.fiber(k)))
            .collect::<Result<Vec<_>>>()?;
        L0Function::new(self.space().clone(), values)
    }

    /// Checks `ε <= c <= π` per atom for every crossnorm `c` available on
    /// these fibers (Hilbert–Schmidt only when both fibers are Euclidean).
    pub fn crossnorm_sandwich(&self, tol: f64) -> Result<SandwichReport> {
        let eps = self.injective_norm()?;
        let pi = self.projective_norm()?.field;
        let hs = match self.norm(Crossnorm::Hs) {
            Ok(hs) => Some(hs),
            Err(Error::UnsupportedKinds { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut holds = eps.le_within(&pi, tol);
        if let Some(hs) = &hs {
            holds &= eps.le_within(hs, tol) && hs.le_within(&pi, tol);
        }
        Ok(SandwichReport { eps, hs, pi, holds })
    }

    /// `(L_α, R_α)`: `L_α(ω) = Σ ω(v_i) w_i` from `M*` to `N` and
    /// `R_α(η) = Σ η(w_i) v_i` from `N*` to `M`.
    pub fn realize_left_right(&self) -> (Homomorphism, Homomorphism) {
        let l = Homomorphism::new(
            Arc::new(self.left.dual()),
            self.right.clone(),
            self.matrices.iter().map(Matrix::transpose).collect(),
        )
        .expect("shapes follow the tensor");
        let r = Homomorphism::new(
            Arc::new(self.right.dual()),
            self.left.clone(),
            self.matrices.clone(),
        )
        .expect("shapes follow the tensor");
        (l, r)
    }
}

/// Compares the matrix-zero test with the dual-pair criterion
/// `Σ ω(v_i) η(w_i) = 0` on a representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullCheck {
    pub matrix_zero: bool,
    pub dual_criterion: bool,
}

impl NullCheck {
    pub fn agree(&self) -> bool {
        self.matrix_zero == self.dual_criterion
    }
}

/// Evaluates the null-tensor criterion over every pair of dual vertices
/// (coordinate functionals on Euclidean fibers, which also span the dual).
pub fn null_check(
    left: Arc<ModuleSpec>,
    right: Arc<ModuleSpec>,
    pairs: &[(Element, Element)],
) -> Result<NullCheck> {
    let tensor = Tensor::from_representation(left.clone(), right.clone(), pairs)?;
    let functionals = |d: &NormDescriptor| {
        d.dual_vertices().unwrap_or_else(|| {
            (0..d.dim())
                .map(|i| FiberVector::unit(d.dim(), i))
                .collect()
        })
    };
    let mut dual_criterion = true;
    for k in 0..left.space().len() {
        let omegas = functionals(left.fiber(k));
        let etas = functionals(right.fiber(k));
        for omega in &omegas {
            for eta in &etas {
                let total: Rational = pairs
                    .iter()
                    .map(|(v, w)| omega.dot(v.fiber(k)) * eta.dot(w.fiber(k)))
                    .sum();
                dual_criterion &= total.is_zero();
            }
        }
    }
    Ok(NullCheck {
        matrix_zero: tensor.is_null(),
        dual_criterion,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub eps: NormField,
    pub hs: Option<NormField>,
    pub pi: NormField,
    pub holds: bool,
}

/// The projective norm on one atom.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveAtom {
    pub value: NormValue,
    /// A decomposition `A = Σ x_i y_iᵀ` with `Σ |x_i||y_i| = value`, when the
    /// norm was computed exactly.
    pub decomposition: Vec<(FiberVector, FiberVector)>,
    /// A matrix `B` with bilinear norm at most 1 and `⟨B, A⟩ = value`.
    pub certificate: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveNorm {
    pub field: NormField,
    pub atoms: Vec<ProjectiveAtom>,
}

impl ProjectiveNorm {
    /// The per-atom decompositions glued into one representation, padding
    /// shorter atoms with zero pairs.
    pub fn witness_representation(
        &self,
        left: &Arc<ModuleSpec>,
        right: &Arc<ModuleSpec>,
    ) -> Result<Vec<(Element, Element)>> {
        let len = self
            .atoms
            .iter()
            .map(|a| a.decomposition.len())
            .max()
            .unwrap_or(0);
        (0..len)
            .map(|i| {
                let mut lf = Vec::with_capacity(self.atoms.len());
                let mut rf = Vec::with_capacity(self.atoms.len());
                for (k, atom) in self.atoms.iter().enumerate() {
                    match atom.decomposition.get(i) {
                        Some((x, y)) => {
                            lf.push(x.clone());
                            rf.push(y.clone());
                        }
                        None => {
                            lf.push(FiberVector::zeros(left.fiber(k).dim()));
                            rf.push(FiberVector::zeros(right.fiber(k).dim()));
                        }
                    }
                }
                Ok((
                    Element::new(left.clone(), lf)?,
                    Element::new(right.clone(), rf)?,
                ))
            })
            .collect()
    }

    /// The certificates as a bilinear form, if every atom has one.
    pub fn certificate_form(
        &self,
        left: &Arc<ModuleSpec>,
        right: &Arc<ModuleSpec>,
    ) -> Option<BilinearForm> {
        let matrices = self
            .atoms
            .iter()
            .map(|a| a.certificate.clone())
            .collect::<Option<Vec<_>>>()?;
        BilinearForm::new(left.clone(), right.clone(), matrices).ok()
    }
}

/// Vertices standing in for a unit ball in LP computations.
struct BallVertices {
    vertices: Vec<FiberVector>,
    /// `c` with `c·B ⊆ conv(±vertices) ⊆ B`; 1 when the hull is the ball.
    inradius: Rational,
}

fn ball_vertices(desc: &NormDescriptor, level: u32) -> Option<BallVertices> {
    if let Some(vertices) = desc.primal_vertices() {
        return Some(BallVertices {
            vertices,
            inradius: Rational::one(),
        });
    }
    let w = desc.euclidean_weights()?;
    let roots: Vec<Rational> = w.iter().map(exact_sqrt).collect::<Option<_>>()?;
    match desc.dim() {
        1 => Some(BallVertices {
            vertices: vec![FiberVector::new(vec![roots[0].recip()])],
            inradius: Rational::one(),
        }),
        2 => {
            let polygon = inscribed_polygon(level);
            let vertices = polygon
                .vertices
                .iter()
                .map(|p| FiberVector::new(p.iter().zip(&roots).map(|(a, r)| a / r).collect()))
                .collect();
            Some(BallVertices {
                vertices,
                inradius: polygon.inradius_lower,
            })
        }
        _ => None,
    }
}

fn vectorized_products(xs: &[FiberVector], ys: &[FiberVector]) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(
                x.iter()
                    .flat_map(|a| y.iter().map(move |b| a * b))
                    .collect(),
            );
        }
    }
    out
}

fn projective_atom(
    a: &Matrix,
    left: &NormDescriptor,
    right: &NormDescriptor,
    level: u32,
) -> Result<ProjectiveAtom> {
    if a.is_zero() {
        return Ok(ProjectiveAtom {
            value: NormValue::zero(),
            decomposition: Vec::new(),
            certificate: Some(Matrix::zeros(a.rows(), a.cols())),
        });
    }
    if let (Some(wl), Some(wr)) = (left.euclidean_weights(), right.euclidean_weights()) {
        let m = weighted_f64(a, Some(wl), 0.5, Some(wr), 0.5);
        return Ok(ProjectiveAtom {
            value: NormValue::approx(svd::nuclear_norm(&m), SPECTRAL_TOL),
            decomposition: Vec::new(),
            certificate: None,
        });
    }
    let (Some(bl), Some(br)) = (ball_vertices(left, level), ball_vertices(right, level)) else {
        return Err(unsupported(
            "projective norm",
            format!("{} (x) {}", left.label(), right.label()),
        ));
    };
    let dictionary = vectorized_products(&bl.vertices, &br.vertices);
    let sol = gauge_lp(&dictionary, &a.vectorize())?;
    let exact = bl.inradius.is_one() && br.inradius.is_one();
    if !exact {
        let c = &bl.inradius * &br.inradius;
        return Ok(ProjectiveAtom {
            value: NormValue::Bounded {
                lower: &c * &sol.value,
                upper: sol.value,
            },
            decomposition: Vec::new(),
            certificate: None,
        });
    }
    let n = br.vertices.len();
    let decomposition = sol
        .terms
        .iter()
        .map(|t| {
            let x = &bl.vertices[t.index / n];
            let y = &br.vertices[t.index % n];
            let s = if t.negated {
                -t.weight.clone()
            } else {
                t.weight.clone()
            };
            (x.scale(&s), y.clone())
        })
        .collect();
    Ok(ProjectiveAtom {
        value: NormValue::Exact(sol.value),
        decomposition,
        certificate: Some(Matrix::from_vector(
            sol.dual_certificate,
            a.rows(),
            a.cols(),
        )),
    })
}

/// Whether `cert` has bilinear norm at most 1 and pairs with `a` to `value`.
pub fn certificate_holds(
    a: &Matrix,
    cert: &Matrix,
    value: &Rational,
    left: &NormDescriptor,
    right: &NormDescriptor,
) -> Result<bool> {
    let norm = bilinear_norm(cert, left, right)?;
    let bounded = norm
        .exact()
        .map(|q| q <= &Rational::one())
        .unwrap_or_else(|| norm.le_within(&NormValue::Exact(Rational::one()), 0.0));
    Ok(bounded && &cert.frobenius_dot(a) == value)
}

fn injective_atom(a: &Matrix, left: &NormDescriptor, right: &NormDescriptor) -> Result<NormValue> {
    if a.is_zero() {
        return Ok(NormValue::zero());
    }
    if let (Some(wl), Some(wr)) = (left.euclidean_weights(), right.euclidean_weights()) {
        let m = weighted_f64(a, Some(wl), 0.5, Some(wr), 0.5);
        return Ok(NormValue::approx(svd::spectral_norm(&m), SPECTRAL_TOL));
    }
    if let Some(ds) = left.dual_vertices() {
        let at = a.transpose();
        return Ok(max_value(
            ds.iter()
                .map(|d| right.norm(&at.mul_vec(d)).expect("shape checked")),
        ));
    }
    if let Some(es) = right.dual_vertices() {
        return Ok(max_value(
            es.iter()
                .map(|e| left.norm(&a.mul_vec(e)).expect("shape checked")),
        ));
    }
    Err(unsupported(
        "injective norm",
        format!("{} (x) {}", left.label(), right.label()),
    ))
}

fn hs_squared_atom(a: &Matrix, left: &NormDescriptor, right: &NormDescriptor) -> Result<Rational> {
    if left.dim() == 0 || right.dim() == 0 {
        return Ok(Rational::zero());
    }
    let (Some(wl), Some(wr)) = (left.euclidean_weights(), right.euclidean_weights()) else {
        return Err(unsupported(
            "Hilbert-Schmidt norm",
            format!("{} (x) {}", left.label(), right.label()),
        ));
    };
    let mut total = Rational::zero();
    for (i, wi) in wl.iter().enumerate() {
        for (j, wj) in wr.iter().enumerate() {
            let x = &a[(i, j)];
            total += x * x * wi * wj;
        }
    }
    Ok(total)
}

/// `(T ⊗ S)(α)`: per atom `A ↦ T A Sᵀ`.
pub fn tensor_of_homs(t: &Homomorphism, s: &Homomorphism, alpha: &Tensor) -> Result<Tensor> {
    check_module(t.source(), alpha.left())?;
    check_module(s.source(), alpha.right())?;
    let matrices = alpha
        .matrices
        .iter()
        .enumerate()
        .map(|(k, a)| t.matrix(k).mul(a).mul(&s.matrix(k).transpose()))
        .collect();
    Tensor::new(t.target().clone(), s.target().clone(), matrices)
}

/// The operator norm of `T ⊗ S` between the `flavor` tensor products.
///
/// Projective: the source ball is the hull of vertex products, so the norm
/// is the largest `π(Tx ⊗ Sy)`. Injective: the dual side is a projective
/// product of duals, so the norm is the largest `π(T*ω ⊗ S*η)` over dual
/// vertices of the targets.
pub fn tensor_hom_norm(t: &Homomorphism, s: &Homomorphism, flavor: Crossnorm) -> Result<NormField> {
    if !same_space(t.source().space(), s.source().space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut values = Vec::new();
    for k in 0..t.source().space().len() {
        let value = match flavor {
            Crossnorm::Pi => product_norm_over(
                t.matrix(k),
                s.matrix(k),
                t.source().fiber(k).primal_vertices(),
                s.source().fiber(k).primal_vertices(),
                t.target().fiber(k),
                s.target().fiber(k),
            )?,
            Crossnorm::Eps => product_norm_over(
                &t.matrix(k).transpose(),
                &s.matrix(k).transpose(),
                t.target().fiber(k).dual_vertices(),
                s.target().fiber(k).dual_vertices(),
                &t.source().fiber(k).dual(),
                &s.source().fiber(k).dual(),
            )?,
            Crossnorm::Hs => {
                return Err(unsupported("tensor product of homomorphisms", "hs"));
            }
        };
        values.push(value);
    }
    NormField::new(t.source().space().clone(), values)
}

fn product_norm_over(
    t: &Matrix,
    s: &Matrix,
    xs: Option<Vec<FiberVector>>,
    ys: Option<Vec<FiberVector>>,
    left: &NormDescriptor,
    right: &NormDescriptor,
) -> Result<NormValue> {
    let (Some(xs), Some(ys)) = (xs, ys) else {
        return Err(unsupported(
            "tensor product of homomorphisms",
            "factors must be polyhedral",
        ));
    };
    let mut values = Vec::new();
    for x in &xs {
        let tx = t.mul_vec(x);
        for y in &ys {
            let a = Matrix::outer(&tx, &s.mul_vec(y));
            values.push(projective_atom(&a, left, right, DEFAULT_POLYGON_LEVEL)?.value);
        }
    }
    Ok(max_value(values))
}

/// The linearization `b̃(α) = Σ b(v_i, w_i)`: per atom `⟨B, A⟩`.
pub fn pairing_with_bilinear(b: &BilinearForm, alpha: &Tensor) -> Result<L0Function> {
    check_module(b.left(), alpha.left())?;
    check_module(b.right(), alpha.right())?;
    let values = b
        .matrices()
        .iter()
        .zip(&alpha.matrices)
        .map(|(bm, a)| bm.frobenius_dot(a))
        .collect();
    L0Function::new(alpha.space().clone(), values)
}

/// `ι(α)(ω, η) = Σ ω(v_i) η(w_i)` for `ω`, `η` in the dual unit discs.
pub fn iota_evaluate(alpha: &Tensor, omega: &Element, eta: &Element) -> Result<L0Function> {
    check_module(&Arc::new(alpha.left.dual()), omega.module())?;
    check_module(&Arc::new(alpha.right.dual()), eta.module())?;
    for e in [omega, eta] {
        if !e.in_unit_disc() {
            let one = NormValue::Exact(Rational::one());
            let k = e
                .norm()
                .values()
                .iter()
                .position(|v| !v.le_within(&one, crate::fiber::EUCLIDEAN_TOL))
                .unwrap_or(0);
            return Err(Error::OutsideDualDisc(e.space().atom_id(k).to_string()));
        }
    }
    let values = alpha
        .matrices
        .iter()
        .zip(omega.fibers().iter().zip(eta.fibers()))
        .map(|(a, (w, h))| crate::rational::dot(w, &a.mul_vec(h)))
        .collect();
    L0Function::new(alpha.space().clone(), values)
}

/// Outcome of the vertex min-preimage test for `T ⊗_π S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorQuotientReport {
    /// Minimal projective norm of a preimage, per target dictionary element,
    /// per atom.
    pub min_preimage_norms: Vec<Vec<Rational>>,
    pub holds: bool,
}

/// For quotient operators `T` and `S`, checks that every product `x ⊗ y` of
/// target ball vertices has a preimage under `T ⊗ S` of projective norm
/// exactly 1. With `|T ⊗_π S| = |T||S| <= 1` this is the gauge argument for
/// `T ⊗_π S` being a quotient operator.
pub fn projective_quotient_check(
    t: &Homomorphism,
    s: &Homomorphism,
) -> Result<TensorQuotientReport> {
    for op in [t, s] {
        if !op.is_quotient_operator()? {
            return Err(Error::NotQuotient);
        }
    }
    if !same_space(t.source().space(), s.source().space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut all = Vec::new();
    let mut holds = true;
    for k in 0..t.source().space().len() {
        let (tm, sm) = (t.matrix(k), s.matrix(k));
        let fibers = [
            t.source().fiber(k),
            s.source().fiber(k),
            t.target().fiber(k),
            s.target().fiber(k),
        ];
        if fibers.iter().any(|d| d.dim() == 0) {
            all.push(Vec::new());
            continue;
        }
        let vertices: Vec<Vec<FiberVector>> = fibers
            .iter()
            .map(|d| {
                d.primal_vertices()
                    .ok_or_else(|| unsupported("tensor quotient test", d.label()))
            })
            .collect::<Result<_>>()?;
        let dictionary = vectorized_products(&vertices[0], &vertices[1]);
        let kron = kronecker(tm, sm);
        let kernel = kron.null_space();
        let mut atom = Vec::new();
        for target in vectorized_products(&vertices[2], &vertices[3]) {
            let p = kron.solve(&target).expect("T ⊗ S is onto");
            let (value, _) = min_gauge_over_affine(&dictionary, &p, &kernel)?;
            holds &= value.is_one();
            atom.push(value);
        }
        all.push(atom);
    }
    Ok(TensorQuotientReport {
        min_preimage_norms: all,
        holds,
    })
}

/// The matrix of `A ↦ T A Sᵀ` on row-major vectorizations.
pub(crate) fn kronecker(t: &Matrix, s: &Matrix) -> Matrix {
    let (n1, m1) = t.shape();
    let (n2, m2) = s.shape();
    let mut k = Matrix::zeros(n1 * n2, m1 * m2);
    for i in 0..n1 {
        for a in 0..m1 {
            if t[(i, a)].is_zero() {
                continue;
            }
            for j in 0..n2 {
                for b in 0..m2 {
                    k[(i * n2 + j, a * m2 + b)] = &t[(i, a)] * &s[(j, b)];
                }
            }
        }
    }
    k
}

/// `|Σ T(v_i)(w_i)|` for a homomorphism `T: M -> N*`, the operator form of
/// the bilinear pairing.
pub fn operator_pairing(t: &Homomorphism, alpha: &Tensor) -> Result<L0Function> {
    let b = BilinearForm::uncurry(t)?;
    pairing_with_bilinear(&b, alpha).map(|f| f.map(|q| q.abs()))
}
