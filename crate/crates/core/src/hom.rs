//! Homomorphisms, duals, Hahn–Banach witnesses, quotient operators,
//! annihilators and bounded bilinear forms.
//!
//! A homomorphism between modules over the same space is a matrix per atom.
//! Operator norms are computed exactly whenever one side is polyhedral: the
//! supremum of `‖Tx‖` over a polytope is attained at a vertex, and the dual
//! route `‖T‖ = max_d ‖Tᵀd‖_*` over target dual vertices covers Euclidean
//! sources. Two Euclidean fibers fall back to a weighted spectral norm.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{unsupported, Error, Result};
use crate::fiber::{min_norm_over_affine, FiberVector, NormDescriptor, NormValue, EUCLIDEAN_TOL};
use crate::linalg::Matrix;
use crate::measure::{same_space, L0Function};
use crate::module::{
    check_module, same_module, Element, ModuleSpec, NormField, Submodule, SQRT_DIGITS,
};
use crate::rational::{dot, sqrt_bounds, to_f64, Rational};
use crate::simplex;
use crate::svd;

fn check_shapes(matrices: &[Matrix], rows: &ModuleSpec, cols: &ModuleSpec) -> Result<()> {
    if matrices.len() != rows.space().len() {
        return Err(Error::DimensionMismatch {
            expected: rows.space().len(),
            found: matrices.len(),
        });
    }
    for (k, m) in matrices.iter().enumerate() {
        let (r, c) = (rows.fiber(k).dim(), cols.fiber(k).dim());
        if m.rows() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: m.rows(),
            });
        }
        if m.cols() != c {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: m.cols(),
            });
        }
    }
    Ok(())
}

/// `diag(w^e)` applied to rows and columns of `a`, in floating point.
pub(crate) fn weighted_f64(
    a: &Matrix,
    row_weights: Option<&[Rational]>,
    row_exp: f64,
    col_weights: Option<&[Rational]>,
    col_exp: f64,
) -> Vec<Vec<f64>> {
    let scale = |w: Option<&[Rational]>, i: usize, e: f64| w.map_or(1.0, |w| to_f64(&w[i]).powf(e));
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    to_f64(&a[(i, j)])
                        * scale(row_weights, i, row_exp)
                        * scale(col_weights, j, col_exp)
                })
                .collect()
        })
        .collect()
}

/// `sup { ‖a x‖_target : ‖x‖_source <= 1 }`.
pub fn operator_norm(
    a: &Matrix,
    source: &NormDescriptor,
    target: &NormDescriptor,
) -> Result<NormValue> {
    if a.rows() != target.dim() || a.cols() != source.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim() * source.dim(),
            found: a.rows() * a.cols(),
        });
    }
    if a.is_zero() {
        return Ok(NormValue::zero());
    }
    if let Some(vertices) = source.primal_vertices() {
        return Ok(max_value(
            vertices
                .iter()
                .map(|x| target.norm(&a.mul_vec(x)).expect("shape checked")),
        ));
    }
    if let Some(duals) = target.dual_vertices() {
        let at = a.transpose();
        let source_dual = source.dual();
        return Ok(max_value(duals.iter().map(|d| {
            source_dual.norm(&at.mul_vec(d)).expect("shape checked")
        })));
    }
    if let (Some(ws), Some(wt)) = (source.euclidean_weights(), target.euclidean_weights()) {
        let m = weighted_f64(a, Some(wt), 0.5, Some(ws), -0.5);
        return Ok(NormValue::approx(svd::spectral_norm(&m), EUCLIDEAN_TOL));
    }
    Err(unsupported(
        "operator norm",
        format!("{} -> {}", source.label(), target.label()),
    ))
}

pub(crate) fn max_value(values: impl IntoIterator<Item = NormValue>) -> NormValue {
    values.into_iter().fold(NormValue::zero(), |best, v| {
        if v.cmp_lenient(&best) == Ordering::Greater {
            v
        } else {
            best
        }
    })
}

/// An `L0`-linear map between modules over the same space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: Arc<ModuleSpec>,
    target: Arc<ModuleSpec>,
    matrices: Vec<Matrix>,
}

impl Homomorphism {
    /// `matrices[k]` is `target_dim × source_dim` at atom `k`.
    pub fn new(
        source: Arc<ModuleSpec>,
        target: Arc<ModuleSpec>,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        if !same_space(source.space(), target.space()) {
            return Err(Error::SpaceMismatch);
        }
        check_shapes(&matrices, &target, &source)?;
        Ok(Self {
            source,
            target,
            matrices,
        })
    }

    pub fn identity(module: Arc<ModuleSpec>) -> Self {
        let matrices = module
            .fibers()
            .iter()
            .map(|d| Matrix::identity(d.dim()))
            .collect();
        Self {
            source: module.clone(),
            target: module,
            matrices,
        }
    }

    pub fn zero(source: Arc<ModuleSpec>, target: Arc<ModuleSpec>) -> Result<Self> {
        let matrices = source
            .fibers()
            .iter()
            .zip(target.fibers())
            .map(|(s, t)| Matrix::zeros(t.dim(), s.dim()))
            .collect();
        Self::new(source, target, matrices)
    }

    pub fn source(&self) -> &Arc<ModuleSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ModuleSpec> {
        &self.target
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, atom: usize) -> &Matrix {
        &self.matrices[atom]
    }

    pub fn apply(&self, v: &Element) -> Result<Element> {
        check_module(&self.source, v.module())?;
        let fibers = self
            .matrices
            .iter()
            .zip(v.fibers())
            .map(|(m, x)| FiberVector::new(m.mul_vec(x)))
            .collect();
        Element::new(self.target.clone(), fibers)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Self> {
        check_module(&inner.target, &self.source)?;
        let matrices = self
            .matrices
            .iter()
            .zip(&inner.matrices)
            .map(|(a, b)| a.mul(b))
            .collect();
        Ok(Self {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrices,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            matrices: self.matrices.iter().map(|m| m.scale(q)).collect(),
        }
    }

    /// The adjoint `T*: N* -> M*`.
    pub fn adjoint(&self) -> Self {
        Self {
            source: Arc::new(self.target.dual()),
            target: Arc::new(self.source.dual()),
            matrices: self.matrices.iter().map(Matrix::transpose).collect(),
        }
    }

    /// The pointwise operator norm `|T|`.
    pub fn pointwise_norm(&self) -> Result<NormField> {
        let values = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, m)| operator_norm(m, self.source.fiber(k), self.target.fiber(k)))
            .collect::<Result<Vec<_>>>()?;
        NormField::new(self.source.space().clone(), values)
    }

    /// Checks whether `T` is a quotient operator: surjective, with the target
    /// norm equal to the minimal norm of preimages.
    ///
    /// Per atom the test requires `|T| <= 1` and, for every vertex `w` of the
    /// target unit ball, a preimage of norm exactly 1. Both conditions
    /// together give `T(B_M) = B_N`: the image ball is contained in `B_N`
    /// and contains every vertex of it. Euclidean targets are handled through
    /// the equivalent co-isometry identity `A W_M⁻¹ Aᵀ = W_N⁻¹`.
    pub fn quotient_report(&self) -> Result<QuotientReport> {
        let mut atoms = Vec::with_capacity(self.matrices.len());
        for (k, a) in self.matrices.iter().enumerate() {
            atoms.push(quotient_atom(
                a,
                self.source.fiber(k),
                self.target.fiber(k),
            )?);
        }
        Ok(QuotientReport { atoms })
    }

    pub fn is_quotient_operator(&self) -> Result<bool> {
        Ok(self.quotient_report()?.is_quotient())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinPreimage {
    pub target: FiberVector,
    pub preimage: FiberVector,
    pub norm: NormValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomQuotient {
    pub surjective: bool,
    pub norm: NormValue,
    pub min_preimages: Vec<MinPreimage>,
    /// `None` when the atom passes.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub atoms: Vec<AtomQuotient>,
}

impl QuotientReport {
    pub fn is_quotient(&self) -> bool {
        self.atoms.iter().all(|a| a.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<(usize, &str)> {
        self.atoms
            .iter()
            .enumerate()
            .find_map(|(k, a)| a.failure.as_deref().map(|f| (k, f)))
    }
}

fn quotient_atom(
    a: &Matrix,
    source: &NormDescriptor,
    target: &NormDescriptor,
) -> Result<AtomQuotient> {
    let one = NormValue::Exact(Rational::one());
    let surjective = a.rank() == target.dim();
    let norm = operator_norm(a, source, target)?;
    let mut report = AtomQuotient {
        surjective,
        norm: norm.clone(),
        min_preimages: Vec::new(),
        failure: None,
    };
    if !surjective {
        report.failure = Some(format!(
            "rank {} < target dimension {}",
            a.rank(),
            target.dim()
        ));
        return Ok(report);
    }
    if target.dim() == 0 {
        return Ok(report);
    }
    if !norm.le_within(&one, EUCLIDEAN_TOL) {
        report.failure = Some(format!("operator norm {norm} exceeds 1"));
        return Ok(report);
    }
    let Some(vertices) = target.primal_vertices() else {
        return match (source.euclidean_weights(), target.euclidean_weights()) {
            (Some(ws), Some(wt)) => {
                let winv = Matrix::diagonal(&ws.iter().map(Rational::recip).collect::<Vec<_>>());
                let lhs = a.mul(&winv).mul(&a.transpose());
                let rhs = Matrix::diagonal(&wt.iter().map(Rational::recip).collect::<Vec<_>>());
                if lhs != rhs {
                    report.failure = Some("adjoint is not an isometry".into());
                }
                Ok(report)
            }
            _ => Err(unsupported(
                "quotient test",
                format!("{} -> {}", source.label(), target.label()),
            )),
        };
    };
    let kernel: Vec<FiberVector> = a.null_space().into_iter().map(FiberVector::new).collect();
    for w in vertices {
        let p = a.solve(&w).expect("surjective");
        let r = min_norm_over_affine(source, &p, &kernel)?;
        let ok = r.value.exact_eq(&one) == Some(true);
        if !ok && report.failure.is_none() {
            report.failure = Some(format!(
                "vertex {:?} has minimal preimage norm {}",
                w.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                r.value
            ));
        }
        report.min_preimages.push(MinPreimage {
            target: w,
            preimage: r.minimizer,
            norm: r.value,
        });
    }
    Ok(report)
}

/// The per-atom dot product `ω(v)`; `ω` must live in the dual of `v`'s module.
pub fn pairing(omega: &Element, v: &Element) -> Result<L0Function> {
    let dual = Arc::new(v.module().dual());
    check_module(&dual, omega.module())?;
    let values = omega
        .fibers()
        .iter()
        .zip(v.fibers())
        .map(|(w, x)| dot(w, x))
        .collect();
    L0Function::new(v.space().clone(), values)
}

/// A functional `ω` on the unit sphere of `M*` with `ω(v) = |v|`.
///
/// Polyhedral fibers use the first dual vertex maximizing `|⟨d, v⟩|`,
/// signed so the pairing is nonnegative; atoms with `v = 0` get the first
/// dual vertex. Euclidean fibers use `W v / |v|`, which is exact when `|v|`
/// is rational and otherwise divides by a rational upper bound of `|v|`.
pub fn hahn_banach_witness(v: &Element) -> Result<Element> {
    let dual = Arc::new(v.module().dual());
    let norms = v.norm();
    let fibers = v
        .fibers()
        .iter()
        .enumerate()
        .map(|(k, x)| witness_fiber(v.module().fiber(k), x, norms.value(k)))
        .collect::<Result<Vec<_>>>()?;
    Element::new(dual, fibers)
}

fn witness_fiber(desc: &NormDescriptor, x: &FiberVector, norm: &NormValue) -> Result<FiberVector> {
    let dim = desc.dim();
    if dim == 0 {
        return Ok(FiberVector::zeros(0));
    }
    if let Some(duals) = desc.dual_vertices() {
        let mut best: Option<(Rational, &FiberVector)> = None;
        for d in &duals {
            let p = d.dot(x);
            if best.as_ref().is_none_or(|(b, _)| p.abs() > *b) {
                best = Some((p.abs(), d));
            }
        }
        let (_, d) = best.expect("dual vertices are nonempty");
        return Ok(if d.dot(x).is_negative() {
            d.neg()
        } else {
            d.clone()
        });
    }
    if let Some(w) = desc.euclidean_weights() {
        if norm.is_zero() {
            let (lo, _) = sqrt_bounds(&w[0], SQRT_DIGITS);
            return Ok(FiberVector::unit(dim, 0).scale(&lo));
        }
        let wx = FiberVector::new(x.iter().zip(w).map(|(a, b)| a * b).collect());
        let inv = match norm {
            NormValue::Exact(q) => q.recip(),
            NormValue::Sqrt(s) => sqrt_bounds(s, SQRT_DIGITS).1.recip(),
            other => unreachable!("Euclidean norms are exact or square roots, got {other}"),
        };
        return Ok(wx.scale(&inv));
    }
    Err(unsupported("Hahn-Banach witness", desc.label()))
}

/// `V^⊥ ⊆ M*`: functionals vanishing on `V`.
pub fn annihilator(v: &Submodule) -> Submodule {
    let dual = Arc::new(v.module().dual());
    let bases = v
        .bases()
        .iter()
        .enumerate()
        .map(|(k, basis)| {
            let rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.to_vec()).collect();
            Matrix::from_rows(rows, v.module().fiber(k).dim())
                .null_space()
                .into_iter()
                .map(FiberVector::new)
                .collect()
        })
        .collect();
    Submodule::new(dual, bases).expect("null space bases are independent")
}

/// Per-atom outcome of comparing the two descriptions of `V*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualComparison {
    pub functional: FiberVector,
    /// Norm of the class of the functional in `M* / V^⊥`.
    pub quotient: Rational,
    /// Norm of the functional restricted to `V`.
    pub restriction: Rational,
}

/// Verifies `V* ≅ M*/V^⊥` on every dual vertex of `M`: the quotient norm of
/// each vertex modulo the annihilator must equal the norm of its restriction
/// to `V`. The restricted vertices generate the dual ball of `V`, so
/// agreement on them gives agreement everywhere.
pub fn quotient_dual_check(v: &Submodule) -> Result<(bool, Vec<Vec<DualComparison>>)> {
    let perp = annihilator(v);
    let mut all = true;
    let mut atoms = Vec::new();
    for (k, basis) in v.bases().iter().enumerate() {
        let desc = v.module().fiber(k);
        let Some(duals) = desc.dual_vertices() else {
            return Err(unsupported("annihilator check", desc.label()));
        };
        let dual_desc = desc.dual();
        let mut rows = Vec::new();
        for d in duals.iter().cloned() {
            let q = min_norm_over_affine(&dual_desc, &d, perp.basis(k))?;
            let q = q
                .value
                .exact()
                .cloned()
                .expect("polyhedral quotient norms are exact");
            let r = restriction_norm(&d, basis, &duals)?;
            all &= q == r;
            rows.push(DualComparison {
                functional: d,
                quotient: q,
                restriction: r,
            });
        }
        atoms.push(rows);
    }
    Ok((all, atoms))
}

/// `max ⟨d, x⟩` over `x ∈ span(basis)` with `|⟨e, x⟩| <= 1` for all `e`.
fn restriction_norm(
    d: &FiberVector,
    basis: &[FiberVector],
    norming: &[FiberVector],
) -> Result<Rational> {
    let k = basis.len();
    if k == 0 {
        return Ok(Rational::zero());
    }
    // Variables: c⁺ (k), c⁻ (k), then one slack per constraint.
    let m = 2 * norming.len();
    let cols = 2 * k + m;
    let mut a = Matrix::zeros(m, cols);
    let b = vec![Rational::one(); m];
    for (i, e) in norming.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let g = e.dot(bj);
            a[(2 * i, j)] = g.clone();
            a[(2 * i, k + j)] = -g.clone();
            a[(2 * i + 1, j)] = -g.clone();
            a[(2 * i + 1, k + j)] = g;
        }
        a[(2 * i, 2 * k + 2 * i)] = Rational::one();
        a[(2 * i + 1, 2 * k + 2 * i + 1)] = Rational::one();
    }
    let mut c = vec![Rational::zero(); cols];
    for (j, bj) in basis.iter().enumerate() {
        let g = d.dot(bj);
        c[j] = -g.clone();
        c[k + j] = g;
    }
    let sol = simplex::minimize(&a, &b, &c)?;
    Ok(-sol.objective)
}

/// A bounded bilinear form `b(v, w) = vᵀ B w` per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    left: Arc<ModuleSpec>,
    right: Arc<ModuleSpec>,
    matrices: Vec<Matrix>,
}

impl BilinearForm {
    /// `matrices[k]` is `left_dim × right_dim` at atom `k`.
    pub fn new(
        left: Arc<ModuleSpec>,
        right: Arc<ModuleSpec>,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        if !same_space(left.space(), right.space()) {
            return Err(Error::SpaceMismatch);
        }
        check_shapes(&matrices, &left, &right)?;
        Ok(Self {
            left,
            right,
            matrices,
        })
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

    pub fn apply(&self, v: &Element, w: &Element) -> Result<L0Function> {
        check_module(&self.left, v.module())?;
        check_module(&self.right, w.module())?;
        let values = self
            .matrices
            .iter()
            .zip(v.fibers().iter().zip(w.fibers()))
            .map(|(b, (x, y))| dot(x, &b.mul_vec(y)))
            .collect();
        L0Function::new(self.left.space().clone(), values)
    }

    /// `|b| = sup |b(v, w)|` over the unit discs, per atom.
    pub fn pointwise_norm(&self) -> Result<NormField> {
        let values = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, b)| bilinear_norm(b, self.left.fiber(k), self.right.fiber(k)))
            .collect::<Result<Vec<_>>>()?;
        NormField::new(self.left.space().clone(), values)
    }

    /// `v ↦ b(v, ·)` as a homomorphism `M -> N*`.
    pub fn curry(&self) -> Homomorphism {
        Homomorphism {
            source: self.left.clone(),
            target: Arc::new(self.right.dual()),
            matrices: self.matrices.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Inverse of [`curry`](Self::curry).
    pub fn uncurry(t: &Homomorphism) -> Result<Self> {
        let right = Arc::new(t.target().dual());
        if !same_module(&Arc::new(right.dual()), t.target()) {
            return Err(Error::ModuleMismatch);
        }
        Self::new(
            t.source().clone(),
            right,
            t.matrices().iter().map(Matrix::transpose).collect(),
        )
    }
}

/// `sup |xᵀ B y|` over the unit balls of `left` and `right`.
pub fn bilinear_norm(
    b: &Matrix,
    left: &NormDescriptor,
    right: &NormDescriptor,
) -> Result<NormValue> {
    if b.is_zero() || left.dim() == 0 || right.dim() == 0 {
        return Ok(NormValue::zero());
    }
    match (left.primal_vertices(), right.primal_vertices()) {
        (Some(xs), Some(ys)) => {
            let best = xs
                .iter()
                .flat_map(|x| {
                    let bx = b.transpose().mul_vec(x);
                    ys.iter().map(move |y| dot(&bx, y).abs())
                })
                .max()
                .unwrap_or_default();
            Ok(NormValue::Exact(best))
        }
        // Curried: |b| = sup_x ‖Bᵀx‖ in the dual of the right fiber.
        (Some(_), None) => operator_norm(&b.transpose(), left, &right.dual()),
        (None, Some(_)) => operator_norm(b, right, &left.dual()),
        (None, None) => match (left.euclidean_weights(), right.euclidean_weights()) {
            (Some(wl), Some(wr)) => {
                let m = weighted_f64(b, Some(wl), -0.5, Some(wr), -0.5);
                Ok(NormValue::approx(svd::spectral_norm(&m), EUCLIDEAN_TOL))
            }
            _ => Err(unsupported(
                "bilinear norm",
                format!("{} x {}", left.label(), right.label()),
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;
    use crate::rational::{int, rat};

    fn fv(x: &[i64]) -> FiberVector {
        FiberVector::new(x.iter().map(|&a| int(a)).collect())
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            cols,
        )
    }

    fn one_atom(fiber: NormDescriptor) -> Arc<ModuleSpec> {
        Arc::new(ModuleSpec::constant(
            Arc::new(MeasureSpace::uniform(1)),
            fiber,
        ))
    }

    fn hom(source: NormDescriptor, target: NormDescriptor, a: Matrix) -> Homomorphism {
        Homomorphism::new(one_atom(source), one_atom(target), vec![a]).unwrap()
    }

    fn norm_of(t: &Homomorphism) -> NormValue {
        t.pointwise_norm().unwrap().value(0).clone()
    }

    #[test]
    fn operator_norm_examples() {
        let t = hom(
            NormDescriptor::l1(2),
            NormDescriptor::l1(2),
            m(&[&[1, 0], &[0, 2]]),
        );
        assert_eq!(norm_of(&t), NormValue::Exact(int(2)));
        let t = hom(
            NormDescriptor::linf(2),
            NormDescriptor::linf(2),
            m(&[&[1, 1], &[0, 0]]),
        );
        assert_eq!(norm_of(&t), NormValue::Exact(int(2)));
        let t = hom(
            NormDescriptor::l2(2),
            NormDescriptor::l1(2),
            m(&[&[1, 0], &[0, 1]]),
        );
        assert_eq!(norm_of(&t), NormValue::Sqrt(int(2)));
        let t = hom(
            NormDescriptor::l2(2),
            NormDescriptor::l2(2),
            m(&[&[3, 0], &[4, 0]]),
        );
        assert!(norm_of(&t).matches(&int(5), 1e-9));
        let id = Homomorphism::identity(one_atom(NormDescriptor::l1(3)));
        assert_eq!(norm_of(&id), NormValue::Exact(int(1)));
    }

    #[test]
    fn apply_and_compose() {
        let t = hom(
            NormDescriptor::l1(2),
            NormDescriptor::l1(2),
            m(&[&[1, 0], &[0, 2]]),
        );
        let v = Element::constant(t.source().clone(), &fv(&[1, 1])).unwrap();
        assert_eq!(t.apply(&v).unwrap().fiber(0), &fv(&[1, 2]));
        let tt = t.compose(&t).unwrap();
        assert_eq!(tt.matrix(0), &m(&[&[1, 0], &[0, 4]]));
        let z = Homomorphism::zero(t.source().clone(), t.target().clone()).unwrap();
        assert!(z.apply(&v).unwrap().is_zero());
    }

    #[test]
    fn quotient_examples() {
        let proj = hom(NormDescriptor::l1(2), NormDescriptor::l1(1), m(&[&[1, 0]]));
        let report = proj.quotient_report().unwrap();
        assert!(report.is_quotient());
        let mp = &report.atoms[0].min_preimages[0];
        assert_eq!(mp.preimage, fv(&[1, 0]));
        assert_eq!(mp.norm, NormValue::Exact(int(1)));

        let double = hom(
            NormDescriptor::l1(2),
            NormDescriptor::l1(2),
            m(&[&[2, 0], &[0, 2]]),
        );
        assert!(!double.is_quotient_operator().unwrap());
        let half = double.scale(&rat(1, 4));
        assert!(!half.is_quotient_operator().unwrap());
        let singular = hom(
            NormDescriptor::l1(2),
            NormDescriptor::l1(2),
            m(&[&[1, 0], &[0, 0]]),
        );
        assert!(!singular.is_quotient_operator().unwrap());

        // The 45° rotation maps the l1 ball onto the linf ball.
        let rot = hom(
            NormDescriptor::l1(2),
            NormDescriptor::linf(2),
            m(&[&[1, 1], &[1, -1]]),
        );
        assert!(rot.is_quotient_operator().unwrap());
        let id2 = hom(
            NormDescriptor::l2(2),
            NormDescriptor::l2(2),
            m(&[&[0, 1], &[1, 0]]),
        );
        assert!(id2.is_quotient_operator().unwrap());
        let proj2 = hom(NormDescriptor::l2(2), NormDescriptor::l2(1), m(&[&[1, 0]]));
        assert!(proj2.is_quotient_operator().unwrap());
    }

    #[test]
    fn image_ball_larger_than_target_ball_is_rejected() {
        // Vertices of the l1 ball are hit by norm-one preimages, but the
        // image of the linf ball is the whole linf ball.
        let t = hom(
            NormDescriptor::linf(2),
            NormDescriptor::l1(2),
            m(&[&[1, 0], &[0, 1]]),
        );
        let report = t.quotient_report().unwrap();
        assert!(!report.is_quotient());
        assert!(report.first_failure().unwrap().1.contains("exceeds"));
    }

    #[test]
    fn hahn_banach_examples() {
        let module = one_atom(NormDescriptor::l2(2));
        let v = Element::constant(module, &fv(&[3, -4])).unwrap();
        let w = hahn_banach_witness(&v).unwrap();
        assert_eq!(w.fiber(0).as_slice(), &[rat(3, 5), rat(-4, 5)]);
        assert_eq!(pairing(&w, &v).unwrap().values(), &[int(5)]);

        let module = one_atom(NormDescriptor::l1(2));
        let v = Element::constant(module.clone(), &fv(&[1, -2])).unwrap();
        let w = hahn_banach_witness(&v).unwrap();
        assert_eq!(w.fiber(0), &fv(&[1, -1]));
        assert_eq!(pairing(&w, &v).unwrap().values(), &[int(3)]);
        assert!(w.on_unit_sphere());

        let z = Element::zero(module);
        let w = hahn_banach_witness(&z).unwrap();
        assert!(pairing(&w, &z).unwrap().values()[0].is_zero());
        assert!(w.on_unit_sphere());
    }

    #[test]
    fn annihilator_examples() {
        let module = one_atom(NormDescriptor::l1(2));
        let zero = Submodule::zero(module.clone());
        assert_eq!(annihilator(&zero).basis(0).len(), 2);
        assert!(annihilator(&Submodule::full(module.clone()))
            .basis(0)
            .is_empty());

        let v = Submodule::new(module, vec![vec![fv(&[1, 0])]]).unwrap();
        let perp = annihilator(&v);
        assert_eq!(perp.basis(0), &[fv(&[0, 1])]);
        let (ok, rows) = quotient_dual_check(&v).unwrap();
        assert!(ok);
        assert!(rows[0]
            .iter()
            .all(|c| c.restriction == c.functional[0].abs()));
        assert!(quotient_dual_check(&zero).unwrap().0);
    }

    #[test]
    fn quotient_dual_check_on_a_skew_line() {
        let module = one_atom(NormDescriptor::linf(3));
        let v = Submodule::new(module, vec![vec![fv(&[1, 2, -1]), fv(&[0, 1, 1])]]).unwrap();
        assert!(quotient_dual_check(&v).unwrap().0);
    }

    #[test]
    fn bilinear_forms() {
        let l1 = one_atom(NormDescriptor::l1(2));
        let b = BilinearForm::new(l1.clone(), l1.clone(), vec![Matrix::identity(2)]).unwrap();
        assert_eq!(
            b.pointwise_norm().unwrap().value(0),
            &NormValue::Exact(int(1))
        );
        let c = b.curry();
        assert_eq!(norm_of(&c), NormValue::Exact(int(1)));
        assert_eq!(BilinearForm::uncurry(&c).unwrap(), b);
        let z = BilinearForm::new(l1.clone(), l1, vec![Matrix::zeros(2, 2)]).unwrap();
        assert!(z.pointwise_norm().unwrap().value(0).is_zero());

        let l2 = one_atom(NormDescriptor::l2(2));
        let linf = one_atom(NormDescriptor::linf(2));
        let b = BilinearForm::new(linf, l2, vec![m(&[&[1, 2], &[3, -1]])]).unwrap();
        let n = b.pointwise_norm().unwrap().value(0).clone();
        assert_eq!(n, norm_of(&b.curry()));
    }
}
