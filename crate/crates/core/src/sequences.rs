//! Finite families `ℓ_p(I, M)`, `ℓ1`-sums of modules, and maps from a finite
//! discrete space `K` into a module.
//!
//! With `I` finite, the supremum over finite subsets in the definition of
//! `|v|_p` is the full sum, so every norm here is a fiberwise combination of
//! member norms. For a finite discrete `K` every map is uniformly
//! continuous, and `UC(K; M)` is the `ℓ∞`-sum of `|K|` copies of `M`.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{unsupported, Error, Result};
use crate::fiber::{
    min_norm_over_affine, Exponent, FiberVector, NormDescriptor, NormKind, NormValue, SPECTRAL_TOL,
};
use crate::hom::{Homomorphism, QuotientReport};
use crate::linalg::Matrix;
use crate::measure::{same_space, L0Function};
use crate::module::{check_module, Element, ModuleSpec, NormField};
use crate::rational::Rational;
use crate::tensor::Tensor;

/// Members `v_i`, `i ∈ I = {0, ..., n-1}`, of one module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedFamily {
    module: Arc<ModuleSpec>,
    members: Vec<Element>,
}

impl IndexedFamily {
    pub fn new(module: Arc<ModuleSpec>, members: Vec<Element>) -> Result<Self> {
        for m in &members {
            check_module(&module, m.module())?;
        }
        Ok(Self { module, members })
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        &self.module
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `|v|_p` per atom.
    pub fn ellp_norm(&self, p: Exponent) -> NormField {
        let norms: Vec<NormField> = self.members.iter().map(Element::norm).collect();
        let n_atoms = self.module.space().len();
        let values = (0..n_atoms)
            .map(|k| {
                let parts = norms.iter().map(|f| f.value(k).clone());
                match p {
                    Exponent::One => NormValue::sum_of(parts),
                    Exponent::Inf => NormValue::max_of(parts),
                    Exponent::Two => {
                        let parts: Vec<NormValue> = parts.collect();
                        match parts
                            .iter()
                            .map(NormValue::squared)
                            .collect::<Option<Vec<_>>>()
                        {
                            Some(sq) => NormValue::from_squared(sq.into_iter().sum()),
                            None => NormValue::approx(
                                parts.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt(),
                                parts.iter().map(NormValue::tol).sum(),
                            ),
                        }
                    }
                }
            })
            .collect();
        NormField::new(self.module.space().clone(), values).expect("one value per atom")
    }

    /// The family as one element of a block module (`ℓ1`-sum or `UC(K; M)`)
    /// whose fibers concatenate the members' fibers.
    pub fn concat(&self, target: Arc<ModuleSpec>) -> Result<Element> {
        let fibers = (0..self.module.space().len())
            .map(|k| {
                FiberVector::new(
                    self.members
                        .iter()
                        .flat_map(|m| m.fiber(k).iter().cloned())
                        .collect(),
                )
            })
            .collect();
        Element::new(target, fibers)
    }

    /// Inverse of [`concat`](Self::concat).
    pub fn split(module: Arc<ModuleSpec>, n: usize, v: &Element) -> Result<Self> {
        let members = (0..n)
            .map(|i| {
                let fibers = v
                    .fibers()
                    .iter()
                    .enumerate()
                    .map(|(k, x)| {
                        let d = module.fiber(k).dim();
                        if x.len() != n * d {
                            return Err(Error::DimensionMismatch {
                                expected: n * d,
                                found: x.len(),
                            });
                        }
                        Ok(FiberVector::new(x[i * d..(i + 1) * d].to_vec()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Element::new(module.clone(), fibers)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { module, members })
    }
}

/// `ℓ1(I, M)` for `|I| = n`: fibers are `n` copies of `M`'s fibers under the
/// sum of block norms.
pub fn ell1_sum_module(n: usize, module: &ModuleSpec) -> ModuleSpec {
    block_module(n, module, NormDescriptor::block_sum)
}

fn block_module(
    n: usize,
    module: &ModuleSpec,
    combine: fn(Vec<NormDescriptor>) -> NormDescriptor,
) -> ModuleSpec {
    let fibers = module
        .fibers()
        .iter()
        .map(|d| combine(vec![d.clone(); n]))
        .collect();
    ModuleSpec::new(module.space().clone(), fibers).expect("one fiber per atom")
}

fn is_plain(desc: &NormDescriptor, exponent: Exponent) -> bool {
    matches!(desc.kind(), NormKind::Lp { exponent: e, weights } if *e == exponent && weights.iter().all(One::is_one))
}

/// Compares `π(A)` over `ℓ1(I) ⊗ M` with `Σ_i |row_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct VvReport {
    pub rows: IndexedFamily,
    pub pi: NormField,
    pub row_sum: NormField,
    /// Exact equality, or containment of the row sum in the certified
    /// enclosure of `π` when the right fibers are approximated.
    pub equal: bool,
}

/// The rows of a tensor over `(L0(X; ℓ1(I)), M)` as a family in `M`.
pub fn tensor_rows(alpha: &Tensor) -> Result<IndexedFamily> {
    let left = alpha.left();
    let n = left.fiber(0).dim();
    if left.fibers().iter().any(|d| d.dim() != n) {
        return Err(Error::InvalidInput(
            "left fibers must share one dimension".into(),
        ));
    }
    let members = (0..n)
        .map(|i| {
            let fibers = alpha
                .matrices()
                .iter()
                .map(|a| FiberVector::new(a.row(i).to_vec()))
                .collect();
            Element::new(alpha.right().clone(), fibers)
        })
        .collect::<Result<Vec<_>>>()?;
    IndexedFamily::new(alpha.right().clone(), members)
}

/// The isomorphism `L0(X; ℓ1(I)) ⊗_π M ≅ ℓ1(I, M)` on one tensor.
pub fn vv_iso_check(alpha: &Tensor) -> Result<VvReport> {
    if !alpha
        .left()
        .fibers()
        .iter()
        .all(|d| is_plain(d, Exponent::One) || d.dim() == 0)
    {
        return Err(unsupported(
            "vv isomorphism",
            "left fibers must be unweighted l1(I)",
        ));
    }
    let rows = tensor_rows(alpha)?;
    let pi = alpha.projective_norm()?.field;
    let row_sum = rows.ellp_norm(Exponent::One);
    let equal = pi
        .values()
        .iter()
        .zip(row_sum.values())
        .all(|(p, r)| match (p, r.exact()) {
            (NormValue::Bounded { lower, upper }, Some(q)) => lower <= q && q <= upper,
            _ => p
                .exact_eq(r)
                .unwrap_or_else(|| p.approx_eq(r, SPECTRAL_TOL)),
        });
    Ok(VvReport {
        rows,
        pi,
        row_sum,
        equal,
    })
}

/// Checks that `L0(X; ℓ1(I))` and `ℓ1(I, L0(X))` agree on the coefficient
/// rows `a[k]` (one row per atom): the `ℓ1(I)` fiber norm equals the sum of
/// the coordinate functions' absolute values, and the coordinates rebuild
/// `a` as `Σ a_i e_i`.
pub fn two_ell1_check(
    space: &Arc<crate::measure::MeasureSpace>,
    a: &[Vec<Rational>],
) -> Result<bool> {
    if a.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            found: a.len(),
        });
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("rows must share one length".into()));
    }
    let bochner = Arc::new(ModuleSpec::constant(space.clone(), NormDescriptor::l1(n)));
    let v = Element::new(
        bochner.clone(),
        a.iter().cloned().map(FiberVector::new).collect(),
    )?;
    let scalars = Arc::new(ModuleSpec::scalars(space.clone()));
    let coordinates = (0..n)
        .map(|i| {
            Element::new(
                scalars.clone(),
                a.iter()
                    .map(|row| FiberVector::new(vec![row[i].clone()]))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let family = IndexedFamily::new(scalars, coordinates.clone())?;
    let same_norm = v.norm() == family.ellp_norm(Exponent::One);
    let mut rebuilt = Element::zero(bochner.clone());
    for (i, c) in coordinates.iter().enumerate() {
        let f = L0Function::new(
            space.clone(),
            c.fibers().iter().map(|x| x[0].clone()).collect(),
        )?;
        let e_i = Element::constant(bochner.clone(), &FiberVector::unit(n, i))?;
        rebuilt = rebuilt.add(&e_i.scalar_action(&f)?)?;
    }
    Ok(same_norm && rebuilt == v)
}

/// `φ_G(f) = Σ_{v ∈ G} f_v v` from `ℓ1(G, L0(X))` to `M`, with its quotient
/// verdict. Members must lie on the unit sphere.
pub fn sphere_quotient(
    module: Arc<ModuleSpec>,
    generators: &[Element],
) -> Result<(Homomorphism, QuotientReport)> {
    for g in generators {
        check_module(&module, g.module())?;
        if !g.on_unit_sphere() {
            let one = NormValue::Exact(Rational::one());
            let norms = g.norm();
            let k = (0..norms.values().len())
                .find(|&k| {
                    let v = norms.value(k);
                    !(v.is_zero() || v.approx_eq(&one, crate::fiber::EUCLIDEAN_TOL))
                })
                .unwrap_or(0);
            return Err(Error::NotSphereMember(
                module.space().atom_id(k).to_string(),
            ));
        }
    }
    let n = generators.len();
    let source = Arc::new(ModuleSpec::constant(
        module.space().clone(),
        NormDescriptor::l1(n),
    ));
    let matrices = (0..module.space().len())
        .map(|k| {
            let cols: Vec<Vec<Rational>> = generators.iter().map(|g| g.fiber(k).to_vec()).collect();
            Matrix::from_columns(&cols, module.fiber(k).dim())
        })
        .collect();
    let phi = Homomorphism::new(source, module, matrices)?;
    let report = phi.quotient_report()?;
    Ok((phi, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalReport {
    pub pi: NormField,
    pub eps: NormField,
    pub sum_abs: L0Function,
    pub max_abs: L0Function,
    pub holds: bool,
}

/// `α = Σ f_i (e_i ⊗ e_i)` in `L0(X; ℓ2(I)) ⊗ L0(X; ℓ2(I))`: checks
/// `π(α) = Σ |f_i|` and `ε(α) = max |f_i|` within `tol`.
pub fn diagonal_check(fs: &[L0Function], tol: f64) -> Result<DiagonalReport> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty diagonal family".into()))?;
    let space = first.space().clone();
    if fs.iter().any(|f| !same_space(f.space(), &space)) {
        return Err(Error::SpaceMismatch);
    }
    let n = fs.len();
    let module = Arc::new(ModuleSpec::constant(space.clone(), NormDescriptor::l2(n)));
    let matrices = (0..space.len())
        .map(|k| Matrix::diagonal(&fs.iter().map(|f| f.value(k).clone()).collect::<Vec<_>>()))
        .collect();
    let alpha = Tensor::new(module.clone(), module, matrices)?;
    let pi = alpha.projective_norm()?.field;
    let eps = alpha.injective_norm()?;
    let abs: Vec<L0Function> = fs.iter().map(L0Function::abs).collect();
    let sum_abs = L0Function::new(
        space.clone(),
        (0..space.len())
            .map(|k| abs.iter().map(|f| f.value(k)).sum())
            .collect(),
    )?;
    let max_abs = L0Function::new(
        space.clone(),
        (0..space.len())
            .map(|k| {
                abs.iter()
                    .map(|f| f.value(k).clone())
                    .max()
                    .unwrap_or_default()
            })
            .collect(),
    )?;
    let holds = pi.approx_eq(&NormField::from_l0(&sum_abs), tol)
        && eps.approx_eq(&NormField::from_l0(&max_abs), tol);
    Ok(DiagonalReport {
        pi,
        eps,
        sum_abs,
        max_abs,
        holds,
    })
}

/// A finite discrete compact space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpaceK {
    points: Vec<String>,
}

impl FiniteSpaceK {
    pub fn new<S: Into<String>>(points: impl IntoIterator<Item = S>) -> Result<Self> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidInput("K has no points".into()));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::InvalidInput("duplicate point in K".into()));
        }
        Ok(Self { points })
    }

    /// Points `p0, p1, ...`.
    pub fn uniform(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("p{i}"))).expect("n > 0")
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self, point: &str) -> Option<usize> {
        self.points.iter().position(|p| p == point)
    }
}

/// `UC(K; M)` with `|v| = max_p |v(p)|`.
pub fn uc_module(k: &FiniteSpaceK, module: &ModuleSpec) -> ModuleSpec {
    block_module(k.len(), module, NormDescriptor::block_max)
}

/// The map `p ↦ values[p]` as an element of `UC(K; M)`.
pub fn uc_element(k: &FiniteSpaceK, uc: Arc<ModuleSpec>, values: &[Element]) -> Result<Element> {
    if values.len() != k.len() {
        return Err(Error::DimensionMismatch {
            expected: k.len(),
            found: values.len(),
        });
    }
    let module = values[0].module().clone();
    IndexedFamily::new(module, values.to_vec())?.concat(uc)
}

/// The evaluation `δ_p: UC(K; M) -> M`.
pub fn evaluation_hom(
    k: &FiniteSpaceK,
    module: Arc<ModuleSpec>,
    point: &str,
) -> Result<Homomorphism> {
    let p = k
        .index(point)
        .ok_or_else(|| Error::InvalidInput(format!("`{point}` is not a point of K")))?;
    let uc = Arc::new(uc_module(k, &module));
    let matrices = module
        .fibers()
        .iter()
        .map(|d| {
            let dim = d.dim();
            let mut m = Matrix::zeros(dim, dim * k.len());
            for i in 0..dim {
                m[(i, p * dim + i)] = Rational::one();
            }
            m
        })
        .collect();
    Homomorphism::new(uc, module, matrices)
}

/// Compares `ε(A)` over `UC(K; L0(X)) ⊗ M` with `max_p |row_p|`.
#[derive(Debug, Clone, PartialEq)]
pub struct UcReport {
    pub rows: IndexedFamily,
    pub eps: NormField,
    pub max_row: NormField,
    pub equal: bool,
}

/// The isomorphism `UC(K; L0(X)) ⊗_ε M ≅ UC(K; M)` on one tensor.
pub fn inj_tens_uc_check(alpha: &Tensor) -> Result<UcReport> {
    if !alpha
        .left()
        .fibers()
        .iter()
        .all(|d| is_plain(d, Exponent::Inf) || d.dim() <= 1)
    {
        return Err(unsupported(
            "UC isomorphism",
            "left fibers must be unweighted linf(K)",
        ));
    }
    let rows = tensor_rows(alpha)?;
    let eps = alpha.injective_norm()?;
    let max_row = rows.ellp_norm(Exponent::Inf);
    let equal = eps.values().iter().zip(max_row.values()).all(|(e, r)| {
        e.exact_eq(r)
            .unwrap_or_else(|| e.approx_eq(r, SPECTRAL_TOL))
    });
    Ok(UcReport {
        rows,
        eps,
        max_row,
        equal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcQuotientReport {
    /// Minimal injective norm of a preimage of each target dictionary
    /// element, per atom.
    pub min_preimage_norms: Vec<Vec<Rational>>,
    pub holds: bool,
}

/// For a quotient operator `T: M -> N`, checks that `id ⊗_ε T` from
/// `UC(K; L0) ⊗_ε M` to `UC(K; L0) ⊗_ε N` lifts every target ball vertex to a
/// preimage of injective norm exactly 1.
///
/// The target ball is the product of `|K|` copies of `B_N` (one per row),
/// its vertices are the choices of a signed vertex of `B_N` per row, and the
/// minimal preimage norm separates over rows because the injective norm is
/// the largest row norm.
pub fn uc_quotient_tensor_check(t: &Homomorphism, k: &FiniteSpaceK) -> Result<UcQuotientReport> {
    if !t.is_quotient_operator()? {
        return Err(Error::NotQuotient);
    }
    let mut all = Vec::new();
    let mut holds = true;
    for atom in 0..t.source().space().len() {
        let a = t.matrix(atom);
        let (source, target) = (t.source().fiber(atom), t.target().fiber(atom));
        if target.dim() == 0 {
            all.push(Vec::new());
            continue;
        }
        let vertices = target
            .primal_vertices()
            .ok_or_else(|| unsupported("UC quotient test", target.label()))?;
        let kernel: Vec<FiberVector> = a.null_space().into_iter().map(FiberVector::new).collect();
        let mut cache: HashMap<FiberVector, Rational> = HashMap::new();
        let mut row_norm = |w: &FiberVector| -> Result<Rational> {
            let key = if w.first_nonzero_negative() {
                w.neg()
            } else {
                w.clone()
            };
            if let Some(v) = cache.get(&key) {
                return Ok(v.clone());
            }
            let p = a.solve(&key).expect("quotient operators are onto");
            let r = min_norm_over_affine(source, &p, &kernel)?;
            let v = r
                .value
                .exact()
                .cloned()
                .ok_or_else(|| unsupported("UC quotient test", source.label()))?;
            cache.insert(key, v.clone());
            Ok(v)
        };
        let mut atom_values = Vec::new();
        for rows in row_choices(&vertices, k.len()) {
            let mut value = Rational::zero();
            for w in &rows {
                value = value.max(row_norm(w)?);
            }
            holds &= value.is_one();
            atom_values.push(value);
        }
        all.push(atom_values);
    }
    Ok(UcQuotientReport {
        min_preimage_norms: all,
        holds,
    })
}

/// Every choice of a signed vertex per row, first row's sign fixed.
fn row_choices(vertices: &[FiberVector], rows: usize) -> Vec<Vec<FiberVector>> {
    let mut acc: Vec<Vec<FiberVector>> = vec![Vec::new()];
    for r in 0..rows {
        let mut next = Vec::new();
        for prefix in &acc {
            for v in vertices {
                let mut x = prefix.clone();
                x.push(v.clone());
                next.push(x);
                if r > 0 {
                    let mut y = prefix.clone();
                    y.push(v.neg());
                    next.push(y);
                }
            }
        }
        acc = next;
    }
    acc
}

trait LeadingSign {
    fn first_nonzero_negative(&self) -> bool;
}

impl LeadingSign for FiberVector {
    fn first_nonzero_negative(&self) -> bool {
        self.iter()
            .find(|q| !q.is_zero())
            .is_some_and(Signed::is_negative)
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

    fn space(n: usize) -> Arc<MeasureSpace> {
        Arc::new(MeasureSpace::uniform(n))
    }

    #[test]
    fn ellp_examples() {
        let scalars = Arc::new(ModuleSpec::scalars(space(2)));
        let a = Element::new(scalars.clone(), vec![fv(&[1]), fv(&[-2])]).unwrap();
        let b = Element::new(scalars.clone(), vec![fv(&[3]), fv(&[0])]).unwrap();
        let fam = IndexedFamily::new(scalars.clone(), vec![a.clone(), b]).unwrap();
        let one = fam.ellp_norm(Exponent::One);
        assert_eq!(one.exact().unwrap().values(), &[int(4), int(2)]);
        let inf = fam.ellp_norm(Exponent::Inf);
        assert_eq!(inf.exact().unwrap().values(), &[int(3), int(2)]);
        let single = IndexedFamily::new(scalars, vec![a.clone()]).unwrap();
        assert_eq!(single.ellp_norm(Exponent::Two), a.norm());
    }

    #[test]
    fn sum_modules() {
        let m1 = ModuleSpec::constant(space(1), NormDescriptor::l2(2));
        assert_eq!(ell1_sum_module(1, &m1), m1);
        let l0 = ModuleSpec::scalars(space(2));
        assert_eq!(
            ell1_sum_module(3, &l0),
            ModuleSpec::constant(space(2), NormDescriptor::l1(3))
        );
        assert_eq!(
            uc_module(&FiniteSpaceK::uniform(3), &l0),
            ModuleSpec::constant(space(2), NormDescriptor::linf(3))
        );
        let sum = Arc::new(ell1_sum_module(2, &m1));
        let m1 = Arc::new(m1);
        let v = Element::constant(m1.clone(), &fv(&[3, 4])).unwrap();
        let w = Element::constant(m1.clone(), &fv(&[1, 0])).unwrap();
        let fam = IndexedFamily::new(m1.clone(), vec![v, w]).unwrap();
        let joined = fam.concat(sum).unwrap();
        assert_eq!(joined.norm(), fam.ellp_norm(Exponent::One));
        assert_eq!(IndexedFamily::split(m1, 2, &joined).unwrap(), fam);
    }

    #[test]
    fn vv_examples() {
        let s = space(1);
        let left = Arc::new(ModuleSpec::constant(s.clone(), NormDescriptor::l1(2)));
        let right = Arc::new(ModuleSpec::constant(s.clone(), NormDescriptor::l2(2)));
        let alpha = Tensor::new(left.clone(), right, vec![m(&[&[3, 4], &[0, 0]])]).unwrap();
        let r = vv_iso_check(&alpha).unwrap();
        assert!(r.equal);
        assert_eq!(r.row_sum.value(0), &NormValue::Exact(int(5)));

        let id = Tensor::new(left.clone(), left, vec![Matrix::identity(2)]).unwrap();
        let r = vv_iso_check(&id).unwrap();
        assert!(r.equal);
        assert_eq!(r.pi.value(0), &NormValue::Exact(int(2)));
    }

    #[test]
    fn two_ell1_examples() {
        let s = space(2);
        assert!(two_ell1_check(&s, &[vec![int(1), int(-2)], vec![rat(1, 3), int(0)]]).unwrap());
        assert!(two_ell1_check(&s, &[vec![int(0)], vec![int(0)]]).unwrap());
    }

    #[test]
    fn sphere_quotient_examples() {
        let s = space(1);
        let poly =
            NormDescriptor::polyhedral_from_vertices(vec![fv(&[1, 0]), fv(&[0, 1]), fv(&[1, 1])])
                .unwrap();
        let module = Arc::new(ModuleSpec::constant(s, poly.clone()));
        let gens: Vec<Element> = poly
            .primal_vertices()
            .unwrap()
            .iter()
            .map(|v| Element::constant(module.clone(), v).unwrap())
            .collect();
        let (_, report) = sphere_quotient(module.clone(), &gens).unwrap();
        assert!(report.is_quotient());
        let (_, report) = sphere_quotient(module.clone(), &gens[..1]).unwrap();
        assert!(!report.is_quotient());
        let half = gens[0].scale(&rat(1, 2));
        assert!(matches!(
            sphere_quotient(module, &[half]),
            Err(Error::NotSphereMember(_))
        ));
    }

    #[test]
    fn diagonal_examples() {
        let s = space(2);
        let f1 = L0Function::new(s.clone(), vec![int(1), int(0)]).unwrap();
        let f2 = L0Function::new(s.clone(), vec![int(-2), int(0)]).unwrap();
        let r = diagonal_check(&[f1.clone(), f2], 1e-7).unwrap();
        assert!(r.holds);
        assert!(r.pi.value(0).matches(&int(3), 1e-7));
        let r = diagonal_check(&[f1], 1e-7).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn uc_examples() {
        let s = space(1);
        let k = FiniteSpaceK::uniform(2);
        let l0 = ModuleSpec::scalars(s.clone());
        let uc = Arc::new(uc_module(&k, &l0));
        let l1 = Arc::new(ModuleSpec::constant(s.clone(), NormDescriptor::l1(2)));
        let id = Tensor::new(uc.clone(), l1.clone(), vec![Matrix::identity(2)]).unwrap();
        let r = inj_tens_uc_check(&id).unwrap();
        assert!(r.equal);
        assert_eq!(r.eps.value(0), &NormValue::Exact(int(1)));

        let ucm = Arc::new(uc_module(&k, &l1));
        let v = Element::constant(l1.clone(), &fv(&[1, -3])).unwrap();
        let c = uc_element(&k, ucm.clone(), &[v.clone(), v.clone()]).unwrap();
        assert_eq!(c.norm(), v.norm());
        let delta = evaluation_hom(&k, l1.clone(), "p1").unwrap();
        assert_eq!(delta.apply(&c).unwrap(), v);
        assert_eq!(
            delta.pointwise_norm().unwrap().value(0),
            &NormValue::Exact(int(1))
        );
        assert_eq!(uc_module(&FiniteSpaceK::uniform(1), &l1), *l1);
    }

    #[test]
    fn uc_quotient_examples() {
        let s = space(1);
        let k = FiniteSpaceK::uniform(2);
        let l1 = Arc::new(ModuleSpec::constant(s.clone(), NormDescriptor::l1(2)));
        let line = Arc::new(ModuleSpec::constant(s, NormDescriptor::l1(1)));
        let p = Homomorphism::new(l1.clone(), line, vec![m(&[&[1, 0]])]).unwrap();
        let r = uc_quotient_tensor_check(&p, &k).unwrap();
        assert!(r.holds);
        assert_eq!(r.min_preimage_norms[0].len(), 2);
        let id = Homomorphism::identity(l1);
        assert!(uc_quotient_tensor_check(&id, &k).unwrap().holds);
        assert_eq!(
            uc_quotient_tensor_check(&id.scale(&int(2)), &k),
            Err(Error::NotQuotient)
        );
    }
}
