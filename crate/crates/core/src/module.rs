//! Banach `L0(X)`-modules in local-basis coordinates.
//!
//! A module over an atomic space is a choice of finite-dimensional normed
//! fiber per atom. Elements carry one coordinate vector per atom and every
//! module operation acts atom by atom.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fiber::{min_norm_over_affine, FiberVector, NormDescriptor, NormValue, EUCLIDEAN_TOL};
use crate::linalg::{independent_subset, Matrix};
use crate::measure::{same_space, L0Function, MeasureSpace};
use crate::rational::{sqrt_bounds, Rational};

/// Digits used when a Euclidean norm has to be replaced by a rational bound.
pub(crate) const SQRT_DIGITS: u32 = 15;

/// Per-atom fibers over a measure space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    space: Arc<MeasureSpace>,
    fibers: Vec<NormDescriptor>,
}

impl ModuleSpec {
    pub fn new(space: Arc<MeasureSpace>, fibers: Vec<NormDescriptor>) -> Result<Self> {
        if fibers.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: fibers.len(),
            });
        }
        Ok(Self { space, fibers })
    }

    /// The same fiber on every atom.
    pub fn constant(space: Arc<MeasureSpace>, fiber: NormDescriptor) -> Self {
        let fibers = vec![fiber; space.len()];
        Self { space, fibers }
    }

    /// `L0(X)` itself: one-dimensional fibers with the absolute value.
    pub fn scalars(space: Arc<MeasureSpace>) -> Self {
        Self::constant(space, NormDescriptor::l1(1))
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn fibers(&self) -> &[NormDescriptor] {
        &self.fibers
    }

    pub fn fiber(&self, atom: usize) -> &NormDescriptor {
        &self.fibers[atom]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.fibers.iter().map(NormDescriptor::dim).collect()
    }

    /// Atoms grouped by local dimension.
    pub fn dimensional_decomposition(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, f) in self.fibers.iter().enumerate() {
            parts.entry(f.dim()).or_default().push(k);
        }
        parts
    }

    /// Atoms with a nonzero fiber.
    pub fn support(&self) -> Vec<usize> {
        (0..self.fibers.len())
            .filter(|&k| self.fibers[k].dim() > 0)
            .collect()
    }

    /// Indicator of the support.
    pub fn support_indicator(&self) -> L0Function {
        let values = self
            .fibers
            .iter()
            .map(|f| {
                if f.dim() > 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        L0Function::new(self.space.clone(), values).expect("one value per atom")
    }

    /// The dual module `Hom(M; L0(X))`, fiber by fiber.
    pub fn dual(&self) -> Self {
        Self {
            space: self.space.clone(),
            fibers: self.fibers.iter().map(NormDescriptor::dual).collect(),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.fibers.iter().all(NormDescriptor::is_polyhedral)
    }
}

pub(crate) fn same_module(a: &Arc<ModuleSpec>, b: &Arc<ModuleSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_module(a: &Arc<ModuleSpec>, b: &Arc<ModuleSpec>) -> Result<()> {
    if !same_space(a.space(), b.space()) {
        return Err(Error::SpaceMismatch);
    }
    if !same_module(a, b) {
        return Err(Error::ModuleMismatch);
    }
    Ok(())
}

/// A pointwise norm: one [`NormValue`] per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct NormField {
    space: Arc<MeasureSpace>,
    values: Vec<NormValue>,
}

impl NormField {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<NormValue>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn from_l0(f: &L0Function) -> Self {
        Self {
            space: f.space().clone(),
            values: f.values().iter().cloned().map(NormValue::Exact).collect(),
        }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[NormValue] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &NormValue {
        &self.values[atom]
    }

    /// The field as an `L0` function, when every value is rational.
    pub fn exact(&self) -> Option<L0Function> {
        let values = self
            .values
            .iter()
            .map(|v| v.exact().cloned())
            .collect::<Option<Vec<_>>>()?;
        Some(L0Function::new(self.space.clone(), values).expect("one value per atom"))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(NormValue::to_f64).collect()
    }

    /// Agreement on every atom: exact where both sides are, else within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        same_space(&self.space, &other.space)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// `self <= other` on every atom, within `tol` for inexact values.
    pub fn le_within(&self, other: &Self, tol: f64) -> bool {
        same_space(&self.space, &other.space)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.le_within(b, tol))
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&NormValue, &NormValue) -> NormValue,
    ) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&NormValue) -> NormValue) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for NormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {v}", self.space.atom_id(k))?;
        }
        Ok(())
    }
}

/// An element of a module: one fiber vector per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    module: Arc<ModuleSpec>,
    fibers: Vec<FiberVector>,
}

impl Element {
    pub fn new(module: Arc<ModuleSpec>, fibers: Vec<FiberVector>) -> Result<Self> {
        if fibers.len() != module.fibers.len() {
            return Err(Error::DimensionMismatch {
                expected: module.fibers.len(),
                found: fibers.len(),
            });
        }
        for (v, d) in fibers.iter().zip(&module.fibers) {
            if v.len() != d.dim() {
                return Err(Error::DimensionMismatch {
                    expected: d.dim(),
                    found: v.len(),
                });
            }
        }
        Ok(Self { module, fibers })
    }

    pub fn zero(module: Arc<ModuleSpec>) -> Self {
        let fibers = module
            .fibers
            .iter()
            .map(|d| FiberVector::zeros(d.dim()))
            .collect();
        Self { module, fibers }
    }

    /// The same coordinates on every atom; fails unless all fibers share the
    /// dimension of `coords`.
    pub fn constant(module: Arc<ModuleSpec>, coords: &FiberVector) -> Result<Self> {
        let fibers = vec![coords.clone(); module.fibers.len()];
        Self::new(module, fibers)
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        &self.module
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        self.module.space()
    }

    pub fn fibers(&self) -> &[FiberVector] {
        &self.fibers
    }

    pub fn fiber(&self, atom: usize) -> &FiberVector {
        &self.fibers[atom]
    }

    pub fn into_fibers(self) -> Vec<FiberVector> {
        self.fibers
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.iter().all(FiberVector::is_zero)
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&FiberVector, &FiberVector) -> FiberVector,
    ) -> Result<Self> {
        check_module(&self.module, &other.module)?;
        Ok(Self {
            module: self.module.clone(),
            fibers: self
                .fibers
                .iter()
                .zip(&other.fibers)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, FiberVector::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, FiberVector::sub)
    }

    pub fn neg(&self) -> Self {
        self.map_fibers(|_, v| v.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map_fibers(|_, v| v.scale(q))
    }

    /// The module action `f·v`.
    pub fn scalar_action(&self, f: &L0Function) -> Result<Self> {
        if !same_space(f.space(), self.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.map_fibers(|k, v| v.scale(f.value(k))))
    }

    pub(crate) fn map_fibers(&self, f: impl Fn(usize, &FiberVector) -> FiberVector) -> Self {
        Self {
            module: self.module.clone(),
            fibers: self
                .fibers
                .iter()
                .enumerate()
                .map(|(k, v)| f(k, v))
                .collect(),
        }
    }

    /// The pointwise norm `|v|`.
    pub fn norm(&self) -> NormField {
        let values = self
            .fibers
            .iter()
            .zip(&self.module.fibers)
            .map(|(v, d)| d.norm(v).expect("dimensions checked on construction"))
            .collect();
        NormField {
            space: self.space().clone(),
            values,
        }
    }

    /// `sgn(v) = 1_{|v|>0} v / |v|`.
    ///
    /// Exact whenever the norm is rational. An irrational Euclidean norm is
    /// replaced by a rational upper bound within `1e-15`, so the result stays
    /// in the unit disc and has norm 1 within [`EUCLIDEAN_TOL`].
    pub fn sgn(&self) -> Self {
        let norms = self.norm();
        self.map_fibers(|k, v| match norms.value(k) {
            v_norm if v_norm.is_zero() => FiberVector::zeros(v.len()),
            NormValue::Exact(q) => v.scale(&q.recip()),
            NormValue::Sqrt(s) => v.scale(&sqrt_bounds(s, SQRT_DIGITS).1.recip()),
            other => unreachable!("fiber norms are exact or square roots, got {other}"),
        })
    }

    pub fn in_unit_disc(&self) -> bool {
        let one = NormValue::Exact(Rational::one());
        self.norm()
            .values
            .iter()
            .all(|v| v.le_within(&one, EUCLIDEAN_TOL))
    }

    /// `|v|` takes only the values 0 and 1.
    pub fn on_unit_sphere(&self) -> bool {
        let one = NormValue::Exact(Rational::one());
        self.norm()
            .values
            .iter()
            .all(|v| v.is_zero() || v.approx_eq(&one, EUCLIDEAN_TOL))
    }

    /// Copies, on each atom, the fiber of the part owning that atom.
    pub fn glue<S: AsRef<str>>(parts: &[(Vec<S>, Element)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::NotPartition("no parts".into()))?;
        let module = first.module.clone();
        let n = module.space().len();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (i, (subset, element)) in parts.iter().enumerate() {
            check_module(&module, &element.module)?;
            for k in module.space().resolve_subset(subset)? {
                if let Some(j) = owner[k] {
                    return Err(Error::NotPartition(format!(
                        "atom `{}` belongs to parts {j} and {i}",
                        module.space().atom_id(k)
                    )));
                }
                owner[k] = Some(i);
            }
        }
        let fibers = owner
            .iter()
            .enumerate()
            .map(|(k, o)| {
                o.map(|i| parts[i].1.fibers[k].clone()).ok_or_else(|| {
                    Error::NotPartition(format!(
                        "atom `{}` is not covered",
                        module.space().atom_id(k)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { module, fibers })
    }
}

/// A finitely generated submodule, given by a basis of its fiber on each atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    module: Arc<ModuleSpec>,
    bases: Vec<Vec<FiberVector>>,
}

impl Submodule {
    pub fn new(module: Arc<ModuleSpec>, bases: Vec<Vec<FiberVector>>) -> Result<Self> {
        if bases.len() != module.space().len() {
            return Err(Error::DimensionMismatch {
                expected: module.space().len(),
                found: bases.len(),
            });
        }
        for (basis, d) in bases.iter().zip(module.fibers()) {
            if let Some(v) = basis.iter().find(|v| v.len() != d.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: d.dim(),
                    found: v.len(),
                });
            }
            let cols: Vec<Vec<Rational>> = basis.iter().map(|v| v.to_vec()).collect();
            if Matrix::from_columns(&cols, d.dim()).rank() < basis.len() {
                return Err(Error::Degenerate(
                    "submodule basis is not independent".into(),
                ));
            }
        }
        Ok(Self { module, bases })
    }

    /// The submodule generated by finitely many elements.
    pub fn generated_by(module: Arc<ModuleSpec>, generators: &[Element]) -> Result<Self> {
        for g in generators {
            check_module(&module, g.module())?;
        }
        let bases = (0..module.space().len())
            .map(|k| {
                let vectors: Vec<Vec<Rational>> =
                    generators.iter().map(|g| g.fiber(k).to_vec()).collect();
                independent_subset(&vectors, module.fiber(k).dim())
                    .into_iter()
                    .map(|i| FiberVector::new(vectors[i].clone()))
                    .collect()
            })
            .collect();
        Ok(Self { module, bases })
    }

    pub fn zero(module: Arc<ModuleSpec>) -> Self {
        let bases = vec![Vec::new(); module.space().len()];
        Self { module, bases }
    }

    pub fn full(module: Arc<ModuleSpec>) -> Self {
        let bases = module
            .fibers()
            .iter()
            .map(|d| {
                (0..d.dim())
                    .map(|i| FiberVector::unit(d.dim(), i))
                    .collect()
            })
            .collect();
        Self { module, bases }
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        &self.module
    }

    pub fn bases(&self) -> &[Vec<FiberVector>] {
        &self.bases
    }

    pub fn basis(&self, atom: usize) -> &[FiberVector] {
        &self.bases[atom]
    }

    pub fn contains(&self, v: &Element) -> Result<bool> {
        check_module(&self.module, v.module())?;
        Ok(self.bases.iter().zip(v.fibers()).all(|(basis, x)| {
            let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.to_vec()).collect();
            Matrix::from_columns(&cols, x.len()).solve(x).is_some()
        }))
    }

    /// The quotient norm `|w + V|` with per-atom minimizers `w + s`.
    pub fn quotient_norm(&self, w: &Element) -> Result<(NormField, Element)> {
        check_module(&self.module, w.module())?;
        let mut values = Vec::with_capacity(self.bases.len());
        let mut minimizers = Vec::with_capacity(self.bases.len());
        for (k, basis) in self.bases.iter().enumerate() {
            let r = min_norm_over_affine(self.module.fiber(k), w.fiber(k), basis)?;
            values.push(r.value);
            minimizers.push(r.minimizer);
        }
        Ok((
            NormField::new(self.module.space().clone(), values)?,
            Element::new(self.module.clone(), minimizers)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn fv(x: &[i64]) -> FiberVector {
        FiberVector::new(x.iter().map(|&a| int(a)).collect())
    }

    fn two_atoms(fiber: NormDescriptor) -> Arc<ModuleSpec> {
        Arc::new(ModuleSpec::constant(
            Arc::new(MeasureSpace::uniform(2)),
            fiber,
        ))
    }

    fn exact(values: &[Rational]) -> Vec<NormValue> {
        values.iter().cloned().map(NormValue::Exact).collect()
    }

    #[test]
    fn pointwise_norm_and_action() {
        let m = two_atoms(NormDescriptor::l1(2));
        let v = Element::new(m.clone(), vec![fv(&[1, -2]), fv(&[0, 3])]).unwrap();
        assert_eq!(v.norm().values(), exact(&[int(3), int(3)]).as_slice());
        let f = L0Function::new(m.space().clone(), vec![int(2), int(0)]).unwrap();
        let fv_ = v.scalar_action(&f).unwrap();
        assert_eq!(fv_.norm().values(), exact(&[int(6), int(0)]).as_slice());
        assert!(Element::zero(m)
            .norm()
            .values()
            .iter()
            .all(NormValue::is_zero));
    }

    #[test]
    fn sgn_examples() {
        let m = two_atoms(NormDescriptor::l2(2));
        let v = Element::new(m.clone(), vec![fv(&[3, -4]), fv(&[0, 0])]).unwrap();
        let s = v.sgn();
        assert_eq!(s.fiber(0).as_slice(), &[rat(3, 5), rat(-4, 5)]);
        assert!(s.fiber(1).is_zero());
        assert!(s.on_unit_sphere() && s.in_unit_disc());

        let w = Element::new(m, vec![fv(&[1, 1]), fv(&[1, 0])]).unwrap();
        let s = w.sgn();
        assert!(s.on_unit_sphere());
        assert!(s.in_unit_disc());
    }

    #[test]
    fn disc_and_sphere() {
        let m = two_atoms(NormDescriptor::l1(1));
        let v = Element::new(m.clone(), vec![fv(&[1]), fv(&[0])]).unwrap();
        assert!(v.on_unit_sphere() && v.in_unit_disc());
        let w = Element::new(m, vec![FiberVector::new(vec![rat(1, 2)]), fv(&[2])]).unwrap();
        assert!(!w.in_unit_disc());
        assert!(!w.on_unit_sphere());
    }

    #[test]
    fn support_and_decomposition() {
        let space = Arc::new(MeasureSpace::uniform(3));
        let m = ModuleSpec::new(
            space,
            vec![
                NormDescriptor::zero(),
                NormDescriptor::l1(2),
                NormDescriptor::zero(),
            ],
        )
        .unwrap();
        assert_eq!(m.support(), vec![1]);
        let parts = m.dimensional_decomposition();
        assert_eq!(parts[&0], vec![0, 2]);
        assert_eq!(parts[&2], vec![1]);
        let z = ModuleSpec::constant(Arc::new(MeasureSpace::uniform(2)), NormDescriptor::zero());
        assert!(z.support().is_empty());
    }

    #[test]
    fn glue_parts() {
        let m = two_atoms(NormDescriptor::linf(2));
        let v = Element::new(m.clone(), vec![fv(&[1, 0]), fv(&[2, 0])]).unwrap();
        let w = Element::new(m.clone(), vec![fv(&[0, 5]), fv(&[0, 7])]).unwrap();
        let g = Element::glue(&[(vec!["x0"], v.clone()), (vec!["x1"], w.clone())]).unwrap();
        assert_eq!(g.fibers(), &[fv(&[1, 0]), fv(&[0, 7])]);
        assert_eq!(Element::glue(&[(vec!["x0", "x1"], v.clone())]).unwrap(), v);
        assert!(matches!(
            Element::glue(&[(vec!["x0"], v.clone())]),
            Err(Error::NotPartition(_))
        ));
        assert!(matches!(
            Element::glue(&[(vec!["x0", "x1"], v), (vec!["x1"], w)]),
            Err(Error::NotPartition(_))
        ));
    }

    #[test]
    fn quotient_norm_examples() {
        let m = two_atoms(NormDescriptor::linf(2));
        let v = Submodule::new(m.clone(), vec![vec![fv(&[1, 1])], vec![]]).unwrap();
        let w = Element::constant(m.clone(), &fv(&[1, 0])).unwrap();
        let (q, _) = v.quotient_norm(&w).unwrap();
        assert_eq!(q.values(), exact(&[rat(1, 2), int(1)]).as_slice());
        let inside = Element::constant(m.clone(), &fv(&[3, 3])).unwrap();
        let (q, _) = Submodule::full(m.clone()).quotient_norm(&inside).unwrap();
        assert!(q.values().iter().all(NormValue::is_zero));
        assert!(v
            .contains(&Element::new(m, vec![fv(&[2, 2]), fv(&[0, 0])]).unwrap())
            .unwrap());
    }
}
