//! Pullbacks along maps of atoms `φ: X -> Y`.
//!
//! The fiber of `φ*M` at `x` is the fiber of `M` at `φ(x)`, so every pulled
//! object copies the data sitting over `φ(x)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fiber::SPECTRAL_TOL;
use crate::hom::Homomorphism;
use crate::linalg::Matrix;
use crate::measure::{same_space, L0Function, MeasureSpace};
use crate::module::{Element, ModuleSpec, NormField};
use crate::tensor::{Crossnorm, Tensor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMap {
    source: Arc<MeasureSpace>,
    target: Arc<MeasureSpace>,
    map: Vec<usize>,
}

impl AtomMap {
    pub fn new(
        source: Arc<MeasureSpace>,
        target: Arc<MeasureSpace>,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownAtom(format!("target index {bad}")));
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    /// From `(source atom, target atom)` pairs naming every source atom once.
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(
        source: Arc<MeasureSpace>,
        target: Arc<MeasureSpace>,
        pairs: &[(S, T)],
    ) -> Result<Self> {
        let mut map = vec![None; source.len()];
        for (x, y) in pairs {
            let (x, y) = (x.as_ref(), y.as_ref());
            let i = source
                .atom_index(x)
                .ok_or_else(|| Error::UnknownAtom(x.to_string()))?;
            let j = target
                .atom_index(y)
                .ok_or_else(|| Error::UnknownAtom(y.to_string()))?;
            if map[i].replace(j).is_some() {
                return Err(Error::InvalidInput(format!("atom `{x}` is mapped twice")));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| {
                    Error::InvalidInput(format!("atom `{}` is not mapped", source.atom_id(i)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, map)
    }

    pub fn identity(space: Arc<MeasureSpace>) -> Self {
        let map = (0..space.len()).collect();
        Self {
            source: space.clone(),
            target: space,
            map,
        }
    }

    pub fn source(&self) -> &Arc<MeasureSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MeasureSpace> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `(source id, target id)` pairs.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| {
                (
                    self.source.atom_id(x).to_string(),
                    self.target.atom_id(y).to_string(),
                )
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AtomMap) -> Result<Self> {
        if !same_space(inner.target(), &self.source) {
            return Err(Error::SpaceMismatch);
        }
        let map = inner.map.iter().map(|&x| self.map[x]).collect();
        Ok(Self {
            source: inner.source.clone(),
            target: self.target.clone(),
            map,
        })
    }

    fn check_target(&self, space: &Arc<MeasureSpace>) -> Result<()> {
        if same_space(space, &self.target) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn pick<T: Clone>(&self, over_target: &[T]) -> Vec<T> {
        self.map.iter().map(|&y| over_target[y].clone()).collect()
    }

    /// `f ∘ φ`.
    pub fn pullback_l0(&self, f: &L0Function) -> Result<L0Function> {
        self.check_target(f.space())?;
        L0Function::new(self.source.clone(), self.pick(f.values()))
    }

    /// `|·| ∘ φ` for pointwise norms.
    pub fn pullback_norm(&self, f: &NormField) -> Result<NormField> {
        self.check_target(f.space())?;
        NormField::new(self.source.clone(), self.pick(f.values()))
    }

    pub fn pullback_module(&self, module: &ModuleSpec) -> Result<ModuleSpec> {
        self.check_target(module.space())?;
        ModuleSpec::new(self.source.clone(), self.pick(module.fibers()))
    }

    pub fn pullback_element(&self, v: &Element) -> Result<Element> {
        let module = Arc::new(self.pullback_module(v.module())?);
        Element::new(module, self.pick(v.fibers()))
    }

    pub fn pullback_hom(&self, t: &Homomorphism) -> Result<Homomorphism> {
        let source = Arc::new(self.pullback_module(t.source())?);
        let target = Arc::new(self.pullback_module(t.target())?);
        Homomorphism::new(source, target, self.pick(t.matrices()))
    }

    pub fn pullback_tensor(&self, alpha: &Tensor) -> Result<Tensor> {
        let left = Arc::new(self.pullback_module(alpha.left())?);
        let right = Arc::new(self.pullback_module(alpha.right())?);
        Tensor::new(left, right, self.pick(alpha.matrices()))
    }

    /// `I_φ(φ*ω)` for `ω ∈ M*`: the functional on `φ*M` acting at `x` as
    /// `ω` acts at `φ(x)`.
    pub fn i_phi(&self, omega: &Element) -> Result<Element> {
        self.pullback_element(omega)
    }

    /// Surjectivity of `I_φ` onto `(φ*M)*`, read off the rank of the
    /// coordinate map at each atom of `X`.
    pub fn i_phi_surjective(&self, module: &ModuleSpec) -> Result<bool> {
        let dual = module.dual();
        let pulled = self.pullback_module(module)?.dual();
        Ok((0..self.source.len()).all(|x| {
            let coordinates = Matrix::identity(dual.fiber(self.map[x]).dim());
            coordinates.rank() == pulled.fiber(x).dim()
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackReport {
    /// `norm_X(φ*α)`.
    pub pulled: NormField,
    /// `norm_Y(α) ∘ φ`.
    pub composed: NormField,
    pub holds: bool,
}

/// `norm_X(φ*α) = norm_Y(α) ∘ φ`, exact where both sides are exact.
pub fn pullback_tensor_check(
    phi: &AtomMap,
    alpha: &Tensor,
    flavor: Crossnorm,
) -> Result<PullbackReport> {
    let pulled = phi.pullback_tensor(alpha)?.norm(flavor)?;
    let composed = phi.pullback_norm(&alpha.norm(flavor)?)?;
    let holds = pulled.approx_eq(&composed, SPECTRAL_TOL);
    Ok(PullbackReport {
        pulled,
        composed,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{FiberVector, NormDescriptor, NormValue};
    use crate::hom::pairing;
    use crate::rational::{int, one};

    fn fv(x: &[i64]) -> FiberVector {
        FiberVector::new(x.iter().map(|&a| int(a)).collect())
    }

    fn collapse() -> AtomMap {
        let x = Arc::new(MeasureSpace::uniform(2));
        let y = Arc::new(MeasureSpace::new([("y", one())]).unwrap());
        AtomMap::from_pairs(x, y, &[("x0", "y"), ("x1", "y")]).unwrap()
    }

    #[test]
    fn pairs_round_trip() {
        let phi = collapse();
        assert_eq!(phi.map(), &[0, 0]);
        let pairs = phi.pairs();
        assert_eq!(
            AtomMap::from_pairs(phi.source().clone(), phi.target().clone(), &pairs).unwrap(),
            phi
        );
        assert!(
            AtomMap::from_pairs(phi.source().clone(), phi.target().clone(), &[("x0", "y")])
                .is_err()
        );
        assert!(matches!(
            AtomMap::from_pairs(
                phi.source().clone(),
                phi.target().clone(),
                &[("x0", "z"), ("x1", "y")]
            ),
            Err(Error::UnknownAtom(_))
        ));
    }

    #[test]
    fn elements_and_norms() {
        let phi = collapse();
        let m = Arc::new(ModuleSpec::constant(
            phi.target().clone(),
            NormDescriptor::l1(2),
        ));
        let v = Element::constant(m.clone(), &fv(&[1, -2])).unwrap();
        let pv = phi.pullback_element(&v).unwrap();
        assert_eq!(pv.norm().exact().unwrap().values(), &[int(3), int(3)]);
        assert_eq!(pv.norm(), phi.pullback_norm(&v.norm()).unwrap());

        let id = AtomMap::identity(phi.target().clone());
        assert_eq!(id.pullback_element(&v).unwrap(), v);
        assert_eq!(id.pullback_module(&m).unwrap(), *m);
    }

    #[test]
    fn dual_pullback() {
        let phi = collapse();
        let m = Arc::new(ModuleSpec::constant(
            phi.target().clone(),
            NormDescriptor::l2(2),
        ));
        let dual = Arc::new(m.dual());
        let omega = Element::constant(dual, &fv(&[3, 4])).unwrap();
        let v = Element::constant(m.clone(), &fv(&[1, 1])).unwrap();
        let lhs = pairing(
            &phi.i_phi(&omega).unwrap(),
            &phi.pullback_element(&v).unwrap(),
        )
        .unwrap();
        let rhs = phi.pullback_l0(&pairing(&omega, &v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            phi.i_phi(&omega).unwrap().norm().value(1),
            &NormValue::Exact(int(5))
        );
        assert!(phi.i_phi_surjective(&m).unwrap());
    }

    #[test]
    fn composition_is_functorial() {
        let phi = collapse();
        let w = Arc::new(MeasureSpace::uniform(3));
        let psi = AtomMap::new(w, phi.source().clone(), vec![1, 0, 1]).unwrap();
        let m = ModuleSpec::new(phi.target().clone(), vec![NormDescriptor::linf(2)]).unwrap();
        let both = phi.compose(&psi).unwrap();
        assert_eq!(
            both.pullback_module(&m).unwrap(),
            psi.pullback_module(&phi.pullback_module(&m).unwrap())
                .unwrap()
        );
        assert_eq!(phi.compose(&phi), Err(Error::SpaceMismatch));
    }

    #[test]
    fn tensor_norms_pull_back() {
        let phi = collapse();
        let m = Arc::new(ModuleSpec::constant(
            phi.target().clone(),
            NormDescriptor::l1(2),
        ));
        let alpha = Tensor::new(m.clone(), m, vec![Matrix::identity(2)]).unwrap();
        let r = pullback_tensor_check(&phi, &alpha, Crossnorm::Pi).unwrap();
        assert!(r.holds);
        assert_eq!(r.pulled.exact().unwrap().values(), &[int(2), int(2)]);
        let r = pullback_tensor_check(&phi, &alpha, Crossnorm::Eps).unwrap();
        assert!(r.holds);
        assert_eq!(r.pulled.value(0), alpha.injective_norm().unwrap().value(0));
    }
}
