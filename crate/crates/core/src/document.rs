//! The JSON work document: named spaces, norms, modules, elements, maps,
//! tensors and families, plus assertions to check against them.
//!
//! Rationals are `"p/q"` strings. Norms are referenced by name or written
//! inline. Parse errors carry the line and column reported by `serde_json`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use num_traits::One;

use crate::error::{Error, Result};
use crate::fiber::{
    BlockCombine, Exponent, FiberVector, NormDescriptor, NormKind, NormValue, SPECTRAL_TOL,
};
use crate::hom::{BilinearForm, Homomorphism};
use crate::linalg::Matrix;
use crate::measure::MeasureSpace;
use crate::module::{Element, ModuleSpec, NormField};
use crate::pullback::AtomMap;
use crate::rational::{self, format, to_f64, Rational};
use crate::summability::{Coefficients, CountableFamily, TailBound, Verdict};
use crate::tensor::{Crossnorm, Tensor};
use crate::theorems::{self, TheoremId};

pub const FORMAT_VERSION: &str = "1";

/// Default horizon for `summable` assertions.
pub const DEFAULT_HORIZON: u64 = 32;

/// A rational written as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        rational::parse(&s).map(Q).map_err(|e| match e {
            Error::Parse(msg) => de::Error::custom(msg),
            other => de::Error::custom(other),
        })
    }
}

impl From<&Rational> for Q {
    fn from(q: &Rational) -> Self {
        Self(q.clone())
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().map(Q::from).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDef {
    pub id: String,
    pub weight: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormTag {
    Zero,
    L1,
    L2,
    Linf,
    Poly,
    BlockSum,
    BlockMax,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub kind: NormTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_vertices: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<NormRef>>,
}

impl NormSpec {
    fn bare(kind: NormTag) -> Self {
        Self {
            kind,
            dim: None,
            weights: None,
            vertices: None,
            dual_vertices: None,
            blocks: None,
        }
    }

    pub fn from_descriptor(desc: &NormDescriptor) -> Self {
        if desc.dim() == 0 {
            return Self::bare(NormTag::Zero);
        }
        match desc.kind() {
            NormKind::Lp { exponent, weights } => {
                let tag = match exponent {
                    Exponent::One => NormTag::L1,
                    Exponent::Two => NormTag::L2,
                    Exponent::Inf => NormTag::Linf,
                };
                let mut spec = Self::bare(tag);
                if weights.iter().all(One::is_one) {
                    spec.dim = Some(weights.len());
                } else {
                    spec.weights = Some(qs(weights));
                }
                spec
            }
            NormKind::Polyhedral {
                vertices,
                dual_vertices,
            } => Self {
                vertices: Some(vertices.iter().map(|v| qs(v)).collect()),
                dual_vertices: Some(dual_vertices.iter().map(|v| qs(v)).collect()),
                ..Self::bare(NormTag::Poly)
            },
            NormKind::Block { combine, blocks } => Self {
                blocks: Some(
                    blocks
                        .iter()
                        .map(|b| NormRef::Inline(Box::new(Self::from_descriptor(b))))
                        .collect(),
                ),
                ..Self::bare(match combine {
                    BlockCombine::Sum => NormTag::BlockSum,
                    BlockCombine::Max => NormTag::BlockMax,
                })
            },
        }
    }
}

/// A norm given by name or inline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormRef {
    Named(String),
    Inline(Box<NormSpec>),
}

impl From<&NormDescriptor> for NormRef {
    fn from(d: &NormDescriptor) -> Self {
        Self::Inline(Box::new(NormSpec::from_descriptor(d)))
    }
}

impl Serialize for NormRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Named(n) => s.serialize_str(n),
            Self::Inline(spec) => spec.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for NormRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RefVisitor;

        impl<'de> Visitor<'de> for RefVisitor {
            type Value = NormRef;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a norm name or an inline norm object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<NormRef, E> {
                Ok(NormRef::Named(v.to_string()))
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                map: A,
            ) -> std::result::Result<NormRef, A::Error> {
                NormSpec::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(|s| NormRef::Inline(Box::new(s)))
            }
        }

        d.deserialize_any(RefVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDef {
    pub space: String,
    /// One norm per atom.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibers: Option<Vec<NormRef>>,
    /// The same norm on every atom.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<NormRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDef {
    pub module: String,
    pub fibers: Vec<Vec<Q>>,
}

/// Per-atom matrices as lists of rows.
pub type MatricesDef = Vec<Vec<Vec<Q>>>;

fn matrices_def(ms: &[Matrix]) -> MatricesDef {
    ms.iter()
        .map(|m| (0..m.rows()).map(|i| qs(m.row(i))).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDef {
    pub source: String,
    pub target: String,
    pub matrices: MatricesDef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearDef {
    pub left: String,
    pub right: String,
    pub matrices: MatricesDef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDef {
    pub left: String,
    pub right: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<MatricesDef>,
    /// Pairs of element names `v ⊗ w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientsDef {
    Geometric { a: Q, r: Q },
    PSeries { a: Q, p: u32 },
    Finite(Vec<Q>),
}

impl From<&CoefficientsDef> for Coefficients {
    fn from(c: &CoefficientsDef) -> Self {
        match c {
            CoefficientsDef::Geometric { a, r } => Self::Geometric {
                a: a.0.clone(),
                r: r.0.clone(),
            },
            CoefficientsDef::PSeries { a, p } => Self::PSeries {
                a: a.0.clone(),
                p: *p,
            },
            CoefficientsDef::Finite(list) => Self::Finite(unq(list)),
        }
    }
}

impl From<&Coefficients> for CoefficientsDef {
    fn from(c: &Coefficients) -> Self {
        match c {
            Coefficients::Geometric { a, r } => Self::Geometric {
                a: a.into(),
                r: r.into(),
            },
            Coefficients::PSeries { a, p } => Self::PSeries { a: a.into(), p: *p },
            Coefficients::Finite(list) => Self::Finite(qs(list)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundDef {
    Geometric { c: Q, r: Q },
    PSeries { c: Q, p: u32 },
    Finite { len: u64, c: Q },
    Divergent,
}

impl From<&BoundDef> for TailBound {
    fn from(b: &BoundDef) -> Self {
        match b {
            BoundDef::Geometric { c, r } => Self::Geometric {
                c: c.0.clone(),
                r: r.0.clone(),
            },
            BoundDef::PSeries { c, p } => Self::PSeries {
                c: c.0.clone(),
                p: *p,
            },
            BoundDef::Finite { len, c } => Self::Finite {
                len: *len,
                c: c.0.clone(),
            },
            BoundDef::Divergent => Self::Divergent,
        }
    }
}

impl From<&TailBound> for BoundDef {
    fn from(b: &TailBound) -> Self {
        match b {
            TailBound::Geometric { c, r } => Self::Geometric {
                c: c.into(),
                r: r.into(),
            },
            TailBound::PSeries { c, p } => Self::PSeries { c: c.into(), p: *p },
            TailBound::Finite { len, c } => Self::Finite {
                len: *len,
                c: c.into(),
            },
            TailBound::Divergent => Self::Divergent,
        }
    }
}

/// `v_i = a_i · element`, `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDef {
    pub element: String,
    pub coefficients: CoefficientsDef,
    /// Overrides the bounds derived from the template.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundDef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub source: String,
    pub target: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssertionKind {
    /// Pointwise norm of an element, homomorphism or bilinear form.
    Norm,
    TensorNorm,
    Quotient,
    Summable,
    Null,
    Theorem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: AssertionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub args: BTreeMap<String, Value>,
}

impl Assertion {
    pub fn new(kind: AssertionKind) -> Self {
        Self {
            name: None,
            kind,
            target: None,
            flavor: None,
            expected: None,
            tol: None,
            horizon: None,
            theorem: None,
            args: BTreeMap::new(),
        }
    }

    pub fn theorem(id: TheoremId, args: BTreeMap<String, Value>) -> Self {
        Self {
            theorem: Some(id.to_string()),
            args,
            ..Self::new(AssertionKind::Theorem)
        }
    }

    fn tol_f64(&self) -> f64 {
        self.tol.as_ref().map_or(SPECTRAL_TOL, |q| to_f64(&q.0))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkDocument {
    pub version: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, Vec<AtomDef>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub norms: BTreeMap<String, NormSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homs: BTreeMap<String, HomDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bilinear: BTreeMap<String, BilinearDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tensors: BTreeMap<String, TensorDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, FamilyDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
}

impl WorkDocument {
    pub fn new() -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported document version `{}` (expected `{FORMAT_VERSION}`)",
                doc.version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn add_space(&mut self, name: &str, space: &MeasureSpace) {
        let atoms = space
            .atoms()
            .iter()
            .map(|a| AtomDef {
                id: a.id.clone(),
                weight: Q(a.weight.clone()),
            })
            .collect();
        self.spaces.insert(name.to_string(), atoms);
    }

    pub fn add_module(&mut self, name: &str, space: &str, module: &ModuleSpec) {
        let fibers = module.fibers();
        let def = if fibers.windows(2).all(|w| w[0] == w[1]) {
            ModuleDef {
                space: space.to_string(),
                fibers: None,
                fiber: Some((&fibers[0]).into()),
            }
        } else {
            ModuleDef {
                space: space.to_string(),
                fibers: Some(fibers.iter().map(NormRef::from).collect()),
                fiber: None,
            }
        };
        self.modules.insert(name.to_string(), def);
    }

    pub fn add_element(&mut self, name: &str, module: &str, v: &Element) {
        let def = ElementDef {
            module: module.to_string(),
            fibers: v.fibers().iter().map(|x| qs(x)).collect(),
        };
        self.elements.insert(name.to_string(), def);
    }

    pub fn add_hom(&mut self, name: &str, source: &str, target: &str, t: &Homomorphism) {
        let def = HomDef {
            source: source.to_string(),
            target: target.to_string(),
            matrices: matrices_def(t.matrices()),
        };
        self.homs.insert(name.to_string(), def);
    }

    pub fn add_bilinear(&mut self, name: &str, left: &str, right: &str, b: &BilinearForm) {
        let def = BilinearDef {
            left: left.to_string(),
            right: right.to_string(),
            matrices: matrices_def(b.matrices()),
        };
        self.bilinear.insert(name.to_string(), def);
    }

    pub fn add_tensor(&mut self, name: &str, left: &str, right: &str, alpha: &Tensor) {
        let def = TensorDef {
            left: left.to_string(),
            right: right.to_string(),
            matrices: Some(matrices_def(alpha.matrices())),
            representation: None,
        };
        self.tensors.insert(name.to_string(), def);
    }

    pub fn add_family(
        &mut self,
        name: &str,
        element: &str,
        coefficients: &Coefficients,
        bounds: Option<&[TailBound]>,
    ) {
        let def = FamilyDef {
            element: element.to_string(),
            coefficients: coefficients.into(),
            bounds: bounds.map(|bs| bs.iter().map(BoundDef::from).collect()),
        };
        self.families.insert(name.to_string(), def);
    }

    pub fn add_map(&mut self, name: &str, source: &str, target: &str, phi: &AtomMap) {
        let def = MapDef {
            source: source.to_string(),
            target: target.to_string(),
            pairs: phi.pairs(),
        };
        self.maps.insert(name.to_string(), def);
    }
}

/// A family together with the template it was declared from.
#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub family: CountableFamily,
    pub element: Element,
    pub coefficients: Coefficients,
}

/// A document with every reference resolved.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub spaces: BTreeMap<String, Arc<MeasureSpace>>,
    pub norms: BTreeMap<String, NormDescriptor>,
    pub modules: BTreeMap<String, Arc<ModuleSpec>>,
    pub elements: BTreeMap<String, Element>,
    pub homs: BTreeMap<String, Homomorphism>,
    pub bilinear: BTreeMap<String, BilinearForm>,
    pub tensors: BTreeMap<String, Tensor>,
    pub families: BTreeMap<String, FamilyEntry>,
    pub maps: BTreeMap<String, AtomMap>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, section: &str, name: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::UnresolvedReference(format!("{section}.{name}")))
}

fn context(what: String) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::UnresolvedReference(_) | Error::Parse(_) => e,
        other => Error::InvalidInput(format!("{what}: {other}")),
    }
}

fn to_matrices(defs: &MatricesDef, rows: &[usize], cols: &[usize]) -> Result<Vec<Matrix>> {
    if defs.len() != rows.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: defs.len(),
        });
    }
    defs.iter()
        .zip(rows.iter().zip(cols))
        .map(|(m, (&r, &c))| {
            if m.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: m.len(),
                });
            }
            if let Some(bad) = m.iter().find(|row| row.len() != c) {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: bad.len(),
                });
            }
            Ok(Matrix::from_rows(m.iter().map(|row| unq(row)).collect(), c))
        })
        .collect()
}

impl Workspace {
    pub fn resolve(doc: &WorkDocument) -> Result<Self> {
        let mut ws = Self::default();
        for (name, atoms) in &doc.spaces {
            let space = MeasureSpace::new(atoms.iter().map(|a| (a.id.clone(), a.weight.0.clone())))
                .map_err(context(format!("spaces.{name}")))?;
            ws.spaces.insert(name.clone(), Arc::new(space));
        }
        for name in doc.norms.keys() {
            let d = ws.named_norm(doc, name, &mut Vec::new())?;
            ws.norms.insert(name.clone(), d);
        }
        for (name, def) in &doc.modules {
            let m = ws
                .module_from(doc, def)
                .map_err(context(format!("modules.{name}")))?;
            ws.modules.insert(name.clone(), Arc::new(m));
        }
        for (name, def) in &doc.elements {
            let module = lookup(&ws.modules, "modules", &def.module)?.clone();
            let fibers = def
                .fibers
                .iter()
                .map(|x| FiberVector::new(unq(x)))
                .collect();
            let v = Element::new(module, fibers).map_err(context(format!("elements.{name}")))?;
            ws.elements.insert(name.clone(), v);
        }
        for (name, def) in &doc.homs {
            let source = lookup(&ws.modules, "modules", &def.source)?.clone();
            let target = lookup(&ws.modules, "modules", &def.target)?.clone();
            let t = to_matrices(&def.matrices, &target.dims(), &source.dims())
                .and_then(|ms| Homomorphism::new(source, target, ms))
                .map_err(context(format!("homs.{name}")))?;
            ws.homs.insert(name.clone(), t);
        }
        for (name, def) in &doc.bilinear {
            let left = lookup(&ws.modules, "modules", &def.left)?.clone();
            let right = lookup(&ws.modules, "modules", &def.right)?.clone();
            let b = to_matrices(&def.matrices, &left.dims(), &right.dims())
                .and_then(|ms| BilinearForm::new(left, right, ms))
                .map_err(context(format!("bilinear.{name}")))?;
            ws.bilinear.insert(name.clone(), b);
        }
        for (name, def) in &doc.tensors {
            let alpha = ws
                .tensor_from(def)
                .map_err(context(format!("tensors.{name}")))?;
            ws.tensors.insert(name.clone(), alpha);
        }
        for (name, def) in &doc.families {
            let element = lookup(&ws.elements, "elements", &def.element)?.clone();
            let coefficients = Coefficients::from(&def.coefficients);
            let family = CountableFamily::from_template(element.clone(), coefficients.clone())
                .and_then(|f| match &def.bounds {
                    Some(bs) => f.with_bounds(bs.iter().map(TailBound::from).collect()),
                    None => Ok(f),
                })
                .map_err(context(format!("families.{name}")))?;
            ws.families.insert(
                name.clone(),
                FamilyEntry {
                    family,
                    element,
                    coefficients,
                },
            );
        }
        for (name, def) in &doc.maps {
            let source = lookup(&ws.spaces, "spaces", &def.source)?.clone();
            let target = lookup(&ws.spaces, "spaces", &def.target)?.clone();
            let phi = AtomMap::from_pairs(source, target, &def.pairs)
                .map_err(context(format!("maps.{name}")))?;
            ws.maps.insert(name.clone(), phi);
        }
        Ok(ws)
    }

    fn named_norm(
        &self,
        doc: &WorkDocument,
        name: &str,
        stack: &mut Vec<String>,
    ) -> Result<NormDescriptor> {
        if let Some(d) = self.norms.get(name) {
            return Ok(d.clone());
        }
        if stack.iter().any(|s| s == name) {
            return Err(Error::InvalidInput(format!(
                "norm `{name}` refers to itself"
            )));
        }
        let spec = lookup(&doc.norms, "norms", name)?;
        stack.push(name.to_string());
        let d = self
            .norm_from(doc, spec, stack)
            .map_err(context(format!("norms.{name}")));
        stack.pop();
        d
    }

    fn norm_ref(
        &self,
        doc: &WorkDocument,
        r: &NormRef,
        stack: &mut Vec<String>,
    ) -> Result<NormDescriptor> {
        match r {
            NormRef::Named(n) => self.named_norm(doc, n, stack),
            NormRef::Inline(spec) => self.norm_from(doc, spec, stack),
        }
    }

    fn norm_from(
        &self,
        doc: &WorkDocument,
        spec: &NormSpec,
        stack: &mut Vec<String>,
    ) -> Result<NormDescriptor> {
        let vectors = |vs: &Vec<Vec<Q>>| {
            vs.iter()
                .map(|v| FiberVector::new(unq(v)))
                .collect::<Vec<_>>()
        };
        match spec.kind {
            NormTag::Zero => Ok(NormDescriptor::zero()),
            NormTag::L1 | NormTag::L2 | NormTag::Linf => {
                let exponent = match spec.kind {
                    NormTag::L1 => Exponent::One,
                    NormTag::L2 => Exponent::Two,
                    _ => Exponent::Inf,
                };
                let weights = match (&spec.weights, spec.dim) {
                    (Some(w), None) => unq(w),
                    (Some(w), Some(d)) if w.len() == d => unq(w),
                    (Some(w), Some(d)) => {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            found: w.len(),
                        })
                    }
                    (None, Some(d)) => vec![Rational::one(); d],
                    (None, None) => {
                        return Err(Error::InvalidDescriptor("needs `dim` or `weights`".into()))
                    }
                };
                NormDescriptor::lp(exponent, weights)
            }
            NormTag::Poly => {
                let vertices = spec.vertices.as_ref().ok_or_else(|| {
                    Error::InvalidDescriptor("polyhedral norm needs `vertices`".into())
                })?;
                let d = match &spec.dual_vertices {
                    Some(dual) => NormDescriptor::polyhedral(vectors(vertices), vectors(dual))?,
                    None => NormDescriptor::polyhedral_from_vertices(vectors(vertices))?,
                };
                match spec.dim {
                    Some(n) if n != d.dim() => Err(Error::DimensionMismatch {
                        expected: n,
                        found: d.dim(),
                    }),
                    _ => Ok(d),
                }
            }
            NormTag::BlockSum | NormTag::BlockMax => {
                let blocks = spec
                    .blocks
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDescriptor("block norm needs `blocks`".into()))?
                    .iter()
                    .map(|b| self.norm_ref(doc, b, stack))
                    .collect::<Result<Vec<_>>>()?;
                Ok(if spec.kind == NormTag::BlockSum {
                    NormDescriptor::block_sum(blocks)
                } else {
                    NormDescriptor::block_max(blocks)
                })
            }
        }
    }

    fn module_from(&self, doc: &WorkDocument, def: &ModuleDef) -> Result<ModuleSpec> {
        let space = lookup(&self.spaces, "spaces", &def.space)?.clone();
        let fibers = match (&def.fibers, &def.fiber) {
            (Some(fs), None) => fs
                .iter()
                .map(|f| self.norm_ref(doc, f, &mut Vec::new()))
                .collect::<Result<Vec<_>>>()?,
            (None, Some(f)) => vec![self.norm_ref(doc, f, &mut Vec::new())?; space.len()],
            _ => {
                return Err(Error::InvalidInput(
                    "give exactly one of `fibers` and `fiber`".into(),
                ))
            }
        };
        ModuleSpec::new(space, fibers)
    }

    fn tensor_from(&self, def: &TensorDef) -> Result<Tensor> {
        let left = lookup(&self.modules, "modules", &def.left)?.clone();
        let right = lookup(&self.modules, "modules", &def.right)?.clone();
        match (&def.matrices, &def.representation) {
            (Some(ms), None) => Tensor::new(
                left.clone(),
                right.clone(),
                to_matrices(ms, &left.dims(), &right.dims())?,
            ),
            (None, Some(pairs)) => {
                let pairs = pairs
                    .iter()
                    .map(|(v, w)| Ok((self.element(v)?.clone(), self.element(w)?.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Tensor::from_representation(left, right, &pairs)
            }
            _ => Err(Error::InvalidInput(
                "give exactly one of `matrices` and `representation`".into(),
            )),
        }
    }

    pub fn space(&self, name: &str) -> Result<&Arc<MeasureSpace>> {
        lookup(&self.spaces, "spaces", name)
    }

    pub fn module(&self, name: &str) -> Result<&Arc<ModuleSpec>> {
        lookup(&self.modules, "modules", name)
    }

    pub fn element(&self, name: &str) -> Result<&Element> {
        lookup(&self.elements, "elements", name)
    }

    pub fn hom(&self, name: &str) -> Result<&Homomorphism> {
        lookup(&self.homs, "homs", name)
    }

    pub fn bilinear_form(&self, name: &str) -> Result<&BilinearForm> {
        lookup(&self.bilinear, "bilinear", name)
    }

    pub fn tensor(&self, name: &str) -> Result<&Tensor> {
        lookup(&self.tensors, "tensors", name)
    }

    pub fn family(&self, name: &str) -> Result<&FamilyEntry> {
        lookup(&self.families, "families", name)
    }

    pub fn map(&self, name: &str) -> Result<&AtomMap> {
        lookup(&self.maps, "maps", name)
    }

    /// Pointwise norm of the element, homomorphism or bilinear form `name`.
    pub fn norm_of(&self, name: &str) -> Result<NormField> {
        if let Some(v) = self.elements.get(name) {
            Ok(v.norm())
        } else if let Some(t) = self.homs.get(name) {
            t.pointwise_norm()
        } else if let Some(b) = self.bilinear.get(name) {
            b.pointwise_norm()
        } else {
            Err(Error::UnresolvedReference(name.to_string()))
        }
    }

    pub fn tensor_norm(&self, name: &str, flavor: Crossnorm) -> Result<NormField> {
        self.tensor(name)?.norm(flavor)
    }
}

/// Outcome of one assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

/// Resolves the document and evaluates every assertion in order.
pub fn check_document(doc: &WorkDocument) -> Result<Vec<CaseResult>> {
    let ws = Workspace::resolve(doc)?;
    doc.assertions
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let name = a
                .name
                .clone()
                .unwrap_or_else(|| format!("{}#{i}", kind_label(a.kind)));
            let (pass, detail) = evaluate(&ws, a).map_err(|e| match e {
                Error::Parse(_)
                | Error::UnresolvedReference(_)
                | Error::UnsupportedKinds { .. } => e,
                other => Error::InvalidInput(format!("{name}: {other}")),
            })?;
            Ok(CaseResult { name, pass, detail })
        })
        .collect()
}

fn kind_label(kind: AssertionKind) -> &'static str {
    match kind {
        AssertionKind::Norm => "norm",
        AssertionKind::TensorNorm => "tensor_norm",
        AssertionKind::Quotient => "quotient",
        AssertionKind::Summable => "summable",
        AssertionKind::Null => "null",
        AssertionKind::Theorem => "theorem",
    }
}

fn required<'a, T>(field: &'a Option<T>, what: &str) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("assertion needs `{what}`")))
}

fn evaluate(ws: &Workspace, a: &Assertion) -> Result<(bool, String)> {
    match a.kind {
        AssertionKind::Norm | AssertionKind::TensorNorm => {
            let target = required(&a.target, "target")?;
            let field = if a.kind == AssertionKind::Norm {
                ws.norm_of(target)?
            } else {
                let flavor: Crossnorm = required(&a.flavor, "flavor")?.parse()?;
                ws.tensor_norm(target, flavor)?
            };
            let expected =
                expected_values(required(&a.expected, "expected")?, field.values().len())?;
            let tol = a.tol_f64();
            let pass = field
                .values()
                .iter()
                .zip(&expected)
                .all(|(v, e)| values_agree(v, e, tol));
            Ok((pass, field.to_string()))
        }
        AssertionKind::Quotient => {
            let t = ws.hom(required(&a.target, "target")?)?;
            let report = t.quotient_report()?;
            let expected = expected_bool(a.expected.as_ref())?;
            let detail = match report.first_failure() {
                None => "quotient operator".to_string(),
                Some((k, why)) => format!(
                    "not a quotient at `{}`: {why}",
                    t.source().space().atom_id(k)
                ),
            };
            Ok((report.is_quotient() == expected, detail))
        }
        AssertionKind::Null => {
            let alpha = ws.tensor(required(&a.target, "target")?)?;
            let expected = expected_bool(a.expected.as_ref())?;
            let null = alpha.is_null();
            Ok((null == expected, format!("null = {null}")))
        }
        AssertionKind::Summable => {
            let entry = ws.family(required(&a.target, "target")?)?;
            let verdicts = entry
                .family
                .cauchy_check(a.horizon.unwrap_or(DEFAULT_HORIZON))?;
            let shown: Vec<String> = verdicts.iter().map(Verdict::to_string).collect();
            let pass = match &a.expected {
                None => verdicts.iter().all(|v| *v == Verdict::Summable),
                Some(e) => expected_strings(e, verdicts.len())? == shown,
            };
            Ok((pass, shown.join(", ")))
        }
        AssertionKind::Theorem => {
            let id: TheoremId = required(&a.theorem, "theorem")?.parse()?;
            let outcome = theorems::evaluate(ws, id, &a.args, a.tol.as_ref().map(|q| &q.0))?;
            Ok((outcome.pass, outcome.detail))
        }
    }
}

fn values_agree(v: &NormValue, e: &NormValue, tol: f64) -> bool {
    match v.exact_eq(e) {
        Some(eq) if v.is_exact_form() => eq,
        _ => v.approx_eq(e, tol),
    }
}

/// Parses `"p/q"` or `"sqrt(p/q)"`.
pub fn parse_value(s: &str) -> Result<NormValue> {
    let s = s.trim();
    match s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => Ok(NormValue::from_squared(rational::parse(inner)?)),
        None => Ok(NormValue::Exact(rational::parse(s)?)),
    }
}

fn expected_strings(v: &Value, atoms: usize) -> Result<Vec<String>> {
    let list = match v {
        Value::String(s) => vec![s.clone(); atoms],
        Value::Array(items) => items
            .iter()
            .map(|i| {
                i.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse(format!("expected a string, found {i}")))
            })
            .collect::<Result<Vec<_>>>()?,
        other => {
            return Err(Error::Parse(format!(
                "expected a string or a list, found {other}"
            )))
        }
    };
    if list.len() != atoms {
        return Err(Error::DimensionMismatch {
            expected: atoms,
            found: list.len(),
        });
    }
    Ok(list)
}

fn expected_values(v: &Value, atoms: usize) -> Result<Vec<NormValue>> {
    expected_strings(v, atoms)?
        .iter()
        .map(|s| parse_value(s))
        .collect()
}

fn expected_bool(v: Option<&Value>) -> Result<bool> {
    match v {
        None => Ok(true),
        Some(Value::Bool(b)) => Ok(*b),
        Some(other) => Err(Error::Parse(format!("expected a boolean, found {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const SAMPLE: &str = r#"{
      "version": "1",
      "spaces": { "X": [ { "id": "a", "weight": "1/2" }, { "id": "b", "weight": "1/2" } ] },
      "norms": { "hex": { "kind": "poly", "vertices": [["1", "0"], ["0", "1"], ["1", "1"]] } },
      "modules": {
        "M": { "space": "X", "fiber": { "kind": "l1", "dim": 2 } },
        "H": { "space": "X", "fibers": ["hex", { "kind": "l2", "dim": 2 }] }
      },
      "elements": {
        "v": { "module": "M", "fibers": [["1", "-2"], ["3/2", "0"]] },
        "w": { "module": "H", "fibers": [["1", "1"], ["3", "4"]] }
      },
      "homs": { "P": { "source": "M", "target": "M", "matrices": [[["1", "0"], ["0", "0"]], [["1", "0"], ["0", "1"]]] } },
      "tensors": {
        "t": { "left": "M", "right": "M", "representation": [["v", "v"]] }
      },
      "assertions": [
        { "name": "norm-v", "kind": "norm", "target": "v", "expected": ["3/1", "3/2"] },
        { "kind": "norm", "target": "w", "expected": ["1", "5"] },
        { "kind": "tensor_norm", "target": "t", "flavor": "pi", "expected": ["9", "9/4"] },
        { "kind": "quotient", "target": "P", "expected": false },
        { "kind": "null", "target": "t", "expected": false }
      ]
    }"#;

    #[test]
    fn sample_document_checks() {
        let doc = WorkDocument::parse(SAMPLE).unwrap();
        let results = check_document(&doc).unwrap();
        assert_eq!(results.len(), 5);
        for r in &results {
            assert!(r.pass, "{r}");
        }
        assert_eq!(results[0].name, "norm-v");
        assert_eq!(results[1].name, "norm#1");
    }

    #[test]
    fn round_trip() {
        let doc = WorkDocument::parse(SAMPLE).unwrap();
        let again = WorkDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn parse_errors_have_positions() {
        let bad = SAMPLE.replace("\"1/2\"", "\"1/0\"");
        let Err(Error::Parse(msg)) = WorkDocument::parse(&bad) else {
            panic!("expected a parse error");
        };
        assert!(
            msg.contains("zero denominator") && msg.contains("line 3"),
            "{msg}"
        );
    }

    #[test]
    fn unresolved_references() {
        let bad = SAMPLE.replace("\"module\": \"H\"", "\"module\": \"Z\"");
        let doc = WorkDocument::parse(&bad).unwrap();
        assert_eq!(
            Workspace::resolve(&doc).unwrap_err(),
            Error::UnresolvedReference("modules.Z".into())
        );
    }

    #[test]
    fn builder_round_trip() {
        let s = Arc::new(MeasureSpace::uniform(2));
        let m = Arc::new(
            ModuleSpec::new(
                s.clone(),
                vec![
                    NormDescriptor::linf(2),
                    NormDescriptor::block_sum(vec![NormDescriptor::l2(1), NormDescriptor::l2(2)]),
                ],
            )
            .unwrap(),
        );
        let v = Element::new(
            m.clone(),
            vec![
                FiberVector::new(vec![int(1), int(2)]),
                FiberVector::new(vec![int(1), int(3), int(4)]),
            ],
        )
        .unwrap();
        let mut doc = WorkDocument::new();
        doc.add_space("X", &s);
        doc.add_module("M", "X", &m);
        doc.add_element("v", "M", &v);
        doc.add_family(
            "f",
            "v",
            &Coefficients::Geometric {
                a: int(1),
                r: Rational::new(1.into(), 2.into()),
            },
            None,
        );
        let ws = Workspace::resolve(&WorkDocument::parse(&doc.to_json()).unwrap()).unwrap();
        assert_eq!(ws.element("v").unwrap(), &v);
        assert_eq!(
            ws.element("v").unwrap().norm().exact().unwrap().values(),
            &[int(2), int(6)]
        );
        assert_eq!(ws.family("f").unwrap().family.bounds().len(), 2);
    }

    #[test]
    fn sqrt_expectations() {
        assert_eq!(parse_value("sqrt(2)").unwrap(), NormValue::Sqrt(int(2)));
        assert_eq!(
            parse_value("sqrt(4/9)").unwrap(),
            NormValue::Exact(Rational::new(2.into(), 3.into()))
        );
        assert!(parse_value("sqrt(1/0)").is_err());
    }
}
