//! The theorem registry: one seeded property suite per identity.
//!
//! Every case is generated as a [`WorkDocument`] holding the random instance
//! and a single `theorem` assertion, then checked through the same path as a
//! user document. A failing case's document is therefore a self-contained
//! counterexample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::document::{check_document, Assertion, WorkDocument, Workspace};
use crate::error::{unsupported, Error, Result};
use crate::fiber::{FiberVector, NormDescriptor, NormValue, EUCLIDEAN_TOL, SPECTRAL_TOL};
use crate::hom::{hahn_banach_witness, pairing, quotient_dual_check, BilinearForm, Homomorphism};
use crate::linalg::Matrix;
use crate::measure::MeasureSpace;
use crate::module::{Element, ModuleSpec, NormField, Submodule};
use crate::pullback::{pullback_tensor_check, AtomMap};
use crate::rational::{format, to_f64, Rational};
use crate::sequences::{
    diagonal_check, inj_tens_uc_check, sphere_quotient, uc_module, uc_quotient_tensor_check,
    vv_iso_check, FiniteSpaceK,
};
use crate::summability::{hom_commute_check, Coefficients, Verdict};
use crate::tensor::{
    certificate_holds, projective_quotient_check, tensor_hom_norm, Crossnorm, ProjectiveNorm,
    Tensor,
};

/// Horizon used by the summability suites.
pub const SUM_HORIZON: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Null,
    PiElem,
    EpsElem,
    Sandwich,
    PiDual,
    HomTensor,
    QuotTensorPi,
    Vv,
    SphereQuot,
    Diag,
    UcEps,
    UcQuot,
    PullPi,
    PullEps,
    Hb,
    Annih,
    SumCauchy,
    SumHom,
    Curry,
}

impl TheoremId {
    pub const ALL: [Self; 19] = [
        Self::Null,
        Self::PiElem,
        Self::EpsElem,
        Self::Sandwich,
        Self::PiDual,
        Self::HomTensor,
        Self::QuotTensorPi,
        Self::Vv,
        Self::SphereQuot,
        Self::Diag,
        Self::UcEps,
        Self::UcQuot,
        Self::PullPi,
        Self::PullEps,
        Self::Hb,
        Self::Annih,
        Self::SumCauchy,
        Self::SumHom,
        Self::Curry,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Self::Null => "TH-NULL",
            Self::PiElem => "TH-PI-ELEM",
            Self::EpsElem => "TH-EPS-ELEM",
            Self::Sandwich => "TH-SANDWICH",
            Self::PiDual => "TH-PI-DUAL",
            Self::HomTensor => "TH-HOM-TENSOR",
            Self::QuotTensorPi => "TH-QUOT-TENSOR-PI",
            Self::Vv => "TH-VV",
            Self::SphereQuot => "TH-SPHERE-QUOT",
            Self::Diag => "TH-DIAG",
            Self::UcEps => "TH-UC-EPS",
            Self::UcQuot => "TH-UC-QUOT",
            Self::PullPi => "TH-PULL-PI",
            Self::PullEps => "TH-PULL-EPS",
            Self::Hb => "TH-HB",
            Self::Annih => "TH-ANNIH",
            Self::SumCauchy => "TH-SUM-CAUCHY",
            Self::SumHom => "TH-SUM-HOM",
            Self::Curry => "TH-CURRY",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Null => "a tensor is null iff every dual vertex pair annihilates it",
            Self::PiElem => "pi(v (x) w) = |v| |w|",
            Self::EpsElem => "eps(v (x) w) = |v| |w|",
            Self::Sandwich => "eps <= hs <= pi on l2 (x) l2",
            Self::PiDual => "projective LP certificates have norm <= 1 and attain pi",
            Self::HomTensor => "|T (x) S| = |T| |S| for pi and eps",
            Self::QuotTensorPi => "T (x)_pi S is a quotient operator when T and S are",
            Self::Vv => "L0(l1(I)) (x)_pi M = l1(I, M)",
            Self::SphereQuot => "l1(G) -> M is a quotient iff G fills the unit sphere's vertices",
            Self::Diag => "diagonal l2 tensors: pi = sum |f_i|, eps = max |f_i|",
            Self::UcEps => "UC(K; L0) (x)_eps M = UC(K; M)",
            Self::UcQuot => "id (x)_eps T is a quotient operator when T is",
            Self::PullPi => "pi commutes with pullbacks",
            Self::PullEps => "eps commutes with pullbacks",
            Self::Hb => "Hahn-Banach witnesses lie on the dual unit sphere and attain |v|",
            Self::Annih => "(M/V)* = V^perp and V* = M*/V^perp isometrically",
            Self::SumCauchy => {
                "tail-bounded families sum to their limits; harmonic families diverge"
            }
            Self::SumHom => "T(sum v_i) = sum T(v_i)",
            Self::Curry => "B(M, N) = Hom(M, N*) isometrically",
        }
    }

    fn default_tol(self) -> Rational {
        match self {
            Self::Hb => crate::rational::from_f64(EUCLIDEAN_TOL),
            Self::SumCauchy | Self::SumHom => Rational::new(1.into(), 1000.into()),
            _ => crate::rational::from_f64(SPECTRAL_TOL),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem `{s}`")))
    }
}

/// Result of evaluating one theorem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
    /// Projective LP certificates that were checked along the way.
    pub certificates: usize,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            certificates: 0,
        }
    }

    fn with_certificates(mut self, check: CertificateCheck) -> Self {
        self.certificates += check.checked;
        if !check.ok {
            self.pass = false;
            self.detail.push_str("; projective certificate rejected");
        }
        self
    }
}

// ---------------------------------------------------------------- arguments

fn arg<'a>(args: &'a BTreeMap<String, Value>, key: &str) -> Result<&'a str> {
    args.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidInput(format!("theorem argument `{key}` must be a string")))
}

fn arg_list(args: &BTreeMap<String, Value>, key: &str) -> Result<Vec<String>> {
    let bad = || {
        Error::InvalidInput(format!(
            "theorem argument `{key}` must be a list of strings"
        ))
    };
    args.get(key)
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(bad))
        .collect()
}

fn arg_u64(args: &BTreeMap<String, Value>, key: &str) -> Result<u64> {
    args.get(key).and_then(Value::as_u64).ok_or_else(|| {
        Error::InvalidInput(format!(
            "theorem argument `{key}` must be a nonnegative integer"
        ))
    })
}

fn arg_pairs(args: &BTreeMap<String, Value>, key: &str) -> Result<Vec<(String, String)>> {
    let bad = || {
        Error::InvalidInput(format!(
            "theorem argument `{key}` must be a list of name pairs"
        ))
    };
    args.get(key)
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([Value::String(a), Value::String(b)]) => Ok((a.clone(), b.clone())),
            _ => Err(bad()),
        })
        .collect()
}

// --------------------------------------------------------------- evaluation

fn agree(a: &NormValue, b: &NormValue, tol: f64) -> bool {
    match a.exact_eq(b) {
        Some(eq) if a.is_exact_form() && b.is_exact_form() => eq,
        _ => a.approx_eq(b, tol),
    }
}

fn fields_agree(a: &NormField, b: &NormField, tol: f64) -> bool {
    a.values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| agree(x, y, tol))
}

#[derive(Debug, Clone, Copy)]
struct CertificateCheck {
    checked: usize,
    ok: bool,
}

/// Checks every exact projective atom: the certificate has bilinear norm at
/// most 1 and attains the value, and the decomposition rebuilds the matrix
/// with cost equal to the value.
fn verify_projective(alpha: &Tensor, pi: &ProjectiveNorm) -> Result<CertificateCheck> {
    let mut check = CertificateCheck {
        checked: 0,
        ok: true,
    };
    for (k, atom) in pi.atoms.iter().enumerate() {
        let (Some(cert), Some(value)) = (&atom.certificate, atom.value.exact()) else {
            continue;
        };
        let (left, right) = (alpha.left().fiber(k), alpha.right().fiber(k));
        let a = alpha.matrix(k);
        check.checked += 1;
        check.ok &= certificate_holds(a, cert, value, left, right)?;
        let mut rebuilt = Matrix::zeros(a.rows(), a.cols());
        let mut cost = NormValue::zero();
        for (x, y) in &atom.decomposition {
            rebuilt = rebuilt.add(&Matrix::outer(x, y));
            cost = cost.add(&left.norm(x)?.mul(&right.norm(y)?));
        }
        check.ok &= rebuilt == *a && cost.exact() == Some(value);
    }
    Ok(check)
}

/// Evaluates theorem `id` on the named objects in `args`.
pub fn evaluate(
    ws: &Workspace,
    id: TheoremId,
    args: &BTreeMap<String, Value>,
    tol: Option<&Rational>,
) -> Result<Outcome> {
    let tol_q = tol.cloned().unwrap_or_else(|| id.default_tol());
    let tol = to_f64(&tol_q);
    match id {
        TheoremId::Null => {
            let left = ws.module(arg(args, "left")?)?.clone();
            let right = ws.module(arg(args, "right")?)?.clone();
            let pairs = arg_pairs(args, "pairs")?
                .iter()
                .map(|(v, w)| Ok((ws.element(v)?.clone(), ws.element(w)?.clone())))
                .collect::<Result<Vec<_>>>()?;
            let r = crate::tensor::null_check(left, right, &pairs)?;
            Ok(Outcome::new(
                r.agree(),
                format!(
                    "matrix zero = {}, dual criterion = {}",
                    r.matrix_zero, r.dual_criterion
                ),
            ))
        }
        TheoremId::PiElem | TheoremId::EpsElem => {
            let v = ws.element(arg(args, "left")?)?;
            let w = ws.element(arg(args, "right")?)?;
            let alpha = Tensor::elementary(v, w)?;
            let product = v.norm().zip_with(&w.norm(), NormValue::mul)?;
            let (field, certs) = if id == TheoremId::PiElem {
                let pi = alpha.projective_norm()?;
                let certs = verify_projective(&alpha, &pi)?;
                (pi.field, Some(certs))
            } else {
                (alpha.injective_norm()?, None)
            };
            let outcome = Outcome::new(
                fields_agree(&field, &product, tol),
                format!("norm [{field}] vs |v||w| [{product}]"),
            );
            Ok(match certs {
                Some(c) => outcome.with_certificates(c),
                None => outcome,
            })
        }
        TheoremId::Sandwich => {
            let alpha = ws.tensor(arg(args, "tensor")?)?;
            let r = alpha.crossnorm_sandwich(tol)?;
            let hs =
                r.hs.as_ref()
                    .ok_or_else(|| unsupported("sandwich", "needs l2 fibers on both sides"))?;
            let squares = alpha.hs_norm_squared()?;
            let exact = hs
                .values()
                .iter()
                .zip(squares.values())
                .all(|(h, s)| h.squared().as_ref() == Some(s));
            Ok(Outcome::new(
                r.holds && exact,
                format!("eps [{}] hs [{hs}] pi [{}]", r.eps, r.pi),
            ))
        }
        TheoremId::PiDual => {
            let alpha = ws.tensor(arg(args, "tensor")?)?;
            let pi = alpha.projective_norm()?;
            let certs = verify_projective(alpha, &pi)?;
            Ok(Outcome::new(true, format!("pi [{}]", pi.field)).with_certificates(certs))
        }
        TheoremId::HomTensor => {
            let t = ws.hom(arg(args, "left")?)?;
            let s = ws.hom(arg(args, "right")?)?;
            let flavor: Crossnorm = arg(args, "flavor")?.parse()?;
            let norm = tensor_hom_norm(t, s, flavor)?;
            let product = t
                .pointwise_norm()?
                .zip_with(&s.pointwise_norm()?, NormValue::mul)?;
            Ok(Outcome::new(
                fields_agree(&norm, &product, tol),
                format!("|T (x)_{flavor} S| [{norm}] vs |T||S| [{product}]"),
            ))
        }
        TheoremId::QuotTensorPi => {
            let t = ws.hom(arg(args, "left")?)?;
            let s = ws.hom(arg(args, "right")?)?;
            let r = projective_quotient_check(t, s)?;
            Ok(Outcome::new(
                r.holds,
                format!("min preimage norms {}", show_lists(&r.min_preimage_norms)),
            ))
        }
        TheoremId::Vv => {
            let alpha = ws.tensor(arg(args, "tensor")?)?;
            let r = vv_iso_check(alpha)?;
            let certs = verify_projective(alpha, &alpha.projective_norm()?)?;
            Ok(
                Outcome::new(r.equal, format!("pi [{}] vs row sum [{}]", r.pi, r.row_sum))
                    .with_certificates(certs),
            )
        }
        TheoremId::SphereQuot => {
            let module = ws.module(arg(args, "module")?)?.clone();
            let gens = arg_list(args, "generators")?
                .iter()
                .map(|g| ws.element(g).cloned())
                .collect::<Result<Vec<_>>>()?;
            let complete = hull_complete(&module, &gens)?;
            let (_, report) = sphere_quotient(module, &gens)?;
            Ok(Outcome::new(
                report.is_quotient() == complete,
                format!(
                    "quotient = {}, generators fill the vertices = {complete}",
                    report.is_quotient()
                ),
            ))
        }
        TheoremId::Diag => {
            let fs = arg_list(args, "functions")?
                .iter()
                .map(|f| {
                    let e = ws.element(f)?;
                    if e.module().fibers().iter().any(|d| d.dim() != 1) {
                        return Err(Error::InvalidInput(format!(
                            "`{f}` is not a scalar function"
                        )));
                    }
                    crate::measure::L0Function::new(
                        e.space().clone(),
                        e.fibers().iter().map(|x| x[0].clone()).collect(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let r = diagonal_check(&fs, tol)?;
            Ok(Outcome::new(
                r.holds,
                format!("pi [{}] eps [{}]", r.pi, r.eps),
            ))
        }
        TheoremId::UcEps => {
            let alpha = ws.tensor(arg(args, "tensor")?)?;
            let r = inj_tens_uc_check(alpha)?;
            Ok(Outcome::new(
                r.equal,
                format!("eps [{}] vs max row [{}]", r.eps, r.max_row),
            ))
        }
        TheoremId::UcQuot => {
            let t = ws.hom(arg(args, "hom")?)?;
            let k = FiniteSpaceK::uniform(arg_u64(args, "points")? as usize);
            let r = uc_quotient_tensor_check(t, &k)?;
            let worst: Vec<String> = r
                .min_preimage_norms
                .iter()
                .map(|a| a.iter().max().map(format).unwrap_or_else(|| "-".into()))
                .collect();
            Ok(Outcome::new(
                r.holds,
                format!("largest min preimage norm per atom [{}]", worst.join(", ")),
            ))
        }
        TheoremId::PullPi | TheoremId::PullEps => {
            let phi = ws.map(arg(args, "map")?)?;
            let alpha = ws.tensor(arg(args, "tensor")?)?;
            let flavor = if id == TheoremId::PullPi {
                Crossnorm::Pi
            } else {
                Crossnorm::Eps
            };
            let r = pullback_tensor_check(phi, alpha, flavor)?;
            let exact = fields_agree(&r.pulled, &r.composed, tol);
            let outcome = Outcome::new(
                r.holds && exact,
                format!("pulled [{}] vs composed [{}]", r.pulled, r.composed),
            );
            if flavor == Crossnorm::Pi {
                let pulled = phi.pullback_tensor(alpha)?;
                let certs = verify_projective(&pulled, &pulled.projective_norm()?)?;
                Ok(outcome.with_certificates(certs))
            } else {
                Ok(outcome)
            }
        }
        TheoremId::Hb => {
            let v = ws.element(arg(args, "element")?)?;
            let omega = hahn_banach_witness(v)?;
            let attained = pairing(&omega, v)?;
            let norm = v.norm();
            let pass = omega.on_unit_sphere()
                && (0..norm.values().len()).all(|k| {
                    let value = NormValue::Exact(attained.value(k).clone());
                    if v.module().fiber(k).is_polyhedral() {
                        norm.value(k).exact() == Some(attained.value(k))
                    } else {
                        value.approx_eq(norm.value(k), tol)
                    }
                });
            Ok(Outcome::new(
                pass,
                format!(
                    "omega(v) [{}] vs |v| [{norm}], |omega| [{}]",
                    show_l0(&attained),
                    omega.norm()
                ),
            ))
        }
        TheoremId::Annih => {
            let module = ws.module(arg(args, "module")?)?.clone();
            let gens = arg_list(args, "generators")?
                .iter()
                .map(|g| ws.element(g).cloned())
                .collect::<Result<Vec<_>>>()?;
            let sub = Submodule::generated_by(module, &gens)?;
            let (holds, comparisons) = quotient_dual_check(&sub)?;
            let n: usize = comparisons.iter().map(Vec::len).sum();
            Ok(Outcome::new(holds, format!("{n} dual vertices compared")))
        }
        TheoremId::SumCauchy => sum_cauchy(ws, args, &tol_q),
        TheoremId::SumHom => {
            let entry = ws.family(arg(args, "family")?)?;
            let t = ws.hom(arg(args, "hom")?)?;
            let r = hom_commute_check(&entry.family, t, &tol_q)?;
            Ok(Outcome::new(
                r.holds,
                format!(
                    "|T(sum) - sum(T)| [{}] within [{}]",
                    r.difference,
                    r.allowance
                        .iter()
                        .map(format)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ))
        }
        TheoremId::Curry => {
            let b = ws.bilinear_form(arg(args, "form")?)?;
            let t = b.curry();
            let back = BilinearForm::uncurry(&t)?;
            let (nb, nt) = (b.pointwise_norm()?, t.pointwise_norm()?);
            Ok(Outcome::new(
                back == *b && fields_agree(&nb, &nt, tol),
                format!("|B| [{nb}] vs |curry B| [{nt}]"),
            ))
        }
    }
}

fn sum_cauchy(ws: &Workspace, args: &BTreeMap<String, Value>, tol: &Rational) -> Result<Outcome> {
    let entry = ws.family(arg(args, "family")?)?;
    let horizon = arg_u64(args, "horizon").unwrap_or(SUM_HORIZON);
    let family = &entry.family;
    let verdicts = family.cauchy_check(horizon)?;
    let expected: Vec<Verdict> = family
        .bounds()
        .iter()
        .map(|b| {
            if *b == crate::summability::TailBound::Divergent {
                Verdict::NotSummable
            } else {
                Verdict::Summable
            }
        })
        .collect();
    let shown = verdicts
        .iter()
        .map(Verdict::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    if verdicts != expected {
        return Ok(Outcome::new(false, format!("verdicts [{shown}]")));
    }
    if verdicts.contains(&Verdict::NotSummable) {
        let refused = matches!(family.sum(tol), Err(Error::NotSummable(_)));
        return Ok(Outcome::new(refused, format!("verdicts [{shown}]")));
    }
    let s = family.sum(tol)?;
    let closed = match &entry.coefficients {
        Coefficients::Geometric { a, r } => {
            Some(entry.element.scale(&(a * r / (Rational::one() - r))))
        }
        Coefficients::Finite(list) => Some(entry.element.scale(&list.iter().sum())),
        Coefficients::PSeries { .. } => None,
    };
    let within = |diff: &NormField| {
        diff.values()
            .iter()
            .zip(&s.error)
            .all(|(d, e)| d.le_within(&NormValue::Exact(e.clone()), d.tol()))
    };
    let mut pass = true;
    let mut detail = format!("verdicts [{shown}], {} terms", s.terms);
    if let Some(c) = closed {
        let diff = s.sum.sub(&c)?.norm();
        pass &= within(&diff);
        detail.push_str(&format!(", distance to closed form [{diff}]"));
    }
    let total = family.partial_norm_sum(s.terms)?;
    let triangle = s
        .sum
        .norm()
        .values()
        .iter()
        .zip(total.values().iter().zip(&s.error))
        .all(|(n, (t, e))| {
            let bound = t.add(&NormValue::Exact(e.clone()));
            n.le_within(&bound, n.tol() + bound.tol())
        });
    pass &= triangle;
    Ok(Outcome::new(pass, detail))
}

/// Whether every ball vertex of every polyhedral fiber is `±` a generator.
fn hull_complete(module: &ModuleSpec, gens: &[Element]) -> Result<bool> {
    for (k, desc) in module.fibers().iter().enumerate() {
        if desc.dim() == 0 {
            continue;
        }
        let vertices = desc
            .primal_vertices()
            .ok_or_else(|| unsupported("sphere quotient", desc.label()))?;
        let hit = vertices.iter().all(|v| {
            gens.iter()
                .any(|g| g.fiber(k) == v || g.fiber(k) == &v.neg())
        });
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

fn show_lists(lists: &[Vec<Rational>]) -> String {
    let parts: Vec<String> = lists
        .iter()
        .map(|l| l.iter().map(format).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", parts.join("; "))
}

fn show_l0(f: &crate::measure::L0Function) -> String {
    f.values().iter().map(format).collect::<Vec<_>>().join(", ")
}

// --------------------------------------------------------------- generation

/// Random instance builder; bounds keep every exact computation small.
struct Gen {
    rng: ChaCha8Rng,
    doc: WorkDocument,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kinds {
    Polyhedral,
    Euclidean,
    Mixed,
}

impl Gen {
    fn new(seed: u64, case: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case);
        Self {
            rng,
            doc: WorkDocument::new(),
        }
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    fn rat(&mut self, max_num: i64, max_den: i64) -> Rational {
        let n = self.rng.random_range(-max_num..=max_num);
        let d = self.rng.random_range(1..=max_den);
        Rational::new(n.into(), d.into())
    }

    fn nonzero_rat(&mut self, max_num: i64, max_den: i64) -> Rational {
        loop {
            let q = self.rat(max_num, max_den);
            if !q.is_zero() {
                return q;
            }
        }
    }

    fn weight(&mut self) -> Rational {
        let n: i64 = self.rng.random_range(1..=4);
        let d: i64 = self.rng.random_range(1..=2);
        Rational::new(n.into(), d.into())
    }

    fn vector(&mut self, dim: usize) -> FiberVector {
        FiberVector::new((0..dim).map(|_| self.rat(6, 3)).collect())
    }

    fn space(&mut self, name: &str, max_atoms: usize) -> Arc<MeasureSpace> {
        let n = self.range(1, max_atoms);
        let atoms: Vec<(String, Rational)> = (0..n)
            .map(|i| (format!("{name}{i}"), self.weight()))
            .collect();
        let space =
            Arc::new(MeasureSpace::new(atoms).expect("distinct atoms with positive weights"));
        self.doc.add_space(name, &space);
        space
    }

    fn polytope(&mut self, dim: usize) -> NormDescriptor {
        loop {
            let count = self.range(dim, dim + 2);
            let points: Vec<FiberVector> = (0..count)
                .map(|_| FiberVector::new((0..dim).map(|_| self.rat(2, 2)).collect()))
                .collect();
            if let Ok(d) = NormDescriptor::polyhedral_from_vertices(points) {
                if d.primal_vertices().is_some_and(|v| v.len() <= 8)
                    && d.dual_vertices().is_some_and(|v| v.len() <= 8)
                {
                    return d;
                }
            }
        }
    }

    fn polyhedral_norm(&mut self, dim: usize) -> NormDescriptor {
        let weights = |g: &mut Self| (0..dim).map(|_| g.weight()).collect::<Vec<_>>();
        match self.range(0, 2) {
            0 => NormDescriptor::lp(crate::fiber::Exponent::One, weights(self))
                .expect("positive weights"),
            1 => NormDescriptor::lp(crate::fiber::Exponent::Inf, weights(self))
                .expect("positive weights"),
            _ if dim >= 2 => self.polytope(dim),
            _ => NormDescriptor::l1(dim),
        }
    }

    fn euclidean_norm(&mut self, dim: usize) -> NormDescriptor {
        let weights = (0..dim).map(|_| self.weight()).collect();
        NormDescriptor::lp(crate::fiber::Exponent::Two, weights).expect("positive weights")
    }

    fn norm(&mut self, kinds: Kinds, dim: usize) -> NormDescriptor {
        match kinds {
            Kinds::Polyhedral => self.polyhedral_norm(dim),
            Kinds::Euclidean => self.euclidean_norm(dim),
            Kinds::Mixed if self.coin(0.5) => self.euclidean_norm(dim),
            Kinds::Mixed => self.polyhedral_norm(dim),
        }
    }

    fn module_with(
        &mut self,
        name: &str,
        space_name: &str,
        space: &Arc<MeasureSpace>,
        dims: &[usize],
        kinds: Kinds,
    ) -> Arc<ModuleSpec> {
        let fibers = dims.iter().map(|&d| self.norm(kinds, d)).collect();
        let m = Arc::new(ModuleSpec::new(space.clone(), fibers).expect("one fiber per atom"));
        self.doc.add_module(name, space_name, &m);
        m
    }

    fn module(
        &mut self,
        name: &str,
        space_name: &str,
        space: &Arc<MeasureSpace>,
        kinds: Kinds,
    ) -> Arc<ModuleSpec> {
        let dims: Vec<usize> = (0..space.len()).map(|_| self.range(1, 3)).collect();
        self.module_with(name, space_name, space, &dims, kinds)
    }

    fn element(&mut self, name: &str, module_name: &str, module: &Arc<ModuleSpec>) -> Element {
        let fibers = module
            .fibers()
            .iter()
            .map(|d| {
                if self.coin(0.1) {
                    FiberVector::zeros(d.dim())
                } else {
                    self.vector(d.dim())
                }
            })
            .collect();
        let v = Element::new(module.clone(), fibers).expect("dimensions follow the module");
        self.doc.add_element(name, module_name, &v);
        v
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_rows(
            (0..rows)
                .map(|_| (0..cols).map(|_| self.rat(4, 2)).collect())
                .collect(),
            cols,
        )
    }

    fn tensor(
        &mut self,
        name: &str,
        left: (&str, &Arc<ModuleSpec>),
        right: (&str, &Arc<ModuleSpec>),
    ) -> Tensor {
        let matrices = left
            .1
            .dims()
            .iter()
            .zip(right.1.dims())
            .map(|(&r, c)| self.matrix(r, c))
            .collect();
        let alpha = Tensor::new(left.1.clone(), right.1.clone(), matrices)
            .expect("shapes follow the modules");
        self.doc.add_tensor(name, left.0, right.0, &alpha);
        alpha
    }

    fn hom(
        &mut self,
        name: &str,
        source: (&str, &Arc<ModuleSpec>),
        target: (&str, &Arc<ModuleSpec>),
    ) -> Homomorphism {
        let matrices = target
            .1
            .dims()
            .iter()
            .zip(source.1.dims())
            .map(|(&r, c)| self.matrix(r, c))
            .collect();
        let t = Homomorphism::new(source.1.clone(), target.1.clone(), matrices)
            .expect("shapes follow the modules");
        self.doc.add_hom(name, source.0, target.0, &t);
        t
    }

    /// A quotient operator `T: M -> N`: `M` polyhedral, `T` onto, and the
    /// ball of `N` defined as `T(B_M)`.
    fn quotient_hom(
        &mut self,
        name: &str,
        source: &str,
        target: &str,
        space_name: &str,
        space: &Arc<MeasureSpace>,
        max_dim: usize,
    ) -> Homomorphism {
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut matrices = Vec::new();
        for _ in 0..space.len() {
            let m = self.range(1, max_dim);
            let n = self.range(1, m);
            let desc = self.polyhedral_norm(m);
            let vertices = desc.primal_vertices().expect("polyhedral");
            loop {
                let a = self.matrix(n, m);
                if a.rank() < n {
                    continue;
                }
                let image: Vec<FiberVector> = vertices
                    .iter()
                    .map(|v| FiberVector::new(a.mul_vec(v)))
                    .collect();
                if let Ok(t) = NormDescriptor::polyhedral_from_vertices(image) {
                    if t.dual_vertices().is_some_and(|d| d.len() <= 8) {
                        sources.push(desc);
                        targets.push(t);
                        matrices.push(a);
                        break;
                    }
                }
            }
        }
        let sm = Arc::new(ModuleSpec::new(space.clone(), sources).expect("one fiber per atom"));
        let tm = Arc::new(ModuleSpec::new(space.clone(), targets).expect("one fiber per atom"));
        self.doc.add_module(source, space_name, &sm);
        self.doc.add_module(target, space_name, &tm);
        let t = Homomorphism::new(sm, tm, matrices).expect("shapes follow the modules");
        self.doc.add_hom(name, source, target, &t);
        t
    }

    fn finish(mut self, id: TheoremId, args: Value) -> WorkDocument {
        let args = match args {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        let mut a = Assertion::theorem(id, args);
        a.name = Some(id.code().to_string());
        self.doc.assertions.push(a);
        self.doc
    }
}

/// The random instance for case `case` of theorem `id` under `seed`.
pub fn generate(id: TheoremId, seed: u64, case: u64) -> WorkDocument {
    let mut g = Gen::new(seed, case);
    match id {
        TheoremId::Null => {
            let x = g.space("x", 3);
            let kinds = if g.coin(0.75) {
                Kinds::Polyhedral
            } else {
                Kinds::Mixed
            };
            let l = g.module("L", "x", &x, kinds);
            let r = g.module("R", "x", &x, kinds);
            let n = g.range(1, 3);
            let mut pairs = Vec::new();
            for i in 0..n {
                g.element(&format!("v{i}"), "L", &l);
                g.element(&format!("w{i}"), "R", &r);
                pairs.push(json!([format!("v{i}"), format!("w{i}")]));
            }
            if g.coin(0.5) {
                // cancel every pair, splitting the negation between factors
                for i in 0..n {
                    let v = g.doc.elements[&format!("v{i}")].clone();
                    let mut neg = v.clone();
                    for f in &mut neg.fibers {
                        for q in f.iter_mut() {
                            q.0 = -q.0.clone();
                        }
                    }
                    g.doc.elements.insert(format!("nv{i}"), neg);
                    pairs.push(json!([format!("nv{i}"), format!("w{i}")]));
                }
            }
            g.finish(id, json!({ "left": "L", "right": "R", "pairs": pairs }))
        }
        TheoremId::PiElem | TheoremId::EpsElem => {
            let x = g.space("x", 3);
            let l = g.module("M", "x", &x, Kinds::Polyhedral);
            let r = g.module("N", "x", &x, Kinds::Polyhedral);
            g.element("v", "M", &l);
            g.element("w", "N", &r);
            g.finish(id, json!({ "left": "v", "right": "w" }))
        }
        TheoremId::Sandwich => {
            let x = g.space("x", 3);
            let l = g.module("M", "x", &x, Kinds::Euclidean);
            let r = g.module("N", "x", &x, Kinds::Euclidean);
            g.tensor("t", ("M", &l), ("N", &r));
            g.finish(id, json!({ "tensor": "t" }))
        }
        TheoremId::PiDual => {
            let x = g.space("x", 3);
            let l = g.module("M", "x", &x, Kinds::Polyhedral);
            let r = g.module("N", "x", &x, Kinds::Polyhedral);
            g.tensor("t", ("M", &l), ("N", &r));
            g.finish(id, json!({ "tensor": "t" }))
        }
        TheoremId::HomTensor => {
            let x = g.space("x", 2);
            let ms: Vec<Arc<ModuleSpec>> = ["M1", "N1", "M2", "N2"]
                .iter()
                .map(|name| {
                    let dims: Vec<usize> = (0..x.len()).map(|_| g.range(1, 2)).collect();
                    g.module_with(name, "x", &x, &dims, Kinds::Polyhedral)
                })
                .collect();
            g.hom("T", ("M1", &ms[0]), ("N1", &ms[1]));
            g.hom("S", ("M2", &ms[2]), ("N2", &ms[3]));
            let flavor = if g.coin(0.5) { "pi" } else { "eps" };
            g.finish(id, json!({ "left": "T", "right": "S", "flavor": flavor }))
        }
        TheoremId::QuotTensorPi => {
            let x = g.space("x", 2);
            g.quotient_hom("T", "M1", "N1", "x", &x, 2);
            g.quotient_hom("S", "M2", "N2", "x", &x, 2);
            g.finish(id, json!({ "left": "T", "right": "S" }))
        }
        TheoremId::Vv => {
            let x = g.space("x", 3);
            let n = g.range(1, 3);
            let l = Arc::new(ModuleSpec::constant(x.clone(), NormDescriptor::l1(n)));
            g.doc.add_module("L", "x", &l);
            let r = g.module("M", "x", &x, Kinds::Polyhedral);
            g.tensor("t", ("L", &l), ("M", &r));
            g.finish(id, json!({ "tensor": "t" }))
        }
        TheoremId::SphereQuot => {
            let x = g.space("x", 2);
            let m = g.module("M", "x", &x, Kinds::Polyhedral);
            let lists: Vec<Vec<FiberVector>> = m
                .fibers()
                .iter()
                .map(|d| d.primal_vertices().expect("polyhedral"))
                .collect();
            let count = lists.iter().map(Vec::len).max().unwrap_or(0);
            let drop_last = g.coin(0.3) && count > 1;
            let count = if drop_last { count - 1 } else { count };
            let mut names = Vec::new();
            for j in 0..count {
                let fibers = lists
                    .iter()
                    .map(|vs| {
                        let v = &vs[j % vs.len()];
                        if g.coin(0.5) {
                            v.neg()
                        } else {
                            v.clone()
                        }
                    })
                    .collect();
                let e = Element::new(m.clone(), fibers).expect("dimensions follow the module");
                let name = format!("g{j}");
                g.doc.add_element(&name, "M", &e);
                names.push(name);
            }
            g.finish(id, json!({ "module": "M", "generators": names }))
        }
        TheoremId::Diag => {
            let x = g.space("x", 4);
            let s = Arc::new(ModuleSpec::scalars(x.clone()));
            g.doc.add_module("S", "x", &s);
            let n = g.range(1, 3);
            let names: Vec<String> = (0..n)
                .map(|i| {
                    let name = format!("f{i}");
                    g.element(&name, "S", &s);
                    name
                })
                .collect();
            g.finish(id, json!({ "functions": names }))
        }
        TheoremId::UcEps => {
            let x = g.space("x", 3);
            let k = FiniteSpaceK::uniform(g.range(1, 3));
            let l = Arc::new(uc_module(&k, &ModuleSpec::scalars(x.clone())));
            g.doc.add_module("U", "x", &l);
            let r = g.module("M", "x", &x, Kinds::Polyhedral);
            g.tensor("t", ("U", &l), ("M", &r));
            g.finish(id, json!({ "tensor": "t" }))
        }
        TheoremId::UcQuot => {
            let x = g.space("x", 2);
            g.quotient_hom("T", "M", "N", "x", &x, 3);
            let k = g.range(1, 3);
            g.finish(id, json!({ "hom": "T", "points": k }))
        }
        TheoremId::PullPi | TheoremId::PullEps => {
            let y = g.space("y", 3);
            let x = g.space("x", 4);
            let map: Vec<usize> = (0..x.len()).map(|_| g.range(0, y.len() - 1)).collect();
            let phi = AtomMap::new(x, y.clone(), map).expect("indices in range");
            g.doc.add_map("phi", "x", "y", &phi);
            let kinds = if g.coin(0.8) {
                Kinds::Polyhedral
            } else {
                Kinds::Euclidean
            };
            let l = g.module("M", "y", &y, kinds);
            let r = g.module("N", "y", &y, kinds);
            g.tensor("t", ("M", &l), ("N", &r));
            g.finish(id, json!({ "map": "phi", "tensor": "t" }))
        }
        TheoremId::Hb => {
            let x = g.space("x", 4);
            let m = g.module("M", "x", &x, Kinds::Mixed);
            g.element("v", "M", &m);
            g.finish(id, json!({ "element": "v" }))
        }
        TheoremId::Annih => {
            let x = g.space("x", 2);
            let dims: Vec<usize> = (0..x.len()).map(|_| g.range(2, 3)).collect();
            let m = g.module_with("M", "x", &x, &dims, Kinds::Polyhedral);
            let n = g.range(1, 2);
            let names: Vec<String> = (0..n)
                .map(|i| {
                    let name = format!("g{i}");
                    g.element(&name, "M", &m);
                    name
                })
                .collect();
            g.finish(id, json!({ "module": "M", "generators": names }))
        }
        TheoremId::SumCauchy => {
            let x = g.space("x", 3);
            let m = g.module("M", "x", &x, Kinds::Mixed);
            g.element("e", "M", &m);
            let coefficients = match g.range(0, 3) {
                0 => Coefficients::PSeries {
                    a: g.nonzero_rat(3, 2),
                    p: 1,
                },
                1 => Coefficients::PSeries {
                    a: g.nonzero_rat(3, 2),
                    p: 2,
                },
                2 => Coefficients::Finite((0..g.range(1, 4)).map(|_| g.rat(4, 3)).collect()),
                _ => {
                    let r = Rational::new((g.rng.random_range(-3..=3i64)).into(), 4.into());
                    Coefficients::Geometric {
                        a: g.nonzero_rat(3, 2),
                        r,
                    }
                }
            };
            g.doc.add_family("f", "e", &coefficients, None);
            // exact p-series partial sums grow lcm(1..n)^2 denominators
            let slow = matches!(coefficients, Coefficients::PSeries { p: 2, .. });
            let mut doc = g.finish(id, json!({ "family": "f", "horizon": SUM_HORIZON }));
            if slow {
                doc.assertions[0].tol =
                    Some(crate::document::Q(Rational::new(1.into(), 10.into())));
            }
            doc
        }
        TheoremId::SumHom => {
            let x = g.space("x", 3);
            let m = g.module("M", "x", &x, Kinds::Mixed);
            let n = g.module("N", "x", &x, Kinds::Mixed);
            g.element("e", "M", &m);
            let r = Rational::new((g.rng.random_range(-3..=3i64)).into(), 4.into());
            let coefficients = Coefficients::Geometric {
                a: g.nonzero_rat(3, 2),
                r,
            };
            g.doc.add_family("f", "e", &coefficients, None);
            g.hom("T", ("M", &m), ("N", &n));
            g.finish(id, json!({ "family": "f", "hom": "T" }))
        }
        TheoremId::Curry => {
            let x = g.space("x", 3);
            let l = g.module("M", "x", &x, Kinds::Mixed);
            let r = g.module("N", "x", &x, Kinds::Mixed);
            let matrices = l
                .dims()
                .iter()
                .zip(r.dims())
                .map(|(&a, b)| g.matrix(a, b))
                .collect();
            let b = BilinearForm::new(l, r, matrices).expect("shapes follow the modules");
            g.doc.add_bilinear("B", "M", "N", &b);
            g.finish(id, json!({ "form": "B" }))
        }
    }
}

/// One verified case.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub index: u64,
    pub pass: bool,
    pub detail: String,
    pub certificates: usize,
    pub document: WorkDocument,
}

/// Generates and checks one case through the document path.
pub fn run_case(id: TheoremId, seed: u64, case: u64, tol: Option<&Rational>) -> CaseReport {
    let mut document = generate(id, seed, case);
    if let Some(t) = tol {
        for a in &mut document.assertions {
            a.tol = Some(t.into());
        }
    }
    let (pass, detail, certificates) = match Workspace::resolve(&document).and_then(|ws| {
        let a = &document.assertions[0];
        evaluate(&ws, id, &a.args, a.tol.as_ref().map(|q| &q.0))
    }) {
        Ok(o) => (o.pass, o.detail, o.certificates),
        Err(e) => (false, format!("error: {e}"), 0),
    };
    CaseReport {
        index: case,
        pass,
        detail,
        certificates,
        document,
    }
}

/// Cases `0..cases`, checked in parallel and returned in order.
pub fn verify(id: TheoremId, seed: u64, cases: u64, tol: Option<&Rational>) -> Vec<CaseReport> {
    (0..cases)
        .into_par_iter()
        .map(|case| run_case(id, seed, case, tol))
        .collect()
}

/// Re-checks a counterexample document; `true` when it still fails.
pub fn reproduces_failure(document: &WorkDocument) -> bool {
    check_document(document).map_or(true, |rs| rs.iter().any(|r| !r.pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.code().parse::<TheoremId>().unwrap(), id);
        }
        assert!("TH-NOPE".parse::<TheoremId>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_cases() {
        for id in TheoremId::ALL {
            for r in verify(id, 1, 4, None) {
                assert!(
                    r.pass,
                    "{id} case {}: {}\n{}",
                    r.index,
                    r.detail,
                    r.document.to_json()
                );
            }
        }
    }

    #[test]
    fn generated_documents_are_deterministic() {
        for id in [TheoremId::PiElem, TheoremId::SumCauchy, TheoremId::PullPi] {
            assert_eq!(generate(id, 7, 3), generate(id, 7, 3));
            assert_ne!(generate(id, 7, 3), generate(id, 7, 4));
        }
    }

    #[test]
    fn documents_check_through_the_front_door() {
        let doc = generate(TheoremId::Hb, 3, 0);
        let parsed = WorkDocument::parse(&doc.to_json()).unwrap();
        let results = check_document(&parsed).unwrap();
        assert_eq!(results.len(), 1);
        assert!(results[0].pass, "{}", results[0]);
        assert!(!reproduces_failure(&parsed));
    }
}
