//! Countable families `{v_i}_{i >= 1}` with declared per-atom tail bounds.
//!
//! A bound `τ(n)` promises `|Σ_{i ∈ G} v_i| <= τ(n)` for every finite
//! `G ⊆ {n+1, n+2, ...}` at its atom. Checks validate the promise on the
//! contiguous windows inside a finite horizon; sums stop at the first `n`
//! with `τ(n) <= tol`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fiber::{FiberVector, NormValue};
use crate::hom::Homomorphism;
use crate::module::{check_module, Element, ModuleSpec, NormField};
use crate::rational::Rational;

/// Upper limit on the number of terms a sum may add up.
pub const MAX_TERMS: u64 = 1_000_000;

/// Smallest horizon at which the divergence witness can be observed.
pub const DIVERGENCE_HORIZON: u64 = 15;

/// Closed-form tail bound for one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailBound {
    /// `c·r^n` with `0 <= r < 1`.
    Geometric { c: Rational, r: Rational },
    /// `c·n^(1-p)` for `n >= 1`, integer `p >= 2`.
    PSeries { c: Rational, p: u32 },
    /// Terms vanish beyond `len`: `c` for `n < len`, `0` afterwards.
    Finite { len: u64, c: Rational },
    /// The family is declared not to be summable here.
    Divergent,
}

impl TailBound {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Geometric { c, r } => {
                !c.is_negative() && !r.is_negative() && r < &Rational::one()
            }
            Self::PSeries { c, p } => !c.is_negative() && *p >= 2,
            Self::Finite { c, .. } => !c.is_negative(),
            Self::Divergent => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid tail bound {self:?}")))
        }
    }

    /// `τ(n)`; `None` where the bound is infinite.
    pub fn tau(&self, n: u64) -> Option<Rational> {
        match self {
            Self::Geometric { c, r } => Some(c * pow(r, n)),
            Self::PSeries { c, p } => {
                (n >= 1).then(|| c / pow(&Rational::from_integer(n.into()), u64::from(p - 1)))
            }
            Self::Finite { len, c } => Some(if n < *len {
                c.clone()
            } else {
                Rational::zero()
            }),
            Self::Divergent => None,
        }
    }

    /// First `n` with `τ(n) <= tol`.
    pub fn terms_for(&self, tol: &Rational) -> Option<u64> {
        let estimate = match self {
            Self::Divergent => return None,
            Self::Finite { len, c } => return Some(if c <= tol { 0 } else { *len }),
            _ if self.tau(0).is_some_and(|t| &t <= tol) => return Some(0),
            Self::Geometric { r, .. } if r.is_zero() => 1.0,
            Self::Geometric { c, r } => {
                let (c, r, t) = (to_f(c), to_f(r), to_f(tol));
                ((t / c).ln() / r.ln()).ceil()
            }
            Self::PSeries { c, p } => (to_f(c) / to_f(tol)).powf(1.0 / f64::from(p - 1)).ceil(),
        };
        if !estimate.is_finite() || estimate > MAX_TERMS as f64 + 2.0 {
            return Some(MAX_TERMS + 1);
        }
        let mut n = estimate.max(1.0) as u64;
        let within = |n: u64| self.tau(n).is_some_and(|t| &t <= tol);
        while n > 1 && within(n - 1) {
            n -= 1;
        }
        while !within(n) {
            n += 1;
        }
        Some(n)
    }

    /// The bound multiplied by `s >= 0`.
    pub fn scaled(&self, s: &Rational) -> Self {
        match self {
            Self::Geometric { c, r } => Self::Geometric {
                c: c * s,
                r: r.clone(),
            },
            Self::PSeries { c, p } => Self::PSeries { c: c * s, p: *p },
            Self::Finite { len, c } => Self::Finite {
                len: *len,
                c: c * s,
            },
            Self::Divergent => Self::Divergent,
        }
    }
}

fn pow(q: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut base = q.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

fn to_f(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Scalar coefficient sequences `a_i`, `i >= 1`, for families `a_i·e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    /// `a·r^i`.
    Geometric { a: Rational, r: Rational },
    /// `a / i^p`.
    PSeries { a: Rational, p: u32 },
    /// `a_1, ..., a_len`, then zeros.
    Finite(Vec<Rational>),
}

impl Coefficients {
    pub fn coefficient(&self, i: u64) -> Rational {
        match self {
            Self::Geometric { a, r } => a * pow(r, i),
            Self::PSeries { a, p } => a / pow(&Rational::from_integer(i.into()), u64::from(*p)),
            Self::Finite(list) => usize::try_from(i)
                .ok()
                .and_then(|i| i.checked_sub(1))
                .and_then(|k| list.get(k))
                .cloned()
                .unwrap_or_default(),
        }
    }

    /// Tail bound of `a_i·e` at an atom where `|e| <= norm`.
    pub fn tail_bound(&self, norm: &Rational) -> Result<TailBound> {
        if norm.is_zero() {
            return Ok(TailBound::Finite {
                len: 0,
                c: Rational::zero(),
            });
        }
        let bound = match self {
            Self::Geometric { a, r } => {
                let r = r.abs();
                if r >= Rational::one() {
                    if a.is_zero() {
                        return Ok(TailBound::Finite {
                            len: 0,
                            c: Rational::zero(),
                        });
                    }
                    return Ok(TailBound::Divergent);
                }
                TailBound::Geometric {
                    c: a.abs() * norm * &r / (Rational::one() - &r),
                    r,
                }
            }
            Self::PSeries { p: 0, .. } => {
                return Err(Error::InvalidInput(
                    "p-series exponent must be positive".into(),
                ))
            }
            Self::PSeries { a, .. } if a.is_zero() => TailBound::Finite {
                len: 0,
                c: Rational::zero(),
            },
            Self::PSeries { p: 1, .. } => TailBound::Divergent,
            Self::PSeries { a, p } => TailBound::PSeries {
                c: a.abs() * norm / Rational::from_integer((p - 1).into()),
                p: *p,
            },
            Self::Finite(list) => TailBound::Finite {
                len: list.len() as u64,
                c: list.iter().map(|a| a.abs() * norm).sum(),
            },
        };
        Ok(bound)
    }
}

pub type Generator = Arc<dyn Fn(u64) -> Element + Send + Sync>;

/// `{v_i}_{i >= 1}` in a module, with one tail bound per atom.
#[derive(Clone)]
pub struct CountableFamily {
    module: Arc<ModuleSpec>,
    generator: Generator,
    bounds: Vec<TailBound>,
}

impl fmt::Debug for CountableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountableFamily")
            .field("module", &self.module)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Summable,
    NotSummable,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Summable => "summable",
            Self::NotSummable => "not_summable",
            Self::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summation {
    pub sum: Element,
    /// Number of terms added.
    pub terms: u64,
    /// `τ(terms)` per atom.
    pub error: Vec<Rational>,
}

impl CountableFamily {
    pub fn new(
        module: Arc<ModuleSpec>,
        generator: Generator,
        bounds: Vec<TailBound>,
    ) -> Result<Self> {
        if bounds.len() != module.space().len() {
            return Err(Error::DimensionMismatch {
                expected: module.space().len(),
                found: bounds.len(),
            });
        }
        for b in &bounds {
            b.validate()?;
        }
        Ok(Self {
            module,
            generator,
            bounds,
        })
    }

    /// `v_i = a_i·e` with bounds derived from `|e|`.
    pub fn from_template(element: Element, coefficients: Coefficients) -> Result<Self> {
        let bounds = element
            .norm()
            .values()
            .iter()
            .map(|v| coefficients.tail_bound(&v.upper_bound()))
            .collect::<Result<Vec<_>>>()?;
        let module = element.module().clone();
        let generator: Generator = Arc::new(move |i| element.scale(&coefficients.coefficient(i)));
        Self::new(module, generator, bounds)
    }

    pub fn module(&self) -> &Arc<ModuleSpec> {
        &self.module
    }

    pub fn bounds(&self) -> &[TailBound] {
        &self.bounds
    }

    pub fn with_bounds(&self, bounds: Vec<TailBound>) -> Result<Self> {
        Self::new(self.module.clone(), self.generator.clone(), bounds)
    }

    /// `v_i`, `i >= 1`.
    pub fn term(&self, i: u64) -> Result<Element> {
        let v = (self.generator)(i);
        check_module(&self.module, v.module())?;
        Ok(v)
    }

    pub fn partial_sum(&self, n: u64) -> Result<Element> {
        (1..=n).try_fold(Element::zero(self.module.clone()), |acc, i| {
            acc.add(&self.term(i)?)
        })
    }

    /// `Σ_{i <= n} |v_i|`.
    pub fn partial_norm_sum(&self, n: u64) -> Result<NormField> {
        let mut acc = NormField::new(
            self.module.space().clone(),
            vec![NormValue::zero(); self.module.space().len()],
        )?;
        for i in 1..=n {
            acc = acc.zip_with(&self.term(i)?.norm(), NormValue::add)?;
        }
        Ok(acc)
    }

    /// The family `T(v_i)` with bounds scaled by `|T|`.
    pub fn image(&self, t: &Homomorphism) -> Result<Self> {
        check_module(&self.module, t.source())?;
        let norm = t.pointwise_norm()?;
        let bounds = self
            .bounds
            .iter()
            .zip(norm.values())
            .map(|(b, n)| b.scaled(&n.upper_bound()))
            .collect();
        let inner = self.generator.clone();
        let target = t.target().clone();
        let t = t.clone();
        let generator: Generator = Arc::new(move |i| {
            t.apply(&inner(i))
                .expect("generator stays in the source module")
        });
        Self::new(target, generator, bounds)
    }

    /// Per-atom verdicts from the terms `1..=horizon`.
    pub fn cauchy_check(&self, horizon: u64) -> Result<Vec<Verdict>> {
        if horizon == 0 {
            return Err(Error::InvalidInput("horizon must be at least 1".into()));
        }
        let terms = (1..=horizon)
            .map(|i| self.term(i))
            .collect::<Result<Vec<_>>>()?;
        (0..self.module.space().len())
            .map(|atom| self.atom_verdict(atom, &terms))
            .collect()
    }

    fn atom_verdict(&self, atom: usize, terms: &[Element]) -> Result<Verdict> {
        let desc = self.module.fiber(atom);
        let fibers: Vec<&FiberVector> = terms.iter().map(|t| t.fiber(atom)).collect();
        let bound = &self.bounds[atom];
        if *bound == TailBound::Divergent {
            return Ok(if divergence_witness(desc, &fibers)? {
                Verdict::NotSummable
            } else {
                Verdict::Unknown
            });
        }
        let h = fibers.len();
        for n in 0..h {
            let Some(tau) = bound.tau(n as u64) else {
                continue;
            };
            let tau = NormValue::Exact(tau);
            let mut window = FiberVector::zeros(desc.dim());
            for f in &fibers[n..] {
                window = window.add(f);
                let norm = desc.norm(&window)?;
                if !norm.le_within(&tau, norm.tol()) {
                    return Err(Error::BoundViolated {
                        atom: self.module.space().atom_id(atom).to_string(),
                        index: n as u64,
                    });
                }
            }
        }
        Ok(Verdict::Summable)
    }

    /// Partial sum up to the first `n` with `τ(n) <= tol` on every atom.
    pub fn sum(&self, tol: &Rational) -> Result<Summation> {
        let mut terms = 0;
        for (atom, b) in self.bounds.iter().enumerate() {
            if self.module.fiber(atom).dim() == 0 {
                continue;
            }
            let n = b
                .terms_for(tol)
                .ok_or_else(|| Error::NotSummable(self.module.space().atom_id(atom).to_string()))?;
            terms = terms.max(n);
        }
        if terms > MAX_TERMS {
            return Err(Error::TooManyTerms(MAX_TERMS));
        }
        let error = self
            .bounds
            .iter()
            .map(|b| b.tau(terms).unwrap_or_default())
            .collect();
        Ok(Summation {
            sum: self.partial_sum(terms)?,
            terms,
            error,
        })
    }
}

/// Terms positively collinear and nonzero, with each of the dyadic blocks
/// `[2^k, 2^(k+1))`, `k = 1..=3`, at least half as large as the first term.
/// Under collinearity block norms add, so the partial sums grow without
/// bound at the rate of a harmonic series.
fn divergence_witness(
    desc: &crate::fiber::NormDescriptor,
    fibers: &[&FiberVector],
) -> Result<bool> {
    if (fibers.len() as u64) < DIVERGENCE_HORIZON {
        return Ok(false);
    }
    let Some(direction) = fibers.iter().find(|f| !f.is_zero()) else {
        return Ok(false);
    };
    let pivot = direction
        .iter()
        .position(|q| !q.is_zero())
        .expect("nonzero direction");
    let collinear = fibers.iter().all(|f| {
        let lambda = &f[pivot] / &direction[pivot];
        !lambda.is_negative() && ***f == *direction.scale(&lambda)
    });
    if !collinear || fibers[0].is_zero() {
        return Ok(false);
    }
    let block = |from: usize, to: usize| {
        let s = fibers[from - 1..to - 1]
            .iter()
            .fold(FiberVector::zeros(desc.dim()), |acc, f| acc.add(f));
        desc.norm(&s)
    };
    let first = block(1, 2)?;
    for k in 1..=3u32 {
        let b = block(1 << k, 1 << (k + 1))?;
        if !first.le_within(&b.add(&b), first.tol() + b.tol()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomCommuteReport {
    pub mapped_sum: Element,
    pub sum_of_images: Element,
    /// `|T(Σ v_i) - Σ T(v_i)|`.
    pub difference: NormField,
    /// `|T|·err + err'` per atom.
    pub allowance: Vec<Rational>,
    pub holds: bool,
}

/// Compares `T(Σ v_i)` with `Σ T(v_i)`, both summed to `tol`.
pub fn hom_commute_check(
    family: &CountableFamily,
    t: &Homomorphism,
    tol: &Rational,
) -> Result<HomCommuteReport> {
    let norm = t.pointwise_norm()?;
    let direct = family.sum(tol)?;
    let image = family.image(t)?.sum(tol)?;
    let mapped_sum = t.apply(&direct.sum)?;
    let difference = mapped_sum.sub(&image.sum)?.norm();
    let allowance: Vec<Rational> = norm
        .values()
        .iter()
        .zip(direct.error.iter().zip(&image.error))
        .map(|(n, (e1, e2))| n.upper_bound() * e1 + e2)
        .collect();
    let holds = difference
        .values()
        .iter()
        .zip(&allowance)
        .all(|(d, a)| d.le_within(&NormValue::Exact(a.clone()), d.tol()));
    Ok(HomCommuteReport {
        mapped_sum,
        sum_of_images: image.sum,
        difference,
        allowance,
        holds,
    })
}
