//! Exact pointwise crossnorms of finite atomic `L⁰`-modules.
//!
//! A module lives over a finite measure space; each atom carries a
//! finite-dimensional normed fiber. Norms, operator norms and the projective
//! and injective tensor norms are computed atom by atom, exactly over the
//! rationals wherever the fibers are polyhedral.

pub mod document;
pub mod error;
pub mod fiber;
pub mod hom;
pub mod linalg;
pub mod measure;
pub mod module;
pub mod pullback;
pub mod rational;
pub mod sequences;
pub mod simplex;
pub mod summability;
pub mod svd;
pub mod tensor;
pub mod theorems;

pub use document::{check_document, CaseResult, WorkDocument, Workspace};
pub use error::{Error, Result};
pub use fiber::{Exponent, FiberVector, NormDescriptor, NormValue};
pub use hom::{BilinearForm, Homomorphism};
pub use linalg::Matrix;
pub use measure::{L0Function, MeasureSpace};
pub use module::{Element, ModuleSpec, NormField, Submodule};
pub use pullback::AtomMap;
pub use rational::Rational;
pub use summability::{Coefficients, CountableFamily, TailBound, Verdict};
pub use tensor::{Crossnorm, Tensor};
pub use theorems::TheoremId;
