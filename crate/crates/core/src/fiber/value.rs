use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{exact_sqrt, format, from_f64, sqrt_bounds, to_f64, Rational};

/// Tolerance attached to floating square roots of Euclidean quantities.
pub const EUCLIDEAN_TOL: f64 = 1e-9;
/// Tolerance attached to SVD-derived values (spectral, nuclear).
pub const SPECTRAL_TOL: f64 = 1e-7;

/// A nonnegative norm value, exact whenever the fiber geometry allows it.
#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Exact(Rational),
    /// `sqrt(s)` for a rational `s` that is not a perfect square.
    Sqrt(Rational),
    Approx {
        value: f64,
        tol: f64,
    },
    /// Certified enclosure `lower <= value <= upper`.
    Bounded {
        lower: Rational,
        upper: Rational,
    },
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(q) => write!(f, "{}", format(q)),
            Self::Sqrt(s) => write!(f, "sqrt({}) ~ {:.12}", format(s), self.to_f64()),
            Self::Approx { value, tol } => write!(f, "{value:.12} +- {tol:e}"),
            Self::Bounded { lower, upper } => {
                write!(f, "[{:.12}, {:.12}]", to_f64(lower), to_f64(upper))
            }
        }
    }
}

impl NormValue {
    pub fn zero() -> Self {
        Self::Exact(Rational::zero())
    }

    pub fn from_squared(s: Rational) -> Self {
        debug_assert!(!s.is_negative());
        match exact_sqrt(&s) {
            Some(r) => Self::Exact(r),
            None => Self::Sqrt(s),
        }
    }

    pub fn approx(value: f64, tol: f64) -> Self {
        Self::Approx { value, tol }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Self::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// The exact square, when known.
    pub fn squared(&self) -> Option<Rational> {
        match self {
            Self::Exact(q) => Some(q * q),
            Self::Sqrt(s) => Some(s.clone()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(q) => to_f64(q),
            Self::Sqrt(s) => to_f64(s).sqrt(),
            Self::Approx { value, .. } => *value,
            Self::Bounded { lower, upper } => (to_f64(lower) + to_f64(upper)) / 2.0,
        }
    }

    pub fn tol(&self) -> f64 {
        match self {
            Self::Exact(_) => 0.0,
            Self::Sqrt(_) => EUCLIDEAN_TOL,
            Self::Approx { tol, .. } => *tol,
            Self::Bounded { lower, upper } => (to_f64(upper) - to_f64(lower)) / 2.0,
        }
    }

    /// A rational `u` with `self <= u`.
    pub fn upper_bound(&self) -> Rational {
        match self {
            Self::Exact(q) => q.clone(),
            Self::Sqrt(s) => sqrt_bounds(s, crate::module::SQRT_DIGITS).1,
            Self::Approx { value, tol } => {
                from_f64((value + tol) * (1.0 + f64::EPSILON) + f64::MIN_POSITIVE)
            }
            Self::Bounded { upper, .. } => upper.clone(),
        }
    }

    pub fn is_exact_form(&self) -> bool {
        matches!(self, Self::Exact(_) | Self::Sqrt(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Exact(q) => q.is_zero(),
            Self::Sqrt(_) => false,
            Self::Approx { value, tol } => value.abs() <= *tol,
            Self::Bounded { upper, .. } => upper.is_zero(),
        }
    }

    /// Exact equality, decidable when both sides carry exact squares.
    pub fn exact_eq(&self, other: &Self) -> Option<bool> {
        Some(self.squared()? == other.squared()?)
    }

    /// Ordering that holds for certain, if one can be established.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (self.squared(), other.squared()) {
            return Some(a.cmp(&b));
        }
        let (lo_a, hi_a) = self.interval();
        let (lo_b, hi_b) = other.interval();
        if hi_a < lo_b {
            Some(Ordering::Less)
        } else if hi_b < lo_a {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certain ordering if available, else the floating comparison.
    pub fn cmp_lenient(&self, other: &Self) -> Ordering {
        self.compare(other)
            .unwrap_or_else(|| self.to_f64().total_cmp(&other.to_f64()))
    }

    fn interval(&self) -> (f64, f64) {
        match self {
            Self::Bounded { lower, upper } => (to_f64(lower), to_f64(upper)),
            _ => {
                let v = self.to_f64();
                let t = self.tol();
                (v - t, v + t)
            }
        }
    }

    /// Exact when both sides are exact, otherwise agreement within `tol`
    /// (enclosures must overlap the other value widened by `tol`).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if let Some(eq) = self.exact_eq(other) {
            if eq {
                return true;
            }
            if matches!((self, other), (Self::Exact(_), Self::Exact(_))) {
                return false;
            }
        }
        let (lo_a, hi_a) = self.bounded_interval();
        let (lo_b, hi_b) = other.bounded_interval();
        lo_a <= hi_b + tol && lo_b <= hi_a + tol
    }

    fn bounded_interval(&self) -> (f64, f64) {
        match self {
            Self::Bounded { lower, upper } => (to_f64(lower), to_f64(upper)),
            _ => {
                let v = self.to_f64();
                (v, v)
            }
        }
    }

    /// `self <= other`, exactly when both sides are exact and within `tol`
    /// otherwise.
    pub fn le_within(&self, other: &Self, tol: f64) -> bool {
        if let (Some(a), Some(b)) = (self.squared(), other.squared()) {
            return a <= b;
        }
        let (lo_a, _) = self.bounded_interval();
        let (_, hi_b) = other.bounded_interval();
        lo_a <= hi_b + tol
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a + b),
            (Self::Exact(a), Self::Bounded { lower, upper })
            | (Self::Bounded { lower, upper }, Self::Exact(a)) => Self::Bounded {
                lower: lower + a,
                upper: upper + a,
            },
            (
                Self::Bounded {
                    lower: l1,
                    upper: u1,
                },
                Self::Bounded {
                    lower: l2,
                    upper: u2,
                },
            ) => Self::Bounded {
                lower: l1 + l2,
                upper: u1 + u2,
            },
            _ => Self::Approx {
                value: self.to_f64() + other.to_f64(),
                tol: self.tol() + other.tol(),
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a * b),
            _ => match (self.squared(), other.squared()) {
                (Some(a), Some(b)) => Self::from_squared(a * b),
                _ => {
                    let (a, b) = (self.to_f64(), other.to_f64());
                    Self::Approx {
                        value: a * b,
                        tol: a * other.tol() + b * self.tol() + self.tol() * other.tol(),
                    }
                }
            },
        }
    }

    /// Multiplication by `|q|`.
    pub fn scale(&self, q: &Rational) -> Self {
        let q = q.abs();
        match self {
            Self::Exact(a) => Self::Exact(a * &q),
            Self::Sqrt(s) => Self::from_squared(s * &q * &q),
            Self::Approx { value, tol } => {
                let f = to_f64(&q);
                Self::Approx {
                    value: value * f,
                    tol: tol * f,
                }
            }
            Self::Bounded { lower, upper } => Self::Bounded {
                lower: lower * &q,
                upper: upper * &q,
            },
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.cmp_lenient(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn max_of(values: impl IntoIterator<Item = Self>) -> Self {
        values.into_iter().fold(Self::zero(), Self::max)
    }

    pub fn sum_of(values: impl IntoIterator<Item = Self>) -> Self {
        values.into_iter().fold(Self::zero(), |acc, v| acc.add(&v))
    }

    /// Whether `q` is consistent with this value (exact, enclosure, or `tol`).
    pub fn matches(&self, q: &Rational, tol: f64) -> bool {
        match self {
            Self::Exact(a) => a == q,
            Self::Bounded { lower, upper } => lower <= q && q <= upper,
            _ => self.approx_eq(&Self::Exact(q.clone()), tol),
        }
    }
}
