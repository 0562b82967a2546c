//! Exact rational scalars and the `"p/q"` text form used by documents.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float. Panics on NaN or infinity.
pub fn from_f64(f: f64) -> Rational {
    Rational::from_float(f).expect("finite float")
}

/// Renders `q` as `"p/q"`, always with an explicit denominator.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`; rejects a zero denominator.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational `{s}`")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational `{s}`")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    if denom.sign() == Sign::Minus {
        return Err(Error::Parse(format!("negative denominator in `{s}`")));
    }
    Ok(Rational::new(numer, denom))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of `q` when it is itself rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

/// Rational bounds `lo <= sqrt(q) <= hi` with `hi - lo <= 10^-digits`.
pub fn sqrt_bounds(q: &Rational, digits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    if let Some(r) = exact_sqrt(q) {
        return (r.clone(), r);
    }
    let scale = BigInt::from(10u32).pow(digits);
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = q.numer() * q.denom();
    let root = (&nd * &scale * &scale).sqrt();
    let denom = q.denom() * &scale;
    let lo = Rational::new(root.clone(), denom.clone());
    let hi = Rational::new(root + BigInt::one(), denom);
    (lo, hi)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    it.into_iter()
        .map(|q| q.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/1").unwrap(), int(3));
        assert_eq!(parse("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert_eq!(format(&rat(-3, 2)), "-3/2");
        assert_eq!(format(&int(5)), "5/1");
        assert!(matches!(parse("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse("1/-2"), Err(Error::Parse(_))));
        assert!(matches!(parse("x"), Err(Error::Parse(_))));
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&rat(25, 9)), Some(rat(5, 3)));
        assert_eq!(exact_sqrt(&int(2)), None);
        let (lo, hi) = sqrt_bounds(&int(2), 12);
        assert!(&lo * &lo <= int(2) && int(2) <= &hi * &hi);
        assert!(to_f64(&(hi - lo)) <= 1e-12);
    }
}
