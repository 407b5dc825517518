//! Exact scalar abstraction.
//!
//! Every multiplicity, threshold and bound in this crate is an exact rational.
//! The algorithms are written once against [`ExactScalar`] and instantiated for
//! arbitrary-precision rationals ([`crate::Rat`]) or machine-word rationals
//! ([`crate::Rat64`], [`crate::Rat128`]) when the inputs are known to be small.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// An ordered field of exact rationals with a floor function.
pub trait ExactScalar:
    Clone + Ord + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// Largest integer not exceeding `self`.
    fn floor_val(&self) -> Self;
    /// Smallest integer not below `self`.
    fn ceil_val(&self) -> Self;
    fn is_integral(&self) -> bool;
    fn from_int(v: i64) -> Self;
    /// `num/den`; panics if `den == 0`.
    fn from_frac(num: i64, den: i64) -> Self;
    fn from_u64(v: u64) -> Self;
    /// Parses `p`, `p/q` or a decimal `a.b` exactly (a decimal is `ab/10^k`).
    fn parse_exact(s: &str) -> Result<Self, ParseRatError>;
    /// Lossy conversion, only for display and heuristics.
    fn approx_f64(&self) -> f64;

    fn half() -> Self {
        Self::from_frac(1, 2)
    }

    /// `x * n` is an integer, i.e. `x ∈ ℤ/n`.
    fn in_lattice(&self, n: u64) -> bool {
        (self.clone() * Self::from_u64(n)).is_integral()
    }
}

impl<I> ExactScalar for Ratio<I>
where
    I: Clone
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Debug
        + Display
        + Send
        + Sync
        + 'static,
{
    fn floor_val(&self) -> Self {
        self.floor()
    }

    fn ceil_val(&self) -> Self {
        self.ceil()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer fits scalar"))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(
            I::from_i64(num).expect("integer fits scalar"),
            I::from_i64(den).expect("integer fits scalar"),
        )
    }

    fn from_u64(v: u64) -> Self {
        Ratio::from_integer(I::from_u64(v).expect("integer fits scalar"))
    }

    fn parse_exact(s: &str) -> Result<Self, ParseRatError> {
        parse_ratio(s)
    }

    fn approx_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

fn parse_int<I: FromStr>(digits: &str, whole: &str) -> Result<I, ParseRatError> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRatError::Malformed(whole.to_string()));
    }
    digits
        .parse::<I>()
        .map_err(|_| ParseRatError::Malformed(whole.to_string()))
}

fn parse_ratio<I>(s: &str) -> Result<Ratio<I>, ParseRatError>
where
    I: Clone + Integer + Signed + FromStr,
{
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, t[1..].trim_start()),
        b'+' => (false, t[1..].trim_start()),
        _ => (false, t),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let p: I = parse_int(p.trim(), t)?;
        let q: I = parse_int(q.trim(), t)?;
        if q.is_zero() {
            return Err(ParseRatError::ZeroDenominator(t.to_string()));
        }
        Ratio::new(p, q)
    } else if let Some((a, b)) = body.split_once('.') {
        let a = if a.is_empty() { "0" } else { a };
        if b.is_empty() {
            return Err(ParseRatError::Malformed(t.to_string()));
        }
        let num: I = parse_int(&format!("{a}{b}"), t)?;
        let den: I = parse_int(&format!("1{}", "0".repeat(b.len())), t)?;
        Ratio::new(num, den)
    } else {
        Ratio::from_integer(parse_int(body, t)?)
    };
    Ok(if neg { -value } else { value })
}

/// Serde adapter: a scalar travels as its `p/q` string.
pub mod serde_scalar {
    use super::ExactScalar;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: ExactScalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T: ExactScalar, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let raw = String::deserialize(d)?;
        T::parse_exact(&raw).map_err(D::Error::custom)
    }
}

/// Serde adapter for a sequence of scalars.
pub mod serde_scalar_vec {
    use super::ExactScalar;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<'a, T, C, S>(v: C, s: S) -> Result<S::Ok, S::Error>
    where
        T: ExactScalar,
        C: IntoIterator<Item = &'a T>,
        S: Serializer,
    {
        let items: Vec<&T> = v.into_iter().collect();
        let mut seq = s.serialize_seq(Some(items.len()))?;
        for x in items {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T, C, D>(d: D) -> Result<C, D::Error>
    where
        T: ExactScalar,
        C: FromIterator<T>,
        D: Deserializer<'de>,
    {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| T::parse_exact(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, Rat64};

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(Rat::parse_exact("3/6").unwrap(), Rat::from_frac(1, 2));
        assert_eq!(Rat::parse_exact("-7").unwrap(), Rat::from_int(-7));
        assert_eq!(Rat::parse_exact("0.49").unwrap(), Rat::from_frac(49, 100));
        assert_eq!(Rat::parse_exact(".5").unwrap(), Rat::from_frac(1, 2));
        assert_eq!(Rat::parse_exact("-1.25").unwrap(), Rat::from_frac(-5, 4));
        assert_eq!(Rat64::parse_exact(" 2 / 3 ").unwrap(), Rat64::from_frac(2, 3));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(Rat::parse_exact(""), Err(ParseRatError::Empty));
        assert!(matches!(
            Rat::parse_exact("1/0"),
            Err(ParseRatError::ZeroDenominator(_))
        ));
        assert!(Rat::parse_exact("1e5").is_err());
        assert!(Rat::parse_exact("1.").is_err());
        assert!(Rat::parse_exact("0x10").is_err());
        assert!(Rat::parse_exact("1/-2").is_err());
    }

    #[test]
    fn floor_and_lattice() {
        let x = Rat::from_frac(-1, 3);
        assert_eq!(x.floor_val(), Rat::from_int(-1));
        assert_eq!(x.ceil_val(), Rat::from_int(0));
        assert!(Rat::from_frac(5, 6).in_lattice(12));
        assert!(!Rat::from_frac(5, 6).in_lattice(4));
    }
}
