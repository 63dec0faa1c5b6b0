//! Exact rational scalars.
//!
//! Every size, bid, load and cover in this crate is a [`Rational`]. Values are
//! parsed from `"p"`, `"p/q"` or finite decimal strings and always printed in
//! reduced `"p/q"` form (plain `"p"` when the denominator is one).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.375"`.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = parse_integer(n).ok_or_else(bad)?;
        let denom: BigInt = parse_integer(d).ok_or_else(bad)?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    Ok(Rational::new(numer, denom))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Reduced `"p/q"`, or `"p"` for integers.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// Lossy conversion for human-facing summaries only.
pub fn approx(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn min<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

/// `base^exp` for a possibly negative exponent. `base` must be non-zero.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut out = Rational::one();
    let step = if exp >= 0 { base.clone() } else { base.recip() };
    for _ in 0..exp.unsigned_abs() {
        out *= &step;
    }
    out
}

/// Smallest integer `e` with `base^e >= value`, for `base > 1` and `value > 0`.
pub fn ceil_log(base: &Rational, value: &Rational) -> i64 {
    debug_assert!(base > &Rational::one() && value.is_positive());
    let mut e = 0i64;
    let mut power = Rational::one();
    if *value <= power {
        // walk down while the next lower power still reaches `value`
        loop {
            let lower = &power / base;
            if lower < *value {
                return e;
            }
            power = lower;
            e -= 1;
        }
    }
    while power < *value {
        power *= base;
        e += 1;
    }
    e
}

/// Rational approximation of `sqrt(value)` with relative error below `2^-20`.
///
/// Computed as `isqrt(floor(value * 4^k)) / 2^k` with `k` large enough that
/// the integer root has at least 21 significant bits.
pub fn sqrt_approx(value: &Rational) -> Rational {
    if !value.is_positive() {
        return Rational::zero();
    }
    let mut k = 0u32;
    loop {
        let scale = BigInt::one() << (2 * k);
        let scaled = (value.numer() * &scale).div_floor(value.denom());
        if scaled.bits() >= 44 {
            let root = scaled.sqrt();
            return Rational::new(root, BigInt::one() << k);
        }
        k += 8;
    }
}

/// Serde adapters that keep rationals as exact strings on the wire.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::Rational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&super::super::format(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| super::super::parse(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod opt {
        use super::super::Rational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&super::super::format(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| super::super::parse(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_three_forms() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("7.").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1e3", "1.2.3", "--1", "1/", "/2", "."] {
            assert!(parse(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format(&ratio(4, 8)), "1/2");
        assert_eq!(format(&ratio(4, 2)), "2");
        assert_eq!(format(&ratio(-3, 9)), "-1/3");
    }

    #[test]
    fn ceil_log_matches_power_iteration() {
        let b = ratio(5, 4);
        assert_eq!(ceil_log(&b, &int(2)), 4);
        assert_eq!(ceil_log(&b, &int(4)), 7);
        assert_eq!(ceil_log(&b, &int(1)), 0);
        assert_eq!(ceil_log(&b, &ratio(5, 4)), 1);
        assert_eq!(ceil_log(&b, &ratio(4, 5)), -1);
        assert_eq!(ceil_log(&b, &ratio(1, 2)), -3);
        assert_eq!(ceil_log(&int(2), &int(2)), 1);
    }

    #[test]
    fn sqrt_is_tight() {
        for v in [ratio(1, 6), int(2), ratio(16, 9), ratio(1, 1_000_000_007), int(123456789)] {
            let r = sqrt_approx(&v);
            let sq = &r * &r;
            let rel = (&sq - &v).abs() / &v;
            // relative error of the root < 2^-20 means the square is within ~2^-19
            assert!(rel < ratio(1, 1 << 19), "sqrt({v}) = {r}");
        }
        assert_eq!(sqrt_approx(&ratio(9, 4)), ratio(3, 2));
    }
}
