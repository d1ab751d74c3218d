//! Exact arc weights and the extended (possibly infinite) values of φ.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, Signed, Zero};

/// Exact rational weight.
pub type Rational = Ratio<i128>;

/// Error produced when a weight literal cannot be read.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid weight literal `{literal}`: {reason}")]
pub struct WeightParseError {
    pub literal: String,
    pub reason: &'static str,
}

fn bad(literal: &str, reason: &'static str) -> WeightParseError {
    WeightParseError {
        literal: literal.to_string(),
        reason,
    }
}

/// Parses `7`, `-3`, `2.25`, `.5` or `3/4` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, WeightParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(bad(text, "empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| bad(text, "bad numerator"))?;
        let d: i128 = den.trim().parse().map_err(|_| bad(text, "bad denominator"))?;
        if d == 0 {
            return Err(bad(text, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad(text, "no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad(text, "not a decimal number"));
    }
    let ten = 10i128;
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(ten)
            .and_then(|v| v.checked_add(i128::from(b - b'0')))
            .ok_or_else(|| bad(text, "too many digits"))?;
    }
    let exp = u32::try_from(frac_part.len()).map_err(|_| bad(text, "too many digits"))?;
    let denom = ten
        .checked_pow(exp)
        .ok_or_else(|| bad(text, "too many digits"))?;
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Renders a rational as `7` or `3/2`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Least common multiple of the denominators, failing on overflow.
pub(crate) fn common_denominator<'a>(
    values: impl IntoIterator<Item = &'a Rational>,
) -> Option<i128> {
    let mut acc: i128 = 1;
    for v in values {
        let d = *v.denom();
        let g = acc.gcd(&d);
        acc = (acc / g).checked_mul(d)?;
    }
    Some(acc)
}

/// Converts `value` to an integer numerator over `scale`.
pub(crate) fn scale_to(value: &Rational, scale: i128) -> Option<i128> {
    let factor = scale / value.denom();
    value.numer().checked_mul(factor)
}

/// A value of φ: either a finite rational or +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtWeight {
    Finite(Rational),
    Infinite,
}

impl ExtWeight {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtWeight::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            ExtWeight::Finite(v) => Some(*v),
            ExtWeight::Infinite => None,
        }
    }

    /// Extended subtraction. `∞ − finite = ∞`; `∞ − ∞` and `finite − ∞`
    /// have no value.
    pub fn checked_sub(&self, rhs: &ExtWeight) -> Option<ExtWeight> {
        match (self, rhs) {
            (ExtWeight::Finite(a), ExtWeight::Finite(b)) => Some(ExtWeight::Finite(a - b)),
            (ExtWeight::Infinite, ExtWeight::Finite(_)) => Some(ExtWeight::Infinite),
            _ => None,
        }
    }

    pub fn checked_add(&self, rhs: &ExtWeight) -> Option<ExtWeight> {
        match (self, rhs) {
            (ExtWeight::Finite(a), ExtWeight::Finite(b)) => a.checked_add(b).map(ExtWeight::Finite),
            _ => Some(ExtWeight::Infinite),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtWeight::Finite(v) if v.is_negative())
    }

    pub fn zero() -> Self {
        ExtWeight::Finite(Rational::zero())
    }
}

impl PartialOrd for ExtWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtWeight::Finite(a), ExtWeight::Finite(b)) => a.cmp(b),
            (ExtWeight::Finite(_), ExtWeight::Infinite) => Ordering::Less,
            (ExtWeight::Infinite, ExtWeight::Finite(_)) => Ordering::Greater,
            (ExtWeight::Infinite, ExtWeight::Infinite) => Ordering::Equal,
        }
    }
}

impl From<Rational> for ExtWeight {
    fn from(v: Rational) -> Self {
        ExtWeight::Finite(v)
    }
}

impl fmt::Display for ExtWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtWeight::Finite(v) => f.write_str(&format_rational(v)),
            ExtWeight::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtWeight {
    type Err = WeightParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtWeight::Infinite),
            other => parse_rational(other).map(ExtWeight::Finite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert_eq!(parse_rational("-3").unwrap(), r(-3, 1));
        assert_eq!(parse_rational("2.25").unwrap(), r(9, 4));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("3/4").unwrap(), r(3, 4));
        assert_eq!(parse_rational("6/-4").unwrap(), r(-3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", ".", "1e3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats_round_trip() {
        for s in ["7", "3/2", "-1/3", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn extended_arithmetic() {
        let inf = ExtWeight::Infinite;
        let seven = ExtWeight::Finite(r(7, 1));
        assert_eq!(inf.checked_sub(&seven), Some(ExtWeight::Infinite));
        assert_eq!(inf.checked_sub(&inf), None);
        assert_eq!(seven.checked_sub(&inf), None);
        assert!(seven < inf);
        assert_eq!(inf.to_string(), "inf");
        assert_eq!("inf".parse::<ExtWeight>().unwrap(), inf);
        assert_eq!("3/2".parse::<ExtWeight>().unwrap(), ExtWeight::Finite(r(3, 2)));
    }

    #[test]
    fn common_denominator_is_lcm() {
        let vals = [r(1, 4), r(1, 6), r(2, 1)];
        assert_eq!(common_denominator(vals.iter()), Some(12));
        assert_eq!(scale_to(&r(1, 6), 12), Some(2));
    }
}
