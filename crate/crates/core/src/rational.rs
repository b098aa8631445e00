//! Small helpers around [`BigRational`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Renders a rational as `p/q` with `q > 0` and `gcd(p, q) = 1`, even when `q = 1`.
pub fn to_pq(x: &Q) -> String {
    // BigRational is kept reduced with a positive denominator.
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse `{}` as a rational number", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `p/q` or a plain integer `p`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
        None => BigInt::from_str(s).map(Q::from_integer).map_err(|_| err()),
    }
}

pub fn parse_q_list(s: &str) -> Result<Vec<Q>, ParseRationalError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn sum<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Q {
    xs.into_iter().fold(Q::zero(), |acc, x| acc + x)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_integral(x: &Q) -> bool {
    x.is_integer()
}

/// Integer value of an integral rational that fits in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}

/// Scales a nonzero vector so its first nonzero entry has absolute value one.
pub fn normalize_ray(v: &mut [Q]) {
    if let Some(pivot) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        for x in v.iter_mut() {
            *x = &*x / &pivot;
        }
    }
}

/// Positive multiple of `v` with coprime integer entries (zero stays zero).
pub fn primitive_integer(v: &[Q]) -> Vec<Q> {
    let k = Q::from_integer(common_denominator(v));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &k).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_format_is_reduced_with_positive_denominator() {
        assert_eq!(to_pq(&frac(6, -4)), "-3/2");
        assert_eq!(to_pq(&q(3)), "3/1");
        assert_eq!(to_pq(&Q::zero()), "0/1");
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_q("6/5").unwrap(), frac(6, 5));
        assert_eq!(parse_q(" -2 ").unwrap(), q(-2));
        assert_eq!(parse_q_list("1/3,1/3").unwrap(), vec![frac(1, 3); 2]);
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn common_denominator_is_lcm() {
        let xs = [frac(1, 4), frac(1, 6), q(2)];
        assert_eq!(common_denominator(&xs), BigInt::from(12));
    }

    #[test]
    fn primitive_integer_clears_and_divides() {
        assert_eq!(
            primitive_integer(&[frac(1, 2), frac(-3, 4), q(0)]),
            vec![q(2), q(-3), q(0)]
        );
        assert_eq!(primitive_integer(&[q(4), q(6)]), vec![q(2), q(3)]);
    }
}
