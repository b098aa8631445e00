//! JSON encodings of core types. Rationals are `"p/q"`, indices are 1-based.

use parabolic_core::rational::to_pq;
use parabolic_core::{DivisorClass, DoubleSequence, Error, Wall, Q};
use serde_json::{json, Value};

pub fn rational(x: &Q) -> Value {
    Value::String(to_pq(x))
}

pub fn rationals(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn one_based(indices: &[usize]) -> Value {
    indices.iter().map(|i| i + 1).collect()
}

/// Integers that fit in `u64` as numbers, larger ones as decimal strings.
pub fn big_count(s: String) -> Value {
    s.parse::<u64>().map_or(Value::String(s), Value::from)
}

pub fn wall(w: &Wall) -> Value {
    json!({ "I": one_based(&w.indices()), "m": w.m() })
}

pub fn class(d: &DivisorClass) -> Value {
    json!({ "b": rationals(&d.b), "t": rational(&d.t) })
}

pub fn sequence(ds: &DoubleSequence) -> Value {
    json!({ "top": ds.top, "bottom": ds.bottom, "level": ds.level })
}

/// The variant name of an error, without payload.
fn kind(e: &Error) -> String {
    let debug = match e {
        Error::Conformal(x) => format!("{x:?}"),
        Error::Weights(x) => format!("{x:?}"),
        Error::Cones(x) => format!("{x:?}"),
        Error::Models(x) => format!("{x:?}"),
    };
    let mut inner = debug.as_str();
    // Follow single-field wrappers such as `Weights(OnWall)`.
    while let Some(rest) = inner.split_once('(').map(|(_, r)| r) {
        let head = inner.split(['(', ' ', '{']).next().unwrap_or(inner);
        if matches!(head, "Weights" | "Cones" | "Conformal" | "InvalidSequence") {
            inner = rest;
        } else {
            break;
        }
    }
    inner
        .split(['(', ' ', '{', ')'])
        .next()
        .unwrap_or_default()
        .to_string()
}

pub fn error(e: &Error) -> Value {
    json!({ "module": e.tag(), "kind": kind(e), "message": e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use parabolic_core::{ConesError, ModelsError, WeightsError};

    #[test]
    fn error_kind_skips_wrappers() {
        let e = Error::from(ModelsError::Weights(WeightsError::EntryOutOfRange {
            index: 2,
        }));
        assert_eq!(error(&e)["kind"], "EntryOutOfRange");
        assert_eq!(error(&e)["module"], "weights");
        let e = Error::from(ConesError::HeightTooSmall(1));
        assert_eq!(error(&e)["kind"], "HeightTooSmall");
    }

    #[test]
    fn counts_and_rationals() {
        assert_eq!(big_count("12".into()), Value::from(12));
        assert_eq!(
            big_count("123456789012345678901234567890".into()),
            Value::from("123456789012345678901234567890")
        );
        assert_eq!(rational(&Q::from_integer(3.into())), Value::from("3/1"));
        assert_eq!(one_based(&[0, 4]), serde_json::json!([1, 5]));
    }
}
