use std::cmp::Ordering;
use std::fmt;

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative extended real in `[0, +inf]`.
///
/// `+inf` is a first-class, comparable value backed by the native floating
/// infinity, so `1/0 = inf` and `1/inf = 0` hold exactly. NaN is never
/// representable: every constructor rejects it.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct XReal(f64);

impl XReal {
    pub const ZERO: XReal = XReal(0.0);
    pub const ONE: XReal = XReal(1.0);
    pub const INFINITY: XReal = XReal(f64::INFINITY);

    pub fn new(v: f64) -> Result<XReal> {
        if v.is_nan() {
            return Err(Error::invalid("XReal cannot be NaN"));
        }
        if v < 0.0 {
            return Err(Error::invalid(format!("XReal cannot be negative: {v}")));
        }
        Ok(XReal(v))
    }

    /// Wraps a value known to be in `[0, inf]`.
    pub fn from_raw(v: f64) -> XReal {
        debug_assert!(!v.is_nan() && v >= 0.0, "invalid XReal {v}");
        XReal(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Reciprocal under the conventions `1/0 = inf`, `1/inf = 0` (both exact).
    pub fn recip(self) -> XReal {
        XReal(1.0 / self.0)
    }

    pub fn min_with(self, other: XReal) -> XReal {
        if self.0 <= other.0 { self } else { other }
    }

    pub fn max_with(self, other: XReal) -> XReal {
        if self.0 >= other.0 { self } else { other }
    }

    /// Scales by a positive finite factor; `lambda * inf = inf`.
    pub fn scale(self, lambda: f64) -> XReal {
        debug_assert!(lambda > 0.0 && lambda.is_finite());
        XReal(lambda * self.0)
    }

    /// Finite subtraction. Callers must guarantee both operands are finite.
    pub fn sub_finite(self, other: XReal) -> f64 {
        debug_assert!(self.is_finite() && other.is_finite());
        self.0 - other.0
    }

    /// `|a - b|` with the truncation-path conventions: `|inf - inf| = 0`,
    /// `|inf - finite| = inf`.
    pub fn abs_diff(self, other: XReal) -> XReal {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => XReal::ZERO,
            (true, false) | (false, true) => XReal::INFINITY,
            (false, false) => XReal((self.0 - other.0).abs()),
        }
    }

    /// Extended positive part of `a - b`: zero when `a <= b`, `inf` when
    /// `a = inf > b`, the finite difference otherwise.
    pub fn pos_diff(self, other: XReal) -> XReal {
        if self.0 <= other.0 {
            XReal::ZERO
        } else if self.is_infinite() {
            XReal::INFINITY
        } else {
            XReal(self.0 - other.0)
        }
    }

    /// Total order (no NaN by construction).
    pub fn total_cmp(self, other: XReal) -> Ordering {
        self.0.partial_cmp(&other.0).expect("XReal is never NaN")
    }
}

/// Extended addition: `inf + c = inf`.
impl std::ops::Add for XReal {
    type Output = XReal;

    fn add(self, other: XReal) -> XReal {
        XReal(self.0 + other.0)
    }
}

impl fmt::Debug for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// JSON has no infinity literal; serialize as the string "inf" instead.
impl Serialize for XReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for XReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => XReal::new(v).map_err(serde::de::Error::custom),
            Raw::Str(s) if s == "inf" => Ok(XReal::INFINITY),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected number or \"inf\", got {s:?}"
            ))),
        }
    }
}
