//! Scalar arithmetic policy: exact rationals or tolerance-tracked doubles.
//!
//! Every quantity in this crate is a [`Scalar`], which is either an exact
//! `BigRational` or an `f64`. Arithmetic between two exact scalars stays
//! exact; as soon as an approximate value enters an expression the result is
//! approximate. Certificate checking refuses approximate inputs outright, so
//! the exact pipeline never rounds.
//!
//! A [`ScalarPolicy`] bundles the mode with the tolerances used to decide
//! nonnegativity claims: in approximate mode every `x >= 0` assertion is
//! relaxed to `x >= -(abs_tol + rel_tol * scale)`, where `scale` is the sum
//! of absolute values of the terms being compared.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A number in one of the two arithmetic modes.
#[derive(Debug, Clone)]
pub enum Scalar {
    /// Exact rational value; arithmetic on these never rounds.
    Exact(BigRational),
    /// Double-precision value, used for analytic atoms (sinh, exp).
    Approx(f64),
}

/// Errors produced when parsing scalar literals.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty scalar literal")]
    Empty,
    #[error("invalid scalar literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("non-finite value `{0}`")]
    NonFinite(String),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact ratio `numer / denom`. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    /// Approximate value. Panics on NaN; infinities are tolerated so that
    /// overflowing analytic evaluations stay ordered.
    pub fn approx(v: f64) -> Self {
        assert!(!v.is_nan(), "NaN is not a valid scalar");
        Scalar::Approx(v)
    }

    /// The exact rational denoted by an `f64` bit pattern (denominator a
    /// power of two). Used to escalate approximate near-violations to exact
    /// re-evaluation. `None` for non-finite input.
    pub fn rationalize(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Scalar::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or_else(|| {
                // Far outside f64 range; sign is all that survives.
                if r.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Approx(v) => *v < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Approx(v) => *v > 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(v) => Scalar::Approx(v.abs()),
        }
    }

    /// `max(self, 0)` — the plus-part `u₊` used by every truncated sum.
    pub fn plus_part(&self) -> Scalar {
        if self.is_negative() {
            match self {
                Scalar::Exact(_) => Scalar::zero(),
                Scalar::Approx(_) => Scalar::Approx(0.0),
            }
        } else {
            self.clone()
        }
    }

    /// Integer power, exact for exact scalars.
    pub fn pow_u32(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.pow(exp as i32)),
            Scalar::Approx(v) => Scalar::Approx(v.powi(exp as i32)),
        }
    }

    /// Always approximate; transcendental atoms have no exact path.
    pub fn sinh(&self) -> Scalar {
        Scalar::Approx(self.to_f64().sinh())
    }

    /// Always approximate.
    pub fn exp(&self) -> Scalar {
        Scalar::Approx(self.to_f64().exp())
    }

    /// Total order. Exact-exact comparisons are exact; any approximate
    /// operand demotes the comparison to `f64`. NaN never occurs for values
    /// built through the public constructors.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .expect("NaN in scalar comparison"),
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self.total_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self.total_cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Parse `p`, `p/q`, or a decimal/scientific literal. The first two
    /// forms give exact values; decimals give approximate ones.
    pub fn parse(s: &str) -> Result<Scalar, ScalarParseError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ScalarParseError::Empty);
        }
        if let Some((num, den)) = t.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| ScalarParseError::Invalid(t.to_string()))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| ScalarParseError::Invalid(t.to_string()))?;
            if d.is_zero() {
                return Err(ScalarParseError::ZeroDenominator(t.to_string()));
            }
            return Ok(Scalar::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        let v: f64 = t
            .parse()
            .map_err(|_| ScalarParseError::Invalid(t.to_string()))?;
        if !v.is_finite() {
            return Err(ScalarParseError::NonFinite(t.to_string()));
        }
        Ok(Scalar::Approx(v))
    }

    /// Parse accepting only the exact forms `p` and `p/q`.
    pub fn parse_exact(s: &str) -> Result<Scalar, ScalarParseError> {
        match Scalar::parse(s)? {
            v @ Scalar::Exact(_) => Ok(v),
            Scalar::Approx(_) => Err(ScalarParseError::Invalid(s.trim().to_string())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(v) => Scalar::Approx(-v),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            // Rationals always travel as strings so no JSON layer rounds them.
            Scalar::Exact(_) => serializer.serialize_str(&self.to_string()),
            Scalar::Approx(v) => serializer.serialize_f64(*v),
        }
    }
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a rational string like \"3/2\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        Ok(Scalar::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::Exact(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        if v.is_nan() {
            return Err(E::custom("NaN is not a valid scalar"));
        }
        Ok(Scalar::Approx(v))
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Scalar, E> {
        Scalar::parse_exact(s)
            .map_err(|e| E::custom(format!("rational string expected: {e}")))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Arithmetic mode selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Approx,
}

/// Arithmetic mode plus the tolerances governing nonnegativity assertions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarPolicy {
    pub mode: ScalarMode,
    /// Absolute slack for `>= 0` checks in approximate mode.
    pub abs_tol: f64,
    /// Relative slack, multiplied by the scale of the compared terms.
    pub rel_tol: f64,
}

pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_REL_TOL: f64 = 1e-9;

impl ScalarPolicy {
    pub fn exact() -> Self {
        ScalarPolicy {
            mode: ScalarMode::Exact,
            abs_tol: 0.0,
            rel_tol: 0.0,
        }
    }

    /// Approximate mode with the default desk-scale tolerances
    /// (`abs = 1e-12`, `rel = 1e-9`).
    pub fn approx() -> Self {
        ScalarPolicy {
            mode: ScalarMode::Approx,
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
        }
    }

    pub fn approx_with(abs_tol: f64, rel_tol: f64) -> Self {
        assert!(abs_tol > 0.0 && rel_tol > 0.0, "tolerances must be positive");
        ScalarPolicy {
            mode: ScalarMode::Approx,
            abs_tol,
            rel_tol,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == ScalarMode::Exact
    }

    /// Slack granted to a `>= 0` assertion at the given scale; zero in
    /// exact mode.
    pub fn slack(&self, scale: &Scalar) -> f64 {
        match self.mode {
            ScalarMode::Exact => 0.0,
            ScalarMode::Approx => self.abs_tol + self.rel_tol * scale.to_f64().abs(),
        }
    }

    /// Decide `value >= 0` under this policy. `scale` should be the sum of
    /// absolute values of the terms that produced `value`.
    pub fn certify_nonneg(&self, value: &Scalar, scale: &Scalar) -> bool {
        match self.mode {
            ScalarMode::Exact => !value.is_negative(),
            ScalarMode::Approx => value.to_f64() >= -self.slack(scale),
        }
    }

    /// Decide `a == b` under this policy (exact equality, or within slack).
    pub fn certify_eq(&self, a: &Scalar, b: &Scalar, scale: &Scalar) -> bool {
        match self.mode {
            ScalarMode::Exact => a == b,
            ScalarMode::Approx => (a.to_f64() - b.to_f64()).abs() <= self.slack(scale),
        }
    }

    /// True when `value` may appear in a pipeline run under this policy.
    /// Exact mode admits only exact scalars.
    pub fn admits(&self, value: &Scalar) -> bool {
        match self.mode {
            ScalarMode::Exact => value.is_exact(),
            ScalarMode::Approx => true,
        }
    }
}

impl Default for ScalarPolicy {
    fn default() -> Self {
        ScalarPolicy::approx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        let s = &a + &b;
        assert!(s.is_exact());
        assert_eq!(s, Scalar::ratio(1, 2));
        assert_eq!(&a - &a, Scalar::zero());
        assert_eq!(&a * &b, Scalar::ratio(1, 18));
        assert_eq!(&a / &b, Scalar::from_int(2));
    }

    #[test]
    fn mixing_demotes_to_approx() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::approx(0.25);
        let s = &a + &b;
        assert!(!s.is_exact());
        assert_eq!(s.to_f64(), 0.75);
    }

    #[test]
    fn plus_part_clamps_negatives() {
        assert_eq!(Scalar::from_int(-3).plus_part(), Scalar::zero());
        assert_eq!(Scalar::from_int(3).plus_part(), Scalar::from_int(3));
        assert_eq!(Scalar::approx(-0.5).plus_part().to_f64(), 0.0);
    }

    #[test]
    fn parse_rational_and_decimal() {
        assert_eq!(Scalar::parse("3/2").unwrap(), Scalar::ratio(3, 2));
        assert_eq!(Scalar::parse("-7").unwrap(), Scalar::from_int(-7));
        assert_eq!(Scalar::parse(" 0.5 ").unwrap(), Scalar::approx(0.5));
        assert!(matches!(
            Scalar::parse("1/0"),
            Err(ScalarParseError::ZeroDenominator(_))
        ));
        assert!(Scalar::parse("abc").is_err());
        assert!(Scalar::parse_exact("0.5").is_err());
    }

    #[test]
    fn serde_round_trip() {
        let vals = vec![
            Scalar::ratio(-3, 2),
            Scalar::from_int(4),
            Scalar::approx(0.125),
        ];
        let json = serde_json::to_string(&vals).unwrap();
        assert_eq!(json, r#"["-3/2","4",0.125]"#);
        let back: Vec<Scalar> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vals);
        assert!(back[0].is_exact());
        assert!(back[1].is_exact());
        assert!(!back[2].is_exact());
    }

    #[test]
    fn policy_slack() {
        let exact = ScalarPolicy::exact();
        assert!(exact.certify_nonneg(&Scalar::zero(), &Scalar::zero()));
        assert!(!exact.certify_nonneg(&Scalar::ratio(-1, 1_000_000_000), &Scalar::one()));

        let approx = ScalarPolicy::approx();
        assert!(approx.certify_nonneg(&Scalar::approx(-1e-13), &Scalar::zero()));
        assert!(approx.certify_nonneg(&Scalar::approx(-5e-10), &Scalar::approx(1.0)));
        assert!(!approx.certify_nonneg(&Scalar::approx(-1e-6), &Scalar::approx(1.0)));
    }

    #[test]
    fn ordering_is_total_within_modes() {
        let mut xs = vec![
            Scalar::from_int(2),
            Scalar::ratio(-1, 2),
            Scalar::zero(),
            Scalar::from_int(-3),
        ];
        xs.sort();
        assert_eq!(
            xs,
            vec![
                Scalar::from_int(-3),
                Scalar::ratio(-1, 2),
                Scalar::zero(),
                Scalar::from_int(2),
            ]
        );
    }

    #[test]
    fn rationalize_is_exact_binary_expansion() {
        let r = Scalar::rationalize(0.1).unwrap();
        // 0.1 is not 1/10 in binary; the rationalization reflects the bits.
        assert!(r.is_exact());
        assert_eq!(r.to_f64(), 0.1);
        assert_ne!(r, Scalar::ratio(1, 10));
    }
}
