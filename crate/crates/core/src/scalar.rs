//! Scalar arithmetic over three kinds: `f64`, arbitrary-precision rationals,
//! and the real quadratic field Q(sqrt 2).
//!
//! Exact kinds are used wherever group elements are stored and compared;
//! float embedding happens only at the spectral layer.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    Float64,
    Rational,
    QuadSqrt2,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Float64 => write!(f, "float64"),
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::QuadSqrt2 => write!(f, "quad_sqrt2"),
        }
    }
}

/// Element a + b*sqrt(2) of Q(sqrt 2), components kept as reduced rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSqrt2 {
    pub a: Rat,
    pub b: Rat,
}

impl QuadSqrt2 {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadSqrt2 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadSqrt2 {
            a: Rat::from_integer(BigInt::from(a)),
            b: Rat::from_integer(BigInt::from(b)),
        }
    }

    pub fn zero() -> Self {
        QuadSqrt2::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadSqrt2::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate a - b*sqrt(2).
    pub fn conj(&self) -> Self {
        QuadSqrt2 {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm a^2 - 2 b^2 (rational).
    pub fn field_norm(&self) -> Rat {
        &self.a * &self.a - Rat::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field_norm();
        Ok(QuadSqrt2 {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    /// Exact sign of a + b*sqrt(2).
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (s, t) if s == t => s,
            (s, _) => {
                // a and b have opposite signs: sign decided by a^2 vs 2 b^2.
                let two_b2 = Rat::from_integer(BigInt::from(2)) * &self.b * &self.b;
                let a2 = &self.a * &self.a;
                match a2.cmp(&two_b2) {
                    Ordering::Greater => s,
                    Ordering::Less => -s,
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

impl PartialOrd for QuadSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.clone() - other.clone();
        match d.signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! quad_binop {
    ($trait:ident, $method:ident, |$x:ident, $y:ident| $body:expr) => {
        impl $trait for QuadSqrt2 {
            type Output = QuadSqrt2;
            fn $method(self, rhs: QuadSqrt2) -> QuadSqrt2 {
                let $x = self;
                let $y = rhs;
                $body
            }
        }
        impl<'a> $trait<&'a QuadSqrt2> for &'a QuadSqrt2 {
            type Output = QuadSqrt2;
            fn $method(self, rhs: &'a QuadSqrt2) -> QuadSqrt2 {
                let $x = self.clone();
                let $y = rhs.clone();
                $body
            }
        }
    };
}

quad_binop!(Add, add, |x, y| QuadSqrt2 {
    a: x.a + y.a,
    b: x.b + y.b,
});
quad_binop!(Sub, sub, |x, y| QuadSqrt2 {
    a: x.a - y.a,
    b: x.b - y.b,
});
quad_binop!(Mul, mul, |x, y| {
    let two = Rat::from_integer(BigInt::from(2));
    QuadSqrt2 {
        a: &x.a * &y.a + two * &x.b * &y.b,
        b: &x.a * &y.b + &x.b * &y.a,
    }
});

impl Neg for QuadSqrt2 {
    type Output = QuadSqrt2;
    fn neg(self) -> QuadSqrt2 {
        QuadSqrt2 {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl fmt::Display for QuadSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt2", self.a, self.b)
    }
}

pub fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Rational to f64 with ~1 ulp accuracy even for large numerator/denominator.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to scaled division for huge components.
    let bits_n = r.numer().bits() as i64;
    let bits_d = r.denom().bits() as i64;
    let shift = (bits_n.max(bits_d) - 900).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rat_from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_from_pair(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// A scalar of one of the three supported kinds. Arithmetic requires equal
/// kinds; rationals may be promoted into Q(sqrt 2) explicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Float(f64),
    Rational(Rat),
    Quad(QuadSqrt2),
}

impl Scalar {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Float(_) => ScalarKind::Float64,
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Quad(_) => ScalarKind::QuadSqrt2,
        }
    }

    pub fn zero(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Float64 => Scalar::Float(0.0),
            ScalarKind::Rational => Scalar::Rational(Rat::zero()),
            ScalarKind::QuadSqrt2 => Scalar::Quad(QuadSqrt2::zero()),
        }
    }

    pub fn one(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Float64 => Scalar::Float(1.0),
            ScalarKind::Rational => Scalar::Rational(Rat::one()),
            ScalarKind::QuadSqrt2 => Scalar::Quad(QuadSqrt2::one()),
        }
    }

    pub fn from_int(n: i64, kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Float64 => Scalar::Float(n as f64),
            ScalarKind::Rational => Scalar::Rational(rat_from_i64(n)),
            ScalarKind::QuadSqrt2 => Scalar::Quad(QuadSqrt2::from_ints(n, 0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Float(x) => *x == 0.0,
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Float(x) => *x,
            Scalar::Rational(r) => rat_to_f64(r),
            Scalar::Quad(q) => q.to_f64(),
        }
    }

    /// Promote a rational into Q(sqrt 2); identity on quad scalars.
    pub fn promote_to_quad(&self) -> Result<Scalar, Error> {
        match self {
            Scalar::Rational(r) => Ok(Scalar::Quad(QuadSqrt2::new(r.clone(), Rat::zero()))),
            Scalar::Quad(_) => Ok(self.clone()),
            Scalar::Float(_) => Err(Error::KindMismatch {
                expected: ScalarKind::QuadSqrt2,
                got: ScalarKind::Float64,
            }),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        match (self, rhs) {
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x + y)),
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x + y)),
            (Scalar::Quad(x), Scalar::Quad(y)) => Ok(Scalar::Quad(x + y)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        match (self, rhs) {
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x - y)),
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x - y)),
            (Scalar::Quad(x), Scalar::Quad(y)) => Ok(Scalar::Quad(x - y)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        match (self, rhs) {
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x * y)),
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x * y)),
            (Scalar::Quad(x), Scalar::Quad(y)) => Ok(Scalar::Quad(x * y)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, rhs) {
            (Scalar::Float(x), Scalar::Float(y)) => Ok(Scalar::Float(x / y)),
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x / y)),
            (Scalar::Quad(x), Scalar::Quad(y)) => Ok(Scalar::Quad(x * &y.inv()?)),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Float(x) => Scalar::Float(-x),
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Quad(q) => Scalar::Quad(-q.clone()),
        }
    }

    /// Exact sign for exact kinds, IEEE sign for floats.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Float(x) => {
                if *x > 0.0 {
                    1
                } else if *x < 0.0 {
                    -1
                } else {
                    0
                }
            }
            Scalar::Rational(r) => rat_sign(r),
            Scalar::Quad(q) => q.signum(),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn mismatch(&self, rhs: &Scalar) -> Error {
        Error::KindMismatch {
            expected: self.kind(),
            got: rhs.kind(),
        }
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Float(x) => x.to_bits().hash(state),
            Scalar::Rational(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Scalar::Quad(q) => {
                q.a.numer().hash(state);
                q.a.denom().hash(state);
                q.b.numer().hash(state);
                q.b.denom().hash(state);
            }
        }
    }
}

impl Eq for Scalar {}

/// Embed a quad scalar into the reals along one of the two field embeddings.
///
/// Sign `+1` sends sqrt2 to +sqrt(2), sign `-1` to -sqrt(2) (the Galois
/// conjugate embedding).
pub fn galois_embed(q: &Scalar, sign: i32) -> Result<f64, Error> {
    match q {
        Scalar::Quad(q) => {
            let v = if sign >= 0 { q.clone() } else { q.conj() };
            Ok(v.to_f64())
        }
        other => Err(Error::KindMismatch {
            expected: ScalarKind::QuadSqrt2,
            got: other.kind(),
        }),
    }
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(num, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Wire format: floats as JSON numbers, rationals as "p/q" strings,
/// quad scalars as {"a":"p/q","b":"p/q"}.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Float(x) => ser.serialize_f64(*x),
            Scalar::Rational(r) => ser.serialize_str(&rat_string(r)),
            Scalar::Quad(q) => {
                use serde::ser::SerializeMap;
                let mut m = ser.serialize_map(Some(2))?;
                m.serialize_entry("a", &rat_string(&q.a))?;
                m.serialize_entry("b", &rat_string(&q.b))?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        scalar_from_json(&v).map_err(|e| D::Error::custom(e.to_string()))
    }
}

pub fn scalar_from_json(v: &serde_json::Value) -> Result<Scalar, Error> {
    match v {
        serde_json::Value::Number(n) => {
            let x = n
                .as_f64()
                .ok_or_else(|| Error::Parse("non-finite number".into()))?;
            if !x.is_finite() {
                return Err(Error::Parse("non-finite float".into()));
            }
            Ok(Scalar::Float(x))
        }
        serde_json::Value::String(s) => Ok(Scalar::Rational(parse_rat(s)?)),
        serde_json::Value::Object(m) => {
            let a = m
                .get("a")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::Parse("quad scalar needs string field `a`".into()))?;
            let b = m
                .get("b")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::Parse("quad scalar needs string field `b`".into()))?;
            Ok(Scalar::Quad(QuadSqrt2::new(parse_rat(a)?, parse_rat(b)?)))
        }
        _ => Err(Error::Parse(format!("cannot read scalar from {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> QuadSqrt2 {
        QuadSqrt2::from_ints(a, b)
    }

    #[test]
    fn quad_field_ops() {
        let lambda = q(3, 2); // (1+sqrt2)^2
        let inv = lambda.inv().unwrap();
        assert_eq!(&lambda * &inv, q(1, 0));
        assert_eq!(inv, q(3, -2)); // unit of norm 1
        assert_eq!((&lambda * &lambda).a, rat_from_i64(17));
        assert_eq!((&lambda * &lambda).b, rat_from_i64(12));
    }

    #[test]
    fn quad_sign_mixed() {
        assert_eq!(q(1, -1).signum(), -1); // 1 - 1.41 < 0
        assert_eq!(q(3, -2).signum(), 1); // 3 - 2.83 > 0
        assert_eq!(q(-1, 1).signum(), 1);
        assert_eq!(q(0, 0).signum(), 0);
        assert_eq!(q(2, -1).signum(), 1); // 4 > 2
    }

    #[test]
    fn galois_embedding() {
        let one_one = Scalar::Quad(q(1, 1));
        let plus = galois_embed(&one_one, 1).unwrap();
        let minus = galois_embed(&one_one, -1).unwrap();
        assert!((plus - 2.414213562373095).abs() < 1e-12);
        assert!((minus + 0.41421356237309515).abs() < 1e-12);
        let lambda = Scalar::Quad(q(3, 2));
        assert!((galois_embed(&lambda, 1).unwrap() - 5.82842712474619).abs() < 1e-12);
        assert!(galois_embed(&Scalar::Float(1.0), 1).is_err());
    }

    #[test]
    fn galois_is_ring_hom_on_samples() {
        let xs = [q(1, 1), q(3, -2), q(-5, 7), q(2, 3)];
        for x in &xs {
            for y in &xs {
                for s in [1, -1] {
                    let e = |v: &QuadSqrt2| galois_embed(&Scalar::Quad(v.clone()), s).unwrap();
                    assert!((e(&(x + y)) - (e(x) + e(y))).abs() < 1e-9);
                    assert!((e(&(x * y)) - e(x) * e(y)).abs() < 1e-9 * (1.0 + e(x).abs() * e(y).abs()));
                }
            }
        }
    }

    #[test]
    fn scalar_json_round_trip() {
        let s = Scalar::Rational(rat_from_pair(-3, 4));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "\"-3/4\"");
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), s);

        let s = Scalar::Quad(q(1, -2));
        let j = serde_json::to_string(&s).unwrap();
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);

        let s: Scalar = serde_json::from_str("2.5").unwrap();
        assert_eq!(s, Scalar::Float(2.5));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let a = Scalar::Float(1.0);
        let b = Scalar::Rational(Rat::one());
        assert!(a.checked_add(&b).is_err());
    }
}
