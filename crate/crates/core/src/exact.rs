//! Exact arithmetic in a real quadratic field `Q(sqrt(d))`.
//!
//! Every metric quantity of the model space (rectangle sides, cosines and
//! sines of the joint angle, translation heights, tree distances) lives in a
//! single field `Q(sqrt(d))` with `d` fixed per complex. Values carry their
//! radicand so that rational constants (`b = 0`) mix freely with irrational
//! ones, while two genuinely irrational values with different radicands are
//! rejected.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    fn of_rational(r: &BigRational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `true` if `d` has no repeated prime factor.
pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// An exact element `a + b*sqrt(d)` of `Q(sqrt(d))`.
///
/// Canonical form: rationals are reduced, and whenever `b = 0` the radicand
/// is stored as `1`, so structural equality coincides with equality of
/// values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QuadScalar {
    /// Builds `a + b*sqrt(d)`, rejecting radicands that are not square-free.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self, Error> {
        if d == 0 {
            return Ok(Self::rational(a));
        }
        if !is_square_free(d) {
            return Err(Error::InvalidRadicand(d));
        }
        if d == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self::raw(a, b, d))
    }

    fn raw(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            QuadScalar { a, b, d: 1 }
        } else {
            QuadScalar { a, b, d }
        }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadScalar {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u64) -> Result<Self, Error> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Radicand; `1` for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(
                    self.d, other.d,
                    "mixed radicands sqrt({}) and sqrt({})",
                    self.d, other.d
                );
                self.d
            }
        }
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn sign(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::Zero,
        }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a^2 - d*b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt d)");
        let n = self.norm();
        let c = self.conjugate();
        Self::raw(&c.a / &n, &c.b / &n, self.d)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Floating-point approximation, used only for numerics and cross-checks.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let s = (self.d as f64).sqrt();
        let direct = a + b * s;
        // Cancellation-prone case: evaluate through the conjugate.
        if direct.abs() < 1e-6 * (a.abs() + (b * s).abs()) {
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            let conj = a - b * s;
            if conj != 0.0 {
                return n / conj;
            }
        }
        direct
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k = if approx.is_finite() {
            BigInt::from(approx as i64)
        } else {
            // Huge values: fall back on the rational part.
            self.a.floor().to_integer()
        };
        loop {
            let kq = QuadScalar::rational(BigRational::from_integer(k.clone()));
            if kq > *self {
                k -= 1;
                continue;
            }
            let k1 = QuadScalar::rational(BigRational::from_integer(&k + 1));
            if k1 <= *self {
                k += 1;
                continue;
            }
            return k;
        }
    }

    /// Rational approximation of an `f64`, exact for dyadic inputs.
    pub fn from_f64(x: f64) -> Self {
        Self::rational(BigRational::from_float(x).expect("finite float"))
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadScalar> for &QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&QuadScalar> for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        let d = self.common_radicand(rhs);
        QuadScalar::raw(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub<&QuadScalar> for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        let d = self.common_radicand(rhs);
        QuadScalar::raw(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul<&QuadScalar> for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        let d = self.common_radicand(rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadScalar::raw(a, b, d)
    }
}

impl Div<&QuadScalar> for &QuadScalar {
    type Output = QuadScalar;
    fn div(self, rhs: &QuadScalar) -> QuadScalar {
        self * &rhs.recip()
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::raw(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -self.clone()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadScalar {
    /// `a` for rationals, `a+b*sqrt(d)` / `a-b*sqrt(d)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let sep = if self.b.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{}{}{}*sqrt({})",
            fmt_rational(&self.a),
            sep,
            fmt_rational(&self.b.abs()),
            self.d
        )
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if s.contains('.') || s.contains('e') || s.contains('E') {
        // Decimal literal: exact base-10 value.
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        Ok(if scale >= 0 {
            BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
        })
    } else {
        Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    /// Accepts the `Display` format and a few hand-typed variants:
    /// `3/5`, `sqrt(2)`, `1/2*sqrt(3)`, `1+-1/2*sqrt(2)`, `0.25`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = s.find("sqrt(") else {
            return Ok(Self::rational(parse_rational(&s)?));
        };
        let close = s[pos..]
            .find(')')
            .map(|i| i + pos)
            .ok_or_else(|| Error::Parse(format!("unclosed sqrt in '{s}'")))?;
        if close + 1 != s.len() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        let d: u64 = s[pos + 5..close]
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in '{s}'")))?;
        let head = s[..pos].strip_suffix('*').unwrap_or(&s[..pos]);
        let bytes = head.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i];
            let prev = bytes[i - 1];
            if (c == b'+' || c == b'-') && prev != b'+' && prev != b'-' && prev != b'e' {
                split = Some(i);
                break;
            }
        }
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let b = match b_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => {
                let t = other.strip_prefix('+').unwrap_or(other);
                if t.starts_with('-') && (t == "-" || t.starts_with("--")) {
                    return Err(Error::Parse(format!("bad coefficient in '{s}'")));
                }
                if let Some(rest) = t.strip_prefix("+-") {
                    -parse_rational(rest)?
                } else {
                    parse_rational(t)?
                }
            }
        };
        let a = parse_rational(a_str)?;
        Self::new(a, b, d)
    }
}

impl serde::Serialize for QuadScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QuadScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sign of `u1/sqrt(u1^2+v1^2) - u2/sqrt(u2^2+v2^2)`, decided without radicals.
///
/// Each ratio is the cosine of the angle a vector `(u, v)` makes with the
/// first axis, so this compares two such cosines exactly. Used to read off the
/// sign of a derivative `d/dt (|P(t)| + |Q(t)|)` at a crossing parameter.
pub fn cmp_hyp_ratio(
    u1: &QuadScalar,
    v1: &QuadScalar,
    u2: &QuadScalar,
    v2: &QuadScalar,
) -> Result<Sign, Error> {
    let n1 = u1.square() + v1.square();
    let n2 = u2.square() + v2.square();
    if n1.sign() != Sign::Positive || n2.sign() != Sign::Positive {
        return Err(Error::DegenerateGeometry(
            "zero-length vector in derivative predicate".into(),
        ));
    }
    let s1 = u1.sign();
    let s2 = u2.sign();
    if s1 != s2 {
        return Ok(Sign::of_ordering(s1.as_i8().cmp(&s2.as_i8())));
    }
    if s1 == Sign::Zero {
        return Ok(Sign::Zero);
    }
    // Same strict sign: compare squares, flipping for negatives.
    let lhs = u1.square() * &n2;
    let rhs = u2.square() * &n1;
    let c = Sign::of_ordering(lhs.cmp(&rhs));
    Ok(if s1 == Sign::Positive { c } else { -c })
}

/// Sign of `a1/sqrt(m1) + a2/sqrt(m2)` for `m1, m2 > 0`.
///
/// A derivative of a sum of two segment lengths `sqrt(m_i)` has this shape,
/// with `a_i` the derivative numerators. Same comparison of squares as
/// [`cmp_hyp_ratio`], without requiring `m_i` to be written as `u^2 + v^2`.
pub fn ratio_sum_sign(
    a1: &QuadScalar,
    m1: &QuadScalar,
    a2: &QuadScalar,
    m2: &QuadScalar,
) -> Result<Sign, Error> {
    if m1.sign() != Sign::Positive || m2.sign() != Sign::Positive {
        return Err(Error::DegenerateGeometry(
            "zero-length segment in derivative predicate".into(),
        ));
    }
    let (s1, s2) = (a1.sign(), a2.sign());
    if s1 == s2 || s2 == Sign::Zero {
        return Ok(s1);
    }
    if s1 == Sign::Zero {
        return Ok(s2);
    }
    // opposite strict signs: the larger |a_i|/sqrt(m_i) wins
    let lhs = a1.square() * m2;
    let rhs = a2.square() * m1;
    Ok(match lhs.cmp(&rhs) {
        Ordering::Greater => s1,
        Ordering::Equal => Sign::Zero,
        Ordering::Less => s2,
    })
}

/// Sign of an exact value; thin wrapper kept for symmetry with the predicates.
pub fn scalar_sign(x: &QuadScalar) -> Sign {
    x.sign()
}

/// Least common multiple of the denominators of `a` and `b`.
pub fn common_denominator(x: &QuadScalar) -> BigInt {
    x.a.denom().lcm(x.b.denom())
}

/// Ordered-field scalar used by the generic tree and geodesic code, so the
/// same routines run on `f64` for search and on [`QuadScalar`] for
/// certificates.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_quad(q: &QuadScalar) -> Self;
    /// `floor(self / den)` for `den > 0`.
    fn floor_div(&self, den: &Self) -> i64;
    fn abs_val(&self) -> Self;
    fn approx(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_quad(q: &QuadScalar) -> Self {
        q.to_f64()
    }
    fn floor_div(&self, den: &Self) -> i64 {
        (self / den).floor() as i64
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for QuadScalar {
    fn zero() -> Self {
        QuadScalar::zero()
    }
    fn from_i64(v: i64) -> Self {
        QuadScalar::from_int(v)
    }
    fn from_quad(q: &QuadScalar) -> Self {
        q.clone()
    }
    fn floor_div(&self, den: &Self) -> i64 {
        (self / den)
            .floor()
            .to_i64()
            .expect("floor quotient fits in i64")
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadScalar {
        s.parse().unwrap()
    }

    #[test]
    fn ratio_sum_sign_cases() {
        // 3/5 - 4/5 < 0
        let r = ratio_sum_sign(&q("3"), &q("25"), &q("-4"), &q("25")).unwrap();
        assert_eq!(r, Sign::Negative);
        let r = ratio_sum_sign(&q("1"), &q("2"), &q("-1"), &q("2")).unwrap();
        assert_eq!(r, Sign::Zero);
        assert!(ratio_sum_sign(&q("1"), &q("0"), &q("1"), &q("1")).is_err());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(q("0").sign(), Sign::Zero);
        // (-1)^2 < 1^2 * 2
        assert_eq!(q("-1+1*sqrt(2)").sign(), Sign::Positive);
        // 9 > 8
        assert_eq!(q("3-2*sqrt(2)").sign(), Sign::Positive);
        assert_eq!(q("-3+2*sqrt(2)").sign(), Sign::Negative);
        assert_eq!(q("1-1*sqrt(2)").sign(), Sign::Negative);
    }

    #[test]
    fn hyp_ratio_examples() {
        let (one, zero) = (q("1"), q("0"));
        assert_eq!(cmp_hyp_ratio(&one, &zero, &one, &zero).unwrap(), Sign::Zero);
        assert_eq!(cmp_hyp_ratio(&one, &one, &one, &zero).unwrap(), Sign::Negative);
        assert_eq!(
            cmp_hyp_ratio(&q("3"), &q("4"), &q("4"), &q("3")).unwrap(),
            Sign::Negative
        );
        assert_eq!(
            cmp_hyp_ratio(&q("-3"), &q("4"), &q("-4"), &q("3")).unwrap(),
            Sign::Positive
        );
        assert!(cmp_hyp_ratio(&zero, &zero, &one, &zero).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("1+0*sqrt(2)"), q("1"));
        assert_eq!(q("3*sqrt(1)"), q("3"));
        assert!(QuadScalar::sqrt_of(8).is_err());
        let r2 = QuadScalar::sqrt_of(2).unwrap();
        assert_eq!(&r2 * &r2, q("2"));
        assert_eq!(r2.radicand(), 2);
        assert_eq!((&r2 - &r2).radicand(), 1);
    }

    #[test]
    fn display_round_trip() {
        for s in ["3/5", "-7", "1/2+1/3*sqrt(2)", "0-1/2*sqrt(3)", "5+2*sqrt(7)"] {
            let x = q(s);
            assert_eq!(q(&x.to_string()), x);
        }
        assert_eq!(q("1/2-1/3*sqrt(2)").to_string(), "1/2-1/3*sqrt(2)");
        assert_eq!(q("0+-1/2*sqrt(2)"), q("-1/2*sqrt(2)"));
        assert_eq!(q("1e-9"), QuadScalar::from_ratio(1, 1_000_000_000));
        assert_eq!(q("0.25"), QuadScalar::from_ratio(1, 4));
    }

    #[test]
    fn division_and_floor() {
        let x = q("1+1*sqrt(2)");
        let y = q("3-1*sqrt(2)");
        assert_eq!(&(&x / &y) * &y, x);
        assert_eq!(x.floor(), BigInt::from(2));
        assert_eq!(q("-1/2").floor(), BigInt::from(-1));
        assert_eq!(q("3").floor(), BigInt::from(3));
        assert_eq!(q("0-1*sqrt(2)").floor(), BigInt::from(-2));
    }

    #[test]
    #[should_panic(expected = "mixed radicands")]
    fn mixed_radicands_rejected() {
        let _ = QuadScalar::sqrt_of(2).unwrap() + QuadScalar::sqrt_of(3).unwrap();
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(1));
        assert!(is_square_free(6));
        assert!(!is_square_free(12));
        assert!(!is_square_free(0));
    }
}
