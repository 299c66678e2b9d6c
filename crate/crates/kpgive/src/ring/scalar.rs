//! Exact rationals and the first-order dual ring over them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring shared by every series, Fock vector and matrix in the crate.
///
/// There are exactly two instances: [`Scalar`] for plain computations and
/// [`DualScalar`] for first-order derivatives carried through the same kernels.
pub trait Ring:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + crate::fock::Coeff
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar) -> Self;
    fn scale(&self, s: &Scalar) -> Self;

    fn from_i64(k: i64) -> Self {
        Self::from_scalar(&Scalar::from(k))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other
    }

    /// Multiplicative inverse, if the element is a unit.
    fn try_inverse(&self) -> Option<Self>;

    /// The infinitesimal `ε` when the ring has one.
    fn epsilon_unit() -> Option<Self> {
        None
    }

    /// Serialized form: a rational string for [`Scalar`], a two-element
    /// array `[value, eps]` for [`DualScalar`].
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Option<Scalar> {
        if self.0.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.recip().map(|r| Scalar(&self.0 * &r.0))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::from(1);
        for _ in 0..e {
            out = out * self;
        }
        out
    }
}

impl From<i64> for Scalar {
    fn from(k: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(k)))
    }
}

impl From<i32> for Scalar {
    fn from(k: i32) -> Self {
        Scalar::from(k as i64)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar(BigRational::new(parse_int(p)?, q)))
            }
            None => Ok(Scalar(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($ty:ty, $tr:ident, $m:ident, $body:expr) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(&self, rhs)
            }
        }
        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: &'b $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(self, rhs)
            }
        }
    };
}

forward_binop!(Scalar, Add, add, |a, b| Scalar(&a.0 + &b.0));
forward_binop!(Scalar, Sub, sub, |a, b| Scalar(&a.0 - &b.0));
forward_binop!(Scalar, Mul, mul, |a, b| Scalar(&a.0 * &b.0));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &'a Scalar) {
        self.0 += &rhs.0;
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &'a Scalar) {
        self.0 -= &rhs.0;
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    fn one() -> Self {
        Scalar(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }

    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn try_inverse(&self) -> Option<Self> {
        self.recip()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Scalar::from(n.as_i64().unwrap())),
            other => Err(Error::Parse(format!("expected rational string, got {other}"))),
        }
    }
}

/// `value + eps·ε` with `ε² = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DualScalar {
    pub value: Scalar,
    pub eps: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, eps: Scalar) -> Self {
        DualScalar { value, eps }
    }

    /// The infinitesimal unit ε.
    pub fn epsilon() -> Self {
        DualScalar::new(Scalar::zero(), Scalar::one())
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "({} + {}ε)", self.value, self.eps)
        }
    }
}

impl fmt::Debug for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

forward_binop!(DualScalar, Add, add, |a, b| DualScalar::new(
    &a.value + &b.value,
    &a.eps + &b.eps
));
forward_binop!(DualScalar, Sub, sub, |a, b| DualScalar::new(
    &a.value - &b.value,
    &a.eps - &b.eps
));
forward_binop!(DualScalar, Mul, mul, |a, b| DualScalar::new(
    &a.value * &b.value,
    &(&a.value * &b.eps) + &(&a.eps * &b.value)
));

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.value, -self.eps)
    }
}

impl<'a> AddAssign<&'a DualScalar> for DualScalar {
    fn add_assign(&mut self, rhs: &'a DualScalar) {
        self.value += &rhs.value;
        self.eps += &rhs.eps;
    }
}

impl<'a> SubAssign<&'a DualScalar> for DualScalar {
    fn sub_assign(&mut self, rhs: &'a DualScalar) {
        self.value -= &rhs.value;
        self.eps -= &rhs.eps;
    }
}

impl Ring for DualScalar {
    fn zero() -> Self {
        DualScalar::default_zero()
    }

    fn epsilon_unit() -> Option<Self> {
        Some(DualScalar::epsilon())
    }

    fn one() -> Self {
        DualScalar::new(Scalar::one(), Scalar::zero())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.eps.is_zero()
    }

    fn from_scalar(s: &Scalar) -> Self {
        DualScalar::new(s.clone(), Scalar::zero())
    }

    fn scale(&self, s: &Scalar) -> Self {
        DualScalar::new(&self.value * s, &self.eps * s)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn try_inverse(&self) -> Option<Self> {
        // (a + bε)^{-1} = a^{-1} - b a^{-2} ε
        let inv = self.value.recip()?;
        let eps = -(&(&self.eps * &inv) * &inv);
        Some(DualScalar::new(inv, eps))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.value.to_string(), self.eps.to_string()])
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Array(items) if items.len() == 2 => Ok(DualScalar::new(
                Scalar::from_json(&items[0])?,
                Scalar::from_json(&items[1])?,
            )),
            other => Ok(DualScalar::from_scalar(&Scalar::from_json(other)?)),
        }
    }
}

impl DualScalar {
    fn default_zero() -> Self {
        DualScalar::new(Scalar::zero(), Scalar::zero())
    }

    pub fn value_part(&self) -> &Scalar {
        &self.value
    }

    pub fn eps_part(&self) -> &Scalar {
        &self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9).prop_map(|(p, d)| Scalar::new(p, d))
    }

    fn dq() -> impl Strategy<Value = DualScalar> {
        (q(), q()).prop_map(|(a, b)| DualScalar::new(a, b))
    }

    #[test]
    fn parse_and_print() {
        let s: Scalar = "6/-4".parse().unwrap();
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from(7));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn lowest_terms() {
        let s = Scalar::new(10, -4);
        assert_eq!(s.numer(), &BigInt::from(-5));
        assert_eq!(s.denom(), &BigInt::from(2));
    }

    #[test]
    fn epsilon_squares_to_zero() {
        let e = DualScalar::epsilon();
        assert!((e.clone() * &e).is_zero());
    }

    #[test]
    fn dual_inverse() {
        let a = DualScalar::new(Scalar::new(3, 2), Scalar::from(5));
        let inv = a.try_inverse().unwrap();
        assert_eq!(a * &inv, DualScalar::one());
    }

    proptest! {
        #[test]
        fn scalar_ring_axioms(a in q(), b in q(), c in q()) {
            prop_assert_eq!((a.clone() + &b) + &c, a.clone() + &(b.clone() + &c));
            prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
            prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + &(a.clone() * &c));
            prop_assert_eq!(a.clone() * &b, b.clone() * &a);
        }

        #[test]
        fn dual_ring_axioms(a in dq(), b in dq(), c in dq()) {
            prop_assert_eq!((a.clone() + &b) + &c, a.clone() + &(b.clone() + &c));
            prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
            prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + &(a.clone() * &c));
            prop_assert_eq!(a.clone() * &b, b.clone() * &a);
            let prod = a.clone() * &b;
            prop_assert_eq!(prod.eps, &a.value * &b.eps + &(&a.eps * &b.value));
        }
    }
}
