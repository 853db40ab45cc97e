//! Scalar fields.
//!
//! Everything in this crate is generic over [`Field`]. Two implementations
//! ship with it: arbitrary-precision rationals ([`Rational`]), which are what
//! every user-facing path uses, and small prime fields ([`Fp`]) that exist so
//! tests can enumerate every subspace of a tiny vector space.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kernel::{sparse_product, IntegerTable};

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// `num / den`, `None` when `den` vanishes in the field.
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        Self::from_i64(den).inv().map(|d| Self::from_i64(num) * d)
    }

    /// 0 for the rationals, `p` for `F_p`.
    fn characteristic() -> u64;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Precomputed form of a product table, built once per algebra.
    type Kernel: Clone + Send + Sync;

    fn build_kernel(table: &[Vec<(usize, Self)>]) -> Self::Kernel;

    /// Bilinear product of `x` and `y` through `table`.
    fn kernel_product(kernel: &Self::Kernel, table: &[Vec<(usize, Self)>], x: &[Self], y: &[Self]) -> Vec<Self>;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn characteristic() -> u64 {
        0
    }

    type Kernel = IntegerTable;

    fn build_kernel(table: &[Vec<(usize, Self)>]) -> IntegerTable {
        IntegerTable::new(table)
    }

    fn kernel_product(kernel: &IntegerTable, _: &[Vec<(usize, Self)>], x: &[Self], y: &[Self]) -> Vec<Self> {
        kernel.product(x, y)
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, `p/q` (whitespace-free) into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let valid = |s: &str, allow_sign: bool| {
        let digits = if allow_sign {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if Zero::is_zero(&den) {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Absolute height `max(|p|, q)` of a rational, used to keep random samples small.
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// The prime field `Z/PZ`. `P` must be prime; the tests use 5 and 7, which
/// keeps characteristic away from 2 and 3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// All field elements in increasing residue order.
    pub fn elements() -> impl Iterator<Item = Self> {
        (0..P).map(Fp)
    }

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            exp >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Add<&Fp<P>> for Fp<P> {
    type Output = Self;
    fn add(self, rhs: &Self) -> Self {
        self + *rhs
    }
}

impl<const P: u64> Sub<&Fp<P>> for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: &Self) -> Self {
        self - *rhs
    }
}

impl<const P: u64> Mul<&Fp<P>> for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: &Self) -> Self {
        self * *rhs
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn characteristic() -> u64 {
        P
    }

    type Kernel = ();

    fn build_kernel(_: &[Vec<(usize, Self)>]) {}

    fn kernel_product(_: &(), table: &[Vec<(usize, Self)>], x: &[Self], y: &[Self]) -> Vec<Self> {
        sparse_product(table, x, y)
    }
}

pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_format() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("8/2").unwrap()), "4");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1/-2").is_none());
        assert!(parse_rational("x").is_none());
        assert!(parse_rational("").is_none());
        assert!(parse_rational("1.5").is_none());
    }

    #[test]
    fn prime_field_inverses() {
        for a in F7::elements().skip(1) {
            assert_eq!(a * a.inv().unwrap(), F7::one());
        }
        assert!(F5::zero().inv().is_none());
        assert_eq!(F5::from_ratio(1, 2).unwrap(), F5::new(3));
        assert_eq!(-F5::new(2), F5::new(3));
    }

    #[test]
    fn rational_half() {
        let half = Rational::from_ratio(1, 2).unwrap();
        assert_eq!(half.clone() + &half, <Rational as Field>::one());
        assert!(Rational::from_ratio(1, 0).is_none());
    }
}
