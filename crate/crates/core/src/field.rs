//! Exact scalar fields.
//!
//! Everything in the engine is generic over [`Field`]. Two implementations
//! ship: [`Rational`] (the default, characteristic zero) and [`Fp`], the
//! prime field of order `2^61 - 1`, which is much faster for large
//! degreewise rank computations.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field. Arithmetic never rounds; `inv` panics on zero.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Short name used in cache keys and reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Integer value if the element is (the image of) a small integer.
    fn to_i64(&self) -> Option<i64>;

    /// Inverse of `Display`.
    fn parse(s: &str) -> Option<Self>;
}

// ---------------------------------------------------------------------------
// Rationals

/// A rational number with an inline fast path for values fitting in `i64`.
///
/// The representation is canonical: `Small` is used whenever numerator and
/// denominator fit, the denominator is positive and the fraction reduced.
#[derive(Clone)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Rational::Small(n, d)
        } else {
            Rational::Big(Box::new(r))
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let b = self.to_big();
        (b.numer().clone(), b.denom().clone())
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rational::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (&self, &rhs) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::from_i128(a + c, b);
            }
            return Rational::from_i128(a * d + c * b, b * d);
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) if n != i64::MIN => Rational::Small(-n, d),
            other => Rational::from_big(-other.to_big()),
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (&self, &rhs) {
            if *a == 0 || *c == 0 {
                return Rational::Small(0, 1);
            }
            return Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }
}

impl Div for Rational {
    type Output = Rational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Rational) -> Rational {
        self * rhs.inv()
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        let lhs = std::mem::replace(self, Rational::Small(0, 1));
        *self = lhs + rhs;
    }
}
impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        let lhs = std::mem::replace(self, Rational::Small(0, 1));
        *self = lhs - rhs;
    }
}
impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        let lhs = std::mem::replace(self, Rational::Small(0, 1));
        *self = lhs * rhs;
    }
}

impl Field for Rational {
    const NAME: &'static str = "QQ";

    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn one() -> Self {
        Rational::Small(1, 1)
    }
    fn from_i64(v: i64) -> Self {
        Rational::Small(v, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
    fn inv(&self) -> Self {
        match self {
            Rational::Small(0, _) => panic!("division by zero"),
            Rational::Small(n, d) if *n != i64::MIN => {
                if *n < 0 {
                    Rational::Small(-d, -n)
                } else {
                    Rational::Small(*d, *n)
                }
            }
            other => {
                let b = other.to_big();
                Rational::from_big(b.recip())
            }
        }
    }
    fn to_i64(&self) -> Option<i64> {
        match self {
            Rational::Small(n, 1) => Some(*n),
            _ => None,
        }
    }
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse::<BigRational>().ok().map(Rational::from_big)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::Small(v, 1)
    }
}

impl Rational {
    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.denom().is_one(),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        <Rational as Field>::zero()
    }
    fn is_zero(&self) -> bool {
        <Rational as Field>::is_zero(self)
    }
}

// ---------------------------------------------------------------------------
// Prime field

/// The prime `2^61 - 1`.
pub const MERSENNE61: u64 = (1u64 << 61) - 1;

/// Element of the prime field of order `2^61 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    #[inline]
    fn reduce128(x: u128) -> u64 {
        let lo = (x as u64) & MERSENNE61;
        let hi = (x >> 61) as u64;
        let mut s = lo + (hi & MERSENNE61) + ((x >> 122) as u64);
        while s >= MERSENNE61 {
            s -= MERSENNE61;
        }
        s
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_i64() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}", self.0),
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        let mut s = self.0 + rhs.0;
        if s >= MERSENNE61 {
            s -= MERSENNE61;
        }
        Fp(s)
    }
}
impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MERSENNE61 - rhs.0)
        }
    }
}
impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(MERSENNE61 - self.0)
        }
    }
}
impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        Fp(Fp::reduce128(self.0 as u128 * rhs.0 as u128))
    }
}
impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv()
    }
}
impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}
impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}
impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Field for Fp {
    const NAME: &'static str = "GF(2^61-1)";

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        let m = v.rem_euclid(MERSENNE61 as i64);
        Fp(m as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "division by zero");
        self.pow(MERSENNE61 - 2)
    }
    fn to_i64(&self) -> Option<i64> {
        const SMALL: u64 = 1 << 40;
        if self.0 < SMALL {
            Some(self.0 as i64)
        } else if MERSENNE61 - self.0 < SMALL {
            Some(-((MERSENNE61 - self.0) as i64))
        } else {
            None
        }
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.parse::<i64>() {
            Ok(v) => Some(Fp::from_i64(v)),
            Err(_) => s.parse::<u64>().ok().filter(|&v| v < MERSENNE61).map(Fp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX);
        let sq = big.clone() * big.clone();
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq / big.clone();
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
    }

    #[test]
    fn rational_canonical_form() {
        assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
        assert_eq!(Rational::new(3, 6) + Rational::new(1, 2), Rational::one());
        assert_eq!(Rational::new(-3, 7).inv(), Rational::new(-7, 3));
    }

    #[test]
    fn prime_field_inverse() {
        for v in [1i64, 2, 3, -5, 1 << 40, 123456789] {
            let x = Fp::from_i64(v);
            assert_eq!(x * x.inv(), Fp::one());
        }
        assert_eq!(Fp::from_i64(-1).to_i64(), Some(-1));
    }
}
