//! Coefficient fields.
//!
//! Exact computations run over [`Rational`] or, for the dihedral groups
//! `I2(3)` and `I2(6)` whose roots involve `sqrt(3)`, over [`QSqrt3`].
//! `f64` also implements [`Field`] so the same polynomial code can carry
//! floating-point bases; it treats magnitudes below `1e-12` as negligible.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Absolute tolerance used when a floating-point field compares to zero.
pub const FLOAT_NEGLIGIBLE: f64 = 1e-12;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// True when equality and zero tests are exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// -1, 0 or 1. Zero means [`Field::is_negligible`].
    fn sign(&self) -> i8;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Direction of the dihedral root at angle `j*pi/m`, up to a positive
    /// factor, when it is representable in this field.
    fn dihedral_direction(m: usize, j: usize) -> Option<[Self; 2]>;
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_direction(m: usize, j: usize) -> Option<[Rational; 2]> {
    let r = |a: i64, b: i64| Some([rational(a, 1), rational(b, 1)]);
    match (m, j % m.max(1)) {
        (1, 0) | (2, 0) | (4, 0) => r(1, 0),
        (2, 1) | (4, 2) => r(0, 1),
        (4, 1) => r(1, 1),
        (4, 3) => r(-1, 1),
        _ => None,
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn dihedral_direction(m: usize, j: usize) -> Option<[Self; 2]> {
        rational_direction(m, j)
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }

    fn is_negligible(&self) -> bool {
        libm::fabs(*self) <= FLOAT_NEGLIGIBLE
    }

    fn dihedral_direction(m: usize, j: usize) -> Option<[Self; 2]> {
        if m == 0 {
            return None;
        }
        let angle = core::f64::consts::PI * (j % m) as f64 / m as f64;
        Some([libm::cos(angle), libm::sin(angle)])
    }
}

/// Element `a + b*sqrt(3)` of the quadratic field `Q(sqrt 3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn sqrt3() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 - 3 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rational(3, 1) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        write!(f, "(")?;
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "sqrt3)")
        } else if (-self.b.clone()).is_one() {
            write!(f, "-sqrt3)")
        } else {
            write!(f, "{}*sqrt3)", self.b)
        }
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<'a> Add<&'a QSqrt3> for QSqrt3 {
    type Output = Self;
    fn add(self, o: &'a QSqrt3) -> Self {
        Self::new(self.a + &o.a, self.b + &o.b)
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, o: QSqrt3) -> Self {
        self + &o
    }
}

impl AddAssign for QSqrt3 {
    fn add_assign(&mut self, o: QSqrt3) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl<'a> Sub<&'a QSqrt3> for QSqrt3 {
    type Output = Self;
    fn sub(self, o: &'a QSqrt3) -> Self {
        Self::new(self.a - &o.a, self.b - &o.b)
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, o: QSqrt3) -> Self {
        self - &o
    }
}

impl<'a> Mul<&'a QSqrt3> for QSqrt3 {
    type Output = Self;
    fn mul(self, o: &'a QSqrt3) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Self::new(self.a * &o.a, Rational::zero());
        }
        let three = rational(3, 1);
        let a = &self.a * &o.a + three * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::new(a, b)
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, o: QSqrt3) -> Self {
        self * &o
    }
}

impl<'a> Div<&'a QSqrt3> for QSqrt3 {
    type Output = Self;
    fn div(self, o: &'a QSqrt3) -> Self {
        if o.b.is_zero() {
            return Self::new(self.a / &o.a, self.b / &o.a);
        }
        let n = o.norm();
        let p = self * &o.conj();
        Self::new(p.a / &n, p.b / &n)
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    fn div(self, o: QSqrt3) -> Self {
        self / &o
    }
}

impl Field for QSqrt3 {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        Self::new(q.clone(), Rational::zero())
    }

    fn to_f64(&self) -> f64 {
        // a + b*sqrt3 = (a^2 - 3b^2) / (a - b*sqrt3) avoids cancellation
        // when the two parts nearly cancel.
        let a = Field::to_f64(&self.a);
        let b = Field::to_f64(&self.b) * libm::sqrt(3.0);
        if (a > 0.0) == (b > 0.0) || a == 0.0 || b == 0.0 {
            a + b
        } else {
            Field::to_f64(&self.norm()) / (a - b)
        }
    }

    fn sign(&self) -> i8 {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with 3 b^2
        let n = self.norm();
        if n.is_positive() {
            sa
        } else {
            sb
        }
    }

    fn dihedral_direction(m: usize, j: usize) -> Option<[Self; 2]> {
        if let Some([x, y]) = rational_direction(m, j) {
            return Some([Self::from_rational(&x), Self::from_rational(&y)]);
        }
        let half = rational(1, 2);
        let r = |a: Rational, b: Rational| Self::new(a, b);
        let z = Rational::zero;
        let dir = match (m, j % m.max(1)) {
            (3, 0) | (6, 0) => [r(rational(1, 1), z()), r(z(), z())],
            (3, 1) | (6, 2) => [r(half.clone(), z()), r(z(), half)],
            (3, 2) | (6, 4) => [r(-half.clone(), z()), r(z(), half)],
            (6, 1) => [r(z(), half.clone()), r(half, z())],
            (6, 3) => [r(z(), z()), r(rational(1, 1), z())],
            (6, 5) => [r(z(), -half.clone()), r(half, z())],
            _ => return None,
        };
        Some(dir)
    }
}

/// Parse `"p/q"`, `"n"` or a finite decimal such as `"0.75"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let int_part: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().ok()? };
        let frac_part: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().ok()? };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Rational::new(int_part * &scale + frac_part, scale);
        return Some(if negative { -value } else { value });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_arithmetic() {
        let s = QSqrt3::sqrt3();
        assert_eq!(s.clone() * &s, QSqrt3::from_int(3));
        let x = QSqrt3::new(rational(1, 2), rational(1, 3));
        let inv = QSqrt3::one() / &x;
        assert_eq!(inv * &x, QSqrt3::one());
        assert!((Field::to_f64(&x) - (0.5 + libm::sqrt(3.0) / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn sqrt3_sign() {
        assert_eq!(QSqrt3::new(rational(2, 1), rational(-1, 1)).sign(), 1);
        assert_eq!(QSqrt3::new(rational(1, 1), rational(-1, 1)).sign(), -1);
        assert_eq!(QSqrt3::new(rational(-2, 1), rational(1, 1)).sign(), -1);
        assert_eq!(QSqrt3::new(rational(-1, 1), rational(1, 1)).sign(), 1);
        assert_eq!(QSqrt3::zero().sign(), 0);
    }

    #[test]
    fn dihedral_directions_are_unit_in_sqrt3() {
        for m in [3usize, 6] {
            for j in 0..m {
                let [x, y] = QSqrt3::dihedral_direction(m, j).unwrap();
                assert_eq!(x.clone() * &x + &(y.clone() * &y), QSqrt3::one());
                let angle = core::f64::consts::PI * j as f64 / m as f64;
                assert!((Field::to_f64(&x) - libm::cos(angle)).abs() < 1e-15);
                assert!((Field::to_f64(&y) - libm::sin(angle)).abs() < 1e-15);
            }
        }
        assert!(Rational::dihedral_direction(3, 1).is_none());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/2"), Some(rational(1, 2)));
        assert_eq!(parse_rational("-3"), Some(rational(-3, 1)));
        assert_eq!(parse_rational("0.75"), Some(rational(3, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rational(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn display_sqrt3() {
        extern crate alloc;
        use alloc::string::ToString;
        assert_eq!(QSqrt3::new(rational(1, 2), rational(-1, 3)).to_string(), "(1/2-1/3*sqrt3)");
        assert_eq!(QSqrt3::sqrt3().to_string(), "(sqrt3)");
        assert_eq!(QSqrt3::from_int(2).to_string(), "2");
    }
}
