use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant {
    re: BigRational,
    im: BigRational,
}

impl Constant {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Constant { re, im }
    }

    pub fn zero() -> Self {
        Constant::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Constant::from_integer(1)
    }

    /// The imaginary unit `(0, 1)`.
    pub fn i() -> Self {
        Constant::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Constant::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Constant::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Constant::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Real and strictly negative.
    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    pub fn conj(&self) -> Self {
        Constant::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Constant::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut acc = Constant::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Integer value when the constant is a real integer that fits in `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Prints without surrounding parentheses only when the literal is a single
    /// token: a non-negative integer, `i`, or `<n>i` for a positive integer `n`.
    pub(crate) fn is_atomic_literal(&self) -> bool {
        if self.im.is_zero() {
            return self.re.is_integer() && !self.re.is_negative();
        }
        self.re.is_zero() && self.im.is_integer() && self.im.is_positive()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_imag(im: &BigRational) -> String {
    if im.is_one() {
        "i".to_string()
    } else if (-im).is_one() {
        "-i".to_string()
    } else if im.is_integer() {
        format!("{}i", im.to_integer())
    } else {
        format!("{}*i", fmt_rational(im))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return f.write_str(&fmt_imag(&self.im));
        }
        let re = fmt_rational(&self.re);
        if self.im.is_negative() {
            write!(f, "{}-{}", re, fmt_imag(&-self.im.clone()))
        } else {
            write!(f, "{}+{}", re, fmt_imag(&self.im))
        }
    }
}

impl<'a> Add<&'a Constant> for &'a Constant {
    type Output = Constant;
    fn add(self, rhs: &Constant) -> Constant {
        Constant::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Constant> for &'a Constant {
    type Output = Constant;
    fn sub(self, rhs: &Constant) -> Constant {
        Constant::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Constant> for &'a Constant {
    type Output = Constant;
    fn mul(self, rhs: &Constant) -> Constant {
        Constant::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a Constant> for &'a Constant {
    type Output = Option<Constant>;
    fn div(self, rhs: &Constant) -> Option<Constant> {
        rhs.recip().map(|r| self.mul(&r))
    }
}

impl Neg for &Constant {
    type Output = Constant;
    fn neg(self) -> Constant {
        Constant::new(-self.re.clone(), -self.im.clone())
    }
}

impl From<i64> for Constant {
    fn from(n: i64) -> Self {
        Constant::from_integer(n)
    }
}
