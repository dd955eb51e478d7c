//! Gaussian rationals: exact arithmetic in ℚ(i).
//!
//! Both parts are canonical rationals (lowest terms, positive denominator),
//! so derived equality is structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    re: Rat,
    im: Rat,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat::from_parts(Rat::from_big(re), Rat::from_big(im))
    }

    fn from_parts(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat::from_parts(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::from_parts(Rat::int(n), Rat::zero())
    }

    /// `num / den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        GaussRat::from_parts(Rat::ratio(num as i128, den as i128), Rat::zero())
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
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

    /// The value as an `i64` when it is a real integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_real() {
            self.re.to_i64()
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        GaussRat::from_parts(self.re.clone(), -&self.im)
    }

    /// Squared modulus `re² + im²`.
    pub fn norm(&self) -> BigRational {
        self.norm_rat().to_big()
    }

    fn norm_rat(&self) -> Rat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(GaussRat::from_parts(self.re.recip(), Rat::zero()));
        }
        let n = self.norm_rat();
        Ok(GaussRat::from_parts(&self.re / &n, -&(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &GaussRat) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GaussRat::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inv()?.pow((-k) as u32))
        }
    }

    /// Serialized form `"p/q"` or `"p/q±r/s i"`; the imaginary part is
    /// omitted when zero. Denominators are always written.
    pub fn to_exact_string(&self) -> String {
        let mut s = format!("{}/{}", self.re.numer(), self.re.denom());
        if !self.im.is_zero() {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            let a = self.im.abs();
            s.push_str(&format!("{}{}/{} i", sign, a.numer(), a.denom()));
        }
        s
    }

    /// True when printing needs parentheses in a product (both parts nonzero).
    pub(crate) fn needs_parens(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

/// Which scalar operation to run through [`scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Conj,
}

/// Dispatch entry for the field operations. Binary operations require `y`.
pub fn scalar_arith(op: ScalarOp, x: &GaussRat, y: Option<&GaussRat>) -> Result<GaussRat> {
    let need = || y.ok_or_else(|| Error::InvalidArgument("missing second operand".into()));
    Ok(match op {
        ScalarOp::Add => x + need()?,
        ScalarOp::Sub => x - need()?,
        ScalarOp::Mul => x * need()?,
        ScalarOp::Div => x.checked_div(need()?)?,
        ScalarOp::Neg => -x,
        ScalarOp::Conj => x.conj(),
    })
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl From<BigRational> for GaussRat {
    fn from(r: BigRational) -> Self {
        GaussRat::new(r, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::from_parts(&self.re + &rhs.re, Rat::zero());
        }
        GaussRat::from_parts(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::from_parts(&self.re - &rhs.re, Rat::zero());
        }
        GaussRat::from_parts(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.is_zero() || rhs.is_zero() {
            return GaussRat::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussRat::from_parts(&self.re * &rhs.re, Rat::zero()),
            (true, false) => GaussRat::from_parts(&self.re * &rhs.re, &self.re * &rhs.im),
            (false, true) => GaussRat::from_parts(&self.re * &rhs.re, &self.im * &rhs.re),
            (false, false) => GaussRat::from_parts(
                &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
                &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
            ),
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::from_parts(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &GaussRat) -> GaussRat {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussRat> for &'a GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::from_parts(-&self.re, -&self.im)
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re = &self.re + &rhs.re;
        if !rhs.im.is_zero() {
            self.im = &self.im + &rhs.im;
        }
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re = &self.re - &rhs.re;
        if !rhs.im.is_zero() {
            self.im = &self.im - &rhs.im;
        }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Compact human form: `3`, `-1/2`, `2i`, `1/2-3/4i`.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_str = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}i", fmt_rat(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_str}")
            } else {
                write!(f, "{im_str}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rat(&self.re), sign, im_str)
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Parses a signed real or imaginary part like `-3/4`, `2i`, `-i`, `1/2 i`.
fn parse_part(s: &str) -> Option<GaussRat> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        let body = body.trim();
        let (neg, mag) = match body.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, body.strip_prefix('+').unwrap_or(body).trim()),
        };
        let v = if mag.is_empty() {
            BigRational::one()
        } else {
            parse_rat(mag)?
        };
        let v = if neg { -v } else { v };
        Some(GaussRat::new(BigRational::zero(), v))
    } else {
        let s = s.strip_prefix('+').unwrap_or(s);
        Some(GaussRat::from(parse_rat(s)?))
    }
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts both the exact serialized form (`"1/2+3/1 i"`) and the compact
    /// display form (`"1/2+3i"`, `"-i"`, `"5"`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            column: 1,
            message: format!("invalid Gaussian rational `{s}`"),
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        // Split at a sign that is not the leading character.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let a = parse_part(&t[..i]).ok_or_else(bad)?;
                let b = parse_part(&t[i..]).ok_or_else(bad)?;
                if a.is_real() == b.is_real() {
                    return Err(bad());
                }
                Ok(a + b)
            }
            None => parse_part(t).ok_or_else(bad),
        }
    }
}

impl serde::Serialize for GaussRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_exact_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
