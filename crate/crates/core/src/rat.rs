//! Exact rationals with an inline fast path.
//!
//! Values whose lowest-terms numerator and denominator fit in `i64` are kept
//! inline and combined through `i128`; anything larger falls back to
//! `BigRational`. The representation is canonical (small whenever it fits,
//! denominator positive, lowest terms), so derived equality is structural.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl Default for Rat {
    fn default() -> Self {
        Rat::Small(0, 1)
    }
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    /// `num / den` in lowest terms. Panics if `den == 0`.
    pub fn ratio(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    /// Canonical form of a `BigRational`.
    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rat::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    /// Reciprocal. Panics on zero.
    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::ratio(*d as i128, *n as i128),
            Rat::Big(r) => Rat::from_big(r.recip()),
        }
    }
}

fn big_op(a: &Rat, b: &Rat, f: impl FnOnce(BigRational, BigRational) -> BigRational) -> Rat {
    Rat::from_big(f(a.to_big(), b.to_big()))
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Rat::ratio(*a as i128 + *c as i128, 1);
                }
                Rat::ratio(
                    *a as i128 * *d as i128 + *c as i128 * *b as i128,
                    *b as i128 * *d as i128,
                )
            }
            _ => big_op(self, rhs, |x, y| x + y),
        }
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &-rhs
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::ratio(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => big_op(self, rhs, |x, y| x * y),
        }
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::ratio(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => big_op(self, rhs, |x, y| x / y),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, *d),
                None => Rat::ratio(-(*n as i128), *d as i128),
            },
            Rat::Big(r) => Rat::from_big(-r.clone()),
        }
    }
}
