//! The coefficient algebra B and its evaluation homomorphism ψ.
//!
//! Three presentations are supported:
//!
//! * `Trivial`: B is the base field and ψ is the identity.
//! * `PolyQuot`: B = ℚ(i)[x]/(m) for a monic `m` with `m(a) = 0`; ψ evaluates at `a`.
//! * `Laurent`: B = ℚ(i)[t, t⁻¹]; ψ evaluates at a nonzero point `a`.
//!
//! Elements carry a shared handle to their presentation and are always kept
//! in canonical reduced form, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Span, SparseVec};
use crate::scalar::GaussRat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BKind {
    Trivial,
    PolyQuot,
    Laurent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BPresentation {
    kind: BKind,
    /// Low-to-high coefficients including the leading 1 (PolyQuot only).
    modulus: Vec<GaussRat>,
    eval_point: GaussRat,
}

pub type BRef = Arc<BPresentation>;

impl BPresentation {
    pub fn trivial() -> BRef {
        Arc::new(BPresentation {
            kind: BKind::Trivial,
            modulus: Vec::new(),
            eval_point: GaussRat::zero(),
        })
    }

    pub fn laurent(eval_point: GaussRat) -> Result<BRef> {
        if eval_point.is_zero() {
            return Err(Error::InvalidPresentation(
                "Laurent evaluation point must be nonzero".into(),
            ));
        }
        Ok(Arc::new(BPresentation {
            kind: BKind::Laurent,
            modulus: Vec::new(),
            eval_point,
        }))
    }

    /// `modulus` is given low-to-high and must be monic of degree ≥ 1 with
    /// `modulus(eval_point) = 0`.
    pub fn polyquot(modulus: Vec<GaussRat>, eval_point: GaussRat) -> Result<BRef> {
        let mut modulus = modulus;
        while modulus.last().is_some_and(GaussRat::is_zero) {
            modulus.pop();
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidPresentation(
                "modulus must have degree >= 1".into(),
            ));
        }
        if !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidPresentation("modulus must be monic".into()));
        }
        let value = horner(&modulus, &eval_point);
        if !value.is_zero() {
            return Err(Error::InvalidPresentation(format!(
                "modulus does not vanish at the evaluation point {eval_point} (value {value})"
            )));
        }
        Ok(Arc::new(BPresentation {
            kind: BKind::PolyQuot,
            modulus,
            eval_point,
        }))
    }

    /// ℚ(i)[x]/((x − a)^k) evaluated at `a`.
    pub fn local(eval_point: GaussRat, k: u32) -> Result<BRef> {
        let modulus = dense(&linear_power(&eval_point, k));
        Self::polyquot(modulus, eval_point)
    }

    pub fn kind(&self) -> BKind {
        self.kind
    }

    pub fn modulus(&self) -> &[GaussRat] {
        &self.modulus
    }

    pub fn eval_point(&self) -> &GaussRat {
        &self.eval_point
    }

    /// Degree of the modulus (PolyQuot only).
    fn modulus_degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Smallest `k` with `M^k = 0` for `M = ker ψ`, if any power vanishes.
    pub fn nilpotency_index(self: &Arc<Self>) -> Option<u32> {
        match self.kind {
            BKind::Trivial => Some(1),
            BKind::Laurent => None,
            BKind::PolyQuot => {
                let deg = self.modulus_degree() as u32;
                let mut prev_rank = usize::MAX;
                for k in 1..=deg {
                    let rank = self.power_ideal_span(k).dim();
                    if rank == 0 {
                        return Some(k);
                    }
                    if rank == prev_rank {
                        return None;
                    }
                    prev_rank = rank;
                }
                None
            }
        }
    }

    /// Image of multiplication by `(x − a)^k` on the quotient, as a span in
    /// the monomial basis.
    fn power_ideal_span(self: &Arc<Self>, k: u32) -> Span<i64> {
        let gen =
            BElem::from_poly(self, linear_power(&self.eval_point, k)).expect("polynomial in range");
        let mut span = Span::new();
        for j in 0..self.modulus_degree() as i64 {
            let basis = BElem::monomial(self, j).expect("nonnegative exponent");
            span.insert(&(&gen * &basis).rep);
        }
        span
    }
}

/// `(x − a)^k` as a sparse polynomial.
fn linear_power(a: &GaussRat, k: u32) -> SparseVec<i64> {
    let mut p: SparseVec<i64> = BTreeMap::from([(0, GaussRat::one())]);
    for _ in 0..k {
        let mut next = SparseVec::new();
        for (e, c) in &p {
            add_term(&mut next, e + 1, c.clone());
            add_term(&mut next, *e, -(c * a));
        }
        p = next;
    }
    p
}

fn dense(p: &SparseVec<i64>) -> Vec<GaussRat> {
    let top = p.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut out = vec![GaussRat::zero(); top + 1];
    for (e, c) in p {
        out[*e as usize] = c.clone();
    }
    out
}

fn horner(coeffs: &[GaussRat], x: &GaussRat) -> GaussRat {
    coeffs
        .iter()
        .rev()
        .fold(GaussRat::zero(), |acc, c| &(&acc * x) + c)
}

fn add_term(p: &mut SparseVec<i64>, e: i64, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(e).or_default();
    *slot += &c;
    if slot.is_zero() {
        p.remove(&e);
    }
}

/// An element of B in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BElem {
    pres: BRef,
    rep: SparseVec<i64>,
}

impl BElem {
    pub fn zero(pres: &BRef) -> Self {
        BElem {
            pres: pres.clone(),
            rep: SparseVec::new(),
        }
    }

    pub fn one(pres: &BRef) -> Self {
        Self::scalar(pres, GaussRat::one())
    }

    pub fn scalar(pres: &BRef, c: GaussRat) -> Self {
        let mut rep = SparseVec::new();
        if !c.is_zero() {
            rep.insert(0, c);
        }
        BElem {
            pres: pres.clone(),
            rep,
        }
    }

    /// `x^e` (PolyQuot) or `t^e` (Laurent, any sign).
    pub fn monomial(pres: &BRef, e: i64) -> Result<Self> {
        Self::from_poly(pres, BTreeMap::from([(e, GaussRat::one())]))
    }

    /// The algebra generator: `x` or `t`. Errors for the trivial presentation.
    pub fn generator(pres: &BRef) -> Result<Self> {
        Self::monomial(pres, 1)
    }

    /// Builds an element from exponent → coefficient pairs and reduces it.
    pub fn from_poly(pres: &BRef, poly: SparseVec<i64>) -> Result<Self> {
        let mut rep: SparseVec<i64> = poly.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        match pres.kind {
            BKind::Trivial => {
                if rep.keys().any(|&e| e != 0) {
                    return Err(Error::InvalidArgument(
                        "the trivial presentation has no generator".into(),
                    ));
                }
            }
            BKind::PolyQuot => {
                if rep.keys().any(|&e| e < 0) {
                    return Err(Error::InvalidArgument(
                        "negative exponent in a polynomial quotient".into(),
                    ));
                }
                reduce_mod(&mut rep, &pres.modulus);
            }
            BKind::Laurent => {}
        }
        Ok(BElem {
            pres: pres.clone(),
            rep,
        })
    }

    pub fn from_coeffs(pres: &BRef, low_to_high: &[GaussRat]) -> Result<Self> {
        Self::from_poly(
            pres,
            low_to_high
                .iter()
                .enumerate()
                .map(|(e, c)| (e as i64, c.clone()))
                .collect(),
        )
    }

    pub fn presentation(&self) -> &BRef {
        &self.pres
    }

    /// Exponent → coefficient map of the canonical representative.
    pub fn representative(&self) -> &SparseVec<i64> {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rep.len() == 1 && self.rep.get(&0).is_some_and(GaussRat::is_one)
    }

    /// The constant value when the representative is a constant.
    pub fn as_scalar(&self) -> Option<GaussRat> {
        match self.rep.len() {
            0 => Some(GaussRat::zero()),
            1 => self.rep.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn same_presentation(&self, other: &BElem) -> bool {
        Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres
    }

    fn check(&self, other: &BElem) -> Result<()> {
        if self.same_presentation(other) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn try_add(&self, other: &BElem) -> Result<BElem> {
        self.check(other)?;
        let mut rep = self.rep.clone();
        for (e, c) in &other.rep {
            add_term(&mut rep, *e, c.clone());
        }
        Ok(BElem {
            pres: self.pres.clone(),
            rep,
        })
    }

    pub fn try_sub(&self, other: &BElem) -> Result<BElem> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &BElem) -> Result<BElem> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(BElem::zero(&self.pres));
        }
        if let Some(c) = self.as_scalar() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.as_scalar() {
            return Ok(self.scale(&c));
        }
        let mut rep = SparseVec::new();
        for (e1, c1) in &self.rep {
            for (e2, c2) in &other.rep {
                add_term(&mut rep, e1 + e2, c1 * c2);
            }
        }
        if self.pres.kind == BKind::PolyQuot {
            reduce_mod(&mut rep, &self.pres.modulus);
        }
        Ok(BElem {
            pres: self.pres.clone(),
            rep,
        })
    }

    pub fn neg(&self) -> BElem {
        BElem {
            pres: self.pres.clone(),
            rep: self.rep.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> BElem {
        if c.is_zero() {
            return BElem::zero(&self.pres);
        }
        BElem {
            pres: self.pres.clone(),
            rep: self.rep.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> BElem {
        let mut acc = BElem::one(&self.pres);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// ψ(b): the representative evaluated at the designated point.
    pub fn eval_psi(&self) -> GaussRat {
        match self.pres.kind {
            BKind::Trivial => self.rep.get(&0).cloned().unwrap_or_default(),
            _ => {
                let a = &self.pres.eval_point;
                let mut acc = GaussRat::zero();
                for (e, c) in &self.rep {
                    let p = a.powi(*e).expect("evaluation point is nonzero for Laurent");
                    acc += &(c * &p);
                }
                acc
            }
        }
    }

    /// Whether `b ∈ M^k` for `M = ker ψ`.
    pub fn ideal_membership(&self, k: u32) -> Result<bool> {
        if k == 0 {
            return Err(Error::InvalidArgument("ideal power must be >= 1".into()));
        }
        if self.is_zero() {
            return Ok(true);
        }
        match self.pres.kind {
            BKind::Trivial => Ok(false),
            BKind::PolyQuot => Ok(self.pres.power_ideal_span(k).contains(&self.rep)),
            BKind::Laurent => {
                // Clear the unit power of t, then divide by (t − a) k times.
                let low = *self.rep.keys().next().unwrap();
                let top = (*self.rep.keys().next_back().unwrap() - low) as usize;
                let mut coeffs = vec![GaussRat::zero(); top + 1];
                for (e, c) in &self.rep {
                    coeffs[(e - low) as usize] = c.clone();
                }
                let a = &self.pres.eval_point;
                for _ in 0..k {
                    if coeffs.len() < 2 {
                        return Ok(false);
                    }
                    let (quot, rem) = synthetic_division(&coeffs, a);
                    if !rem.is_zero() {
                        return Ok(false);
                    }
                    coeffs = quot;
                }
                Ok(true)
            }
        }
    }
}

/// Divides by `(x − a)`; returns (quotient, remainder).
fn synthetic_division(coeffs: &[GaussRat], a: &GaussRat) -> (Vec<GaussRat>, GaussRat) {
    let n = coeffs.len();
    let mut quot = vec![GaussRat::zero(); n - 1];
    let mut carry = GaussRat::zero();
    for i in (0..n).rev() {
        let v = &coeffs[i] + &(&carry * a);
        if i == 0 {
            return (quot, v);
        }
        quot[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Reduces a polynomial modulo a monic modulus in place.
fn reduce_mod(p: &mut SparseVec<i64>, modulus: &[GaussRat]) {
    let deg = (modulus.len() - 1) as i64;
    while let Some((&e, _)) = p.iter().next_back() {
        if e < deg {
            break;
        }
        let c = p.remove(&e).unwrap();
        let shift = e - deg;
        for (j, m) in modulus[..deg as usize].iter().enumerate() {
            if !m.is_zero() {
                add_term(p, shift + j as i64, -(&c * m));
            }
        }
    }
}

macro_rules! belem_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> std::ops::$tr<&'a BElem> for &'a BElem {
            type Output = BElem;
            /// Panics on mixed presentations; use the `try_` form to handle that.
            fn $m(self, rhs: &BElem) -> BElem {
                self.$f(rhs).expect("B presentations agree")
            }
        }
    };
}
belem_op!(Add, add, try_add);
belem_op!(Sub, sub, try_sub);
belem_op!(Mul, mul, try_mul);

pub fn b_add(x: &BElem, y: &BElem) -> Result<BElem> {
    x.try_add(y)
}

pub fn b_sub(x: &BElem, y: &BElem) -> Result<BElem> {
    x.try_sub(y)
}

pub fn b_mul(x: &BElem, y: &BElem) -> Result<BElem> {
    x.try_mul(y)
}

pub fn eval_psi(b: &BElem) -> GaussRat {
    b.eval_psi()
}

pub fn ideal_membership(b: &BElem, k: u32) -> Result<bool> {
    b.ideal_membership(k)
}

impl BElem {
    /// The generator symbol used when printing.
    fn var(&self) -> &'static str {
        match self.pres.kind {
            BKind::Laurent => "t",
            _ => "x",
        }
    }
}

/// Polynomial form, highest exponent first: `4x-4`, `t+1/3t^-1`, `(1+i)x^2`.
impl fmt::Display for BElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_empty() {
            return write!(f, "0");
        }
        let var = self.var();
        let mut first = true;
        for (e, c) in self.rep.iter().rev() {
            let (neg, mag) = if c.is_real() && c.re() < num_rational::BigRational::default() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                e => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else if mag.needs_parens() {
                write!(f, "({mag}){mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BElem({self})")
    }
}

/// Serialized presentation, as it appears inside the CLI configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPresentationSpec {
    pub kind: BKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<GaussRat>,
    #[serde(default)]
    pub eval_point: Option<GaussRat>,
}

impl BPresentationSpec {
    pub fn build(&self) -> Result<BRef> {
        match self.kind {
            BKind::Trivial => Ok(BPresentation::trivial()),
            BKind::Laurent => BPresentation::laurent(self.point()?),
            BKind::PolyQuot => BPresentation::polyquot(self.modulus.clone(), self.point()?),
        }
    }

    fn point(&self) -> Result<GaussRat> {
        self.eval_point
            .clone()
            .ok_or_else(|| Error::InvalidPresentation("eval_point is required".into()))
    }
}

impl From<&BPresentation> for BPresentationSpec {
    fn from(p: &BPresentation) -> Self {
        BPresentationSpec {
            kind: p.kind,
            modulus: p.modulus.clone(),
            eval_point: match p.kind {
                BKind::Trivial => None,
                _ => Some(p.eval_point.clone()),
            },
        }
    }
}
