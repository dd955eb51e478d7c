//! Elements and brackets of τ = (A ⋊ Der A) ⊗ B.
//!
//! An element is a sparse map from basis keys `t^r` / `D^i(r)` to
//! coefficients in B. `D(u, r) ⊗ b` is stored as the `n` entries
//! `D^i(r) ↦ u_i·b`, so the B-linear structure lives in the coefficients and
//! every element has a unique canonical form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeffalg::{BElem, BRef};
use crate::error::{Error, Result};
use crate::scalar::GaussRat;

/// An exponent vector `r ∈ ℤⁿ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Degree(pub Vec<i64>);

impl Degree {
    pub fn zero(n: usize) -> Self {
        Degree(vec![0; n])
    }

    /// The unit vector `e_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Degree(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `(u, r) = Σ u_i r_i`.
    pub fn pair(&self, u: &[GaussRat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (ui, &ri) in u.iter().zip(&self.0) {
            if ri != 0 && !ui.is_zero() {
                acc += &(ui * &GaussRat::from_int(ri));
            }
        }
        acc
    }

    /// Componentwise absolute value.
    pub fn abs(&self) -> Degree {
        Degree(self.0.iter().map(|x| x.abs()).collect())
    }
}

impl From<Vec<i64>> for Degree {
    fn from(v: Vec<i64>) -> Self {
        Degree(v)
    }
}

impl<'a> Add<&'a Degree> for &'a Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        debug_assert_eq!(self.rank(), rhs.rank());
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Degree> for &'a Degree {
    type Output = Degree;
    fn sub(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which basis family a key belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Kind {
    /// `t^r` in A.
    A,
    /// `D^i(r)`, 0-based `i`.
    D(usize),
}

/// Basis key; ordered by degree first, with `t^r` before `D^i(r)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Key {
    pub degree: Degree,
    pub kind: Kind,
}

impl Key {
    pub fn a(degree: Degree) -> Self {
        Key {
            degree,
            kind: Kind::A,
        }
    }

    pub fn d(i: usize, degree: Degree) -> Self {
        Key {
            degree,
            kind: Kind::D(i),
        }
    }
}

/// Structure constants of `[k1, k2]` as integer multiples of basis keys.
pub fn basis_bracket(k1: &Key, k2: &Key) -> Vec<(Key, i64)> {
    let (r, s) = (&k1.degree, &k2.degree);
    let sum = r + s;
    match (k1.kind, k2.kind) {
        (Kind::A, Kind::A) => Vec::new(),
        // [D^i(r), t^s] = s_i t^{r+s}
        (Kind::D(i), Kind::A) => nonzero(vec![(Key::a(sum), s.0[i])]),
        (Kind::A, Kind::D(j)) => nonzero(vec![(Key::a(sum), -r.0[j])]),
        // [D(e_i,r), D(e_j,s)] = D(w, r+s), w = s_i e_j − r_j e_i
        (Kind::D(i), Kind::D(j)) => {
            if i == j {
                nonzero(vec![(Key::d(i, sum), s.0[i] - r.0[i])])
            } else {
                nonzero(vec![
                    (Key::d(j, sum.clone()), s.0[i]),
                    (Key::d(i, sum), -r.0[j]),
                ])
            }
        }
    }
}

fn nonzero(v: Vec<(Key, i64)>) -> Vec<(Key, i64)> {
    v.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Memoized structure constants.
#[derive(Default, Debug)]
pub struct BracketTable {
    cache: HashMap<(Key, Key), Vec<(Key, i64)>>,
}

impl BracketTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }

    pub fn get(&mut self, k1: &Key, k2: &Key) -> &[(Key, i64)] {
        self.cache
            .entry((k1.clone(), k2.clone()))
            .or_insert_with(|| basis_bracket(k1, k2))
    }

    /// Same result as [`LoopElem::bracket`], reading constants through the cache.
    pub fn bracket(&mut self, x: &LoopElem, y: &LoopElem) -> Result<LoopElem> {
        x.check(y)?;
        let mut out = LoopElem::zero(x.rank, &x.pres);
        for (k1, b1) in &x.terms {
            for (k2, b2) in &y.terms {
                let consts = self.get(k1, k2).to_vec();
                if consts.is_empty() {
                    continue;
                }
                let bb = b1 * b2;
                for (k, c) in consts {
                    out.add_term(k, bb.scale(&GaussRat::from_int(c)));
                }
            }
        }
        Ok(out)
    }
}

/// A finite linear combination of `t^r ⊗ b` and `D^i(r) ⊗ b`.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopElem {
    rank: usize,
    pres: BRef,
    terms: BTreeMap<Key, BElem>,
}

impl LoopElem {
    pub fn zero(rank: usize, pres: &BRef) -> Self {
        LoopElem {
            rank,
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `t^r ⊗ b`.
    pub fn t(r: Degree, b: BElem) -> Self {
        let mut out = LoopElem::zero(r.rank(), b.presentation());
        out.add_term(Key::a(r), b);
        out
    }

    /// `D(u, r) ⊗ b`.
    pub fn d(u: &[GaussRat], r: Degree, b: BElem) -> Result<Self> {
        if u.len() != r.rank() {
            return Err(Error::RankMismatch {
                expected: r.rank(),
                found: u.len(),
            });
        }
        let mut out = LoopElem::zero(r.rank(), b.presentation());
        for (i, ui) in u.iter().enumerate() {
            out.add_term(Key::d(i, r.clone()), b.scale(ui));
        }
        Ok(out)
    }

    /// `D^i(r) ⊗ b` (0-based `i`).
    pub fn d_basis(i: usize, r: Degree, b: BElem) -> Self {
        let mut out = LoopElem::zero(r.rank(), b.presentation());
        out.add_term(Key::d(i, r), b);
        out
    }

    pub fn from_terms(
        rank: usize,
        pres: &BRef,
        terms: impl IntoIterator<Item = (Key, BElem)>,
    ) -> Self {
        let mut out = LoopElem::zero(rank, pres);
        for (k, b) in terms {
            out.add_term(k, b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn presentation(&self) -> &BRef {
        &self.pres
    }

    pub fn terms(&self) -> &BTreeMap<Key, BElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether every term lies in the abelian ideal A ⊗ B.
    pub fn is_abelian_part(&self) -> bool {
        self.terms.keys().all(|k| k.kind == Kind::A)
    }

    pub fn coefficient(&self, key: &Key) -> Option<&BElem> {
        self.terms.get(key)
    }

    pub(crate) fn add_term(&mut self, key: Key, b: BElem) {
        debug_assert_eq!(key.degree.rank(), self.rank);
        if b.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = &*e + &b;
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, b);
            }
        }
    }

    fn check(&self, other: &LoopElem) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if !(std::sync::Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres) {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LoopElem) -> Result<LoopElem> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, b) in &other.terms {
            out.add_term(k.clone(), b.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LoopElem) -> Result<LoopElem> {
        self.try_add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRat) -> LoopElem {
        let mut out = LoopElem::zero(self.rank, &self.pres);
        if c.is_zero() {
            return out;
        }
        for (k, b) in &self.terms {
            out.terms.insert(k.clone(), b.scale(c));
        }
        out
    }

    /// `X ⊗ b ↦ X ⊗ b·b′` on every term.
    pub fn mul_b(&self, b: &BElem) -> Result<LoopElem> {
        let mut out = LoopElem::zero(self.rank, &self.pres);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.try_mul(b)?);
        }
        Ok(out)
    }

    /// The Lie bracket, extended bilinearly from the basis brackets.
    pub fn bracket(&self, other: &LoopElem) -> Result<LoopElem> {
        self.check(other)?;
        let mut out = LoopElem::zero(self.rank, &self.pres);
        for (k1, b1) in &self.terms {
            for (k2, b2) in &other.terms {
                let consts = basis_bracket(k1, k2);
                if consts.is_empty() {
                    continue;
                }
                let bb = b1 * b2;
                for (k, c) in consts {
                    out.add_term(k, bb.scale(&GaussRat::from_int(c)));
                }
            }
        }
        Ok(out)
    }

    /// The common degree `m` of a homogeneous element, checked against
    /// `[D(e_i, 0), x] = m_i x` for every `i`.
    pub fn ad_weight(&self) -> Result<Degree> {
        let mut keys = self.terms.keys();
        let first = keys.next().ok_or(Error::ZeroElement)?.degree.clone();
        if keys.any(|k| k.degree != first) {
            return Err(Error::NotHomogeneous);
        }
        for i in 0..self.rank {
            let h = LoopElem::d_basis(i, Degree::zero(self.rank), BElem::one(&self.pres));
            let lhs = h.bracket(self)?;
            let rhs = self.scale(&GaussRat::from_int(first.0[i]));
            if lhs != rhs {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(first)
    }

    /// Degrees present in the element, in ascending order without repeats.
    pub fn degrees(&self) -> Vec<Degree> {
        let mut out: Vec<Degree> = self.terms.keys().map(|k| k.degree.clone()).collect();
        out.dedup();
        out
    }
}

impl<'a> Add<&'a LoopElem> for &'a LoopElem {
    type Output = LoopElem;
    fn add(self, rhs: &LoopElem) -> LoopElem {
        self.try_add(rhs).expect("compatible operands")
    }
}

impl<'a> Sub<&'a LoopElem> for &'a LoopElem {
    type Output = LoopElem;
    fn sub(self, rhs: &LoopElem) -> LoopElem {
        self.try_sub(rhs).expect("compatible operands")
    }
}

impl fmt::Display for LoopElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::format_elem(self))
    }
}

impl fmt::Debug for LoopElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopElem[{self}]")
    }
}

pub fn bracket(x: &LoopElem, y: &LoopElem) -> Result<LoopElem> {
    x.bracket(y)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_residual(x: &LoopElem, y: &LoopElem, z: &LoopElem) -> Result<LoopElem> {
    let a = x.bracket(&y.bracket(z)?)?;
    let b = y.bracket(&z.bracket(x)?)?;
    let c = z.bracket(&x.bracket(y)?)?;
    a.try_add(&b)?.try_add(&c)
}

pub fn ad_weight(x: &LoopElem) -> Result<Degree> {
    x.ad_weight()
}

/// τ for a fixed rank and coefficient presentation; hands out elements and
/// the rank-one special families.
#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    rank: usize,
    pres: BRef,
}

impl LoopAlgebra {
    pub fn new(rank: usize, pres: BRef) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        Ok(LoopAlgebra { rank, pres })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn presentation(&self) -> &BRef {
        &self.pres
    }

    pub fn zero(&self) -> LoopElem {
        LoopElem::zero(self.rank, &self.pres)
    }

    pub fn one_b(&self) -> BElem {
        BElem::one(&self.pres)
    }

    fn require_rank_one(&self) -> Result<()> {
        if self.rank == 1 {
            Ok(())
        } else {
            Err(Error::RankNotOne(self.rank))
        }
    }

    /// `d_m = t^m d` (rank one).
    pub fn witt(&self, m: i64) -> Result<LoopElem> {
        self.require_rank_one()?;
        Ok(LoopElem::d_basis(0, Degree(vec![m]), self.one_b()))
    }

    /// `I(r) = (t^r − 1) d = d_r − d_0` (rank one).
    pub fn i_elem(&self, r: i64) -> Result<LoopElem> {
        self.witt(r)?.try_sub(&self.witt(0)?)
    }

    /// `(t − 1)^k d_i = Σ_j C(k,j) (−1)^{k−j} d_{i+j}` (rank one).
    pub fn poly_derivation(&self, k: u32, i: i64) -> Result<LoopElem> {
        self.require_rank_one()?;
        let mut out = self.zero();
        let mut binom: i64 = 1;
        for j in 0..=k as i64 {
            let sign = if (k as i64 - j) % 2 == 0 { 1 } else { -1 };
            out.add_term(
                Key::d(0, Degree(vec![i + j])),
                BElem::scalar(&self.pres, GaussRat::from_int(sign * binom)),
            );
            binom = binom * (k as i64 - j) / (j + 1);
        }
        Ok(out)
    }

    /// `[(t−1)^k d_i, (t−1)^l d_j] − (l−k+j−i)(t−1)^{k+l} d_{i+j} − (l−k)(t−1)^{k+l−1} d_{i+j}`.
    pub fn poly_derivation_bracket_residual(
        &self,
        k: u32,
        l: u32,
        i: i64,
        j: i64,
    ) -> Result<LoopElem> {
        let lhs = self
            .poly_derivation(k, i)?
            .bracket(&self.poly_derivation(l, j)?)?;
        let c1 = l as i64 - k as i64 + j - i;
        let mut rhs = self
            .poly_derivation(k + l, i + j)?
            .scale(&GaussRat::from_int(c1));
        // (l − k) vanishes whenever k + l = 0, so the second term only
        // appears with a nonnegative power.
        if k + l >= 1 {
            let c2 = l as i64 - k as i64;
            rhs = rhs.try_add(
                &self
                    .poly_derivation(k + l - 1, i + j)?
                    .scale(&GaussRat::from_int(c2)),
            )?;
        }
        lhs.try_sub(&rhs)
    }

    /// `[I(r), I(s)] − ((s−r) I(r+s) + r I(r) − s I(s))`.
    pub fn i_bracket_residual(&self, r: i64, s: i64) -> Result<LoopElem> {
        let lhs = self.i_elem(r)?.bracket(&self.i_elem(s)?)?;
        let rhs = self
            .i_elem(r + s)?
            .scale(&GaussRat::from_int(s - r))
            .try_add(&self.i_elem(r)?.scale(&GaussRat::from_int(r)))?
            .try_sub(&self.i_elem(s)?.scale(&GaussRat::from_int(s)))?;
        lhs.try_sub(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffalg::BPresentation;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn deg(v: &[i64]) -> Degree {
        Degree(v.to_vec())
    }

    #[test]
    fn witt_bracket() {
        let alg = LoopAlgebra::new(1, BPresentation::trivial()).unwrap();
        let b = alg
            .witt(1)
            .unwrap()
            .bracket(&alg.witt(-1).unwrap())
            .unwrap();
        assert_eq!(b, alg.witt(0).unwrap().scale(&g("-2")));
        for m in -3..=3 {
            for n in -3..=3 {
                let lhs = alg.witt(m).unwrap().bracket(&alg.witt(n).unwrap()).unwrap();
                let rhs = alg.witt(m + n).unwrap().scale(&GaussRat::from_int(n - m));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rank_two_d_bracket() {
        let p = BPresentation::trivial();
        let one = BElem::one(&p);
        let x = LoopElem::d(&[g("1"), g("0")], deg(&[0, 1]), one.clone()).unwrap();
        let y = LoopElem::d(&[g("0"), g("1")], deg(&[1, 0]), one.clone()).unwrap();
        let expected = LoopElem::d(&[g("-1"), g("1")], deg(&[1, 1]), one).unwrap();
        assert_eq!(x.bracket(&y).unwrap(), expected);
    }

    #[test]
    fn d_t_bracket_with_polyquot() {
        let p = BPresentation::local(g("2"), 2).unwrap();
        let x = BElem::generator(&p).unwrap();
        let d = LoopElem::d(&[g("1"), g("0")], deg(&[1, 0]), x.clone()).unwrap();
        let t = LoopElem::t(deg(&[1, 0]), x);
        let four_x_minus_4 = BElem::from_coeffs(&p, &[g("-4"), g("4")]).unwrap();
        assert_eq!(
            d.bracket(&t).unwrap(),
            LoopElem::t(deg(&[2, 0]), four_x_minus_4)
        );
    }

    #[test]
    fn abelian_part() {
        let p = BPresentation::laurent(g("3")).unwrap();
        let t1 = LoopElem::t(deg(&[1, -1]), BElem::generator(&p).unwrap());
        let t2 = LoopElem::t(deg(&[0, 2]), BElem::one(&p));
        assert!(t1.bracket(&t2).unwrap().is_zero());
    }

    #[test]
    fn ad_weight_examples() {
        let p = BPresentation::trivial();
        let one = BElem::one(&p);
        assert_eq!(
            LoopElem::t(deg(&[1, 2]), one.clone()).ad_weight().unwrap(),
            deg(&[1, 2])
        );
        assert_eq!(
            LoopElem::d_basis(0, deg(&[0]), one.clone())
                .ad_weight()
                .unwrap(),
            deg(&[0])
        );
        let mixed =
            &LoopElem::t(deg(&[1, 0]), one.clone()) + &LoopElem::t(deg(&[0, 1]), one.clone());
        assert_eq!(mixed.ad_weight(), Err(Error::NotHomogeneous));
        assert_eq!(LoopElem::zero(2, &p).ad_weight(), Err(Error::ZeroElement));
    }

    #[test]
    fn poly_derivation_expansions() {
        let alg = LoopAlgebra::new(1, BPresentation::trivial()).unwrap();
        assert_eq!(alg.poly_derivation(0, 5).unwrap(), alg.witt(5).unwrap());
        assert_eq!(alg.poly_derivation(1, 0).unwrap(), alg.i_elem(1).unwrap());
        let expected = &(&alg.witt(1).unwrap() - &alg.witt(0).unwrap().scale(&g("2")))
            + &alg.witt(-1).unwrap();
        assert_eq!(alg.poly_derivation(2, -1).unwrap(), expected);
        let rank2 = LoopAlgebra::new(2, BPresentation::trivial()).unwrap();
        assert_eq!(rank2.poly_derivation(1, 0), Err(Error::RankNotOne(2)));
    }

    #[test]
    fn derivation_bracket_examples() {
        let alg = LoopAlgebra::new(1, BPresentation::trivial()).unwrap();
        assert!(alg
            .poly_derivation_bracket_residual(0, 0, 2, -1)
            .unwrap()
            .is_zero());
        assert!(alg
            .poly_derivation_bracket_residual(1, 1, 0, 1)
            .unwrap()
            .is_zero());
        assert!(alg
            .poly_derivation_bracket_residual(2, 3, -1, 2)
            .unwrap()
            .is_zero());
        assert!(alg.i_bracket_residual(2, 2).unwrap().is_zero());
        assert!(alg.i_bracket_residual(1, -1).unwrap().is_zero());
        assert!(alg.i_bracket_residual(2, 3).unwrap().is_zero());
    }

    #[test]
    fn i_bracket_hand_expansion() {
        // [I(1), I(−1)] = −2d₀ + d₁ + d₋₁
        let alg = LoopAlgebra::new(1, BPresentation::trivial()).unwrap();
        let lhs = alg
            .i_elem(1)
            .unwrap()
            .bracket(&alg.i_elem(-1).unwrap())
            .unwrap();
        let expected = &(&alg.witt(1).unwrap() + &alg.witt(-1).unwrap())
            - &alg.witt(0).unwrap().scale(&g("2"));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn bracket_table_agrees() {
        let p = BPresentation::local(g("2"), 3).unwrap();
        let x = BElem::generator(&p).unwrap();
        let a = &LoopElem::d(&[g("1"), g("2")], deg(&[1, -1]), x.clone()).unwrap()
            + &LoopElem::t(deg(&[0, 2]), BElem::one(&p));
        let b = &LoopElem::d(&[g("-1"), g("1/2")], deg(&[2, 0]), BElem::one(&p)).unwrap()
            + &LoopElem::t(deg(&[1, 1]), x);
        let mut table = BracketTable::new();
        assert_eq!(table.bracket(&a, &b).unwrap(), a.bracket(&b).unwrap());
        for ((k1, k2), consts) in table.cache.iter() {
            assert_eq!(consts, &basis_bracket(k1, k2));
        }
        assert!(!table.is_empty());
    }

    #[test]
    fn mismatches_are_errors() {
        let p = BPresentation::trivial();
        let q = BPresentation::laurent(g("3")).unwrap();
        let a = LoopElem::t(deg(&[1]), BElem::one(&p));
        let b = LoopElem::t(deg(&[1, 0]), BElem::one(&p));
        let c = LoopElem::t(deg(&[1]), BElem::one(&q));
        assert!(matches!(a.bracket(&b), Err(Error::RankMismatch { .. })));
        assert_eq!(a.bracket(&c), Err(Error::PresentationMismatch));
    }
}
