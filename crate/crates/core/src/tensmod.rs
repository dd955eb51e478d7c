//! Truncated tensor-field modules `V(μ,c) ⊗ A` on a finite box of degrees.
//!
//! A vector is a sparse map from degree `m` to a coordinate vector in the
//! irrep basis. The loop-Witt algebra acts by
//!
//! ```text
//! t^r ⊗ b     . v ⊗ t^m = ψ(b) v ⊗ t^{m+r}
//! D^i(r) ⊗ b  . v ⊗ t^m = ψ(b) ((m_i + α_i) v + Σ_j r_j E_{ji} v) ⊗ t^{m+r}
//! ```
//!
//! Only degrees inside the window exist; strict mode refuses to leave it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeffalg::{BElem, BRef};
use crate::error::{Error, Result};
use crate::glnrep::Irrep;
use crate::linalg::Matrix;
use crate::loopalg::{Degree, Kind, LoopElem};
use crate::scalar::GaussRat;

/// The box `{m : |m_i| ≤ radius}` in `ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    n: usize,
    radius: i64,
    interior_margin: i64,
}

impl Window {
    pub fn new(n: usize, radius: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "window rank must be positive".into(),
            ));
        }
        if radius < 0 {
            return Err(Error::InvalidArgument(format!(
                "window radius {radius} is negative"
            )));
        }
        Ok(Window {
            n,
            radius,
            interior_margin: 0,
        })
    }

    /// Sets the default margin used by [`Window::default_interior`].
    pub fn with_margin(mut self, margin: i64) -> Result<Self> {
        if margin < 0 || margin > self.radius {
            return Err(Error::WindowTooSmall(format!(
                "margin {margin} does not fit radius {}",
                self.radius
            )));
        }
        self.interior_margin = margin;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn interior_margin(&self) -> i64 {
        self.interior_margin
    }

    pub fn contains(&self, m: &Degree) -> bool {
        m.rank() == self.n && m.0.iter().all(|x| x.abs() <= self.radius)
    }

    /// Whether `m` keeps at least `margin[i]` from the boundary in every axis.
    pub fn in_interior(&self, m: &Degree, margin: &Degree) -> bool {
        m.rank() == self.n
            && m.0
                .iter()
                .zip(&margin.0)
                .all(|(x, k)| x.abs() + k.abs() <= self.radius)
    }

    /// Every degree of the window in lexicographic order.
    pub fn degrees(&self) -> Vec<Degree> {
        self.interior(&Degree(vec![0; self.n]))
    }

    /// Degrees with `|m_i| ≤ R − |margin_i|`, lexicographically; empty when
    /// some axis has no room left.
    pub fn interior(&self, margin: &Degree) -> Vec<Degree> {
        let bounds: Vec<i64> = margin.0.iter().map(|k| self.radius - k.abs()).collect();
        if bounds.iter().any(|b| *b < 0) {
            return Vec::new();
        }
        let mut out = vec![Vec::with_capacity(self.n)];
        for b in bounds {
            let mut next = Vec::with_capacity(out.len() * (2 * b as usize + 1));
            for prefix in &out {
                for x in -b..=b {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(Degree).collect()
    }

    /// Interior with the same scalar margin on every axis.
    pub fn interior_uniform(&self, k: i64) -> Vec<Degree> {
        self.interior(&Degree(vec![k; self.n]))
    }

    pub fn default_interior(&self) -> Vec<Degree> {
        self.interior_uniform(self.interior_margin)
    }

    pub fn len(&self) -> usize {
        ((2 * self.radius + 1) as usize).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A vector of the truncated module: slice degree ↦ coordinates.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ModVector {
    slices: BTreeMap<Degree, Vec<GaussRat>>,
}

impl ModVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e_k ⊗ t^m` in a module of slice dimension `d`.
    pub fn basis(m: Degree, k: usize, d: usize) -> Self {
        let mut v = vec![GaussRat::zero(); d];
        v[k] = GaussRat::one();
        Self::slice(m, v)
    }

    pub fn slice(m: Degree, v: Vec<GaussRat>) -> Self {
        let mut out = Self::zero();
        out.add_slice(&m, &v, &GaussRat::one());
        out
    }

    pub fn slices(&self) -> &BTreeMap<Degree, Vec<GaussRat>> {
        &self.slices
    }

    pub fn get(&self, m: &Degree) -> Option<&Vec<GaussRat>> {
        self.slices.get(m)
    }

    pub fn support(&self) -> impl Iterator<Item = &Degree> {
        self.slices.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    /// `self[m] += a * v`, dropping the slice if it cancels.
    pub fn add_slice(&mut self, m: &Degree, v: &[GaussRat], a: &GaussRat) {
        if a.is_zero() || v.iter().all(GaussRat::is_zero) {
            return;
        }
        let slot = self
            .slices
            .entry(m.clone())
            .or_insert_with(|| vec![GaussRat::zero(); v.len()]);
        let one = a.is_one();
        let minus_one = !one && (-a).is_one();
        for (s, x) in slot.iter_mut().zip(v) {
            if x.is_zero() {
                continue;
            }
            if one {
                *s += x;
            } else if minus_one {
                *s -= x;
            } else {
                *s += &(a * x);
            }
        }
        if slot.iter().all(GaussRat::is_zero) {
            self.slices.remove(m);
        }
    }

    pub fn axpy(&mut self, a: &GaussRat, x: &ModVector) {
        for (m, v) in &x.slices {
            self.add_slice(m, v, a);
        }
    }

    pub fn add(&self, other: &ModVector) -> ModVector {
        let mut out = self.clone();
        out.axpy(&GaussRat::one(), other);
        out
    }

    pub fn sub(&self, other: &ModVector) -> ModVector {
        let mut out = self.clone();
        out.axpy(&-GaussRat::one(), other);
        out
    }

    pub fn scale(&self, a: &GaussRat) -> ModVector {
        let mut out = ModVector::zero();
        out.axpy(a, self);
        out
    }

    /// Sum of all slices, a vector of length `d`.
    pub fn slice_sum(&self, d: usize) -> Vec<GaussRat> {
        let mut out = vec![GaussRat::zero(); d];
        for v in self.slices.values() {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x;
            }
        }
        out
    }

    /// Human-readable nonzero coordinates, e.g. `(1,0)[2] = -1/2`.
    pub fn nonzero_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (m, v) in &self.slices {
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out.push(format!("{m}[{k}] = {x}"));
                }
            }
        }
        out
    }
}

impl fmt::Debug for ModVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.nonzero_entries().join(", "))
    }
}

/// Whether out-of-window terms are an error or silently dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Truncate,
}

/// `V(μ,c) ⊗ A` restricted to a window, with shift `α`.
#[derive(Clone, Debug)]
pub struct TensorModule {
    rep: Arc<Irrep>,
    alpha: Vec<GaussRat>,
    pres: BRef,
    window: Window,
}

impl TensorModule {
    pub fn new(rep: Arc<Irrep>, alpha: Vec<GaussRat>, pres: BRef, window: Window) -> Result<Self> {
        let n = rep.rank();
        if alpha.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: alpha.len(),
            });
        }
        if window.rank() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: window.rank(),
            });
        }
        Ok(TensorModule {
            rep,
            alpha,
            pres,
            window,
        })
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    /// Slice dimension.
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn rep(&self) -> &Irrep {
        &self.rep
    }

    pub fn alpha(&self) -> &[GaussRat] {
        &self.alpha
    }

    pub fn presentation(&self) -> &BRef {
        &self.pres
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Basis of the slice at `m`, in irrep order.
    pub fn slice_basis(&self, m: &Degree) -> Vec<ModVector> {
        (0..self.dim())
            .map(|k| ModVector::basis(m.clone(), k, self.dim()))
            .collect()
    }

    fn check_elem(&self, x: &LoopElem) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: x.rank(),
            });
        }
        let probe = BElem::one(&self.pres);
        if !probe.same_presentation(&BElem::one(x.presentation())) {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    fn check_vector(&self, v: &ModVector) -> Result<()> {
        for (m, s) in &v.slices {
            if !self.window.contains(m) {
                return Err(Error::OutOfWindow(m.clone()));
            }
            if s.len() != self.dim() {
                return Err(Error::RankMismatch {
                    expected: self.dim(),
                    found: s.len(),
                });
            }
        }
        Ok(())
    }

    /// `x . v`.
    pub fn act(&self, x: &LoopElem, v: &ModVector, mode: Mode) -> Result<ModVector> {
        self.compile(x)?.apply(self, v, mode)
    }

    /// Collapses `x` into one affine operator per degree, ready to be
    /// applied to many vectors.
    pub fn compile(&self, x: &LoopElem) -> Result<Action> {
        self.check_elem(x)?;
        let n = self.rank();
        let d = self.dim();
        let mut terms: BTreeMap<Degree, ShiftTerm> = BTreeMap::new();
        for (key, b) in x.terms() {
            let psi = b.eval_psi();
            if psi.is_zero() {
                continue;
            }
            let r = &key.degree;
            let term = terms.entry(r.clone()).or_insert_with(|| ShiftTerm {
                coeffs: vec![GaussRat::zero(); n],
                constant: GaussRat::zero(),
                mat: None,
            });
            match key.kind {
                Kind::A => term.constant += &psi,
                Kind::D(i) => {
                    term.coeffs[i] += &psi;
                    term.constant += &(&psi * &self.alpha[i]);
                    for (j, rj) in r.0.iter().enumerate() {
                        if *rj == 0 {
                            continue;
                        }
                        let c = &psi * &GaussRat::from_int(*rj);
                        let add = self.rep.e(j, i).scale(&c);
                        term.mat = Some(match term.mat.take() {
                            Some(m) => m.add(&add),
                            None => add,
                        });
                    }
                }
            }
        }
        for term in terms.values_mut() {
            if term.mat.as_ref().is_some_and(Matrix::is_zero) {
                term.mat = None;
            }
        }
        Ok(Action { d, terms })
    }

    /// `[x,y].v − x.(y.v) + y.(x.v)` for homogeneous `x`, `y`, with `v`
    /// supported at distance `|r| + |s|` from the boundary.
    pub fn module_axiom_residual(
        &self,
        x: &LoopElem,
        y: &LoopElem,
        v: &ModVector,
    ) -> Result<ModVector> {
        let r = x.ad_weight()?;
        let s = y.ad_weight()?;
        let margin = &r.abs() + &s.abs();
        for m in v.support() {
            if !self.window.in_interior(m, &margin) {
                return Err(Error::InteriorViolation(m.clone()));
            }
        }
        let xy = x.bracket(y)?;
        let lhs = self.act(&xy, v, Mode::Strict)?;
        let x_yv = self.act(x, &self.act(y, v, Mode::Strict)?, Mode::Strict)?;
        let y_xv = self.act(y, &self.act(x, v, Mode::Strict)?, Mode::Strict)?;
        Ok(lhs.sub(&x_yv).add(&y_xv))
    }

    /// Associativity and unit residuals of the `A ⊗ B` action:
    /// `t^r b.(t^s b′.v) − t^{r+s} bb′.v` and `t⁰ ⊗ 1 . v − v`.
    pub fn assoc_unital_check(
        &self,
        r: &Degree,
        s: &Degree,
        b: &BElem,
        b2: &BElem,
        v: &ModVector,
    ) -> Result<(ModVector, ModVector)> {
        let x = LoopElem::t(r.clone(), b.clone());
        let y = LoopElem::t(s.clone(), b2.clone());
        let xy = LoopElem::t(r + s, b.try_mul(b2)?);
        let assoc = self
            .act(&x, &self.act(&y, v, Mode::Strict)?, Mode::Strict)?
            .sub(&self.act(&xy, v, Mode::Strict)?);
        let one = LoopElem::t(Degree::zero(self.rank()), BElem::one(&self.pres));
        let unital = self.act(&one, v, Mode::Strict)?.sub(v);
        Ok((assoc, unital))
    }

    /// Dimension of every weight space in the window.
    pub fn weight_decomposition(&self) -> BTreeMap<Degree, usize> {
        self.window
            .degrees()
            .into_iter()
            .map(|m| (m, self.dim()))
            .collect()
    }

    /// Matrix of `x` from the `src` slices to the `dst` slices, both in the
    /// given order, with irrep coordinates inside each slice block.
    pub fn op_matrix(&self, x: &LoopElem, src: &[Degree], dst: &[Degree]) -> Result<Matrix> {
        self.matrix_of(|v| self.act(x, v, Mode::Strict), src, dst)
    }

    /// Matrix of an arbitrary linear map given by its action on basis vectors.
    pub fn matrix_of<F>(&self, f: F, src: &[Degree], dst: &[Degree]) -> Result<Matrix>
    where
        F: Fn(&ModVector) -> Result<ModVector>,
    {
        let d = self.dim();
        let index: BTreeMap<&Degree, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = Matrix::zeros(dst.len() * d, src.len() * d);
        for (a, m) in src.iter().enumerate() {
            for (k, e) in self.slice_basis(m).iter().enumerate() {
                let image = f(e)?;
                for (t, w) in image.slices() {
                    let Some(&bi) = index.get(t) else {
                        return Err(Error::OutsideDestination(t.clone()));
                    };
                    for (row, x) in w.iter().enumerate() {
                        if !x.is_zero() {
                            out.set(bi * d + row, a * d + k, x.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One degree component of a compiled element: on the slice at `m` it acts
/// as `(constant + Σ coeffs_i m_i) · Id + mat`.
#[derive(Clone, Debug)]
struct ShiftTerm {
    coeffs: Vec<GaussRat>,
    constant: GaussRat,
    mat: Option<Matrix>,
}

/// A loop element compiled against a fixed module.
#[derive(Clone, Debug)]
pub struct Action {
    d: usize,
    terms: BTreeMap<Degree, ShiftTerm>,
}

impl Action {
    /// Degrees by which this action shifts.
    pub fn shifts(&self) -> impl Iterator<Item = &Degree> {
        self.terms.keys()
    }

    pub fn apply(&self, module: &TensorModule, v: &ModVector, mode: Mode) -> Result<ModVector> {
        module.check_vector(v)?;
        let mut out = ModVector::zero();
        for (m, s) in &v.slices {
            for (r, term) in &self.terms {
                let target = m + r;
                if !module.window.contains(&target) {
                    match mode {
                        Mode::Strict => return Err(Error::OutOfWindow(target)),
                        Mode::Truncate => continue,
                    }
                }
                let mut lam = term.constant.clone();
                for (c, mi) in term.coeffs.iter().zip(&m.0) {
                    if !c.is_zero() && *mi != 0 {
                        lam += &(c * &GaussRat::from_int(*mi));
                    }
                }
                if lam.is_zero() && term.mat.is_none() {
                    continue;
                }
                let mut image: Vec<GaussRat> = if lam.is_zero() {
                    vec![GaussRat::zero(); s.len()]
                } else {
                    s.iter().map(|x| &lam * x).collect()
                };
                if let Some(mat) = &term.mat {
                    for (col, x) in s.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (row, o) in image.iter_mut().enumerate() {
                            let e = mat.get(row, col);
                            if !e.is_zero() {
                                *o += &(e * x);
                            }
                        }
                    }
                }
                out.add_slice(&target, &image, &GaussRat::one());
            }
        }
        debug_assert!(out.slices.values().all(|s| s.len() == self.d));
        Ok(out)
    }
}
