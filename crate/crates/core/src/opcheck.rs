//! Derived operator families on tensor-field modules and the identities
//! they satisfy.
//!
//! For `u ∈ ℚ(i)ⁿ`, `r ∈ ℤⁿ` and `b₁, b₂ ∈ B`:
//!
//! ```text
//! T (u,r,b₁,b₂) = t^{-r} b₁ ∘ D(u,r) b₂
//! T₁(u,r,b₁,b₂) = T(u,r,b₁,b₂) − D(u,0) b₁b₂
//! I (u,r,b₁,b₂) = ψ(b₁) D(u,r) b₂ − D(u,0) b₁b₂
//! ```
//!
//! Identities among these are checked as identities of module operators:
//! every residual is applied to the basis of the chosen slices and must
//! vanish exactly. `W` is the span of `t^r v − v`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::coeffalg::BElem;
use crate::error::{Error, Result};
use crate::glnrep::burnside_dim;
use crate::linalg::{Matrix, Span, SparseVec};
use crate::loopalg::{Degree, LoopAlgebra, LoopElem};
use crate::report::IdentityReport;
use crate::scalar::GaussRat;
use crate::tensmod::{Action, ModVector, Mode, TensorModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpFamily {
    T,
    T1,
    I2,
}

impl fmt::Display for OpFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpFamily::T => "T",
            OpFamily::T1 => "T1",
            OpFamily::I2 => "I",
        })
    }
}

/// One member of a derived operator family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSpec {
    pub family: OpFamily,
    pub u: Vec<GaussRat>,
    pub r: Degree,
    pub b1: BElem,
    pub b2: BElem,
}

impl OpSpec {
    pub fn new(
        family: OpFamily,
        u: Vec<GaussRat>,
        r: Degree,
        b1: BElem,
        b2: BElem,
    ) -> Result<Self> {
        if u.len() != r.rank() {
            return Err(Error::RankMismatch {
                expected: r.rank(),
                found: u.len(),
            });
        }
        if !b1.same_presentation(&b2) {
            return Err(Error::PresentationMismatch);
        }
        Ok(OpSpec {
            family,
            u,
            r,
            b1,
            b2,
        })
    }

    pub fn t(u: Vec<GaussRat>, r: Degree, b1: BElem, b2: BElem) -> Result<Self> {
        Self::new(OpFamily::T, u, r, b1, b2)
    }

    pub fn t1(u: Vec<GaussRat>, r: Degree, b1: BElem, b2: BElem) -> Result<Self> {
        Self::new(OpFamily::T1, u, r, b1, b2)
    }

    pub fn i2(u: Vec<GaussRat>, r: Degree, b1: BElem, b2: BElem) -> Result<Self> {
        Self::new(OpFamily::I2, u, r, b1, b2)
    }

    pub fn with_family(&self, family: OpFamily) -> OpSpec {
        OpSpec {
            family,
            ..self.clone()
        }
    }

    pub fn rank(&self) -> usize {
        self.r.rank()
    }

    /// Slices reached from `src`: `src` itself for the weight-preserving
    /// families, `src ∪ (src + r)` for `I`.
    pub fn destination(&self, src: &[Degree]) -> Vec<Degree> {
        let mut out: BTreeSet<Degree> = src.iter().cloned().collect();
        if self.family == OpFamily::I2 {
            out.extend(src.iter().map(|m| m + &self.r));
        }
        out.into_iter().collect()
    }

    fn require(&self, family: OpFamily) -> Result<()> {
        if self.family == family {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "expected a {family} operator, got {}",
                self.family
            )))
        }
    }
}

fn fmt_vec(u: &[GaussRat]) -> String {
    let parts: Vec<String> = u.iter().map(GaussRat::to_string).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for OpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(u={}; r={}; b1={}; b2={})",
            self.family,
            fmt_vec(&self.u),
            self.r,
            self.b1,
            self.b2
        )
    }
}

/// A linear combination of compositions of compiled actions. Each
/// composition lists its factors in application order; an empty one is the
/// identity.
#[derive(Clone, Debug, Default)]
pub struct Operator {
    parts: Vec<(GaussRat, Vec<Arc<Action>>)>,
}

impl Operator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Operator {
            parts: vec![(GaussRat::one(), Vec::new())],
        }
    }

    pub fn of_elem(module: &TensorModule, x: &LoopElem) -> Result<Self> {
        Ok(Operator {
            parts: vec![(GaussRat::one(), vec![Arc::new(module.compile(x)?)])],
        })
    }

    pub fn of_spec(module: &TensorModule, spec: &OpSpec) -> Result<Self> {
        let OpSpec {
            family,
            u,
            r,
            b1,
            b2,
        } = spec;
        let b12 = b1.try_mul(b2)?;
        let diag = LoopElem::d(u, Degree::zero(r.rank()), b12)?;
        match family {
            OpFamily::T | OpFamily::T1 => {
                let inner = Operator::of_elem(module, &LoopElem::d(u, r.clone(), b2.clone())?)?;
                let outer = Operator::of_elem(module, &LoopElem::t(-r, b1.clone()))?;
                let t = outer.compose(&inner);
                if *family == OpFamily::T {
                    Ok(t)
                } else {
                    Ok(t.sub(&Operator::of_elem(module, &diag)?))
                }
            }
            OpFamily::I2 => {
                let x = LoopElem::d(u, r.clone(), b2.clone())?
                    .scale(&b1.eval_psi())
                    .try_sub(&diag)?;
                Operator::of_elem(module, &x)
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Operator) -> Operator {
        let mut parts = Vec::with_capacity(self.parts.len() * inner.parts.len());
        for (a, outer) in &self.parts {
            for (b, first) in &inner.parts {
                let c = a * b;
                if c.is_zero() {
                    continue;
                }
                let mut chain = first.clone();
                chain.extend(outer.iter().cloned());
                parts.push((c, chain));
            }
        }
        Operator { parts }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Operator { parts }
    }

    pub fn scale(&self, c: &GaussRat) -> Operator {
        if c.is_zero() {
            return Operator::zero();
        }
        Operator {
            parts: self
                .parts
                .iter()
                .map(|(a, ch)| (a * c, ch.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add(&other.scale(&-GaussRat::one()))
    }

    /// `[a, b] = a∘b − b∘a`.
    pub fn commutator(a: &Operator, b: &Operator) -> Operator {
        a.compose(b).sub(&b.compose(a))
    }

    pub fn apply(&self, module: &TensorModule, v: &ModVector) -> Result<ModVector> {
        let mut out = ModVector::zero();
        for (c, chain) in &self.parts {
            let mut w = v.clone();
            for act in chain {
                w = act.apply(module, &w, Mode::Strict)?;
                if w.is_zero() {
                    break;
                }
            }
            out.axpy(c, &w);
        }
        Ok(out)
    }

    /// Matrix from the `src` slices to the `dst` slices.
    pub fn matrix(&self, module: &TensorModule, src: &[Degree], dst: &[Degree]) -> Result<Matrix> {
        module.matrix_of(|v| self.apply(module, v), src, dst)
    }
}

/// Matrix of a family operator on `src`, with rows indexed by
/// [`OpSpec::destination`].
pub fn op_matrix_of(spec: &OpSpec, module: &TensorModule, src: &[Degree]) -> Result<Matrix> {
    Operator::of_spec(module, spec)?.matrix(module, src, &spec.destination(src))
}

/// Images of every slice basis vector under a residual operator.
#[derive(Clone, Debug)]
pub struct OpResidual {
    src: Vec<Degree>,
    d: usize,
    columns: Vec<ModVector>,
}

impl OpResidual {
    pub fn compute(op: &Operator, module: &TensorModule, src: &[Degree]) -> Result<Self> {
        let mut columns = Vec::with_capacity(src.len() * module.dim());
        for m in src {
            for e in module.slice_basis(m) {
                columns.push(op.apply(module, &e)?);
            }
        }
        Ok(OpResidual {
            src: src.to_vec(),
            d: module.dim(),
            columns,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(ModVector::is_zero)
    }

    pub fn src(&self) -> &[Degree] {
        &self.src
    }

    /// Every nonzero entry as `e_k⊗t^m -> m'[j] = value`.
    pub fn nonzero_entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (idx, col) in self.columns.iter().enumerate() {
            let m = &self.src[idx / self.d];
            let k = idx % self.d;
            for entry in col.nonzero_entries() {
                out.push(format!("e{k}⊗t^{m} -> {entry}"));
            }
        }
        out
    }

    /// Dense form, rows over the sorted union of all image slices.
    pub fn matrix(&self) -> (Vec<Degree>, Matrix) {
        let dst: Vec<Degree> = self
            .columns
            .iter()
            .flat_map(|c| c.support().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = Matrix::zeros(dst.len() * self.d, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (m, v) in col.slices() {
                let bi = dst.binary_search(m).expect("support is in dst");
                for (row, x) in v.iter().enumerate() {
                    out.set(bi * self.d + row, j, x.clone());
                }
            }
        }
        (dst, out)
    }
}

/// Which bracket relation to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyBracket {
    /// `[T₁, T₁]` closes on `T₁`.
    T1Bracket,
    /// `[I, I]` closes on `I`.
    I2Bracket,
    /// `[T, T]` equals a combination of `T₁` operators.
    DDinD1,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    TT,
    Closed(OpFamily),
    TIntoT1,
}

/// `|r| + |s|`: the margin keeping every intermediate slice of a bracket
/// relation inside the window.
pub fn bracket_margin(p: &OpSpec, q: &OpSpec) -> Degree {
    &p.r.abs() + &q.r.abs()
}

fn bracket_relation(
    rel: Relation,
    p: &OpSpec,
    q: &OpSpec,
    module: &TensorModule,
    slices: &[Degree],
) -> Result<OpResidual> {
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch {
            expected: p.rank(),
            found: q.rank(),
        });
    }
    let (u, r, b1, b2) = (&p.u, &p.r, &p.b1, &p.b2);
    let (v, s, b3, b4) = (&q.u, &q.r, &q.b1, &q.b2);
    let us = s.pair(u);
    let vr = r.pair(v);
    let w: Vec<GaussRat> = v
        .iter()
        .zip(u)
        .map(|(vi, ui)| &(&us * vi) - &(&vr * ui))
        .collect();
    let b13 = b1.try_mul(b3)?;
    let b24 = b2.try_mul(b4)?;
    let b12 = b1.try_mul(b2)?;
    let (fam, rhs_v, rhs_u) = match rel {
        Relation::TT | Relation::TIntoT1 => {
            let fam = if rel == Relation::TT {
                OpFamily::T
            } else {
                OpFamily::T1
            };
            (
                fam,
                OpSpec::new(fam, v.clone(), s.clone(), b12.try_mul(b3)?, b4.clone())?,
                OpSpec::new(fam, u.clone(), r.clone(), b13.try_mul(b4)?, b2.clone())?,
            )
        }
        Relation::Closed(fam) => (
            fam,
            OpSpec::new(fam, v.clone(), s.clone(), b3.clone(), b12.try_mul(b4)?)?,
            OpSpec::new(
                fam,
                u.clone(),
                r.clone(),
                b1.clone(),
                b2.try_mul(b3)?.try_mul(b4)?,
            )?,
        ),
    };
    let rhs_w = OpSpec::new(fam, w, r + s, b13, b24)?;
    let lhs = Operator::commutator(
        &Operator::of_spec(module, p)?,
        &Operator::of_spec(module, q)?,
    );
    let rhs = Operator::of_spec(module, &rhs_w)?
        .sub(&Operator::of_spec(module, &rhs_v)?.scale(&us))
        .add(&Operator::of_spec(module, &rhs_u)?.scale(&vr));
    OpResidual::compute(&lhs.sub(&rhs), module, slices)
}

/// `[T(u,r,b₁,b₂), T(v,s,b₃,b₄)] − T(w,r+s,b₁b₃,b₂b₄) + (u,s)T(v,s,b₁b₂b₃,b₄)
/// − (v,r)T(u,r,b₁b₃b₄,b₂)` with `w = (u,s)v − (v,r)u`.
pub fn t_bracket_residual(
    s1: &OpSpec,
    s2: &OpSpec,
    module: &TensorModule,
    slices: &[Degree],
) -> Result<OpResidual> {
    s1.require(OpFamily::T)?;
    s2.require(OpFamily::T)?;
    bracket_relation(Relation::TT, s1, s2, module, slices)
}

/// Bracket relations of `T₁` and `I`:
/// `[X(u,r,b₁,b₂), X(v,s,b₃,b₄)] = X(w,r+s,b₁b₃,b₂b₄) − (u,s)X(v,s,b₃,b₁b₂b₄)
/// + (v,r)X(u,r,b₁,b₂b₃b₄)`, and for [`FamilyBracket::DDinD1`] the `T`-bracket
/// rewritten with `T₁` operators.
pub fn family_bracket_residual(
    kind: FamilyBracket,
    s1: &OpSpec,
    s2: &OpSpec,
    module: &TensorModule,
    slices: &[Degree],
) -> Result<OpResidual> {
    let (need, rel) = match kind {
        FamilyBracket::T1Bracket => (OpFamily::T1, Relation::Closed(OpFamily::T1)),
        FamilyBracket::I2Bracket => (OpFamily::I2, Relation::Closed(OpFamily::I2)),
        FamilyBracket::DDinD1 => (OpFamily::T, Relation::TIntoT1),
    };
    s1.require(need)?;
    s2.require(need)?;
    bracket_relation(rel, s1, s2, module, slices)
}

type SliceKey = (Degree, usize);

fn to_sparse(v: &ModVector) -> SparseVec<SliceKey> {
    let mut out = SparseVec::new();
    for (m, s) in v.slices() {
        for (k, x) in s.iter().enumerate() {
            if !x.is_zero() {
                out.insert((m.clone(), k), x.clone());
            }
        }
    }
    out
}

fn from_sparse(v: &SparseVec<SliceKey>, d: usize) -> ModVector {
    let mut out = ModVector::zero();
    for ((m, k), x) in v {
        let mut s = vec![GaussRat::zero(); d];
        s[*k] = x.clone();
        out.add_slice(m, &s, &GaussRat::one());
    }
    out
}

/// A subspace of the windowed module in reduced echelon form.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    span: Span<SliceKey>,
    d: usize,
    ambient: usize,
}

impl SubspaceBasis {
    pub fn new(module: &TensorModule) -> Self {
        SubspaceBasis {
            span: Span::new(),
            d: module.dim(),
            ambient: module.window().len() * module.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn insert(&mut self, v: &ModVector) -> bool {
        self.span.insert(&to_sparse(v))
    }

    /// Remainder of `v` modulo the subspace.
    pub fn reduce(&self, v: &ModVector) -> ModVector {
        from_sparse(&self.span.reduce(&to_sparse(v)), self.d)
    }

    pub fn contains(&self, v: &ModVector) -> bool {
        self.span.contains(&to_sparse(v))
    }

    pub fn rows(&self) -> Vec<ModVector> {
        self.span.rows().map(|r| from_sparse(r, self.d)).collect()
    }
}

/// `W = span{v⊗t^r − v⊗t⁰}` over the window.
pub fn w_basis(module: &TensorModule) -> SubspaceBasis {
    let mut w = SubspaceBasis::new(module);
    let zero = Degree::zero(module.rank());
    // Largest degree first: every later generator then reduces to a row
    // with a fresh pivot and nothing needs back-substitution.
    for r in module.window().degrees().into_iter().rev() {
        if r == zero {
            continue;
        }
        for k in 0..module.dim() {
            let g = ModVector::basis(r.clone(), k, module.dim()).sub(&ModVector::basis(
                zero.clone(),
                k,
                module.dim(),
            ));
            w.insert(&g);
        }
    }
    w
}

fn w_generator_degrees(module: &TensorModule, margin: &Degree) -> Result<Vec<Degree>> {
    let zero = Degree::zero(module.rank());
    let interior = module.window().interior(margin);
    if interior.is_empty() {
        return Err(Error::WindowTooSmall(format!(
            "no interior at margin {margin} in radius {}",
            module.window().radius()
        )));
    }
    Ok(interior.into_iter().filter(|m| *m != zero).collect())
}

/// Generators of `W` within reach of `I(u,r,…)` whose images leave `W`,
/// with their remainders.
pub fn w_invariance_violations(
    spec: &OpSpec,
    module: &TensorModule,
    w: &SubspaceBasis,
) -> Result<Vec<String>> {
    spec.require(OpFamily::I2)?;
    let op = Operator::of_spec(module, spec)?;
    let d = module.dim();
    let zero = Degree::zero(module.rank());
    // Reduction is linear, so I(e_k t^m - e_k t^0) lies in W exactly when
    // the images of both ends leave the same remainder.
    let base: Vec<ModVector> = (0..d)
        .map(|k| Ok(w.reduce(&op.apply(module, &ModVector::basis(zero.clone(), k, d))?)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for m in w_generator_degrees(module, &spec.r.abs())? {
        for (k, b) in base.iter().enumerate() {
            let rem = w
                .reduce(&op.apply(module, &ModVector::basis(m.clone(), k, d))?)
                .sub(b);
            if !rem.is_zero() {
                out.push(format!(
                    "image of e{k}⊗(t^{m} - t^0) leaves W: remainder {rem:?}"
                ));
            }
        }
    }
    Ok(out)
}

/// Whether `I(u,r,b₁,b₂)` maps `W` into itself on the part of the window
/// where it is defined.
pub fn w_invariance_check(spec: &OpSpec, module: &TensorModule) -> Result<bool> {
    Ok(w_invariance_violations(spec, module, &w_basis(module))?.is_empty())
}

/// Failures of the projection `V_α → V/W`: intertwining `T₁ v ≡ I v mod W`
/// for each spec and each basis vector of slice 0, injectivity on `V_α`,
/// and `codim W = d`.
pub fn quotient_violations(
    module: &TensorModule,
    specs: &[OpSpec],
    w: &SubspaceBasis,
) -> Result<Vec<String>> {
    let zero = Degree::zero(module.rank());
    let basis = module.slice_basis(&zero);
    let mut out = Vec::new();
    for spec in specs {
        spec.require(OpFamily::T1)?;
        let t1 = Operator::of_spec(module, spec)?;
        let i2 = Operator::of_spec(module, &spec.with_family(OpFamily::I2))?;
        for (k, v) in basis.iter().enumerate() {
            let diff = t1.apply(module, v)?.sub(&i2.apply(module, v)?);
            let rem = w.reduce(&diff);
            if !rem.is_zero() {
                out.push(format!("{spec} on e{k}: remainder {rem:?}"));
            }
        }
    }
    let mut image = SubspaceBasis::new(module);
    let rank = basis.iter().filter(|v| image.insert(&w.reduce(v))).count();
    if rank != module.dim() {
        out.push(format!(
            "projection of slice 0 has rank {rank}, expected {}",
            module.dim()
        ));
    }
    if w.codim() != module.dim() {
        out.push(format!(
            "W has codimension {}, expected {}",
            w.codim(),
            module.dim()
        ));
    }
    Ok(out)
}

pub fn quotient_check(module: &TensorModule, specs: &[OpSpec]) -> Result<bool> {
    Ok(quotient_violations(module, specs, &w_basis(module))?.is_empty())
}

/// `D(u,0)⊗b` on slice 0 minus `ψ(b)(u,α)·Id`.
pub fn cartan_scalar_check(u: &[GaussRat], b: &BElem, module: &TensorModule) -> Result<Matrix> {
    let zero = Degree::zero(module.rank());
    let x = LoopElem::d(u, zero.clone(), b.clone())?;
    let mat = module.op_matrix(&x, std::slice::from_ref(&zero), std::slice::from_ref(&zero))?;
    let ua: GaussRat = u
        .iter()
        .zip(module.alpha())
        .fold(GaussRat::zero(), |acc, (a, b)| acc + &(a * b));
    let lam = &b.eval_psi() * &ua;
    Ok(mat.sub(&Matrix::scalar(module.dim(), &lam)))
}

/// `D(u,r)⊗b − ψ(b)·D(u,r)⊗1` from `src` to `src + r`.
pub fn evaluation_collapse_check(
    u: &[GaussRat],
    r: &Degree,
    b: &BElem,
    module: &TensorModule,
    src: &[Degree],
) -> Result<Matrix> {
    let dst: Vec<Degree> = src
        .iter()
        .map(|m| m + r)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let x = LoopElem::d(u, r.clone(), b.clone())?;
    let one = LoopElem::d(u, r.clone(), BElem::one(b.presentation()))?;
    let lhs = module.op_matrix(&x, src, &dst)?;
    let rhs = module.op_matrix(&one, src, &dst)?.scale(&b.eval_psi());
    Ok(lhs.sub(&rhs))
}

/// Residual of `[X(v,s)b, X(u,r)b′] = X(w,r+s)bb′ + (u,s)X(v,s)bb′ − (v,r)X(u,r)bb′`
/// with `X(u,r)b = X(u,r,1,b)`, `w = (v,r)u − (u,s)v`, and `X` either `T`
/// or `T₁`.
#[allow(clippy::too_many_arguments)]
pub fn tb_bracket_residual(
    family: OpFamily,
    (v, s, b): (&[GaussRat], &Degree, &BElem),
    (u, r, b2): (&[GaussRat], &Degree, &BElem),
    module: &TensorModule,
    slices: &[Degree],
) -> Result<OpResidual> {
    if family == OpFamily::I2 {
        return Err(Error::InvalidArgument(
            "the relation concerns T or T1".into(),
        ));
    }
    let one = BElem::one(b.presentation());
    let bb = b.try_mul(b2)?;
    let us = s.pair(u);
    let vr = r.pair(v);
    let w: Vec<GaussRat> = u
        .iter()
        .zip(v)
        .map(|(ui, vi)| &(&vr * ui) - &(&us * vi))
        .collect();
    let op = |u: &[GaussRat], r: &Degree, b: &BElem| -> Result<Operator> {
        Operator::of_spec(
            module,
            &OpSpec::new(family, u.to_vec(), r.clone(), one.clone(), b.clone())?,
        )
    };
    let lhs = Operator::commutator(&op(v, s, b)?, &op(u, r, b2)?);
    let rhs = op(&w, &(r + s), &bb)?
        .add(&op(v, s, &bb)?.scale(&us))
        .sub(&op(u, r, &bb)?.scale(&vr));
    OpResidual::compute(&lhs.sub(&rhs), module, slices)
}

/// `T(e_i, e_j, 1, 1)` for all `i, j`: on slice 0 these act as
/// `α_i·Id + E_{ji}`, so they generate the image of `gl_n`.
pub fn default_burnside_generators(module: &TensorModule) -> Result<Vec<OpSpec>> {
    let n = module.rank();
    let one = BElem::one(module.presentation());
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut u = vec![GaussRat::zero(); n];
            u[i] = GaussRat::one();
            out.push(OpSpec::t(u, Degree::unit(n, j), one.clone(), one.clone())?);
        }
    }
    Ok(out)
}

/// Dimension of the unital algebra generated by the given weight-preserving
/// `T` operators on slice 0; `d²` certifies that `V_α` is irreducible.
pub fn burnside_valpha(module: &TensorModule, gens: &[OpSpec]) -> Result<usize> {
    let zero = [Degree::zero(module.rank())];
    let mats = gens
        .iter()
        .map(|g| {
            g.require(OpFamily::T)?;
            op_matrix_of(g, module, &zero)
        })
        .collect::<Result<Vec<_>>>()?;
    burnside_dim(&mats)
}

fn rank_one_algebra(module: &TensorModule) -> Result<LoopAlgebra> {
    if module.rank() != 1 {
        return Err(Error::RankNotOne(module.rank()));
    }
    LoopAlgebra::new(1, module.presentation().clone())
}

/// `(Y − k)^p ∘ X − X ∘ Y^p` with `Y = (1 − t⁻¹)d₀` and
/// `X = (t−1)^{k+1} d₋₁` (rank one).
pub fn commutation_shift_residual(
    module: &TensorModule,
    k: u32,
    p: u32,
    slices: &[Degree],
) -> Result<OpResidual> {
    let alg = rank_one_algebra(module)?;
    let y = Operator::of_elem(module, &alg.poly_derivation(1, -1)?)?;
    let x = Operator::of_elem(module, &alg.poly_derivation(k + 1, -1)?)?;
    let shifted = y.sub(&Operator::identity().scale(&GaussRat::from_int(k as i64)));
    let mut lhs = x.clone();
    let mut yp = Operator::identity();
    for _ in 0..p {
        lhs = shifted.compose(&lhs);
        yp = y.compose(&yp);
    }
    OpResidual::compute(&lhs.sub(&x.compose(&yp)), module, slices)
}

/// Slices on which [`commutation_shift_residual`] stays inside the window.
pub fn commutation_shift_slices(module: &TensorModule, k: u32, p: u32) -> Vec<Degree> {
    let rad = module.window().radius();
    (-rad + 1 + p as i64..=rad - k as i64)
        .map(|m| Degree(vec![m]))
        .collect()
}

/// Rank-one checks on a module `F^α(c)`, each on the window interior:
/// the induced `I(r)` action on `V/W` is the scalar `rc` and
/// `d_r(v⊗t^s) = (rc + s + α) v⊗t^{r+s}`; the commutation
/// `f(Y − k)X = X f(Y)` for `f(λ) = λ, λ², λ³` and `k = 0, 1, 2`; and
/// `(t−1)² tⁱ d` maps slice 0 into `W` for `i = −1, 0, 1`.
pub fn rank_one_suite(module: &TensorModule) -> Result<IdentityReport> {
    let alg = rank_one_algebra(module)?;
    let rad = module.window().radius();
    if rad < 4 {
        return Err(Error::WindowTooSmall(format!("radius {rad} is below 4")));
    }
    let mut report = IdentityReport::new("rank-one-module");
    let w = w_basis(module);
    let d = module.dim();
    let c = module.rep().c().clone();
    let alpha = module.alpha()[0].clone();
    let zero = Degree(vec![0]);
    let v0 = module.slice_basis(&zero);

    for r in -rad..=rad {
        let rc = &GaussRat::from_int(r) * &c;
        let ir = Operator::of_elem(module, &alg.i_elem(r)?)?;
        let mut witness = Vec::new();
        for (k, v) in v0.iter().enumerate() {
            let rem = w.reduce(&ir.apply(module, v)?.sub(&v.scale(&rc)));
            if !rem.is_zero() {
                witness.push(format!("e{k}: remainder {rem:?}"));
            }
        }
        report.record(format!("I({r}) acts on V/W as {r}c"), witness);

        let dr = alg.witt(r)?;
        let mut witness = Vec::new();
        for s in -rad..=rad {
            if (r + s).abs() > rad {
                continue;
            }
            let lam = &(&rc + &GaussRat::from_int(s)) + &alpha;
            for k in 0..d {
                let v = ModVector::basis(Degree(vec![s]), k, d);
                let got = module.act(&dr, &v, Mode::Strict)?;
                let want = ModVector::basis(Degree(vec![r + s]), k, d).scale(&lam);
                let diff = got.sub(&want);
                if !diff.is_zero() {
                    witness.push(format!("s={s}, e{k}: {diff:?}"));
                }
            }
        }
        report.record(format!("d_{r} on every slice"), witness);
    }

    for k in 0..=2u32 {
        for p in 1..=3u32 {
            let slices = commutation_shift_slices(module, k, p);
            let res = commutation_shift_residual(module, k, p, &slices)?;
            report.record(
                format!("f(Y-{k})X = X f(Y), f = λ^{p}"),
                res.nonzero_entries(),
            );
        }
    }

    for i in -1..=1i64 {
        let x = Operator::of_elem(module, &alg.poly_derivation(2, i)?)?;
        let mut witness = Vec::new();
        for (k, v) in v0.iter().enumerate() {
            let rem = w.reduce(&x.apply(module, v)?);
            if !rem.is_zero() {
                witness.push(format!("e{k}: remainder {rem:?}"));
            }
        }
        report.record(format!("(t-1)^2 t^{i} d maps slice 0 into W"), witness);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffalg::{BPresentation, BRef};
    use crate::glnrep::{build_irrep, DominantWeight};
    use crate::tensmod::Window;

    fn q(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn module(
        mu: Vec<u32>,
        n: usize,
        c: &str,
        alpha: &[&str],
        pres: BRef,
        radius: i64,
    ) -> TensorModule {
        let rep = build_irrep(&DominantWeight::new(mu), &q(c), n).unwrap();
        let alpha = alpha.iter().map(|a| q(a)).collect();
        TensorModule::new(Arc::new(rep), alpha, pres, Window::new(n, radius).unwrap()).unwrap()
    }

    fn cubic() -> BRef {
        BPresentation::polyquot(vec![q("-8"), q("12"), q("-6"), q("1")], q("2")).unwrap()
    }

    fn e(n: usize, i: usize) -> Vec<GaussRat> {
        let mut u = vec![GaussRat::zero(); n];
        u[i] = GaussRat::one();
        u
    }

    #[test]
    fn t_family_on_slices() {
        let pres = BPresentation::trivial();
        let m = module(vec![1], 2, "1", &["1/2", "1/3"], pres.clone(), 2);
        let one = BElem::one(&pres);
        let z = Degree::zero(2);
        let u = vec![q("2"), q("-1")];
        // T(u,0,1,1) = (u,m+α)·Id.
        for deg in [z.clone(), Degree(vec![1, -2])] {
            let spec = OpSpec::t(u.clone(), z.clone(), one.clone(), one.clone()).unwrap();
            let mat = op_matrix_of(&spec, &m, std::slice::from_ref(&deg)).unwrap();
            let lam = GaussRat::from_int(2 * deg.0[0] - deg.0[1]) + &q("2/3");
            assert_eq!(mat, Matrix::scalar(2, &lam));
            let mat = op_matrix_of(&spec.with_family(OpFamily::T1), &m, &[deg]).unwrap();
            assert!(mat.is_zero());
        }
        // T(u,r,1,b) on slice 0 is ψ(b)[(u,α)·Id + Σ u_i r_j E_ji].
        let lpres = BPresentation::laurent(q("3")).unwrap();
        let m = module(vec![1], 2, "1", &["1/2", "1/3"], lpres.clone(), 2);
        let b = BElem::generator(&lpres).unwrap();
        let r = Degree(vec![1, 1]);
        let spec = OpSpec::t(u.clone(), r.clone(), BElem::one(&lpres), b).unwrap();
        let mat = op_matrix_of(&spec, &m, std::slice::from_ref(&z)).unwrap();
        let mut want = Matrix::scalar(2, &q("2/3"));
        for (i, ui) in u.iter().enumerate() {
            for j in 0..2 {
                let c = ui * &GaussRat::from_int(r.0[j]);
                want = want.add(&m.rep().e(j, i).scale(&c));
            }
        }
        assert_eq!(mat, want.scale(&q("3")));
    }

    #[test]
    fn t_bracket_examples() {
        let pres = BPresentation::trivial();
        let m = module(vec![1], 2, "1", &["1/2", "1/2"], pres.clone(), 3);
        let one = BElem::one(&pres);
        let p = OpSpec::t(e(2, 0), Degree(vec![1, 0]), one.clone(), one.clone()).unwrap();
        let q2 = OpSpec::t(e(2, 1), Degree(vec![0, 1]), one.clone(), one.clone()).unwrap();
        let slices = m.window().interior(&bracket_margin(&p, &q2));
        assert!(t_bracket_residual(&p, &q2, &m, &slices).unwrap().is_zero());

        let pres = cubic();
        let m = module(vec![1], 2, "5/2", &["1/2", "1/2"], pres.clone(), 3);
        let x = BElem::generator(&pres).unwrap();
        let p = OpSpec::t(
            vec![q("1"), q("-2")],
            Degree(vec![1, -1]),
            x.clone(),
            x.pow(2),
        )
        .unwrap();
        let q2 = OpSpec::t(
            vec![q("1/3"), q("i")],
            Degree(vec![0, 2]),
            BElem::scalar(&pres, q("2")).try_add(&x).unwrap(),
            x,
        )
        .unwrap();
        let slices = vec![Degree::zero(2), Degree(vec![1, 0])];
        assert!(t_bracket_residual(&p, &q2, &m, &slices).unwrap().is_zero());
        assert!(
            family_bracket_residual(FamilyBracket::DDinD1, &p, &q2, &m, &slices)
                .unwrap()
                .is_zero()
        );
        let (p1, q1) = (p.with_family(OpFamily::T1), q2.with_family(OpFamily::T1));
        assert!(
            family_bracket_residual(FamilyBracket::T1Bracket, &p1, &q1, &m, &slices)
                .unwrap()
                .is_zero()
        );
        let (pi, qi) = (p.with_family(OpFamily::I2), q2.with_family(OpFamily::I2));
        assert!(
            family_bracket_residual(FamilyBracket::I2Bracket, &pi, &qi, &m, &slices)
                .unwrap()
                .is_zero()
        );
        assert!(family_bracket_residual(FamilyBracket::I2Bracket, &p, &q2, &m, &slices).is_err());
    }

    #[test]
    fn wrong_relation_is_detected() {
        // Swapping the coefficient arrangement of the T₁ relation must
        // leave a nonzero residual once the b's differ in ψ.
        let pres = BPresentation::laurent(q("3")).unwrap();
        let m = module(vec![1], 2, "1", &["1/2", "1/3"], pres.clone(), 3);
        let t = BElem::generator(&pres).unwrap();
        let one = BElem::one(&pres);
        let p = OpSpec::t(e(2, 0), Degree(vec![1, 0]), t.clone(), one.clone()).unwrap();
        let q2 = OpSpec::t(e(2, 1), Degree(vec![1, 1]), one.clone(), one.clone()).unwrap();
        let slices = vec![Degree::zero(2)];
        let good = t_bracket_residual(&p, &q2, &m, &slices).unwrap();
        assert!(good.is_zero());
        let lhs = Operator::commutator(
            &Operator::of_spec(&m, &p).unwrap(),
            &Operator::of_spec(&m, &q2).unwrap(),
        );
        let res = OpResidual::compute(&lhs, &m, &slices).unwrap();
        assert!(!res.is_zero());
        assert!(!res.nonzero_entries().is_empty());
    }

    #[test]
    fn w_dimensions() {
        let pres = BPresentation::trivial();
        let m = module(vec![], 1, "1", &["1/2"], pres.clone(), 1);
        let w = w_basis(&m);
        assert_eq!((w.dim(), w.codim()), (2, 1));
        let m = module(vec![1], 2, "1", &["1/2", "1/2"], pres.clone(), 1);
        let w = w_basis(&m);
        assert_eq!((w.dim(), w.codim()), (16, 2));
        let m = module(vec![1], 2, "1", &["1/2", "1/2"], pres, 0);
        assert_eq!(w_basis(&m).dim(), 0);
    }

    #[test]
    fn w_membership_is_slice_sum_zero() {
        let m = module(
            vec![1],
            2,
            "1",
            &["1/2", "1/2"],
            BPresentation::trivial(),
            2,
        );
        let w = w_basis(&m);
        let a = ModVector::slice(Degree(vec![1, -2]), vec![q("1"), q("2")]);
        let b = ModVector::slice(Degree(vec![0, 2]), vec![q("-1"), q("-2")]);
        assert!(w.contains(&a.add(&b)));
        assert!(!w.contains(&a));
        for row in w.rows() {
            assert!(row.slice_sum(2).iter().all(GaussRat::is_zero));
        }
    }

    #[test]
    fn w_is_stable_and_projection_intertwines() {
        let pres = cubic();
        let m = module(vec![1], 2, "1", &["1/2", "1/2"], pres.clone(), 2);
        let x = BElem::generator(&pres).unwrap();
        let one = BElem::one(&pres);
        let z = Degree::zero(2);
        let trivial = OpSpec::i2(e(2, 0), z.clone(), one.clone(), x.clone()).unwrap();
        assert!(op_matrix_of(&trivial, &m, std::slice::from_ref(&z))
            .unwrap()
            .is_zero());
        assert!(w_invariance_check(&trivial, &m).unwrap());
        let spec = OpSpec::i2(
            vec![q("1"), q("-1/2")],
            Degree(vec![1, -1]),
            x.clone(),
            x.pow(2),
        )
        .unwrap();
        assert!(w_invariance_check(&spec, &m).unwrap());
        let t1s = vec![
            OpSpec::t1(
                vec![q("1"), q("2")],
                Degree(vec![0, 1]),
                one.clone(),
                one.clone(),
            )
            .unwrap(),
            OpSpec::t1(
                vec![q("1/2"), q("i")],
                Degree(vec![-1, 1]),
                x.clone(),
                x.pow(2),
            )
            .unwrap(),
        ];
        assert!(quotient_check(&m, &t1s).unwrap());
    }

    #[test]
    fn scalar_and_collapse() {
        let pres = BPresentation::local(q("2"), 2).unwrap();
        let m = module(vec![1], 2, "1", &["1/2", "1/3"], pres.clone(), 2);
        let x = BElem::generator(&pres).unwrap();
        let one = BElem::one(&pres);
        let u = vec![q("1"), q("3")];
        assert!(cartan_scalar_check(&u, &one, &m).unwrap().is_zero());
        let xm2 = x.try_sub(&BElem::scalar(&pres, q("2"))).unwrap();
        assert!(cartan_scalar_check(&u, &xm2, &m).unwrap().is_zero());
        let mat = m
            .op_matrix(
                &LoopElem::d(&u, Degree::zero(2), xm2).unwrap(),
                &[Degree::zero(2)],
                &[Degree::zero(2)],
            )
            .unwrap();
        assert!(mat.is_zero());

        let lpres = BPresentation::laurent(q("3")).unwrap();
        let m = module(vec![1], 2, "1", &["1/2", "1/3"], lpres.clone(), 2);
        let t = BElem::generator(&lpres).unwrap();
        let r = Degree(vec![1, 0]);
        let src = vec![Degree::zero(2), Degree(vec![-1, 1])];
        assert!(evaluation_collapse_check(&u, &r, &t, &m, &src)
            .unwrap()
            .is_zero());
        let s = Degree(vec![0, -1]);
        let v = vec![q("2"), q("1")];
        for fam in [OpFamily::T, OpFamily::T1] {
            let res =
                tb_bracket_residual(fam, (&v, &s, &t), (&u, &r, &t.pow(2)), &m, &src).unwrap();
            assert!(res.is_zero());
        }
    }

    #[test]
    fn burnside_examples() {
        let pres = BPresentation::trivial();
        for (mu, n, d) in [(vec![0], 2, 1), (vec![1], 2, 2), (vec![1, 0], 3, 3)] {
            let alpha = vec!["1/2"; n];
            let m = module(mu, n, "1", &alpha, pres.clone(), 1);
            let gens = default_burnside_generators(&m).unwrap();
            assert_eq!(burnside_valpha(&m, &gens).unwrap(), d * d);
        }
    }

    #[test]
    fn rank_one_module_checks() {
        for c in ["0", "1", "3/2"] {
            let m = module(
                vec![],
                1,
                c,
                &["1/2"],
                BPresentation::laurent(q("3")).unwrap(),
                5,
            );
            let rep = rank_one_suite(&m).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures);
            assert_eq!(rep.cases, 11 * 2 + 9 + 3);
        }
        let m = module(vec![], 1, "1", &["1/2"], BPresentation::trivial(), 3);
        assert!(matches!(rank_one_suite(&m), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn telescoping_on_rank_one() {
        // (t−1)² tⁱ d on v⊗t⁰ has coefficients α+(i+2)c, −2(α+(i+1)c), α+ic,
        // whose sum vanishes.
        let m = module(vec![], 1, "3/2", &["1/2"], BPresentation::trivial(), 4);
        let alg = LoopAlgebra::new(1, m.presentation().clone()).unwrap();
        let x = alg.poly_derivation(2, 0).unwrap();
        let out = m
            .act(&x, &ModVector::basis(Degree(vec![0]), 0, 1), Mode::Strict)
            .unwrap();
        assert_eq!(out.get(&Degree(vec![2])).unwrap()[0], q("1/2") + &q("3"));
        assert_eq!(
            out.get(&Degree(vec![1])).unwrap()[0],
            &(q("1/2") + &q("3/2")) * &q("-2")
        );
        assert_eq!(out.get(&Degree(vec![0])).unwrap()[0], q("1/2"));
        assert!(out.slice_sum(1)[0].is_zero());
    }
}
