//! Run configurations and the seeded identity suites.
//!
//! Each suite draws its cases from its own ChaCha stream, so adding or
//! dropping a suite never changes another suite's samples. Cases are drawn
//! sequentially and evaluated in parallel; reports keep draw order.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffalg::{BElem, BKind, BPresentationSpec, BRef};
use crate::error::{Error, Result};
use crate::glnrep::{build_irrep, burnside_dim, weyl_dim, DominantWeight, Irrep};
use crate::linalg::Matrix;
use crate::loopalg::{Degree, Key, LoopAlgebra, LoopElem};
use crate::opcheck::{self, FamilyBracket, OpFamily, OpResidual, OpSpec, SubspaceBasis};
use crate::report::IdentityReport;
use crate::scalar::GaussRat;
use crate::tensmod::{ModVector, TensorModule, Window};

/// Every suite, in execution order.
pub const SUITES: [&str; 13] = [
    "bracket",
    "irrep",
    "module-axiom",
    "assoc-unital",
    "t-bracket",
    "family-brackets",
    "w-invariance",
    "quotient",
    "cartan-scalar",
    "evaluation-collapse",
    "burnside",
    "rank-one-algebra",
    "rank-one-module",
];

fn default_c() -> String {
    "1".into()
}
fn default_b() -> BPresentationSpec {
    BPresentationSpec {
        kind: BKind::Trivial,
        modulus: Vec::new(),
        eval_point: None,
    }
}
fn default_radius() -> i64 {
    3
}
fn default_seed() -> u64 {
    42
}
fn default_cases() -> usize {
    200
}

/// A single JSON run configuration. Every number is an exact string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    #[serde(default)]
    pub mu: Vec<u32>,
    #[serde(default = "default_c")]
    pub c: String,
    /// Defaults to `1/2` in every coordinate.
    #[serde(default)]
    pub alpha: Vec<String>,
    #[serde(rename = "B", alias = "b", default = "default_b")]
    pub b: BPresentationSpec,
    #[serde(default = "default_radius")]
    pub window_radius: i64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Empty selects every suite that applies to the configuration.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default = "default_cases")]
    pub cases_per_suite: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            mu: vec![1],
            c: default_c(),
            alpha: vec!["1/2".into(), "1/2".into()],
            b: default_b(),
            window_radius: default_radius(),
            seed: default_seed(),
            suites: Vec::new(),
            cases_per_suite: default_cases(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

impl RunConfig {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| invalid(e.to_string()))
    }

    /// Checks every precondition and builds the module data.
    pub fn validate(&self) -> Result<Validated> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let mu = DominantWeight::new(self.mu.clone());
        mu.validate(self.n)
            .map_err(|_| invalid(format!("mu must have n-1 = {} entries", self.n - 1)))?;
        let c: GaussRat = self.c.parse().map_err(|e| invalid(format!("c: {e}")))?;
        let alpha: Vec<GaussRat> = if self.alpha.is_empty() {
            vec![GaussRat::frac(1, 2); self.n]
        } else {
            self.alpha
                .iter()
                .map(|a| a.parse().map_err(|e| invalid(format!("alpha: {e}"))))
                .collect::<Result<_>>()?
        };
        if alpha.len() != self.n {
            return Err(invalid(format!("alpha must have n = {} entries", self.n)));
        }
        let pres = self.b.build().map_err(|e| invalid(format!("B: {e}")))?;
        if self.window_radius < 2 {
            return Err(invalid("window_radius must be at least 2"));
        }
        if self.cases_per_suite == 0 {
            return Err(invalid("cases_per_suite must be positive"));
        }
        let suites: Vec<String> = if self.suites.is_empty() {
            SUITES
                .iter()
                .filter(|s| applies(s, self.n, self.window_radius))
                .map(|s| s.to_string())
                .collect()
        } else {
            for s in &self.suites {
                if !SUITES.contains(&s.as_str()) {
                    return Err(invalid(format!("unknown suite {s:?}")));
                }
                if s.starts_with("rank-one") && self.n != 1 {
                    return Err(invalid(format!("suite {s} needs n = 1")));
                }
                if s == "rank-one-module" && self.window_radius < 4 {
                    return Err(invalid("suite rank-one-module needs window_radius >= 4"));
                }
            }
            // Canonical order, no repeats.
            SUITES
                .iter()
                .filter(|s| self.suites.iter().any(|x| x == *s))
                .map(|s| s.to_string())
                .collect()
        };
        let rep = build_irrep(&mu, &c, self.n).map_err(|e| invalid(format!("irrep: {e}")))?;
        let window = Window::new(self.n, self.window_radius)?;
        let module = TensorModule::new(Arc::new(rep), alpha, pres, window)?;
        Ok(Validated {
            config: self.clone(),
            suites,
            module,
        })
    }
}

fn applies(suite: &str, n: usize, radius: i64) -> bool {
    match suite {
        "rank-one-algebra" => n == 1,
        "rank-one-module" => n == 1 && radius >= 4,
        _ => true,
    }
}

/// A configuration that passed validation, with its module built.
#[derive(Clone, Debug)]
pub struct Validated {
    config: RunConfig,
    suites: Vec<String>,
    module: TensorModule,
}

impl Validated {
    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn suites(&self) -> &[String] {
        &self.suites
    }

    pub fn module(&self) -> &TensorModule {
        &self.module
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.config.seed = seed;
        self
    }

    /// Runs the selected suites in order.
    pub fn run(&self) -> Vec<IdentityReport> {
        self.suites.iter().map(|s| self.run_suite(s)).collect()
    }

    pub fn run_suite(&self, name: &str) -> IdentityReport {
        let start = Instant::now();
        let stream = SUITES
            .iter()
            .position(|s| *s == name)
            .unwrap_or(SUITES.len()) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(stream);
        let cx = Ctx {
            m: &self.module,
            n: self.module.rank(),
            cases: self.config.cases_per_suite,
        };
        let mut report = IdentityReport::new(name);
        match name {
            "bracket" => bracket_suite(&cx, &mut rng, &mut report),
            "irrep" => irrep_suite(&cx, &mut report),
            "module-axiom" => module_axiom_suite(&cx, &mut rng, &mut report),
            "assoc-unital" => assoc_suite(&cx, &mut rng, &mut report),
            "t-bracket" => t_bracket_suite(&cx, &mut rng, &mut report),
            "family-brackets" => family_suite(&cx, &mut rng, &mut report),
            "w-invariance" => w_invariance_suite(&cx, &mut rng, &mut report),
            "quotient" => quotient_suite(&cx, &mut rng, &mut report),
            "cartan-scalar" => cartan_suite(&cx, &mut rng, &mut report),
            "evaluation-collapse" => collapse_suite(&cx, &mut rng, &mut report),
            "burnside" => burnside_suite(&cx, &mut report),
            "rank-one-algebra" => rank_one_algebra_suite(&cx, &mut report),
            "rank-one-module" => match opcheck::rank_one_suite(cx.m) {
                Ok(r) => report = r,
                Err(e) => report.record_error("rank-one module checks", &e),
            },
            other => report.record_error(other, &invalid(format!("unknown suite {other:?}"))),
        }
        report.suite = name.to_string();
        report.config = serde_json::to_value(&self.config).expect("config serializes");
        report.seed = self.config.seed;
        report.sort_failures();
        report.wall_time_ms = start.elapsed().as_millis() as u64;
        report
    }
}

/// Validates and runs a configuration.
pub fn run_config(cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    Ok(cfg.validate()?.run())
}

struct Ctx<'a> {
    m: &'a TensorModule,
    n: usize,
    cases: usize,
}

impl Ctx<'_> {
    fn pres(&self) -> &BRef {
        self.m.presentation()
    }
}

/// Draws every case first, then evaluates them in parallel, recording in
/// draw order. A case evaluates to a witness list (empty on success).
fn run_cases<C, G, E>(report: &mut IdentityReport, count: usize, mut draw: G, eval: E)
where
    C: Send + Sync,
    G: FnMut() -> (String, C),
    E: Fn(&C) -> Result<Vec<String>> + Sync,
{
    let cases: Vec<(String, C)> = (0..count).map(|_| draw()).collect();
    let results: Vec<Result<Vec<String>>> = cases.par_iter().map(|(_, c)| eval(c)).collect();
    for ((label, _), res) in cases.into_iter().zip(results) {
        match res {
            Ok(w) => report.record(label, w),
            Err(e) => report.record_error(label, &e),
        }
    }
}

// ---- random sampling ----

fn rand_scalar<R: Rng>(rng: &mut R) -> GaussRat {
    let re = GaussRat::frac(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    if rng.gen_bool(0.25) {
        let im = GaussRat::frac(rng.gen_range(-2..=2), rng.gen_range(1..=2));
        &re + &(&im * &GaussRat::i())
    } else {
        re
    }
}

fn rand_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<GaussRat> {
    (0..n).map(|_| rand_scalar(rng)).collect()
}

fn rand_degree<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Degree {
    Degree((0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
}

fn rand_b<R: Rng>(rng: &mut R, pres: &BRef) -> BElem {
    let coeffs = match pres.kind() {
        BKind::Trivial => return BElem::scalar(pres, rand_scalar(rng)),
        BKind::PolyQuot => pres.modulus().len() - 1,
        BKind::Laurent => 0,
    };
    if coeffs > 0 {
        let c: Vec<GaussRat> = (0..coeffs).map(|_| rand_scalar(rng)).collect();
        return BElem::from_coeffs(pres, &c).expect("coefficients fit the presentation");
    }
    let mut b = BElem::zero(pres);
    for _ in 0..rng.gen_range(1..=3) {
        let mono = BElem::monomial(pres, rng.gen_range(-2..=2)).expect("Laurent monomial");
        b = b
            .try_add(&mono.scale(&rand_scalar(rng)))
            .expect("same presentation");
    }
    b
}

fn rand_nonzero_b<R: Rng>(rng: &mut R, pres: &BRef) -> BElem {
    loop {
        let b = rand_b(rng, pres);
        if !b.is_zero() {
            return b;
        }
    }
}

fn rand_key<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Key {
    let r = rand_degree(rng, n, bound);
    if rng.gen_bool(1.0 / (n as f64 + 1.0)) {
        Key::a(r)
    } else {
        Key::d(rng.gen_range(0..n), r)
    }
}

fn rand_elem<R: Rng>(rng: &mut R, n: usize, pres: &BRef) -> LoopElem {
    let terms: Vec<(Key, BElem)> = (0..rng.gen_range(1..=3))
        .map(|_| (rand_key(rng, n, 2), rand_b(rng, pres)))
        .collect();
    LoopElem::from_terms(n, pres, terms)
}

/// Nonzero homogeneous element of degree `r`.
fn rand_homogeneous<R: Rng>(rng: &mut R, n: usize, pres: &BRef, r: &Degree) -> LoopElem {
    loop {
        let mut x = LoopElem::zero(n, pres);
        if rng.gen_bool(0.5) {
            x = x
                .try_add(&LoopElem::t(r.clone(), rand_b(rng, pres)))
                .expect("same presentation");
        }
        for i in 0..n {
            if rng.gen_bool(0.6) {
                let d = LoopElem::d_basis(i, r.clone(), rand_b(rng, pres));
                x = x.try_add(&d).expect("same presentation");
            }
        }
        if !x.is_zero() {
            return x;
        }
    }
}

fn rand_module_vector<R: Rng>(rng: &mut R, slices: &[Degree], d: usize) -> ModVector {
    let mut v = ModVector::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let m = slices.choose(rng).expect("interior is nonempty").clone();
        v.axpy(&GaussRat::one(), &ModVector::slice(m, rand_vec(rng, d)));
    }
    v
}

fn rand_spec<R: Rng>(rng: &mut R, family: OpFamily, n: usize, pres: &BRef, bound: i64) -> OpSpec {
    OpSpec::new(
        family,
        rand_vec(rng, n),
        rand_degree(rng, n, bound),
        rand_b(rng, pres),
        rand_b(rng, pres),
    )
    .expect("consistent by construction")
}

fn elem_witness(x: &LoopElem) -> Vec<String> {
    if x.is_zero() {
        Vec::new()
    } else {
        vec![x.to_string()]
    }
}

fn matrix_witness(label: &str, m: &Matrix) -> Vec<String> {
    m.nonzero_entries()
        .into_iter()
        .map(|(i, j, x)| format!("{label}[{i},{j}] = {x}"))
        .collect()
}

fn residual_witness(label: &str, r: &OpResidual) -> Vec<String> {
    r.nonzero_entries()
        .into_iter()
        .map(|e| format!("{label}: {e}"))
        .collect()
}

/// Slice 0 plus one random slice of the interior at `margin`.
fn test_slices<R: Rng>(rng: &mut R, m: &TensorModule, margin: &Degree) -> Vec<Degree> {
    let interior = m.window().interior(margin);
    let zero = Degree::zero(m.rank());
    let mut out = vec![zero.clone()];
    if let Some(x) = interior.choose(rng) {
        if *x != zero {
            out.push(x.clone());
        }
    }
    out.sort();
    out
}

// ---- suites ----

fn bracket_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres) = (cx.n, cx.pres().clone());
    run_cases(
        report,
        cx.cases,
        || {
            let t: Vec<LoopElem> = (0..3).map(|_| rand_elem(rng, n, &pres)).collect();
            (format!("x={}; y={}; z={}", t[0], t[1], t[2]), t)
        },
        |t| {
            let xy = t[0].bracket(&t[1])?;
            let yx = t[1].bracket(&t[0])?;
            let mut w = elem_witness(&xy.try_add(&yx)?);
            for e in &mut w {
                *e = format!("antisymmetry: {e}");
            }
            for e in elem_witness(&crate::loopalg::jacobi_residual(&t[0], &t[1], &t[2])?) {
                w.push(format!("jacobi: {e}"));
            }
            Ok(w)
        },
    );
}

fn irrep_suite(cx: &Ctx, report: &mut IdentityReport) {
    let rep: &Irrep = cx.m.rep();
    let n = rep.rank();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let res = rep.gl_relations_residual(i, j, k, l);
                    report.record(
                        format!("[E{i}{j},E{k}{l}] relation"),
                        matrix_witness("residual", &res),
                    );
                }
            }
        }
    }
    let mut w = Vec::new();
    match weyl_dim(rep.mu(), n) {
        Ok(d) if d == rep.dim() => {}
        Ok(d) => w.push(format!("dimension {} but Weyl value {d}", rep.dim())),
        Err(e) => w.push(format!("error: {e}")),
    }
    report.record("dimension equals the Weyl value", w);
    let trace = rep
        .trace_operator()
        .sub(&Matrix::scalar(rep.dim(), rep.c()));
    report.record(
        "sum of E_ii is c times identity",
        matrix_witness("residual", &trace),
    );
    let w = match burnside_dim(&rep.generators()) {
        Ok(b) if b == rep.dim() * rep.dim() => Vec::new(),
        Ok(b) => vec![format!(
            "Burnside dimension {b}, expected {}",
            rep.dim() * rep.dim()
        )],
        Err(e) => vec![format!("error: {e}")],
    };
    report.record("generated algebra is the full matrix algebra", w);
}

fn module_axiom_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let r = rand_degree(rng, n, 1);
            let s = rand_degree(rng, n, 1);
            let x = rand_homogeneous(rng, n, &pres, &r);
            let y = rand_homogeneous(rng, n, &pres, &s);
            let interior = m.window().interior(&(&r.abs() + &s.abs()));
            let v = rand_module_vector(rng, &interior, m.dim());
            (format!("x={x}; y={y}; v={v:?}"), (x, y, v))
        },
        |(x, y, v)| Ok(m.module_axiom_residual(x, y, v)?.nonzero_entries()),
    );
}

fn assoc_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let r = rand_degree(rng, n, 1);
            let s = rand_degree(rng, n, 1);
            let b = rand_b(rng, &pres);
            let b2 = rand_b(rng, &pres);
            let interior = m.window().interior(&(&r.abs() + &s.abs()));
            let v = rand_module_vector(rng, &interior, m.dim());
            (
                format!("r={r}; s={s}; b={b}; b'={b2}; v={v:?}"),
                (r, s, b, b2, v),
            )
        },
        |(r, s, b, b2, v)| {
            let (a, u) = m.assoc_unital_check(r, s, b, b2, v)?;
            let mut w: Vec<String> = a
                .nonzero_entries()
                .into_iter()
                .map(|e| format!("assoc: {e}"))
                .collect();
            w.extend(
                u.nonzero_entries()
                    .into_iter()
                    .map(|e| format!("unit: {e}")),
            );
            Ok(w)
        },
    );
}

fn t_bracket_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let p = rand_spec(rng, OpFamily::T, n, &pres, 1);
            let q = rand_spec(rng, OpFamily::T, n, &pres, 1);
            let slices = test_slices(rng, m, &opcheck::bracket_margin(&p, &q));
            (format!("{p}, {q}"), (p, q, slices))
        },
        |(p, q, slices)| Ok(opcheck::t_bracket_residual(p, q, m, slices)?.nonzero_entries()),
    );
}

fn family_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let p = rand_spec(rng, OpFamily::T, n, &pres, 1);
            let q = rand_spec(rng, OpFamily::T, n, &pres, 1);
            let slices = test_slices(rng, m, &opcheck::bracket_margin(&p, &q));
            (format!("{p}, {q}"), (p, q, slices))
        },
        |(p, q, slices)| {
            let mut w = Vec::new();
            for (kind, fam, label) in [
                (FamilyBracket::T1Bracket, OpFamily::T1, "T1 bracket"),
                (FamilyBracket::I2Bracket, OpFamily::I2, "I bracket"),
                (FamilyBracket::DDinD1, OpFamily::T, "T bracket via T1"),
            ] {
                let res = opcheck::family_bracket_residual(
                    kind,
                    &p.with_family(fam),
                    &q.with_family(fam),
                    m,
                    slices,
                )?;
                w.extend(residual_witness(label, &res));
            }
            Ok(w)
        },
    );
}

fn w_invariance_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    let w: SubspaceBasis = opcheck::w_basis(m);
    let bound = (m.window().radius() - 1).clamp(1, 2);
    run_cases(
        report,
        cx.cases,
        || {
            let spec = rand_spec(rng, OpFamily::I2, n, &pres, bound);
            (spec.to_string(), spec)
        },
        |spec| opcheck::w_invariance_violations(spec, m, &w),
    );
}

fn quotient_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    let w: SubspaceBasis = opcheck::w_basis(m);
    let bound = m.window().radius();
    run_cases(
        report,
        cx.cases,
        || {
            let specs: Vec<OpSpec> = (0..3)
                .map(|_| rand_spec(rng, OpFamily::T1, n, &pres, bound))
                .collect();
            let label = specs
                .iter()
                .map(OpSpec::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            (label, specs)
        },
        |specs| opcheck::quotient_violations(m, specs, &w),
    );
}

fn cartan_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let u = rand_vec(rng, n);
            let b = rand_b(rng, &pres);
            (format!("u={u:?}; b={b}"), (u, b))
        },
        |(u, b)| {
            Ok(matrix_witness(
                "residual",
                &opcheck::cartan_scalar_check(u, b, m)?,
            ))
        },
    );
}

fn collapse_suite(cx: &Ctx, rng: &mut ChaCha8Rng, report: &mut IdentityReport) {
    let (n, pres, m) = (cx.n, cx.pres().clone(), cx.m);
    run_cases(
        report,
        cx.cases,
        || {
            let u = rand_vec(rng, n);
            let r = rand_degree(rng, n, 1);
            let b = rand_nonzero_b(rng, &pres);
            let v = rand_vec(rng, n);
            let s = rand_degree(rng, n, 1);
            let b2 = rand_b(rng, &pres);
            let slices = test_slices(rng, m, &(&r.abs() + &s.abs()));
            let label = format!("u={u:?}; r={r}; b={b}; v={v:?}; s={s}; b'={b2}");
            (label, (u, r, b, v, s, b2, slices))
        },
        |(u, r, b, v, s, b2, slices)| {
            let mut w = matrix_witness(
                "collapse",
                &opcheck::evaluation_collapse_check(u, r, b, m, slices)?,
            );
            for fam in [OpFamily::T, OpFamily::T1] {
                let res = opcheck::tb_bracket_residual(fam, (v, s, b), (u, r, b2), m, slices)?;
                w.extend(residual_witness(&format!("{fam} relation"), &res));
            }
            Ok(w)
        },
    );
}

fn burnside_suite(cx: &Ctx, report: &mut IdentityReport) {
    let d = cx.m.dim();
    let w = opcheck::default_burnside_generators(cx.m)
        .and_then(|g| opcheck::burnside_valpha(cx.m, &g))
        .map(|b| {
            if b == d * d {
                Vec::new()
            } else {
                vec![format!("Burnside dimension {b}, expected {}", d * d)]
            }
        });
    match w {
        Ok(w) => report.record("T(e_i, e_j, 1, 1) on slice 0", w),
        Err(e) => report.record_error("T(e_i, e_j, 1, 1) on slice 0", &e),
    }
}

fn rank_one_algebra_suite(cx: &Ctx, report: &mut IdentityReport) {
    let alg = match LoopAlgebra::new(1, cx.pres().clone()) {
        Ok(a) => a,
        Err(e) => return report.record_error("rank-one algebra", &e),
    };
    for r in -5..=5 {
        for s in -5..=5 {
            let label = format!("[I({r}), I({s})]");
            match alg.i_bracket_residual(r, s) {
                Ok(x) => report.record(label, elem_witness(&x)),
                Err(e) => report.record_error(label, &e),
            }
        }
    }
    for k in 0..=4 {
        for l in 0..=4 {
            for i in -3..=3 {
                for j in -3..=3 {
                    let label = format!("[(t-1)^{k} d_{i}, (t-1)^{l} d_{j}]");
                    match alg.poly_derivation_bracket_residual(k, l, i, j) {
                        Ok(x) => report.record(label, elem_witness(&x)),
                        Err(e) => report.record_error(label, &e),
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_errors() {
        let cfg = RunConfig::from_json(r#"{"n": 3, "mu": [1, 1]}"#).unwrap();
        assert_eq!(cfg.window_radius, 3);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.cases_per_suite, 200);
        let v = cfg.validate().unwrap();
        assert_eq!(v.module().dim(), 8);
        assert!(!v.suites().iter().any(|s| s.starts_with("rank-one")));

        let bad = RunConfig::from_json(r#"{"n": 3, "mu": [1]}"#).unwrap();
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        assert!(RunConfig::from_json(r#"{"n": 2, "bogus": 1}"#).is_err());
        let bad = RunConfig {
            suites: vec!["rank-one-module".into()],
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn config_round_trip() {
        let src = r#"{"n":1,"mu":[],"c":"3/2","alpha":["1/2"],
            "B":{"kind":"polyquot","modulus":["-8/1","12/1","-6/1","1/1"],"eval_point":"2/1"},
            "window_radius":5,"seed":7,"suites":["rank-one-module"],"cases_per_suite":10}"#;
        let cfg = RunConfig::from_json(src).unwrap();
        let back = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, back);
        let reports = run_config(&cfg).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed());
    }

    #[test]
    fn small_run_is_clean_and_reproducible() {
        let cfg = RunConfig {
            cases_per_suite: 8,
            ..RunConfig::default()
        };
        let a = run_config(&cfg).unwrap();
        let b = run_config(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.passed(), "{}: {:?}", x.suite, x.failures);
            assert_eq!(x.without_timing(), y.without_timing());
        }
        assert_eq!(a.len(), 11);
    }
}
