//! Finite-dimensional irreducible gl_n modules V(μ, c) with exact matrices.
//!
//! The module is cut out of the k-fold tensor power of the natural
//! representation: a highest-weight vector of weight λ (the partition of μ)
//! is found as a null vector of the raising operators, and its orbit under
//! the lowering operators `E_{i+1,i}` is closed up with exact row reduction.
//! Finally the identity is shifted so that `I = Σ E_ii` acts by `c`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Span, SparseVec, TrackedSpan};
use crate::scalar::GaussRat;

/// Highest weight in fundamental-weight coordinates: `n − 1` nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DominantWeight(Vec<u32>);

impl DominantWeight {
    pub fn new(mu: Vec<u32>) -> Self {
        DominantWeight(mu)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Checks the length against the rank.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidWeight("rank must be at least 1".into()));
        }
        if self.0.len() != n - 1 {
            return Err(Error::InvalidWeight(format!(
                "expected {} coordinates for rank {n}, got {}",
                n - 1,
                self.0.len()
            )));
        }
        Ok(())
    }

    /// λ_i = Σ_{k ≥ i} μ_k with λ_n = 0.
    pub fn partition(&self) -> Vec<u32> {
        let n = self.0.len() + 1;
        let mut lam = vec![0u32; n];
        for i in (0..n - 1).rev() {
            lam[i] = lam[i + 1] + self.0[i];
        }
        lam
    }
}

/// Weyl dimension formula `Π_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn weyl_dim(mu: &DominantWeight, n: usize) -> Result<usize> {
    mu.validate(n)?;
    let lam = mu.partition();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= (lam[i] - lam[j]) as u128 + (j - i) as u128;
            den *= (j - i) as u128;
        }
    }
    debug_assert_eq!(num % den, 0);
    Ok((num / den) as usize)
}

/// Size limits for [`build_irrep`].
#[derive(Clone, Copy, Debug)]
pub struct IrrepLimits {
    pub max_dim: usize,
    pub max_degree: u32,
}

impl Default for IrrepLimits {
    fn default() -> Self {
        IrrepLimits {
            max_dim: 64,
            max_degree: 6,
        }
    }
}

/// V(μ, c): `e[i][j]` is the d×d matrix of `E_{ij}` (0-based indices).
#[derive(Clone, Debug)]
pub struct Irrep {
    n: usize,
    mu: DominantWeight,
    c: GaussRat,
    d: usize,
    e: Vec<Vec<Matrix>>,
    hw_index: usize,
}

type Word = Vec<u8>;

/// `E_{ij}` on the tensor power: replace one `j` by `i` in every position.
fn apply_unit(i: usize, j: usize, v: &SparseVec<Word>) -> SparseVec<Word> {
    let mut out: SparseVec<Word> = BTreeMap::new();
    for (w, c) in v {
        for p in 0..w.len() {
            if w[p] as usize == j {
                let mut w2 = w.clone();
                w2[p] = i as u8;
                let slot = out.entry(w2).or_default();
                *slot += c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// All words with the given content, in lexicographic order.
fn words_with_content(content: &[u32]) -> Vec<Word> {
    fn rec(content: &mut [u32], cur: &mut Word, left: u32, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..content.len() {
            if content[i] > 0 {
                content[i] -= 1;
                cur.push(i as u8);
                rec(content, cur, left - 1, out);
                cur.pop();
                content[i] += 1;
            }
        }
    }
    let mut c = content.to_vec();
    let k = c.iter().sum();
    let mut out = Vec::new();
    rec(&mut c, &mut Vec::new(), k, &mut out);
    out
}

/// Highest-weight vector of weight λ in the tensor power: the null-space
/// vector of all raising operators belonging to the first free column of
/// the row-reduced constraint system (columns ordered lexicographically).
fn highest_weight_vector(n: usize, lam: &[u32]) -> Result<SparseVec<Word>> {
    let words = words_with_content(lam);
    if words.len() == 1 {
        return Ok(BTreeMap::from([(words[0].clone(), GaussRat::one())]));
    }
    // Constraint rows: for each raising operator and target word, the row of
    // coefficients over the source words.
    let mut rows: BTreeMap<(usize, Word), SparseVec<usize>> = BTreeMap::new();
    for (col, w) in words.iter().enumerate() {
        let basis = BTreeMap::from([(w.clone(), GaussRat::one())]);
        for i in 0..n - 1 {
            for (target, c) in apply_unit(i, i + 1, &basis) {
                rows.entry((i, target)).or_default().insert(col, c);
            }
        }
    }
    let mut span: Span<usize> = Span::new();
    for r in rows.values() {
        span.insert(r);
    }
    let pivots: Vec<usize> = span.pivots().cloned().collect();
    let free = (0..words.len())
        .find(|c| !pivots.contains(c))
        .ok_or_else(|| Error::InvalidWeight("no highest-weight vector found".into()))?;
    // x_free = 1, x_pivot = −row_pivot[free], other free variables 0.
    let mut v: SparseVec<Word> = BTreeMap::new();
    v.insert(words[free].clone(), GaussRat::one());
    for (p, row) in span.pivots().zip(span.rows()) {
        if let Some(c) = row.get(&free) {
            v.insert(words[*p].clone(), -c);
        }
    }
    Ok(v)
}

/// Builds V(μ, c) for gl_n.
pub fn build_irrep(mu: &DominantWeight, c: &GaussRat, n: usize) -> Result<Irrep> {
    build_irrep_with(mu, c, n, IrrepLimits::default())
}

pub fn build_irrep_with(
    mu: &DominantWeight,
    c: &GaussRat,
    n: usize,
    limits: IrrepLimits,
) -> Result<Irrep> {
    mu.validate(n)?;
    if n > u8::MAX as usize {
        return Err(Error::DimensionCap {
            what: "rank",
            value: n,
            cap: u8::MAX as usize,
        });
    }
    let expected = weyl_dim(mu, n)?;
    if expected > limits.max_dim {
        return Err(Error::DimensionCap {
            what: "dimension",
            value: expected,
            cap: limits.max_dim,
        });
    }
    let lam = mu.partition();
    let k: u32 = lam.iter().sum();
    if k > limits.max_degree {
        return Err(Error::DimensionCap {
            what: "|λ|",
            value: k as usize,
            cap: limits.max_degree as usize,
        });
    }

    let hw = highest_weight_vector(n, &lam)?;
    let mut basis: Vec<SparseVec<Word>> = Vec::new();
    let mut span: TrackedSpan<Word> = TrackedSpan::new();
    span.insert(&hw);
    basis.push(hw);
    let mut next = 0;
    while next < basis.len() {
        let v = basis[next].clone();
        next += 1;
        for i in 0..n.saturating_sub(1) {
            let w = apply_unit(i + 1, i, &v);
            if w.is_empty() {
                continue;
            }
            if span.insert(&w).is_some() {
                basis.push(w);
            }
            if basis.len() > limits.max_dim {
                return Err(Error::ConstructionMismatch {
                    expected,
                    found: basis.len(),
                });
            }
        }
    }
    let d = basis.len();
    if d != expected {
        return Err(Error::ConstructionMismatch { expected, found: d });
    }

    let shift = (c - &GaussRat::from_int(k as i64)).checked_div(&GaussRat::from_int(n as i64))?;
    let mut e = vec![vec![Matrix::zeros(d, d); n]; n];
    for (i, row) in e.iter_mut().enumerate() {
        for (j, m) in row.iter_mut().enumerate() {
            for (col, v) in basis.iter().enumerate() {
                let image = apply_unit(i, j, v);
                let coords = span
                    .coordinates(&image)
                    .expect("the cyclic span is closed under gl_n");
                m.set_column(col, &coords);
            }
            if i == j {
                *m = m.add(&Matrix::scalar(d, &shift));
            }
        }
    }
    Ok(Irrep {
        n,
        mu: mu.clone(),
        c: c.clone(),
        d,
        e,
        hw_index: 0,
    })
}

impl Irrep {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn mu(&self) -> &DominantWeight {
        &self.mu
    }

    pub fn c(&self) -> &GaussRat {
        &self.c
    }

    pub fn hw_index(&self) -> usize {
        self.hw_index
    }

    /// `E_{ij}`, 0-based.
    pub fn e(&self, i: usize, j: usize) -> &Matrix {
        &self.e[i][j]
    }

    /// All `E_{ij}` in row-major index order.
    pub fn generators(&self) -> Vec<Matrix> {
        self.e.iter().flatten().cloned().collect()
    }

    /// `[E_ij, E_kl] − δ_jk E_il + δ_li E_kj`.
    pub fn gl_relations_residual(&self, i: usize, j: usize, k: usize, l: usize) -> Matrix {
        let mut r = self.e(i, j).commutator(self.e(k, l));
        if j == k {
            r = r.sub(self.e(i, l));
        }
        if l == i {
            r = r.add(self.e(k, j));
        }
        r
    }

    /// `Σ_i E_ii`.
    pub fn trace_operator(&self) -> Matrix {
        (0..self.n).fold(Matrix::zeros(self.d, self.d), |acc, i| {
            acc.add(self.e(i, i))
        })
    }

    /// Eigenvalue tuple of `(E_11, …, E_nn)` on each basis vector. The basis
    /// consists of weight vectors, so the diagonal matrices carry everything.
    pub fn basis_weights(&self) -> Vec<Vec<GaussRat>> {
        (0..self.d)
            .map(|b| {
                (0..self.n)
                    .map(|i| self.e(i, i).get(b, b).clone())
                    .collect()
            })
            .collect()
    }

    /// Weight → multiplicity.
    pub fn weight_table(&self) -> BTreeMap<Vec<String>, usize> {
        let mut out = BTreeMap::new();
        for w in self.basis_weights() {
            let key: Vec<String> = w.iter().map(GaussRat::to_string).collect();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

pub fn gl_relations_residual(rep: &Irrep, i: usize, j: usize, k: usize, l: usize) -> Matrix {
    rep.gl_relations_residual(i, j, k, l)
}

/// Dimension of the unital associative algebra generated by `mats`.
pub fn burnside_dim(mats: &[Matrix]) -> Result<usize> {
    let first = mats
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty matrix family".into()))?;
    let d = first.rows();
    if mats.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::InvalidArgument(
            "matrices must be square of one size".into(),
        ));
    }
    let mut span: Span<usize> = Span::new();
    let mut basis = vec![Matrix::identity(d)];
    span.insert(&basis[0].to_sparse());
    let mut next = 0;
    while next < basis.len() {
        let a = basis[next].clone();
        next += 1;
        for g in mats {
            let p = a.mul(g);
            if span.insert(&p.to_sparse()) {
                basis.push(p);
            }
        }
        if basis.len() == d * d {
            break;
        }
    }
    Ok(span.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn dw(v: &[u32]) -> DominantWeight {
        DominantWeight::new(v.to_vec())
    }

    /// Brute-force oracle: count semistandard Young tableaux of shape λ with
    /// entries in 1..=n (equals the irrep dimension).
    fn ssyt_count(lam: &[u32], n: usize) -> usize {
        let cells: Vec<(usize, usize)> = lam
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
            .collect();
        fn rec(
            idx: usize,
            cells: &[(usize, usize)],
            fill: &mut BTreeMap<(usize, usize), usize>,
            n: usize,
        ) -> usize {
            if idx == cells.len() {
                return 1;
            }
            let (r, c) = cells[idx];
            let mut total = 0;
            for v in 1..=n {
                if c > 0 && fill[&(r, c - 1)] > v {
                    continue;
                }
                if r > 0 && fill[&(r - 1, c)] >= v {
                    continue;
                }
                fill.insert((r, c), v);
                total += rec(idx + 1, cells, fill, n);
                fill.remove(&(r, c));
            }
            total
        }
        rec(0, &cells, &mut BTreeMap::new(), n)
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_dim(&dw(&[1]), 2).unwrap(), 2);
        assert_eq!(weyl_dim(&dw(&[1, 1]), 3).unwrap(), 8);
        assert_eq!(weyl_dim(&dw(&[0, 0, 0]), 4).unwrap(), 1);
        assert_eq!(weyl_dim(&dw(&[]), 1).unwrap(), 1);
        assert!(weyl_dim(&dw(&[1]), 3).is_err());
    }

    #[test]
    fn weyl_matches_tableau_count() {
        for (mu, n) in [
            (vec![2], 2),
            (vec![3], 2),
            (vec![1, 0], 3),
            (vec![2, 1], 3),
            (vec![0, 2], 3),
            (vec![1, 0, 1], 4),
        ] {
            let m = dw(&mu);
            assert_eq!(
                weyl_dim(&m, n).unwrap(),
                ssyt_count(&m.partition(), n),
                "{mu:?}"
            );
        }
    }

    #[test]
    fn natural_representation() {
        let rep = build_irrep(&dw(&[1]), &g("1"), 2).unwrap();
        assert_eq!(rep.dim(), 2);
        let unit = |i: usize, j: usize| {
            let mut m = Matrix::zeros(2, 2);
            m.set(i, j, GaussRat::one());
            m
        };
        assert_eq!(rep.e(1, 0), &unit(1, 0));
        assert_eq!(rep.e(0, 1), &unit(0, 1));
        assert_eq!(rep.trace_operator(), Matrix::identity(2));
    }

    #[test]
    fn spin_one_chain() {
        let rep = build_irrep(&dw(&[2]), &g("7/3"), 2).unwrap();
        assert_eq!(rep.dim(), 3);
        let lower = rep.e(1, 0);
        assert!(lower.pow(3).is_zero());
        assert!(!lower.pow(2).is_zero());
    }

    #[test]
    fn trivial_module() {
        for n in 1..=4 {
            let rep = build_irrep(&dw(&vec![0; n - 1]), &g("0"), n).unwrap();
            assert_eq!(rep.dim(), 1);
            assert!(rep.generators().iter().all(Matrix::is_zero));
        }
    }

    #[test]
    fn relations_sl3() {
        for mu in [[1, 0], [1, 1], [0, 2]] {
            let rep = build_irrep(&dw(&mu), &g("5/2"), 3).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            assert!(rep.gl_relations_residual(i, j, k, l).is_zero());
                        }
                    }
                }
            }
            assert_eq!(rep.trace_operator(), Matrix::scalar(rep.dim(), &g("5/2")));
        }
        let rep = build_irrep(&dw(&[1]), &g("1"), 2).unwrap();
        // [E12, E21] = E11 − E22
        assert_eq!(
            rep.e(0, 1).commutator(rep.e(1, 0)),
            rep.e(0, 0).sub(rep.e(1, 1))
        );
    }

    #[test]
    fn highest_weight_vector_annihilated() {
        let rep = build_irrep(&dw(&[1, 1]), &g("0"), 3).unwrap();
        let mut hw = vec![GaussRat::zero(); rep.dim()];
        hw[rep.hw_index()] = GaussRat::one();
        for i in 0..2 {
            assert!(rep.e(i, i + 1).mul_vec(&hw).iter().all(GaussRat::is_zero));
        }
        for i in 0..3 {
            let img = rep.e(i, i).mul_vec(&hw);
            let lambda = rep.e(i, i).get(0, 0).clone();
            let scaled: Vec<GaussRat> = hw.iter().map(|x| x * &lambda).collect();
            assert_eq!(img, scaled);
        }
    }

    #[test]
    fn burnside_examples() {
        assert_eq!(burnside_dim(&[Matrix::identity(3)]).unwrap(), 1);
        let rep = build_irrep(&dw(&[1]), &g("1"), 2).unwrap();
        assert_eq!(burnside_dim(&rep.generators()).unwrap(), 4);
        let diag = Matrix::from_rows(vec![vec![g("1"), g("0")], vec![g("0"), g("2")]]);
        assert_eq!(burnside_dim(&[diag]).unwrap(), 2);
        assert!(burnside_dim(&[]).is_err());
    }

    #[test]
    fn caps_enforced() {
        let e = build_irrep(&dw(&[7]), &g("0"), 2);
        assert!(matches!(e, Err(Error::DimensionCap { .. })));
        let limits = IrrepLimits {
            max_dim: 4,
            max_degree: 6,
        };
        assert!(matches!(
            build_irrep_with(&dw(&[1, 1]), &g("0"), 3, limits),
            Err(Error::DimensionCap { .. })
        ));
    }
}
