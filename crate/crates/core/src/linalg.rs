//! Exact linear algebra over ℚ(i).
//!
//! Vectors are sparse maps from an ordered key type to coefficients, so the
//! same row-reduction code serves tensor-power words, flattened matrices and
//! module slices alike. [`Span`] keeps its rows in reduced echelon form;
//! [`TrackedSpan`] additionally records how each row was built from the
//! inserted generators, which is what coordinate extraction needs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::scalar::GaussRat;

pub type SparseVec<K> = BTreeMap<K, GaussRat>;

/// `y += a * x`, pruning entries that cancel.
pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &GaussRat, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let t = a * v;
        match y.get_mut(k) {
            Some(e) => {
                *e += &t;
                if e.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    y.insert(k.clone(), t);
                }
            }
        }
    }
}

pub fn scale<K: Ord + Clone>(x: &SparseVec<K>, a: &GaussRat) -> SparseVec<K> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), a * v)).collect()
}

/// A subspace held as rows in reduced echelon form, keyed by pivot.
///
/// A column index records which rows touch each non-pivot key, so reducing
/// a vector or eliminating a fresh pivot only visits the rows involved.
#[derive(Clone, Debug)]
pub struct Span<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
    occurs: BTreeMap<K, BTreeSet<K>>,
}

impl<K: Ord + Clone> Default for Span<K> {
    fn default() -> Self {
        Span {
            rows: BTreeMap::new(),
            occurs: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Span<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows in pivot order; each has leading coefficient 1 and zeros at every
    /// other pivot.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remainder of `v` after elimination against every pivot row.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        // Rows carry no foreign pivots, so one pass over v's own pivots suffices.
        let hits: Vec<K> = v
            .keys()
            .filter(|k| self.rows.contains_key(k))
            .cloned()
            .collect();
        let mut r = v.clone();
        for p in hits {
            if let Some(c) = r.get(&p).cloned() {
                axpy(&mut r, &-c, &self.rows[&p]);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns false when it was already contained.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SparseVec<K>) -> bool {
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("leading coefficient is nonzero");
        let row = scale(&r, &inv);
        let touched = self.occurs.remove(&pivot).unwrap_or_default();
        for p in touched {
            let other = self.rows.get_mut(&p).expect("indexed row exists");
            let c = other.get(&pivot).cloned().expect("index is exact");
            axpy(other, &-c, &row);
            for k in row.keys().skip(1) {
                let set = self.occurs.entry(k.clone()).or_default();
                if other.contains_key(k) {
                    set.insert(p.clone());
                } else {
                    set.remove(&p);
                }
            }
        }
        for k in row.keys().skip(1) {
            self.occurs
                .entry(k.clone())
                .or_default()
                .insert(pivot.clone());
        }
        self.rows.insert(pivot, row);
        true
    }
}

/// Augmented key: the vector part sorts before the bookkeeping tags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Aug<K> {
    Main(K),
    Tag(usize),
}

/// A span that remembers the generators it was built from and can express
/// any member as a combination of them.
#[derive(Clone, Debug)]
pub struct TrackedSpan<K: Ord + Clone> {
    inner: Span<Aug<K>>,
    generators: usize,
}

impl<K: Ord + Clone> Default for TrackedSpan<K> {
    fn default() -> Self {
        TrackedSpan {
            inner: Span::new(),
            generators: 0,
        }
    }
}

impl<K: Ord + Clone> TrackedSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.generators
    }

    fn lift(v: &SparseVec<K>) -> SparseVec<Aug<K>> {
        v.iter()
            .map(|(k, c)| (Aug::Main(k.clone()), c.clone()))
            .collect()
    }

    fn main_part_is_zero(v: &SparseVec<Aug<K>>) -> bool {
        !matches!(v.keys().next(), Some(Aug::Main(_)))
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        Self::main_part_is_zero(&self.inner.reduce(&Self::lift(v)))
    }

    /// Inserts `v` as the next generator if independent; returns its index.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<usize> {
        if self.contains(v) {
            return None;
        }
        let idx = self.generators;
        let mut row = Self::lift(v);
        row.insert(Aug::Tag(idx), GaussRat::one());
        self.inner.insert(&row);
        self.generators += 1;
        Some(idx)
    }

    /// Coefficients of `v` in terms of the inserted generators, or `None` if
    /// `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<GaussRat>> {
        let r = self.inner.reduce(&Self::lift(v));
        if !Self::main_part_is_zero(&r) {
            return None;
        }
        let mut out = vec![GaussRat::zero(); self.generators];
        for (k, c) in r {
            if let Aug::Tag(i) = k {
                out[i] = -c;
            }
        }
        Some(out)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussRat::one())
    }

    pub fn scalar(n: usize, c: &GaussRat) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &GaussRat) {
        self.data[i * self.cols + j] += v;
    }

    pub fn column(&self, j: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[GaussRat]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussRat::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut span = Span::new();
        for i in 0..self.rows {
            let row: SparseVec<usize> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            span.insert(&row);
        }
        span.dim()
    }

    /// Row-major flattening with zero entries dropped.
    pub fn to_sparse(&self) -> SparseVec<usize> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }

    pub fn nonzero_entries(&self) -> Vec<(usize, usize, GaussRat)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    /// Rows of exact fraction strings, as used in JSON output.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_exact_string())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
