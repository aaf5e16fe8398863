//! Dense linear algebra over prime fields GF(q).
//!
//! Column spaces are the objects of interest here: a matrix `M` with `d`
//! rows describes the subspace `<M>` of GF(q)^d spanned by its columns.
//! Every routine is exact and deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible field order (exclusive).
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

/// Order of a prime field, checked for primality on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldOrder(u64);

impl FieldOrder {
    pub fn new(q: u64) -> Result<Self> {
        if q >= MAX_FIELD_ORDER || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(FieldOrder(q))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a) % self.0
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// log2(q), the entropy in bits of one uniform field symbol.
    pub fn bits(self) -> f64 {
        (self.0 as f64).log2()
    }
}

impl TryFrom<u64> for FieldOrder {
    type Error = Error;

    fn try_from(q: u64) -> Result<Self> {
        FieldOrder::new(q)
    }
}

impl From<FieldOrder> for u64 {
    fn from(q: FieldOrder) -> u64 {
        q.0
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMatrix {
    q: FieldOrder,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FiniteMatrix {
    /// Builds a matrix from row-major entries; entries must already be residues.
    pub fn new(q: FieldOrder, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= q.get()) {
            return Err(Error::Model(format!("entry {bad} is not a residue mod {}", q.get())));
        }
        Ok(FiniteMatrix { q, rows, cols, entries })
    }

    /// Builds a matrix from nested rows, reducing every entry mod q.
    pub fn from_rows(q: FieldOrder, rows: usize, data: &[Vec<i64>]) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::Dimension(format!("expected {rows} rows, got {}", data.len())));
        }
        let cols = data.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&e| e.rem_euclid(q.get() as i64) as u64));
        }
        Ok(FiniteMatrix { q, rows, cols, entries })
    }

    pub fn zeros(q: FieldOrder, rows: usize, cols: usize) -> Self {
        FiniteMatrix { q, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(q: FieldOrder, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % q.get();
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(q: FieldOrder, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(q, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, &v) in col.iter().enumerate() {
                m.entries[r * m.cols + c] = v % q.get();
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> FieldOrder {
        self.q
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(FiniteMatrix { q: self.q, rows: self.rows, cols, entries })
    }

    /// Submatrix keeping the listed columns in order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut m = Self::zeros(self.q, self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    /// Submatrix keeping the listed rows in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        FiniteMatrix { q: self.q, rows: rows.len(), cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.q != other.q || self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q;
        let mut out = Self::zeros(q, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = q.add(out.get(r, c), q.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `x · self`.
    pub fn left_mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let q = self.q;
        let mut out = vec![0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = q.add(*o, q.mul(xr, self.get(r, c)));
            }
        }
        out
    }

    /// Matrix times column vector, `self · x`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let q = self.q;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| q.add(acc, q.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Dimension(format!("fields differ: {} vs {}", self.q, other.q)));
        }
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "row counts differ: {} vs {}",
                self.rows, other.rows
            )));
        }
        Ok(())
    }

    /// Reduced row-echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (FiniteMatrix, Vec<usize>) {
        let q = self.q;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if p != lead {
                for k in 0..m.cols {
                    m.entries.swap(p * m.cols + k, lead * m.cols + k);
                }
            }
            let inv = q.inv(m.get(lead, c));
            for k in c..m.cols {
                let v = q.mul(m.get(lead, k), inv);
                m.set(lead, k, v);
            }
            for r in 0..m.rows {
                let f = m.get(r, c);
                if r == lead || f == 0 {
                    continue;
                }
                for k in c..m.cols {
                    let v = q.sub(m.get(r, k), q.mul(f, m.get(lead, k)));
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn has_full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }

    /// Basis of `{x : self · x = 0}` as the columns of the returned matrix.
    ///
    /// One basis vector per free column of the RREF, with a 1 in that free
    /// position.
    pub fn null_space(&self) -> FiniteMatrix {
        let q = self.q;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FiniteMatrix::zeros(q, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, 1 % q.get());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, j, q.neg(r.get(row, f)));
            }
        }
        basis
    }

    /// Canonical basis of the column space: the nonzero rows of the RREF
    /// of the transpose, laid out as columns. Span-equal inputs yield equal
    /// outputs.
    pub fn canonical_column_basis(&self) -> FiniteMatrix {
        let (r, pivots) = self.transpose().rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        r.select_rows(&keep).transpose()
    }

    /// Columns of `self` forming a basis of its column space (leftmost first).
    pub fn reduce_to_full_column_rank(&self) -> FiniteMatrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Whether every column of `other` lies in the column space of `self`.
    pub fn span_contains(&self, other: &Self) -> Result<bool> {
        Ok(self.hcat(other)?.rank() == self.rank())
    }

    pub fn span_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.span_contains(other)? && other.span_contains(self)?)
    }

    /// Basis of `<a> ∩ <b>`, canonicalized.
    ///
    /// Each null-space vector `(u, v)` of `[a | b]` gives `a·u = -b·v`, a
    /// vector in both column spaces; together they span the intersection.
    pub fn column_space_intersection(a: &Self, b: &Self) -> Result<FiniteMatrix> {
        let block = a.hcat(b)?;
        let kernel = block.null_space();
        let top: Vec<usize> = (0..a.cols).collect();
        let u = kernel.select_rows(&top);
        let spanning = a.mul(&u)?;
        Ok(spanning.canonical_column_basis())
    }

    /// Intersection of several column spaces as a left fold of the pairwise
    /// operation. An empty list is rejected since the ambient space is unknown.
    pub fn intersect_all<'a, I>(matrices: I) -> Result<FiniteMatrix>
    where
        I: IntoIterator<Item = &'a FiniteMatrix>,
    {
        let mut iter = matrices.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Dimension("intersection of zero subspaces".into()))?;
        iter.try_fold(first.canonical_column_basis(), |acc, m| {
            Self::column_space_intersection(&acc, m)
        })
    }

    /// Columns `N` of `target` such that `[base | N]` is a basis of `<target>`.
    pub fn extend_basis(base: &Self, target: &Self) -> Result<FiniteMatrix> {
        if !base.has_full_column_rank() {
            return Err(Error::Dimension("base must have full column rank".into()));
        }
        if !target.span_contains(base)? {
            return Err(Error::SubspaceNotContained);
        }
        let (_, pivots) = base.hcat(target)?.rref();
        let extra: Vec<usize> = pivots
            .into_iter()
            .filter(|&p| p >= base.cols)
            .map(|p| p - base.cols)
            .collect();
        Ok(target.select_columns(&extra))
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    pub fn solve_right(&self, rhs: &Self) -> Result<Option<FiniteMatrix>> {
        let q = self.q;
        let (r, pivots) = self.hcat(rhs)?.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = FiniteMatrix::zeros(q, self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, r.get(row, self.cols + c));
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Display for FiniteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "] over {}", self.q)
    }
}
