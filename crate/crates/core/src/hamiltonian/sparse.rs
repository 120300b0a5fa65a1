//! Configuration bases and CSR complex sparse matrices.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::category::Label;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::DROP_TOL;

/// Ordered set of edge configurations. A configuration is encoded as a
/// mixed-radix integer with edge 0 as the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    num_labels: usize,
    num_edges: usize,
    states: Vec<u64>,
}

impl Basis {
    /// Builds a basis from configuration codes; they are sorted and deduplicated.
    pub fn from_codes(num_labels: usize, num_edges: usize, mut states: Vec<u64>) -> Self {
        states.sort_unstable();
        states.dedup();
        Self { num_labels, num_edges, states }
    }

    /// Every configuration of `num_edges` edges.
    pub fn full(num_labels: usize, num_edges: usize, cap: u128) -> Result<Self> {
        let dim = (num_labels as u128).checked_pow(num_edges as u32).unwrap_or(u128::MAX);
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(Self { num_labels, num_edges, states: (0..dim as u64).collect() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn codes(&self) -> &[u64] {
        &self.states
    }

    #[inline]
    pub fn code(&self, index: usize) -> u64 {
        self.states[index]
    }

    #[inline]
    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.states.binary_search(&code).ok()
    }

    /// Labels of every edge in configuration `index`.
    pub fn config(&self, index: usize) -> Vec<Label> {
        self.decode(self.states[index])
    }

    pub fn decode(&self, mut code: u64) -> Vec<Label> {
        let n = self.num_labels as u64;
        let mut out = vec![Label::VACUUM; self.num_edges];
        for slot in out.iter_mut().rev() {
            *slot = Label((code % n) as u8);
            code /= n;
        }
        out
    }

    pub fn encode(&self, labels: &[Label]) -> u64 {
        let n = self.num_labels as u64;
        labels.iter().fold(0, |acc, l| acc * n + l.0 as u64)
    }

    /// Place value of `edge` in the code.
    #[inline]
    pub fn weight(&self, edge: usize) -> u64 {
        (self.num_labels as u64).pow((self.num_edges - 1 - edge) as u32)
    }

    #[inline]
    pub fn label_at(&self, code: u64, edge: usize) -> Label {
        Label(((code / self.weight(edge)) % self.num_labels as u64) as u8)
    }
}

/// Complex sparse matrix in compressed-row form. Rows and columns index
/// `basis` when one is attached.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    basis: Option<Arc<Basis>>,
}

impl PartialEq for SparseOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.row_ptr == other.row_ptr && self.cols == other.cols && self.vals == other.vals
    }
}

impl SparseOperator {
    /// Sums duplicate `(row, col)` entries and drops those below [`DROP_TOL`].
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= dim || c >= dim {
                return Err(Error::OutOfRange { what: "matrix index", index: r.max(c), len: dim });
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        let mut it = triplets.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if (r2, c2) != (r, c) {
                    break;
                }
                v += v2;
                it.next();
            }
            if v.norm() >= DROP_TOL {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { dim, row_ptr, cols, vals, basis: None })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim).collect(),
            vals: vec![Complex64::new(1.0, 0.0); dim],
            basis: None,
        }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let mut t = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                t.push((r, c, m[(r, c)]));
            }
        }
        Self::from_triplets(m.nrows(), t)
    }

    pub fn with_basis(mut self, basis: Arc<Basis>) -> Self {
        self.basis = Some(basis);
        self
    }

    pub fn basis(&self) -> Option<&Arc<Basis>> {
        self.basis.as_ref()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(col, value)` pairs of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_with(x, Exec::default())
    }

    pub fn apply_with(&self, x: &[Complex64], exec: Exec) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        par::fill(exec, &mut y, |r| self.row(r).map(|(c, v)| v * x[c]).sum());
        Ok(y)
    }

    pub fn adjoint(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        let mut out = Self::from_triplets(self.dim, t).expect("indices in range");
        out.basis = self.basis.clone();
        out
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `alpha A + beta B`.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        self.check_dim(other)?;
        let t = self
            .triplets()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.triplets().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        let mut out = Self::from_triplets(self.dim, t)?;
        out.basis = self.basis.clone();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Sparse product `A B`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.matmul_with(other, Exec::default())
    }

    pub fn matmul_with(&self, other: &Self, exec: Exec) -> Result<Self> {
        self.check_dim(other)?;
        let rows = par::map_range(exec, self.dim, |r| {
            let mut acc: std::collections::BTreeMap<usize, Complex64> = Default::default();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_default() += a * b;
                }
            }
            acc.into_iter().map(move |(c, v)| (r, c, v)).collect::<Vec<_>>()
        });
        let mut out = Self::from_triplets(self.dim, rows.into_iter().flatten().collect())?;
        out.basis = self.basis.clone();
        Ok(out)
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim).map(|r| self.row(r).fold(0.0, |acc, (_, v)| acc + v.norm())).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (r, c, v) in self.triplets() {
            worst = worst.max((v - self.get(c, r).conj()).norm());
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Restriction to the given rows/columns, in that order.
    pub fn submatrix(&self, idx: &[usize]) -> DMatrix<Complex64> {
        DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// Matrix Market coordinate text (1-based indices).
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::with_capacity(64 + 64 * self.nnz());
        s.push_str("%%MatrixMarket matrix coordinate complex general\n");
        if let Some(b) = &self.basis {
            let _ = writeln!(
                s,
                "% basis: {} configurations of {} edges over {} labels, edge 0 most significant",
                b.dim(),
                b.num_edges(),
                b.num_labels()
            );
        }
        let _ = writeln!(s, "{} {} {}", self.dim, self.dim, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {:.17e} {:.17e}", r + 1, c + 1, v.re, v.im);
        }
        s
    }

    pub fn write_matrix_market(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        f.write_all(self.to_matrix_market().as_bytes()).map_err(io)?;
        f.flush().map_err(io)
    }

    /// Parses the output of [`Self::to_matrix_market`].
    pub fn from_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad size line `{header}`"))))
            .collect::<Result<_>>()?;
        if dims.len() != 3 || dims[0] != dims[1] {
            return Err(Error::Parse(format!("bad size line `{header}`")));
        }
        let mut t = Vec::with_capacity(dims[2]);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("bad entry line `{line}`"));
            if f.len() != 4 {
                return Err(bad());
            }
            let r: usize = f[0].parse().map_err(|_| bad())?;
            let c: usize = f[1].parse().map_err(|_| bad())?;
            if r == 0 || c == 0 {
                return Err(bad());
            }
            let re: f64 = f[2].parse().map_err(|_| bad())?;
            let im: f64 = f[3].parse().map_err(|_| bad())?;
            t.push((r - 1, c - 1, Complex64::new(re, im)));
        }
        Self::from_triplets(dims[0], t)
    }
}
