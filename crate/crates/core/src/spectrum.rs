//! Eigen-solving for Hermitian sparse operators.
//!
//! The dense path splits the matrix into connected blocks and diagonalizes
//! each with nalgebra; it serves as the oracle for the iterative path, a
//! thick-restart Lanczos with full reorthogonalization that locks one
//! converged Ritz pair at a time.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::SparseOperator;
use crate::par::Exec;

/// Largest operator the dense path accepts.
pub const DENSE_MAX_DIM: usize = 4096;
/// Absolute tolerance for counting degenerate eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-6;
/// Required residual relative to `‖H‖_∞`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Allowed `max |H - H^dagger|` before solving.
pub const HERMITICITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "iterative" | "lanczos" => Ok(Method::Iterative),
            _ => Err(Error::Parse(format!("unknown method `{s}` (expected dense or iterative)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub method: Method,
    pub dim: usize,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    /// Eigenvalues within [`DEGENERACY_TOL`] of the minimum among those returned.
    pub ground_degeneracy: usize,
    /// `‖H x - λ x‖` per reported pair.
    pub residuals: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl SpectrumResult {
    fn new(method: Method, dim: usize, pairs: Vec<(f64, Vec<Complex64>, f64)>) -> Self {
        let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ground_energy = eigenvalues.first().copied().unwrap_or(f64::NAN);
        let ground_degeneracy = count_degenerate(&eigenvalues);
        let residuals = pairs.iter().map(|p| p.2).collect();
        let eigenvectors = pairs.into_iter().map(|p| p.1).collect();
        Self { method, dim, eigenvalues, ground_energy, ground_degeneracy, residuals, eigenvectors }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("spectrum serializes")
    }

    /// Eigenvectors as a `dim x k` Matrix Market coordinate array.
    pub fn eigenvectors_matrix_market(&self) -> String {
        let mut s = String::from("%%MatrixMarket matrix coordinate complex general\n");
        let nnz: usize = self.eigenvectors.iter().map(|v| v.iter().filter(|x| x.norm() > 0.0).count()).sum();
        let _ = writeln!(s, "{} {} {}", self.dim, self.eigenvectors.len(), nnz);
        for r in 0..self.dim {
            for (c, v) in self.eigenvectors.iter().enumerate() {
                if v[r].norm() > 0.0 {
                    let _ = writeln!(s, "{} {} {:.17e} {:.17e}", r + 1, c + 1, v[r].re, v[r].im);
                }
            }
        }
        s
    }
}

fn count_degenerate(sorted: &[f64]) -> usize {
    match sorted.first() {
        Some(&e0) => sorted.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count(),
        None => 0,
    }
}

/// `y = A x`, checking dimensions.
pub fn apply(op: &SparseOperator, x: &[Complex64]) -> Result<Vec<Complex64>> {
    op.apply(x)
}

fn check_hermitian(op: &SparseOperator) -> Result<()> {
    let r = op.hermiticity_residual();
    if r > HERMITICITY_TOL {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

/// The `k` lowest eigenpairs.
pub fn eigensolve(op: &SparseOperator, k: usize, method: Method) -> Result<SpectrumResult> {
    match method {
        Method::Dense => eigensolve_dense(op, k),
        Method::Iterative => eigensolve_iterative(op, k, &LanczosOptions::default()),
    }
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn residual(op: &SparseOperator, lambda: f64, x: &[Complex64], exec: Exec) -> Result<f64> {
    let hx = op.apply_with(x, exec)?;
    Ok(hx.iter().zip(x).map(|(h, v)| (h - v * lambda).norm_sqr()).sum::<f64>().sqrt())
}

/// Connected blocks of the sparsity graph, each sorted, ordered by first index.
pub fn connected_blocks(op: &SparseOperator) -> Vec<Vec<usize>> {
    let n = op.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (r, c, _) in op.triplets() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let root = find(&mut parent, x);
        groups.entry(root).or_default().push(x);
    }
    groups.into_values().collect()
}

/// Dense diagonalization, block by block. Every eigenpair is computed; the
/// lowest `k` are returned with their residuals.
pub fn eigensolve_dense(op: &SparseOperator, k: usize) -> Result<SpectrumResult> {
    check_hermitian(op)?;
    let n = op.dim();
    if n > DENSE_MAX_DIM {
        return Err(Error::TooLargeForDense { dim: n, max: DENSE_MAX_DIM });
    }
    let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    for block in connected_blocks(op) {
        let m = op.submatrix(&block);
        let eig = SymmetricEigen::new(m);
        for (c, &lambda) in eig.eigenvalues.iter().enumerate() {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (a, &row) in block.iter().enumerate() {
                v[row] = eig.eigenvectors[(a, c)];
            }
            pairs.push((lambda, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(k.min(n));
    let out = pairs
        .into_iter()
        .map(|(l, v)| {
            let r = residual(op, l, &v, Exec::default())?;
            Ok((l, v, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult::new(Method::Dense, n, out))
}

/// Every eigenvalue of a small operator, ascending.
pub fn all_eigenvalues_dense(op: &SparseOperator) -> Result<Vec<f64>> {
    Ok(eigensolve_dense(op, usize::MAX)?.eigenvalues)
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Largest Krylov basis before a restart.
    pub max_basis: usize,
    /// Restarts allowed per locked eigenpair.
    pub max_restarts: usize,
    /// Convergence threshold relative to `‖H‖_∞`.
    pub rel_tol: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { max_basis: 64, max_restarts: 500, rel_tol: 1e-10, seed: 0x5eed, exec: Exec::default() }
    }
}

/// Orthogonalizes `w` against the given orthonormal sets, repeating the
/// Gram-Schmidt pass while it removes a large share of the norm. Returns the
/// normalized vector, or `None` when less than `floor` of the original norm
/// survives.
fn orthonormalize(mut w: Vec<Complex64>, sets: &[&[Vec<Complex64>]], floor: f64) -> Option<Vec<Complex64>> {
    let start = norm(&w);
    if start == 0.0 {
        return None;
    }
    let mut before = start;
    for _ in 0..4 {
        for set in sets {
            for b in set.iter() {
                let c = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let after = norm(&w);
        if after < floor * start {
            return None;
        }
        if after > 0.7 * before {
            scale(&mut w, 1.0 / after);
            return Some(w);
        }
        before = after;
    }
    None
}

fn scale(x: &mut [Complex64], s: f64) {
    for v in x {
        *v *= s;
    }
}

/// Lowest `k` eigenpairs by restarted Lanczos with locking.
pub fn eigensolve_iterative(op: &SparseOperator, k: usize, opts: &LanczosOptions) -> Result<SpectrumResult> {
    check_hermitian(op)?;
    let n = op.dim();
    let k = k.min(n);
    let h_norm = op.norm_inf().max(f64::MIN_POSITIVE);
    let tol = opts.rel_tol * h_norm;
    let accept = RESIDUAL_TOL * h_norm;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<Complex64>> = Vec::new();
    let mut values: Vec<f64> = Vec::new();

    while locked.len() < k {
        let m = opts.max_basis.max(4).min(n - locked.len());
        let start: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let start =
            orthonormalize(start, &[&locked], 1e-8).ok_or(Error::NoConvergence { restarts: 0, residual: f64::NAN })?;

        let mut v: Vec<Vec<Complex64>> = Vec::new();
        let mut hv: Vec<Vec<Complex64>> = Vec::new();
        let mut next = Some(start);
        let mut restarts = 0usize;
        loop {
            // expand the basis
            while v.len() < m {
                let Some(x) = next.take() else { break };
                let hx = op.apply_with(&x, opts.exec)?;
                let w = hx.clone();
                v.push(x);
                hv.push(hx);
                next = orthonormalize(w, &[&locked, &v], 1e-10);
            }
            // Rayleigh-Ritz on span(v)
            let p = v.len();
            let a = DMatrix::from_fn(p, p, |i, j| dot(&v[i], &hv[j]));
            let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(a);
            let mut order: Vec<usize> = (0..p).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let combine = |basis: &[Vec<Complex64>], col: usize| -> Vec<Complex64> {
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                for (i, b) in basis.iter().enumerate() {
                    let c = eig.eigenvectors[(i, col)];
                    for (o, x) in out.iter_mut().zip(b) {
                        *o += c * x;
                    }
                }
                out
            };
            let theta = eig.eigenvalues[order[0]];
            let x = combine(&v, order[0]);
            let hx = combine(&hv, order[0]);
            let r: Vec<Complex64> = hx.iter().zip(&x).map(|(h, y)| h - y * theta).collect();
            let rn = norm(&r);
            let exhausted = next.is_none() && v.len() < m;
            if rn <= tol || (exhausted && rn <= accept) {
                let x = orthonormalize(x, &[&locked], 0.5).ok_or(Error::NoConvergence { restarts, residual: rn })?;
                locked.push(x);
                values.push(theta);
                break;
            }
            restarts += 1;
            if restarts > opts.max_restarts {
                return Err(Error::NoConvergence { restarts, residual: rn });
            }
            // thick restart: keep the lowest Ritz vectors and continue from the residual
            let keep = (m / 2).max(1).min(p);
            let nv: Vec<Vec<Complex64>> = order[..keep].iter().map(|&c| combine(&v, c)).collect();
            let nhv: Vec<Vec<Complex64>> = order[..keep].iter().map(|&c| combine(&hv, c)).collect();
            v = nv;
            hv = nhv;
            next = orthonormalize(r, &[&locked, &v], 1e-10);
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = values.into_iter().zip(locked).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let out = pairs
        .into_iter()
        .map(|(l, x)| {
            let r = residual(op, l, &x, opts.exec)?;
            if r > accept {
                return Err(Error::NoConvergence { restarts: opts.max_restarts, residual: r });
            }
            Ok((l, x, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult::new(Method::Iterative, n, out))
}

/// Number of eigenvalues within [`DEGENERACY_TOL`] of the minimum. Uses the
/// dense path up to [`DENSE_MAX_DIM`] and the iterative path beyond, widening
/// the search until the cluster is closed.
pub fn ground_degeneracy(op: &SparseOperator) -> Result<usize> {
    if op.dim() <= DENSE_MAX_DIM {
        return Ok(eigensolve_dense(op, usize::MAX)?.ground_degeneracy);
    }
    let mut k = 8;
    loop {
        let res = eigensolve_iterative(op, k, &LanczosOptions::default())?;
        if res.ground_degeneracy < res.eigenvalues.len() || k >= op.dim() {
            return Ok(res.ground_degeneracy);
        }
        k *= 2;
    }
}
