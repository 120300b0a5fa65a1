//! Vertex and plaquette matrix elements.
//!
//! Plaquette labels are given in the frame convention of
//! [`crate::lattice`]: external legs `a..f` point into the hexagon and the
//! internal sides `g..l` run counter-clockwise.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::sparse::{Basis, SparseOperator};
use crate::category::{Category, FusionRing, Label};
use crate::par::{self, Exec};

/// `Q_v` for a vertex whose three incoming labels are listed
/// counter-clockwise: `δ_{ij}^{k*}`.
pub fn qv_element(cat: &Category, i: Label, j: Label, k: Label) -> u8 {
    cat.ring().vertex_allowed(i, j, k) as u8
}

/// Branching rules at the six corners of a plaquette.
pub fn corners_valid(ring: &FusionRing, ext: &[Label; 6], int: &[Label; 6]) -> bool {
    let d = |x| ring.dual(x);
    let [a, b, c, dd, e, f] = *ext;
    let [g, h, i, j, k, l] = *int;
    ring.fuses(d(g), h, d(b))
        && ring.fuses(h, d(c), i)
        && ring.fuses(j, dd, i)
        && ring.fuses(d(k), j, e)
        && ring.fuses(f, d(k), d(l))
        && ring.fuses(d(a), d(g), d(l))
}

/// Coefficient `<g'h'i'j'k'l'| B_p^s |ghijkl>` for fixed legs `abcdef`.
///
/// Product of `sqrt(d_s d_{s*})`, the six-dimension ratio and eight F-symbols,
/// one pair for each corner fusion of the inserted `s` loop.
pub fn bp_s_element(cat: &Category, s: Label, ext: &[Label; 6], old: &[Label; 6], new: &[Label; 6]) -> Complex64 {
    let ring = cat.ring();
    let du = |x| ring.dual(x);
    let dim = |x| cat.d(x);
    let f = |i, j, k, l, m, n| cat.f(i, j, k, l, m, n);
    let v = Label::VACUUM;
    let [a, b, c, d, e, ff] = *ext;
    let [g, h, i, j, k, l] = *old;
    let [g2, h2, i2, j2, k2, l2] = *new;
    let ss = du(s);

    let factors = [
        f(du(g), du(g), ss, s, du(g2), v),
        f(du(b), du(g2), s, h, du(g), h2).conj(),
        f(i2, s, h, du(c), h2, i).conj(),
        f(i2, s, j, d, j2, i),
        f(j, ss, s, j, v, j2),
        f(e, du(k), ss, j2, du(k2), j).conj(),
        f(du(l2), du(a), du(g), ss, du(l), du(g2)),
        f(du(l2), ff, du(k), ss, du(l), du(k2)).conj(),
    ];
    let mut prod = Complex64::new(1.0, 0.0);
    for x in factors {
        if x.re == 0.0 && x.im == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        prod *= x;
    }
    let num = dim(du(g)) * dim(h) * dim(i2) * dim(j) * dim(du(k)) * dim(du(l2));
    let den = dim(du(g2)) * dim(h2) * dim(i) * dim(j2) * dim(du(k2)) * dim(du(l));
    prod * (dim(s) * dim(ss)).sqrt() * (num / den).sqrt()
}

/// Encodes six labels with `g` (or `a`) most significant.
pub fn encode6(n: usize, x: &[Label; 6]) -> usize {
    x.iter().fold(0, |acc, l| acc * n + l.idx())
}

pub fn decode6(n: usize, mut code: usize) -> [Label; 6] {
    let mut out = [Label::VACUUM; 6];
    for slot in out.iter_mut().rev() {
        *slot = Label((code % n) as u8);
        code /= n;
    }
    out
}

/// Internal configurations obeying the branching rules with legs `ext`,
/// in increasing code order.
pub fn valid_internal_configs(ring: &FusionRing, ext: &[Label; 6]) -> Vec<[Label; 6]> {
    let n = ring.num_labels();
    (0..n.pow(6)).map(|code| decode6(n, code)).filter(|int| corners_valid(ring, ext, int)).collect()
}

/// Nonzero entries of `B_p = sum_s (d_s / D^2) B_p^s` on one block of fixed
/// external legs, stored per column.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaquetteBlock {
    pub ext: [Label; 6],
    /// Branching-valid internal configurations (the block's support).
    pub configs: Vec<[Label; 6]>,
    /// `columns[x]` lists `(row, value)` with rows and columns indexing `configs`.
    pub columns: Vec<Vec<(usize, Complex64)>>,
}

impl PlaquetteBlock {
    /// Dense matrix on the support.
    pub fn dense(&self) -> nalgebra::DMatrix<Complex64> {
        let m = self.configs.len();
        let mut out = nalgebra::DMatrix::zeros(m, m);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out[(r, c)] = v;
            }
        }
        out
    }

    /// Column lookup keyed by the internal-configuration code.
    pub fn code_index(&self, n: usize) -> BTreeMap<usize, usize> {
        self.configs.iter().enumerate().map(|(x, c)| (encode6(n, c), x)).collect()
    }
}

/// Which loop labels contribute to a block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LoopSum {
    /// `B_p = sum_s a_s B_p^s`.
    Weighted,
    /// A single `B_p^s`, unweighted.
    Single(Label),
}

/// Builds one block of `B_p` (or of `B_p^s`) on its branching-valid support.
pub fn plaquette_block(cat: &Category, ext: &[Label; 6], sum: LoopSum) -> PlaquetteBlock {
    plaquette_block_with(cat, ext, sum, bp_s_element)
}

/// Same as [`plaquette_block`] with a custom element function, used to build
/// blocks from alternative closed forms.
pub fn plaquette_block_with<F>(cat: &Category, ext: &[Label; 6], sum: LoopSum, element: F) -> PlaquetteBlock
where
    F: Fn(&Category, Label, &[Label; 6], &[Label; 6], &[Label; 6]) -> Complex64,
{
    let configs = valid_internal_configs(cat.ring(), ext);
    let loops: Vec<(Label, f64)> = match sum {
        LoopSum::Weighted => cat.labels().map(|s| (s, cat.dims().loop_weight(s))).collect(),
        LoopSum::Single(s) => vec![(s, 1.0)],
    };
    let columns = configs
        .iter()
        .map(|old| {
            let mut col = Vec::new();
            for (r, new) in configs.iter().enumerate() {
                let v: Complex64 = loops.iter().map(|&(s, w)| element(cat, s, ext, old, new) * w).sum();
                if v.norm() >= crate::DROP_TOL {
                    col.push((r, v));
                }
            }
            col
        })
        .collect();
    PlaquetteBlock { ext: *ext, configs, columns }
}

/// `B_p` on one block as an operator over all `(N+1)^6` internal
/// configurations (`g` most significant).
pub fn bp_block(cat: &Category, ext: &[Label; 6]) -> SparseOperator {
    block_operator(cat, &plaquette_block(cat, ext, LoopSum::Weighted))
}

/// `B_p^s` on one block, same indexing as [`bp_block`].
pub fn bp_s_block(cat: &Category, s: Label, ext: &[Label; 6]) -> SparseOperator {
    block_operator(cat, &plaquette_block(cat, ext, LoopSum::Single(s)))
}

fn block_operator(cat: &Category, block: &PlaquetteBlock) -> SparseOperator {
    let n = cat.num_labels();
    let codes: Vec<usize> = block.configs.iter().map(|c| encode6(n, c)).collect();
    let t = block
        .columns
        .iter()
        .enumerate()
        .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
        .map(|(r, c, v)| (codes[r], codes[c], v))
        .collect();
    let basis = Basis::full(n, 6, u128::MAX).expect("six edges fit");
    SparseOperator::from_triplets(n.pow(6), t).expect("codes in range").with_basis(std::sync::Arc::new(basis))
}

/// Every external-leg tuple, in code order.
pub fn all_external_tuples(n: usize) -> Vec<[Label; 6]> {
    (0..n.pow(6)).map(|c| decode6(n, c)).collect()
}

/// Blocks for many leg tuples, computed with the given execution strategy.
pub fn plaquette_blocks(cat: &Category, exts: &[[Label; 6]], sum: LoopSum, exec: Exec) -> Vec<PlaquetteBlock> {
    par::map(exec, exts, |ext| plaquette_block(cat, ext, sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins;

    #[test]
    fn vertex_element_examples() {
        let fib = builtins::fibonacci();
        let (v, t) = (Label(0), Label(1));
        assert_eq!(qv_element(&fib, v, v, v), 1);
        assert_eq!(qv_element(&fib, t, t, t), 1);
        assert_eq!(qv_element(&fib, t, v, v), 0);
        let h3 = builtins::h3();
        // rho ⊗ alpha = alpha* rho, so k* must be alpha* rho; alpha* rho is self-dual
        for k in h3.labels() {
            assert_eq!(qv_element(&h3, Label(3), Label(1), k), (k == Label(5)) as u8);
        }
    }

    #[test]
    fn vacuum_loop_is_identity_on_valid_configs() {
        for cat in builtins::with_f_data() {
            let n = cat.num_labels();
            for ext in all_external_tuples(n).into_iter().step_by(7) {
                for code in 0..n.pow(6) {
                    let int = decode6(n, code);
                    let valid = corners_valid(cat.ring(), &ext, &int);
                    let diag = bp_s_element(&cat, Label(0), &ext, &int, &int);
                    assert!((diag - if valid { 1.0 } else { 0.0 }).norm() < 1e-12, "{}", cat.name());
                }
            }
        }
    }

    #[test]
    fn toric_loop_flips_every_side() {
        let tc = builtins::toric_code();
        let ext = [Label(0); 6];
        let zero = [Label(0); 6];
        let one = [Label(1); 6];
        assert!((bp_s_element(&tc, Label(1), &ext, &zero, &one) - 1.0).norm() < 1e-15);
        assert_eq!(bp_s_element(&tc, Label(1), &ext, &zero, &zero), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn toric_vacuum_block_spectrum() {
        let tc = builtins::toric_code();
        let block = plaquette_block(&tc, &[Label(0); 6], LoopSum::Weighted);
        assert_eq!(block.configs.len(), 2);
        let m = block.dense();
        for x in m.iter() {
            assert!((x - 0.5).norm() < 1e-15);
        }
        let op = bp_block(&tc, &[Label(0); 6]);
        assert_eq!(op.dim(), 64);
        assert_eq!(op.nnz(), 4);
    }
}
