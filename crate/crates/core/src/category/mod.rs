//! Multiplicity-free unitary fusion categories: labels, fusion ring, quantum
//! dimensions and F-symbols.
//!
//! F-symbols follow the splitting-tree convention
//!
//! ```text
//!   (F_i^{jkl})_{mn} :  ((j k)->m, l)->i   ==>   (j, (k l)->n)->i
//! ```
//!
//! and are stored sparsely, keyed by `[i, j, k, l, m, n]`. Entries whose key is
//! not admissible on both trees are absent and read as zero.

pub mod builtins;
pub mod io;
pub mod symbols;
pub mod validate;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple object (string type). Index 0 is the vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub u8);

impl Label {
    pub const VACUUM: Label = Label(0);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_vacuum(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Key `[i, j, k, l, m, n]` of `(F_i^{jkl})_{mn}`.
pub type FKey = [Label; 6];

pub(crate) fn key_indices(key: &FKey) -> Vec<usize> {
    key.iter().map(|l| l.idx()).collect()
}

/// Fusion rules `delta_ij^k` together with the duality involution.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRing {
    num_labels: usize,
    dual: Vec<Label>,
    fusion: Vec<bool>,
}

impl FusionRing {
    /// Builds a ring from the dual map and the admissible triples `i ⊗ j -> k`.
    ///
    /// Only structural properties are checked here (range, involutive dual);
    /// algebraic axioms are left to [`validate::validate_ring`].
    pub fn new(dual: Vec<Label>, triples: impl IntoIterator<Item = [Label; 3]>) -> Result<Self> {
        let n = dual.len();
        if n == 0 {
            return Err(Error::Structure("a fusion ring needs at least the vacuum".into()));
        }
        if n > u8::MAX as usize {
            return Err(Error::Structure(format!("{n} labels exceed the supported maximum of 255")));
        }
        for (i, d) in dual.iter().enumerate() {
            if d.idx() >= n {
                return Err(Error::Structure(format!("dual({i}) = {d} is out of range")));
            }
        }
        if !dual[0].is_vacuum() {
            return Err(Error::Structure(format!("dual(0) = {} must be the vacuum", dual[0])));
        }
        for (i, d) in dual.iter().enumerate() {
            if dual[d.idx()].idx() != i {
                return Err(Error::Structure(format!(
                    "dual is not an involution: dual({i}) = {d} but dual({d}) = {}",
                    dual[d.idx()]
                )));
            }
        }
        let mut fusion = vec![false; n * n * n];
        for [i, j, k] in triples {
            for x in [i, j, k] {
                if x.idx() >= n {
                    return Err(Error::Structure(format!(
                        "fusion triple [{i}, {j}, {k}] references label {x} outside 0..{n}"
                    )));
                }
            }
            fusion[(i.idx() * n + j.idx()) * n + k.idx()] = true;
        }
        Ok(Self { num_labels: n, dual, fusion })
    }

    /// Ring of the abelian group Z_n with `a* = -a`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let dual = (0..n).map(|a| Label(((n - a) % n) as u8)).collect();
        let triples =
            (0..n).flat_map(|a| (0..n).map(move |b| [Label(a as u8), Label(b as u8), Label(((a + b) % n) as u8)]));
        Self::new(dual, triples)
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        (0..self.num_labels as u8).map(Label)
    }

    #[inline]
    pub fn dual(&self, l: Label) -> Label {
        self.dual[l.idx()]
    }

    /// `delta_ij^k`: whether `i ⊗ j -> k` is an allowed fusion.
    #[inline]
    pub fn fuses(&self, i: Label, j: Label, k: Label) -> bool {
        let n = self.num_labels;
        self.fusion[(i.idx() * n + j.idx()) * n + k.idx()]
    }

    #[inline]
    pub fn n(&self, i: Label, j: Label, k: Label) -> u32 {
        self.fuses(i, j, k) as u32
    }

    /// All `k` with `i ⊗ j -> k`.
    pub fn products(&self, i: Label, j: Label) -> impl Iterator<Item = Label> + '_ {
        self.labels().filter(move |&k| self.fuses(i, j, k))
    }

    /// Branching rule for a vertex whose three edges all point inwards and are
    /// listed counter-clockwise: `delta_{x1 x2}^{x3*}`.
    #[inline]
    pub fn vertex_allowed(&self, x1: Label, x2: Label, x3: Label) -> bool {
        self.fuses(x1, x2, self.dual(x3))
    }

    /// All admissible triples `[i, j, k]` in lexicographic order.
    pub fn triples(&self) -> Vec<[Label; 3]> {
        let mut out = Vec::new();
        for i in self.labels() {
            for j in self.labels() {
                for k in self.labels() {
                    if self.fuses(i, j, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Both fusion trees of `(F_i^{jkl})_{mn}` exist.
    #[inline]
    pub fn f_admissible(&self, key: &FKey) -> bool {
        let [i, j, k, l, m, n] = *key;
        self.fuses(j, k, m) && self.fuses(m, l, i) && self.fuses(k, l, n) && self.fuses(j, n, i)
    }

    /// Intermediate labels of the left tree `((j k)->m, l)->i`.
    pub fn left_channels(&self, i: Label, j: Label, k: Label, l: Label) -> Vec<Label> {
        self.labels().filter(|&m| self.fuses(j, k, m) && self.fuses(m, l, i)).collect()
    }

    /// Intermediate labels of the right tree `(j, (k l)->n)->i`.
    pub fn right_channels(&self, i: Label, j: Label, k: Label, l: Label) -> Vec<Label> {
        self.labels().filter(|&n| self.fuses(k, l, n) && self.fuses(j, n, i)).collect()
    }

    /// Every admissible F-key in lexicographic order.
    pub fn admissible_keys(&self) -> Vec<FKey> {
        let mut out = Vec::new();
        for i in self.labels() {
            for j in self.labels() {
                for k in self.labels() {
                    for l in self.labels() {
                        let ms = self.left_channels(i, j, k, l);
                        if ms.is_empty() {
                            continue;
                        }
                        let ns = self.right_channels(i, j, k, l);
                        for &m in &ms {
                            for &n in &ns {
                                out.push([i, j, k, l, m, n]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Quantum dimensions `d_i` and the total dimension `D = sqrt(sum d_i^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumDims {
    d: Vec<f64>,
    total: f64,
}

impl QuantumDims {
    pub fn new(d: Vec<f64>) -> Self {
        let total = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self { d, total }
    }

    #[inline]
    pub fn d(&self, l: Label) -> f64 {
        self.d[l.idx()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    /// Total quantum dimension `D`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Loop weight `a_s = d_s / D^2` used in the plaquette projector.
    pub fn loop_weight(&self, s: Label) -> f64 {
        self.d(s) / (self.total * self.total)
    }
}

/// Sparse F-symbol table. A dense lookup is kept alongside the canonical map
/// when `(N+1)^6` is small, which is the hot path of plaquette assembly.
#[derive(Clone, Debug, Default)]
pub struct FSymbolTable {
    entries: BTreeMap<FKey, Complex64>,
    n: usize,
    dense: Option<Vec<Complex64>>,
}

const DENSE_LOOKUP_MAX: usize = 1 << 22;

impl FSymbolTable {
    pub fn new(num_labels: usize, entries: BTreeMap<FKey, Complex64>) -> Self {
        let mut table = Self { entries, n: num_labels, dense: None };
        table.rebuild_lookup();
        table
    }

    fn rebuild_lookup(&mut self) {
        let size = self.n.checked_pow(6).unwrap_or(usize::MAX);
        if size <= DENSE_LOOKUP_MAX {
            let mut dense = vec![Complex64::new(0.0, 0.0); size];
            for (key, v) in &self.entries {
                dense[self.flat(key)] = *v;
            }
            self.dense = Some(dense);
        } else {
            self.dense = None;
        }
    }

    #[inline]
    fn flat(&self, key: &FKey) -> usize {
        key.iter().fold(0, |acc, l| acc * self.n + l.idx())
    }

    #[inline]
    pub fn get(&self, key: &FKey) -> Complex64 {
        match &self.dense {
            Some(d) => d[self.flat(key)],
            None => self.entries.get(key).copied().unwrap_or_default(),
        }
    }

    pub fn contains(&self, key: &FKey) -> bool {
        self.entries.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FKey, &Complex64)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &BTreeMap<FKey, Complex64> {
        &self.entries
    }

    pub fn num_labels(&self) -> usize {
        self.n
    }
}

impl PartialEq for FSymbolTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

/// A fusion ring with quantum dimensions and F-symbols; the single source of
/// every coefficient used by the Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct Category {
    name: String,
    label_names: Vec<String>,
    ring: FusionRing,
    dims: QuantumDims,
    f: FSymbolTable,
}

impl Category {
    /// Assembles a category after structural checks: sizes agree, every
    /// F-key lies on admissible trees. Numerical axioms are not checked.
    pub fn new(
        name: impl Into<String>,
        label_names: Vec<String>,
        ring: FusionRing,
        dims: QuantumDims,
        f: FSymbolTable,
    ) -> Result<Self> {
        let n = ring.num_labels();
        if label_names.len() != n {
            return Err(Error::Structure(format!("{} label names for {n} labels", label_names.len())));
        }
        if dims.as_slice().len() != n {
            return Err(Error::Structure(format!("{} quantum dimensions for {n} labels", dims.as_slice().len())));
        }
        if f.num_labels() != n {
            return Err(Error::Structure("F table built for a different label count".into()));
        }
        for key in f.entries().keys() {
            if key.iter().any(|l| l.idx() >= n) {
                return Err(Error::Structure(format!("F key {key:?} has a label out of range")));
            }
            if !ring.f_admissible(key) {
                let k = key_indices(key);
                return Err(Error::Structure(format!("F key {k:?} lies on an inadmissible tree")));
            }
        }
        Ok(Self { name: name.into(), label_names, ring, dims, f })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.label_names[l.idx()]
    }

    /// Resolves a label given either by name or by index.
    pub fn parse_label(&self, s: &str) -> Result<Label> {
        let s = s.trim();
        if let Some(pos) = self.label_names.iter().position(|n| n == s) {
            return Ok(Label(pos as u8));
        }
        match s.parse::<usize>() {
            Ok(i) if i < self.num_labels() => Ok(Label(i as u8)),
            Ok(i) => Err(Error::OutOfRange { what: "label", index: i, len: self.num_labels() }),
            Err(_) => Err(Error::Parse(format!("unknown label `{s}`"))),
        }
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn dims(&self) -> &QuantumDims {
        &self.dims
    }

    pub fn fsymbols(&self) -> &FSymbolTable {
        &self.f
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.ring.num_labels()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        self.ring.labels()
    }

    #[inline]
    pub fn dual(&self, l: Label) -> Label {
        self.ring.dual(l)
    }

    #[inline]
    pub fn d(&self, l: Label) -> f64 {
        self.dims.d(l)
    }

    /// `(F_i^{jkl})_{mn}`, zero when the key is not stored.
    #[inline]
    pub fn f(&self, i: Label, j: Label, k: Label, l: Label, m: Label, n: Label) -> Complex64 {
        self.f.get(&[i, j, k, l, m, n])
    }

    /// Whether the file carried F-symbols (ring-only categories do not).
    pub fn has_f_data(&self) -> bool {
        !self.f.is_empty()
    }

    /// Replaces the F table, keeping ring and dimensions.
    pub fn with_fsymbols(&self, entries: BTreeMap<FKey, Complex64>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.label_names.clone(),
            self.ring.clone(),
            self.dims.clone(),
            FSymbolTable::new(self.num_labels(), entries),
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_ring_duals() {
        let r = FusionRing::cyclic(3).unwrap();
        assert_eq!(r.dual(Label(1)), Label(2));
        assert_eq!(r.dual(Label(0)), Label(0));
        assert!(r.fuses(Label(1), Label(2), Label(0)));
        assert!(!r.fuses(Label(1), Label(1), Label(0)));
    }

    #[test]
    fn non_involutive_dual_is_rejected() {
        let err = FusionRing::new(vec![Label(0), Label(2), Label(0)], []).unwrap_err();
        assert!(matches!(err, Error::Structure(_)), "{err}");
    }

    #[test]
    fn dual_of_vacuum_must_be_vacuum() {
        let err = FusionRing::new(vec![Label(1), Label(0)], []).unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }

    #[test]
    fn inadmissible_f_key_is_rejected() {
        let ring = FusionRing::cyclic(2).unwrap();
        let mut e = BTreeMap::new();
        // 1 ⊗ 1 -> 1 is not a Z2 fusion
        e.insert([Label(1), Label(1), Label(1), Label(1), Label(1), Label(1)], Complex64::new(1.0, 0.0));
        let err = Category::new(
            "bad",
            vec!["0".into(), "1".into()],
            ring,
            QuantumDims::new(vec![1.0, 1.0]),
            FSymbolTable::new(2, e),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }

    #[test]
    fn absent_entries_read_zero() {
        let t = FSymbolTable::new(2, BTreeMap::new());
        assert_eq!(t.get(&[Label(0); 6]), Complex64::new(0.0, 0.0));
    }
}
