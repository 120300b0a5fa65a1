//! Operators on the configuration space of a whole patch and assembly of
//! `H = -sum_v Q_v - sum_p B_p`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use super::plaquette::{encode6, plaquette_block, LoopSum, PlaquetteBlock};
use super::sparse::{Basis, SparseOperator};
use crate::category::{Category, Label};
use crate::error::{Error, Result};
use crate::lattice::{HoneycombPatch, PlaquetteFrame, VertexFrame};
use crate::par::{self, Exec};

/// Default cap on the number of basis states.
pub const DEFAULT_DIM_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// Every edge configuration.
    All,
    /// Only configurations obeying the branching rules at every vertex.
    BranchingValid,
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "full" => Ok(Sector::All),
            "branching-valid" | "valid" => Ok(Sector::BranchingValid),
            _ => Err(Error::Parse(format!("unknown sector `{s}` (expected all or branching-valid)"))),
        }
    }
}

/// Treatment of dangling edges on open patches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DanglingPolicy {
    /// Dangling edges are dynamical and take every label.
    Free,
    /// Every dangling edge carries the vacuum.
    Vacuum,
    /// Fixed labels, one per dangling edge in increasing edge order.
    Labels(Vec<Label>),
}

#[derive(Clone, Debug)]
pub struct AssembleOptions {
    pub sector: Sector,
    pub dangling: DanglingPolicy,
    pub cap: u128,
    pub exec: Exec,
}

impl AssembleOptions {
    pub fn new(sector: Sector, dangling: DanglingPolicy) -> Self {
        Self { sector, dangling, cap: DEFAULT_DIM_CAP, exec: Exec::default() }
    }
}

/// Lattice label of every edge read off a configuration code.
fn labels_of(basis: &Basis, code: u64) -> Vec<Label> {
    basis.decode(code)
}

/// Labels of a vertex's edges as seen pointing into the vertex.
pub fn incoming_labels(cat: &Category, v: &VertexFrame, labels: &[Label]) -> [Label; 3] {
    std::array::from_fn(|s| {
        let x = labels[v.edges[s]];
        if v.incoming[s] {
            x
        } else {
            cat.dual(x)
        }
    })
}

fn vertex_ok(cat: &Category, v: &VertexFrame, labels: &[Label]) -> bool {
    let [x, y, z] = incoming_labels(cat, v, labels);
    cat.ring().vertex_allowed(x, y, z)
}

/// Frame labels `(abcdef, ghijkl)` of a plaquette.
pub fn frame_labels(cat: &Category, frame: &PlaquetteFrame, labels: &[Label]) -> ([Label; 6], [Label; 6]) {
    let read = |e: usize, flip: bool| if flip { cat.dual(labels[e]) } else { labels[e] };
    (
        std::array::from_fn(|s| read(frame.external[s], frame.external_flip[s])),
        std::array::from_fn(|s| read(frame.internal[s], frame.internal_flip[s])),
    )
}

/// Enumerates the configuration basis of a patch.
pub fn build_basis(
    cat: &Category,
    patch: &HoneycombPatch,
    sector: Sector,
    dangling: &DanglingPolicy,
    cap: u128,
) -> Result<Basis> {
    let n = cat.num_labels();
    let ne = patch.num_edges();
    if ne == 0 {
        return Err(Error::Lattice("patch has no edges".into()));
    }
    if (n as f64).powi(ne as i32) >= u64::MAX as f64 {
        return Err(Error::DimensionCap { dim: u128::MAX, cap });
    }
    let all: Vec<Label> = cat.labels().collect();
    let mut choices: Vec<Vec<Label>> = vec![all.clone(); ne];
    let dangling_edges = patch.dangling_edges();
    match dangling {
        DanglingPolicy::Free => {}
        DanglingPolicy::Vacuum => {
            for &e in &dangling_edges {
                choices[e] = vec![Label::VACUUM];
            }
        }
        DanglingPolicy::Labels(ls) => {
            if ls.len() != dangling_edges.len() {
                return Err(Error::DimensionMismatch { expected: dangling_edges.len(), found: ls.len() });
            }
            for (&e, &l) in dangling_edges.iter().zip(ls) {
                if l.idx() >= n {
                    return Err(Error::OutOfRange { what: "label", index: l.idx(), len: n });
                }
                choices[e] = vec![l];
            }
        }
    }
    let weights: Vec<u64> = (0..ne).map(|e| (n as u64).pow((ne - 1 - e) as u32)).collect();

    match sector {
        Sector::All => {
            let dim = choices.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128));
            let dim = dim.unwrap_or(u128::MAX);
            if dim > cap {
                return Err(Error::DimensionCap { dim, cap });
            }
            let mut codes = vec![0u64];
            for e in 0..ne {
                let w = weights[e];
                codes = codes.into_iter().flat_map(|c| choices[e].iter().map(move |l| c + l.0 as u64 * w)).collect();
            }
            Ok(Basis::from_codes(n, ne, codes))
        }
        Sector::BranchingValid => {
            // vertices checked as soon as their last edge is assigned
            let mut closes: Vec<Vec<usize>> = vec![Vec::new(); ne];
            for (vi, v) in patch.vertices.iter().enumerate() {
                closes[*v.edges.iter().max().unwrap()].push(vi);
            }
            let mut codes = Vec::new();
            let mut labels = vec![Label::VACUUM; ne];
            let mut count: u128 = 0;
            dfs(cat, patch, &choices, &closes, &weights, 0, 0, &mut labels, &mut codes, &mut count, cap)?;
            Ok(Basis::from_codes(n, ne, codes))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    cat: &Category,
    patch: &HoneycombPatch,
    choices: &[Vec<Label>],
    closes: &[Vec<usize>],
    weights: &[u64],
    e: usize,
    code: u64,
    labels: &mut Vec<Label>,
    out: &mut Vec<u64>,
    count: &mut u128,
    cap: u128,
) -> Result<()> {
    if e == choices.len() {
        *count += 1;
        if *count > cap {
            return Err(Error::DimensionCap { dim: *count, cap });
        }
        out.push(code);
        return Ok(());
    }
    for &l in &choices[e] {
        labels[e] = l;
        if closes[e].iter().all(|&v| vertex_ok(cat, &patch.vertices[v], labels)) {
            dfs(cat, patch, choices, closes, weights, e + 1, code + l.0 as u64 * weights[e], labels, out, count, cap)?;
        }
    }
    Ok(())
}

/// Diagonal `Q_v` on a basis.
pub fn vertex_operator(cat: &Category, patch: &HoneycombPatch, basis: &Arc<Basis>, v: usize) -> Result<SparseOperator> {
    let frame = patch.vertex_frame(v)?;
    let t = (0..basis.dim())
        .filter(|&x| vertex_ok(cat, frame, &labels_of(basis, basis.code(x))))
        .map(|x| (x, x, Complex64::new(1.0, 0.0)))
        .collect();
    Ok(SparseOperator::from_triplets(basis.dim(), t)?.with_basis(basis.clone()))
}

fn require_f(cat: &Category) -> Result<()> {
    if cat.has_f_data() {
        Ok(())
    } else {
        Err(Error::Structure(format!("{} has no F-symbols; plaquette operators need them", cat.name())))
    }
}

/// Block cache for one plaquette: per external tuple, the block and a
/// code-to-column lookup.
struct FrameBlocks {
    blocks: BTreeMap<[Label; 6], (PlaquetteBlock, BTreeMap<usize, usize>)>,
}

fn frame_blocks(cat: &Category, frame: &PlaquetteFrame, basis: &Basis, sum: LoopSum, exec: Exec) -> FrameBlocks {
    let exts: BTreeSet<[Label; 6]> =
        basis.codes().iter().map(|&c| frame_labels(cat, frame, &labels_of(basis, c)).0).collect();
    let exts: Vec<[Label; 6]> = exts.into_iter().collect();
    let n = cat.num_labels();
    let built = par::map(exec, &exts, |ext| {
        let b = plaquette_block(cat, ext, sum);
        let idx = b.code_index(n);
        (b, idx)
    });
    FrameBlocks { blocks: exts.into_iter().zip(built).collect() }
}

/// Entries `(row, value)` of column `x` of a plaquette operator.
fn plaquette_column(
    cat: &Category,
    frame: &PlaquetteFrame,
    basis: &Basis,
    blocks: &FrameBlocks,
    x: usize,
) -> Result<Vec<(usize, Complex64)>> {
    let n = cat.num_labels();
    let code = basis.code(x);
    let labels = labels_of(basis, code);
    let (ext, int) = frame_labels(cat, frame, &labels);
    let (block, index) = &blocks.blocks[&ext];
    let Some(&col) = index.get(&encode6(n, &int)) else {
        return Ok(Vec::new());
    };
    let base: u64 = code - frame.internal.iter().map(|&e| labels[e].0 as u64 * basis.weight(e)).sum::<u64>();
    let mut out = Vec::with_capacity(block.columns[col].len());
    for &(r, v) in &block.columns[col] {
        let new = &block.configs[r];
        let mut c = base;
        for ((&x, &flip), &e) in new.iter().zip(&frame.internal_flip).zip(&frame.internal) {
            let lattice = if flip { cat.dual(x) } else { x };
            c += lattice.0 as u64 * basis.weight(e);
        }
        let row = basis
            .index_of(c)
            .ok_or_else(|| Error::Structure("plaquette operator leaves the configuration basis".into()))?;
        out.push((row, v));
    }
    Ok(out)
}

/// `B_p` (or a single `B_p^s`) acting on the whole patch through `frame`.
pub fn plaquette_operator_for_frame(
    cat: &Category,
    basis: &Arc<Basis>,
    frame: &PlaquetteFrame,
    sum: LoopSum,
    exec: Exec,
) -> Result<SparseOperator> {
    require_f(cat)?;
    let blocks = frame_blocks(cat, frame, basis, sum, exec);
    let cols = par::map_range(exec, basis.dim(), |x| plaquette_column(cat, frame, basis, &blocks, x));
    let mut t = Vec::new();
    for (x, col) in cols.into_iter().enumerate() {
        t.extend(col?.into_iter().map(|(r, v)| (r, x, v)));
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t)?.with_basis(basis.clone()))
}

pub fn plaquette_operator(
    cat: &Category,
    patch: &HoneycombPatch,
    basis: &Arc<Basis>,
    p: usize,
    exec: Exec,
) -> Result<SparseOperator> {
    plaquette_operator_for_frame(cat, basis, patch.plaquette_frame(p)?, LoopSum::Weighted, exec)
}

/// The assembled Hamiltonian together with its basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub basis: Arc<Basis>,
    pub op: SparseOperator,
}

/// `H = -sum_v Q_v - sum_p B_p` on the chosen sector of a patch.
pub fn assemble_hamiltonian(cat: &Category, patch: &HoneycombPatch, opts: &AssembleOptions) -> Result<Hamiltonian> {
    require_f(cat)?;
    if patch.num_plaquettes() == 0 {
        return Err(Error::Lattice("patch has no plaquettes".into()));
    }
    let basis = Arc::new(build_basis(cat, patch, opts.sector, &opts.dangling, opts.cap)?);
    assemble_on_basis(cat, patch, basis, &patch.plaquettes, opts.exec)
}

/// Assembles on a given basis using the supplied plaquette frames (which
/// may be re-anchored versions of the patch's own frames).
pub fn assemble_on_basis(
    cat: &Category,
    patch: &HoneycombPatch,
    basis: Arc<Basis>,
    frames: &[PlaquetteFrame],
    exec: Exec,
) -> Result<Hamiltonian> {
    let blocks: Vec<FrameBlocks> =
        frames.iter().map(|f| frame_blocks(cat, f, &basis, LoopSum::Weighted, exec)).collect();
    let cols = par::map_range(exec, basis.dim(), |x| -> Result<Vec<(usize, Complex64)>> {
        let labels = labels_of(&basis, basis.code(x));
        let satisfied = patch.vertices.iter().filter(|v| vertex_ok(cat, v, &labels)).count();
        let mut col = vec![(x, Complex64::new(-(satisfied as f64), 0.0))];
        for (f, b) in frames.iter().zip(&blocks) {
            col.extend(plaquette_column(cat, f, &basis, b, x)?.into_iter().map(|(r, v)| (r, -v)));
        }
        Ok(col)
    });
    let mut t = Vec::new();
    for (x, col) in cols.into_iter().enumerate() {
        t.extend(col?.into_iter().map(|(r, v)| (r, x, v)));
    }
    let op = SparseOperator::from_triplets(basis.dim(), t)?.with_basis(basis.clone());
    Ok(Hamiltonian { basis, op })
}
