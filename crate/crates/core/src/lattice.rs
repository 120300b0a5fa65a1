//! Honeycomb patches in a sheared brick-wall embedding.
//!
//! Hexagons are pointy-top and addressed by `(r, c)`; row `r` sits below row
//! `r - 1` and is shifted half a hexagon to the right. Every hexagon owns three
//! edges: its right vertical side `I`, its lower-right side `J` and its
//! lower-left side `K`. All edges point upward (from the lower to the upper
//! endpoint); a string traversing an edge downward carries the dual label.
//!
//! A plaquette frame names the hexagon corners counter-clockwise from the
//! top: `B` (top), `A` (upper-left), `F`, `E` (bottom), `D`, `C`
//! (upper-right). Internal slots run counter-clockwise
//! `g: B->A, h: C->B, i: D->C, j: E->D, k: F->E, l: A->F` and external legs
//! `a..f` attach at `A..F`, pointing into the hexagon.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Boundary {
    Open,
    Torus,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "torus" | "periodic" => Ok(Boundary::Torus),
            _ => Err(Error::Parse(format!("unknown boundary `{s}` (expected open or torus)"))),
        }
    }
}

/// Top (`Up`) or bottom (`Down`) corner of a hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexKind {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeKind {
    I,
    J,
    K,
}

type Cell = (i64, i64);
type VKey = (VertexKind, i64, i64);
type EKey = (EdgeKind, i64, i64);

/// `(lower, upper)` endpoints of an edge.
fn endpoints((kind, r, c): EKey) -> (VKey, VKey) {
    use VertexKind::*;
    match kind {
        EdgeKind::I => ((Up, r + 1, c), (Down, r - 1, c + 1)),
        EdgeKind::J => ((Down, r, c), (Up, r + 1, c)),
        EdgeKind::K => ((Down, r, c), (Up, r + 1, c - 1)),
    }
}

/// Incident edges in counter-clockwise order with their incoming flags.
fn vertex_edges((kind, r, c): VKey) -> [(EKey, bool); 3] {
    match kind {
        VertexKind::Up => {
            [((EdgeKind::I, r - 1, c), false), ((EdgeKind::J, r - 1, c), true), ((EdgeKind::K, r - 1, c + 1), true)]
        }
        VertexKind::Down => {
            [((EdgeKind::J, r, c), false), ((EdgeKind::K, r, c), false), ((EdgeKind::I, r + 1, c - 1), true)]
        }
    }
}

/// Corners `[A, B, C, D, E, F]` of hexagon `(r, c)`.
fn hex_vertices((r, c): Cell) -> [VKey; 6] {
    use VertexKind::*;
    [(Down, r - 1, c), (Up, r, c), (Down, r - 1, c + 1), (Up, r + 1, c), (Down, r, c), (Up, r + 1, c - 1)]
}

/// `(external [a..f], internal [g..l])` of hexagon `(r, c)`.
fn hex_frame((r, c): Cell) -> ([EKey; 6], [EKey; 6]) {
    use EdgeKind::*;
    (
        [(K, r - 1, c), (I, r - 1, c), (J, r - 1, c + 1), (K, r, c + 1), (I, r + 1, c - 1), (J, r, c - 1)],
        [(J, r - 1, c), (K, r - 1, c + 1), (I, r, c), (J, r, c), (K, r, c), (I, r, c - 1)],
    )
}

/// Whether the frame direction of each slot runs against the edge orientation.
pub const EXTERNAL_FLIP: [bool; 6] = [true, true, true, false, false, false];
pub const INTERNAL_FLIP: [bool; 6] = [true, false, false, false, true, true];

/// Twice the doubled-coordinate position `(x, y)` with `x` in units of
/// `sqrt(3)/2` and `y` in units of `1/2`.
fn vertex_pos((kind, r, c): VKey) -> (i64, i64) {
    let x = 2 * c + r;
    let y = -3 * r + if kind == VertexKind::Up { 2 } else { -2 };
    (2 * x, 2 * y)
}

fn edge_pos(e: EKey) -> (i64, i64) {
    let (a, b) = endpoints(e);
    let (pa, pb) = (vertex_pos(a), vertex_pos(b));
    ((pa.0 + pb.0) / 2, (pa.1 + pb.1) / 2)
}

/// Row-major order: top to bottom, then left to right.
fn row_major((x, y): (i64, i64)) -> (i64, i64) {
    (-y, x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    /// Vertex at the lower end, `None` for a dangling end.
    pub tail: Option<usize>,
    /// Vertex at the upper end, `None` for a dangling end.
    pub head: Option<usize>,
}

impl Edge {
    pub fn is_dangling(&self) -> bool {
        self.tail.is_none() || self.head.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexFrame {
    pub kind: VertexKind,
    /// Incident edges, counter-clockwise.
    pub edges: [usize; 3],
    /// Whether each edge points into the vertex.
    pub incoming: [bool; 3],
}

impl VertexFrame {
    pub fn slot_of(&self, edge: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == edge)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaquetteFrame {
    /// Legs `a..f`.
    pub external: [usize; 6],
    /// Sides `g..l`.
    pub internal: [usize; 6],
    /// Frame direction opposes edge orientation: read the dual label.
    pub external_flip: [bool; 6],
    pub internal_flip: [bool; 6],
    /// Corners `A..F`.
    pub vertices: [usize; 6],
}

impl PlaquetteFrame {
    /// The same hexagon with corner `A` moved `steps` places clockwise.
    pub fn rotated(&self, steps: usize) -> Self {
        let rot = |x: &[usize; 6]| std::array::from_fn(|s| x[(s + steps) % 6]);
        let rotb = |x: &[bool; 6]| std::array::from_fn(|s| x[(s + steps) % 6]);
        Self {
            external: rot(&self.external),
            internal: rot(&self.internal),
            external_flip: rotb(&self.external_flip),
            internal_flip: rotb(&self.internal_flip),
            vertices: rot(&self.vertices),
        }
    }

    /// All twelve edges, externals first.
    pub fn edges(&self) -> [usize; 12] {
        std::array::from_fn(|s| if s < 6 { self.external[s] } else { self.internal[s - 6] })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoneycombPatch {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
    pub edges: Vec<Edge>,
    pub vertices: Vec<VertexFrame>,
    pub plaquettes: Vec<PlaquetteFrame>,
}

/// Builds an open parallelogram of `rows x cols` hexagons or a torus of the
/// same shape.
pub fn build_patch(rows: usize, cols: usize, boundary: Boundary) -> Result<HoneycombPatch> {
    if rows == 0 || cols == 0 {
        return Err(Error::Lattice(format!("patch {rows}x{cols} has no plaquettes")));
    }
    match boundary {
        Boundary::Open => Ok(build_open(rows, cols)),
        Boundary::Torus => build_torus(rows, cols),
    }
}

fn cells(rows: usize, cols: usize) -> Vec<Cell> {
    (0..rows as i64).flat_map(|r| (0..cols as i64).map(move |c| (r, c))).collect()
}

fn build_open(rows: usize, cols: usize) -> HoneycombPatch {
    let cells = cells(rows, cols);
    let vset: BTreeSet<VKey> = cells.iter().flat_map(|&h| hex_vertices(h)).collect();
    let eset: BTreeSet<EKey> = vset.iter().flat_map(|&v| vertex_edges(v).map(|(e, _)| e)).collect();

    let mut vkeys: Vec<VKey> = vset.into_iter().collect();
    vkeys.sort_by_key(|&v| row_major(vertex_pos(v)));
    let mut ekeys: Vec<EKey> = eset.into_iter().collect();
    ekeys.sort_by_key(|&e| row_major(edge_pos(e)));
    let vid: BTreeMap<VKey, usize> = vkeys.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let eid: BTreeMap<EKey, usize> = ekeys.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let edges = ekeys
        .iter()
        .map(|&e| {
            let (lo, hi) = endpoints(e);
            Edge { tail: vid.get(&lo).copied(), head: vid.get(&hi).copied() }
        })
        .collect();
    let vertices = vkeys
        .iter()
        .map(|&v| {
            let inc = vertex_edges(v);
            VertexFrame { kind: v.0, edges: inc.map(|(e, _)| eid[&e]), incoming: inc.map(|(_, f)| f) }
        })
        .collect();
    let plaquettes = cells
        .iter()
        .map(|&h| {
            let (ext, int) = hex_frame(h);
            PlaquetteFrame {
                external: ext.map(|e| eid[&e]),
                internal: int.map(|e| eid[&e]),
                external_flip: EXTERNAL_FLIP,
                internal_flip: INTERNAL_FLIP,
                vertices: hex_vertices(h).map(|v| vid[&v]),
            }
        })
        .collect();
    HoneycombPatch { rows, cols, boundary: Boundary::Open, edges, vertices, plaquettes }
}

fn build_torus(rows: usize, cols: usize) -> Result<HoneycombPatch> {
    let (rr, cc) = (rows as i64, cols as i64);
    let cell_id = |r: i64, c: i64| (r.rem_euclid(rr) * cc + c.rem_euclid(cc)) as usize;
    let vid = |(k, r, c): VKey| 2 * cell_id(r, c) + (k == VertexKind::Down) as usize;
    let eid = |(k, r, c): EKey| 3 * cell_id(r, c) + k as usize;

    let cells = cells(rows, cols);
    let mut edges = vec![Edge { tail: None, head: None }; 3 * rows * cols];
    let mut vertices = Vec::with_capacity(2 * rows * cols);
    for &(r, c) in &cells {
        for kind in [EdgeKind::I, EdgeKind::J, EdgeKind::K] {
            let e = (kind, r, c);
            let (lo, hi) = endpoints(e);
            edges[eid(e)] = Edge { tail: Some(vid(lo)), head: Some(vid(hi)) };
        }
        for kind in [VertexKind::Up, VertexKind::Down] {
            let inc = vertex_edges((kind, r, c));
            vertices.push(VertexFrame { kind, edges: inc.map(|(e, _)| eid(e)), incoming: inc.map(|(_, f)| f) });
        }
    }
    let mut plaquettes = Vec::with_capacity(rows * cols);
    for &h in &cells {
        let (ext, int) = hex_frame(h);
        let frame = PlaquetteFrame {
            external: ext.map(eid),
            internal: int.map(eid),
            external_flip: EXTERNAL_FLIP,
            internal_flip: INTERNAL_FLIP,
            vertices: hex_vertices(h).map(vid),
        };
        let distinct: BTreeSet<usize> = frame.edges().into_iter().collect();
        if distinct.len() != 12 {
            return Err(Error::Lattice(format!(
                "torus {rows}x{cols} is too small: plaquette {:?} reuses edges in its frame",
                h
            )));
        }
        plaquettes.push(frame);
    }
    Ok(HoneycombPatch { rows, cols, boundary: Boundary::Torus, edges, vertices, plaquettes })
}

impl HoneycombPatch {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn plaquette_frame(&self, p: usize) -> Result<&PlaquetteFrame> {
        self.plaquettes.get(p).ok_or(Error::OutOfRange { what: "plaquette", index: p, len: self.plaquettes.len() })
    }

    pub fn vertex_frame(&self, v: usize) -> Result<&VertexFrame> {
        self.vertices.get(v).ok_or(Error::OutOfRange { what: "vertex", index: v, len: self.vertices.len() })
    }

    pub fn dangling_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_dangling()).collect()
    }

    /// Edges shared by two plaquette frames (internal or external slots).
    pub fn shared_edges(&self, p: usize, q: usize) -> Result<Vec<usize>> {
        let a: BTreeSet<usize> = self.plaquette_frame(p)?.edges().into_iter().collect();
        let b: BTreeSet<usize> = self.plaquette_frame(q)?.edges().into_iter().collect();
        Ok(a.intersection(&b).copied().collect())
    }

    /// The vertex at the other end of `edge` from `v`, if inside the patch.
    pub fn other_end(&self, edge: usize, v: usize) -> Option<usize> {
        let e = &self.edges[edge];
        match (e.tail, e.head) {
            (Some(t), h) if t == v => h,
            (t, Some(h)) if h == v => t,
            _ => None,
        }
    }

    /// Edge joining two vertices, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.vertices[u].edges.iter().copied().find(|&e| self.other_end(e, u) == Some(v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("patch serializes")
    }
}
