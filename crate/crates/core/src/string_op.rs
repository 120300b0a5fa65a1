//! Closed string operators `W^s(P)`.
//!
//! A closed path visits vertices `v_1..v_N`. At `v_k` the path arrives along
//! `i_{k-1}`, leaves along `i_k` and passes the remaining leg `e_k`. Path
//! labels are read in the direction of travel and `e_k` pointing into `v_k`.
//! The matrix element is the product of one F-factor per vertex, the
//! caller-supplied phases `ω_k`, and the completeness weights
//! `sqrt(d_{i'_k} / (d_{i_k} d_s))` that make a hexagonal `W^s` coincide with
//! `B_p^s`.
//!
//! The six vertex cases are the six left turns on the honeycomb (three per
//! vertex kind). Right turns are not covered by the vertex table and are
//! rejected.

use std::sync::Arc;

use num_complex::Complex64;

use crate::category::{Category, Label};
use crate::error::{Error, Result};
use crate::hamiltonian::{Basis, SparseOperator};
use crate::lattice::{HoneycombPatch, VertexFrame, VertexKind};
use crate::par::{self, Exec};

/// One of the six vertex geometries, numbered `1..=6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Case(u8);

impl Case {
    pub fn new(tag: u8) -> Result<Self> {
        if (1..=6).contains(&tag) {
            Ok(Case(tag))
        } else {
            Err(Error::Path(format!("case tag {tag} outside 1..=6")))
        }
    }

    pub fn tag(self) -> u8 {
        self.0
    }

    /// Case of a left turn entering `frame` through `slot_in`.
    pub fn for_turn(kind: VertexKind, slot_in: usize) -> Self {
        let up = [5, 3, 1];
        let down = [6, 4, 2];
        Case(match kind {
            VertexKind::Up => up[slot_in],
            VertexKind::Down => down[slot_in],
        })
    }
}

/// Per-vertex F-factor `F_k^s` for the given case.
///
/// Arguments: string `s`, leg `e = e_k`, old labels `(ip, ik) = (i_{k-1}, i_k)`
/// and new labels `(jp, jk) = (i'_{k-1}, i'_k)`.
#[allow(clippy::too_many_arguments)]
pub fn fk_factor(
    cat: &Category,
    case: Case,
    s: Label,
    e: Label,
    ip: Label,
    ik: Label,
    jp: Label,
    jk: Label,
) -> Complex64 {
    let du = |x| cat.dual(x);
    let d = |x| cat.d(x);
    let f = |i, j, k, l, m, n| cat.f(i, j, k, l, m, n);
    let ss = du(s);
    let v = Label::VACUUM;
    let (amp, sym) = match case.0 {
        1 => (
            d(ss) * d(s) * d(du(ik)) * d(ip) / (d(du(jk)) * d(jp)),
            f(du(ik), du(ik), ss, s, du(jk), v) * f(du(e), du(jk), s, ip, du(ik), jp).conj(),
        ),
        2 => (d(s) * d(ik) / d(jk), f(jp, s, ik, du(e), jk, ip).conj()),
        3 => (d(s) * d(ip) / d(jp), f(jk, s, ip, e, jp, ik)),
        // the starred subscript `i'*_{k-1}` keeps the second tree admissible
        4 => (
            d(ss) * d(s) * d(du(ip)) * d(ik) / (d(du(jp)) * d(jk)),
            f(ik, ss, s, ik, v, jk) * f(e, du(ip), ss, jk, du(jp), ik).conj(),
        ),
        5 => (d(ss) * d(du(ik)) / d(du(jk)), f(du(jp), e, du(ik), ss, du(ip), du(jk)).conj()),
        6 => (d(ss) * d(du(ip)) / d(du(jp)), f(du(jk), du(e), du(ip), ss, du(ik), du(jp))),
        _ => unreachable!("Case is validated on construction"),
    };
    if sym == Complex64::new(0.0, 0.0) {
        return sym;
    }
    sym * amp.sqrt()
}

/// One vertex of a closed path.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PathStep {
    pub vertex: usize,
    /// Edge arriving from the previous vertex (`i_{k-1}`).
    pub edge_in: usize,
    /// Edge leaving towards the next vertex (`i_k`).
    pub edge_out: usize,
    /// Remaining leg (`e_k`).
    pub external: usize,
    pub case: Case,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct StringPath {
    steps: Vec<PathStep>,
}

/// Slot of `edge` in a vertex frame, rejecting self-loops.
fn slot(frame: &VertexFrame, edge: usize, v: usize) -> Result<usize> {
    let hits = frame.edges.iter().filter(|&&e| e == edge).count();
    if hits != 1 {
        return Err(Error::Path(format!("edge {edge} meets vertex {v} {hits} times")));
    }
    Ok(frame.edges.iter().position(|&e| e == edge).expect("counted above"))
}

impl StringPath {
    /// Closed path through `vertices` (the last one connects back to the
    /// first), with case tags inferred from the vertex frames.
    pub fn from_vertices(patch: &HoneycombPatch, vertices: &[usize]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Path(format!("a closed path needs at least 3 vertices, got {n}")));
        }
        let mut links = Vec::with_capacity(n);
        for k in 0..n {
            let (u, w) = (vertices[k], vertices[(k + 1) % n]);
            patch.vertex_frame(u)?;
            let e = patch
                .edge_between(u, w)
                .ok_or_else(|| Error::Path(format!("vertices {u} and {w} are not adjacent")))?;
            links.push(e);
        }
        let mut seen = links.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::Path("path traverses an edge twice".into()));
        }
        let mut steps = Vec::with_capacity(n);
        for k in 0..n {
            let v = vertices[k];
            let frame = patch.vertex_frame(v)?;
            let (edge_in, edge_out) = (links[(k + n - 1) % n], links[k]);
            let (si, so) = (slot(frame, edge_in, v)?, slot(frame, edge_out, v)?);
            if so != (si + 2) % 3 {
                return Err(Error::Path(format!(
                    "path turns right at vertex {v}; only left turns (counter-clockwise loops) are supported"
                )));
            }
            let external = frame.edges[(si + 1) % 3];
            steps.push(PathStep { vertex: v, edge_in, edge_out, external, case: Case::for_turn(frame.kind, si) });
        }
        Ok(Self { steps })
    }

    /// Counter-clockwise boundary of plaquette `p`, starting at corner `C`.
    pub fn hexagon(patch: &HoneycombPatch, p: usize) -> Result<Self> {
        let [a, b, c, d, e, f] = patch.plaquette_frame(p)?.vertices;
        Self::from_vertices(patch, &[c, b, a, f, e, d])
    }

    /// Replaces the inferred case tags.
    pub fn with_cases(mut self, cases: &[u8]) -> Result<Self> {
        if cases.len() != self.steps.len() {
            return Err(Error::DimensionMismatch { expected: self.steps.len(), found: cases.len() });
        }
        for (step, &c) in self.steps.iter_mut().zip(cases) {
            step.case = Case::new(c)?;
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn cases(&self) -> Vec<Case> {
        self.steps.iter().map(|s| s.case).collect()
    }

    /// `(e, i)` in path orientation read from lattice labels: `e_k` points
    /// into `v_k`, `i_k` runs from `v_k` to `v_{k+1}`.
    pub fn read_labels(&self, cat: &Category, patch: &HoneycombPatch, labels: &[Label]) -> (Vec<Label>, Vec<Label>) {
        let ext = self
            .steps
            .iter()
            .map(|st| {
                let x = labels[st.external];
                if patch.edges[st.external].head == Some(st.vertex) {
                    x
                } else {
                    cat.dual(x)
                }
            })
            .collect();
        let int = self.steps.iter().map(|st| self.oriented(cat, patch, st, labels[st.edge_out])).collect();
        (ext, int)
    }

    /// Converts between lattice and path orientation of `step`'s outgoing edge
    /// (the map is an involution).
    fn oriented(&self, cat: &Category, patch: &HoneycombPatch, step: &PathStep, x: Label) -> Label {
        if patch.edges[step.edge_out].tail == Some(step.vertex) {
            x
        } else {
            cat.dual(x)
        }
    }
}

/// `ω_k ≡ 1`.
pub fn unit_omegas(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); n]
}

/// Matrix element `<i'| W^s(P) |i>` for legs `ext`, all in path orientation
/// (`old[k] = i_k`).
#[allow(clippy::too_many_arguments)]
pub fn w_element(
    cat: &Category,
    cases: &[Case],
    s: Label,
    omegas: &[Complex64],
    ext: &[Label],
    old: &[Label],
    new: &[Label],
) -> Result<Complex64> {
    let n = cases.len();
    for (what, len) in [("omegas", omegas.len()), ("ext", ext.len()), ("old", old.len()), ("new", new.len())] {
        if len != n {
            return Err(Error::Path(format!("{what} has length {len}, path has {n} vertices")));
        }
    }
    let mut out = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k + n - 1) % n;
        out *= fk_factor(cat, cases[k], s, ext[k], old[p], old[k], new[p], new[k]);
        if out == Complex64::new(0.0, 0.0) {
            return Ok(out);
        }
        out *= omegas[k] * (cat.d(new[k]) / (cat.d(old[k]) * cat.d(s))).sqrt();
    }
    Ok(out)
}

/// Nonzero `(new, value)` pairs for fixed `old` labels, found by extending
/// the new labels one edge at a time and pruning on vanishing vertex factors.
fn column(
    cat: &Category,
    cases: &[Case],
    s: Label,
    omegas: &[Complex64],
    ext: &[Label],
    old: &[Label],
) -> Vec<(Vec<Label>, Complex64)> {
    let n = cases.len();
    let mut out = Vec::new();
    let mut new = vec![Label::VACUUM; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        cat: &Category,
        cases: &[Case],
        s: Label,
        ext: &[Label],
        old: &[Label],
        new: &mut Vec<Label>,
        k: usize,
        acc: Complex64,
        out: &mut Vec<(Vec<Label>, Complex64)>,
        omegas: &[Complex64],
    ) {
        let n = cases.len();
        if k == n {
            let v = acc * fk_factor(cat, cases[0], s, ext[0], old[n - 1], old[0], new[n - 1], new[0]);
            if v.norm() >= crate::DROP_TOL {
                let weights: Complex64 =
                    (0..n).map(|j| omegas[j] * (cat.d(new[j]) / (cat.d(old[j]) * cat.d(s))).sqrt()).product();
                out.push((new.clone(), v * weights));
            }
            return;
        }
        for x in cat.labels() {
            new[k] = x;
            let next =
                if k == 0 { acc } else { acc * fk_factor(cat, cases[k], s, ext[k], old[k - 1], old[k], new[k - 1], x) };
            if next != Complex64::new(0.0, 0.0) {
                rec(cat, cases, s, ext, old, new, k + 1, next, out, omegas);
            }
        }
    }
    rec(cat, cases, s, ext, old, &mut new, 0, Complex64::new(1.0, 0.0), &mut out, omegas);
    out
}

/// `W^s(P)` on a configuration basis of `patch`.
pub fn string_operator(
    cat: &Category,
    patch: &HoneycombPatch,
    basis: &Arc<Basis>,
    path: &StringPath,
    s: Label,
    omegas: &[Complex64],
    exec: Exec,
) -> Result<SparseOperator> {
    if !cat.has_f_data() {
        return Err(Error::Structure(format!("{} has no F-symbols; string operators need them", cat.name())));
    }
    if omegas.len() != path.len() {
        return Err(Error::Path(format!("{} phases for a path of {} vertices", omegas.len(), path.len())));
    }
    if s.idx() >= cat.num_labels() {
        return Err(Error::OutOfRange { what: "label", index: s.idx(), len: cat.num_labels() });
    }
    let cases = path.cases();
    let cols = par::map_range(exec, basis.dim(), |x| -> Result<Vec<(usize, Complex64)>> {
        let code = basis.code(x);
        let labels = basis.decode(code);
        let (ext, old) = path.read_labels(cat, patch, &labels);
        let base =
            code - path.steps().iter().map(|st| labels[st.edge_out].0 as u64 * basis.weight(st.edge_out)).sum::<u64>();
        column(cat, &cases, s, omegas, &ext, &old)
            .into_iter()
            .map(|(new, v)| {
                let mut c = base;
                for (st, &x) in path.steps().iter().zip(&new) {
                    c += path.oriented(cat, patch, st, x).0 as u64 * basis.weight(st.edge_out);
                }
                let row = basis
                    .index_of(c)
                    .ok_or_else(|| Error::Structure("string operator leaves the configuration basis".into()))?;
                Ok((row, v))
            })
            .collect()
    });
    let mut t = Vec::new();
    for (x, col) in cols.into_iter().enumerate() {
        t.extend(col?.into_iter().map(|(r, v)| (r, x, v)));
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t)?.with_basis(basis.clone()))
}

/// `‖[W, H]‖_max`, a diagnostic for candidate phases `ω_k`.
pub fn commutator_residual(w: &SparseOperator, h: &SparseOperator) -> Result<f64> {
    Ok(w.commutator(h)?.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins;
    use crate::hamiltonian::bp_s_element;
    use crate::lattice::{build_patch, Boundary};

    #[test]
    fn vacuum_string_factors_are_one() {
        for cat in builtins::with_f_data() {
            for c in 1..=6 {
                for e in cat.labels() {
                    for ip in cat.labels() {
                        for ik in cat.labels() {
                            // nonzero exactly on admissible vertices, where it must be 1
                            let v = fk_factor(&cat, Case(c), Label(0), e, ip, ik, ip, ik);
                            if v != Complex64::new(0.0, 0.0) {
                                assert!((v - 1.0).norm() < 1e-12, "{} case {c}", cat.name());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn toric_case_two_flips_with_unit_weight() {
        let tc = builtins::toric_code();
        let (o, x) = (Label(0), Label(1));
        assert!((fk_factor(&tc, Case(2), x, o, o, o, x, x) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn missing_fibonacci_key_gives_zero() {
        let fib = builtins::fibonacci();
        let (o, t) = (Label(0), Label(1));
        // (i'_k, i_{k-1}, e_k) = (0, 1, 0) cannot fuse
        assert_eq!(fk_factor(&fib, Case(3), t, o, t, t, t, o), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hexagon_path_has_one_case_per_corner() {
        let patch = build_patch(1, 1, Boundary::Open).unwrap();
        let path = StringPath::hexagon(&patch, 0).unwrap();
        let tags: Vec<u8> = path.cases().iter().map(|c| c.tag()).collect();
        assert_eq!(tags, vec![2, 1, 6, 5, 4, 3]);
    }

    #[test]
    fn clockwise_loop_is_rejected() {
        let patch = build_patch(1, 1, Boundary::Open).unwrap();
        let [a, b, c, d, e, f] = patch.plaquettes[0].vertices;
        let err = StringPath::from_vertices(&patch, &[a, b, c, d, e, f]).unwrap_err();
        assert_eq!(err.kind(), "path");
    }

    #[test]
    fn case_override_is_checked() {
        let patch = build_patch(1, 1, Boundary::Open).unwrap();
        let path = StringPath::hexagon(&patch, 0).unwrap();
        assert!(path.clone().with_cases(&[1, 2, 3]).is_err());
        assert!(path.with_cases(&[1, 2, 3, 4, 5, 7]).is_err());
    }

    #[test]
    fn hexagon_string_matches_plaquette_term_on_sample() {
        let fib = builtins::fibonacci();
        let cases: Vec<Case> = [2, 1, 6, 5, 4, 3].map(Case).to_vec();
        let t = Label(1);
        let ext = [t; 6];
        let configs = crate::hamiltonian::plaquette::valid_internal_configs(fib.ring(), &ext);
        for old in &configs {
            for new in &configs {
                let b = bp_s_element(&fib, t, &ext, old, new);
                let [a, bb, c, d, e, f] = ext;
                let [g, h, i, j, k, l] = *old;
                let [g2, h2, i2, j2, k2, l2] = *new;
                let w = w_element(
                    &fib,
                    &cases,
                    t,
                    &unit_omegas(6),
                    &[c, bb, a, f, e, d],
                    &[h, g, l, k, j, i],
                    &[h2, g2, l2, k2, j2, i2],
                )
                .unwrap();
                assert!((w - b).norm() < 1e-12, "{old:?} -> {new:?}: {w} vs {b}");
            }
        }
    }
}
