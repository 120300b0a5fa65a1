//! Test-only oracles shared by the integration suites.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stringnet::hamiltonian::plaquette::{all_external_tuples, valid_internal_configs};
use stringnet::{Category, Label};

pub const DATA_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");

pub fn data_file(name: &str) -> String {
    format!("{DATA_DIR}/{name}.cat")
}

pub fn load(name: &str) -> Category {
    stringnet::category::io::load_category(data_file(name)).expect("data file loads")
}

/// The four categories with complete F data, read from the data directory.
pub fn standard_files() -> Vec<Category> {
    ["toric_code", "vec_z3", "fibonacci", "ising"].into_iter().map(load).collect()
}

/// `(G_{ij}^{kl})_{mn}`: replacement of a crossing whose horizontal line
/// runs right to left, expressed through one F-move and a vertex
/// renormalization.
fn g_move(cat: &Category, i: Label, j: Label, k: Label, l: Label, m: Label, n: Label) -> Complex64 {
    let d = |x| cat.d(x);
    (d(m) * d(n) / (d(j) * d(k))).sqrt() * cat.f(n, i, m, l, k, j).conj()
}

/// `(H_{ij}^{kl})_{mn}`: the left-to-right counterpart of [`g_move`].
fn h_move(cat: &Category, i: Label, j: Label, k: Label, l: Label, m: Label, n: Label) -> Complex64 {
    let d = |x| cat.d(x);
    (d(m) * d(n) / (d(i) * d(l))).sqrt() * cat.f(n, k, m, j, i, l)
}

/// Bigon removal: a loop of `a, b` on a line `c` collapses to
/// `sqrt(d_a d_b / d_c)` times a line of the matching label.
fn bigon(cat: &Category, a: Label, b: Label, c: Label, out: Label) -> f64 {
    if c == out {
        (cat.d(a) * cat.d(b) / cat.d(c)).sqrt()
    } else {
        0.0
    }
}

/// Completeness weight for fusing an `s` line into side `x`, producing `x2`.
fn completeness(cat: &Category, s: Label, x: Label, x2: Label) -> f64 {
    (cat.d(x2) / (cat.d(x) * cat.d(s))).sqrt()
}

/// `<new| B_p^s |old>` by evaluating the plaquette diagram corner by corner:
/// the inserted loop is fused into each side (completeness), the corners are
/// resolved with F-, G- and H-moves, and the remaining bubbles are removed.
/// Intermediate labels are summed explicitly.
pub fn graphical_bp_s(cat: &Category, s: Label, ext: &[Label; 6], old: &[Label; 6], new: &[Label; 6]) -> Complex64 {
    let du = |x| cat.dual(x);
    let ss = du(s);
    let v = Label::VACUUM;
    let [a, b, c, dd, e, f] = *ext;
    let [g, h, i, j, k, l] = *old;
    let [g2, h2, i2, j2, k2, l2] = *new;
    let labels: Vec<Label> = cat.labels().collect();

    let pre: f64 = [(du(g), du(g2)), (h, h2), (i, i2), (j, j2), (du(k), du(k2)), (du(l), du(l2))]
        .iter()
        .map(|&(x, x2)| completeness(cat, s, x, x2))
        .product();

    // corner B: transpose of an F-move through the vacuum, then a bubble
    let c1a: Complex64 =
        labels.iter().map(|&al| cat.f(du(g), du(g), ss, s, du(al), v) * bigon(cat, du(g), ss, du(al), du(g2))).sum();
    let c1b: Complex64 =
        labels.iter().map(|&be| cat.f(du(b), du(g2), s, h, du(g), be).conj() * bigon(cat, s, h, be, h2)).sum();
    let c2 = (cat.d(s) * cat.d(i) / cat.d(i2)).sqrt() * g_move(cat, s, i, h2, du(c), h, i2);
    let c3 = (cat.d(s) * cat.d(i) / cat.d(i2)).sqrt() * h_move(cat, j2, dd, s, i, j, i2);
    // corner E: F-move through the vacuum, then the adjoint of an F-move
    let c4a: Complex64 = labels.iter().map(|&al| cat.f(j, ss, s, j, v, al) * bigon(cat, j, s, al, j2)).sum();
    let c4b: Complex64 = labels
        .iter()
        .map(|&be| cat.f(e, du(k), ss, j2, du(be), j).conj() * bigon(cat, du(k), ss, du(be), du(k2)))
        .sum();
    let c5 = (cat.d(ss) * cat.d(du(l)) / cat.d(du(l2))).sqrt() * g_move(cat, f, du(k2), du(l), ss, du(k), du(l2));
    let c6 = (cat.d(ss) * cat.d(du(l)) / cat.d(du(l2))).sqrt() * h_move(cat, du(l), ss, du(a), du(g2), du(g), du(l2));

    pre * c1a * c1b * c2 * c3 * c4a * c4b * c5 * c6
}

/// `(s, ext, old, new)` for one plaquette matrix element.
pub type Sample = (Label, [Label; 6], [Label; 6], [Label; 6]);

/// Random samples with branching-valid `old` and `new`.
pub fn sample_admissible(cat: &Category, count: usize, seed: u64) -> Vec<Sample> {
    let n = cat.num_labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exts: Vec<([Label; 6], Vec<[Label; 6]>)> = all_external_tuples(n)
        .into_iter()
        .map(|e| (e, valid_internal_configs(cat.ring(), &e)))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    (0..count)
        .map(|_| {
            let (ext, configs) = &exts[rng.random_range(0..exts.len())];
            let old = configs[rng.random_range(0..configs.len())];
            let new = configs[rng.random_range(0..configs.len())];
            (Label(rng.random_range(0..n) as u8), *ext, old, new)
        })
        .collect()
}

/// Row-sum norm of a dense complex matrix.
pub fn inf_norm(m: &nalgebra::DMatrix<Complex64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}
