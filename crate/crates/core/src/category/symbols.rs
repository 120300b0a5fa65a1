//! Symbols derived from the F table: the G and H crossing replacements,
//! gauge transformations and the Levin-Wen re-indexing.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::validate::{check_tetrahedral, tetra_admissible};
use super::{Category, FKey, FSymbolTable, FusionRing, Label};
use crate::error::{Error, Result};

/// `(G_ij^kl)_mn = sqrt(d_m d_n / (d_j d_k)) conj((F_n^{i m l})_{k j})`.
pub fn g_symbol(cat: &Category, i: Label, j: Label, k: Label, l: Label, m: Label, n: Label) -> Complex64 {
    let scale = (cat.d(m) * cat.d(n) / (cat.d(j) * cat.d(k))).sqrt();
    cat.f(n, i, m, l, k, j).conj() * scale
}

/// `(H_ij^kl)_mn = sqrt(d_m d_n / (d_i d_l)) (F_n^{k m j})_{i l}`.
pub fn h_symbol(cat: &Category, i: Label, j: Label, k: Label, l: Label, m: Label, n: Label) -> Complex64 {
    let scale = (cat.d(m) * cat.d(n) / (cat.d(i) * cat.d(l))).sqrt();
    cat.f(n, k, m, j, i, l) * scale
}

/// Vertex gauge factors `u_c^{ab}` for each admissible fusion `a ⊗ b -> c`,
/// keyed as `[a, b, c]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Gauge {
    pub factors: BTreeMap<[Label; 3], Complex64>,
}

impl Gauge {
    /// `u ≡ 1` on every admissible triple.
    pub fn identity(ring: &FusionRing) -> Self {
        Self { factors: ring.triples().into_iter().map(|t| (t, Complex64::new(1.0, 0.0))).collect() }
    }

    /// Uniform random phases, fixed to 1 on triples with a vacuum input so the
    /// vacuum gauge survives the transformation.
    pub fn random(ring: &FusionRing, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let factors = ring
            .triples()
            .into_iter()
            .map(|t| {
                let u = if t[0].is_vacuum() || t[1].is_vacuum() {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
                };
                (t, u)
            })
            .collect();
        Self { factors }
    }

    fn get(&self, a: Label, b: Label, c: Label) -> Complex64 {
        self.factors[&[a, b, c]]
    }

    fn check(&self, ring: &FusionRing, tol: f64) -> Result<()> {
        for t in ring.triples() {
            let u = self.factors.get(&t).ok_or_else(|| {
                Error::Gauge(format!("no factor for admissible triple {:?}", [t[0].0, t[1].0, t[2].0]))
            })?;
            if (u.norm() - 1.0).abs() > tol {
                return Err(Error::Gauge(format!(
                    "factor for {:?} has modulus {}, expected 1",
                    [t[0].0, t[1].0, t[2].0],
                    u.norm()
                )));
            }
            if (t[0].is_vacuum() || t[1].is_vacuum()) && (u - 1.0).norm() > tol {
                return Err(Error::Gauge(format!(
                    "factor for vacuum vertex {:?} must be 1 to keep the vacuum gauge",
                    [t[0].0, t[1].0, t[2].0]
                )));
            }
        }
        Ok(())
    }
}

/// Applies `(F_i^{jkl})'_{mn} = u_i^{jn} u_n^{kl} / (u_m^{jk} u_i^{ml}) (F_i^{jkl})_{mn}`.
///
/// The factors must be unimodular and equal 1 on vertices with a vacuum input.
pub fn gauge_transform(cat: &Category, u: &Gauge, tol: f64) -> Result<Category> {
    u.check(cat.ring(), tol)?;
    let entries: BTreeMap<FKey, Complex64> = cat
        .fsymbols()
        .iter()
        .map(|(key, &v)| {
            let [i, j, k, l, m, n] = *key;
            let factor = u.get(j, n, i) * u.get(k, l, n) / (u.get(j, k, m) * u.get(m, l, i));
            (*key, v * factor)
        })
        .collect();
    cat.with_fsymbols(entries)
}

/// Levin-Wen symbols `𝓕^{abm}_{cdn} = (F_c^{b* a* d*})_{mn}`, keyed
/// `[a, b, m, c, d, n]`.
#[derive(Clone, Debug)]
pub struct LwTable {
    table: FSymbolTable,
}

impl LwTable {
    #[inline]
    pub fn get(&self, a: Label, b: Label, m: Label, c: Label, d: Label, n: Label) -> Complex64 {
        self.table.get(&[a, b, m, c, d, n])
    }

    pub fn entries(&self) -> &BTreeMap<FKey, Complex64> {
        self.table.entries()
    }
}

/// Re-indexes the F table into Levin-Wen form after certifying tetrahedral
/// symmetry, the normalization `𝓕^{ijk}_{j* i* 0} = sqrt(d_k / (d_i d_j)) δ_{ij}^{k*}`
/// and the unitarity condition `conj(𝓕^{ijm}_{kln}) = 𝓕^{i* j* m*}_{k* l* n*}`.
pub fn to_lw_fsymbols(cat: &Category, tol: f64) -> Result<LwTable> {
    let combinatorial = tetra_admissible(cat.ring());
    if !combinatorial.passed {
        return Err(Error::NotTetrahedral(format!(
            "{} admissible keys have zero-dimensional partners, first at {:?}",
            combinatorial.violations.len(),
            combinatorial.violations[0].key
        )));
    }
    if !cat.has_f_data() {
        return Err(Error::NotTetrahedral(format!("{} has no F-symbols", cat.name())));
    }
    let tetra = check_tetrahedral(cat, tol);
    if !tetra.passed {
        let first = tetra.violations.first().map(|v| format!("{:?}", v.key)).unwrap_or_default();
        return Err(Error::NotTetrahedral(format!(
            "{} violations, worst residual {:e}, first at {first}",
            tetra.violations.len(),
            tetra.worst_residual
        )));
    }
    let ring = cat.ring();
    let dual = |x| ring.dual(x);
    let mut entries = BTreeMap::new();
    for (key, &v) in cat.fsymbols().iter() {
        // key = [c, b*, a*, d*, m, n]
        let [c, bs, as_, ds, m, n] = *key;
        entries.insert([dual(as_), dual(bs), m, c, dual(ds), n], v);
    }
    let lw = LwTable { table: FSymbolTable::new(cat.num_labels(), entries) };

    let v = Label::VACUUM;
    for i in ring.labels() {
        for j in ring.labels() {
            for k in ring.labels() {
                let expected = if ring.fuses(i, j, dual(k)) { (cat.d(k) / (cat.d(i) * cat.d(j))).sqrt() } else { 0.0 };
                let got = lw.get(i, j, k, dual(j), dual(i), v);
                if (got - expected).norm() > tol {
                    return Err(Error::LwNormalization(format!(
                        "normalization at (i, j, k) = ({i}, {j}, {k}): got {got}, expected {expected}"
                    )));
                }
            }
        }
    }
    for (key, &x) in lw.entries() {
        let [a, b, m, c, d, n] = *key;
        let y = lw.get(dual(a), dual(b), dual(m), dual(c), dual(d), dual(n));
        if (x.conj() - y).norm() > tol {
            return Err(Error::LwNormalization(format!(
                "unitarity condition fails at {:?}: conj = {}, starred = {y}",
                super::key_indices(key),
                x.conj()
            )));
        }
    }
    Ok(lw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins::{self, PHI};
    use crate::category::validate::{check_pentagon, check_unitarity};

    #[test]
    fn g_and_h_vacuum_and_fibonacci_values() {
        let fib = builtins::fibonacci();
        let (v, t) = (Label(0), Label(1));
        assert!((g_symbol(&fib, v, v, v, v, v, v) - 1.0).norm() < 1e-15);
        assert!((h_symbol(&fib, v, v, v, v, v, v) - 1.0).norm() < 1e-15);
        assert!((g_symbol(&fib, t, t, t, t, t, t).re + 1.0 / PHI).abs() < 1e-15);
    }

    #[test]
    fn g_equals_h_with_reversed_line_on_tetrahedral_categories() {
        for c in builtins::with_f_data() {
            let labels: Vec<Label> = c.labels().collect();
            let mut worst: f64 = 0.0;
            for &i in &labels {
                for &j in &labels {
                    for &k in &labels {
                        for &l in &labels {
                            for &m in &labels {
                                for &n in &labels {
                                    // the horizontal line of G runs right to left, that of H left to right
                                    let d = g_symbol(&c, i, j, k, l, m, n) - h_symbol(&c, i, j, k, l, c.dual(m), n);
                                    worst = worst.max(d.norm());
                                }
                            }
                        }
                    }
                }
            }
            assert!(worst <= 1e-9, "{}: {worst}", c.name());
        }
    }

    #[test]
    fn g_and_h_differ_literally_on_z3() {
        let z3 = builtins::vec_z3();
        let (a, b) = (Label(1), Label(2));
        // G needs k = i + m while H needs i = k + m
        assert_eq!(g_symbol(&z3, a, a, b, Label(0), a, b), Complex64::new(1.0, 0.0));
        assert_eq!(h_symbol(&z3, a, a, b, Label(0), a, b), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn identity_gauge_is_noop() {
        let c = builtins::ising();
        let g = gauge_transform(&c, &Gauge::identity(c.ring()), 1e-12).unwrap();
        assert_eq!(g.fsymbols(), c.fsymbols());
    }

    #[test]
    fn random_gauge_keeps_pentagon_and_unitarity() {
        let c = builtins::fibonacci();
        let g = gauge_transform(&c, &Gauge::random(c.ring(), 7), 1e-12).unwrap();
        assert!(check_pentagon(&g, 1e-9).passed);
        assert!(check_unitarity(&g, 1e-9).passed);
        assert_ne!(g.fsymbols(), c.fsymbols());
    }

    #[test]
    fn non_unimodular_gauge_is_rejected() {
        let c = builtins::toric_code();
        let mut u = Gauge::identity(c.ring());
        u.factors.insert([Label(1), Label(1), Label(0)], Complex64::new(2.0, 0.0));
        assert_eq!(gauge_transform(&c, &u, 1e-12).unwrap_err().kind(), "gauge");
    }

    #[test]
    fn missing_gauge_factor_is_rejected() {
        let c = builtins::toric_code();
        let mut u = Gauge::identity(c.ring());
        u.factors.remove(&[Label(1), Label(1), Label(0)]);
        assert_eq!(gauge_transform(&c, &u, 1e-12).unwrap_err().kind(), "gauge");
    }

    #[test]
    fn h3_verdict_is_gauge_independent() {
        let h3 = builtins::h3();
        let before = tetra_admissible(h3.ring());
        let g = gauge_transform(&h3, &Gauge::random(h3.ring(), 3), 1e-12).unwrap();
        assert_eq!(tetra_admissible(g.ring()), before);
    }

    #[test]
    fn lw_table_for_toric_code_is_all_ones() {
        let lw = to_lw_fsymbols(&builtins::toric_code(), 1e-9).unwrap();
        assert!(lw.entries().values().all(|v| (*v - 1.0).norm() < 1e-15));
    }

    #[test]
    fn lw_translation_succeeds_on_symmetric_builtins() {
        for c in builtins::with_f_data() {
            to_lw_fsymbols(&c, 1e-9).unwrap_or_else(|e| panic!("{}: {e}", c.name()));
        }
    }

    #[test]
    fn lw_translation_fails_for_h3() {
        assert_eq!(to_lw_fsymbols(&builtins::h3(), 1e-9).unwrap_err().kind(), "not_tetrahedral");
    }
}
