//! Consistency checks for fusion rings, quantum dimensions and F-symbols.
//!
//! Each check returns a [`ValidationReport`] listing every offending index
//! tuple. Label-level checks have tolerance 0; numerical checks take `tol`.

use num_complex::Complex64;

use super::{key_indices, Category, FKey, FusionRing, Label, QuantumDims};
use crate::par::{self, Exec};
use crate::report::ValidationReport;

fn idx(ls: &[Label]) -> Vec<usize> {
    ls.iter().map(|l| l.idx()).collect()
}

/// Unit, duality pairing, associativity and vertex-rotation identities.
pub fn validate_ring(ring: &FusionRing) -> ValidationReport {
    let mut rep = ValidationReport::new("ring", 0.0);
    let v = Label::VACUUM;
    for i in ring.labels() {
        for k in ring.labels() {
            if ring.fuses(v, i, k) != (i == k) {
                rep.violate(idx(&[v, i, k]), "left unit: 0 ⊗ j must be exactly j");
            }
            if ring.fuses(i, v, k) != (i == k) {
                rep.violate(idx(&[i, v, k]), "right unit: i ⊗ 0 must be exactly i");
            }
        }
        for j in ring.labels() {
            if ring.fuses(i, j, v) != (j == ring.dual(i)) {
                rep.violate(idx(&[i, j, v]), "duality pairing: i ⊗ j contains 0 iff j = i*");
            }
        }
    }
    for i in ring.labels() {
        for j in ring.labels() {
            for k in ring.labels() {
                for l in ring.labels() {
                    let lhs: u32 = ring.labels().map(|m| ring.n(i, j, m) * ring.n(m, k, l)).sum();
                    let rhs: u32 = ring.labels().map(|n| ring.n(j, k, n) * ring.n(i, n, l)).sum();
                    if lhs != rhs {
                        rep.violate(
                            idx(&[i, j, k, l]),
                            format!("associativity: (i⊗j)⊗k has {lhs} copies of l, i⊗(j⊗k) has {rhs}"),
                        );
                    }
                }
            }
        }
    }
    for s in ring.labels() {
        for t in ring.labels() {
            for a in ring.labels() {
                if ring.fuses(s, t, a) != ring.fuses(t, ring.dual(a), ring.dual(s)) {
                    rep.violate(idx(&[s, t, a]), "vertex rotation: N_st^a must equal N_{t a*}^{s*}");
                }
            }
        }
    }
    rep
}

/// `d_0 = 1`, positivity, `d_i = d_{i*}`, `d_i d_j = sum_k N_ij^k d_k` and the
/// total dimension.
pub fn validate_dims(ring: &FusionRing, dims: &QuantumDims, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::new("dims", tol);
    let n = ring.num_labels();
    if dims.as_slice().len() != n {
        rep.violate(vec![], format!("{} dimensions for {n} labels", dims.as_slice().len()));
        return rep;
    }
    rep.record(vec![0], (dims.d(Label::VACUUM) - 1.0).abs(), "vacuum dimension must be 1");
    for i in ring.labels() {
        let d = dims.d(i);
        if d.is_nan() || d <= 0.0 || d.is_infinite() {
            rep.violate(vec![i.idx()], format!("dimension {d} is not a positive number"));
        }
        rep.record(vec![i.idx(), ring.dual(i).idx()], (d - dims.d(ring.dual(i))).abs(), "d_i must equal d_{i*}");
    }
    for i in ring.labels() {
        for j in ring.labels() {
            let sum: f64 = ring.products(i, j).map(|k| dims.d(k)).sum();
            rep.record(
                vec![i.idx(), j.idx()],
                (dims.d(i) * dims.d(j) - sum).abs(),
                "d_i d_j must equal the sum of d_k over i ⊗ j",
            );
        }
    }
    let total = dims.as_slice().iter().map(|d| d * d).sum::<f64>().sqrt();
    rep.record(vec![], (total - dims.total()).abs(), "total dimension D");
    rep
}

/// Pentagon equation
///
/// ```text
/// (F_m^{nkl})_{ps} (F_m^{ijs})_{nr} = sum_q (F_p^{ijk})_{nq} (F_m^{iql})_{pr} (F_r^{jkl})_{qs}
/// ```
///
/// over all `i, j, k, l, m` with `n ∈ i⊗j`, `p ∈ n⊗k`, `m ∈ p⊗l`, `s ∈ k⊗l`,
/// `r ∈ j⊗s`, `m ∈ i⊗r`. Violation keys are `[i, j, k, l, m, n, p, r, s]`.
pub fn check_pentagon(cat: &Category, tol: f64) -> ValidationReport {
    check_pentagon_with(cat, tol, Exec::default())
}

pub fn check_pentagon_with(cat: &Category, tol: f64, exec: Exec) -> ValidationReport {
    let ring = cat.ring();
    let nl = ring.num_labels();
    let parts = par::map_range(exec, nl * nl, |ij| {
        let i = Label((ij / nl) as u8);
        let j = Label((ij % nl) as u8);
        let mut rep = ValidationReport::new("pentagon", tol);
        let f = |a, b, c, d, e, g| cat.f(a, b, c, d, e, g);
        for k in ring.labels() {
            for l in ring.labels() {
                for m in ring.labels() {
                    for n in ring.products(i, j) {
                        for p in ring.products(n, k).filter(|&p| ring.fuses(p, l, m)) {
                            for s in ring.products(k, l) {
                                for r in ring.products(j, s).filter(|&r| ring.fuses(i, r, m)) {
                                    let lhs = f(m, n, k, l, p, s) * f(m, i, j, s, n, r);
                                    let rhs: Complex64 = ring
                                        .labels()
                                        .map(|q| f(p, i, j, k, n, q) * f(m, i, q, l, p, r) * f(r, j, k, l, q, s))
                                        .sum();
                                    rep.record(
                                        idx(&[i, j, k, l, m, n, p, r, s]),
                                        (lhs - rhs).norm(),
                                        "pentagon residual",
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        rep
    });
    let mut rep = ValidationReport::new("pentagon", tol);
    for p in parts {
        rep.merge(p);
    }
    rep
}

/// Visits each non-empty `(i, j, k, l)` block with its row (m) and column (n)
/// channels.
fn for_each_block(ring: &FusionRing, mut visit: impl FnMut([Label; 4], &[Label], &[Label])) {
    for i in ring.labels() {
        for j in ring.labels() {
            for k in ring.labels() {
                for l in ring.labels() {
                    let ms = ring.left_channels(i, j, k, l);
                    let ns = ring.right_channels(i, j, k, l);
                    if ms.is_empty() && ns.is_empty() {
                        continue;
                    }
                    visit([i, j, k, l], &ms, &ns);
                }
            }
        }
    }
}

fn block_residual(
    cat: &Category,
    [i, j, k, l]: [Label; 4],
    ms: &[Label],
    ns: &[Label],
    columns: bool,
    rep: &mut ValidationReport,
    what: &str,
) {
    let key = idx(&[i, j, k, l]);
    if ms.len() != ns.len() {
        rep.violate(key, format!("{what}: block is {}x{}, not square", ms.len(), ns.len()));
        return;
    }
    // columns: F^dagger F, indexed by n; rows: F F^dagger, indexed by m
    let (outer, inner) = if columns { (ns, ms) } else { (ms, ns) };
    let entry = |o: Label, x: Label| {
        if columns {
            cat.f(i, j, k, l, x, o)
        } else {
            cat.f(i, j, k, l, o, x)
        }
    };
    let mut worst: f64 = 0.0;
    for (a, &oa) in outer.iter().enumerate() {
        for (b, &ob) in outer.iter().enumerate() {
            let s: Complex64 = inner.iter().map(|&x| entry(oa, x).conj() * entry(ob, x)).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    rep.record(key, worst, what);
}

/// `F^dagger F = 1` on every `(i, j, k, l)` block (max-abs entry norm).
pub fn check_unitarity(cat: &Category, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::new("unitarity", tol);
    for_each_block(cat.ring(), |b, ms, ns| block_residual(cat, b, ms, ns, true, &mut rep, "F^dagger F - 1"));
    rep
}

/// Mirror coherence: the reflected diagram reads the table through its
/// conjugate, so the conjugate transpose must also be a right inverse,
/// `F F^dagger = 1`, on every block.
pub fn check_mirror(cat: &Category, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::new("mirror", tol);
    for_each_block(cat.ring(), |b, ms, ns| block_residual(cat, b, ms, ns, false, &mut rep, "F F^dagger - 1"));
    rep
}

/// The three keys related to `(F_i^{jkl})_{mn}` by tetrahedral symmetry, and
/// the dimension factor of the third relation.
pub fn tetra_partners(ring: &FusionRing, key: &FKey) -> [FKey; 3] {
    let [i, j, k, l, m, n] = *key;
    let d = |x| ring.dual(x);
    [[d(l), k, j, d(i), m, d(n)], [d(j), d(i), l, k, d(m), n], [d(i), d(m), k, d(n), d(j), d(l)]]
}

/// Tetrahedral symmetry
///
/// ```text
/// (F_i^{jkl})_{mn} = (F_{l*}^{k j i*})_{m n*} = (F_{j*}^{i* l k})_{m* n}
///                  = sqrt(d_m d_n / (d_j d_l)) (F_{i*}^{m* k n*})_{j* l*}
/// ```
///
/// on every admissible key. Violation keys are `[i, j, k, l, m, n, relation]`.
pub fn check_tetrahedral(cat: &Category, tol: f64) -> ValidationReport {
    let ring = cat.ring();
    let mut rep = ValidationReport::new("tetrahedral", tol);
    for key in ring.admissible_keys() {
        let [_, j, _, l, m, n] = key;
        let v = cat.fsymbols().get(&key);
        let partners = tetra_partners(ring, &key);
        let scale = (cat.d(m) * cat.d(n) / (cat.d(j) * cat.d(l))).sqrt();
        for (r, p) in partners.iter().enumerate() {
            let w = cat.fsymbols().get(p) * if r == 2 { scale } else { 1.0 };
            let mut k = key_indices(&key);
            k.push(r + 1);
            let reason = if ring.f_admissible(p) {
                format!("relation {} with partner {:?}", r + 1, key_indices(p))
            } else {
                format!("relation {}: partner {:?} has a zero-dimensional fusion space", r + 1, key_indices(p))
            };
            rep.record(k, (v - w).norm(), reason);
        }
    }
    rep
}

/// Combinatorial part of tetrahedral symmetry: every admissible key must have
/// admissible partners. Gauge independent. Violation keys are the six labels
/// of the admissible key.
pub fn tetra_admissible(ring: &FusionRing) -> ValidationReport {
    let mut rep = ValidationReport::new("tetra_admissible", 0.0);
    for key in ring.admissible_keys() {
        let bad: Vec<Vec<usize>> =
            tetra_partners(ring, &key).iter().filter(|p| !ring.f_admissible(p)).map(key_indices).collect();
        if !bad.is_empty() {
            rep.violate(key_indices(&key), format!("inadmissible tetrahedral partners {bad:?}"));
        }
    }
    rep
}

/// Every admissible entry with a vacuum among `j, k, l` equals 1.
pub fn check_vacuum_gauge(cat: &Category, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport::new("vacuum_gauge", tol);
    for key in cat.ring().admissible_keys() {
        if key[1..4].iter().any(|l| l.is_vacuum()) {
            let v = cat.fsymbols().get(&key);
            rep.record(key_indices(&key), (v - Complex64::new(1.0, 0.0)).norm(), "vacuum entry must be 1");
        }
    }
    rep
}

/// Admissible keys missing from the table. Categories without F data are
/// treated as ring-only and skip this check.
pub fn check_completeness(cat: &Category) -> ValidationReport {
    let mut rep = ValidationReport::new("f_complete", 0.0);
    for key in cat.ring().admissible_keys() {
        if !cat.fsymbols().contains(&key) {
            rep.violate(key_indices(&key), "admissible key has no F entry");
        }
    }
    rep
}

/// Runs ring, dims, pentagon, unitarity and mirror checks in that order.
pub fn validate_all(cat: &Category, tol: f64) -> Vec<ValidationReport> {
    vec![
        validate_ring(cat.ring()),
        validate_dims(cat.ring(), cat.dims(), tol),
        check_pentagon(cat, tol),
        check_unitarity(cat, tol),
        check_mirror(cat, tol),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins::{self, fibonacci_ring};
    use std::collections::BTreeMap;

    #[test]
    fn builtin_rings_pass() {
        for name in builtins::NAMES {
            let c = builtins::by_name(name).unwrap();
            let r = validate_ring(c.ring());
            assert!(r.passed, "{name}: {r}");
        }
    }

    #[test]
    fn fibonacci_without_pairing_fails() {
        let r = fibonacci_ring();
        let triples = r.triples().into_iter().filter(|t| *t != [Label(1), Label(1), Label(0)]);
        let broken = FusionRing::new(vec![Label(0), Label(1)], triples).unwrap();
        let rep = validate_ring(&broken);
        assert!(!rep.passed);
        assert!(rep.violations.iter().any(|v| v.key == vec![1, 1, 0]));
    }

    #[test]
    fn wrong_fibonacci_dimension_reports_residual() {
        let rep = validate_dims(&fibonacci_ring(), &QuantumDims::new(vec![1.0, 1.7]), 1e-9);
        assert!(!rep.passed);
        assert!((rep.worst_residual - 0.19).abs() < 1e-12, "{}", rep.worst_residual);
    }

    #[test]
    fn toric_pentagon_is_exact() {
        let rep = check_pentagon(&builtins::toric_code(), 1e-9);
        assert!(rep.passed);
        assert_eq!(rep.worst_residual, 0.0);
    }

    #[test]
    fn builtins_pass_numeric_checks() {
        for c in builtins::with_f_data().into_iter().chain([builtins::vec_z3_twisted()]) {
            for rep in validate_all(&c, 1e-9) {
                assert!(rep.passed, "{}: {rep}", c.name());
            }
            assert!(check_vacuum_gauge(&c, 1e-12).passed, "{}", c.name());
            assert!(check_completeness(&c).passed, "{}", c.name());
        }
    }

    #[test]
    fn serial_and_parallel_pentagon_agree() {
        let c = builtins::ising();
        assert_eq!(check_pentagon_with(&c, 1e-9, Exec::Serial), check_pentagon_with(&c, 1e-9, Exec::Parallel));
    }

    #[test]
    fn fibonacci_sign_flip_breaks_unitarity() {
        let c = builtins::fibonacci();
        let t = Label(1);
        let mut e: BTreeMap<_, _> = c.fsymbols().entries().clone();
        let key = [t; 6];
        e.insert(key, -e[&key]);
        let bad = c.with_fsymbols(e).unwrap();
        assert!(!check_unitarity(&bad, 1e-9).passed);
        assert!(!check_pentagon(&bad, 1e-9).passed);
    }

    #[test]
    fn h3_key_has_inadmissible_partners() {
        let rep = tetra_admissible(&builtins::h3_ring());
        assert!(!rep.passed);
        assert!(rep.violations.iter().any(|v| v.key == vec![3, 0, 1, 5, 1, 3]));
    }

    #[test]
    fn symmetric_rings_are_tetra_admissible() {
        for c in builtins::with_f_data() {
            assert!(tetra_admissible(c.ring()).passed, "{}", c.name());
        }
    }

    #[test]
    fn standard_gauges_are_tetrahedral() {
        for c in builtins::with_f_data() {
            let rep = check_tetrahedral(&c, 1e-12);
            assert!(rep.passed, "{}: {rep} {:?}", c.name(), rep.violations.first());
        }
    }

    #[test]
    fn twisted_z3_is_not_tetrahedral() {
        assert!(!check_tetrahedral(&builtins::vec_z3_twisted(), 1e-9).passed);
    }
}
