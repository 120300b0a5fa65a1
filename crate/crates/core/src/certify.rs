//! Numerical certificates for the plaquette operator: hermiticity,
//! idempotency, commutativity and agreement with the original Levin-Wen
//! construction when the category admits it.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::category::symbols::to_lw_fsymbols;
use crate::category::validate::check_tetrahedral;
use crate::category::{Category, Label};
use crate::error::{Error, Result};
use crate::hamiltonian::plaquette::{all_external_tuples, plaquette_blocks, valid_internal_configs};
use crate::hamiltonian::{
    bp_s_element, build_basis, lw_bp_s_element, plaquette_operator, vertex_operator, DanglingPolicy, LoopSum, Sector,
};
use crate::lattice::{build_patch, Boundary};
use crate::par::{self, Exec};
use crate::report::ValidationReport;

fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn key(labels: &[Label]) -> Vec<usize> {
    labels.iter().map(|l| l.idx()).collect()
}

fn require_f(cat: &Category) -> Result<()> {
    if cat.has_f_data() {
        Ok(())
    } else {
        Err(Error::Structure(format!("category `{}` has no F-symbols", cat.name())))
    }
}

/// Hermiticity, idempotency and {0,1} spectrum of every single-hexagon block.
pub fn certify_blocks(cat: &Category, tol: f64, exec: Exec) -> Result<Vec<ValidationReport>> {
    require_f(cat)?;
    let exts = all_external_tuples(cat.num_labels());
    let blocks = plaquette_blocks(cat, &exts, LoopSum::Weighted, exec);
    let residuals = par::map(exec, &blocks, |b| {
        let m = b.dense();
        if m.is_empty() {
            return (0.0, 0.0, 0.0);
        }
        let herm = inf_norm(&(&m - m.adjoint()));
        let idem = inf_norm(&(&m * &m - &m));
        let offset =
            SymmetricEigen::new(m).eigenvalues.iter().map(|x| x.abs().min((x - 1.0).abs())).fold(0.0, f64::max);
        (herm, idem, offset)
    });
    let mut herm = ValidationReport::new("bp_hermiticity", tol);
    let mut idem = ValidationReport::new("bp_idempotency", tol);
    let mut spec = ValidationReport::new("bp_spectrum", tol);
    for (ext, (h, i, o)) in exts.iter().zip(residuals) {
        herm.record(key(ext), h, "||B - B^dagger||_inf");
        idem.record(key(ext), i, "||B^2 - B||_inf");
        spec.record(key(ext), o, "eigenvalue away from {0,1}");
    }
    Ok(vec![herm, idem, spec])
}

/// `[B_p1, B_p2]` on two adjacent hexagons and `[Q_v, B_p]` on one hexagon.
///
/// The vertex check runs on the unrestricted space, where `Q_v` is not the
/// identity, and demands exact zero.
pub fn certify_commutativity(cat: &Category, tol: f64, exec: Exec) -> Result<Vec<ValidationReport>> {
    require_f(cat)?;
    let two = build_patch(2, 1, Boundary::Open)?;
    let basis = Arc::new(build_basis(cat, &two, Sector::BranchingValid, &DanglingPolicy::Free, u128::MAX)?);
    let b1 = plaquette_operator(cat, &two, &basis, 0, exec)?;
    let b2 = plaquette_operator(cat, &two, &basis, 1, exec)?;
    let mut bb = ValidationReport::new("plaquette_commutator", tol);
    bb.record(vec![0, 1], b1.commutator(&b2)?.norm_inf(), "||[B_p1, B_p2]||_inf");

    let one = build_patch(1, 1, Boundary::Open)?;
    let full = Arc::new(build_basis(cat, &one, Sector::All, &DanglingPolicy::Free, u128::MAX)?);
    let bp = plaquette_operator(cat, &one, &full, 0, exec)?;
    let mut qb = ValidationReport::new("vertex_plaquette_commutator", 0.0);
    for v in 0..one.num_vertices() {
        let q = vertex_operator(cat, &one, &full, v)?;
        qb.record(vec![v], q.commutator(&bp)?.norm_inf(), "||[Q_v, B_p]||_inf");
    }
    Ok(vec![bb, qb])
}

/// Element-wise agreement of the generalized and original plaquette terms.
///
/// Returns `None` when the category is not tetrahedrally symmetric, since the
/// original construction does not apply there.
pub fn certify_lw_equivalence(cat: &Category, tol: f64, exec: Exec) -> Result<Option<ValidationReport>> {
    require_f(cat)?;
    if !check_tetrahedral(cat, tol).passed {
        return Ok(None);
    }
    let lw = to_lw_fsymbols(cat, tol)?;
    let exts = all_external_tuples(cat.num_labels());
    let worst = par::map(exec, &exts, |ext| {
        let configs = valid_internal_configs(cat.ring(), ext);
        let mut worst: f64 = 0.0;
        for old in &configs {
            for new in &configs {
                for s in cat.labels() {
                    let a = bp_s_element(cat, s, ext, old, new);
                    let b = lw_bp_s_element(cat, &lw, s, ext, old, new);
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst
    });
    let mut rep = ValidationReport::new("lw_equivalence", tol);
    for (ext, w) in exts.iter().zip(worst) {
        rep.record(key(ext), w, "generalized and original elements differ");
    }
    Ok(Some(rep))
}

/// The whole suite in a fixed order.
pub fn certify_all(cat: &Category, tol: f64, exec: Exec) -> Result<Vec<ValidationReport>> {
    let mut out = certify_blocks(cat, tol, exec)?;
    out.extend(certify_commutativity(cat, tol, exec)?);
    out.extend(certify_lw_equivalence(cat, tol, exec)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins;

    #[test]
    fn toric_code_passes_everything() {
        let reps = certify_all(&builtins::toric_code(), 1e-9, Exec::default()).unwrap();
        let names: Vec<_> = reps.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(
            names,
            [
                "bp_hermiticity",
                "bp_idempotency",
                "bp_spectrum",
                "plaquette_commutator",
                "vertex_plaquette_commutator",
                "lw_equivalence"
            ]
        );
        assert!(reps.iter().all(|r| r.passed));
    }

    #[test]
    fn twisted_z3_skips_lw_equivalence() {
        let tw = builtins::vec_z3_twisted();
        assert!(certify_lw_equivalence(&tw, 1e-9, Exec::default()).unwrap().is_none());
        assert!(certify_blocks(&tw, 1e-9, Exec::default()).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn ring_only_category_is_refused() {
        assert_eq!(certify_all(&builtins::h3(), 1e-9, Exec::default()).unwrap_err().kind(), "structure");
    }
}
