//! Whole-patch checks: spectra, ground-state counting and frame re-anchoring.

mod common;

use std::sync::Arc;

use stringnet::hamiltonian::assemble::{assemble_on_basis, plaquette_operator_for_frame};
use stringnet::hamiltonian::{
    assemble_hamiltonian, build_basis, AssembleOptions, DanglingPolicy, LoopSum, Sector, SparseOperator,
};
use stringnet::lattice::{build_patch, Boundary};
use stringnet::spectrum::{all_eigenvalues_dense, eigensolve, ground_degeneracy, Method};
use stringnet::string_op::{commutator_residual, string_operator, unit_omegas, StringPath};
use stringnet::{Exec, Label};

fn hexagon_hamiltonian(name: &str, sector: Sector) -> stringnet::hamiltonian::Hamiltonian {
    let cat = common::load(name);
    let patch = build_patch(1, 1, Boundary::Open).unwrap();
    assemble_hamiltonian(&cat, &patch, &AssembleOptions::new(sector, DanglingPolicy::Free)).unwrap()
}

#[test]
fn hexagon_spectra_are_integers_in_range() {
    // H = -(sum of 6 + 1 commuting projectors)
    for name in ["toric_code", "vec_z3", "fibonacci", "ising"] {
        let h = hexagon_hamiltonian(name, Sector::BranchingValid);
        let ev = all_eigenvalues_dense(&h.op).unwrap();
        assert!((ev[0] + 7.0).abs() < 1e-8, "{name}: {}", ev[0]);
        for x in ev {
            assert!((-7.0 - 1e-8..=1e-8).contains(&x), "{name}: {x}");
            assert!((x - x.round()).abs() < 1e-6, "{name}: {x}");
        }
    }
}

#[test]
fn toric_hexagon_ground_space_counts_leg_sectors() {
    // dense oracle: one ground state per even-parity assignment of the six legs
    let h = hexagon_hamiltonian("toric_code", Sector::All);
    let dense = eigensolve(&h.op, 64, Method::Dense).unwrap();
    assert_eq!(dense.ground_degeneracy, 32);
    assert_eq!(ground_degeneracy(&h.op).unwrap(), 32);
}

/// Ground-state degeneracy on a torus equals the number of simple objects of
/// the Drinfeld center: 4 for Z2, 9 for Z3, 4 for Fibonacci, 9 for Ising.
#[test]
fn torus_ground_degeneracy_counts_anyons() {
    let torus = build_patch(2, 2, Boundary::Torus).unwrap();
    for (name, gsd) in [("toric_code", 4), ("vec_z3", 9), ("fibonacci", 4), ("ising", 9)] {
        let cat = common::load(name);
        let h = assemble_hamiltonian(&cat, &torus, &AssembleOptions::new(Sector::BranchingValid, DanglingPolicy::Free))
            .unwrap();
        assert_eq!(ground_degeneracy(&h.op).unwrap(), gsd, "{name}");
        let res = eigensolve(&h.op, gsd + 1, Method::Iterative).unwrap();
        assert_eq!(res.ground_degeneracy, gsd, "{name}");
        // 8 vertices and 4 plaquettes
        assert!((res.ground_energy + 12.0).abs() < 1e-8, "{name}: {}", res.ground_energy);
    }
}

#[test]
fn reanchored_frames_give_the_same_spectrum() {
    let patch = build_patch(1, 1, Boundary::Open).unwrap();
    for cat in common::standard_files() {
        let basis =
            Arc::new(build_basis(&cat, &patch, Sector::BranchingValid, &DanglingPolicy::Free, u128::MAX).unwrap());
        let frame = &patch.plaquettes[0];
        let reference = all_eigenvalues_dense(
            &plaquette_operator_for_frame(&cat, &basis, frame, LoopSum::Weighted, Exec::default()).unwrap(),
        )
        .unwrap();
        for k in 1..6 {
            let rotated = frame.rotated(k);
            let bp = plaquette_operator_for_frame(&cat, &basis, &rotated, LoopSum::Weighted, Exec::default()).unwrap();
            let ev = all_eigenvalues_dense(&bp).unwrap();
            assert_eq!(ev.len(), reference.len());
            for (a, b) in ev.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-8, "{} rotation {k}: {a} vs {b}", cat.name());
            }
            let h = assemble_on_basis(&cat, &patch, basis.clone(), &[rotated], Exec::default()).unwrap();
            assert!((all_eigenvalues_dense(&h.op).unwrap()[0] + 7.0).abs() < 1e-8);
        }
    }
}

#[test]
fn hexagon_string_commutes_with_hamiltonian() {
    // the hexagonal W^s equals B_p^s, which commutes with every term of H
    let patch = build_patch(1, 1, Boundary::Open).unwrap();
    let path = StringPath::hexagon(&patch, 0).unwrap();
    for cat in common::standard_files() {
        let h = assemble_hamiltonian(&cat, &patch, &AssembleOptions::new(Sector::BranchingValid, DanglingPolicy::Free))
            .unwrap();
        for s in cat.labels() {
            let w = string_operator(&cat, &patch, &h.basis, &path, s, &unit_omegas(6), Exec::default()).unwrap();
            assert!(commutator_residual(&w, &h.op).unwrap() < 1e-12, "{} s={}", cat.name(), s.0);
        }
    }
}

#[test]
fn string_targets_stay_branching_valid() {
    let patch = build_patch(1, 1, Boundary::Open).unwrap();
    let path = StringPath::hexagon(&patch, 0).unwrap();
    for name in ["toric_code", "fibonacci"] {
        let cat = common::load(name);
        let basis = Arc::new(build_basis(&cat, &patch, Sector::All, &DanglingPolicy::Free, u128::MAX).unwrap());
        let valid =
            Arc::new(build_basis(&cat, &patch, Sector::BranchingValid, &DanglingPolicy::Free, u128::MAX).unwrap());
        for s in cat.labels() {
            let w = string_operator(&cat, &patch, &basis, &path, s, &unit_omegas(6), Exec::default()).unwrap();
            for (r, c, _) in w.triplets() {
                assert!(valid.index_of(basis.code(r)).is_some(), "{name}: invalid target");
                assert!(valid.index_of(basis.code(c)).is_some(), "{name}: invalid source acted on");
            }
        }
    }
}

#[test]
fn two_hexagon_sector_matches_vertex_rules() {
    let patch = build_patch(2, 1, Boundary::Open).unwrap();
    let cat = common::load("fibonacci");
    let basis = build_basis(&cat, &patch, Sector::BranchingValid, &DanglingPolicy::Free, u128::MAX).unwrap();
    let brute = (0..1u64 << patch.num_edges())
        .filter(|&code| {
            let labels: Vec<Label> =
                (0..patch.num_edges()).map(|e| Label(((code >> (patch.num_edges() - 1 - e)) & 1) as u8)).collect();
            patch.vertices.iter().all(|v| {
                let [x, y, z] = stringnet::hamiltonian::assemble::incoming_labels(&cat, v, &labels);
                cat.ring().vertex_allowed(x, y, z)
            })
        })
        .count();
    assert_eq!(basis.dim(), brute);
    assert_eq!(brute, 7985);
}

#[test]
fn dimension_cap_is_enforced() {
    let cat = common::load("ising");
    let patch = build_patch(2, 2, Boundary::Open).unwrap();
    let mut opts = AssembleOptions::new(Sector::All, DanglingPolicy::Free);
    opts.cap = 1 << 20;
    let err = assemble_hamiltonian(&cat, &patch, &opts).unwrap_err();
    assert_eq!(err.kind(), "dimension_cap");
}

#[test]
fn parallel_and_serial_assembly_agree() {
    let cat = common::load("ising");
    let patch = build_patch(1, 1, Boundary::Open).unwrap();
    let mut opts = AssembleOptions::new(Sector::BranchingValid, DanglingPolicy::Free);
    opts.exec = Exec::Serial;
    let a = assemble_hamiltonian(&cat, &patch, &opts).unwrap();
    opts.exec = Exec::Parallel;
    let b = assemble_hamiltonian(&cat, &patch, &opts).unwrap();
    let diff: SparseOperator = a.op.sub(&b.op).unwrap();
    assert_eq!(diff.nnz(), 0);
}
