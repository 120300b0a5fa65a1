//! Serial against rayon-parallel execution for the main sweeps.
//!
//! Without the `parallel` feature both variants run on one thread.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use stringnet::category::builtins;
use stringnet::category::validate::check_pentagon_with;
use stringnet::hamiltonian::plaquette::{all_external_tuples, plaquette_blocks};
use stringnet::hamiltonian::{assemble_hamiltonian, AssembleOptions, DanglingPolicy, LoopSum, Sector};
use stringnet::lattice::{build_patch, Boundary};
use stringnet::Exec;

const MODES: [(&str, Exec); 2] = [("serial", Exec::Serial), ("parallel", Exec::Parallel)];

fn block_sweep(c: &mut Criterion) {
    let ising = builtins::ising();
    let exts = all_external_tuples(ising.num_labels());
    let mut g = c.benchmark_group("ising_block_sweep");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| plaquette_blocks(&ising, black_box(&exts), LoopSum::Weighted, exec))
        });
    }
    g.finish();
}

fn pentagon(c: &mut Criterion) {
    let ising = builtins::ising();
    let mut g = c.benchmark_group("ising_pentagon");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| check_pentagon_with(black_box(&ising), 1e-9, exec))
        });
    }
    g.finish();
}

fn assembly_and_matvec(c: &mut Criterion) {
    let ising = builtins::ising();
    let patch = build_patch(2, 2, Boundary::Torus).unwrap();
    let mut asm = c.benchmark_group("ising_torus_assembly");
    asm.sample_size(10);
    for (name, exec) in MODES {
        let mut opts = AssembleOptions::new(Sector::BranchingValid, DanglingPolicy::Free);
        opts.exec = exec;
        asm.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assemble_hamiltonian(&ising, black_box(&patch), &opts).unwrap())
        });
    }
    asm.finish();

    let h = assemble_hamiltonian(&ising, &patch, &AssembleOptions::new(Sector::BranchingValid, DanglingPolicy::Free))
        .unwrap();
    let x: Vec<Complex64> = (0..h.op.dim()).map(|i| Complex64::new((i as f64).sin(), (i as f64).cos())).collect();
    let mut mv = c.benchmark_group("ising_torus_matvec");
    for (name, exec) in MODES {
        mv.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| h.op.apply_with(black_box(&x), exec).unwrap())
        });
    }
    mv.finish();
}

criterion_group!(benches, block_sweep, pentagon, assembly_and_matvec);
criterion_main!(benches);
