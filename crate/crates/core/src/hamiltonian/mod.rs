//! Vertex and plaquette operators, their sparse assembly into the
//! Hamiltonian, and the original Levin-Wen flux operator used as a cross-check.

pub mod assemble;
pub mod lw;
pub mod plaquette;
pub mod sparse;

pub use assemble::{
    assemble_hamiltonian, build_basis, plaquette_operator, vertex_operator, AssembleOptions, DanglingPolicy,
    Hamiltonian, Sector,
};
pub use lw::lw_bp_s_element;
pub use plaquette::{bp_block, bp_s_block, bp_s_element, qv_element, LoopSum, PlaquetteBlock};
pub use sparse::{Basis, SparseOperator};
