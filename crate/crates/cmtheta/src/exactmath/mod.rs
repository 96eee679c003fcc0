//! Exact arithmetic kernels: cyclotomic integers in power basis, residue
//! rings with Smith-form linear solving, small finite fields, arbitrary
//! precision complex numbers, and positive definite lattice enumeration.

pub mod bigc;
pub mod cyc;
pub mod ff;
pub mod lattice;
pub mod residue;

pub use bigc::{min_poly_from_roots, BigComplex};
pub use cyc::{Cyc, CycMod};
pub use ff::{discrete_log, primitive_root, Fp2};
pub use lattice::PosDefLattice;
pub use residue::ResidueRing;
