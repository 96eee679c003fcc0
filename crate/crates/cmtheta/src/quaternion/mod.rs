//! The definite quaternion side: algebras ramified at one prime, maximal
//! orders, right ideal classes, Brandt matrices, optimal embeddings of
//! quadratic orders, and the degree-two theta lift.

pub mod alg;
pub mod brandt;
pub mod classes;
pub mod embed;
pub mod lat;

pub use alg::{hilbert_symbol, hilbert_symbol_inf, QuatAlg, Q4};
pub use brandt::BrandtModule;
pub use classes::{ideal_classes, maximal_order, ClassSet};
pub use embed::EmbeddedClassSet;
pub use lat::QLat;
