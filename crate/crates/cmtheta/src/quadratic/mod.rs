//! Arithmetic of imaginary quadratic orders: binary quadratic forms and
//! ring class groups, their character groups, invertible ideals, weight-one
//! theta series, the two-variable optimal form, and its reconstruction from
//! one-variable data.

pub mod chars;
pub mod forms;
pub mod ideals;
pub mod optform;
pub mod reconstruct;
pub mod theta;

pub use chars::{characters_of_order, conductor, m_of_xi, pushforward_map, ClassChar};
pub use forms::{class_number_formula, split_discriminant, ClassGroup, Form};
pub use ideals::{Ideal, QuadElem, QuadOrder};
pub use optform::{OptForm, OptKnobs};
pub use reconstruct::reconstruct_opt;
pub use theta::theta_coefficients;
