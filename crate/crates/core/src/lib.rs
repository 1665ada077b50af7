//! Algebraic simulation of one-dimensional cellular automata over prime fields.

pub mod affine;
pub mod algebra;
pub mod caps;
pub mod error;
pub mod format;
pub mod linalg;
pub mod render;
pub mod simulation;

pub use affine::{are_isomorphic, fit_affine, is_affine_up_to_iso, AffineAlgebra, CanonicalAdditive};
pub use algebra::{Boundary, Congruence, LocalAlgebra, SpaceTimeDiagram, StateMap};
pub use caps::Caps;
pub use error::{Error, Result};
