//! Exact finite Heisenberg groups, Heisenberg and Weil representations over
//! cyclotomic fields, Mackey-theory checks on finite groups, and square roots
//! in congruence subgroups of `GL_n(Z/p^K)`.

pub mod error;
pub mod group;
pub mod heisenberg;
pub mod linalg;
pub mod mackey;
pub mod modular;
pub mod prounipotent;
pub mod reps;
pub mod scalar;
pub mod symplectic;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
pub use scalar::{CycField, CycNumber};
