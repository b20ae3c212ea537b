//! Construction and rigid-folding analysis of monohedral quadrilateral origami
//! tessellations.
//!
//! The crate is organised bottom-up:
//!
//! * [`pattern`] builds crease patterns (Miura-ori, Chicken Wire and generic
//!   tilings generated by half-turns about tile edge midpoints).
//! * [`vertex`] holds degree-4 vertex kinematics: folding multipliers, local
//!   folding modes, bird's-foot checks and folding-angle transfer.
//! * [`configspace`] analyses the configuration space at the flat state:
//!   first-order constraints, tangent-space dimension and global folding modes.
//! * [`selffold`] decides unique self-foldability and synthesises driving forces.
//! * [`sim`] propagates a mode into a 1-DOF folding path and reconstructs the
//!   folded state in 3D.
//! * [`io`] reads and writes FOLD files, SVG drawings and JSON reports, and
//!   hosts the command-line front end.
//!
//! Folding angles are signed: positive is a valley fold, negative a mountain
//! fold. All angles are radians internally.

pub mod configspace;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pattern;
pub mod selffold;
pub mod sim;
pub mod vertex;

pub use error::{Error, Result};
