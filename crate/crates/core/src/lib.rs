//! Two giant atoms, each coupled to a coupled-resonator waveguide at two
//! sites and to each other through a phase-carrying exchange.
//!
//! * [`model`]: parameters, geometry, validation.
//! * [`markov`]: the 2x2 effective generator, its spectrum and dynamics.
//! * [`lattice`]: the full single-excitation lattice Hamiltonian.
//! * [`bic`]: bound states in the continuum and atomic entanglement.

pub mod bic;
pub mod error;
pub mod lattice;
pub mod markov;
pub mod model;

pub use error::{Error, Result};
pub use model::{Geometry, ModelParams};
