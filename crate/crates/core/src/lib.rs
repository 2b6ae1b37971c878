//! Transient tunneling through one-dimensional multibarrier structures
//! after the sudden opening of a shutter.
//!
//! The building blocks, bottom up:
//!
//! * [`model`]: layered potentials, constants, units (eV, nm, ps);
//! * [`scattering`]: transfer matrices, T(E) and the stationary wave Φ(x, k);
//! * [`poles`]: S-matrix poles located by complex Newton refinement;
//! * [`resonant`]: normalized resonant states u_n(x) and the factors ρ_n;
//! * [`mfunc`]: the Faddeeva function and the Moshinsky M-functions;
//! * [`dynamics`]: the full pole-expansion solution and its doublet form;
//! * [`two_level`]: the closed-form two-level density and its frequencies.

pub mod dynamics;
pub mod error;
pub mod mfunc;
pub mod model;
pub mod poles;
pub mod resonant;
pub mod scattering;
pub mod two_level;

pub use error::{Error, Result};
pub use model::{PhysicalConstants, PotentialProfile};
pub use poles::ResonancePole;
