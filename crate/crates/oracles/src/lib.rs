//! Reference implementations used only by tests.
//!
//! Nothing here shares code with the production crate: the Faddeeva oracle
//! works in arbitrary precision, and the Crank–Nicolson solver integrates
//! the time-dependent equation on a grid.

pub mod crank_nicolson;
pub mod faddeeva;
pub mod free_shutter;
