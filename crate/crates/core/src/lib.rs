//! Core algorithms for the lesionbench benchmark: raster operators, seeded
//! lesion synthesis, scene composition, and heat-map scoring.
//!
//! Everything in this crate is a pure function of its inputs. Randomness only
//! enters through explicit 64-bit seeds (see [`rng`]), so identical seeds give
//! bit-identical results regardless of threading or platform. The crate is
//! `no_std` (with `alloc`); all IO, file formats, and the command-line tool
//! live in the companion `lesionbench` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod lesion;
pub mod raster;
pub mod rng;
pub mod scene;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
