//! Separating groupoid terms: term trees and unification, finite and affine
//! GF(2) groupoids, separator synthesis, and exhaustive verification.

pub mod cayley;
pub mod cli;
pub mod demo;
pub mod error;
pub mod gf2;
pub mod synth;
pub mod term;
pub mod unify;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
