//! Independent checks: the exact affine decision, the transfer-operation
//! lemma harness, and the exhaustive census of small operation tables.

pub mod affine;
pub mod census;
pub mod lemma;
