//! A toolkit for tanglegrams: pairs of rooted binary trees joined by a
//! perfect matching on their leaves.
//!
//! The crate models tanglegrams and their induced substructures, computes
//! exact tangle crossing numbers by branch and bound, detects the
//! cross-responsible 4-edge obstructions that certify nonplanarity, builds
//! certified one-crossing layouts for tanglegrams with a unique obstruction,
//! generates random and structured families, and reads, writes, and renders
//! the plain-text interchange format.

pub mod construct;
pub mod detect;
pub mod gen;
pub mod io;
pub mod layout;
pub mod model;
