//! Triangular paperfolding patterns: generation, substitution, exact spectra,
//! local reconstruction and measurement.

pub mod analysis;
pub mod folding;
pub mod io;
pub mod lattice;
pub mod patch;
pub mod render;
pub mod spectral;
pub mod substitution;
pub mod tiling;
pub mod unfold_sim;
