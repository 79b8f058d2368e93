//! KMS states on Toeplitz algebras of finite higher-rank graphs with
//! reducible vertex matrices: component structure, spectral data,
//! equilibrium states for the preferred dynamics, and path-level oracles
//! for concrete 2-graphs.

#![forbid(unsafe_code)]

pub mod classifier;
pub mod fixtures;
pub mod input;
pub mod kms;
pub mod matrix;
pub mod path2;
pub mod skeleton;
pub mod spectral;
pub mod structure;
