//! Numerical linear canonical transform (LCT) toolkit.
//!
//! * [`lct`]: unimodular parameters and the quadrature transform with its inverse.
//! * [`conv`]: the chirp-weighted convolution `*^A` and its product theorem.
//! * [`delta`]: delta sequences, their axioms and spectral limits.
//! * [`boehmian`]: finite truncations of quotients of sequences and the LCT on them.
//! * [`verify`]: numerical checks of each identity, collected in a registry.

pub mod boehmian;
pub mod conv;
pub mod delta;
pub mod error;
pub mod lct;
pub mod signal;
pub mod verify;

pub use error::{LctError, Result};
pub use lct::{invert_params, lct_inverse, lct_transform, make_params, special_params, LctParams, SpecialKind};
pub use signal::{Grid, SampledSignal};

pub use num_complex::Complex64;
