//! Periodic grid, Fourier transforms and exact spectral differential
//! operators.

mod field;
mod grid;
mod ops;

pub use field::{ScalarField, SpectralField, VectorField};
pub use grid::{make_grid, Grid, MIN_POINTS};
pub(crate) use ops::inverse_laplacian_spectral;
pub use ops::{
    curl, dealias, divergence, gradient, inverse_laplacian_zero_mean, laplacian, leray_project,
    partial, volume_integral, ZERO_MEAN_TOLERANCE,
};
