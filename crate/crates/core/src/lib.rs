//! Pseudo-spectral periodic-box solver for barotropic, inhomogeneous
//! incompressible, fully compressible and ideal MHD flows, together with
//! the helicity, cross-helicity, potential-vorticity and energy budget
//! diagnostics evaluated on its states.

pub mod cli_io;
pub mod diagnostics;
pub mod eos;
pub mod error;
pub mod oracle;
pub mod spectral;
pub mod system;

pub use error::{Error, Result};
pub use spectral::{Grid, ScalarField, SpectralField, VectorField};
pub use eos::Eos;
pub use cli_io::{load_config, RunConfig};
pub use system::{SystemKind, SystemState, Tendency};
