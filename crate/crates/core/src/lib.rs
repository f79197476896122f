//! Lorenz, Galerkin-expansion and pseudospectral models of two-dimensional
//! Rayleigh-Benard convection between free-slip, isothermal walls, with
//! projections between them, energy diagnostics and attractor analysis.

pub mod analysis;
pub mod diagnostics;
pub mod dns;
pub mod error;
pub mod gele;
pub mod ic;
pub mod imex;
pub mod io;
pub mod lorenz;
pub mod model;
pub mod params;
pub mod rng;
pub mod spectral;
pub mod trajectory;

pub use error::{Error, Result};
pub use params::{t_of_tau, tau_of_t, Params};
pub use spectral::{ModeIndex, SpectralState};
