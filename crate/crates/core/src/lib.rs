//! Bifurcating triple-periodic standing waves of a two-dimensional
//! Boussinesq system on a general lattice.
//!
//! Fields are finite Fourier sums over the lattice spanned by
//! `P1 = k1 (1, tau1)` and `P2 = k2 (1, -tau2)`, with `cos qt` (height) and
//! `sin qt` (velocity) time dependence. All algebra is exact in coefficient
//! space.

pub mod bifurcation;
pub mod error;
pub mod lattice;
pub mod linop;
pub mod presets;
pub mod spectral;
pub mod synthesis;
pub mod verify;

pub use bifurcation::{
    cubic_coefficients, second_order_coefficients, solve_amplitudes, solve_amplitudes_with,
    Amplitudes, BifurcationCoefficients, BranchPoint, CubicCoefficients, L3Convention,
    Normalization,
};
pub use error::{Error, Result};
pub use lattice::{LatticeConfig, ModeIndex, ResonanceSet, WaveVector, DEFAULT_EPS_RES};
pub use spectral::{ForcingField, ResidualField, SpectralField};
pub use synthesis::{synthesize, Order, StandingWaveSolution};
