//! Hartman–Watson density, laws of exponential functionals of Brownian motion
//! and of Bessel clocks, with quadrature and Monte Carlo cross-checks.

pub mod bessel_law;
pub mod error;
pub mod exp_law;
pub mod identities;
pub mod mc;
pub mod quad;
pub mod special;
pub mod theta;

pub use bessel_law::{BesselParams, DFunction};
pub use error::{Error, Result};
pub use exp_law::{DensityMethod, ExpFunctionalLaw, LaplaceForm, NormConstant};
pub use identities::{FGPair, IdentityRecord};
pub use mc::{ClockEnsemble, MeanEstimate, PathConfig, PathEnsemble};
pub use quad::{IntegralEstimate, QuadratureConfig, TabulatedCdf, T_MIN};
pub use theta::{IdentityCheck, ThetaPoint, ThetaRep};
