//! Hyperterminants, hyperasymptotic expansions of the scaled gamma
//! function, and the smooth higher-order Stokes transitions they exhibit.

pub mod coeffs;
pub mod error;
pub mod num;
pub mod surface;

pub use error::{Error, Result};
pub use num::Complex;
pub use surface::{Angle, Precision, SurfacePoint};
pub mod hyper;
pub mod reference;
pub mod quad;
pub mod terminants;
pub mod smoothing;
