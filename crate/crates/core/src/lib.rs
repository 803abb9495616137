//! Billiards inside an ellipsoid in three-dimensional Minkowski space.
//!
//! The crate has a numeric half (Minkowski geometry, confocal quadrics,
//! the billiard simulator, hyperelliptic integrals) and an exact half
//! (Taylor series of the square root of the spectral polynomial, Hankel
//! rank conditions for periodicity, polynomial Pell equations). The
//! [`search`] module ties them together.

pub mod billiard;
pub mod conditions;
pub mod confocal;
pub mod error;
pub mod exact;
pub mod export;
pub mod mink;
pub mod pell;
pub mod search;

pub use billiard::{BounceRecord, PeriodSignature, SurfaceComponent, Trajectory};
pub use confocal::{CausticCase, CausticPair, Ellipsoid, EllipticCoords, Gamma2, QuadricType};
pub use error::{ConditionError, GeomError, PellError, SearchError};
pub use mink::{LineType, Vec3M};
