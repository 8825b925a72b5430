//! Steady-state polaron-transformed Redfield model of a three-level
//! quantum heat engine with a phonon-coupled excited manifold.
//!
//! Pipeline: [`bath`] → [`rates`] → [`tls`] / [`three_level`] →
//! [`observables`], composed per parameter point in [`sweep`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bath;
pub mod config;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod quadrature;
pub mod rates;
pub mod special;
pub mod sweep;
pub mod system;
pub mod three_level;
pub mod tls;
pub mod validate;

pub use bath::{BathExponent, PhononBath};
pub use config::{load_config, parse_config};
pub use error::{PtreError, Result};
pub use observables::{FluxReport, Regime};
pub use quadrature::QuadratureConfig;
pub use rates::{PolaronFrame, RateSet};
pub use sweep::{run_point, run_sweep, solve_point, ResultRow, SweepConfig};
pub use system::SystemParams;
pub use three_level::{PhotonBath, ThreeLevelState};
pub use tls::{BlochVector, LimitKind};
