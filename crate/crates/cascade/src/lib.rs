//! Polarization-resolved two-photon correlations of a four-level
//! biexciton-exciton cascade.
//!
//! The crate has two independent computational routes to the same physics:
//!
//! - closed-form solutions of the cascade master equation ([`dynamics`]) and
//!   the intensity-intensity correlation functions built from them
//!   ([`correlation`]);
//! - a brute-force numerical route ([`oracle`]) that assembles the full
//!   Liouvillian, integrates it with fixed-step RK4, and obtains two-time
//!   correlations by conditioned-state evolution.
//!
//! The two never share code beyond the parameter types, so agreement between
//! them is a meaningful check. [`rates`] owns the physical parameter set and
//! [`polarization`] the analyzer settings.

pub mod correlation;
pub mod dynamics;
mod numeric;
pub mod oracle;
pub mod polarization;
pub mod rates;

pub use correlation::{CorrelationDegree, CorrelationKernel, EmissionPrefactor, G2Curve};
pub use dynamics::CascadeState;
pub use polarization::{BasisPair, PolarizerSetting};
pub use rates::{DerivedRates, RateParams};
