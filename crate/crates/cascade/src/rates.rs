//! Physical parameters of the four-level cascade and the composite rates every
//! closed-form expression consumes.
//!
//! All rates are half the observable exponential decay rates: the upper-level
//! population decays as e^{-2(gamma1+gamma3) t}. Values are plain dimensionless
//! reals in a caller-chosen time unit; dividing everything by gamma (see
//! [`RateParams::normalize_to_gamma`]) leaves every observable unchanged once
//! delays are rescaled accordingly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation failure for a rate parameter set.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },
    #[error("{field} must be non-negative, got {value}")]
    Negative { field: &'static str, value: f64 },
    #[error("gamma1 + gamma3 must be positive: the upper level has to decay")]
    NoUpperDecay,
}

/// The full physical parameter set of the cascade.
///
/// Construction validates eagerly, so downstream formulas can assume a
/// well-formed set. Field meanings:
///
/// - `gamma1`, `gamma3`: spontaneous rates of the upper-level branches
///   |i> -> |alpha> (H photon) and |i> -> |beta> (V photon);
/// - `gamma2`, `gamma4`: spontaneous rates |alpha> -> |j> and |beta> -> |j>;
/// - `gamma_ab`: incoherent dephasing feeding |alpha> from |beta>;
/// - `gamma_ba`: incoherent dephasing feeding |beta> from |alpha>;
/// - `delta`: exciton level splitting (angular frequency, any sign);
/// - `pump_rate`: constant population feed into |i>.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRateParams")]
pub struct RateParams {
    gamma1: f64,
    gamma3: f64,
    gamma2: f64,
    gamma4: f64,
    gamma_ab: f64,
    gamma_ba: f64,
    delta: f64,
    pump_rate: f64,
}

/// JSON wire format: keys exactly `gamma1`, `gamma3`, `gamma2`, `gamma4`,
/// `gamma_ab`, `gamma_ba`, `delta`, `pump_rate`; everything but `gamma1` and
/// `gamma3` defaults to zero.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRateParams {
    gamma1: f64,
    gamma3: f64,
    #[serde(default)]
    gamma2: f64,
    #[serde(default)]
    gamma4: f64,
    #[serde(default)]
    gamma_ab: f64,
    #[serde(default)]
    gamma_ba: f64,
    #[serde(default)]
    delta: f64,
    #[serde(default)]
    pump_rate: f64,
}

impl TryFrom<RawRateParams> for RateParams {
    type Error = RateError;

    fn try_from(raw: RawRateParams) -> Result<Self, RateError> {
        RateParams::new(
            raw.gamma1,
            raw.gamma3,
            raw.gamma2,
            raw.gamma4,
            raw.gamma_ab,
            raw.gamma_ba,
            raw.delta,
            raw.pump_rate,
        )
    }
}

impl RateParams {
    /// Validate and construct a parameter set. Arguments follow the field
    /// order documented on the type.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma1: f64,
        gamma3: f64,
        gamma2: f64,
        gamma4: f64,
        gamma_ab: f64,
        gamma_ba: f64,
        delta: f64,
        pump_rate: f64,
    ) -> Result<Self, RateError> {
        let rate_fields = [
            ("gamma1", gamma1),
            ("gamma3", gamma3),
            ("gamma2", gamma2),
            ("gamma4", gamma4),
            ("gamma_ab", gamma_ab),
            ("gamma_ba", gamma_ba),
            ("pump_rate", pump_rate),
        ];
        for (field, value) in rate_fields {
            if !value.is_finite() {
                return Err(RateError::NonFinite { field, value });
            }
            if value < 0.0 {
                return Err(RateError::Negative { field, value });
            }
        }
        if !delta.is_finite() {
            return Err(RateError::NonFinite {
                field: "delta",
                value: delta,
            });
        }
        if gamma1 + gamma3 <= 0.0 {
            return Err(RateError::NoUpperDecay);
        }
        Ok(Self {
            gamma1,
            gamma3,
            gamma2,
            gamma4,
            gamma_ab,
            gamma_ba,
            delta,
            pump_rate,
        })
    }

    /// Common symmetric case: equal upper branches, equal lower decays,
    /// equal dephasing rates, no pump.
    pub fn symmetric(
        gamma_branch: f64,
        gamma_lower: f64,
        gamma_deph: f64,
        delta: f64,
    ) -> Result<Self, RateError> {
        Self::new(
            gamma_branch,
            gamma_branch,
            gamma_lower,
            gamma_lower,
            gamma_deph,
            gamma_deph,
            delta,
            0.0,
        )
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma4(&self) -> f64 {
        self.gamma4
    }

    pub fn gamma_ab(&self) -> f64 {
        self.gamma_ab
    }

    pub fn gamma_ba(&self) -> f64 {
        self.gamma_ba
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn pump_rate(&self) -> f64 {
        self.pump_rate
    }

    /// Half the total upper-level decay rate: gamma = gamma1 + gamma3.
    pub fn gamma(&self) -> f64 {
        self.gamma1 + self.gamma3
    }

    /// Composite rates derived from this set.
    pub fn derived(&self) -> DerivedRates {
        DerivedRates::from_params(self)
    }

    /// Rescale the whole set by 1/gamma so that gamma1 + gamma3 = 1.
    ///
    /// Idempotent; physics is unchanged when delays are measured in the new
    /// time unit.
    pub fn normalize_to_gamma(&self) -> Self {
        let g = self.gamma();
        // already normalized up to rounding: dividing again would only shuffle
        // the last bits, so return unchanged to make this exactly idempotent
        if (g - 1.0).abs() < 1e-12 {
            return *self;
        }
        Self {
            gamma1: self.gamma1 / g,
            gamma3: self.gamma3 / g,
            gamma2: self.gamma2 / g,
            gamma4: self.gamma4 / g,
            gamma_ab: self.gamma_ab / g,
            gamma_ba: self.gamma_ba / g,
            delta: self.delta / g,
            pump_rate: self.pump_rate / g,
        }
    }

    /// True when the lower decays and the two dephasing rates are pairwise
    /// equal (relative tolerance 1e-12), the regime in which the simplified
    /// correlation formula applies.
    pub fn is_symmetric(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        close(self.gamma2, self.gamma4) && close(self.gamma_ab, self.gamma_ba)
    }
}

/// Composite rates: every closed-form expression is written in terms of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    /// gamma = gamma1 + gamma3 (half the total upper-level decay).
    pub gamma: f64,
    /// a0 = gamma2 + gamma4 + gamma_ab + gamma_ba.
    pub a0: f64,
    /// Gamma_a = gamma4 - gamma2 + gamma_ab - gamma_ba (signed).
    pub gamma_a: f64,
    /// A = sqrt(Gamma_a^2 + 4 gamma_ab gamma_ba); satisfies |Gamma_a| <= A <= a0.
    pub a_mix: f64,
}

impl DerivedRates {
    /// Compute the composite rates. Validation happens at [`RateParams`]
    /// construction, so this cannot fail.
    pub fn from_params(p: &RateParams) -> Self {
        let gamma_a = p.gamma4 - p.gamma2 + p.gamma_ab - p.gamma_ba;
        let a_mix = (gamma_a * gamma_a + 4.0 * p.gamma_ab * p.gamma_ba).sqrt();
        Self {
            gamma: p.gamma1 + p.gamma3,
            a0: p.gamma2 + p.gamma4 + p.gamma_ab + p.gamma_ba,
            gamma_a,
            a_mix,
        }
    }

    /// a0^2 - A^2 written in the cancellation-free product form
    /// 4 (gamma2 gamma4 + gamma2 gamma_ab + gamma4 gamma_ba).
    pub fn a0_sq_minus_a_sq(p: &RateParams) -> f64 {
        4.0 * (p.gamma2 * p.gamma4 + p.gamma2 * p.gamma_ab + p.gamma4 * p.gamma_ba)
    }
}
