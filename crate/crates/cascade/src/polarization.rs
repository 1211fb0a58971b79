//! Analyzer settings and the unitary change between the linear (H, V) basis
//! and an arbitrary elliptical basis.
//!
//! A setting (theta, phi) corresponds to the analyzer Jones vector
//! (cos theta, e^{-i phi} sin theta) in the (H, V) basis; the orthogonal
//! setting is the second row (-e^{i phi} sin theta, cos theta) of the same
//! unitary. Only the rank-1 projector of the Jones vector is physical, so
//! equality of settings ignores the global phase.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarizationError {
    #[error("unknown polarization preset {name:?}; valid names: H, V, D, Dprime, R, L")]
    UnknownPreset { name: String },
    #[error("settings are not orthogonal: |<e1|e2>| = {overlap:.3e}")]
    NotOrthogonal { overlap: f64 },
}

/// Analyzer orientation, stored with theta in [0, pi) and phi in (-pi, pi].
///
/// Two settings whose Jones vectors differ by a global phase describe the same
/// polarization; use [`PolarizerSetting::same_polarization`] to compare.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizerSetting {
    theta: f64,
    phi: f64,
}

impl PolarizerSetting {
    /// Build a setting, reducing the angles into the canonical ranges.
    /// Shifting theta by pi only flips the global sign of the Jones vector,
    /// so the reduction is projector-safe.
    pub fn new(theta: f64, phi: f64) -> Self {
        let theta = theta.rem_euclid(PI);
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi > PI {
            phi -= 2.0 * PI;
        }
        Self { theta, phi }
    }

    /// Named settings: H = (0, 0), V = (pi/2, 0), D = (pi/4, 0),
    /// Dprime = (3 pi/4, 0), R = (pi/4, -pi/2), L = (pi/4, pi/2).
    pub fn preset(name: &str) -> Result<Self, PolarizationError> {
        let canonical = name.trim();
        let setting = match canonical.to_ascii_lowercase().as_str() {
            "h" => Self::new(0.0, 0.0),
            "v" => Self::new(FRAC_PI_2, 0.0),
            "d" => Self::new(FRAC_PI_4, 0.0),
            "dprime" | "d'" => Self::new(3.0 * FRAC_PI_4, 0.0),
            "r" => Self::new(FRAC_PI_4, -FRAC_PI_2),
            "l" => Self::new(FRAC_PI_4, FRAC_PI_2),
            _ => {
                return Err(PolarizationError::UnknownPreset {
                    name: name.to_string(),
                })
            }
        };
        Ok(setting)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// First row of the basis transform: (cos theta, e^{-i phi} sin theta).
    pub fn jones_vector(&self) -> (C64, C64) {
        let (sin_t, cos_t) = self.theta.sin_cos();
        (C64::new(cos_t, 0.0), C64::from_polar(sin_t, -self.phi))
    }

    /// The setting whose Jones vector is the second transform row
    /// (-e^{i phi} sin theta, cos theta), re-expressed in canonical form.
    pub fn orthogonal(&self) -> Self {
        let (sin_t, cos_t) = self.theta.sin_cos();
        let h = C64::from_polar(sin_t, self.phi) * -1.0;
        let v = C64::new(cos_t, 0.0);
        Self::from_jones(h, v)
    }

    /// Canonical (theta, phi) for an arbitrary unit Jones vector, dropping the
    /// global phase. Of the two range-canonical representatives the one with
    /// |phi| <= pi/2 is returned, which keeps Dprime at (3 pi/4, 0).
    pub fn from_jones(h: C64, v: C64) -> Self {
        let nh = h.norm();
        let nv = v.norm();
        if nv < 1e-12 {
            return Self {
                theta: 0.0,
                phi: 0.0,
            };
        }
        if nh < 1e-12 {
            return Self {
                theta: FRAC_PI_2,
                phi: 0.0,
            };
        }
        // representative with theta in (0, pi/2): rotate h onto the real axis
        let theta1 = nv.atan2(nh);
        let rotated = v * (h.conj() / nh);
        let mut phi1 = -rotated.arg();
        if phi1 <= -PI {
            phi1 = PI;
        }
        if phi1.abs() <= FRAC_PI_2 + 1e-12 {
            Self {
                theta: theta1,
                phi: phi1,
            }
        } else {
            let phi2 = if phi1 > 0.0 { phi1 - PI } else { phi1 + PI };
            Self {
                theta: PI - theta1,
                phi: phi2,
            }
        }
    }

    /// Rank-1 projector comparison with tolerance 1e-12 on every element.
    pub fn same_polarization(&self, other: &Self) -> bool {
        self.projector_distance(other) < 1e-12
    }

    /// Max-abs difference of the two rank-1 projectors.
    pub fn projector_distance(&self, other: &Self) -> f64 {
        let (h1, v1) = self.jones_vector();
        let (h2, v2) = other.jones_vector();
        let d_hh = (h1 * h1.conj() - h2 * h2.conj()).norm();
        let d_vv = (v1 * v1.conj() - v2 * v2.conj()).norm();
        let d_hv = (h1 * v1.conj() - h2 * v2.conj()).norm();
        d_hh.max(d_vv).max(d_hv)
    }

    /// Inner product <self|other> of the Jones vectors; vanishes for
    /// orthogonal polarizations and has phase-invariant modulus.
    pub fn overlap(&self, other: &Self) -> C64 {
        let (h1, v1) = self.jones_vector();
        let (h2, v2) = other.jones_vector();
        h1.conj() * h2 + v1.conj() * v2
    }
}

/// A pair of mutually orthogonal analyzer settings defining a measurement
/// basis: co-polarized coincidences use `primary` in both arms, cross-polarized
/// ones use `orthogonal` in the second arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    primary: PolarizerSetting,
    orthogonal: PolarizerSetting,
}

impl BasisPair {
    /// Basis spanned by a setting and its computed orthogonal partner.
    pub fn from_primary(primary: PolarizerSetting) -> Self {
        Self {
            primary,
            orthogonal: primary.orthogonal(),
        }
    }

    /// Basis from two explicit settings, which must be orthogonal to 1e-12.
    pub fn from_settings(
        primary: PolarizerSetting,
        orthogonal: PolarizerSetting,
    ) -> Result<Self, PolarizationError> {
        let overlap = primary.overlap(&orthogonal).norm();
        if overlap >= 1e-12 {
            return Err(PolarizationError::NotOrthogonal { overlap });
        }
        Ok(Self {
            primary,
            orthogonal,
        })
    }

    pub fn primary(&self) -> PolarizerSetting {
        self.primary
    }

    pub fn orthogonal(&self) -> PolarizerSetting {
        self.orthogonal
    }
}
