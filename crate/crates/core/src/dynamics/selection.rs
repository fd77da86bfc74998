//! Interference of the V sub-schemes connecting the two R-line upper
//! doublets through the ground multiplet of Cr³⁺ in ruby.
//!
//! Products of dipole matrix elements are expressed in units of `C⁺C⁻*`,
//! using `C⁺C⁻* = −C⁻C⁺*`.

use std::fmt;
use std::str::FromStr;

use crate::error::DynamicsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    RightCircular,
    LeftCircular,
    /// Linear, perpendicular to the optic axis.
    LinearPerp,
}

impl FromStr for Polarization {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "right_circular" => Ok(Polarization::RightCircular),
            "left_circular" => Ok(Polarization::LeftCircular),
            "linear_perp" => Ok(Polarization::LinearPerp),
            other => Err(DynamicsError::UnsupportedPolarization(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VScheme {
    A,
    B,
    C,
    D,
}

impl fmt::Display for VScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationScheme {
    pub polarization: Polarization,
    /// Per-scheme products; empty when no V scheme can be formed.
    pub coupling_products: Vec<(VScheme, f64)>,
}

impl PolarizationScheme {
    pub fn net(&self) -> f64 {
        self.coupling_products.iter().map(|(_, c)| c).sum()
    }

    pub fn product(&self, scheme: VScheme) -> Option<f64> {
        self.coupling_products
            .iter()
            .find(|(s, _)| *s == scheme)
            .map(|(_, c)| *c)
    }
}

/// Net two-photon coupling for a given pump polarization, with its
/// per-scheme breakdown.
pub fn v_scheme_coupling(pol: Polarization) -> PolarizationScheme {
    let coupling_products = match pol {
        // ΔM selection rules of a single circular component never close a V
        Polarization::RightCircular | Polarization::LeftCircular => Vec::new(),
        Polarization::LinearPerp => {
            let ac = 4.0 / 9.0;
            let bd = -2.0 * std::f64::consts::SQRT_2 / 9.0;
            vec![(VScheme::A, ac), (VScheme::B, bd), (VScheme::C, -ac), (VScheme::D, bd)]
        }
    };
    PolarizationScheme {
        polarization: pol,
        coupling_products,
    }
}
