//! Physical constants and conversions between SI inputs and the working units.
//!
//! Internally lengths are in nm, radial eigenvalues in nm⁻², energies in meV
//! and magnetic fields in tesla. Constants are the CODATA 2018 values.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::model::{Geometry, Mode};

/// Reduced Planck constant (J s), h/2π with h exact.
pub const HBAR: f64 = 1.054_571_817_646_156_5e-34;
/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron rest mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

const JOULE_PER_MEV: f64 = ELEMENTARY_CHARGE * 1e-3;
const NM2_PER_M2: f64 = 1e18;

/// Sign of the carrier charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargeSign {
    #[default]
    Negative,
    Positive,
}

impl ChargeSign {
    pub fn value(self) -> f64 {
        match self {
            ChargeSign::Negative => -1.0,
            ChargeSign::Positive => 1.0,
        }
    }

    pub fn from_int(sign: i64) -> Result<Self> {
        match sign {
            -1 => Ok(ChargeSign::Negative),
            1 => Ok(ChargeSign::Positive),
            other => Err(invalid("charge_sign", format!("must be +1 or -1, got {other}"))),
        }
    }
}

/// Effective-mass material parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// m*/m_e
    pub mstar_ratio: f64,
    pub charge: ChargeSign,
}

impl Material {
    pub fn new(mstar_ratio: f64, charge: ChargeSign) -> Result<Self> {
        let material = Material { mstar_ratio, charge };
        material.validate()?;
        Ok(material)
    }

    /// Conduction-band electron in GaAs (m*/m_e = 0.067).
    pub fn gaas_electron() -> Self {
        Material { mstar_ratio: 0.067, charge: ChargeSign::Negative }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mstar_ratio.is_finite() && self.mstar_ratio > 0.0) {
            return Err(invalid("mstar_ratio", format!("must be finite and > 0, got {}", self.mstar_ratio)));
        }
        Ok(())
    }
}

impl Default for Material {
    fn default() -> Self {
        Material::gaas_electron()
    }
}

/// ħ²/(2m*) in meV·nm².
pub fn kinetic_coefficient(material: &Material) -> f64 {
    HBAR * HBAR / (2.0 * ELECTRON_MASS * material.mstar_ratio) / JOULE_PER_MEV * NM2_PER_M2
}

/// Cyclotron parameter qB/(2ħ) in nm⁻². Negative for electrons in a positive field.
pub fn beta_b(b_tesla: f64, material: &Material) -> f64 {
    material.charge.value() * ELEMENTARY_CHARGE * b_tesla / (2.0 * HBAR) / NM2_PER_M2
}

/// E = ħ²/(2m*)·(ε + k_z²) in meV.
pub fn energy_from_eps(eps: f64, kz: f64, material: &Material) -> f64 {
    kinetic_coefficient(material) * (eps + kz * kz)
}

/// Inverse of [`energy_from_eps`].
pub fn eps_from_energy(energy_mev: f64, kz: f64, material: &Material) -> f64 {
    energy_mev / kinetic_coefficient(material) - kz * kz
}

/// ħω_c = ħ|q|B/m* in meV (magnitude).
pub fn cyclotron_energy(b_tesla: f64, material: &Material) -> f64 {
    HBAR * ELEMENTARY_CHARGE * b_tesla.abs() / (ELECTRON_MASS * material.mstar_ratio) / JOULE_PER_MEV
}

/// Magnetic length sqrt(ħ/|qB|) in nm.
pub fn magnetic_length(b_tesla: f64) -> f64 {
    (HBAR / (ELEMENTARY_CHARGE * b_tesla.abs())).sqrt() * 1e9
}

/// Burgers vector per turn, b = 2πω₁ (nm).
pub fn burgers_per_turn(omega1: f64) -> f64 {
    2.0 * PI * omega1
}

/// Dimensionless control groups for a device of size `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessGroups {
    /// k_z L
    pub kappa: f64,
    /// k_z ω₁
    pub beta1: f64,
    /// k_z ω₂ L
    pub beta2: f64,
    /// β_B L²
    pub lambda: f64,
}

pub fn dimensionless_groups(
    geometry: &Geometry,
    mode: &Mode,
    b_tesla: f64,
    material: &Material,
    length: f64,
) -> Result<DimensionlessGroups> {
    if !(length > 0.0) {
        return Err(invalid("L", format!("device size must be > 0, got {length}")));
    }
    let kz = mode.kz;
    Ok(DimensionlessGroups {
        kappa: kz * length,
        beta1: kz * geometry.omega1,
        beta2: kz * geometry.omega2 * length,
        lambda: beta_b(b_tesla, material) * length * length,
    })
}
