//! Independent reference values: closed-form spectra in exactly solvable limits
//! and a Numerov shooting integrator.

mod bessel;
mod numerov;

pub use bessel::{bessel_j, bessel_zero, ln_gamma};
pub use numerov::MAX_STATE as NUMEROV_MAX_STATE;

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::solver::RadialProblem;
use crate::units::{beta_b, kinetic_coefficient, Material};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Box,
    Bessel,
    Landau,
    Numerov,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    /// nm⁻²
    pub eps: f64,
    pub method: OracleMethod,
    /// Relative accuracy estimate of `eps`.
    pub residual: f64,
}

/// (nπ/L)² for the n-th (1-based) mode of a Dirichlet box of width `length`.
pub fn box_eigenvalue(n: usize, length: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "mode index is 1-based"));
    }
    if !(length > 0.0) {
        return Err(invalid("L", format!("box width must be > 0, got {length}")));
    }
    Ok((n as f64 * PI / length).powi(2))
}

/// (j_{ν,n}/r_max)², the n-th Dirichlet level of a disc with flat potential.
pub fn bessel_dirichlet_eigenvalue(nu: f64, n: usize, r_max: f64) -> Result<f64> {
    if !(r_max > 0.0) {
        return Err(invalid("r_max", format!("must be > 0, got {r_max}")));
    }
    Ok((bessel_zero(nu, n)? / r_max).powi(2))
}

/// Radial-quantum-number `n` Landau level with angular index `m_eff` (meV):
/// ħ²/(2m*) · [2|β|(2n + 1 + |m|) − 2βm].
pub fn landau_level(n: usize, m_eff: f64, b_tesla: f64, material: &Material) -> Result<f64> {
    if b_tesla == 0.0 || !b_tesla.is_finite() {
        return Err(invalid("B_tesla", "Landau levels need a finite nonzero field"));
    }
    let beta = beta_b(b_tesla, material);
    let k_perp2 = 2.0 * beta.abs() * (2.0 * n as f64 + 1.0 + m_eff.abs()) - 2.0 * beta * m_eff;
    Ok(kinetic_coefficient(material) * k_perp2)
}

/// Shooting eigenvalue of state `n` (0-based, at most [`NUMEROV_MAX_STATE`]) on the
/// problem's own grid.
pub fn numerov_eigenvalue(problem: &RadialProblem, n: usize) -> Result<OracleResult> {
    let (eps, residual) = numerov::shoot(problem, n)?;
    Ok(OracleResult { eps, method: OracleMethod::Numerov, residual })
}
