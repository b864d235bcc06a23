//! Density, probability currents and ring currents of solved states.
//!
//! Currents are reported in reduced form: the ħ/m* prefactor is divided out, so
//! multiplying by ħ/m* gives the physical current density.

use crate::error::{Error, Result};
use crate::solver::{RadialProblem, Spectrum};

/// Default radial window (nm) for current plots; integrals always use the full grid.
pub const PLOT_WINDOW_NM: (f64, f64) = (0.0, 40.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentProfile {
    pub state_index: usize,
    pub r: Vec<f64>,
    pub density: Vec<f64>,
    pub j_phi_reduced: Vec<f64>,
    pub j_z_reduced: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingCurrents {
    pub r0: f64,
    pub delta: f64,
    pub i_phi: f64,
    pub i_z: f64,
}

/// |Ψ|² = u²/r at the interior nodes (nm⁻¹).
pub fn density(spectrum: &Spectrum, n: usize) -> Result<Vec<f64>> {
    let u = spectrum.state(n)?;
    Ok(u.iter().zip(&spectrum.r).map(|(u, r)| u * u / r).collect())
}

/// [ℓ − φ − β_B r² − k_z f(r)]/r² · u²/r.
pub fn azimuthal_current(spectrum: &Spectrum, n: usize, problem: &RadialProblem) -> Result<Vec<f64>> {
    let ham = problem.hamiltonian();
    Ok(density(spectrum, n)?
        .into_iter()
        .zip(&spectrum.r)
        .map(|(rho, &r)| ham.bracket(r) / (r * r) * rho)
        .collect())
}

/// [(1 + f²/r²) k_z − (f/r²)(ℓ − φ − β_B r²)] · u²/r.
pub fn axial_current(spectrum: &Spectrum, n: usize, problem: &RadialProblem) -> Result<Vec<f64>> {
    let ham = problem.hamiltonian();
    let kz = problem.mode.kz;
    let shift = problem.mode.ell as f64 - problem.fields.phi;
    let beta = ham.beta_b();
    Ok(density(spectrum, n)?
        .into_iter()
        .zip(&spectrum.r)
        .map(|(rho, &r)| {
            let f = problem.geometry.profile(r);
            let r2 = r * r;
            ((1.0 + f * f / r2) * kz - f / r2 * (shift - beta * r2)) * rho
        })
        .collect())
}

/// Im(ψ* ∂_r ψ) for the state carrying an arbitrary global phase `theta`.
///
/// Real eigenvectors make this vanish identically.
pub fn radial_current(spectrum: &Spectrum, n: usize, theta: f64) -> Result<Vec<f64>> {
    let u = spectrum.state(n)?;
    let h = spectrum.spacing;
    let (s, c) = theta.sin_cos();
    let len = u.len();
    Ok((0..len)
        .map(|i| {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < len { u[i + 1] } else { 0.0 };
            let du = (right - left) / (2.0 * h);
            // (c - i s) u · (c + i s) u'
            let (re_a, im_a) = (c * u[i], -s * u[i]);
            let (re_b, im_b) = (c * du, s * du);
            (re_a * im_b + im_a * re_b) / spectrum.r[i]
        })
        .collect())
}

pub fn current_profile(spectrum: &Spectrum, n: usize, problem: &RadialProblem) -> Result<CurrentProfile> {
    Ok(CurrentProfile {
        state_index: n,
        r: spectrum.r.clone(),
        density: density(spectrum, n)?,
        j_phi_reduced: azimuthal_current(spectrum, n, problem)?,
        j_z_reduced: axial_current(spectrum, n, problem)?,
    })
}

/// Predicted sign of j^z just outside the axis, sgn(ω₁k_z − (ℓ − φ)).
///
/// Derived for ω₁ > 0; returns `None` when ω₁ = 0.
pub fn axis_sign_prediction(problem: &RadialProblem) -> Option<i8> {
    if problem.geometry.omega1 == 0.0 {
        return None;
    }
    let x = problem.geometry.omega1 * problem.mode.kz - (problem.mode.ell as f64 - problem.fields.phi);
    Some(if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    })
}

/// Radius where j^z changes sign, r*² = ω₁(ℓ − φ)/k_z − ω₁², for ω₂ = B = 0.
pub fn axial_zero_radius(problem: &RadialProblem) -> Result<Option<f64>> {
    if problem.geometry.omega2 != 0.0 || problem.fields.b_tesla != 0.0 {
        return Err(Error::Precondition("axial zero radius needs omega2 = 0 and B = 0".into()));
    }
    if problem.mode.kz == 0.0 {
        return Err(Error::Precondition("axial zero radius needs kz != 0".into()));
    }
    let w1 = problem.geometry.omega1;
    let radicand = w1 * (problem.mode.ell as f64 - problem.fields.phi) / problem.mode.kz - w1 * w1;
    Ok((radicand > 0.0).then(|| radicand.sqrt()))
}

/// Trapezoid integrals of r·j̃^φ and r·j̃^z over [r0 − δ, r0 + δ], ends snapped to nodes.
pub fn annular_currents(
    spectrum: &Spectrum,
    n: usize,
    problem: &RadialProblem,
    r0: f64,
    delta: f64,
) -> Result<RingCurrents> {
    let grid = problem.grid;
    let (lo, hi) = (r0 - delta, r0 + delta);
    if !(delta > 0.0 && lo >= grid.r_min && hi <= grid.r_max) {
        return Err(Error::Annulus { lo, hi, r_min: grid.r_min, r_max: grid.r_max });
    }
    let j_phi = azimuthal_current(spectrum, n, problem)?;
    let j_z = axial_current(spectrum, n, problem)?;
    let (a, b) = (grid.nearest_index(lo), grid.nearest_index(hi));
    let integrate = |j: &[f64]| {
        // Full-grid node i maps to interior index i - 1; boundary values are zero.
        let value = |i: usize| {
            if i == 0 || i == grid.n_points - 1 {
                0.0
            } else {
                spectrum.r[i - 1] * j[i - 1]
            }
        };
        (a..b).map(|i| 0.5 * (value(i) + value(i + 1))).sum::<f64>() * spectrum.spacing
    };
    Ok(RingCurrents { r0, delta, i_phi: integrate(&j_phi), i_z: integrate(&j_z) })
}

/// |∫ r j̃^z dr| over the region where j̃^z < 0, relative to |∫ r j̃^z dr| over the grid.
pub fn axial_backflow_fraction(spectrum: &Spectrum, n: usize, problem: &RadialProblem) -> Result<f64> {
    let j = axial_current(spectrum, n, problem)?;
    let weighted = j.iter().zip(&spectrum.r).map(|(j, r)| r * j);
    let (total, negative) =
        weighted.fold((0.0, 0.0), |(t, neg), x| (t + x, if x < 0.0 { neg + x } else { neg }));
    Ok(negative.abs() / total.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_lowest;

    fn solved(problem: &RadialProblem) -> Spectrum {
        solve_lowest(problem, 2).unwrap()
    }

    #[test]
    fn density_integrates_to_one() {
        let p = RadialProblem::benchmark();
        let s = solved(&p);
        let rho = density(&s, 0).unwrap();
        let total: f64 = rho.iter().zip(&s.r).map(|(d, r)| d * r).sum::<f64>() * s.spacing;
        assert!((total - 1.0).abs() < 1e-10);
        assert!(rho.iter().all(|&d| d >= 0.0));
        let max = rho.iter().cloned().fold(0.0, f64::max);
        // density ~ r near the core for ν = 1/2, so scale the first node back to r_min.
        let at_core = rho[0] * p.grid.r_min / s.r[0];
        assert!(at_core < 1e-3 * max);
        assert!(rho[0] < 0.05 * max);
        assert!(density(&s, 5).is_err());
    }

    #[test]
    fn azimuthal_current_vanishes_without_bracket() {
        let mut p = RadialProblem::benchmark();
        p.fields.b_tesla = 0.0;
        p.fields.phi = 0.5;
        assert_eq!(p.hamiltonian().ab_shift(), 0.0);
        let s = solved(&p);
        assert!(azimuthal_current(&s, 0, &p).unwrap().iter().all(|&j| j == 0.0));
        let ring = annular_currents(&s, 0, &p, 20.0, 5.0).unwrap();
        assert_eq!(ring.i_phi, 0.0);
    }

    #[test]
    fn axial_current_limits() {
        let mut p = RadialProblem::benchmark();
        p.geometry = crate::Geometry::default();
        let s = solved(&p);
        let rho = density(&s, 0).unwrap();
        let jz = axial_current(&s, 0, &p).unwrap();
        for (j, d) in jz.iter().zip(&rho) {
            assert!((j - p.mode.kz * d).abs() <= 1e-12 * d.abs());
        }
        p.mode.kz = 0.0;
        let s = solved(&p);
        assert!(axial_current(&s, 0, &p).unwrap().iter().all(|&j| j == 0.0));
    }

    #[test]
    fn sign_prediction_cases() {
        let mut p = RadialProblem::benchmark();
        assert_eq!(axis_sign_prediction(&p), Some(-1));
        p.mode.ell = 0;
        assert_eq!(axis_sign_prediction(&p), Some(1));
        p.geometry.omega1 = 100.0;
        p.mode.ell = 1;
        assert_eq!(axis_sign_prediction(&p), Some(0));
        p.geometry.omega1 = 0.0;
        assert_eq!(axis_sign_prediction(&p), None);
    }

    #[test]
    fn zero_radius_cases() {
        let mut p = RadialProblem::benchmark();
        assert!(axial_zero_radius(&p).is_err());
        p.fields.b_tesla = 0.0;
        assert!((axial_zero_radius(&p).unwrap().unwrap() - 50.0).abs() < 1e-12);
        p.geometry.omega1 = 0.0;
        assert_eq!(axial_zero_radius(&p).unwrap(), None);
        p.geometry.omega1 = 50.0;
        p.mode.ell = -1;
        assert_eq!(axial_zero_radius(&p).unwrap(), None);
        p.mode.kz = 0.0;
        assert!(axial_zero_radius(&p).is_err());
        p.mode.kz = 0.01;
        p.geometry.omega2 = 1.0;
        assert!(axial_zero_radius(&p).is_err());
    }

    #[test]
    fn annulus_outside_grid_is_rejected() {
        let p = RadialProblem::benchmark();
        let s = solved(&p);
        assert!(matches!(annular_currents(&s, 0, &p, 1.0, 2.0), Err(Error::Annulus { .. })));
        assert!(annular_currents(&s, 0, &p, 499.0, 2.0).is_err());
        assert!(annular_currents(&s, 0, &p, 20.0, 0.0).is_err());
    }

    #[test]
    fn radial_current_vanishes() {
        let p = RadialProblem::benchmark();
        let s = solved(&p);
        let h = s.spacing;
        let u = s.state(1).unwrap();
        let scale = u.iter().zip(&s.r).map(|(u, r)| u * u / (h * r)).fold(0.0, f64::max);
        for theta in [0.0, 0.3, 1.7, -2.9] {
            let j = radial_current(&s, 1, theta).unwrap();
            assert!(j.iter().all(|&j| j.abs() <= 1e-15 * scale));
        }
        assert!(radial_current(&s, 0, 0.0).unwrap().iter().all(|&j| j == 0.0));
    }
}
