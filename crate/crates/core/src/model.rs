//! Geometry, field and mode parameters and the radial effective potential.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::units::{beta_b, Material};

/// Screw-dislocation background: global screw `omega1` (nm) and local twist `omega2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Geometry {
    pub omega1: f64,
    pub omega2: f64,
}

impl Geometry {
    /// Mixing profile f(r) = ω₁ + ω₂ r (nm).
    pub fn profile(&self, r: f64) -> f64 {
        self.omega1 + self.omega2 * r
    }

    pub fn validate(&self) -> Result<()> {
        finite("omega1_nm", self.omega1)?;
        finite("omega2", self.omega2)
    }
}

/// Uniform axial field (T) and reduced Aharonov-Bohm flux Φ/Φ₀.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Fields {
    pub b_tesla: f64,
    pub phi: f64,
}

impl Fields {
    pub fn validate(&self) -> Result<()> {
        finite("B_tesla", self.b_tesla)?;
        finite("phi", self.phi)
    }
}

/// Azimuthal index and axial wavenumber (nm⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mode {
    pub ell: i64,
    pub kz: f64,
}

impl Mode {
    pub fn validate(&self) -> Result<()> {
        finite("kz_per_nm", self.kz)
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}

/// f(r) = ω₁ + ω₂ r.
pub fn screw_profile(geometry: &Geometry, r: f64) -> f64 {
    geometry.profile(r)
}

/// ν = |ℓ − φ − k_z ω₁|.
pub fn effective_index(mode: &Mode, fields: &Fields, geometry: &Geometry) -> f64 {
    (mode.ell as f64 - fields.phi - mode.kz * geometry.omega1).abs()
}

/// Phase 2π k_z f(r) picked up by a loop around the axis at radius `r`.
pub fn geometric_phase(geometry: &Geometry, kz: f64, r: f64) -> f64 {
    2.0 * PI * kz * geometry.profile(r)
}

/// Phase difference between loops at radii `r1` and `r2`; independent of ω₁.
pub fn relative_phase(geometry: &Geometry, kz: f64, r1: f64, r2: f64) -> f64 {
    2.0 * PI * kz * geometry.omega2 * (r1 - r2)
}

/// Axial displacement Δz = 2π f(r) accumulated over one turn at radius `r` (nm).
pub fn axial_holonomy(geometry: &Geometry, r: f64) -> f64 {
    2.0 * PI * geometry.profile(r)
}

/// Coefficients of the expanded radial potential
/// `-(U + 1/(4r²)) = c₀ + c₋₂/r² + c₋₁/r + c₁ r + c₂ r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermDecomposition {
    pub constant_shift: f64,
    pub centrifugal_coeff: f64,
    pub coulomb_coeff: f64,
    pub linear_tilt_coeff: f64,
    pub landau_coeff: f64,
}

impl TermDecomposition {
    /// Five-term sum at `r`, equal to `-(U(r) + 1/(4r²))`.
    pub fn evaluate(&self, r: f64) -> f64 {
        self.constant_shift
            + self.centrifugal_coeff / (r * r)
            + self.coulomb_coeff / r
            + self.linear_tilt_coeff * r
            + self.landau_coeff * r * r
    }
}

/// Everything that enters the radial operator except the grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Hamiltonian {
    pub geometry: Geometry,
    pub fields: Fields,
    pub mode: Mode,
    pub material: Material,
}

impl Hamiltonian {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.fields.validate()?;
        self.mode.validate()?;
        self.material.validate()
    }

    pub fn beta_b(&self) -> f64 {
        beta_b(self.fields.b_tesla, &self.material)
    }

    /// Signed combination ℓ − φ − k_z ω₁ whose magnitude is the effective index.
    pub fn ab_shift(&self) -> f64 {
        self.mode.ell as f64 - self.fields.phi - self.mode.kz * self.geometry.omega1
    }

    pub fn effective_index(&self) -> f64 {
        effective_index(&self.mode, &self.fields, &self.geometry)
    }

    /// ℓ − φ − k_z f(r) − β_B r².
    pub fn bracket(&self, r: f64) -> f64 {
        self.mode.ell as f64
            - self.fields.phi
            - self.mode.kz * self.geometry.profile(r)
            - self.beta_b() * r * r
    }

    /// Langer potential U(r) = bracket²/r² − 1/(4r²) in nm⁻².
    pub fn effective_potential(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain { r });
        }
        Ok(self.potential_at(r))
    }

    pub(crate) fn potential_at(&self, r: f64) -> f64 {
        let g = self.bracket(r);
        (g * g - 0.25) / (r * r)
    }

    pub fn term_decomposition(&self) -> TermDecomposition {
        let a = self.ab_shift();
        let p = self.mode.kz * self.geometry.omega2;
        let beta = self.beta_b();
        TermDecomposition {
            constant_shift: -p * p + 2.0 * beta * a,
            centrifugal_coeff: -a * a,
            coulomb_coeff: 2.0 * p * a,
            linear_tilt_coeff: -2.0 * p * beta,
            landau_coeff: -beta * beta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn benchmark() -> Hamiltonian {
        Hamiltonian {
            geometry: Geometry { omega1: 50.0, omega2: 0.0 },
            fields: Fields { b_tesla: 1.0, phi: 0.0 },
            mode: Mode { ell: 1, kz: 0.01 },
            material: Material::gaas_electron(),
        }
    }

    #[test]
    fn profile_examples() {
        assert_eq!(screw_profile(&Geometry { omega1: 50.0, omega2: 0.0 }, 10.0), 50.0);
        assert_eq!(screw_profile(&Geometry { omega1: 0.0, omega2: 1.0 }, 10.0), 10.0);
        assert_eq!(screw_profile(&Geometry { omega1: 50.0, omega2: 2.0 }, 20.0), 90.0);
    }

    #[test]
    fn effective_index_examples() {
        let h = benchmark();
        assert_abs_diff_eq!(h.effective_index(), 0.5, epsilon = 1e-15);
        let zero = Hamiltonian::default();
        assert_eq!(zero.effective_index(), 0.0);
        let cancel = Hamiltonian {
            mode: Mode { ell: 1, kz: 0.0 },
            fields: Fields { b_tesla: 0.0, phi: 1.0 },
            ..Hamiltonian::default()
        };
        assert_eq!(cancel.effective_index(), 0.0);
    }

    #[test]
    fn potential_examples() {
        let mut h = benchmark();
        h.fields.b_tesla = 0.0;
        for r in [1e-3, 0.7, 10.0, 499.0] {
            assert_eq!(h.effective_potential(r).unwrap(), 0.0);
        }
        h.mode.ell = 2;
        // (1.5)²/100 − 1/400
        assert_abs_diff_eq!(h.effective_potential(10.0).unwrap(), 0.0200, epsilon = 1e-15);
        let bare = Hamiltonian::default();
        assert_eq!(bare.effective_potential(1.0).unwrap(), -0.25);
        assert_eq!(bare.effective_potential(0.0), Err(Error::Domain { r: 0.0 }));
        assert!(bare.effective_potential(-1.0).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let mut h = benchmark();
        h.geometry.omega2 = 1.0;
        let t = h.term_decomposition();
        assert_abs_diff_eq!(t.constant_shift, -8.5963e-4, epsilon = 1e-8);
        assert_abs_diff_eq!(t.coulomb_coeff, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(t.linear_tilt_coeff, 1.51926e-5, epsilon = 1e-9);
        assert_abs_diff_eq!(t.landau_coeff, -5.770e-7, epsilon = 1e-10);
        assert_abs_diff_eq!(t.centrifugal_coeff, -0.25, epsilon = 1e-15);

        let mut flat = benchmark();
        flat.fields.b_tesla = 0.0;
        let t = flat.term_decomposition();
        assert_eq!((t.coulomb_coeff, t.linear_tilt_coeff, t.landau_coeff), (0.0, 0.0, 0.0));
        assert_eq!(t.constant_shift, 0.0);

        let mut nokz = benchmark();
        nokz.mode.kz = 0.0;
        nokz.geometry.omega2 = 1.0;
        let t = nokz.term_decomposition();
        assert_eq!((t.coulomb_coeff, t.linear_tilt_coeff), (0.0, 0.0));
        assert_abs_diff_eq!(t.constant_shift, 2.0 * nokz.beta_b() * 1.0, epsilon = 1e-18);
    }

    #[test]
    fn phase_examples() {
        let g = Geometry { omega1: 50.0, omega2: 0.0 };
        assert_abs_diff_eq!(geometric_phase(&g, 0.01, 3.0), PI, epsilon = 1e-14);
        assert_eq!(geometric_phase(&g, 0.0, 3.0), 0.0);
        let twist = Geometry { omega1: 0.0, omega2: 1.0 };
        assert_abs_diff_eq!(geometric_phase(&twist, 0.01, 25.0), PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(relative_phase(&twist, 0.01, 15.0, 5.0), 0.2 * PI, epsilon = 1e-14);
        assert_eq!(relative_phase(&twist, 0.01, 7.0, 7.0), 0.0);
        assert_eq!(relative_phase(&twist, 0.01, 3.0, 9.0), -relative_phase(&twist, 0.01, 9.0, 3.0));
        assert_abs_diff_eq!(axial_holonomy(&g, 0.0), 100.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(axial_holonomy(&g, 0.0) * 0.01, geometric_phase(&g, 0.01, 0.0), epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn potential_depends_on_combination_only(
            ell in -5i64..5, phi in -3.0f64..3.0, delta in -2.0f64..2.0,
            kz in prop_oneof![-0.05f64..-0.001, 0.001f64..0.05],
            omega1 in -100.0f64..100.0, omega2 in -2.0f64..2.0,
            b in -3.0f64..3.0, r in 0.01f64..400.0,
        ) {
            let base = Hamiltonian {
                geometry: Geometry { omega1, omega2 },
                fields: Fields { b_tesla: b, phi },
                mode: Mode { ell, kz },
                material: Material::gaas_electron(),
            };
            let mut flux = base;
            flux.fields.phi += delta;
            let mut screw = base;
            screw.geometry.omega1 += delta / kz;
            let u1 = flux.effective_potential(r).unwrap();
            let u2 = screw.effective_potential(r).unwrap();
            let g = flux.bracket(r);
            let scale = (g * g + 0.25 + (kz * screw.geometry.omega1).powi(2) + 1.0) / (r * r);
            prop_assert!((u1 - u2).abs() <= 1e-12 * scale);
        }

        #[test]
        fn flat_potential_is_pure_centrifugal(
            ell in -5i64..5, phi in -3.0f64..3.0, kz in -0.05f64..0.05,
            omega1 in -100.0f64..100.0, r in 0.01f64..400.0,
        ) {
            let h = Hamiltonian {
                geometry: Geometry { omega1, omega2: 0.0 },
                fields: Fields { b_tesla: 0.0, phi },
                mode: Mode { ell, kz },
                material: Material::gaas_electron(),
            };
            let nu = h.effective_index();
            let expect = (nu * nu - 0.25) / (r * r);
            let u = h.effective_potential(r).unwrap();
            prop_assert!((u - expect).abs() <= 1e-14 * (nu * nu + 0.25) / (r * r));
        }

        #[test]
        fn decomposition_recomposes(
            ell in -5i64..5, phi in -3.0f64..3.0, kz in -0.05f64..0.05,
            omega1 in -100.0f64..100.0, omega2 in -2.0f64..2.0,
            b in -3.0f64..3.0, r in 0.01f64..400.0,
        ) {
            let h = Hamiltonian {
                geometry: Geometry { omega1, omega2 },
                fields: Fields { b_tesla: b, phi },
                mode: Mode { ell, kz },
                material: Material::gaas_electron(),
            };
            let t = h.term_decomposition();
            let direct = h.effective_potential(r).unwrap() + 0.25 / (r * r);
            let g = h.bracket(r);
            prop_assert!((direct - g * g / (r * r)).abs() <= 1e-12 * (g * g + 1.0) / (r * r));
            let a = h.ab_shift();
            let p = kz * omega2;
            let beta = h.beta_b();
            let scale = [a * a / (r * r), (2.0 * p * a / r).abs(), p * p, (2.0 * beta * a).abs(),
                (2.0 * p * beta * r).abs(), beta * beta * r * r]
                .iter().sum::<f64>();
            prop_assert!((t.evaluate(r) + direct).abs() <= 1e-12 * scale + 1e-300);
        }

        #[test]
        fn relative_phase_ignores_omega1(
            o1 in -100.0f64..100.0, o1b in -100.0f64..100.0, o2 in -2.0f64..2.0,
            kz in -0.05f64..0.05, r1 in 0.0f64..500.0, r2 in 0.0f64..500.0,
        ) {
            let a = relative_phase(&Geometry { omega1: o1, omega2: o2 }, kz, r1, r2);
            let b = relative_phase(&Geometry { omega1: o1b, omega2: o2 }, kz, r1, r2);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn geometric_phase_is_linear(
            o1 in -100.0f64..100.0, o2 in -2.0f64..2.0, kz in -0.05f64..0.05,
            r in 0.0f64..500.0, s in 0.1f64..4.0,
        ) {
            let g = Geometry { omega1: o1, omega2: o2 };
            let base = geometric_phase(&g, kz, r);
            let tol = 1e-12 * (2.0 * PI * kz.abs() * (o1.abs() + o2.abs() * r) * s + 1e-300);
            prop_assert!((geometric_phase(&g, s * kz, r) - s * base).abs() <= tol);
            let affine = geometric_phase(&g, kz, 0.0) + 2.0 * PI * kz * o2 * r;
            prop_assert!((base - affine).abs() <= tol + 1e-12);
        }
    }
}
