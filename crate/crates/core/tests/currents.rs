use helicoid::observables::{
    annular_currents, axial_backflow_fraction, axial_current, axial_zero_radius, axis_sign_prediction,
    azimuthal_current, current_profile, PLOT_WINDOW_NM,
};
use helicoid::solver::{solve_lowest, Grid};
use helicoid::sweeps::ring_current_trace;
use helicoid::{Fields, RadialProblem};
use proptest::prelude::*;

#[test]
fn benchmark_axial_current_is_negative_and_decays_from_below() {
    let p = RadialProblem::benchmark();
    let s = solve_lowest(&p, 1).unwrap();
    let jz = axial_current(&s, 0, &p).unwrap();
    assert_eq!(axis_sign_prediction(&p), Some(-1));
    assert!(jz[..5].iter().all(|&j| j < 0.0));
    let peak = jz.iter().fold(0.0f64, |m, j| m.max(j.abs()));
    let tail = p.grid.nearest_index(40.0);
    assert!(jz[tail] < 0.0 && jz[tail].abs() < 0.05 * peak);
}

#[test]
fn field_free_backflow_has_small_weight() {
    let mut p = RadialProblem::benchmark();
    p.fields.b_tesla = 0.0;
    let s = solve_lowest(&p, 1).unwrap();
    let jz = axial_current(&s, 0, &p).unwrap();
    assert!(jz[0] < 0.0);
    let first_positive = jz.iter().position(|&j| j > 0.0).unwrap();
    assert!(jz[first_positive..].iter().all(|&j| j >= 0.0));
    assert!(axial_backflow_fraction(&s, 0, &p).unwrap() < 0.05);
}

#[test]
fn axial_zero_is_bracketed_on_the_grid() {
    let mut p = RadialProblem::benchmark();
    p.fields.b_tesla = 0.0;
    let r_star = axial_zero_radius(&p).unwrap().unwrap();
    let s = solve_lowest(&p, 1).unwrap();
    let jz = axial_current(&s, 0, &p).unwrap();
    let i = jz.windows(2).position(|w| w[0] < 0.0 && w[1] >= 0.0).unwrap();
    assert!(s.r[i] <= r_star && r_star <= s.r[i + 1], "{} {} {}", s.r[i], r_star, s.r[i + 1]);
    assert!(s.r[i + 1] - s.r[i] <= p.grid.spacing() * (1.0 + 1e-12));
}

#[test]
fn azimuthal_amplitude_is_suppressed_by_twist() {
    // ∫|j̃^φ| dr over the plotting window; the first node alone is dominated by the a/r core tail.
    let amplitude = |omega2: f64| {
        let mut p = RadialProblem::benchmark();
        p.geometry.omega2 = omega2;
        let s = solve_lowest(&p, 1).unwrap();
        let (lo, hi) = PLOT_WINDOW_NM;
        azimuthal_current(&s, 0, &p)
            .unwrap()
            .iter()
            .zip(&s.r)
            .filter(|(_, r)| (lo..=hi).contains(*r))
            .map(|(j, _)| j.abs())
            .sum::<f64>()
            * s.spacing
    };
    let (a, b, c) = (amplitude(0.0), amplitude(1.0), amplitude(2.0));
    assert!(a > b && b > c, "{a} {b} {c}");
}

#[test]
fn azimuthal_sign_at_core_follows_index_shift() {
    for (ell, phi) in [(1, 0.0), (0, 0.0), (2, 0.3), (-1, 0.0)] {
        let mut p = RadialProblem::benchmark();
        p.mode.ell = ell;
        p.fields.phi = phi;
        let shift = p.hamiltonian().ab_shift();
        let s = solve_lowest(&p, 1).unwrap();
        let j = azimuthal_current(&s, 0, &p).unwrap();
        assert_eq!(j[0].signum(), shift.signum(), "ell={ell} phi={phi}");
    }
}

#[test]
fn currents_are_flux_periodic() {
    let p = RadialProblem::benchmark();
    let mut q = p;
    q.mode.ell += 1;
    q.fields.phi += 1.0;
    let a = current_profile(&solve_lowest(&p, 2).unwrap(), 1, &p).unwrap();
    let b = current_profile(&solve_lowest(&q, 2).unwrap(), 1, &q).unwrap();
    let scale = a.j_phi_reduced.iter().fold(0.0f64, |m, j| m.max(j.abs()));
    for (x, y) in a.j_phi_reduced.iter().zip(&b.j_phi_reduced) {
        assert!((x - y).abs() <= 1e-10 * scale);
    }
}

#[test]
fn ring_current_is_flux_periodic() {
    let p = RadialProblem::benchmark();
    let phis: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
    let trace = ring_current_trace(&p, &phis, 0, 20.0, 5.0).unwrap();
    for i in 0..=20 {
        let (a, b) = (trace[i].ring.i_phi, trace[i + 20].ring.i_phi);
        assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-300), "phi={}: {a} vs {b}", phis[i]);
        assert_eq!(trace[i + 20].ell, trace[i].ell + 1);
    }
    assert!(trace.iter().any(|t| t.ring.i_phi > 0.0) && trace.iter().any(|t| t.ring.i_phi < 0.0));
}

#[test]
fn narrow_annulus_reduces_to_midpoint_rule() {
    let mut p = RadialProblem::benchmark();
    p.grid = Grid { n_points: 8001, ..p.grid };
    let s = solve_lowest(&p, 1).unwrap();
    let h = p.grid.spacing();
    let i = p.grid.nearest_index(20.0);
    let r0 = p.grid.node(i);
    let j_phi = azimuthal_current(&s, 0, &p).unwrap()[i - 1];
    let j_z = axial_current(&s, 0, &p).unwrap()[i - 1];
    for cells in [1.0, 2.0, 4.0] {
        let delta = cells * h;
        let ring = annular_currents(&s, 0, &p, r0, delta).unwrap();
        assert!((ring.i_phi / (2.0 * delta * r0 * j_phi) - 1.0).abs() < 1e-2);
        assert!((ring.i_z / (2.0 * delta * r0 * j_z) - 1.0).abs() < 1e-2);
    }
}

#[test]
fn zero_bracket_gives_zero_ring_current() {
    let mut p = RadialProblem::benchmark();
    p.fields = Fields { b_tesla: 0.0, phi: 0.5 };
    let s = solve_lowest(&p, 1).unwrap();
    assert_eq!(annular_currents(&s, 0, &p, 30.0, 5.0).unwrap().i_phi, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn near_axis_sign_law(ell in -2i64..4, phi in -1.0f64..1.0, kz in 0.002f64..0.03, omega1 in 5.0f64..120.0) {
        let p = RadialProblem {
            geometry: helicoid::Geometry { omega1, omega2: 0.0 },
            fields: Fields { b_tesla: 0.0, phi },
            mode: helicoid::Mode { ell, kz },
            grid: Grid { n_points: 800, ..Grid::default() },
            ..RadialProblem::benchmark()
        };
        let margin = omega1 * kz - (ell as f64 - phi);
        prop_assume!(margin.abs() > 1e-6);
        let s = solve_lowest(&p, 1).unwrap();
        let jz = axial_current(&s, 0, &p).unwrap();
        prop_assert_eq!(jz[0].signum() as i8, axis_sign_prediction(&p).unwrap());
    }
}
