//! Parameter scans, Aharonov-Bohm envelopes, the reindexing symmetry and Landau fans.
//!
//! Sweep points are solved in parallel; results always come back in input order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::observables::{annular_currents, RingCurrents};
use crate::solver::{solve_eigenvalues, solve_lowest, RadialProblem};
use crate::units::energy_from_eps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Omega1,
    Omega2,
    B,
    Phi,
    Kz,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Omega1 => "omega1",
            SweepAxis::Omega2 => "omega2",
            SweepAxis::B => "B",
            SweepAxis::Phi => "phi",
            SweepAxis::Kz => "kz",
        }
    }

    /// Copy of `problem` with this axis set to `value`.
    pub fn apply(self, problem: &RadialProblem, value: f64) -> RadialProblem {
        let mut p = *problem;
        match self {
            SweepAxis::Omega1 => p.geometry.omega1 = value,
            SweepAxis::Omega2 => p.geometry.omega2 = value,
            SweepAxis::B => p.fields.b_tesla = value,
            SweepAxis::Phi => p.fields.phi = value,
            SweepAxis::Kz => p.mode.kz = value,
        }
        p
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "omega1" | "omega1_nm" => Ok(SweepAxis::Omega1),
            "omega2" => Ok(SweepAxis::Omega2),
            "B" | "B_tesla" => Ok(SweepAxis::B),
            "phi" => Ok(SweepAxis::Phi),
            "kz" | "kz_per_nm" => Ok(SweepAxis::Kz),
            other => {
                Err(invalid("sweep_axis", format!("expected omega1, omega2, B, phi or kz, got `{other}`")))
            }
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: RadialProblem,
    pub n_states: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(invalid("sweep_values", "no values given"));
        }
        if let Some(bad) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(invalid("sweep_values", format!("non-finite value {bad}")));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("sweep_values", "values must be strictly increasing"));
        }
        self.base.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub energies_mev: Vec<f64>,
    pub eps: Vec<f64>,
}

fn annotate(axis: &'static str, value: f64) -> impl FnOnce(Error) -> Error {
    move |source| Error::SweepPoint { axis, value, source: Box::new(source) }
}

fn energies(problem: &RadialProblem, eps: &[f64]) -> Vec<f64> {
    eps.iter().map(|&e| energy_from_eps(e, problem.mode.kz, &problem.material)).collect()
}

/// One solve per value of the swept axis.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.values
        .par_iter()
        .map(|&value| {
            let problem = spec.axis.apply(&spec.base, value);
            let eps =
                solve_eigenvalues(&problem, spec.n_states).map_err(annotate(spec.axis.name(), value))?;
            Ok(SweepRow { axis_value: value, energies_mev: energies(&problem, &eps), eps })
        })
        .collect()
}

/// Inclusive range of azimuthal indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllWindow {
    pub min: i64,
    pub max: i64,
}

impl EllWindow {
    pub fn new(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(Error::EmptyWindow);
        }
        Ok(EllWindow { min, max })
    }

    /// [⌊k_zω₁ + φ_min⌋ − 3, ⌈k_zω₁ + φ_max⌉ + 3].
    pub fn around(base: &RadialProblem, phi_values: &[f64]) -> Self {
        let shift = base.mode.kz * base.geometry.omega1;
        let lo = phi_values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = phi_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        EllWindow { min: (shift + lo).floor() as i64 - 3, max: (shift + hi).ceil() as i64 + 3 }
    }

    pub fn widened(self, by: i64) -> Self {
        EllWindow { min: self.min - by, max: self.max + by }
    }

    pub fn contains(self, ell: i64) -> bool {
        (self.min..=self.max).contains(&ell)
    }

    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    pub phi_values: Vec<f64>,
    /// `env_energies[n][i]`: min over ℓ of E_{n,ℓ}(φ_i) in meV.
    pub env_energies: Vec<Vec<f64>>,
    pub minimizer_ell: Vec<Vec<i64>>,
    pub ell_window: EllWindow,
    /// `(n, i)` pairs whose minimizer sits on the window edge.
    pub edge_minimizers: Vec<(usize, usize)>,
    /// Whether the default window was widened after an edge hit.
    pub widened: bool,
}

/// E_n^env(φ) = min over ℓ in the window of E_{n,ℓ}(φ). Ties go to the smaller ℓ.
///
/// Without an explicit window the default from [`EllWindow::around`] is used and
/// widened once by three on each side if a minimizer lands on its edge.
pub fn ab_envelope(
    base: &RadialProblem,
    phi_values: &[f64],
    window: Option<EllWindow>,
    n_states: usize,
) -> Result<EnvelopeResult> {
    if phi_values.is_empty() {
        return Err(invalid("phi_values", "no flux values given"));
    }
    if let Some(w) = window {
        EllWindow::new(w.min, w.max)?;
    }
    let explicit = window.is_some();
    let mut window = window.unwrap_or_else(|| EllWindow::around(base, phi_values));
    let mut result = envelope_in(base, phi_values, window, n_states)?;
    if !explicit && !result.edge_minimizers.is_empty() {
        window = window.widened(3);
        result = envelope_in(base, phi_values, window, n_states)?;
        result.widened = true;
    }
    Ok(result)
}

fn envelope_in(
    base: &RadialProblem,
    phi_values: &[f64],
    window: EllWindow,
    n_states: usize,
) -> Result<EnvelopeResult> {
    let ells: Vec<i64> = window.iter().collect();
    let cells: Vec<(f64, i64)> =
        phi_values.iter().flat_map(|&phi| ells.iter().map(move |&ell| (phi, ell))).collect();
    let levels: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(phi, ell)| {
            let mut p = *base;
            p.fields.phi = phi;
            p.mode.ell = ell;
            let eps = solve_eigenvalues(&p, n_states).map_err(annotate("phi", phi))?;
            Ok(energies(&p, &eps))
        })
        .collect::<Result<_>>()?;

    let mut env_energies = vec![vec![0.0; phi_values.len()]; n_states];
    let mut minimizer_ell = vec![vec![0; phi_values.len()]; n_states];
    let mut edge_minimizers = Vec::new();
    for (i, _) in phi_values.iter().enumerate() {
        let row = &levels[i * ells.len()..(i + 1) * ells.len()];
        for n in 0..n_states {
            let (best, ell) =
                row.iter().zip(&ells).fold((f64::INFINITY, ells[0]), |(e_min, l_min), (e, &l)| {
                    if e[n] < e_min {
                        (e[n], l)
                    } else {
                        (e_min, l_min)
                    }
                });
            env_energies[n][i] = best;
            minimizer_ell[n][i] = ell;
            if ells.len() > 1 && (ell == window.min || ell == window.max) {
                edge_minimizers.push((n, i));
            }
        }
    }
    Ok(EnvelopeResult {
        phi_values: phi_values.to_vec(),
        env_energies,
        minimizer_ell,
        ell_window: window,
        edge_minimizers,
        widened: false,
    })
}

/// Flux values where the envelope of state `n` has a strict local minimum.
pub fn envelope_minima(result: &EnvelopeResult, n: usize) -> Vec<f64> {
    let e = &result.env_energies[n];
    (1..e.len().saturating_sub(1))
        .filter(|&i| e[i] < e[i - 1] && e[i] <= e[i + 1])
        .map(|i| result.phi_values[i])
        .collect()
}

/// `(φ_i, φ_{i+1}, ℓ_i, ℓ_{i+1})` for every change of the minimizing ℓ of state `n`.
pub fn minimizer_steps(result: &EnvelopeResult, n: usize) -> Vec<(f64, f64, i64, i64)> {
    let ell = &result.minimizer_ell[n];
    let phi = &result.phi_values;
    (0..ell.len().saturating_sub(1))
        .filter(|&i| ell[i] != ell[i + 1])
        .map(|i| (phi[i], phi[i + 1], ell[i], ell[i + 1]))
        .collect()
}

/// max_n |ΔE_n|/|E_n| between (ω₁ + Δω₁, ℓ) and (ω₁, ℓ − 1).
pub fn reindex_deviation(base: &RadialProblem, n_states: usize, delta_omega1: f64) -> Result<f64> {
    let mut shifted = *base;
    shifted.geometry.omega1 += delta_omega1;
    let mut lowered = *base;
    lowered.mode.ell -= 1;
    let a = energies(&shifted, &solve_eigenvalues(&shifted, n_states)?);
    let b = energies(&lowered, &solve_eigenvalues(&lowered, n_states)?);
    Ok(a.iter().zip(&b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max))
}

/// Reindexing deviation for one full period Δω₁ = 1/k_z.
pub fn reindex_check(base: &RadialProblem, n_states: usize) -> Result<f64> {
    if base.mode.kz == 0.0 {
        return Err(Error::Precondition("reindexing needs kz != 0".into()));
    }
    reindex_deviation(base, n_states, 1.0 / base.mode.kz)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanRow {
    pub b_tesla: f64,
    pub omega2: f64,
    pub energies_mev: Vec<f64>,
}

/// E_n(B; ω₂) on the product grid, ω₂ outer and B inner.
pub fn landau_fan(
    base: &RadialProblem,
    b_values: &[f64],
    omega2_values: &[f64],
    n_states: usize,
) -> Result<Vec<FanRow>> {
    if b_values.is_empty() {
        return Err(invalid("sweep_values", "no field values given"));
    }
    if omega2_values.is_empty() {
        return Err(invalid("fan_omega2_values", "no twist values given"));
    }
    let cells: Vec<(f64, f64)> =
        omega2_values.iter().flat_map(|&w| b_values.iter().map(move |&b| (w, b))).collect();
    cells
        .par_iter()
        .map(|&(omega2, b_tesla)| {
            let mut p = *base;
            p.geometry.omega2 = omega2;
            p.fields.b_tesla = b_tesla;
            let eps = solve_eigenvalues(&p, n_states).map_err(annotate("B", b_tesla))?;
            Ok(FanRow { b_tesla, omega2, energies_mev: energies(&p, &eps) })
        })
        .collect()
}

/// Forward-difference dE₀/dω₂ at ω₂ = 0 (meV per unit twist).
pub fn omega2_slope(base: &RadialProblem, step: f64) -> Result<f64> {
    let at = |omega2: f64| -> Result<f64> {
        let mut p = *base;
        p.geometry.omega2 = omega2;
        Ok(energies(&p, &solve_eigenvalues(&p, 1)?)[0])
    };
    Ok((at(step)? - at(0.0)?) / step)
}

/// ℓ closest to φ + k_zω₁, ties to the smaller index.
pub fn nearest_branch(base: &RadialProblem, phi: f64) -> i64 {
    (phi + base.mode.kz * base.geometry.omega1 - 0.5).ceil() as i64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxTracePoint {
    pub phi: f64,
    pub ell: i64,
    pub ring: RingCurrents,
}

/// Ring currents of state `n` along the branch ℓ(φ) = [`nearest_branch`].
pub fn ring_current_trace(
    base: &RadialProblem,
    phi_values: &[f64],
    n: usize,
    r0: f64,
    delta: f64,
) -> Result<Vec<FluxTracePoint>> {
    phi_values
        .par_iter()
        .map(|&phi| {
            let mut p = *base;
            p.fields.phi = phi;
            p.mode.ell = nearest_branch(base, phi);
            let spectrum = solve_lowest(&p, n + 1).map_err(annotate("phi", phi))?;
            let ring = annular_currents(&spectrum, n, &p, r0, delta).map_err(annotate("phi", phi))?;
            Ok(FluxTracePoint { phi, ell: p.mode.ell, ring })
        })
        .collect()
}
