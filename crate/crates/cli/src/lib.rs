//! Command implementations behind the `helicoid` binary.
//!
//! Every command reads a validated [`RunConfig`], runs the solver and writes its
//! tables into the output directory. Each file starts with `#` comment lines
//! holding the resolved configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use std::io;
use std::path::PathBuf;

use helicoid::observables::{annular_currents, current_profile, PLOT_WINDOW_NM};
use helicoid::oracles::{
    bessel_dirichlet_eigenvalue, box_eigenvalue, landau_level, numerov_eigenvalue, NUMEROV_MAX_STATE,
};
use helicoid::solver::{
    convergence_check, rmin_sensitivity, solve_eigenvalues, solve_lowest, CONVERGENCE_TOLERANCE,
};
use helicoid::sweeps::{ab_envelope, envelope_minima, landau_fan, run_sweep, SweepAxis, SweepSpec};
use helicoid::units::{eps_from_energy, kinetic_coefficient};
use thiserror::Error;

pub use config::{parse_config, parse_values, ConfigError, RunConfig};
use output::{gnuplot_script, num, write_atomic, Series, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] helicoid::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

/// Exit code for a run whose numerical checks did not pass.
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Clone)]
pub struct Options {
    pub out_dir: PathBuf,
    pub plot: bool,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

struct Writer<'a> {
    opts: &'a Options,
    header: String,
    outcome: Outcome,
}

impl<'a> Writer<'a> {
    fn new(command: &str, config: &RunConfig, opts: &'a Options) -> Self {
        let header = format!(
            "# helicoid {}\n# command = {command}\n{}",
            env!("CARGO_PKG_VERSION"),
            config.provenance()
        );
        Writer { opts, header, outcome: Outcome { passed: true, ..Outcome::default() } }
    }

    fn note(&mut self, line: impl AsRef<str>) {
        self.header.push_str(&format!("# {}\n", line.as_ref()));
    }

    fn table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let path = write_atomic(&self.opts.out_dir, name, &table.render(&self.header))?;
        self.outcome.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = write_atomic(&self.opts.out_dir, name, &format!("{}{body}", self.header))?;
        self.outcome.files.push(path);
        Ok(())
    }

    fn plot(&mut self, name: &str, script: String) -> Result<(), CliError> {
        if self.opts.plot {
            let path = write_atomic(&self.opts.out_dir, name, &script)?;
            self.outcome.files.push(path);
        }
        Ok(())
    }

    fn finish(self) -> Outcome {
        self.outcome
    }
}

fn energy_columns(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (0..k).map(move |n| format!("{prefix}{n}"))
}

/// `spectrum.csv` and one `state_<n>.csv` per state.
pub fn cmd_solve(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let problem = config.problem()?;
    let spectrum = solve_lowest(&problem, config.n_states)?;
    let mut w = Writer::new("solve", config, opts);
    w.note(format!("core_scheme = {:?}", spectrum.scheme).to_lowercase());

    let mut table = Table::new(["n", "eps_per_nm2", "E_meV"]);
    for (n, (eps, e)) in spectrum.eps.iter().zip(&spectrum.energies_mev).enumerate() {
        table.push(vec![n.to_string(), num(*eps), num(*e)]);
        w.outcome.summary.push(format!("n={n}  eps={} nm^-2  E={} meV", num(*eps), num(*e)));
    }
    w.table("spectrum.csv", &table)?;

    let mut series = Vec::new();
    for n in 0..spectrum.len() {
        let u = spectrum.state(n)?;
        let mut t = Table::new(["r_nm", "u", "density_per_nm"]);
        for (r, u) in spectrum.r.iter().zip(u) {
            t.push(vec![num(*r), num(*u), num(u * u / r)]);
        }
        let name = format!("state_{n}.csv");
        w.table(&name, &t)?;
        series.push(Series { file: name, column: 2, label: format!("u_{n}") });
    }
    w.plot("states.gp", gnuplot_script("Radial states", "r (nm)", "u (nm^-1/2)", &series, None))?;
    Ok(w.finish())
}

/// `currents_<n>.csv` and `ring_currents.csv` for `state_index`.
pub fn cmd_currents(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let problem = config.problem()?;
    let n = config.state_index;
    let spectrum = solve_lowest(&problem, config.n_states.max(n + 1))?;
    let profile = current_profile(&spectrum, n, &problem)?;
    let ring = annular_currents(&spectrum, n, &problem, config.ring_r0_nm, config.ring_delta_nm)?;
    let mut w = Writer::new("currents", config, opts);
    w.note("currents are reduced: multiply by hbar/m* for physical units");

    let mut t = Table::new(["r_nm", "density_per_nm", "j_phi_reduced", "j_z_reduced"]);
    for i in 0..profile.r.len() {
        t.push(vec![
            num(profile.r[i]),
            num(profile.density[i]),
            num(profile.j_phi_reduced[i]),
            num(profile.j_z_reduced[i]),
        ]);
    }
    let name = format!("currents_{n}.csv");
    w.table(&name, &t)?;

    let mut rt = Table::new(["r0_nm", "delta_nm", "I_phi", "I_z"]);
    rt.push(vec![num(ring.r0), num(ring.delta), num(ring.i_phi), num(ring.i_z)]);
    w.table("ring_currents.csv", &rt)?;
    w.outcome.summary.push(format!(
        "state {n}: E={} meV  I_phi={}  I_z={} over [{}, {}] nm",
        num(spectrum.energies_mev[n]),
        num(ring.i_phi),
        num(ring.i_z),
        ring.r0 - ring.delta,
        ring.r0 + ring.delta
    ));

    let series = [
        Series { file: name.clone(), column: 3, label: "j_phi".into() },
        Series { file: name, column: 4, label: "j_z".into() },
    ];
    let script =
        gnuplot_script("Reduced currents", "r (nm)", "reduced current", &series, Some(PLOT_WINDOW_NM));
    w.plot(&format!("currents_{n}.gp"), script)?;
    Ok(w.finish())
}

/// `sweep.csv`: energies against `sweep_axis` over `sweep_values`.
pub fn cmd_sweep(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let (axis, values) = match (config.sweep_axis, &config.sweep_values) {
        (Some(axis), Some(values)) => (axis, values.clone()),
        _ => return Err(ConfigError::Invalid("sweep needs sweep_axis and sweep_values".into()).into()),
    };
    let spec = SweepSpec { axis, values, base: config.problem()?, n_states: config.n_states };
    let rows = run_sweep(&spec)?;
    let mut w = Writer::new("sweep", config, opts);
    w.note(format!("axis = {axis}"));
    let mut t =
        Table::new(std::iter::once("axis_value".to_string()).chain(energy_columns("E_", config.n_states)));
    for row in &rows {
        t.push(
            std::iter::once(num(row.axis_value)).chain(row.energies_mev.iter().map(|e| num(*e))).collect(),
        );
    }
    w.table("sweep.csv", &t)?;
    w.outcome.summary.push(format!("{} rows over {axis}", rows.len()));
    let series: Vec<Series> = (0..config.n_states)
        .map(|n| Series { file: "sweep.csv".into(), column: n + 2, label: format!("E_{n}") })
        .collect();
    w.plot("sweep.gp", gnuplot_script("Sweep", axis.name(), "E (meV)", &series, None))?;
    Ok(w.finish())
}

fn axis_values(config: &RunConfig, expected: SweepAxis, default: &str) -> Result<Vec<f64>, CliError> {
    match (config.sweep_axis, &config.sweep_values) {
        (Some(axis), _) if axis != expected => {
            Err(ConfigError::Invalid(format!("this command sweeps {expected}, but sweep_axis = {axis}"))
                .into())
        }
        (_, Some(values)) => Ok(values.clone()),
        (_, None) => Ok(parse_values(default).expect("built-in range")),
    }
}

/// `envelope.csv`: min over ℓ of each level against the flux.
pub fn cmd_envelope(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let phis = axis_values(config, SweepAxis::Phi, "0:2:0.02")?;
    let base = config.problem()?;
    let env = ab_envelope(&base, &phis, config.ell_window(), config.n_states)?;
    let mut w = Writer::new("envelope", config, opts);
    let origin = if config.ell_window().is_some() { "explicit" } else { "default" };
    w.note(format!(
        "ell_window = [{}, {}] ({origin}{})",
        env.ell_window.min,
        env.ell_window.max,
        if env.widened { ", widened once" } else { "" }
    ));
    for &(n, i) in &env.edge_minimizers {
        w.outcome.warnings.push(format!(
            "state {n}: minimizer ell = {} at phi = {} sits on the window edge",
            env.minimizer_ell[n][i], env.phi_values[i]
        ));
    }
    if env.widened {
        w.outcome.warnings.push("default ell window was widened after an edge minimizer".into());
    }
    let columns = std::iter::once("phi".to_string())
        .chain((0..config.n_states).flat_map(|n| [format!("E{n}_env"), format!("ell{n}")]));
    let mut t = Table::new(columns);
    for (i, phi) in env.phi_values.iter().enumerate() {
        let mut row = vec![num(*phi)];
        for n in 0..config.n_states {
            row.push(num(env.env_energies[n][i]));
            row.push(env.minimizer_ell[n][i].to_string());
        }
        t.push(row);
    }
    w.table("envelope.csv", &t)?;
    let minima: Vec<String> = envelope_minima(&env, 0).iter().map(|p| format!("{p:.4}")).collect();
    w.outcome.summary.push(format!("ground-state envelope minima at phi = [{}]", minima.join(", ")));
    let series: Vec<Series> = (0..config.n_states)
        .map(|n| Series { file: "envelope.csv".into(), column: 2 + 2 * n, label: format!("E{n} envelope") })
        .collect();
    w.plot("envelope.gp", gnuplot_script("AB envelope", "phi", "E (meV)", &series, None))?;
    Ok(w.finish())
}

/// `fan.csv`: energies over field values (sweep_values) and twists (fan_omega2_values).
pub fn cmd_fan(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let bs = axis_values(config, SweepAxis::B, "-3:3:0.25")?;
    let rows = landau_fan(&config.problem()?, &bs, &config.fan_omega2_values, config.n_states)?;
    let mut w = Writer::new("fan", config, opts);
    let columns = ["B_tesla".to_string(), "omega2".to_string()]
        .into_iter()
        .chain(energy_columns("E_", config.n_states));
    let mut t = Table::new(columns);
    for row in &rows {
        let mut cells = vec![num(row.b_tesla), num(row.omega2)];
        cells.extend(row.energies_mev.iter().map(|e| num(*e)));
        t.push(cells);
    }
    w.table("fan.csv", &t)?;
    w.outcome.summary.push(format!("{} fan cells", rows.len()));
    let series: Vec<Series> = (0..config.n_states)
        .map(|n| Series { file: "fan.csv".into(), column: n + 3, label: format!("E_{n}") })
        .collect();
    w.plot("fan.gp", gnuplot_script("Landau fan", "B (T)", "E (meV)", &series, None))?;
    Ok(w.finish())
}

/// `convergence.txt`: mesh doubling and box enlargement, plus the r_min diagnostic.
pub fn cmd_check(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let problem = config.problem()?;
    let report = convergence_check(&problem, config.n_states)?;
    let sensitivity = rmin_sensitivity(&problem, &[1e-4, 1e-3, 1e-2], config.n_states)?;
    let mut w = Writer::new("check", config, opts);
    let status = if report.pass { "PASS" } else { "FAIL" };
    let mut body = format!(
        "status = {status}\nmax_rel_change = {}\ntolerance = {}\n\n",
        num(report.max_rel_change),
        num(CONVERGENCE_TOLERANCE)
    );
    body.push_str("n,eps_base,eps_refined_mesh,eps_extended_box,mesh_rel_change,box_rel_change\n");
    for n in 0..report.eps_base.len() {
        body.push_str(&format!(
            "{n},{},{},{},{},{}\n",
            num(report.eps_base[n]),
            num(report.eps_refined_mesh[n]),
            num(report.eps_extended_box[n]),
            num(report.mesh_rel_change[n]),
            num(report.box_rel_change[n])
        ));
    }
    body.push_str("\nrmin_nm,eps_0\n");
    for (r_min, eps) in &sensitivity {
        body.push_str(&format!("{},{}\n", num(*r_min), num(eps[0])));
    }
    w.text("convergence.txt", &body)?;
    w.outcome.summary.push(format!(
        "{status}: max relative change {:.3e} (tolerance {CONVERGENCE_TOLERANCE:e})",
        report.max_rel_change
    ));
    w.outcome.passed = report.pass;
    Ok(w.finish())
}

const ORACLE_TOLERANCE: f64 = 1e-3;
const LANDAU_TOLERANCE: f64 = 2e-3;

/// `oracle.csv`: solver levels against Numerov and any applicable closed form.
pub fn cmd_oracle(config: &RunConfig, opts: &Options) -> Result<Outcome, CliError> {
    let problem = config.problem()?;
    let ham = problem.hamiltonian();
    let k = config.n_states;
    let eps = solve_eigenvalues(&problem, k)?;
    let mut t = Table::new(["n", "method", "eps_solver", "eps_oracle", "rel_diff", "tolerance"]);
    let mut all_pass = true;
    let mut record = |n: usize, method: &str, oracle: f64, tol: f64, t: &mut Table| {
        let rel = ((eps[n] - oracle) / oracle).abs();
        all_pass &= rel < tol;
        t.push(vec![n.to_string(), method.into(), num(eps[n]), num(oracle), num(rel), num(tol)]);
    };

    for n in 0..k.min(NUMEROV_MAX_STATE + 1) {
        let shot = numerov_eigenvalue(&problem, n)?;
        record(n, "numerov", shot.eps, ORACLE_TOLERANCE, &mut t);
    }
    let flat = problem.geometry.omega2 == 0.0 && problem.fields.b_tesla == 0.0;
    let nu = ham.effective_index();
    if flat && (nu - 0.5).abs() < 1e-12 {
        for n in 0..k {
            let exact = box_eigenvalue(n + 1, problem.grid.r_max - problem.grid.r_min)?;
            record(n, "box", exact, ORACLE_TOLERANCE, &mut t);
        }
    } else if flat {
        for n in 0..k {
            let exact = bessel_dirichlet_eigenvalue(nu, n + 1, problem.grid.r_max)?;
            record(n, "bessel", exact, ORACLE_TOLERANCE, &mut t);
        }
    } else if problem.geometry.omega1 == 0.0 && problem.geometry.omega2 == 0.0 {
        let m_eff = problem.mode.ell as f64 - problem.fields.phi;
        for n in 0..k {
            let e = landau_level(n, m_eff, problem.fields.b_tesla, &problem.material)?;
            record(n, "landau", eps_from_energy(e, 0.0, &problem.material), LANDAU_TOLERANCE, &mut t);
        }
    }

    let mut w = Writer::new("oracle", config, opts);
    w.note(format!("kinetic_coefficient_meV_nm2 = {}", num(kinetic_coefficient(&problem.material))));
    w.table("oracle.csv", &t)?;
    let status = if all_pass { "PASS" } else { "FAIL" };
    w.outcome.summary.push(format!("{status}: {} oracle comparisons", t.rows.len()));
    w.outcome.passed = all_pass;
    Ok(w.finish())
}
