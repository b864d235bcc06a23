//! Finite-difference discretization of the radial problem −u'' + U u = ε u and
//! extraction of its lowest eigenpairs.

mod grid;
mod tridiag;

pub use grid::{CoreBoundary, CoreScheme, Grid, MIN_POINTS};
pub use tridiag::SymTridiagonal;

use crate::error::{Error, Result};
use crate::model::{Fields, Geometry, Hamiltonian, Mode};
use crate::units::{energy_from_eps, Material};

/// Relative eigenvalue change accepted by [`convergence_check`].
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;

/// Radial eigenproblem: physical parameters plus discretization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadialProblem {
    pub geometry: Geometry,
    pub fields: Fields,
    pub mode: Mode,
    pub material: Material,
    pub grid: Grid,
}

impl RadialProblem {
    pub fn new(hamiltonian: Hamiltonian, grid: Grid) -> Self {
        RadialProblem {
            geometry: hamiltonian.geometry,
            fields: hamiltonian.fields,
            mode: hamiltonian.mode,
            material: hamiltonian.material,
            grid,
        }
    }

    /// Electron in GaAs with ω₁ = 50 nm, ω₂ = 0, ℓ = 1, k_z = 0.01 nm⁻¹, B = 1 T,
    /// on N = 2000 nodes spanning [10⁻³, 500] nm.
    pub fn benchmark() -> Self {
        RadialProblem {
            geometry: Geometry { omega1: 50.0, omega2: 0.0 },
            fields: Fields { b_tesla: 1.0, phi: 0.0 },
            mode: Mode { ell: 1, kz: 0.01 },
            material: Material::gaas_electron(),
            grid: Grid::default(),
        }
    }

    pub fn hamiltonian(&self) -> Hamiltonian {
        Hamiltonian { geometry: self.geometry, fields: self.fields, mode: self.mode, material: self.material }
    }

    pub fn validate(&self) -> Result<()> {
        self.hamiltonian().validate()?;
        self.grid.validate()
    }

    pub fn core_scheme(&self) -> CoreScheme {
        self.grid.core.resolve(self.hamiltonian().effective_index())
    }

    pub fn with_grid(self, grid: Grid) -> Self {
        RadialProblem { grid, ..self }
    }

    /// Largest number of states [`solve_lowest`] will return.
    pub fn max_states(&self) -> usize {
        self.grid.n_points / 4
    }
}

/// Lowest eigenpairs of a [`RadialProblem`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Eigenvalues in nm⁻², strictly increasing.
    pub eps: Vec<f64>,
    /// Langer fields u at the interior nodes, normalized to h·Σu² = 1.
    pub u_vectors: Vec<Vec<f64>>,
    pub energies_mev: Vec<f64>,
    /// Interior node radii (nm).
    pub r: Vec<f64>,
    pub spacing: f64,
    pub scheme: CoreScheme,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn state(&self, n: usize) -> Result<&[f64]> {
        self.u_vectors.get(n).map(Vec::as_slice).ok_or(Error::StateIndex { index: n, available: self.len() })
    }

    /// Trapezoid ∫|u_n|² dr with zero end values.
    pub fn norm(&self, n: usize) -> Result<f64> {
        Ok(self.spacing * self.state(n)?.iter().map(|u| u * u).sum::<f64>())
    }
}

/// Symmetric tridiagonal operator on the interior nodes.
///
/// With the Dirichlet core the diagonal is 2/h² + U(r_i) and the coupling −1/h².
/// The regular core uses the flux form −(1/r)(r R')' + (bracket²/r²) R written for
/// u = √r R, with the innermost face closed by R'/R = ν/r.
pub fn assemble_tridiagonal(problem: &RadialProblem) -> Result<SymTridiagonal> {
    problem.validate()?;
    let h = problem.grid.spacing();
    let r = problem.grid.interior_nodes();
    let ham = problem.hamiltonian();
    let n = r.len();
    let h2 = h * h;

    match problem.core_scheme() {
        CoreScheme::Dirichlet => {
            let diagonal = r.iter().map(|&ri| 2.0 / h2 + ham.potential_at(ri)).collect();
            Ok(SymTridiagonal::new(diagonal, vec![-1.0 / h2; n - 1]))
        }
        CoreScheme::Regular => {
            let nu = ham.effective_index();
            let mut diagonal: Vec<f64> = r
                .iter()
                .map(|&ri| {
                    let g = ham.bracket(ri);
                    2.0 / h2 + g * g / (ri * ri)
                })
                .collect();
            let r1 = r[0];
            let face = r1 - 0.5 * h;
            diagonal[0] = (r1 + 0.5 * h) / (r1 * h2)
                + nu * (face / r1).powf(nu) / (r1 * h)
                + ham.bracket(r1).powi(2) / (r1 * r1);
            let off_diagonal =
                r.windows(2).map(|w| -(w[0] + 0.5 * h) / (h2 * (w[0] * w[1]).sqrt())).collect();
            Ok(SymTridiagonal::new(diagonal, off_diagonal))
        }
    }
}

fn check_state_count(problem: &RadialProblem, k: usize) -> Result<()> {
    let max = problem.max_states();
    if k == 0 || k > max {
        return Err(Error::StateCount { requested: k, max });
    }
    Ok(())
}

/// Lowest `k` eigenvalues (nm⁻²) without eigenvectors.
pub fn solve_eigenvalues(problem: &RadialProblem, k: usize) -> Result<Vec<f64>> {
    problem.validate()?;
    check_state_count(problem, k)?;
    Ok(assemble_tridiagonal(problem)?.lowest_eigenvalues(k))
}

/// Lowest `k` eigenpairs, eigenvectors normalized and sign-fixed.
pub fn solve_lowest(problem: &RadialProblem, k: usize) -> Result<Spectrum> {
    problem.validate()?;
    check_state_count(problem, k)?;
    let matrix = assemble_tridiagonal(problem)?;
    let eps = matrix.lowest_eigenvalues(k);
    let h = problem.grid.spacing();

    let mut unit_vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (n, &lambda) in eps.iter().enumerate() {
        let width = 1e-10 * lambda.abs().max(f64::EPSILON);
        let cluster: Vec<&[f64]> = eps[..n]
            .iter()
            .zip(&unit_vectors)
            .filter(|(&other, _)| (other - lambda).abs() <= width)
            .map(|(_, v)| v.as_slice())
            .collect();
        let (mut v, _) = matrix.eigenvector(lambda, &cluster, n)?;
        fix_sign(&mut v);
        unit_vectors.push(v);
    }

    let scale = 1.0 / h.sqrt();
    let u_vectors = unit_vectors.into_iter().map(|v| v.into_iter().map(|x| x * scale).collect()).collect();
    let energies_mev = eps.iter().map(|&e| energy_from_eps(e, problem.mode.kz, &problem.material)).collect();
    Ok(Spectrum {
        eps,
        u_vectors,
        energies_mev,
        r: problem.grid.interior_nodes(),
        spacing: h,
        scheme: problem.core_scheme(),
    })
}

fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Outcome of the mesh-doubling and box-enlargement test.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub eps_base: Vec<f64>,
    pub eps_refined_mesh: Vec<f64>,
    pub eps_extended_box: Vec<f64>,
    pub mesh_rel_change: Vec<f64>,
    pub box_rel_change: Vec<f64>,
    pub max_rel_change: f64,
    pub pass: bool,
}

/// Re-solves with N → 2N and, separately, with r_max → 1.3 r_max at the same spacing.
pub fn convergence_check(problem: &RadialProblem, k: usize) -> Result<ConvergenceReport> {
    let eps_base = solve_eigenvalues(problem, k)?;
    let refined = problem.with_grid(problem.grid.refined());
    let extended = problem.with_grid(problem.grid.extended(1.3));
    let eps_refined_mesh = solve_eigenvalues(&refined, k)?;
    let eps_extended_box = solve_eigenvalues(&extended, k)?;

    let rel = |other: &[f64]| -> Vec<f64> {
        eps_base.iter().zip(other).map(|(b, o)| (o - b).abs() / b.abs().max(f64::MIN_POSITIVE)).collect()
    };
    let mesh_rel_change = rel(&eps_refined_mesh);
    let box_rel_change = rel(&eps_extended_box);
    let max_rel_change = mesh_rel_change.iter().chain(&box_rel_change).fold(0.0f64, |m, &x| m.max(x));
    Ok(ConvergenceReport {
        eps_base,
        eps_refined_mesh,
        eps_extended_box,
        mesh_rel_change,
        box_rel_change,
        max_rel_change,
        pass: max_rel_change < CONVERGENCE_TOLERANCE,
    })
}

/// Eigenvalues at each inner cutoff in `r_mins`, other settings unchanged.
pub fn rmin_sensitivity(problem: &RadialProblem, r_mins: &[f64], k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    r_mins
        .iter()
        .map(|&r_min| {
            let grid = Grid { r_min, ..problem.grid };
            Ok((r_min, solve_eigenvalues(&problem.with_grid(grid), k)?))
        })
        .collect()
}
