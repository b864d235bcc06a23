use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

pub const MIN_POINTS: usize = 16;

/// Treatment of the innermost cell.
///
/// `Dirichlet` pins u(r_min) = 0 with the plain three-point stencil.
/// `Regular` uses the flux form of the radial operator with a Robin face that
/// enforces the axis-regular behaviour R ~ r^ν. `Auto` picks `Dirichlet` for
/// ν ≥ 1/2 and `Regular` below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoreBoundary {
    #[default]
    Auto,
    Dirichlet,
    Regular,
}

/// Scheme actually used after resolving [`CoreBoundary::Auto`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreScheme {
    Dirichlet,
    Regular,
}

const AUTO_SWITCH_SLACK: f64 = 1e-12;

impl CoreBoundary {
    pub fn resolve(self, effective_index: f64) -> CoreScheme {
        match self {
            CoreBoundary::Dirichlet => CoreScheme::Dirichlet,
            CoreBoundary::Regular => CoreScheme::Regular,
            CoreBoundary::Auto if effective_index >= 0.5 - AUTO_SWITCH_SLACK => CoreScheme::Dirichlet,
            CoreBoundary::Auto => CoreScheme::Regular,
        }
    }
}

impl FromStr for CoreBoundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(CoreBoundary::Auto),
            "dirichlet" => Ok(CoreBoundary::Dirichlet),
            "regular" => Ok(CoreBoundary::Regular),
            other => {
                Err(invalid("core_boundary", format!("expected auto, dirichlet or regular, got `{other}`")))
            }
        }
    }
}

impl fmt::Display for CoreBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoreBoundary::Auto => "auto",
            CoreBoundary::Dirichlet => "dirichlet",
            CoreBoundary::Regular => "regular",
        })
    }
}

/// Uniform radial mesh with `n_points` nodes including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub core: CoreBoundary,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        let grid = Grid { r_min, r_max, n_points, core: CoreBoundary::Auto };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_core(self, core: CoreBoundary) -> Self {
        Grid { core, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min.is_finite() && self.r_min > 0.0) {
            return Err(invalid("rmin_nm", format!("must be > 0, got {}", self.r_min)));
        }
        if !(self.r_max.is_finite() && self.r_max > self.r_min) {
            return Err(invalid(
                "rmax_nm",
                format!("must exceed rmin_nm = {}, got {}", self.r_min, self.r_max),
            ));
        }
        if self.n_points < MIN_POINTS {
            return Err(invalid(
                "n_points",
                format!("requires at least {MIN_POINTS} points, got {}", self.n_points),
            ));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing()
    }

    pub fn interior_len(&self) -> usize {
        self.n_points - 2
    }

    /// Nodes 1..=N-2, where the unknowns live.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.n_points - 1).map(|i| self.node(i)).collect()
    }

    /// Index of the node nearest to `r`, clamped to the grid.
    pub fn nearest_index(&self, r: f64) -> usize {
        let x = ((r - self.r_min) / self.spacing()).round();
        x.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Doubled node count on the same interval.
    pub fn refined(&self) -> Grid {
        Grid { n_points: 2 * self.n_points, ..*self }
    }

    /// Outer radius scaled by `factor`, node count adjusted to keep the spacing.
    pub fn extended(&self, factor: f64) -> Grid {
        let r_max = self.r_max * factor;
        let n = ((r_max - self.r_min) / self.spacing()).round() as usize + 1;
        Grid { r_max, n_points: n.max(MIN_POINTS), ..*self }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid { r_min: 1e-3, r_max: 500.0, n_points: 2000, core: CoreBoundary::Auto }
    }
}
