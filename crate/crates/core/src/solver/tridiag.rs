//! Symmetric tridiagonal eigenproblems: Sturm-count bisection for eigenvalues and
//! inverse iteration (pivoted LU) for eigenvectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    /// `off_diagonal[i]` couples rows `i` and `i + 1`.
    pub off_diagonal: Vec<f64>,
}

const MAX_BISECTION_STEPS: usize = 4000;
const MAX_INVERSE_ITERATIONS: usize = 8;

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Self {
        assert_eq!(off_diagonal.len() + 1, diagonal.len().max(1));
        SymTridiagonal { diagonal, off_diagonal }
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Bounds `(lo, hi)` enclosing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    fn pivot_floor(&self) -> f64 {
        let max_e2 = self.off_diagonal.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * max_e2
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        self.count_with_floor(lambda, self.pivot_floor())
    }

    fn count_with_floor(&self, lambda: f64, floor: f64) -> usize {
        let mut count = 0;
        let mut q = self.diagonal[0] - lambda;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off_diagonal[i - 1];
                q = self.diagonal[i] - lambda - e * e / q;
            }
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` algebraically smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let floor = self.pivot_floor();
        let (g_lo, g_hi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * self.norm_bound() + floor;
        let (g_lo, g_hi) = (g_lo - pad, g_hi + pad);
        let mut out = Vec::with_capacity(k);
        let mut lo_start = g_lo;
        for j in 0..k.min(self.len()) {
            let (mut lo, mut hi) = (lo_start, g_hi);
            for _ in 0..MAX_BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                let tol = (2.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(floor);
                if hi - lo <= tol || mid <= lo || mid >= hi {
                    break;
                }
                if self.count_with_floor(mid, floor) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            lo_start = lo;
            out.push(0.5 * (lo + hi));
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Unit-norm eigenvector for the eigenvalue `lambda`, orthogonalized against
    /// every vector in `cluster`. Returns the vector and the final residual norm.
    pub fn eigenvector(&self, lambda: f64, cluster: &[&[f64]], state: usize) -> Result<(Vec<f64>, f64)> {
        let n = self.len();
        let norm = self.norm_bound();
        let lu = ShiftedLu::factor(self, lambda, f64::EPSILON * norm);
        let tol = 1e3 * f64::EPSILON * norm * (n as f64).sqrt();

        let mut x = start_vector(n);
        project_out(&mut x, cluster);
        normalize(&mut x);
        let mut residuals = Vec::new();
        for iteration in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut x);
            project_out(&mut x, cluster);
            if !normalize(&mut x) {
                x = start_vector(n);
                project_out(&mut x, cluster);
                normalize(&mut x);
                continue;
            }
            let ax = self.apply(&x);
            let r = ax.iter().zip(&x).map(|(a, v)| (a - lambda * v).powi(2)).sum::<f64>().sqrt();
            residuals.push(r);
            if iteration >= 1 && r <= tol {
                return Ok((x, r));
            }
        }
        Err(Error::Convergence { state, residuals })
    }
}

/// Deterministic start vector without reflection symmetry.
fn start_vector(n: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    (0..n).map(|i| 0.5 + ((i as f64 + 1.0) * GOLDEN).fract()).collect()
}

fn project_out(x: &mut [f64], basis: &[&[f64]]) {
    for v in basis {
        let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(v.iter()).for_each(|(a, b)| *a -= dot * b);
    }
}

fn normalize(x: &mut [f64]) -> bool {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0 && scale.is_finite()) {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= scale);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    true
}

/// LU factorization of `T - λI` with partial pivoting.
struct ShiftedLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, lambda: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut lower = t.off_diagonal.clone();
        let mut upper = t.off_diagonal.clone();
        let mut diag: Vec<f64> = t.diagonal.iter().map(|d| d - lambda).collect();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] != 0.0 {
                    let fact = lower[i] / diag[i];
                    lower[i] = fact;
                    diag[i + 1] -= fact * upper[i];
                }
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for d in diag.iter_mut() {
            if d.abs() < tiny {
                *d = if *d < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu { lower, diag, upper, upper2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}
