//! Numerov shooting for −u'' + U u = ε u on the problem's own grid.

use crate::error::{Error, Result};
use crate::solver::{CoreScheme, RadialProblem};

pub const MAX_STATE: usize = 8;

const RENORMALIZE_ABOVE: f64 = 1e150;
const MATCH_FRACTION: f64 = 0.381_966;
const DEFECT_TOLERANCE: f64 = 1e-10;
const COUNT_TOLERANCE: f64 = 1e-6;
const REGULAR_START_NM: f64 = 2.0;

/// Shooting eigenvalue and the relative width of its final bracket.
pub(super) fn shoot(problem: &RadialProblem, n: usize) -> Result<(f64, f64)> {
    problem.validate()?;
    if n > MAX_STATE {
        return Err(Error::Precondition(format!("shooting supports states 0..={MAX_STATE}, got {n}")));
    }
    let shooter = Shooter::new(problem);

    let mut lo = shooter.potential.iter().skip(shooter.start).cloned().fold(f64::INFINITY, f64::min);
    lo -= 1e-12 * lo.abs().max(1e-12);
    if shooter.outward(lo).1 > n {
        return Err(Error::Shooting {
            state: n,
            reason: format!("{} nodes at the potential minimum", shooter.outward(lo).1),
        });
    }
    let span = problem.grid.r_max - problem.grid.r_min;
    let mut step = (std::f64::consts::PI * (n + 1) as f64 / span).powi(2);
    let mut hi = lo + step;
    let mut expansions = 0;
    while shooter.outward(hi).1 <= n {
        step *= 2.0;
        hi = lo + step;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::Shooting { state: n, reason: "no upper bracket".into() });
        }
    }

    bisect_by_count(&shooter, n, &mut lo, &mut hi, COUNT_TOLERANCE);

    let mid = 0.5 * (lo + hi);
    let m = shooter.matching_index(mid);
    let d_lo = shooter.defect(lo, m);
    let d_hi = shooter.defect(hi, m);
    if d_lo.is_finite() && d_hi.is_finite() && d_lo * d_hi < 0.0 {
        let mut d_lo = d_lo;
        while hi - lo > DEFECT_TOLERANCE * lo.abs().max(hi.abs()) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let d = shooter.defect(mid, m);
            if d * d_lo > 0.0 {
                lo = mid;
                d_lo = d;
            } else {
                hi = mid;
            }
        }
    } else {
        bisect_by_count(&shooter, n, &mut lo, &mut hi, DEFECT_TOLERANCE);
    }

    let eps = 0.5 * (lo + hi);
    let found = shooter.outward(lo).1;
    if found != n {
        return Err(Error::NodeCount { expected: n, found });
    }
    Ok((eps, (hi - lo) / eps.abs().max(f64::MIN_POSITIVE)))
}

fn bisect_by_count(shooter: &Shooter, n: usize, lo: &mut f64, hi: &mut f64, tol: f64) {
    while *hi - *lo > tol * lo.abs().max(hi.abs()) {
        let mid = 0.5 * (*lo + *hi);
        if mid <= *lo || mid >= *hi {
            break;
        }
        if shooter.outward(mid).1 > n {
            *hi = mid;
        } else {
            *lo = mid;
        }
    }
}

struct Shooter {
    r: Vec<f64>,
    potential: Vec<f64>,
    h2: f64,
    /// First node carrying the outward start values `(u[start-1], u[start])`.
    start: usize,
    start_values: StartValues,
}

enum StartValues {
    Zero,
    Frobenius { nu: f64, a: f64, p: f64, beta: f64 },
}

impl Shooter {
    fn new(problem: &RadialProblem) -> Self {
        let grid = problem.grid;
        let ham = problem.hamiltonian();
        let r: Vec<f64> = (0..grid.n_points).map(|i| grid.node(i)).collect();
        let potential: Vec<f64> = r.iter().map(|&x| ham.potential_at(x)).collect();
        let h = grid.spacing();
        let h2 = h * h;
        let last = grid.n_points - 3;
        match problem.core_scheme() {
            CoreScheme::Dirichlet => {
                // Skip the deep core where Numerov's 1 − h²U/12 factor changes sign.
                let start = (1..last).find(|&i| h2 * potential[i] / 12.0 < 0.1).unwrap_or(1);
                Shooter { r, potential, h2, start, start_values: StartValues::Zero }
            }
            CoreScheme::Regular => {
                let start = (1..last).find(|&i| r[i] >= REGULAR_START_NM).unwrap_or(1);
                let a = ham.ab_shift();
                Shooter {
                    r,
                    potential,
                    h2,
                    start,
                    start_values: StartValues::Frobenius {
                        nu: a.abs(),
                        a,
                        p: problem.mode.kz * problem.geometry.omega2,
                        beta: ham.beta_b(),
                    },
                }
            }
        }
    }

    fn initial(&self, eps: f64) -> (f64, f64) {
        match self.start_values {
            StartValues::Zero => (0.0, 1e-20),
            StartValues::Frobenius { nu, a, p, beta } => {
                let s = self.start;
                let u0 = frobenius(self.r[s - 1], eps, nu, a, p, beta);
                let u1 = frobenius(self.r[s], eps, nu, a, p, beta);
                let scale = u1.abs().max(u0.abs()).max(f64::MIN_POSITIVE);
                (u0 / scale, u1 / scale)
            }
        }
    }

    fn weight(&self, i: usize, eps: f64) -> f64 {
        1.0 - self.h2 * (self.potential[i] - eps) / 12.0
    }

    fn step(&self, i: usize, eps: f64, u_prev: f64, u_here: f64, dir: isize) -> f64 {
        let next = (i as isize + dir) as usize;
        let prev = (i as isize - dir) as usize;
        let w_here = self.weight(i, eps);
        ((12.0 - 10.0 * w_here) * u_here - self.weight(prev, eps) * u_prev) / self.weight(next, eps)
    }

    /// Outward solution over the whole grid and its sign changes up to and including r_max.
    fn outward(&self, eps: f64) -> (Vec<f64>, usize) {
        let n = self.r.len();
        let mut u = vec![0.0; n];
        let (u0, u1) = self.initial(eps);
        u[self.start - 1] = u0;
        u[self.start] = u1;
        let mut nodes = 0;
        for i in self.start..n - 1 {
            u[i + 1] = self.step(i, eps, u[i - 1], u[i], 1);
            if u[i + 1].abs() > RENORMALIZE_ABOVE {
                u[..=i + 1].iter_mut().for_each(|x| *x /= RENORMALIZE_ABOVE);
            }
            if u[i] * u[i + 1] < 0.0 {
                nodes += 1;
            }
        }
        (u, nodes)
    }

    /// Inward solution from u(r_max) = 0 down to node `m - 1`.
    fn inward(&self, eps: f64, m: usize) -> Vec<f64> {
        let n = self.r.len();
        let mut u = vec![0.0; n];
        u[n - 2] = 1e-20;
        for i in (m..n - 1).rev() {
            u[i - 1] = self.step(i, eps, u[i + 1], u[i], -1);
            if u[i - 1].abs() > RENORMALIZE_ABOVE {
                u[i - 1..].iter_mut().for_each(|x| *x /= RENORMALIZE_ABOVE);
            }
        }
        u
    }

    fn matching_index(&self, eps: f64) -> usize {
        let n = self.r.len();
        let lo = self.start + 2;
        let hi = n - 3;
        let turning = (lo..=hi).rev().find(|&i| self.potential[i] < eps);
        match turning {
            Some(i) if i < lo + (9 * (hi - lo)) / 10 => i,
            _ => lo + ((hi - lo) as f64 * MATCH_FRACTION) as usize,
        }
    }

    /// Difference of the centred logarithmic derivatives at node `m`.
    fn defect(&self, eps: f64, m: usize) -> f64 {
        let (out, _) = self.outward(eps);
        let inn = self.inward(eps, m);
        (out[m + 1] - out[m - 1]) / out[m] - (inn[m + 1] - inn[m - 1]) / inn[m]
    }
}

/// √r R(r) with R = r^ν Σ c_k r^k solving R'' + R'/r = (bracket²/r² − ε) R.
fn frobenius(r: f64, eps: f64, nu: f64, a: f64, p: f64, beta: f64) -> f64 {
    let v_inv = -2.0 * a * p;
    let v0 = p * p - 2.0 * a * beta - eps;
    let v1 = 2.0 * p * beta;
    let v2 = beta * beta;
    let mut c = vec![1.0f64];
    let mut sum = 1.0;
    let mut power = 1.0;
    let mut quiet = 0;
    for k in 1..200usize {
        let kf = k as f64;
        let get = |j: isize| if j >= 0 { c[j as usize] } else { 0.0 };
        let k = k as isize;
        let ck = (v_inv * get(k - 1) + v0 * get(k - 2) + v1 * get(k - 3) + v2 * get(k - 4))
            / (kf * (kf + 2.0 * nu));
        c.push(ck);
        power *= r;
        let term = ck * power;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    r.powf(nu + 0.5) * sum
}
