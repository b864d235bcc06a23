//! Bessel functions of the first kind for real order ν ≥ 0 and their positive zeros.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let sum = LANCZOS.iter().enumerate().skip(1).fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64));
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

const SERIES_LIMIT: f64 = 10.0;

/// J_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        ascending_series(nu, x)
    } else {
        backward_recurrence(nu, x)
    }
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if kf > half && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's algorithm normalized by (x/2)^ν = Σ_m c_m J_{ν+2m}(x), with
/// c_0 = Γ(ν+1) and c_m = (ν+2m) Γ(ν+m) / m!.
fn backward_recurrence(nu: f64, x: f64) -> f64 {
    let start = (x + 30.0 + 3.0 * x.sqrt() + nu).ceil() as usize;
    let top = start + start % 2;
    let weight = |m: usize| -> f64 {
        if m == 0 {
            ln_gamma(nu + 1.0).exp()
        } else {
            let mf = m as f64;
            (nu + 2.0 * mf) * (ln_gamma(nu + mf) - ln_gamma(mf + 1.0)).exp()
        }
    };

    let mut above = 0.0f64;
    let mut current = 1e-300f64;
    let mut norm = 0.0f64;
    // `current` holds J̃_{ν+k} for k = top, top-1, ..., 0.
    for k in (0..=top).rev() {
        if k % 2 == 0 {
            norm += weight(k / 2) * current;
        }
        if k == 0 {
            break;
        }
        let order = nu + k as f64;
        let below = 2.0 * order / x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
        }
    }
    current * (nu * (0.5 * x).ln()).exp() / norm
}

/// n-th positive zero (1-based) of J_ν, bisected to relative width 1e-14.
pub fn bessel_zero(nu: f64, n: usize) -> Result<f64> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(invalid("nu", format!("order must be finite and >= 0, got {nu}")));
    }
    if n == 0 {
        return Err(invalid("n", "zero index is 1-based"));
    }
    let step = 0.05;
    let from = nu.max(1e-3);
    let to = (n as f64 + 0.5 * nu + 1.0) * PI + nu + 10.0;
    let mut a = from;
    let mut fa = bessel_j(nu, a);
    let mut found = 0;
    while a < to {
        let b = a + step;
        let fb = bessel_j(nu, b);
        if fa == 0.0 || fa * fb < 0.0 {
            found += 1;
            if found == n {
                return Ok(bisect(nu, a, b, fa));
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::RootBracket { order: nu, index: n, from, to })
}

fn bisect(nu: f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    if f_lo == 0.0 {
        return lo;
    }
    while hi - lo > 1e-14 * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = bessel_j(nu, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-13);
        assert!((ln_gamma(0.1) - 9.513_507_698_668_732f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn half_order_reduces_to_sine() {
        for &x in &[0.3, 2.0, 7.5, 9.99, 10.01, 15.0, 40.0, 123.4] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x);
            assert!((got - exact).abs() < 1e-12, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_the_seam() {
        for &nu in &[0.0, 0.3, 1.0, 2.5, 7.0] {
            let s = ascending_series(nu, SERIES_LIMIT + 0.5);
            let r = backward_recurrence(nu, SERIES_LIMIT + 0.5);
            assert!((s - r).abs() < 1e-12, "nu={nu}: {s} vs {r}");
        }
    }

    #[test]
    fn tabulated_values() {
        // J0(1), J1(1), J0(20) from standard tables.
        assert!((bessel_j(0.0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1.0, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j(0.0, 20.0) - 0.167_024_664_340_583_3).abs() < 1e-12);
    }

    #[test]
    fn known_zeros() {
        assert!((bessel_zero(1.0, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-10);
        assert!((bessel_zero(0.0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-10);
        assert!((bessel_zero(0.0, 5).unwrap() - 14.930_917_708_487_79).abs() < 1e-9);
        for n in 1..=5 {
            let z = bessel_zero(0.5, n).unwrap();
            assert!((z - n as f64 * PI).abs() < 1e-11 * z);
        }
        assert!(bessel_zero(-1.0, 1).is_err());
        assert!(bessel_zero(1.0, 0).is_err());
    }
}
