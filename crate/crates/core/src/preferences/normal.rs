//! Univariate and bivariate standard normal distribution functions.

use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Absolute tolerance of the adaptive quadrature behind [`bivariate_cdf`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;

fn standard() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).expect("unit normal"))
}

pub fn cdf(x: f64) -> f64 {
    standard().cdf(x)
}

pub fn inverse_cdf(p: f64) -> f64 {
    standard().inverse_cdf(p)
}

/// P(X ≤ a, Y ≤ b) for standard normals with correlation `rho`.
///
/// Integrates the bivariate density along the correlation parameter,
/// `Φ₂(a,b;ρ) = Φ(a)Φ(b) + (1/2π)∫₀^{asin ρ} exp(-(a²-2ab·sinθ+b²)/(2cos²θ)) dθ`,
/// whose integrand is smooth and positive on the whole open interval.
pub fn bivariate_cdf(a: f64, b: f64, rho: f64) -> f64 {
    if a.is_nan() || b.is_nan() || rho.is_nan() {
        return f64::NAN;
    }
    let pa = cdf(a);
    let pb = cdf(b);
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return 0.0;
    }
    if a == f64::INFINITY {
        return pb;
    }
    if b == f64::INFINITY {
        return pa;
    }
    let lower = (pa + pb - 1.0).max(0.0);
    let upper = pa.min(pb);
    if rho == 0.0 {
        return pa * pb;
    }
    if rho >= 1.0 {
        return upper;
    }
    if rho <= -1.0 {
        return lower;
    }
    let q = a * a + b * b;
    let ab2 = 2.0 * a * b;
    let density = |theta: f64| {
        let s = theta.sin();
        let c2 = 1.0 - s * s;
        if c2 <= 0.0 {
            return if (q - ab2 * s).abs() < 1e-300 { 1.0 } else { 0.0 };
        }
        (-(q - ab2 * s) / (2.0 * c2)).exp()
    };
    let end = rho.asin();
    let integral = adaptive_simpson(density, 0.0, end, QUADRATURE_TOLERANCE);
    (pa * pb + integral / (2.0 * PI)).clamp(lower, upper)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let h = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    (0..INITIAL_PANELS)
        .map(|p| {
            let lo = a + h * p as f64;
            let hi = if p + 1 == INITIAL_PANELS { b } else { lo + h };
            let (flo, fhi) = (f(lo), f(hi));
            let mid = 0.5 * (lo + hi);
            let fmid = f(mid);
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, MAX_DEPTH)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
