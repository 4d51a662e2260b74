//! Coherent states `|z> = N(|z|^2)^{-1/2} sum z^n / sqrt(f(n)!) |n>`,
//! their photon statistics, Fubini-Study metric and moment checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::calculus::jackson_integral;
use crate::error::{RpqError, Result};
use crate::numbers::{rpq_factorial, rpq_number};
use crate::parallel::{map_range, Exec};
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind, PrecisionPolicy};
use crate::special::{radius_estimate, SeriesEvalConfig};

/// Number of leading probabilities kept in a [`StatsReport`].
pub const PN_HEAD: usize = 16;

/// A truncated, normalized coherent state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentState {
    pub z: Complex64,
    pub coeffs: Vec<Complex64>,
    /// `N(|z|^2)` of the full series.
    pub norm_value: f64,
}

/// Photon statistics at `x = |z|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub x: f64,
    pub mean_n: f64,
    /// `None` at `x = 0`, where the ratio is undefined.
    pub mandel_q: Option<f64>,
    /// `lim Q / x` as `x -> 0`, equal to `2/f(2) - 1/f(1)`.
    pub mandel_slope_at_zero: f64,
    pub metric_w: f64,
    pub pn_head: Vec<f64>,
}

fn f_abs(spec: &DeformationSpec, n: usize) -> Result<f64> {
    let v = rpq_number(spec, n)?.abs();
    if v == 0.0 {
        return Err(RpqError::DivisionByZero(format!("f({n}) = 0 in the normalization series")));
    }
    Ok(v)
}

/// Checks `x` against the radius of `sum x^n / f(n)!`.
pub fn check_inside(spec: &DeformationSpec, x: f64, cfg: &SeriesEvalConfig) -> Result<()> {
    if x == 0.0 {
        return Ok(());
    }
    let r = radius_estimate(spec, cfg);
    if !r.is_infinite() && x >= r.value * (1.0 - cfg.radius_margin) {
        return Err(RpqError::OutsideRadius { modulus: x, radius: r.value });
    }
    Ok(())
}

/// `(N(x), N'(x), N''(x))` by term-wise differentiation.
pub fn norm_series(spec: &DeformationSpec, x: f64, cfg: &SeriesEvalConfig) -> Result<(f64, f64, f64)> {
    check_inside(spec, x, cfg)?;
    // t = x^n / f(n)!, d1 = n x^{n-1} / f(n)!, d2 = n(n-1) x^{n-2} / f(n)!
    let (mut t, mut d1, mut d2) = (1.0, 0.0, 0.0);
    let (mut n0, mut n1, mut n2) = (1.0, 0.0, 0.0);
    let mut small = 0;
    for n in 1..cfg.max_terms {
        let f = f_abs(spec, n)?;
        let nf = n as f64;
        d2 = match n {
            1 => 0.0,
            2 => 2.0 * d1 / f,
            _ => d2 * nf / (nf - 2.0) * x / f,
        };
        d1 = if n == 1 { 1.0 / f } else { d1 * nf / (nf - 1.0) * x / f };
        t *= x / f;
        n0 += t;
        n1 += d1;
        n2 += d2;
        let done = t <= cfg.abs_tol * n0 && d1 <= cfg.abs_tol * n1.max(1.0) && d2 <= cfg.abs_tol * n2.max(1.0);
        small = if done && n > 2 { small + 1 } else { 0 };
        if small >= 3 {
            return Ok((n0, n1, n2));
        }
    }
    Err(RpqError::NonConvergent(format!("normalization series at x = {x} did not settle")))
}

/// `N(w)` for complex `w`, used by the overlap formula.
pub fn norm_series_complex(spec: &DeformationSpec, w: Complex64, cfg: &SeriesEvalConfig) -> Result<Complex64> {
    check_inside(spec, w.norm(), cfg)?;
    let mut t = Complex64::new(1.0, 0.0);
    let mut sum = t;
    let mut small = 0;
    for n in 1..cfg.max_terms {
        t = t * w / f_abs(spec, n)?;
        sum += t;
        small = if t.norm() <= cfg.abs_tol * sum.norm().max(1.0) { small + 1 } else { 0 };
        if small >= 3 {
            return Ok(sum);
        }
    }
    Err(RpqError::NonConvergent("normalization series did not settle".into()))
}

/// The first `d` coefficients of `|z>`.
pub fn coherent_vector(spec: &DeformationSpec, z: Complex64, d: usize, cfg: &SeriesEvalConfig) -> Result<CoherentState> {
    if d == 0 {
        return Err(RpqError::Domain("coherent vector needs D >= 1".into()));
    }
    let (norm_value, _, _) = norm_series(spec, z.norm_sqr(), cfg)?;
    let mut coeffs = Vec::with_capacity(d);
    let mut c = Complex64::new(norm_value.powf(-0.5), 0.0);
    coeffs.push(c);
    for n in 1..d {
        c = c * z / f_abs(spec, n)?.sqrt();
        coeffs.push(c);
    }
    Ok(CoherentState { z, coeffs, norm_value })
}

fn apply_a(spec: &DeformationSpec, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = v.len();
    (0..d)
        .map(|n| if n + 1 < d { Ok(v[n + 1] * f_abs(spec, n + 1)?.sqrt()) } else { Ok(Complex64::new(0.0, 0.0)) })
        .collect()
}

/// `||a|z> - z|z>||` with `a` truncated to `D x D`.
///
/// The last component carries the truncation tail `|z| |c_{D-1}|`, so the
/// value shrinks as `D` grows; see [`eigenstate_interior_residual`] for the
/// residual on components `0..D-1` alone.
pub fn eigenstate_residual(spec: &DeformationSpec, z: Complex64, d: usize, cfg: &SeriesEvalConfig) -> Result<f64> {
    let v = coherent_vector(spec, z, d, cfg)?.coeffs;
    let av = apply_a(spec, &v)?;
    Ok(av.iter().zip(&v).map(|(a, c)| (a - z * c).norm_sqr()).sum::<f64>().sqrt())
}

/// Residual on components `0..D-1`, excluding the truncation boundary.
pub fn eigenstate_interior_residual(spec: &DeformationSpec, z: Complex64, d: usize, cfg: &SeriesEvalConfig) -> Result<f64> {
    let v = coherent_vector(spec, z, d, cfg)?.coeffs;
    let av = apply_a(spec, &v)?;
    Ok(av.iter().zip(&v).take(d - 1).map(|(a, c)| (a - z * c).norm_sqr()).sum::<f64>().sqrt())
}

/// `P(n) = x^n / (f(n)! N(x))` for `n < k`.
pub fn photon_distribution(spec: &DeformationSpec, x: f64, k: usize, cfg: &SeriesEvalConfig) -> Result<Vec<f64>> {
    let (norm, _, _) = norm_series(spec, x, cfg)?;
    let mut out = Vec::with_capacity(k);
    let mut t = 1.0 / norm;
    for n in 0..k {
        if n > 0 {
            t *= x / f_abs(spec, n)?;
        }
        out.push(t);
    }
    Ok(out)
}

/// `<N> = x N'/N`.
pub fn mean_photon_number(spec: &DeformationSpec, x: f64, cfg: &SeriesEvalConfig) -> Result<f64> {
    let (n0, n1, _) = norm_series(spec, x, cfg)?;
    Ok(x * n1 / n0)
}

/// Mandel parameter `Q = x (N''/N' - N'/N)`; `UndefinedQ` at `x = 0`.
pub fn mandel_q(spec: &DeformationSpec, x: f64, cfg: &SeriesEvalConfig) -> Result<f64> {
    if x == 0.0 {
        return Err(RpqError::UndefinedQ);
    }
    let (n0, n1, n2) = norm_series(spec, x, cfg)?;
    Ok(x * (n2 / n1 - n1 / n0))
}

/// `W(x) = d/dx [x N'/N]`.
pub fn fubini_metric(spec: &DeformationSpec, x: f64, cfg: &SeriesEvalConfig) -> Result<f64> {
    if x < 0.0 {
        return Err(RpqError::Domain(format!("metric needs x >= 0, got {x}")));
    }
    let (n0, n1, n2) = norm_series(spec, x, cfg)?;
    Ok(n1 / n0 + x * n2 / n0 - x * (n1 / n0).powi(2))
}

pub fn photon_statistics(spec: &DeformationSpec, z: Complex64, cfg: &SeriesEvalConfig) -> Result<StatsReport> {
    let x = z.norm_sqr();
    let slope = 2.0 / f_abs(spec, 2)? - 1.0 / f_abs(spec, 1)?;
    let mandel = match mandel_q(spec, x, cfg) {
        Ok(v) => Some(v),
        Err(RpqError::UndefinedQ) => None,
        Err(e) => return Err(e),
    };
    Ok(StatsReport {
        x,
        mean_n: mean_photon_number(spec, x, cfg)?,
        mandel_q: mandel,
        mandel_slope_at_zero: slope,
        metric_w: fubini_metric(spec, x, cfg)?,
        pn_head: photon_distribution(spec, x, PN_HEAD, cfg)?,
    })
}

/// `<z1|z2>` from truncated vectors and from `N(conj(z1) z2) / sqrt(N N)`.
pub fn overlap(spec: &DeformationSpec, z1: Complex64, z2: Complex64, d: usize, cfg: &SeriesEvalConfig) -> Result<(Complex64, Complex64)> {
    let a = coherent_vector(spec, z1, d, cfg)?;
    let b = coherent_vector(spec, z2, d, cfg)?;
    let direct = a.coeffs.iter().zip(&b.coeffs).map(|(u, v)| u.conj() * v).sum();
    let closed = norm_series_complex(spec, z1.conj() * z2, cfg)? / (a.norm_value * b.norm_value).sqrt();
    Ok((direct, closed))
}

fn kalnins_only(spec: &DeformationSpec) -> Result<()> {
    if spec.kind() != Kind::Kalnins {
        return Err(RpqError::UnsupportedKind { kind: spec.kind().to_string(), what: "moment check".into() });
    }
    Ok(())
}

/// Moment `n` of the resolution-of-identity measure against `f(n)!`.
///
/// For `q > 1` the lattice sum over `x = R q^{-k}` with `R = l^2 q^lambda/(q-1)`;
/// for `q < 1` the integral
/// `(1-q)/(l^2 q^lambda ln(1/q)) int_0^inf x^n / N(x/q) dx`, computed with the
/// trapezoidal rule after `x = e^t`.
pub fn moment_check(spec: &DeformationSpec, n: usize, cfg: &SeriesEvalConfig) -> Result<Report> {
    kalnins_only(spec)?;
    let (q, l, lambda) = (spec.q(), spec.l(), spec.lambda());
    let scale = l * l * q.powf(lambda);
    let target = rpq_factorial(spec, n, &PrecisionPolicy::default())?;
    let mut rep = Report::new(format!("moment n = {n}, q = {q}"));
    if q > 1.0 {
        let radius = scale / (q - 1.0);
        let integrand = |x: f64| -> f64 {
            match norm_series(spec, x / q, cfg) {
                Ok((nv, _, _)) => x.powi(n as i32) / nv,
                Err(_) => f64::NAN,
            }
        };
        let value = jackson_integral(spec, &integrand, radius, 400, 1e-18 * target.max(1e-300))?;
        rep.push("lattice_sum_vs_factorial", (value - target).abs() / target, 1e-8);
    } else {
        let value = kalnins_quadrature(spec, n, cfg)? * (1.0 - q) / (scale * (1.0 / q).ln());
        rep.push("quadrature_vs_factorial", (value - target).abs() / target, 1e-4);
    }
    Ok(rep)
}

/// `int_0^inf x^n / N(x/q) dx`.
fn kalnins_quadrature(spec: &DeformationSpec, n: usize, cfg: &SeriesEvalConfig) -> Result<f64> {
    let q = spec.q();
    let h = 1.0 / 32.0;
    let t0 = -60.0 / (n as f64 + 1.0);
    let g = |t: f64| -> f64 {
        let x = t.exp();
        match norm_series(spec, x / q, cfg) {
            Ok((nv, _, _)) => x.powi(n as i32 + 1) / nv,
            Err(_) => f64::NAN,
        }
    };
    let mut total = 0.0;
    let mut start = t0;
    // Extend the upper limit in blocks until the integrand is negligible.
    for _ in 0..64 {
        let pts = map_range(256, Exec::available(), |i| g(start + i as f64 * h));
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(RpqError::NonConvergent("quadrature integrand not finite".into()));
        }
        total += pts.iter().sum::<f64>() * h;
        start += 256.0 * h;
        let tail = g(start);
        if tail < 1e-18 * total.max(1e-300) && start > 0.0 {
            return Ok(total);
        }
    }
    Err(RpqError::NonConvergent("quadrature upper limit did not settle".into()))
}
