//! Deformed calculus on truncated power series.
//!
//! The R(p,q)-derivative acts diagonally on monomials,
//! `z^n -> R(p^n, q^n) z^(n-1)`. For the kinds with explicit product rules
//! it also has a two-point form `c (f(Az) - f(Bz)) / z`, which yields the
//! two Leibniz rules. Jackson-type integrals are sums over a geometric
//! lattice `a x0 r^j`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{RpqError, Result};
use crate::numbers::rpq_number;
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind};

/// Upper bound on the length of a series product.
pub const MAX_PRODUCT_LEN: usize = 8192;

/// Finite coefficient sequence `c_0 .. c_N` of a power series in `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { coeffs };
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Zero series truncated at order `n`.
    pub fn zero(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n + 1])
    }

    pub fn monomial(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Highest stored degree `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Keeps degrees `0..=n`, zero-padding if needed.
    pub fn truncate(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n + 1, Complex64::new(0.0, 0.0));
        Self::new(c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `c_n -> s^n c_n`, i.e. `f(z) -> f(sz)`.
    pub fn dilate(&self, s: Complex64) -> Self {
        let mut pw = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * pw;
                pw *= s;
                out
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn dilate_real(&self, s: f64) -> Self {
        self.dilate(Complex64::new(s, 0.0))
    }

    /// `z f(z)`; order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Complex64::new(0.0, 0.0));
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_n |self_n - other_n|` over the longer of the two.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    /// `max |self_n - other_n|` restricted to degrees `0..=n`.
    pub fn max_diff_upto(&self, other: &Self, n: usize) -> f64 {
        (0..=n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| f(self.coeff(k), other.coeff(k))).collect())
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Cauchy product, capped at [`MAX_PRODUCT_LEN`] coefficients.
impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(MAX_PRODUCT_LEN);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries::new(out)
    }
}

/// `f(sz)`.
pub fn dilate(f: &PowerSeries, s: Complex64) -> PowerSeries {
    f.dilate(s)
}

/// `c_n -> R(p^n, q^n) c_n` at degree `n - 1`.
pub fn rpq_derivative(spec: &DeformationSpec, f: &PowerSeries) -> Result<PowerSeries> {
    if f.order() == 0 {
        return Ok(PowerSeries::zero(0));
    }
    let coeffs = (1..=f.order())
        .map(|n| Ok(f.coeff(n) * rpq_number(spec, n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries::new(coeffs))
}

/// Inverse of the derivative with zero integration constant:
/// `c_n -> c_n / R(p^(n+1), q^(n+1))` at degree `n + 1`.
pub fn rpq_antiderivative(spec: &DeformationSpec, f: &PowerSeries) -> Result<PowerSeries> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    for n in 0..=f.order() {
        let r = rpq_number(spec, n + 1)?;
        if r == 0.0 {
            return Err(RpqError::DivisionByZero(format!("R(p^{0}, q^{0}) = 0", n + 1)));
        }
        coeffs.push(f.coeff(n) / r);
    }
    Ok(PowerSeries::new(coeffs))
}

/// The diagonal operator `R(P, Q)`: `c_n -> R(p^n, q^n) c_n` at the same degree.
pub fn rpq_diagonal(spec: &DeformationSpec, f: &PowerSeries) -> Result<PowerSeries> {
    let coeffs = (0..=f.order())
        .map(|n| Ok(f.coeff(n) * rpq_number(spec, n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries::new(coeffs))
}

/// Two-point form `(A, B, c)` with `df(z) = c (f(Az) - f(Bz)) / z`.
pub fn two_point_form(spec: &DeformationSpec) -> Result<(f64, f64, f64)> {
    let (p, q) = (spec.p(), spec.q());
    match spec.kind() {
        Kind::JagannathanSrinivasa => Ok((p, q, 1.0 / (p - q))),
        Kind::ChakrabartiJagannathan => Ok((1.0 / p, q, 1.0 / (1.0 / p - q))),
        Kind::Quesne => Ok((p, 1.0 / q, 1.0 / (q - 1.0 / p))),
        Kind::HounkonnouNgompe => {
            let (mu, nu) = (spec.mu(), spec.nu());
            Ok((q.powf(nu) / p.powf(mu - 1.0), q.powf(nu - 1.0) / p.powf(mu), spec.h() / (q - 1.0 / p)))
        }
        Kind::HeineQ => Ok((1.0, q, 1.0 / (1.0 - q))),
        other => Err(RpqError::UnsupportedKind { kind: other.to_string(), what: "an explicit product rule".into() }),
    }
}

/// Max coefficient residuals of `d(fg)` against the two Leibniz rules
/// `(df) g(Az) + f(Bz) dg` and `(df) g(Bz) + f(Az) dg`.
pub fn leibniz_residual(spec: &DeformationSpec, f: &PowerSeries, g: &PowerSeries) -> Result<(f64, f64)> {
    let (a, b, _) = two_point_form(spec)?;
    let (a, b) = (Complex64::new(a, 0.0), Complex64::new(b, 0.0));
    let lhs = rpq_derivative(spec, &(f * g))?;
    let df = rpq_derivative(spec, f)?;
    let dg = rpq_derivative(spec, g)?;
    let rhs1 = &(&df * &g.dilate(a)) + &(&f.dilate(b) * &dg);
    let rhs2 = &(&df * &g.dilate(b)) + &(&f.dilate(a) * &dg);
    Ok((lhs.max_diff(&rhs1), lhs.max_diff(&rhs2)))
}

/// Deterministic test series of degree `n` with coefficients of order one.
pub fn probe_series(n: usize, phase: f64) -> PowerSeries {
    PowerSeries::new((0..=n).map(|k| Complex64::new((1.3 * k as f64 + phase).cos(), (0.7 * k as f64 - phase).sin())).collect())
}

/// Monomial law, antiderivative round trip and (where a two-point form
/// exists) both Leibniz rules on degree-`degree` probe series. Residuals
/// are relative to the largest coefficient involved.
pub fn calculus_suite(spec: &DeformationSpec, degree: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new("calculus");
    if let Ok((a, b, c)) = two_point_form(spec) {
        let mut worst = 0.0f64;
        for n in 1..=degree {
            let exact = rpq_number(spec, n)?;
            let two_point = c * (a.powi(n as i32) - b.powi(n as i32));
            worst = worst.max(crate::report::mixed_residual(exact, two_point));
        }
        r.push("monomial_two_point", worst, tol);
    }
    let f = probe_series(degree, 0.3);
    let g = probe_series(degree, 1.1);
    let round = rpq_derivative(spec, &rpq_antiderivative(spec, &f)?)?;
    r.push("antiderivative_round_trip", round.max_diff(&f) / f.max_abs().max(1.0), tol);
    if two_point_form(spec).is_ok() {
        let (l1, l2) = leibniz_residual(spec, &f, &g)?;
        let scale = rpq_derivative(spec, &(&f * &g))?.max_abs().max(1.0);
        r.push("leibniz_first", l1 / scale, tol);
        r.push("leibniz_second", l2 / scale, tol);
    }
    Ok(r)
}

/// Geometric lattice of a Jackson-type integral:
/// `int_0^a f = c a sum_j w0 r^j f(a x0 r^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacksonLattice {
    pub c: f64,
    pub x0: f64,
    pub w0: f64,
    pub r: f64,
}

/// The integration lattice of the kinds with a closed integral sum.
pub fn jackson_lattice(spec: &DeformationSpec) -> Result<JacksonLattice> {
    let (p, q) = (spec.p(), spec.q());
    let lat = match spec.kind() {
        Kind::JagannathanSrinivasa => JacksonLattice { c: p - q, x0: 1.0 / p, w0: 1.0 / p, r: q / p },
        Kind::ChakrabartiJagannathan => JacksonLattice { c: 1.0 - p * q, x0: p, w0: 1.0, r: p * q },
        Kind::Quesne => JacksonLattice { c: 1.0 / p - q, x0: q, w0: q, r: p * q },
        Kind::HounkonnouNgompe => {
            let x0 = p.powf(spec.mu()) * q.powf(1.0 - spec.nu());
            JacksonLattice { c: (1.0 / p - q) / spec.h(), x0, w0: x0, r: p * q }
        }
        Kind::HeineQ | Kind::ArikCoon => JacksonLattice { c: 1.0 - q, x0: 1.0, w0: 1.0, r: q },
        Kind::Kalnins => {
            let (l, lambda) = (spec.l(), spec.lambda());
            JacksonLattice { c: (q - 1.0) / (l * l * q.powf(lambda)), x0: 1.0, w0: 1.0, r: 1.0 / q }
        }
        other => {
            return Err(RpqError::UnsupportedKind { kind: other.to_string(), what: "a Jackson integral sum".into() })
        }
    };
    Ok(lat)
}

/// `int_0^a f` as the kind's lattice sum, stopped after three consecutive
/// terms below `abs_tol` or after `terms` terms.
pub fn jackson_integral(
    spec: &DeformationSpec,
    f: &dyn Fn(f64) -> f64,
    a: f64,
    terms: usize,
    abs_tol: f64,
) -> Result<f64> {
    let lat = jackson_lattice(spec)?;
    if !(lat.r > 0.0 && lat.r < 1.0) {
        return Err(RpqError::NonConvergent(format!(
            "{} integral lattice ratio {} is not in (0, 1)",
            spec.kind(),
            lat.r
        )));
    }
    let mut sum = 0.0;
    let (mut x, mut w) = (a * lat.x0, lat.w0);
    let mut small = 0;
    for _ in 0..terms {
        let term = w * f(x);
        if !term.is_finite() {
            return Err(RpqError::NonConvergent(format!("non-finite integrand at x = {x}")));
        }
        sum += term;
        small = if term.abs() < abs_tol { small + 1 } else { 0 };
        if small >= 3 {
            break;
        }
        x *= lat.r;
        w *= lat.r;
    }
    Ok(lat.c * a * sum)
}

/// Experimental `int_0^inf f` as the two-sided lattice sum with `a = 1`.
/// Both tails must fall below `abs_tol` within `terms` steps.
pub fn jackson_integral_infinite(
    spec: &DeformationSpec,
    f: &dyn Fn(f64) -> f64,
    terms: usize,
    abs_tol: f64,
) -> Result<f64> {
    let lat = jackson_lattice(spec)?;
    if !(lat.r > 0.0 && lat.r < 1.0) {
        return Err(RpqError::NonConvergent(format!("lattice ratio {} is not in (0, 1)", lat.r)));
    }
    let mut total = 0.0;
    for dir in [1.0, -1.0] {
        let start = if dir > 0.0 { 0 } else { 1 };
        let mut small = 0;
        let mut converged = false;
        for j in start..terms {
            let e = dir * j as f64;
            let x = lat.x0 * lat.r.powf(e);
            let term = lat.w0 * lat.r.powf(e) * f(x);
            if !term.is_finite() {
                return Err(RpqError::NonConvergent(format!("non-finite integrand at x = {x}")));
            }
            total += term;
            small = if term.abs() < abs_tol { small + 1 } else { 0 };
            if small >= 3 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(RpqError::NonConvergent("lattice tail does not decay".into()));
        }
    }
    Ok(lat.c * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn js(p: f64, q: f64) -> DeformationSpec {
        DeformationSpec::new(Kind::JagannathanSrinivasa, p, q).unwrap()
    }

    #[test]
    fn dilation_examples() {
        let f = PowerSeries::from_real(&[1.0, 1.0]);
        assert_eq!(f.dilate(c(2.0)), PowerSeries::from_real(&[1.0, 2.0]));
        assert_eq!(f.dilate(c(1.0)), f);
        assert_eq!(PowerSeries::monomial(3).dilate(c(0.5)).coeff(3), c(0.125));
    }

    #[test]
    fn derivative_examples() {
        let s = js(1.0, 0.5);
        assert_eq!(rpq_derivative(&s, &PowerSeries::from_real(&[1.0])).unwrap().max_abs(), 0.0);
        let d = rpq_derivative(&s, &PowerSeries::monomial(3)).unwrap();
        assert_relative_eq!(d.coeff(2).re, 1.75, epsilon = 1e-15);
        assert_eq!(d.order(), 2);
    }

    #[test]
    fn antiderivative_examples() {
        let s = js(1.2, 0.7);
        let i = rpq_antiderivative(&s, &PowerSeries::monomial(2)).unwrap();
        assert_relative_eq!(i.coeff(3).re, 1.0 / rpq_number(&s, 3).unwrap(), epsilon = 1e-15);
        assert_eq!(rpq_antiderivative(&s, &PowerSeries::zero(0)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn commutation_relations_on_monomials() {
        let s = js(1.2, 0.7);
        for n in 0..12 {
            let zn = PowerSeries::monomial(n);
            let zd = rpq_derivative(&s, &zn).unwrap().shift_up();
            let dz = rpq_derivative(&s, &zn.shift_up()).unwrap();
            assert_relative_eq!(zd.coeff(n).re, rpq_number(&s, n).unwrap(), epsilon = 1e-13);
            assert_relative_eq!(dz.coeff(n).re, rpq_number(&s, n + 1).unwrap(), epsilon = 1e-13);
        }
    }

    #[test]
    fn two_point_form_matches_monomial_action() {
        for spec in [
            js(1.2, 0.7),
            DeformationSpec::new(Kind::ChakrabartiJagannathan, 1.3, 0.6).unwrap(),
            DeformationSpec::new(Kind::Quesne, 1.1, 0.9).unwrap(),
            DeformationSpec::with_extras(Kind::HounkonnouNgompe, 1.2, 0.7, &[("mu", 1.0), ("nu", 1.5)]).unwrap(),
            DeformationSpec::new(Kind::HeineQ, 1.0, 0.5).unwrap(),
        ] {
            let (a, b, k) = two_point_form(&spec).unwrap();
            for n in 1..16 {
                let two = k * (a.powi(n as i32) - b.powi(n as i32));
                assert_relative_eq!(two, rpq_number(&spec, n).unwrap(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn leibniz_small_case() {
        let s = js(1.2, 0.7);
        let f = PowerSeries::from_real(&[1.0, 1.0]);
        let g = PowerSeries::from_real(&[1.0, 1.0, 1.0]);
        let (r1, r2) = leibniz_residual(&s, &f, &g).unwrap();
        assert!(r1 < 1e-12 && r2 < 1e-12);
        let one = PowerSeries::from_real(&[1.0]);
        assert_eq!(leibniz_residual(&s, &one, &g).unwrap().0, 0.0);
        let ac = DeformationSpec::new(Kind::ArikCoon, 1.0, 0.5).unwrap();
        assert!(leibniz_residual(&ac, &f, &g).is_err());
    }

    #[test]
    fn jackson_integral_examples() {
        let h = DeformationSpec::new(Kind::HeineQ, 1.0, 0.5).unwrap();
        assert_relative_eq!(jackson_integral(&h, &|z| z, 1.0, 500, 1e-18).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
        assert_eq!(jackson_integral(&h, &|_| 0.0, 1.0, 500, 1e-18).unwrap(), 0.0);
        // Direct partial summation for Kalnins at q = 2.
        let k = DeformationSpec::with_extras(Kind::Kalnins, 1.0, 2.0, &[("l", 1.0)]).unwrap();
        let oracle: f64 = (0..200).map(|j| 0.5f64.powi(j)).sum::<f64>();
        assert_relative_eq!(jackson_integral(&k, &|_| 1.0, 1.0, 200, 0.0).unwrap(), oracle, epsilon = 1e-14);
    }

    #[test]
    fn jackson_integral_inverts_derivative_on_monomials() {
        for spec in [
            js(1.2, 0.7),
            DeformationSpec::new(Kind::ChakrabartiJagannathan, 1.3, 0.6).unwrap(),
            DeformationSpec::new(Kind::Quesne, 1.1, 0.9).unwrap(),
            DeformationSpec::with_extras(Kind::HounkonnouNgompe, 1.2, 0.7, &[("mu", 1.0), ("nu", 1.5)]).unwrap(),
            DeformationSpec::with_extras(Kind::Kalnins, 1.0, 2.0, &[("l", 0.8), ("lambda", 0.3)]).unwrap(),
        ] {
            for n in 0..6 {
                let got = jackson_integral(&spec, &|z| z.powi(n), 0.9, 5000, 1e-20).unwrap();
                let want = 0.9f64.powi(n + 1) / rpq_number(&spec, n as usize + 1).unwrap();
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn jackson_reduces_to_q_integral_at_p_one() {
        let js1 = js(1.0, 0.6);
        let heine = DeformationSpec::new(Kind::HeineQ, 1.0, 0.6).unwrap();
        let f = |z: f64| (1.0 + z).ln();
        let a = jackson_integral(&js1, &f, 0.8, 400, 1e-18).unwrap();
        let b = jackson_integral(&heine, &f, 0.8, 400, 1e-18).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn non_convergent_lattice() {
        let s = js(0.7, 1.2);
        assert!(matches!(jackson_integral(&s, &|z| z, 1.0, 100, 1e-12), Err(RpqError::NonConvergent(_))));
    }

    #[test]
    fn infinite_integral_of_gaussian_like_integrand() {
        let h = DeformationSpec::new(Kind::HeineQ, 1.0, 0.5).unwrap();
        let v = jackson_integral_infinite(&h, &|x| (-x).exp(), 400, 1e-18).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(jackson_integral_infinite(&h, &|_| 1.0, 400, 1e-18).is_err());
    }
}
