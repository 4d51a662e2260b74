//! Rogers-Szegő polynomials `H_n(z) = sum_k [n k] z^k` and the continuous
//! Hermite polynomials `HH_n(cos t) = e^{int} H_n(e^{-2it})`.
//!
//! Operators `phi(P, Q)` act diagonally, `z^k -> phi^k z^k`. On the Hermite
//! side this reads `e^{imt} -> phi^{-m/2} e^{imt}`, the convention under
//! which `P e^{it} = p^{-1/2} e^{it}`.

use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use crate::calculus::{rpq_derivative, PowerSeries};
use crate::error::{RpqError, Result};
use crate::numbers::{rpq_binomial_row, rpq_factorial, rpq_number};
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind, PrecisionPolicy};

type PhiFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// The functions `phi_1, phi_2, phi_3` of the recursion theorem.
#[derive(Clone)]
pub struct PhiTriple {
    pub phi1: PhiFn,
    pub phi2: PhiFn,
    pub phi3: PhiFn,
}

impl std::fmt::Debug for PhiTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhiTriple").finish_non_exhaustive()
    }
}

impl PhiTriple {
    pub fn new(
        phi1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi2: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi3: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { phi1: Arc::new(phi1), phi2: Arc::new(phi2), phi3: Arc::new(phi3) }
    }

    /// `[phi1(p,q), phi2(p,q), phi3(p,q)]`, rejecting zeros.
    pub fn values(&self, p: f64, q: f64) -> Result<[f64; 3]> {
        let v = [(self.phi1)(p, q), (self.phi2)(p, q), (self.phi3)(p, q)];
        if v.iter().any(|x| *x == 0.0 || !x.is_finite()) {
            return Err(RpqError::Domain(format!("phi values must be finite and nonzero, got {v:?}")));
        }
        Ok(v)
    }
}

/// Built-in triples for JS, CJ, Quesne and HN.
///
/// For HN, `phi_2 = phi_1 = q^nu / p^(mu-1)`: the recursion condition on the
/// HN binomial table fails for `q^(nu-1) / p^mu` unless `p q = 1`.
pub fn builtin_phis(spec: &DeformationSpec) -> Result<PhiTriple> {
    Ok(match spec.kind() {
        Kind::JagannathanSrinivasa => PhiTriple::new(|x, _| x, |x, _| x, |x, y| x - y),
        Kind::ChakrabartiJagannathan => PhiTriple::new(|x, _| 1.0 / x, |x, _| 1.0 / x, |x, y| 1.0 / x - y),
        Kind::Quesne => PhiTriple::new(|x, _| x, |x, _| x, |x, y| y - 1.0 / x),
        Kind::HounkonnouNgompe => {
            let (mu, nu, h) = (spec.mu(), spec.nu(), spec.h());
            let phi = move |x: f64, y: f64| x.powf(1.0 - mu) * y.powf(nu);
            PhiTriple::new(phi, phi, move |x, y| (y - 1.0 / x) / h)
        }
        other => {
            return Err(RpqError::UnsupportedKind { kind: other.to_string(), what: "a built-in phi triple".into() })
        }
    })
}

/// The HN triple with `phi_2 = x^{-mu} y^{nu-1}`, kept for diagnostics.
pub fn hn_phis_as_printed(spec: &DeformationSpec) -> PhiTriple {
    let (mu, nu, h) = (spec.mu(), spec.nu(), spec.h());
    PhiTriple::new(
        move |x, y| x.powf(1.0 - mu) * y.powf(nu),
        move |x, y| x.powf(-mu) * y.powf(nu - 1.0),
        move |x, y| (y - 1.0 / x) / h,
    )
}

/// Coefficients of `H_n`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RSPolynomial {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl RSPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn to_series(&self) -> PowerSeries {
        PowerSeries::from_real(&self.coeffs)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeffs.get(k).unwrap_or(&0.0) - other.coeffs.get(k).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    }

    /// `max_k |a_k - b_k| / max(1, |a_k|)`.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| {
                let a = *self.coeffs.get(k).unwrap_or(&0.0);
                (a - other.coeffs.get(k).unwrap_or(&0.0)).abs() / a.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// `H_n` from the binomial sum.
pub fn rs_direct(spec: &DeformationSpec, n: usize) -> Result<RSPolynomial> {
    Ok(RSPolynomial { n, coeffs: rpq_binomial_row(spec, n)? })
}

/// Checks the binomial condition of the recursion theorem for all
/// `1 <= k <= m < n`, failing on the first relative residual above `tol`.
pub fn check_phi_condition(spec: &DeformationSpec, phis: &PhiTriple, n: usize, tol: f64) -> Result<()> {
    let [f1, f2, f3] = phis.values(spec.p(), spec.q())?;
    let rows: Vec<Vec<f64>> = (0..=n).map(|m| rpq_binomial_row(spec, m)).collect::<Result<_>>()?;
    for m in 1..n {
        let r = rpq_number(spec, m)?;
        for k in 1..=m {
            let lhs = rows[m + 1][k];
            let rhs = f1.powi(k as i32) * rows[m][k] + f2.powi((m + 1 - k) as i32) * rows[m][k - 1]
                - f3 * r * rows[m - 1][k - 1];
            let residual = (lhs - rhs).abs() / lhs.abs().max(1.0);
            if !(residual <= tol) {
                return Err(RpqError::PhiConditionViolated { n: m, k, residual });
            }
        }
    }
    Ok(())
}

/// Condition tolerance used before recursion runs.
pub const PHI_CONDITION_TOL: f64 = 1e-10;

/// `H_n` from `H_{m+1}(z) = H_m(phi1 z) + z phi2^m H_m(z/phi2) - z phi3 R(m) H_{m-1}(z)`.
pub fn rs_recursive(spec: &DeformationSpec, phis: &PhiTriple, n: usize) -> Result<RSPolynomial> {
    check_phi_condition(spec, phis, n, PHI_CONDITION_TOL)?;
    let [f1, f2, f3] = phis.values(spec.p(), spec.q())?;
    let mut prev: Vec<f64> = Vec::new();
    let mut cur = vec![1.0];
    for m in 0..n {
        let r = rpq_number(spec, m)?;
        let mut next = vec![0.0; m + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k] += f1.powi(k as i32) * c;
            next[k + 1] += f2.powi((m - k) as i32) * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k + 1] -= f3 * r * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(RSPolynomial { n, coeffs: cur })
}

/// Max coefficient residual of `d H_n - R(n) H_{n-1}`.
pub fn rs_diffeq_check(spec: &DeformationSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(RpqError::Domain("difference equation needs n >= 1".into()));
    }
    let d = rpq_derivative(spec, &rs_direct(spec, n)?.to_series())?;
    let rhs = rs_direct(spec, n - 1)?.to_series().scale(Complex64::new(rpq_number(spec, n)?, 0.0));
    Ok(d.max_diff(&rhs))
}

/// A continuous Hermite value with its imaginary residue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteValue {
    pub value: f64,
    pub imag: f64,
    /// Set when `|imag|` exceeds [`HERMITE_IMAG_TOL`].
    pub asymmetry_warning: Option<String>,
}

pub const HERMITE_IMAG_TOL: f64 = 1e-10;

fn hermite_complex(coeffs: &[f64], theta: f64) -> Complex64 {
    let n = coeffs.len() as f64 - 1.0;
    coeffs.iter().enumerate().map(|(k, c)| c * Complex64::from_polar(1.0, (n - 2.0 * k as f64) * theta)).sum()
}

/// `sum_k [n k] e^{i(n-2k)t}` by direct summation.
pub fn hermite_continuous(spec: &DeformationSpec, n: usize, theta: f64) -> Result<HermiteValue> {
    let v = hermite_complex(&rpq_binomial_row(spec, n)?, theta);
    let warning = (v.im.abs() > HERMITE_IMAG_TOL * v.re.abs().max(1.0))
        .then(|| format!("imaginary residue {:.3e} from asymmetric binomials", v.im));
    Ok(HermiteValue { value: v.re, imag: v.im, asymmetry_warning: warning })
}

/// `|lhs - rhs|` of the Hermite three-term recursion at step `n`:
/// `HH_{n+1} = e^{it} phi1^{n/2} phi1(P,Q) HH_n + e^{-it} phi2^{n/2} phi2^{-1}(P,Q) HH_n
///            - phi3 R(n) HH_{n-1}`.
pub fn hermite_recursion_check(spec: &DeformationSpec, phis: &PhiTriple, n: usize, theta: f64) -> Result<f64> {
    check_phi_condition(spec, phis, n + 1, PHI_CONDITION_TOL)?;
    let [f1, f2, f3] = phis.values(spec.p(), spec.q())?;
    let cur = rpq_binomial_row(spec, n)?;
    let lhs = hermite_complex(&rpq_binomial_row(spec, n + 1)?, theta);
    let nf = n as f64;
    let mut rhs = Complex64::new(0.0, 0.0);
    for (k, c) in cur.iter().enumerate() {
        let m = nf - 2.0 * k as f64;
        let wave = Complex64::from_polar(1.0, m * theta);
        rhs += Complex64::from_polar(1.0, theta) * f1.powf(nf / 2.0) * f1.powf(-m / 2.0) * c * wave;
        rhs += Complex64::from_polar(1.0, -theta) * f2.powf(nf / 2.0) * f2.powf(m / 2.0) * c * wave;
    }
    if n > 0 {
        rhs -= f3 * rpq_number(spec, n)? * hermite_complex(&rpq_binomial_row(spec, n - 1)?, theta);
    }
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}

/// `psi_n = H_n / sqrt(R!(n))` as a power series.
pub fn psi(spec: &DeformationSpec, n: usize) -> Result<PowerSeries> {
    let norm = rpq_factorial(spec, n, &PrecisionPolicy::default())?;
    if !(norm > 0.0) {
        return Err(RpqError::Domain(format!("R!({n}) = {norm} has no real square root")));
    }
    Ok(rs_direct(spec, n)?.to_series().scale(Complex64::new(norm.sqrt().recip(), 0.0)))
}

/// Ladder actions of `A = d` and
/// `A† = phi1(P,Q) + z phi2^n phi2^{-1}(P,Q) - z phi3 d` on `psi_n`,
/// plus nilpotency `d^{n+1} psi_n = 0`, `d^n psi_n != 0`.
pub fn psi_ladder_check(spec: &DeformationSpec, n: usize) -> Result<Report> {
    let phis = builtin_phis(spec)?;
    check_phi_condition(spec, &phis, n + 1, PHI_CONDITION_TOL)?;
    let [f1, f2, f3] = phis.values(spec.p(), spec.q())?;
    let pn = psi(spec, n)?;
    let mut rep = Report::new(format!("psi ladder, n = {n}"));
    let d = rpq_derivative(spec, &pn)?;
    let lower = if n == 0 {
        PowerSeries::zero(1)
    } else {
        psi(spec, n - 1)?.scale(Complex64::new(rpq_number(spec, n)?.sqrt(), 0.0))
    };
    rep.push("annihilation", d.max_diff(&lower), 1e-12);

    let raised = &(&pn.dilate_real(f1) + &pn.dilate_real(1.0 / f2).scale(Complex64::new(f2.powi(n as i32), 0.0)).shift_up())
        - &d.shift_up().scale(Complex64::new(f3, 0.0));
    let target = psi(spec, n + 1)?.scale(Complex64::new(rpq_number(spec, n + 1)?.sqrt(), 0.0));
    rep.push("creation", raised.max_diff(&target), 1e-12);

    let mut dk = pn.clone();
    for _ in 0..n {
        dk = rpq_derivative(spec, &dk)?;
    }
    rep.push_bool("d_pow_n_nonzero", dk.max_abs() > 0.0);
    let last = rpq_derivative(spec, &dk)?;
    rep.push_bool("d_pow_n_plus_1_zero", last.coeffs().iter().all(|c| *c == Complex64::new(0.0, 0.0)));
    Ok(rep)
}
