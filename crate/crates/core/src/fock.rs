//! Truncated Fock-space realizations of `a`, `a†` and `N`.
//!
//! All entries are real, so operators are stored as real matrices; the
//! factor `i` in the momentum operator is handled analytically.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{RpqError, Result};
use crate::numbers::rpq_number;
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind};
use crate::structure::builtin_fg;

/// Largest admissible truncation.
pub const MAX_DIM: usize = 2048;

/// A `D x D` operator on the span of `|0>, ..., |D-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    entries: DMatrix<f64>,
}

impl TruncatedOperator {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() < 2 {
            return Err(RpqError::Domain("operators must be square with dim >= 2".into()));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(RpqError::Domain("non-finite operator entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        Self { entries: self.entries.transpose() }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.entries * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
    }
}

/// Physical constants for the oscillator realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatorModel {
    pub spec: DeformationSpec,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl OscillatorModel {
    pub fn new(spec: DeformationSpec) -> Self {
        Self { spec, hbar: 1.0, mass: 1.0, omega: 1.0 }
    }

    pub fn with_constants(spec: DeformationSpec, hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        if !(hbar > 0.0 && mass > 0.0 && omega > 0.0) {
            return Err(RpqError::Domain("hbar, mass and omega must be positive".into()));
        }
        Ok(Self { spec, hbar, mass, omega })
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_DIM {
        return Err(RpqError::Domain(format!("dimension {d} outside [{min}, {MAX_DIM}]")));
    }
    Ok(())
}

/// `(a, a†, N)` with `a|n> = sqrt(f(n)) |n-1>` and `f = |phi|`.
pub fn build_ladder(spec: &DeformationSpec, d: usize) -> Result<(TruncatedOperator, TruncatedOperator, TruncatedOperator)> {
    check_dim(d, 2)?;
    let mut a = DMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = rpq_number(spec, n)?.abs().sqrt();
    }
    let n_op = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, (0..d).map(|n| n as f64)));
    let a = TruncatedOperator::new(a)?;
    Ok((a.clone(), a.transpose(), TruncatedOperator::new(n_op)?))
}

/// Max `|entry|` of `m` over the top-left `(D-1) x (D-1)` block.
fn interior_max(m: &DMatrix<f64>) -> f64 {
    let k = m.nrows() - 1;
    m.view((0, 0), (k, k)).iter().fold(0.0, |acc, x| if x.is_nan() { f64::INFINITY } else { acc.max(x.abs()) })
}

fn diag(values: impl Iterator<Item = f64>, d: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, values))
}

/// Residuals of the ladder relations on the interior block, scaled by
/// `max(1, max f)`.
pub fn algebra_residuals(spec: &DeformationSpec, d: usize) -> Result<Report> {
    check_dim(d, 3)?;
    let (a, ad, n) = build_ladder(spec, d)?;
    let (a, ad, n) = (a.entries, ad.entries, n.entries);
    let f: Vec<f64> = (0..=d).map(|k| rpq_number(spec, k).map(f64::abs)).collect::<Result<_>>()?;
    let scale = f.iter().take(d).fold(1.0f64, |m, x| m.max(*x));
    let tol = 1e-12;
    let mut rep = Report::new(format!("{} ladder relations, D = {d}", spec.kind()));

    let ada = &ad * &a;
    let aad = &a * &ad;
    rep.push("comm_n_a_plus_a", interior_max(&(&n * &a - &a * &n + &a)) / scale, tol);
    rep.push("comm_n_adag_minus_adag", interior_max(&(&n * &ad - &ad * &n - &ad)) / scale, tol);
    rep.push("adag_a_minus_f_n", interior_max(&(&ada - diag(f[..d].iter().copied(), d))) / scale, tol);
    rep.push("a_adag_minus_f_n_plus_1", interior_max(&(&aad - diag(f[1..].iter().copied(), d))) / scale, tol);
    let commutator = diag((0..d).map(|k| f[k + 1] - f[k]), d);
    rep.push("commutator_vs_number_difference", interior_max(&(&aad - &ada - commutator)) / scale, tol);
    rep.push_bool("adag_is_transpose", ad == a.transpose());

    // Defining relation a a† - F(N) a† a = G(N).
    match builtin_fg(spec) {
        Ok(fg) => {
            let fm = diag((0..d).map(|k| (fg.f)(k)), d);
            let gm = diag((0..d).map(|k| (fg.g)(k)), d);
            rep.push("defining_relation", interior_max(&(&aad - fm * &ada - gm)) / scale, tol);
        }
        Err(RpqError::UnsupportedKind { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// Energy, variances and uncertainty product in the state `|n>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatorReport {
    pub n: usize,
    pub energy: f64,
    pub energy_from_matrices: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// Variances with the prefactors `m hbar omega / 2` and `hbar / (2 m omega)`
    /// attached to X and P the other way round.
    pub var_x_swapped: f64,
    pub var_p_swapped: f64,
    pub var_x_from_matrices: f64,
    pub var_p_from_matrices: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub uncertainty: f64,
    pub uncertainty_closed_form: f64,
    pub report: Report,
}

fn kalnins_bracket(spec: &DeformationSpec, n: usize) -> f64 {
    let (q, l, lambda) = (spec.q(), spec.l(), spec.lambda());
    let qn = |k: usize| (1.0 - q.powi(k as i32)) / (1.0 - q);
    l * l * q.powf(lambda - n as f64 - 1.0) * (q * qn(n) + qn(n + 1))
}

/// Oscillator characterization for the Kalnins kind.
pub fn oscillator_report(model: &OscillatorModel, n: usize) -> Result<OscillatorReport> {
    let spec = &model.spec;
    if spec.kind() != Kind::Kalnins {
        return Err(RpqError::UnsupportedKind { kind: spec.kind().to_string(), what: "oscillator report".into() });
    }
    let (hbar, m, w) = (model.hbar, model.mass, model.omega);
    let s = kalnins_bracket(spec, n);
    let energy = hbar * w / 2.0 * s;
    let var_x = hbar / (2.0 * m * w) * s;
    let var_p = m * hbar * w / 2.0 * s;

    let d = n + 3;
    check_dim(d, 3)?;
    let (a, ad, _) = build_ladder(spec, d)?;
    let (a, ad) = (a.entries, ad.entries);
    let h = (&ad * &a + &a * &ad) * (hbar * w / 2.0);
    let plus = &a + &ad;
    // P = -i c (a - a†), so P^2 = -c^2 (a - a†)^2 and <P> = -i c <a - a†>.
    let minus = &a - &ad;
    let cx = (hbar / (2.0 * m * w)).sqrt();
    let cp = (m * hbar * w / 2.0).sqrt();
    let mean_x = cx * plus[(n, n)];
    let mean_p = cp * minus[(n, n)];
    let var_x_m = cx * cx * (&plus * &plus)[(n, n)] - mean_x * mean_x;
    let var_p_m = -cp * cp * (&minus * &minus)[(n, n)] - mean_p * mean_p;

    let uncertainty = (var_x * var_p).sqrt();
    let uncertainty_closed_form = hbar / 2.0 * s;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let mut report = Report::new(format!("oscillator state n = {n}"));
    report.push("energy_closed_vs_matrix", rel(h[(n, n)], energy), 1e-10);
    report.push("var_x_closed_vs_matrix", rel(var_x_m, var_x), 1e-10);
    report.push("var_p_closed_vs_matrix", rel(var_p_m, var_p), 1e-10);
    report.push_bool("mean_x_zero", mean_x == 0.0);
    report.push_bool("mean_p_zero", mean_p == 0.0);
    report.push("uncertainty_product", rel(uncertainty, uncertainty_closed_form), 1e-12);
    report.info("var_x_swapped_prefactor", rel(var_x_m, m * hbar * w / 2.0 * s), 1e-10);
    Ok(OscillatorReport {
        n,
        energy,
        energy_from_matrices: h[(n, n)],
        var_x,
        var_p,
        var_x_swapped: m * hbar * w / 2.0 * s,
        var_p_swapped: hbar / (2.0 * m * w) * s,
        var_x_from_matrices: var_x_m,
        var_p_from_matrices: var_p_m,
        mean_x,
        mean_p,
        uncertainty,
        uncertainty_closed_form,
        report,
    })
}

/// Boundedness (`q > 1`) or log-concavity and ratio-limit (`q < 1`) checks
/// on the Jacobi sequence `x_n = sqrt(phi(n))` for `n <= D`.
pub fn jacobi_diagnostics(spec: &DeformationSpec, d: usize) -> Result<Report> {
    if spec.kind() != Kind::Kalnins {
        return Err(RpqError::UnsupportedKind { kind: spec.kind().to_string(), what: "Jacobi diagnostics".into() });
    }
    check_dim(d, 2)?;
    let (q, l, lambda) = (spec.q(), spec.l(), spec.lambda());
    let x: Vec<f64> = (0..=d + 1).map(|n| rpq_number(spec, n).map(|v| v.sqrt())).collect::<Result<_>>()?;
    let mut rep = Report::new(format!("Jacobi sequence, q = {q}, D = {d}"));
    if q > 1.0 {
        let bound = (l * l * q.powf(lambda) / (q - 1.0)).sqrt();
        let max = x[..=d].iter().fold(0.0f64, |m, v| m.max(*v));
        // x_n approaches the bound geometrically, so equality in floating
        // point is allowed once q^{-n} drops below machine epsilon.
        rep.push_bool("bounded_by_sqrt_l2q_lambda_over_q_minus_1", max <= bound);
        rep.info("max_x_over_bound", max / bound, 1.0);
    } else {
        let worst = (1..=d)
            .map(|n| {
                let lhs = x[n - 1] * x[n + 1];
                let rhs = x[n] * x[n];
                (lhs - rhs) / rhs
            })
            .fold(f64::NEG_INFINITY, f64::max);
        rep.push("log_concavity_excess", worst.max(0.0), 1e-12);
        rep.push("ratio_limit_sqrt_q", (x[d] / x[d + 1] - q.sqrt()).abs(), 1e-6);
    }
    Ok(rep)
}
