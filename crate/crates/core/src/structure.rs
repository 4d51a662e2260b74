//! Oscillator structure functions.
//!
//! A structure function `phi` satisfies `phi(k+1) = F(k) phi(k) + G(k)` with
//! `phi(0) = 0`, where `aa^+ - F(N) a^+a = G(N)` is the defining relation of
//! the algebra. Only eigenvalue sequences matter, so `F` and `G` are plain
//! functions on nonnegative integers.

use crate::error::{RpqError, Result};
use crate::numbers::rpq_number;
use crate::report::{mixed_residual, Report};
use crate::spec::{DeformationSpec, Kind};

type SeqFn = Box<dyn Fn(usize) -> f64 + Send + Sync>;

/// Integer-argument evaluations of `F(N)` and `G(N)`.
pub struct FGSpec {
    pub f: SeqFn,
    pub g: SeqFn,
}

impl FGSpec {
    pub fn new(f: impl Fn(usize) -> f64 + Send + Sync + 'static, g: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f), g: Box::new(g) }
    }
}

/// `phi(n)` by unrolling the recursion from `phi(0) = 0`.
pub fn phi_from_fg(fg: &FGSpec, n: usize) -> Result<f64> {
    let mut phi = 0.0;
    for k in 0..n {
        let f = (fg.f)(k);
        if f == 0.0 {
            return Err(RpqError::DivisionByZero(format!("F({k}) = 0")));
        }
        phi = f * phi + (fg.g)(k);
    }
    Ok(phi)
}

/// `phi(n) = [F(n-1)]! sum_{k<n} G(k) / [F(k)]!` with `[F(k)]! = F(0)...F(k)`.
pub fn phi_from_fg_sum(fg: &FGSpec, n: usize) -> Result<f64> {
    let mut fact = 1.0;
    let mut acc = 0.0;
    for k in 0..n {
        let f = (fg.f)(k);
        if f == 0.0 {
            return Err(RpqError::DivisionByZero(format!("F({k}) = 0")));
        }
        fact *= f;
        acc += (fg.g)(k) / fact;
    }
    Ok(fact * acc)
}

fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The `(F, G)` pair of the kind's defining commutation relation.
pub fn builtin_fg(spec: &DeformationSpec) -> Result<FGSpec> {
    let (p, q) = (spec.p(), spec.q());
    let (alpha, beta, gamma, nu) = (spec.alpha(), spec.beta(), spec.gamma(), spec.nu());
    let fg = match spec.kind() {
        Kind::HeineQ | Kind::ArikCoon => FGSpec::new(move |_| q, |_| 1.0),
        Kind::JagannathanSrinivasa => FGSpec::new(move |_| q, move |k| p.powi(k as i32)),
        Kind::ChakrabartiJagannathan => FGSpec::new(move |_| q, move |k| p.powi(-(k as i32))),
        Kind::Quesne => FGSpec::new(move |_| p, move |k| p * q.powi(-(k as i32) - 1)),
        Kind::HounkonnouNgompe => {
            let (mu, h) = (spec.mu(), spec.h());
            let ratio = q.powf(nu) / p.powf(mu - 1.0);
            FGSpec::new(
                move |_| q.powf(nu - 1.0) / p.powf(mu),
                move |k| h * q.powf(nu - 1.0) / p.powf(mu - 1.0) * ratio.powi(k as i32),
            )
        }
        Kind::Kalnins => {
            let (l, lambda) = (spec.l(), spec.lambda());
            FGSpec::new(|_| 1.0, move |k| l * l * q.powf(lambda - k as f64 - 1.0))
        }
        Kind::TammDancoff => FGSpec::new(move |_| q, move |k| q.powi(k as i32)),
        Kind::Feinsilver => FGSpec::new(|_| 1.0, move |k| q.powi(-2 * k as i32)),
        Kind::BiedenharnMacfarlane => FGSpec::new(move |_| q, move |k| q.powi(-(k as i32))),
        Kind::CalogeroVasiliev => FGSpec::new(|_| 1.0, move |k| 1.0 + 2.0 * nu * parity(k)),
        Kind::Chung => FGSpec::new(move |_| q, move |k| q.powf(alpha * k as f64 + beta)),
        Kind::Borzov => FGSpec::new(move |_| q.powf(gamma), move |k| q.powf(alpha * k as f64 + beta)),
        Kind::Brzezinski => {
            FGSpec::new(move |_| q, move |k| q.powi(-(k as i32)) * (1.0 + 2.0 * alpha * parity(k)))
        }
        Kind::Burban => FGSpec::new(
            move |_| q.powf(gamma),
            move |k| q.powf(alpha * k as f64 + beta) * (1.0 + 2.0 * nu * parity(k)),
        ),
        Kind::Baloitcha => FGSpec::new(
            move |_| p.powf(nu),
            move |k| (1.0 + 2.0 * gamma * parity(k)) * q.powf(alpha * k as f64 + beta),
        ),
        Kind::RationalRRs => {
            return Err(RpqError::UnsupportedKind { kind: spec.kind().to_string(), what: "an (F, G) pair".into() })
        }
    };
    Ok(fg)
}

/// Closed-form `phi(n)` for every oscillator kind.
pub fn builtin_phi(spec: &DeformationSpec, n: usize) -> Result<f64> {
    if spec.kind() == Kind::RationalRRs {
        return Err(RpqError::UnsupportedKind {
            kind: spec.kind().to_string(),
            what: "a catalogued structure function".into(),
        });
    }
    rpq_number(spec, n)
}

/// Max over `n <= n_max` of the mixed residual between recursion and
/// closed form. Feinsilver is also compared with Arik-Coon at `q^-2`.
pub fn fg_consistency_check(spec: &DeformationSpec, n_max: usize, tol: f64) -> Result<Report> {
    let fg = builtin_fg(spec)?;
    let mut rep = Report::new(format!("fg consistency ({})", spec.kind()));
    let mut worst = 0.0f64;
    let mut worst_sum = 0.0f64;
    for n in 0..=n_max {
        let closed = builtin_phi(spec, n)?;
        worst = worst.max(mixed_residual(closed, phi_from_fg(&fg, n)?));
        worst_sum = worst_sum.max(mixed_residual(closed, phi_from_fg_sum(&fg, n)?));
    }
    rep.push("recursion_vs_closed_form", worst, tol);
    rep.push("factorial_sum_vs_closed_form", worst_sum, tol);
    if spec.kind() == Kind::Feinsilver {
        let ac = DeformationSpec::new(Kind::ArikCoon, 1.0, spec.q().powi(-2))?;
        let mut red = 0.0f64;
        for n in 0..=n_max {
            red = red.max(mixed_residual(builtin_phi(spec, n)?, phi_from_fg(&builtin_fg(&ac)?, n)?));
        }
        rep.push("feinsilver_arik_coon_reduction", red, tol);
    }
    Ok(rep)
}

/// Whether the oscillator truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Infinite,
    /// `phi(n0) = 0` at the first `n0 >= 1`, so the Fock space is `C^n0`.
    FiniteDimensional(usize),
}

/// Where a structure function came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm(Kind),
    FgRecursion,
}

/// Append-only memoized `phi(0..)`. Extension takes `&mut self`, so share
/// an instance across threads only after extending it.
pub struct StructureFunction {
    values: Vec<f64>,
    source: Source,
    spec: Option<DeformationSpec>,
    fg: Option<FGSpec>,
}

impl StructureFunction {
    pub fn closed_form(spec: &DeformationSpec) -> Result<Self> {
        builtin_phi(spec, 0)?;
        Ok(Self { values: vec![0.0], source: Source::ClosedForm(spec.kind()), spec: Some(spec.clone()), fg: None })
    }

    pub fn from_fg(fg: FGSpec) -> Self {
        Self { values: vec![0.0], source: Source::FgRecursion, spec: None, fg: Some(fg) }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.values.len() <= n {
            let k = self.values.len();
            let next = match (&self.spec, &self.fg) {
                (Some(spec), _) => builtin_phi(spec, k)?,
                (None, Some(fg)) => {
                    let f = (fg.f)(k - 1);
                    if f == 0.0 {
                        return Err(RpqError::DivisionByZero(format!("F({}) = 0", k - 1)));
                    }
                    f * self.values[k - 1] + (fg.g)(k - 1)
                }
                (None, None) => unreachable!("constructors set one source"),
            };
            if !next.is_finite() {
                return Err(RpqError::Domain(format!("phi({k}) is not finite")));
            }
            self.values.push(next);
        }
        Ok(())
    }

    pub fn phi(&mut self, n: usize) -> Result<f64> {
        self.extend_to(n)?;
        Ok(self.values[n])
    }

    /// `f(n) = |phi(n)|`.
    pub fn f(&mut self, n: usize) -> Result<f64> {
        Ok(self.phi(n)?.abs())
    }

    /// Already computed prefix `phi(0..len)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&mut self, n_max: usize) -> Result<Dimension> {
        self.extend_to(n_max)?;
        Ok(self.values[1..]
            .iter()
            .position(|v| *v == 0.0)
            .map_or(Dimension::Infinite, |i| Dimension::FiniteDimensional(i + 1)))
    }
}

/// `f(n) = |phi(n)|` for `n = 0..len`.
pub fn abs_structure(spec: &DeformationSpec, len: usize) -> Result<Vec<f64>> {
    (0..len).map(|n| builtin_phi(spec, n).map(f64::abs)).collect()
}

/// Every kind with a catalogued `(F, G)` pair, at representative parameters.
pub fn catalogue() -> Vec<DeformationSpec> {
    let mk = |kind, p, q, extras: &[(&str, f64)]| DeformationSpec::with_extras(kind, p, q, extras).expect("valid");
    vec![
        mk(Kind::TammDancoff, 1.0, 0.5, &[]),
        mk(Kind::ArikCoon, 1.0, 0.5, &[]),
        mk(Kind::Feinsilver, 1.0, 1.3, &[]),
        mk(Kind::BiedenharnMacfarlane, 1.0, 1.2, &[]),
        mk(Kind::ChakrabartiJagannathan, 1.3, 0.6, &[]),
        mk(Kind::Kalnins, 1.0, 1.5, &[("l", 1.0), ("lambda", 0.3)]),
        mk(Kind::Chung, 1.0, 0.8, &[("alpha", 0.5), ("beta", 0.2)]),
        mk(Kind::Borzov, 1.0, 0.8, &[("alpha", 0.5), ("beta", 0.2), ("gamma", 1.2)]),
        mk(Kind::Brzezinski, 1.0, 1.1, &[("alpha", 0.3)]),
        mk(Kind::Quesne, 1.1, 0.9, &[]),
        mk(Kind::HounkonnouNgompe, 1.2, 0.7, &[("mu", 1.0), ("nu", 1.5)]),
        mk(Kind::Baloitcha, 1.1, 0.8, &[("alpha", 0.5), ("beta", 0.2), ("gamma", 0.2), ("nu", 1.3)]),
        mk(Kind::Burban, 1.0, 0.9, &[("alpha", 0.7), ("beta", 0.1), ("gamma", 1.1), ("nu", 0.2)]),
        mk(Kind::CalogeroVasiliev, 1.0, 1.0, &[("nu", 0.25)]),
        mk(Kind::JagannathanSrinivasa, 1.2, 0.7, &[]),
        mk(Kind::HeineQ, 1.0, 0.5, &[]),
    ]
}
