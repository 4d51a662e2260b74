//! Truncated tensor representations of the coproduct, counit and antipode,
//! with numeric checks of the Hopf axioms.
//!
//! Only the worked instantiations are built in: the primitive structure
//! shared by Jagannathan-Srinivasa, Chakrabarti-Jagannathan and Quesne, and
//! the κ-twisted Hounkonnou-Ngompe structure. Every coproduct is kept as a
//! list of simple tensors so counit and antipode can be applied slotwise;
//! Kronecker assembly happens only when a matrix is needed.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{RpqError, Result};
use crate::fock::{build_ladder, TruncatedOperator, MAX_DIM};
use crate::parallel::{join, Exec};
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind};

/// Coassociativity lives on `D^3`; larger truncations are clamped to this.
pub const MAX_TRIPLE_DIM: usize = 12;

/// Tolerance used by the axiom suite.
pub const HOPF_TOL: f64 = 1e-10;

/// Hopf data for one deformation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfSpec {
    pub base: DeformationSpec,
    pub tau: f64,
    /// `κ_α`; 1 for the primitive instantiations.
    pub kappa: f64,
    /// Weight in `[A, A†]_γ = A A† - γ A† A`.
    pub gamma: f64,
}

impl HopfSpec {
    /// Built-in instantiation. For HN, `κ = q^(α₂ν) / p^(α₁(μ-1))` with the
    /// exponents read from the `alpha1`, `alpha2` extras (default 1).
    pub fn builtin(base: DeformationSpec, tau: f64) -> Result<Self> {
        let kappa = match base.kind() {
            Kind::JagannathanSrinivasa | Kind::ChakrabartiJagannathan | Kind::Quesne => 1.0,
            Kind::HounkonnouNgompe => {
                let (a1, a2) = (base.extra("alpha1", 1.0), base.extra("alpha2", 1.0));
                base.q().powf(a2 * base.nu()) / base.p().powf(a1 * (base.mu() - 1.0))
            }
            k => return Err(unsupported(k)),
        };
        Self::new(base, tau, kappa, 1.0)
    }

    pub fn new(base: DeformationSpec, tau: f64, kappa: f64, gamma: f64) -> Result<Self> {
        match base.kind() {
            Kind::JagannathanSrinivasa | Kind::ChakrabartiJagannathan | Kind::Quesne => {
                if kappa != 1.0 {
                    return Err(RpqError::Domain(format!("{} has a primitive coproduct; kappa must be 1", base.kind().name())));
                }
            }
            Kind::HounkonnouNgompe => {}
            k => return Err(unsupported(k)),
        }
        if !(tau.is_finite() && gamma.is_finite() && kappa.is_finite() && kappa > 0.0) {
            return Err(RpqError::Domain("tau and gamma must be finite and kappa positive".into()));
        }
        Ok(Self { base, tau, kappa, gamma })
    }

    /// `κ_β`. With `τ = 0` it is free and taken equal to `κ_α`, which makes
    /// the cross terms of the homomorphism cancel with `γ = 1`; with
    /// `τ ≠ 0` the counit conditions force `κ_β = 1/κ_α`.
    pub fn kappa_beta(&self) -> f64 {
        if self.tau == 0.0 {
            self.kappa
        } else {
            1.0 / self.kappa
        }
    }

    /// Antipode scalars `(s₁, s̃₁)` with `S(A) = -s₁ A`, `S(A†) = -s̃₁ A†`.
    pub fn antipode_scalars(&self) -> (f64, f64) {
        (1.0 / self.kappa, self.kappa_beta())
    }

    /// `ε(N)`.
    pub fn counit_n(&self) -> f64 {
        -self.tau
    }
}

fn unsupported(k: Kind) -> RpqError {
    RpqError::UnsupportedKind { kind: k.name().into(), what: "a built-in Hopf structure".into() }
}

/// A `D^2 x D^2` operator on the pair space.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOperator {
    d: usize,
    entries: DMatrix<f64>,
}

impl TensorOperator {
    /// Single-slot dimension `D`.
    pub fn factor_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d * self.d
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// Slot element of a simple tensor.
#[derive(Clone)]
enum Elem {
    Id,
    A,
    Adag,
    /// `g(N)` for a scalar function `g`.
    Diag(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

fn pow_n(base: f64, shift: f64) -> Elem {
    Elem::Diag(Arc::new(move |n| base.powf(n + shift)))
}

/// `Σ c · left ⊗ right`.
type Split = Vec<(f64, Elem, Elem)>;

#[derive(Clone, Copy, PartialEq)]
enum Gen {
    A,
    Adag,
    N,
}

struct Ctx {
    h: HopfSpec,
    d: usize,
    a: DMatrix<f64>,
    ad: DMatrix<f64>,
}

impl Ctx {
    fn new(h: &HopfSpec, d: usize) -> Result<Self> {
        if !(3..=MAX_DIM).contains(&d) {
            return Err(RpqError::Domain(format!("dimension {d} outside [3, {MAX_DIM}]")));
        }
        let (a, ad, _) = build_ladder(&h.base, d)?;
        Ok(Self { h: h.clone(), d, a: a.entries().clone(), ad: ad.entries().clone() })
    }

    fn split(&self, g: Gen) -> Split {
        let (ka, kb, t) = (self.h.kappa, self.h.kappa_beta(), self.h.tau);
        match g {
            Gen::A => vec![(1.0, Elem::A, pow_n(ka, t)), (1.0, pow_n(1.0 / ka, t), Elem::A)],
            Gen::Adag => vec![(1.0, Elem::Adag, pow_n(kb, t)), (1.0, pow_n(1.0 / kb, t), Elem::Adag)],
            Gen::N => {
                let n = Elem::Diag(Arc::new(|n| n));
                vec![(1.0, n.clone(), Elem::Id), (1.0, Elem::Id, n), (t, Elem::Id, Elem::Id)]
            }
        }
    }

    fn gen_matrix(&self, g: Gen) -> DMatrix<f64> {
        match g {
            Gen::A => self.a.clone(),
            Gen::Adag => self.ad.clone(),
            Gen::N => self.diag(|n| n),
        }
    }

    fn diag(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(self.d, (0..self.d).map(|n| g(n as f64))))
    }

    fn slot(&self, e: &Elem) -> DMatrix<f64> {
        match e {
            Elem::Id => DMatrix::identity(self.d, self.d),
            Elem::A => self.a.clone(),
            Elem::Adag => self.ad.clone(),
            Elem::Diag(g) => self.diag(|n| g(n)),
        }
    }

    fn assemble(&self, s: &Split) -> DMatrix<f64> {
        let m = self.d * self.d;
        s.iter().fold(DMatrix::zeros(m, m), |acc, (c, l, r)| acc + self.slot(l).kronecker(&self.slot(r)) * *c)
    }

    /// `Δ` of a slot element as a pair-space matrix.
    fn delta_elem(&self, e: &Elem) -> DMatrix<f64> {
        let d = self.d;
        match e {
            Elem::Id => DMatrix::identity(d * d, d * d),
            Elem::A => self.assemble(&self.split(Gen::A)),
            Elem::Adag => self.assemble(&self.split(Gen::Adag)),
            // g(N ⊗ 1 + 1 ⊗ N + τ)
            Elem::Diag(g) => {
                let t = self.h.tau;
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    d * d,
                    (0..d * d).map(|i| g((i / d + i % d) as f64 + t)),
                ))
            }
        }
    }

    fn counit(&self, e: &Elem) -> f64 {
        match e {
            Elem::Id => 1.0,
            Elem::A | Elem::Adag => 0.0,
            Elem::Diag(g) => g(self.h.counit_n()),
        }
    }

    fn antipode(&self, e: &Elem) -> DMatrix<f64> {
        let (s1, s1t) = self.h.antipode_scalars();
        match e {
            Elem::Id => DMatrix::identity(self.d, self.d),
            Elem::A => &self.a * -s1,
            Elem::Adag => &self.ad * -s1t,
            Elem::Diag(g) => {
                let t = self.h.tau;
                self.diag(|n| g(-n - 2.0 * t))
            }
        }
    }

    fn counit_gen(&self, g: Gen) -> f64 {
        match g {
            Gen::A | Gen::Adag => 0.0,
            Gen::N => self.h.counit_n(),
        }
    }
}

/// Multi-indices on `D^k` whose every slot index is below `D - 2`.
fn interior(d: usize, slots: u32) -> Vec<usize> {
    (0..d.pow(slots))
        .filter(|&i| {
            let mut r = i;
            (0..slots).all(|_| {
                let ok = r % d < d - 2;
                r /= d;
                ok
            })
        })
        .collect()
}

fn masked_max(m: &DMatrix<f64>, idx: &[usize]) -> f64 {
    let mut out = 0.0f64;
    for &i in idx {
        for &j in idx {
            let x = m[(i, j)].abs();
            out = if x.is_nan() { f64::INFINITY } else { out.max(x) };
        }
    }
    out
}

/// Residual `|lhs - rhs|` on the interior block, relative to the size of `rhs`.
fn residual(lhs: &DMatrix<f64>, rhs: &DMatrix<f64>, idx: &[usize]) -> f64 {
    let scale = masked_max(rhs, idx).max(1.0);
    masked_max(&(lhs - rhs), idx) / scale
}

/// Matrices of the Hopf structure at truncation `D`.
#[derive(Debug, Clone)]
pub struct HopfRep {
    pub spec: HopfSpec,
    pub delta_a: TensorOperator,
    pub delta_adag: TensorOperator,
    pub delta_n: TensorOperator,
    pub delta_one: TensorOperator,
    pub s_a: TruncatedOperator,
    pub s_adag: TruncatedOperator,
    pub s_n: TruncatedOperator,
    pub s_one: TruncatedOperator,
    pub eps_a: f64,
    pub eps_adag: f64,
    pub eps_n: f64,
    pub eps_one: f64,
}

pub fn build_hopf_rep(hspec: &HopfSpec, d: usize) -> Result<HopfRep> {
    let c = Ctx::new(hspec, d)?;
    let t = |m: DMatrix<f64>| TensorOperator { d, entries: m };
    Ok(HopfRep {
        spec: hspec.clone(),
        delta_a: t(c.assemble(&c.split(Gen::A))),
        delta_adag: t(c.assemble(&c.split(Gen::Adag))),
        delta_n: t(c.assemble(&c.split(Gen::N))),
        delta_one: t(DMatrix::identity(d * d, d * d)),
        s_a: TruncatedOperator::new(c.antipode(&Elem::A))?,
        s_adag: TruncatedOperator::new(c.antipode(&Elem::Adag))?,
        s_n: TruncatedOperator::new(c.antipode(&Elem::Diag(Arc::new(|n| n))))?,
        s_one: TruncatedOperator::new(DMatrix::identity(d, d))?,
        eps_a: 0.0,
        eps_adag: 0.0,
        eps_n: hspec.counit_n(),
        eps_one: 1.0,
    })
}

const GENS: [(Gen, &str); 3] = [(Gen::A, "a"), (Gen::Adag, "adag"), (Gen::N, "n")];

/// `(id ⊗ Δ)Δ` against `(Δ ⊗ id)Δ`. Only interior entries are needed, so
/// the triple Kronecker products are evaluated entrywise,
/// `(X ⊗ Y)[(i, i'), (j, j')] = X[i, j] Y[i', j']`, instead of being assembled.
fn coassociativity(c: &Ctx) -> Report {
    let mut r = Report::new("coassociativity");
    let d = c.d;
    let d2 = d * d;
    let idx = interior(d, 3);
    for (g, name) in GENS {
        let terms: Vec<_> =
            c.split(g).iter().map(|(k, a, b)| (*k, c.slot(a), c.delta_elem(b), c.delta_elem(a), c.slot(b))).collect();
        let (mut diff, mut scale) = (0.0f64, 1.0f64);
        for &i in &idx {
            for &j in &idx {
                let (mut left, mut right) = (0.0, 0.0);
                for (k, a, db, da, b) in &terms {
                    left += k * a[(i / d2, j / d2)] * db[(i % d2, j % d2)];
                    right += k * da[(i / d, j / d)] * b[(i % d, j % d)];
                }
                diff = if (left - right).is_nan() { f64::INFINITY } else { diff.max((left - right).abs()) };
                scale = scale.max(right.abs());
            }
        }
        r.push(name, diff / scale, HOPF_TOL);
    }
    r
}

fn pair_axioms(c: &Ctx) -> Report {
    let mut r = Report::new("pair");
    let idx1 = interior(c.d, 1);
    let idx2 = interior(c.d, 2);
    let id = DMatrix::<f64>::identity(c.d, c.d);
    for (g, name) in GENS {
        let s = c.split(g);
        let x = c.gen_matrix(g);
        let right_counit = s.iter().fold(DMatrix::zeros(c.d, c.d), |acc, (k, a, b)| acc + c.slot(a) * (k * c.counit(b)));
        let left_counit = s.iter().fold(DMatrix::zeros(c.d, c.d), |acc, (k, a, b)| acc + c.slot(b) * (k * c.counit(a)));
        r.push(format!("counit_right_{name}"), residual(&right_counit, &x, &idx1), HOPF_TOL);
        r.push(format!("counit_left_{name}"), residual(&left_counit, &x, &idx1), HOPF_TOL);
        let eps = &id * c.counit_gen(g);
        let right_s = s.iter().fold(DMatrix::zeros(c.d, c.d), |acc, (k, a, b)| acc + c.slot(a) * c.antipode(b) * *k);
        let left_s = s.iter().fold(DMatrix::zeros(c.d, c.d), |acc, (k, a, b)| acc + c.antipode(a) * c.slot(b) * *k);
        r.push(format!("antipode_right_{name}"), residual(&right_s, &eps, &idx1), HOPF_TOL);
        r.push(format!("antipode_left_{name}"), residual(&left_s, &eps, &idx1), HOPF_TOL);
    }

    // Δ([A, A†]_γ) against [A, A†]_γ ⊗ Ψ_α Ψ_β + Ψ̃_α Ψ̃_β ⊗ [A, A†]_γ.
    let gamma = c.h.gamma;
    let da = c.assemble(&c.split(Gen::A));
    let dad = c.assemble(&c.split(Gen::Adag));
    let lhs = &da * &dad - (&dad * &da) * gamma;
    let comm = &c.a * &c.ad - (&c.ad * &c.a) * gamma;
    let (ka, kb, t) = (c.h.kappa, c.h.kappa_beta(), c.h.tau);
    let psi = c.diag(|n| (ka * kb).powf(n));
    let psi_t = c.diag(|n| (1.0 / (ka * kb)).powf(n));
    // α β and α̃ β̃; both equal 1 for the built-ins.
    let ab = (ka * kb).powf(t);
    let rhs = comm.kronecker(&psi) * ab + psi_t.kronecker(&comm) / ab;
    r.push("gamma_homomorphism", residual(&lhs, &rhs, &idx2), HOPF_TOL);

    // Scalar consistency: ε([N, A]) = -ε(A), S(N) = -N - 2τ.
    let eps_comm = c.counit_gen(Gen::N) * c.counit_gen(Gen::A) - c.counit_gen(Gen::A) * c.counit_gen(Gen::N);
    r.push_bool("counit_commutator_consistency", eps_comm == -c.counit_gen(Gen::A));
    let s_n = c.antipode(&Elem::Diag(Arc::new(|n| n)));
    let expect = c.diag(|n| -n - 2.0 * t);
    r.push_bool("antipode_n_exact", s_n == expect);
    r
}

/// Every axiom residual on interior blocks. Pair-space checks use `D`,
/// coassociativity uses `min(D, 12)`.
pub fn hopf_axiom_suite(hspec: &HopfSpec, d: usize) -> Result<Report> {
    hopf_axiom_suite_with(hspec, d, Exec::available())
}

pub fn hopf_axiom_suite_with(hspec: &HopfSpec, d: usize, exec: Exec) -> Result<Report> {
    let pair = Ctx::new(hspec, d)?;
    let triple = Ctx::new(hspec, d.min(MAX_TRIPLE_DIM))?;
    let (coassoc, rest) = join(exec, || coassociativity(&triple), || pair_axioms(&pair));
    let mut r = Report::new(format!("hopf[{} tau={}]", hspec.base.kind().name(), hspec.tau));
    r.extend(coassoc);
    for c in rest.checks {
        r.checks.push(c);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn js() -> DeformationSpec {
        DeformationSpec::new(Kind::JagannathanSrinivasa, 1.2, 0.7).unwrap()
    }

    fn hn() -> DeformationSpec {
        DeformationSpec::with_extras(Kind::HounkonnouNgompe, 1.2, 0.7, &[("mu", 1.0), ("nu", 1.5)]).unwrap()
    }

    #[test]
    fn js_coproduct_is_primitive() {
        let h = HopfSpec::builtin(js(), 0.0).unwrap();
        let rep = build_hopf_rep(&h, 5).unwrap();
        let (a, _, _) = build_ladder(&h.base, 5).unwrap();
        let i = DMatrix::<f64>::identity(5, 5);
        let expect = a.entries().kronecker(&i) + i.kronecker(a.entries());
        assert_eq!(rep.delta_a.entries(), &expect);
        assert_eq!(rep.delta_one.entries(), &DMatrix::<f64>::identity(25, 25));
        assert_eq!(rep.eps_n, 0.0);
    }

    #[test]
    fn hn_delta_a_matches_hand_blocks() {
        let h = HopfSpec::builtin(hn(), 0.0).unwrap();
        let k = h.kappa;
        assert!((k - 0.7f64.powf(1.5)).abs() < 1e-15);
        let rep = build_hopf_rep(&h, 3).unwrap();
        let (a, _, _) = build_ladder(&h.base, 3).unwrap();
        // <i1 i2| Δ(A) |j1 j2> = A[i1,j1] κ^{j2} δ + κ^{-i1} δ A[i2,j2]
        for i in 0..9 {
            for j in 0..9 {
                let (i1, i2, j1, j2) = (i / 3, i % 3, j / 3, j % 3);
                let mut e = 0.0;
                if i2 == j2 {
                    e += a.get(i1, j1) * k.powi(j2 as i32);
                }
                if i1 == j1 {
                    e += k.powi(-(i1 as i32)) * a.get(i2, j2);
                }
                assert!((rep.delta_a.get(i, j) - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn js_axioms_exact() {
        for tau in [0.0, 0.5] {
            let r = hopf_axiom_suite(&HopfSpec::builtin(js(), tau).unwrap(), 6).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            assert!(r.max_residual() < 1e-12);
        }
    }

    #[test]
    fn hn_tau_zero_passes() {
        let r = hopf_axiom_suite(&HopfSpec::builtin(hn(), 0.0).unwrap(), 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn hn_tau_nonzero_breaks_only_homomorphism() {
        let r = hopf_axiom_suite(&HopfSpec::builtin(hn(), 0.5).unwrap(), 6).unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["gamma_homomorphism"]);
    }

    #[test]
    fn n_generator_axioms_with_tau() {
        for base in [js(), hn()] {
            let r = hopf_axiom_suite(&HopfSpec::builtin(base, 0.5).unwrap(), 6).unwrap();
            for c in r.checks.iter().filter(|c| c.name.ends_with("_n") || c.name.ends_with("/n")) {
                assert!(c.residual < 1e-12, "{}: {}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn unsupported_kind() {
        let s = DeformationSpec::new(Kind::ArikCoon, 1.0, 0.5).unwrap();
        assert!(matches!(HopfSpec::builtin(s, 0.0), Err(RpqError::UnsupportedKind { .. })));
    }

    #[test]
    fn sequential_matches_parallel() {
        let h = HopfSpec::builtin(hn(), 0.0).unwrap();
        let a = hopf_axiom_suite_with(&h, 6, Exec::Sequential).unwrap();
        let b = hopf_axiom_suite_with(&h, 6, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
