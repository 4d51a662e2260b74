//! R(p,q)-numbers, factorials, binomial coefficients and shifted factorials.
//!
//! Every kind exposes its numbers through [`rpq_number`]; for oscillator
//! kinds this is the closed-form structure function. Parity-dependent
//! kinds branch on `n mod 2` internally.

use std::collections::BTreeMap;

use crate::error::{RpqError, Result};
use crate::report::{mixed_residual, Report};
use crate::spec::{DeformationSpec, Kind, PrecisionPolicy};

/// Plain-mode factorials beyond this order raise `OverflowRisk`.
pub const PLAIN_FACTORIAL_LIMIT: usize = 300;

fn parity(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(a^n - b^n) / (a - b)`, falling back to `n a^(n-1)` when `a == b`.
fn geometric(a: f64, b: f64, n: f64) -> f64 {
    if a == b {
        n * a.powf(n - 1.0)
    } else {
        (a.powf(n) - b.powf(n)) / (a - b)
    }
}

/// `R(p^n, q^n)` for the kind of `spec`; `0` at `n = 0`.
pub fn rpq_number(spec: &DeformationSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let (p, q) = (spec.p(), spec.q());
    let nf = n as f64;
    let value = match spec.kind() {
        Kind::HeineQ
        | Kind::JagannathanSrinivasa
        | Kind::ChakrabartiJagannathan
        | Kind::Quesne
        | Kind::HounkonnouNgompe => rpq_number_signed(spec, n as i64)?,
        Kind::Kalnins => {
            let (l, lambda) = (spec.l(), spec.lambda());
            l * l * q.powf(lambda - nf) * (1.0 - q.powf(nf)) / (1.0 - q)
        }
        Kind::TammDancoff => nf * q.powf(nf - 1.0),
        Kind::ArikCoon => (1.0 - q.powf(nf)) / (1.0 - q),
        Kind::Feinsilver => {
            let t = q.powi(-2);
            (1.0 - t.powf(nf)) / (1.0 - t)
        }
        Kind::BiedenharnMacfarlane => (q.powf(nf) - q.powf(-nf)) / (q - 1.0 / q),
        Kind::CalogeroVasiliev => nf + spec.nu() * (1.0 - parity(n)),
        Kind::Chung => {
            let (alpha, beta) = (spec.alpha(), spec.beta());
            q.powf(beta) * geometric(q, q.powf(alpha), nf)
        }
        Kind::Borzov => {
            let (alpha, beta, gamma) = (spec.alpha(), spec.beta(), spec.gamma());
            q.powf(beta) * geometric(q.powf(gamma), q.powf(alpha), nf)
        }
        Kind::Brzezinski => {
            let alpha = spec.alpha();
            let bm = (q.powf(nf) - q.powf(-nf)) / (q - 1.0 / q);
            bm + 2.0 * alpha * (q.powf(nf) - parity(n) * q.powf(-nf)) / (q + 1.0 / q)
        }
        Kind::Burban => {
            let (alpha, beta, gamma, nu) = (spec.alpha(), spec.beta(), spec.gamma(), spec.nu());
            let (a, b) = (q.powf(gamma), q.powf(alpha));
            q.powf(beta) * (geometric(a, b, nf) + 2.0 * nu * (a.powf(nf) - parity(n) * b.powf(nf)) / (a + b))
        }
        Kind::Baloitcha => {
            let (alpha, beta, gamma, nu) = (spec.alpha(), spec.beta(), spec.gamma(), spec.nu());
            let (a, b) = (p.powf(nu), q.powf(alpha));
            q.powf(beta) * (geometric(a, b, nf) + 2.0 * gamma * (a.powf(nf) - parity(n) * b.powf(nf)) / (a + b))
        }
        Kind::RationalRRs => rational_number(spec, n),
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RpqError::Domain(format!("{} number at n = {n} is not finite", spec.kind())))
    }
}

fn rational_number(spec: &DeformationSpec, n: usize) -> f64 {
    let (p, q) = (spec.p(), spec.q());
    let c = spec.rational_coeffs().expect("rational spec carries coefficients");
    let nf = n as f64;
    let e = 1 + c.c.len() as i32 - c.a.len() as i32;
    let mut num = p.powf(nf) - q.powf(nf);
    for (ci, di) in c.c.iter().zip(&c.d) {
        num *= ci * p.powf(nf - 1.0) - di * q.powf(nf - 1.0);
    }
    let mut den = (-(q / p).powf(nf)).powi(e);
    for (ai, bi) in c.a.iter().zip(&c.b) {
        den *= ai * p.powf(nf - 1.0) - bi * q.powf(nf - 1.0);
    }
    num / den
}

/// Numbers at any integer argument for the kinds whose closed forms extend
/// to negative `n` (used by the negation and subtraction identities).
pub fn rpq_number_signed(spec: &DeformationSpec, n: i64) -> Result<f64> {
    let (p, q) = (spec.p(), spec.q());
    let nf = n as f64;
    let quesne = |p: f64, q: f64| (p.powf(nf) - q.powf(-nf)) / (q - 1.0 / p);
    let value = match spec.kind() {
        Kind::HeineQ => (1.0 - q.powf(nf)) / (1.0 - q),
        Kind::JagannathanSrinivasa => (p.powf(nf) - q.powf(nf)) / (p - q),
        Kind::ChakrabartiJagannathan => (p.powf(-nf) - q.powf(nf)) / (1.0 / p - q),
        Kind::Quesne => quesne(p, q),
        Kind::HounkonnouNgompe => {
            let k = q.powf(spec.nu()) / p.powf(spec.mu());
            spec.h() * k.powf(nf) * quesne(p, q)
        }
        other => {
            return Err(RpqError::UnsupportedKind {
                kind: other.to_string(),
                what: "numbers at negative arguments".into(),
            })
        }
    };
    Ok(value)
}

/// Numbers `R(p^k, q^k)` for `k = 0..=n_max`.
pub fn rpq_numbers(spec: &DeformationSpec, n_max: usize) -> Result<Vec<f64>> {
    (0..=n_max).map(|k| rpq_number(spec, k)).collect()
}

fn positive_factor(spec: &DeformationSpec, k: usize) -> Result<f64> {
    let x = rpq_number(spec, k)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(RpqError::Domain(format!("{} number at n = {k} is {x}, factorials need positive factors", spec.kind())))
    }
}

/// `R!(p^n, q^n) = R(p,q) ... R(p^n,q^n)`, with `1` at `n = 0`.
pub fn rpq_factorial(spec: &DeformationSpec, n: usize, policy: &PrecisionPolicy) -> Result<f64> {
    if policy.log_space {
        return log_rpq_factorial(spec, n).map(f64::exp);
    }
    if n > PLAIN_FACTORIAL_LIMIT {
        return Err(RpqError::OverflowRisk(format!(
            "factorial of order {n} exceeds {PLAIN_FACTORIAL_LIMIT}; enable log_space"
        )));
    }
    (1..=n).try_fold(1.0, |acc, k| Ok(acc * positive_factor(spec, k)?))
}

/// Natural log of the factorial, summed term by term.
pub fn log_rpq_factorial(spec: &DeformationSpec, n: usize) -> Result<f64> {
    (1..=n).try_fold(0.0, |acc, k| Ok(acc + positive_factor(spec, k)?.ln()))
}

/// Factorials `R!(0..=n_max)` in plain arithmetic.
pub fn rpq_factorials(spec: &DeformationSpec, n_max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 1.0;
    out.push(acc);
    for k in 1..=n_max {
        acc *= positive_factor(spec, k)?;
        out.push(acc);
    }
    Ok(out)
}

/// `R!(n) / (R!(k) R!(n-k))` under the default policy.
pub fn rpq_binomial(spec: &DeformationSpec, n: usize, k: usize) -> Result<f64> {
    rpq_binomial_with(spec, n, k, &PrecisionPolicy::default())
}

pub fn rpq_binomial_with(spec: &DeformationSpec, n: usize, k: usize, policy: &PrecisionPolicy) -> Result<f64> {
    if k > n {
        return Err(RpqError::Range(format!("binomial needs k <= n, got n = {n}, k = {k}")));
    }
    if policy.log_space {
        let l = log_rpq_factorial(spec, n)? - (log_rpq_factorial(spec, k)? + log_rpq_factorial(spec, n - k)?);
        return Ok(l.exp());
    }
    Ok(rpq_factorial(spec, n, policy)? / (rpq_factorial(spec, k, policy)? * rpq_factorial(spec, n - k, policy)?))
}

/// Row `n` of the binomial table.
pub fn rpq_binomial_row(spec: &DeformationSpec, n: usize) -> Result<Vec<f64>> {
    let f = rpq_factorials(spec, n)?;
    Ok((0..=n).map(|k| f[n] / (f[k] * f[n - k])).collect())
}

/// `((a,b);(p,q))_n = prod_{k<n} (a p^k - b q^k)`.
pub fn pq_shifted_factorial(a: f64, b: f64, p: f64, q: f64, n: usize) -> f64 {
    let (mut pk, mut qk) = (1.0, 1.0);
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= a * pk - b * qk;
        pk *= p;
        qk *= q;
    }
    acc
}

/// Gaussian binomial `[n, k]_x` from its product form.
pub fn gaussian_binomial(x: f64, n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (1.0 - x.powi((n - i) as i32)) / (1.0 - x.powi((i + 1) as i32)))
}

/// Commutation constants `(c_ba, c_xy)` with `ba = c_ba ab`, `xy = c_xy yx`
/// under which the noncommutative binomial theorem holds.
pub fn binomial_commutation(spec: &DeformationSpec) -> Result<(f64, f64)> {
    let (p, q) = (spec.p(), spec.q());
    match spec.kind() {
        Kind::JagannathanSrinivasa => Ok((p, q)),
        Kind::ChakrabartiJagannathan => Ok((1.0 / p, q)),
        Kind::Quesne => Ok((p, 1.0 / q)),
        Kind::HounkonnouNgompe => {
            let (mu, nu) = (spec.mu(), spec.nu());
            Ok((q.powf(nu) / p.powf(mu - 1.0), q.powf(nu - 1.0) / p.powf(mu)))
        }
        other => Err(RpqError::UnsupportedKind { kind: other.to_string(), what: "binomial commutation".into() }),
    }
}

/// Expands `(ax + by)^n` with `ba = c_ba ab`, `xy = c_xy yx` and returns the
/// coefficients of `a^(n-k) b^k y^k x^(n-k)` for `k = 0..=n`.
///
/// Monomials are kept normal-ordered as `a^i b^j y^k x^l`. Any monomial not
/// of the form `(n-k, k, k, n-k)` is returned as a residual magnitude.
pub fn noncommutative_expand(c_ba: f64, c_xy: f64, n: usize) -> (Vec<f64>, f64) {
    type Mono = (u32, u32, u32, u32);
    let generator: [(Mono, f64); 2] = [((1, 0, 0, 1), 1.0), ((0, 1, 1, 0), 1.0)];
    let mut poly: BTreeMap<Mono, f64> = BTreeMap::from([((0, 0, 0, 0), 1.0)]);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (&(i, j, k, l), &c) in &poly {
            for &((i2, j2, k2, l2), c2) in &generator {
                let w = c * c2 * c_ba.powi((j * i2) as i32) * c_xy.powi((l * k2) as i32);
                *next.entry((i + i2, j + j2, k + k2, l + l2)).or_insert(0.0) += w;
            }
        }
        poly = next;
    }
    let mut coeffs = vec![0.0; n + 1];
    let mut stray = 0.0f64;
    for ((i, j, k, l), c) in poly {
        if i == l && j == k && (i + j) as usize == n {
            coeffs[j as usize] = c;
        } else {
            stray = stray.max(c.abs());
        }
    }
    (coeffs, stray)
}

/// Evaluates every catalogued addition, subtraction, negation, recursion and
/// binomial identity for `0 <= m, k <= n <= n_max`.
///
/// Residuals are `|lhs - rhs| / max(1, |lhs|)`. Printed variants that do
/// not hold are reported as informational checks named `*_as_printed`.
pub fn number_identity_suite(spec: &DeformationSpec, n_max: usize, tol: f64) -> Result<Report> {
    let kind = spec.kind();
    if !kind.has_identity_suite() {
        return Err(RpqError::UnsupportedKind { kind: kind.to_string(), what: "number identity suites".into() });
    }
    let (p, q) = (spec.p(), spec.q());
    let num = |n: i64| rpq_number_signed(spec, n).expect("kind supports signed numbers");
    let mut rep = Report::new(format!("number identities ({kind})"));
    let nm = n_max as i64;

    // Each entry maps (n, m) to (lhs, rhs).
    type Ident<'a> = Box<dyn Fn(i64, i64) -> (f64, f64) + 'a>;
    let mut ids: Vec<(&str, Ident, bool)> = Vec::new();
    let pw = |x: f64, e: i64| x.powi(e as i32);
    match kind {
        Kind::JagannathanSrinivasa | Kind::ChakrabartiJagannathan => {
            let pp = if kind == Kind::JagannathanSrinivasa { p } else { 1.0 / p };
            ids.push(("add1", Box::new(move |n, m| (num(n + m), pw(q, m) * num(n) + pw(pp, n) * num(m))), false));
            ids.push(("add2", Box::new(move |n, m| (num(n + m), pw(pp, m) * num(n) + pw(q, n) * num(m))), false));
            ids.push(("neg", Box::new(move |_, m| (num(-m), -pw(q, -m) * pw(pp, -m) * num(m))), false));
            ids.push((
                "sub1",
                Box::new(move |n, m| (num(n - m), pw(q, -m) * num(n) - pw(q, -m) * pw(pp, n - m) * num(m))),
                false,
            ));
            ids.push((
                "sub2",
                Box::new(move |n, m| (num(n - m), pw(pp, -m) * num(n) - pw(q, n - m) * pw(pp, -m) * num(m))),
                false,
            ));
            ids.push(("recursion", Box::new(move |n, _| (num(n), num(2) * num(n - 1) - pp * q * num(n - 2))), false));
        }
        Kind::Quesne => {
            ids.push(("neg", Box::new(move |_, m| (num(-m), -pw(p, -m) * pw(q, m) * num(m))), false));
            ids.push(("add1", Box::new(move |n, m| (num(n + m), pw(q, -m) * num(n) + pw(p, n) * num(m))), false));
            ids.push(("add2", Box::new(move |n, m| (num(n + m), pw(p, m) * num(n) + pw(q, -n) * num(m))), false));
            ids.push((
                "sub1",
                Box::new(move |n, m| (num(n - m), pw(q, m) * num(n) - pw(p, n - m) * pw(q, m) * num(m))),
                false,
            ));
            ids.push((
                "sub2",
                Box::new(move |n, m| (num(n - m), pw(p, -m) * num(n) - pw(p, -m) * pw(q, m - n) * num(m))),
                false,
            ));
            ids.push((
                "sub2_as_printed",
                Box::new(move |n, m| (num(n - m), pw(p, -m) * num(n) + pw(p, -m) * pw(q, m - n) * num(m))),
                true,
            ));
            let r = (q - 1.0 / p) / (p - 1.0 / q);
            ids.push((
                "recursion",
                Box::new(move |n, _| (num(n), r * num(2) * num(n - 1) - p / q * num(n - 2))),
                false,
            ));
        }
        Kind::HounkonnouNgompe => {
            let (mu, nu, h) = (spec.mu(), spec.nu(), spec.h());
            let qp = move |a: f64, b: f64| q.powf(a) / p.powf(b);
            ids.push((
                "neg",
                Box::new(move |_, m| {
                    let m_ = m as f64;
                    (num(-m), -qp(-2.0 * nu * m_ + m_, -2.0 * mu * m_ + m_) * num(m))
                }),
                false,
            ));
            ids.push((
                "add1",
                Box::new(move |n, m| {
                    let (n_, m_) = (n as f64, m as f64);
                    (num(n + m), qp(nu * m_ - m_, mu * m_) * num(n) + qp(nu * n_, mu * n_ - n_) * num(m))
                }),
                false,
            ));
            ids.push((
                "add2",
                Box::new(move |n, m| {
                    let (n_, m_) = (n as f64, m as f64);
                    (num(n + m), qp(nu * m_, mu * m_ - m_) * num(n) + qp(nu * n_ - n_, mu * n_) * num(m))
                }),
                false,
            ));
            ids.push((
                "sub1",
                Box::new(move |n, m| {
                    let (n_, m_) = (n as f64, m as f64);
                    let d = n_ - 2.0 * m_;
                    (num(n - m), qp(-nu * m_ + m_, -mu * m_) * num(n) - qp(nu * d + m_, mu * d - n_ + m_) * num(m))
                }),
                false,
            ));
            ids.push((
                "sub2",
                Box::new(move |n, m| {
                    let (n_, m_) = (n as f64, m as f64);
                    let d = n_ - 2.0 * m_;
                    (num(n - m), qp(-nu * m_, -mu * m_ + m_) * num(n) - qp(nu * d - n_ + m_, mu * d + m_) * num(m))
                }),
                false,
            ));
            let r = (q - 1.0 / p) / (p - 1.0 / q) * qp(-nu, -mu) / h;
            ids.push((
                "recursion",
                Box::new(move |n, _| {
                    (num(n), r * num(2) * num(n - 1) - qp(2.0 * nu - 1.0, 2.0 * mu - 1.0) * num(n - 2))
                }),
                false,
            ));
            ids.push((
                "recursion_as_printed",
                Box::new(move |n, _| {
                    (num(n), r * num(2) * num(n - 1) - q.powf(2.0 * nu - 1.0) / p.powf(2.0 * nu - 1.0) * num(n - 2))
                }),
                true,
            ));
        }
        _ => unreachable!("guarded by has_identity_suite"),
    }

    for (name, f, printed) in &ids {
        let mut worst = 0.0f64;
        for n in 0..=nm {
            for m in 0..=nm {
                if name.starts_with("recursion") && (n < 2 || m > 0) {
                    continue;
                }
                let (lhs, rhs) = f(n, m);
                worst = worst.max(mixed_residual(lhs, rhs));
            }
        }
        if *printed {
            rep.info(*name, worst, tol);
        } else {
            rep.push(*name, worst, tol);
        }
    }

    binomial_identities(spec, n_max, tol, &mut rep)?;
    Ok(rep)
}

fn binomial_identities(spec: &DeformationSpec, n_max: usize, tol: f64, rep: &mut Report) -> Result<()> {
    let (p, q) = (spec.p(), spec.q());
    let kind = spec.kind();
    let (c_ba, c_xy) = binomial_commutation(spec)?;
    let top = n_max + 1;
    let rows: Vec<Vec<f64>> = (0..=top).map(|n| rpq_binomial_row(spec, n)).collect::<Result<_>>()?;
    let b = |n: usize, k: usize| rows[n][k];

    // Independent Gaussian-binomial oracle: [n,k] = s^{k(n-k)} [n,k]_x.
    let (scale, base) = match kind {
        Kind::JagannathanSrinivasa => (p, q / p),
        Kind::ChakrabartiJagannathan => (1.0 / p, q * p),
        Kind::Quesne => (p, 1.0 / (q * p)),
        Kind::HounkonnouNgompe => (q.powf(spec.nu()) / p.powf(spec.mu()) * p, 1.0 / (q * p)),
        _ => unreachable!(),
    };

    let (mut sym, mut gauss, mut pascal, mut pascal2, mut nc) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 0..=n_max {
        let (coeffs, stray) = noncommutative_expand(c_ba, c_xy, n);
        nc = nc.max(stray);
        for k in 0..=n {
            sym = sym.max(mixed_residual(b(n, k), b(n, n - k)));
            let g = scale.powi((k * (n - k)) as i32) * gaussian_binomial(base, n, k);
            gauss = gauss.max(mixed_residual(b(n, k), g));
            nc = nc.max(mixed_residual(b(n, k), coeffs[k]));
        }
        for k in 1..=n {
            let rhs = c_ba.powi(k as i32) * b(n, k) + c_xy.powi((n + 1 - k) as i32) * b(n, k - 1);
            pascal = pascal.max(mixed_residual(b(n + 1, k), rhs));
            if n >= 1 {
                let rhs2 = c_ba.powi(k as i32) * b(n, k) + c_ba.powi((n + 1 - k) as i32) * b(n, k - 1)
                    - (c_ba.powi(n as i32) - c_xy.powi(n as i32)) * b(n - 1, k - 1);
                pascal2 = pascal2.max(mixed_residual(b(n + 1, k), rhs2));
            }
        }
    }
    rep.push("binomial_symmetry", sym, tol);
    rep.push("binomial_gaussian", gauss, tol);
    rep.push("pascal", pascal, tol);
    rep.push("pascal2", pascal2, tol);
    rep.push("noncommutative_binomial", nc, tol);

    // Shifted-factorial expansion, stated for the (p,q)-type kinds.
    let pq_pair = match kind {
        Kind::JagannathanSrinivasa => Some((p, q)),
        Kind::ChakrabartiJagannathan => Some((1.0 / p, q)),
        Kind::Quesne => Some((p, 1.0 / q)),
        _ => None,
    };
    if let Some((pp, qq)) = pq_pair {
        let (a, bb) = (1.3, 0.4);
        let mut worst = 0.0f64;
        for n in 0..=n_max {
            let lhs = pq_shifted_factorial(a, bb, pp, qq, n);
            let rhs: f64 = (0..=n)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let e1 = ((n - k) * (n - k).saturating_sub(1) / 2) as i32;
                    let e2 = (k * k.saturating_sub(1) / 2) as i32;
                    b(n, k) * sign * pp.powi(e1) * qq.powi(e2) * a.powi((n - k) as i32) * bb.powi(k as i32)
                })
                .sum();
            worst = worst.max(mixed_residual(lhs, rhs));
        }
        rep.push("shifted_factorial_expansion", worst, tol);
    }
    Ok(())
}
