//! Deformation specifications and numeric precision settings.
//!
//! A [`DeformationSpec`] names a deformation kind together with its real
//! parameters. Validation is kind-specific and happens once, at
//! construction, so that evaluating numbers from a valid spec never
//! produces NaN.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{RpqError, Result};

/// Every deformation the library knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    HeineQ,
    JagannathanSrinivasa,
    ChakrabartiJagannathan,
    Quesne,
    HounkonnouNgompe,
    Kalnins,
    TammDancoff,
    ArikCoon,
    Feinsilver,
    BiedenharnMacfarlane,
    CalogeroVasiliev,
    Chung,
    Borzov,
    Brzezinski,
    Burban,
    Baloitcha,
    #[serde(rename = "rational_rRs")]
    RationalRRs,
}

impl Kind {
    pub const ALL: [Kind; 17] = [
        Kind::HeineQ,
        Kind::JagannathanSrinivasa,
        Kind::ChakrabartiJagannathan,
        Kind::Quesne,
        Kind::HounkonnouNgompe,
        Kind::Kalnins,
        Kind::TammDancoff,
        Kind::ArikCoon,
        Kind::Feinsilver,
        Kind::BiedenharnMacfarlane,
        Kind::CalogeroVasiliev,
        Kind::Chung,
        Kind::Borzov,
        Kind::Brzezinski,
        Kind::Burban,
        Kind::Baloitcha,
        Kind::RationalRRs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::HeineQ => "heine_q",
            Kind::JagannathanSrinivasa => "jagannathan_srinivasa",
            Kind::ChakrabartiJagannathan => "chakrabarti_jagannathan",
            Kind::Quesne => "quesne",
            Kind::HounkonnouNgompe => "hounkonnou_ngompe",
            Kind::Kalnins => "kalnins",
            Kind::TammDancoff => "tamm_dancoff",
            Kind::ArikCoon => "arik_coon",
            Kind::Feinsilver => "feinsilver",
            Kind::BiedenharnMacfarlane => "biedenharn_macfarlane",
            Kind::CalogeroVasiliev => "calogero_vasiliev",
            Kind::Chung => "chung",
            Kind::Borzov => "borzov",
            Kind::Brzezinski => "brzezinski",
            Kind::Burban => "burban",
            Kind::Baloitcha => "baloitcha",
            Kind::RationalRRs => "rational_rRs",
        }
    }

    /// Kinds whose arithmetic and binomial identities are catalogued.
    pub fn has_identity_suite(self) -> bool {
        matches!(
            self,
            Kind::JagannathanSrinivasa | Kind::ChakrabartiJagannathan | Kind::Quesne | Kind::HounkonnouNgompe
        )
    }

    /// Kinds whose numbers depend on the parity of `n` (Klein-operator algebras).
    pub fn is_parity_dependent(self) -> bool {
        matches!(self, Kind::CalogeroVasiliev | Kind::Brzezinski | Kind::Burban | Kind::Baloitcha)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Choice of the `h(p,q)` prefactor for the Hounkonnou-Ngompe kind.
#[derive(Debug, Clone, PartialEq)]
pub enum HChoice {
    ConstantOne,
    /// Rows `[p, q, h]`; the row matching the spec's `(p, q)` is used.
    UserTable(Vec<[f64; 3]>),
}

/// Coefficient lists of the rational `rRs` deformation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// Wire format, kept separate so validation runs on every deserialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: Kind,
    p: f64,
    q: f64,
    #[serde(default)]
    extras: BTreeMap<String, Value>,
}

const REAL_EXTRAS: [&str; 10] = ["l", "lambda", "mu", "nu", "alpha", "beta", "gamma", "tau", "alpha1", "alpha2"];
const LIST_EXTRAS: [&str; 4] = ["a", "b", "c", "d"];

/// A validated deformation: kind, `p`, `q` and named real extras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct DeformationSpec {
    kind: Kind,
    p: f64,
    q: f64,
    reals: BTreeMap<String, f64>,
    h: Option<HChoice>,
    h_value: f64,
    rational: Option<RationalCoeffs>,
    raw_extras: BTreeMap<String, Value>,
}

impl TryFrom<RawSpec> for DeformationSpec {
    type Error = RpqError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let mut reals = BTreeMap::new();
        let mut h = None;
        let mut table = None;
        let mut lists: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for (key, value) in &raw.extras {
            if let Some(name) = REAL_EXTRAS.iter().find(|k| **k == key.as_str()) {
                let x = value
                    .as_f64()
                    .ok_or_else(|| RpqError::Config(format!("extras.{name} must be a number")))?;
                reals.insert((*name).to_string(), x);
            } else if let Some(name) = LIST_EXTRAS.iter().find(|k| **k == key.as_str()) {
                let xs = value
                    .as_array()
                    .and_then(|arr| arr.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| RpqError::Config(format!("extras.{name} must be an array of numbers")))?;
                lists.insert(name, xs);
            } else if key == "h" {
                h = Some(
                    value
                        .as_str()
                        .ok_or_else(|| RpqError::Config("extras.h must be a string".into()))?
                        .to_string(),
                );
            } else if key == "h_table" {
                let rows = value
                    .as_array()
                    .and_then(|rows| {
                        rows.iter()
                            .map(|row| {
                                let r = row.as_array()?;
                                if r.len() != 3 {
                                    return None;
                                }
                                Some([r[0].as_f64()?, r[1].as_f64()?, r[2].as_f64()?])
                            })
                            .collect::<Option<Vec<_>>>()
                    })
                    .ok_or_else(|| RpqError::Config("extras.h_table must be a list of [p, q, h] rows".into()))?;
                table = Some(rows);
            } else {
                return Err(RpqError::Config(format!("unknown extras field `{key}`")));
            }
        }

        let h_choice = match (raw.kind, h.as_deref(), table) {
            (Kind::HounkonnouNgompe, None | Some("constant_one"), None) => Some(HChoice::ConstantOne),
            (Kind::HounkonnouNgompe, Some("user_table"), Some(rows)) => Some(HChoice::UserTable(rows)),
            (Kind::HounkonnouNgompe, Some("user_table"), None) => {
                return Err(RpqError::Config("extras.h = user_table requires extras.h_table".into()))
            }
            (Kind::HounkonnouNgompe, Some(other), _) if other != "constant_one" && other != "user_table" => {
                return Err(RpqError::Config(format!(
                    "extras.h must be `constant_one` or `user_table`, got `{other}`"
                )))
            }
            (Kind::HounkonnouNgompe, _, Some(_)) => {
                return Err(RpqError::Config("extras.h_table given without extras.h = user_table".into()))
            }
            (_, None, None) => None,
            (kind, _, _) => {
                return Err(RpqError::Config(format!("extras.h is only meaningful for hounkonnou_ngompe, not {kind}")))
            }
        };

        let rational = if raw.kind == Kind::RationalRRs {
            Some(RationalCoeffs {
                a: lists.remove("a").unwrap_or_default(),
                b: lists.remove("b").unwrap_or_default(),
                c: lists.remove("c").unwrap_or_default(),
                d: lists.remove("d").unwrap_or_default(),
            })
        } else if let Some(name) = lists.keys().next() {
            return Err(RpqError::Config(format!("extras.{name} is only meaningful for rational_rRs")));
        } else {
            None
        };

        let mut spec = DeformationSpec {
            kind: raw.kind,
            p: raw.p,
            q: raw.q,
            reals,
            h: h_choice,
            h_value: 1.0,
            rational,
            raw_extras: raw.extras,
        };
        spec.h_value = spec.resolve_h()?;
        spec.validate()?;
        Ok(spec)
    }
}

impl From<DeformationSpec> for RawSpec {
    fn from(spec: DeformationSpec) -> Self {
        RawSpec { kind: spec.kind, p: spec.p, q: spec.q, extras: spec.raw_extras }
    }
}

impl DeformationSpec {
    /// Builds a spec without extras.
    pub fn new(kind: Kind, p: f64, q: f64) -> Result<Self> {
        Self::with_extras(kind, p, q, &[])
    }

    /// Builds a spec from named real extras such as `("l", 1.0)`.
    pub fn with_extras(kind: Kind, p: f64, q: f64, extras: &[(&str, f64)]) -> Result<Self> {
        let extras = extras.iter().map(|(k, v)| ((*k).to_string(), Value::from(*v))).collect();
        RawSpec { kind, p, q, extras }.try_into()
    }

    /// Builds a rational `rRs` spec from its coefficient lists.
    pub fn rational(p: f64, q: f64, coeffs: RationalCoeffs) -> Result<Self> {
        let mut extras = BTreeMap::new();
        for (name, xs) in [("a", &coeffs.a), ("b", &coeffs.b), ("c", &coeffs.c), ("d", &coeffs.d)] {
            extras.insert(name.to_string(), Value::from(xs.clone()));
        }
        RawSpec { kind: Kind::RationalRRs, p, q, extras }.try_into()
    }

    /// Builds a Hounkonnou-Ngompe spec with a tabulated `h`.
    pub fn hn_with_table(p: f64, q: f64, mu: f64, nu: f64, rows: &[[f64; 3]]) -> Result<Self> {
        let mut extras = BTreeMap::new();
        extras.insert("mu".into(), Value::from(mu));
        extras.insert("nu".into(), Value::from(nu));
        extras.insert("h".into(), Value::from("user_table"));
        extras.insert("h_table".into(), serde_json::to_value(rows).expect("rows serialize"));
        RawSpec { kind: Kind::HounkonnouNgompe, p, q, extras }.try_into()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RpqError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RpqError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same kind and extras with different `(p, q)`.
    pub fn with_pq(&self, p: f64, q: f64) -> Result<Self> {
        let raw = RawSpec { kind: self.kind, p, q, extras: self.raw_extras.clone() };
        raw.try_into()
    }

    /// Named real extra, falling back to `default` when absent.
    pub fn extra(&self, name: &str, default: f64) -> f64 {
        self.reals.get(name).copied().unwrap_or(default)
    }

    fn required(&self, name: &str) -> Result<f64> {
        self.reals
            .get(name)
            .copied()
            .ok_or_else(|| RpqError::Config(format!("{} requires extras.{name}", self.kind)))
    }

    pub fn l(&self) -> f64 {
        self.extra("l", 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.extra("lambda", 0.0)
    }

    pub fn mu(&self) -> f64 {
        self.extra("mu", 1.0)
    }

    pub fn nu(&self) -> f64 {
        self.extra("nu", 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.extra("alpha", 1.0)
    }

    pub fn beta(&self) -> f64 {
        self.extra("beta", 0.0)
    }

    /// `gamma` defaults to the F exponent 1 for Borzov and Burban, and to
    /// the parity weight 0 for Balöitcha.
    pub fn gamma(&self) -> f64 {
        let default = if self.kind == Kind::Baloitcha { 0.0 } else { 1.0 };
        self.extra("gamma", default)
    }

    pub fn tau(&self) -> f64 {
        self.extra("tau", 0.0)
    }

    /// Resolved value of `h(p, q)`; 1 for every kind except a tabulated HN.
    pub fn h(&self) -> f64 {
        self.h_value
    }

    pub fn h_choice(&self) -> Option<&HChoice> {
        self.h.as_ref()
    }

    pub fn rational_coeffs(&self) -> Option<&RationalCoeffs> {
        self.rational.as_ref()
    }

    fn resolve_h(&self) -> Result<f64> {
        match &self.h {
            None | Some(HChoice::ConstantOne) => Ok(1.0),
            Some(HChoice::UserTable(rows)) => rows
                .iter()
                .find(|r| (r[0] - self.p).abs() <= 1e-12 && (r[1] - self.q).abs() <= 1e-12)
                .map(|r| r[2])
                .ok_or_else(|| {
                    RpqError::Config(format!("extras.h_table has no row for p = {}, q = {}", self.p, self.q))
                }),
        }
    }

    fn validate(&self) -> Result<()> {
        let (p, q) = (self.p, self.q);
        if !(p.is_finite() && p > 0.0) {
            return Err(RpqError::Domain(format!("p must be a positive real, got {p}")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(RpqError::Domain(format!("q must be a positive real, got {q}")));
        }
        for (name, x) in &self.reals {
            if !x.is_finite() {
                return Err(RpqError::Config(format!("extras.{name} must be finite")));
            }
        }
        let singular = |what: &str| Err(RpqError::Domain(format!("{} is singular at {what}", self.kind)));
        match self.kind {
            Kind::JagannathanSrinivasa | Kind::RationalRRs if p == q => return singular("p = q"),
            Kind::ChakrabartiJagannathan | Kind::Quesne if (p * q - 1.0).abs() < 1e-15 => return singular("pq = 1"),
            Kind::HeineQ | Kind::ArikCoon | Kind::Feinsilver | Kind::BiedenharnMacfarlane | Kind::Kalnins
            | Kind::Brzezinski
                if q == 1.0 =>
            {
                return singular("q = 1")
            }
            _ => {}
        }
        match self.kind {
            Kind::Kalnins if self.l() == 0.0 => {
                return Err(RpqError::Domain("kalnins requires l != 0".into()));
            }
            Kind::HounkonnouNgompe => {
                self.required("mu")?;
                self.required("nu")?;
                if p <= 1.0 {
                    return Err(RpqError::Domain(format!("hounkonnou_ngompe requires p > 1, got {p}")));
                }
                if !(p * q > 0.0 && p * q < 1.0) {
                    return Err(RpqError::Domain(format!("hounkonnou_ngompe requires 0 < pq < 1, got {}", p * q)));
                }
                if !(self.h_value.is_finite() && self.h_value > 0.0) {
                    return Err(RpqError::Domain(format!("h(p, q) must be positive, got {}", self.h_value)));
                }
            }
            Kind::CalogeroVasiliev if self.nu() <= -0.5 => {
                return Err(RpqError::Domain(format!("calogero_vasiliev requires nu > -1/2, got {}", self.nu())));
            }
            Kind::Chung if self.alpha() != 1.0 && q == 1.0 => return singular("q = 1 with alpha != 1"),
            Kind::Borzov | Kind::Burban if self.alpha() != self.gamma() && q == 1.0 => {
                return singular("q = 1 with alpha != gamma")
            }
            Kind::Baloitcha
                if p.powf(self.nu()) != q.powf(self.alpha())
                    && (p.powf(self.nu()) - q.powf(self.alpha())).abs() < 1e-15 =>
            {
                return singular("p^nu = q^alpha up to rounding")
            }
            Kind::RationalRRs => {
                let c = self.rational.as_ref().expect("rational coefficients present");
                if c.a.len() != c.b.len() || c.c.len() != c.d.len() {
                    return Err(RpqError::Config("rational_rRs needs len(a) = len(b) and len(c) = len(d)".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Tolerances and the log-space switch used by factorial evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub log_space: bool,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { log_space: false, abs_tol: 1e-12, rel_tol: 1e-9 }
    }
}

impl PrecisionPolicy {
    pub fn log_space() -> Self {
        Self { log_space: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol > 0.0 && self.rel_tol > 0.0 {
            Ok(())
        } else {
            Err(RpqError::Config("abs_tol and rel_tol must be positive".into()))
        }
    }
}
