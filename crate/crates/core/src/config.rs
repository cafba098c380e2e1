//! Triple configuration files (TOML) and the triple they describe.
//!
//! ```toml
//! name = "example"          # optional, echoed in reports
//! tol = 1e-9                # optional
//!
//! [algebra]
//! kind = "A_F"              # A_F | B_F | A_ev
//!
//! [grading]
//! kind = "nonstandard"      # standard | nonstandard | none
//!
//! [dirac]                   # absent or empty: zero
//! kind = "CC"               # CC | CC_plus_Gamma | zero | custom
//! ups_nu = [1.0, 0.5]       # complex: [re, im]; omitted coefficients are 0
//! Delta = 0.8               # real
//! # custom: entries = [[row, col, re, im], ...], 1-based, Hermitian
//! ```

use std::ops::Range;

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::{json, Value};
use toml::Spanned;

use crate::catalog::{
    build_algebra_aev, build_algebra_af, build_algebra_bf, build_dirac_parts, build_grading, build_jf, DiracKind,
    DiracParams, GradingKind,
};
use crate::error::{Error, Result};
use crate::linalg::{c, Operator, C64, DEFAULT_TOL, DIM};
use crate::triple::FiniteTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraChoice {
    Af,
    Bf,
    Aev,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingChoice {
    Standard,
    Nonstandard,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracChoice {
    Cc,
    CcPlusGamma,
    Zero,
    Custom,
}

impl AlgebraChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Af => "A_F",
            Self::Bf => "B_F",
            Self::Aev => "A_ev",
        }
    }
}

impl GradingChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::Nonstandard => "nonstandard",
            Self::None => "none",
        }
    }

    pub fn kind(self) -> Option<GradingKind> {
        match self {
            Self::Standard => Some(GradingKind::Standard),
            Self::Nonstandard => Some(GradingKind::Nonstandard),
            Self::None => None,
        }
    }
}

impl DiracChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Cc => "CC",
            Self::CcPlusGamma => "CC_plus_Gamma",
            Self::Zero => "zero",
            Self::Custom => "custom",
        }
    }
}

/// One entry `D[row, col] = re + i im` of a custom Dirac operator (1-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CustomEntry {
    pub row: usize,
    pub col: usize,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripleConfig {
    pub name: Option<String>,
    pub algebra: AlgebraChoice,
    pub grading: GradingChoice,
    pub dirac: DiracChoice,
    pub params: DiracParams,
    pub custom: Vec<CustomEntry>,
    pub tol: f64,
}

/// `[row, col, re, im]`, 1-based.
type RawEntry = (usize, usize, f64, f64);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    tol: Option<Spanned<f64>>,
    algebra: RawSection,
    grading: RawSection,
    dirac: Option<RawDirac>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    kind: Spanned<String>,
}

type Cplx = Option<Spanned<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDirac {
    kind: Option<Spanned<String>>,
    ups_nu: Cplx,
    ups_e: Cplx,
    ups_u: Cplx,
    ups_d: Cplx,
    #[serde(rename = "ups_R")]
    ups_r: Cplx,
    #[serde(rename = "Omega")]
    omega: Cplx,
    #[serde(rename = "Delta")]
    delta: Option<Spanned<f64>>,
    #[serde(rename = "Gamma")]
    gamma: Option<Spanned<f64>>,
    entries: Option<Spanned<Vec<Spanned<RawEntry>>>>,
}

impl RawDirac {
    fn has_coefficients(&self) -> bool {
        [&self.ups_nu, &self.ups_e, &self.ups_u, &self.ups_d, &self.ups_r, &self.omega]
            .iter()
            .any(|z| z.is_some())
            || self.delta.is_some()
            || self.gamma.is_some()
    }
}

/// 1-based line and column of a byte offset.
pub(crate) fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn config_error(text: &str, span: Option<Range<usize>>, message: impl Into<String>) -> Error {
    let (line, column) = span.map_or((1, 1), |s| position(text, s.start));
    Error::Config { line, column, message: message.into() }
}

fn complex(text: &str, z: &Cplx) -> Result<C64> {
    match z {
        None => Ok(c(0.0, 0.0)),
        Some(s) => {
            let [re, im] = *s.get_ref();
            if re.is_finite() && im.is_finite() {
                Ok(c(re, im))
            } else {
                Err(config_error(text, Some(s.span()), "non-finite complex value"))
            }
        }
    }
}

fn real(text: &str, x: &Option<Spanned<f64>>) -> Result<f64> {
    match x {
        None => Ok(0.0),
        Some(s) if s.get_ref().is_finite() => Ok(*s.get_ref()),
        Some(s) => Err(config_error(text, Some(s.span()), "non-finite real value")),
    }
}

fn choice<T: Copy>(text: &str, kind: &Spanned<String>, what: &str, options: &[(&str, T)]) -> Result<T> {
    options
        .iter()
        .find(|(name, _)| *name == kind.get_ref())
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            config_error(
                text,
                Some(kind.span()),
                format!("unknown {what} `{}` (expected one of {})", kind.get_ref(), names.join(", ")),
            )
        })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<TripleConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| config_error(text, e.span(), e.message()))?;

    let algebra = choice(
        text,
        &raw.algebra.kind,
        "algebra",
        &[("A_F", AlgebraChoice::Af), ("B_F", AlgebraChoice::Bf), ("A_ev", AlgebraChoice::Aev)],
    )?;
    let grading = choice(
        text,
        &raw.grading.kind,
        "grading",
        &[
            ("standard", GradingChoice::Standard),
            ("nonstandard", GradingChoice::Nonstandard),
            ("none", GradingChoice::None),
        ],
    )?;
    if algebra == AlgebraChoice::Aev && grading != GradingChoice::Standard {
        return Err(config_error(text, Some(raw.grading.kind.span()), "A_ev requires the standard grading"));
    }

    let tol = match &raw.tol {
        None => DEFAULT_TOL,
        Some(t) if t.get_ref().is_finite() && *t.get_ref() > 0.0 => *t.get_ref(),
        Some(t) => return Err(config_error(text, Some(t.span()), "tol must be a positive number")),
    };

    let (dirac, params, custom) = match &raw.dirac {
        None => (DiracChoice::Zero, DiracParams::default(), Vec::new()),
        Some(d) => parse_dirac(text, d)?,
    };
    Ok(TripleConfig { name: raw.name, algebra, grading, dirac, params, custom, tol })
}

fn parse_dirac(text: &str, d: &RawDirac) -> Result<(DiracChoice, DiracParams, Vec<CustomEntry>)> {
    let kind = match &d.kind {
        Some(k) => choice(
            text,
            k,
            "dirac kind",
            &[
                ("CC", DiracChoice::Cc),
                ("CC_plus_Gamma", DiracChoice::CcPlusGamma),
                ("zero", DiracChoice::Zero),
                ("custom", DiracChoice::Custom),
            ],
        )?,
        None if !d.has_coefficients() && d.entries.is_none() => DiracChoice::Zero,
        None => return Err(config_error(text, None, "[dirac] has coefficients but no `kind`")),
    };
    if let Some(g) = &d.gamma {
        if kind != DiracChoice::CcPlusGamma {
            return Err(config_error(text, Some(g.span()), "Gamma requires CC_plus_Gamma"));
        }
    }
    if matches!(kind, DiracChoice::Zero | DiracChoice::Custom) && d.has_coefficients() {
        let k = d.kind.as_ref().map(|k| k.span());
        return Err(config_error(text, k, format!("coefficients are not used by dirac kind `{}`", kind.as_str())));
    }
    if kind != DiracChoice::Custom {
        if let Some(e) = &d.entries {
            return Err(config_error(text, Some(e.span()), "entries requires dirac kind `custom`"));
        }
    }
    let params = DiracParams {
        ups_nu: complex(text, &d.ups_nu)?,
        ups_e: complex(text, &d.ups_e)?,
        ups_u: complex(text, &d.ups_u)?,
        ups_d: complex(text, &d.ups_d)?,
        ups_r: complex(text, &d.ups_r)?,
        omega: complex(text, &d.omega)?,
        delta: real(text, &d.delta)?,
        gamma: real(text, &d.gamma)?,
    };
    let mut custom = Vec::new();
    if kind == DiracChoice::Custom {
        let entries = d
            .entries
            .as_ref()
            .ok_or_else(|| config_error(text, d.kind.as_ref().map(|k| k.span()), "custom dirac needs `entries`"))?;
        for e in entries.get_ref() {
            let (row, col, re, im) = *e.get_ref();
            if !(1..=DIM).contains(&row) || !(1..=DIM).contains(&col) {
                return Err(config_error(text, Some(e.span()), format!("index out of range 1..={DIM}")));
            }
            if !re.is_finite() || !im.is_finite() {
                return Err(config_error(text, Some(e.span()), "non-finite entry"));
            }
            custom.push(CustomEntry { row, col, value: c(re, im) });
        }
        let m = custom_matrix(&custom);
        let defect = (&m - m.adjoint()).norm();
        if defect > 1e-12 * m.norm().max(1.0) {
            return Err(config_error(text, Some(entries.span()), format!("custom dirac is not Hermitian (|D - D*| = {defect:e})")));
        }
    }
    Ok((kind, params, custom))
}

/// Later entries for the same slot add up.
fn custom_matrix(entries: &[CustomEntry]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(DIM, DIM);
    for e in entries {
        m[(e.row - 1, e.col - 1)] += e.value;
    }
    m
}

impl TripleConfig {
    /// `A_F`, the given grading, `CC` with `params`.
    pub fn standard_model(grading: GradingChoice, dirac: DiracChoice, params: DiracParams) -> Self {
        Self { name: None, algebra: AlgebraChoice::Af, grading, dirac, params, custom: Vec::new(), tol: DEFAULT_TOL }
    }

    pub fn dirac_kind(&self) -> Result<DiracKind> {
        Ok(match self.dirac {
            DiracChoice::Cc => DiracKind::Cc,
            DiracChoice::CcPlusGamma => DiracKind::CcPlusGamma,
            DiracChoice::Zero => DiracKind::Zero,
            DiracChoice::Custom => DiracKind::Custom(Operator::new(custom_matrix(&self.custom))?),
        })
    }

    /// Config echo for reports.
    pub fn to_json(&self) -> Value {
        let z = |v: C64| json!([v.re, v.im]);
        let p = &self.params;
        let dirac = match self.dirac {
            DiracChoice::Cc | DiracChoice::CcPlusGamma => {
                let mut d = json!({
                    "kind": self.dirac.as_str(),
                    "ups_nu": z(p.ups_nu),
                    "ups_e": z(p.ups_e),
                    "ups_u": z(p.ups_u),
                    "ups_d": z(p.ups_d),
                    "ups_R": z(p.ups_r),
                    "Omega": z(p.omega),
                    "Delta": p.delta,
                });
                if self.dirac == DiracChoice::CcPlusGamma {
                    d["Gamma"] = json!(p.gamma);
                }
                d
            }
            DiracChoice::Zero => json!({ "kind": "zero" }),
            DiracChoice::Custom => json!({
                "kind": "custom",
                "entries": self.custom.iter().map(|e| json!([e.row, e.col, e.value.re, e.value.im])).collect::<Vec<_>>(),
            }),
        };
        json!({
            "name": self.name,
            "algebra": self.algebra.as_str(),
            "grading": self.grading.as_str(),
            "dirac": dirac,
            "tol": self.tol,
        })
    }
}

/// The algebra generators a config selects.
pub fn algebra_generators(choice: AlgebraChoice) -> Vec<Operator> {
    match choice {
        AlgebraChoice::Af => build_algebra_af(),
        AlgebraChoice::Bf => build_algebra_bf(),
        AlgebraChoice::Aev => build_algebra_aev(),
    }
}

/// The triple described by `cfg`, with `D0` recorded for the `CC` family.
pub fn build_triple(cfg: &TripleConfig) -> Result<FiniteTriple> {
    let j = build_jf();
    let (d, d0) = build_dirac_parts(&cfg.dirac_kind()?, &cfg.params, &j);
    let gamma = cfg.grading.kind().map(build_grading);
    let t = FiniteTriple::new(algebra_generators(cfg.algebra), d, j, gamma, cfg.tol)?;
    match d0 {
        Some(d0) => t.with_d0(d0),
        None => Ok(t),
    }
}
