//! Runs every check on a configured triple and renders the result.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::catalog::{
    hypercharge_table, lepton_projection, one_form_generators, phase_exponents, phi, pi_sm, rho_degenerate,
    x_color_mixing, x_majorana, z6_element, GroupElement,
};
use crate::config::{build_triple, position, AlgebraChoice, DiracChoice, TripleConfig};
use crate::error::{Error, Result};
use crate::linalg::{c, Operator, C64};
use crate::morita::{
    bimodule_generated, clifford, in_algebra_plus_conjugate, irreducible, obstruction_check, one_forms, property_m,
    Irreducibility, ObstructionMode,
};
use crate::subspace::{Field, OperatorSubspace};
use crate::triple::{grading_compatible, FiniteTriple};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub status: Status,
    pub residuals: BTreeMap<&'static str, f64>,
    pub dimensions: BTreeMap<&'static str, usize>,
    pub witness: Option<String>,
    pub detail: Option<String>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub config: TripleConfig,
    pub tolerance: f64,
    pub version: &'static str,
    pub checks: Vec<CheckRecord>,
}

/// The run plan, in report order.
pub const CHECKS: &[&str] = &[
    "axioms.dirac_hermitian",
    "axioms.zeroth_order",
    "axioms.first_order",
    "axioms.grading_commutes_with_algebra",
    "axioms.grading_anticommutes_with_dirac",
    "axioms.sign_table",
    "dirac.theorem_hypotheses",
    "decomposition.dirac_split",
    "gradings.d0_compatible",
    "one_forms.bimodule_generators",
    "clifford.gamma_in_odd",
    "property_m.odd",
    "property_m.with_grading",
    "orientability.obstruction",
    "orientability.weak",
    "irreducibility.full",
    "irreducibility.algebra_and_j",
    "gauge.z6_kernel",
    "gauge.hypercharges",
    "gauge.rho_representation",
];

#[derive(Default)]
struct Outcome {
    status: Option<Status>,
    residuals: BTreeMap<&'static str, f64>,
    dimensions: BTreeMap<&'static str, usize>,
    witness: Option<String>,
    detail: Option<String>,
}

impl Outcome {
    fn new(ok: bool) -> Self {
        Self { status: Some(Status::from_bool(ok)), ..Self::default() }
    }

    fn skipped(why: impl Into<String>) -> Self {
        Self { status: Some(Status::Skipped), detail: Some(why.into()), ..Self::default() }
    }

    fn res(mut self, k: &'static str, v: f64) -> Self {
        self.residuals.insert(k, v);
        self
    }

    fn dim(mut self, k: &'static str, v: usize) -> Self {
        self.dimensions.insert(k, v);
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

// `Instant::now` panics on wasm32-unknown-unknown.
#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    (f(), 0.0)
}

fn record(name: &'static str, f: impl FnOnce() -> Result<Outcome>) -> CheckRecord {
    let (out, wall_ms) = timed(f);
    let out = out.unwrap_or_else(|e| Outcome { status: Some(Status::Fail), detail: Some(e.to_string()), ..Outcome::default() });
    let mut residuals = out.residuals;
    // residuals are finite by contract; a non-finite one fails the check
    let finite = residuals.values().all(|v| v.is_finite());
    residuals.values_mut().filter(|v| !v.is_finite()).for_each(|v| *v = f64::MAX);
    let status = match out.status.unwrap_or(Status::Fail) {
        Status::Pass if !finite => Status::Fail,
        s => s,
    };
    CheckRecord { name, status, residuals, dimensions: out.dimensions, witness: out.witness, detail: out.detail, wall_ms }
}

fn complex_span(t: &FiniteTriple, ops: &[Operator]) -> Result<OperatorSubspace> {
    OperatorSubspace::span_of(t.dim(), ops, Field::Complex, t.tol())
}

/// `(A, J)` alone: no Dirac operator, no grading.
fn algebra_and_j(t: &FiniteTriple) -> Result<FiniteTriple> {
    FiniteTriple::with_opposite(
        t.algebra().to_vec(),
        t.opposite().to_vec(),
        Operator::zeros(t.dim()),
        t.j().clone(),
        None,
        t.tol(),
    )
}

fn irreducibility_outcome(t: &FiniteTriple, r: Irreducibility) -> Result<Outcome> {
    let mut out = Outcome::new(r.irreducible)
        .dim("real_commutant", r.real_dim)
        .dim("hermitian_part", r.hermitian_dim);
    if let Some(p) = r.witness {
        let lep = lepton_projection();
        let lepton_span = complex_span(t, &[lep.clone(), &Operator::identity(t.dim()) - &lep])?;
        let dist = lepton_span.distance(&p);
        let rank = p.trace().re.round() as usize;
        out = out
            .res("witness_idempotence", (&(&p * &p) - &p).hs_norm())
            .res("witness_lepton_distance", dist)
            .dim("witness_rank", rank)
            .witness(format!("rank-{rank} projection commuting with the data; HS distance {dist:.3e} to span(p_lep, 1 - p_lep)"));
    }
    Ok(out)
}

/// Unitary from the QR factor of a random matrix.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let qr = m.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the factor is well defined
    let d = DMatrix::from_diagonal(&r.diagonal().map(|z| if z.norm() > 0.0 { z.conj() / z.norm() } else { c(1.0, 0.0) }));
    q * d
}

fn random_phase(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_group_element(rng: &mut ChaCha8Rng) -> Result<GroupElement> {
    let lambda = random_phase(rng);
    GroupElement::new(lambda, random_unitary(rng, 2), random_unitary(rng, 3))
}

/// Pushes a special-unitary version of `g`: determinants divided out.
fn special(g: &GroupElement) -> Result<GroupElement> {
    let fix = |u: &DMatrix<C64>| {
        let n = u.nrows() as f64;
        let d = u.determinant();
        u * C64::from_polar(1.0, -d.arg() / n)
    };
    GroupElement::new(g.lambda(), fix(g.q()), fix(g.m()))
}

fn gauge_z6(t: &FiniteTriple) -> Result<Outcome> {
    let one = Operator::identity(t.dim());
    let mut worst = 0.0f64;
    for k in 0..6 {
        worst = worst.max((&pi_sm(&z6_element(k), t.j())? - &one).hs_norm());
        worst = worst.max((&rho_degenerate(&phi(&z6_element(k)), t.j()) - &one).hs_norm());
    }
    Ok(Outcome::new(worst <= 1e-12).res("max_deviation", worst).dim("elements", 6))
}

fn gauge_hypercharges(t: &FiniteTriple) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e1e_c70e);
    let expected = hypercharge_table();
    let mut ok = true;
    for _ in 0..10 {
        let lambda = random_phase(&mut rng);
        let u = pi_sm(&GroupElement::phase(lambda)?, t.j())?;
        ok &= phase_exponents(&u, lambda, 1e-9).as_deref() == Some(&expected[..]);
    }
    Ok(Outcome::new(ok).dim("phases", 10).dim("slots", expected.len()))
}

fn gauge_rho(t: &FiniteTriple) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e1e_c70f);
    let j = t.j();
    let one = Operator::identity(t.dim());
    let (mut mult, mut unit, mut pull): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let u = random_group_element(&mut rng)?;
        let v = random_group_element(&mut rng)?;
        let ru = rho_degenerate(&u, j);
        mult = mult.max((&rho_degenerate(&u.mul(&v), j) - &(&ru * &rho_degenerate(&v, j))).hs_norm());
        unit = unit.max((&(&ru.adjoint() * &ru) - &one).hs_norm());
        let g = special(&u)?;
        pull = pull.max((&rho_degenerate(&phi(&g), j) - &pi_sm(&g, j)?).hs_norm());
    }
    let ok = mult.max(unit).max(pull) <= 1e-12;
    Ok(Outcome::new(ok)
        .res("multiplicativity", mult)
        .res("unitarity", unit)
        .res("phi_pullback", pull)
        .dim("pairs", 20))
}

/// Runs the whole plan. Errors become failed records; the report is always complete.
pub fn run_all(cfg: &TripleConfig) -> VerificationReport {
    run_plan(cfg, |_| true)
}

/// Runs the checks of the plan accepted by `select`, in plan order.
pub fn run_plan(cfg: &TripleConfig, select: impl Fn(&str) -> bool) -> VerificationReport {
    let built = build_triple(cfg);
    let tri = || -> Result<&FiniteTriple> { built.as_ref().map_err(Error::clone) };
    let grading = || -> Result<Option<&Operator>> { Ok(tri()?.gamma()) };
    let (zeroth, first) = (OnceCell::new(), OnceCell::new());
    // order violations, each computed once
    let zeroth_violation = || -> Result<f64> {
        let t = tri()?;
        Ok(*zeroth.get_or_init(|| t.zeroth_order_violation()))
    };
    let first_violation = || -> Result<f64> {
        let t = tri()?;
        Ok(*first.get_or_init(|| t.first_order_violation()))
    };
    let order_ok = || -> Result<bool> {
        let (z, f) = (zeroth_violation()?, first_violation()?);
        let tol = tri()?.tol();
        Ok(z <= tol && f <= tol)
    };
    let cc_family = matches!(cfg.dirac, DiracChoice::Cc | DiracChoice::CcPlusGamma);
    let with_gamma = cfg.dirac == DiracChoice::CcPlusGamma;

    let mut checks = Vec::with_capacity(CHECKS.len());
    let mut planned = CHECKS.iter();
    let mut push = |name: &'static str, f: &dyn Fn() -> Result<Outcome>| {
        debug_assert_eq!(planned.next(), Some(&name));
        if select(name) {
            checks.push(record(name, f));
        }
    };

    push("axioms.dirac_hermitian", &|| {
        let t = tri()?;
        let d = t.dirac();
        let r = (d - &d.adjoint()).hs_norm() / d.hs_norm().max(1.0);
        Ok(Outcome::new(r <= t.tol()).res("relative_defect", r))
    });
    push("axioms.zeroth_order", &|| {
        let v = zeroth_violation()?;
        Ok(Outcome::new(v <= tri()?.tol()).res("violation", v))
    });
    push("axioms.first_order", &|| {
        let v = first_violation()?;
        Ok(Outcome::new(v <= tri()?.tol()).res("violation", v))
    });
    push("axioms.grading_commutes_with_algebra", &|| {
        let t = tri()?;
        if !t.is_even() {
            return Ok(Outcome::skipped("no grading"));
        }
        let v = t.grading_even_violation();
        Ok(Outcome::new(v <= t.tol()).res("violation", v))
    });
    push("axioms.grading_anticommutes_with_dirac", &|| {
        let t = tri()?;
        if !t.is_even() {
            return Ok(Outcome::skipped("no grading"));
        }
        let v = t.dirac_odd_violation();
        Ok(Outcome::new(v <= t.tol()).res("violation", v))
    });
    push("axioms.sign_table", &|| {
        let s = tri()?.sign_table()?;
        let mut out = Outcome::new(s.ko_dimension.is_some())
            .res("j_squared", s.residuals[0])
            .res("j_dirac", s.residuals[1])
            .res("j_grading", s.residuals[2]);
        if let Some(ko) = s.ko_dimension {
            out = out.dim("ko_dimension", usize::from(ko));
        }
        let dbl = s.eps_dblprime.map_or("n/a".to_string(), |e| format!("{e:+}"));
        Ok(out.detail(format!("eps = {:+}, eps' = {:+}, eps'' = {dbl}", s.eps, s.eps_prime)))
    });
    push("dirac.theorem_hypotheses", &|| {
        if !cc_family {
            return Ok(Outcome::skipped("dirac is not in the CC family"));
        }
        Ok(Outcome::new(cfg.params.theorem_hypotheses(with_gamma)))
    });
    push("decomposition.dirac_split", &|| {
        let t = tri()?;
        if first_violation()? > t.tol() {
            return Ok(Outcome::skipped("first order condition fails"));
        }
        let dec = t.decompose_dirac()?;
        let mut ok = dec.residual <= t.tol();
        let mut out = Outcome::default().res("residual", dec.residual).dim("ambiguity", dec.ambiguity_dim);
        if let Some(s) = &dec.symmetric {
            ok &= s.residual <= t.tol() && s.in_opposite_commutant;
            out = out.res("symmetric_residual", s.residual);
        }
        out.status = Some(Status::from_bool(ok));
        Ok(out)
    });
    push("gradings.d0_compatible", &|| {
        let t = tri()?;
        match (t.d0(), t.gamma()) {
            (Some(d0), Some(g)) => {
                let r = d0.anticommutator(g).hs_norm() / d0.hs_norm().max(1.0);
                Ok(Outcome::new(grading_compatible(d0, g, t.tol())).res("anticommutator", r))
            }
            _ => Ok(Outcome::skipped("needs D0 and a grading")),
        }
    });
    push("one_forms.bimodule_generators", &|| {
        let t = tri()?;
        if cfg.algebra != AlgebraChoice::Af || !cc_family || !cfg.params.theorem_hypotheses(with_gamma) {
            return Ok(Outcome::skipped("named generators apply to A_F with a generic CC-family Dirac"));
        }
        let omega = one_forms(t);
        let bimod = bimodule_generated(t, &one_form_generators(&cfg.params, with_gamma));
        Ok(Outcome::new(omega.equals(&bimod)?).dim("one_forms", omega.dim()).dim("bimodule", bimod.dim()))
    });
    push("clifford.gamma_in_odd", &|| {
        let t = tri()?;
        let Some(g) = t.gamma() else { return Ok(Outcome::skipped("no grading")) };
        let odd = clifford(t, false)?;
        let r = odd.space().relative_distance(g);
        Ok(Outcome::new(odd.contains(g)).res("relative_distance", r).dim("clifford_odd", odd.dim()))
    });
    push("property_m.odd", &|| {
        let t = tri()?;
        if !order_ok()? {
            return Ok(Outcome::skipped("order conditions fail"));
        }
        let v = property_m(t, false)?;
        let mut out = Outcome::new(v.property_m)
            .dim("clifford_odd", v.clifford_odd_dim)
            .dim("commutant", v.commutant_odd_dim)
            .dim("opposite", v.opposite_dim);
        if let Some(w) = &v.witness {
            let d = complex_span(t, t.opposite())?.distance(w);
            out = out.res("witness_distance", d).witness(format!("unit element of Cl_o' at HS distance {d:.6} from (A°)_C"));
        }
        Ok(out)
    });
    push("property_m.with_grading", &|| {
        let t = tri()?;
        if !t.is_even() {
            return Ok(Outcome::skipped("no grading"));
        }
        if !order_ok()? {
            return Ok(Outcome::skipped("order conditions fail"));
        }
        let v = property_m(t, true)?;
        let mut out = Outcome::new(v.property_m_with_grading == Some(true))
            .dim("clifford_even", v.clifford_even_dim.unwrap_or(0))
            .dim("commutant", v.commutant_even_dim.unwrap_or(0))
            .dim("opposite", v.opposite_dim);
        if let Some(w) = &v.witness {
            let d = complex_span(t, t.opposite())?.distance(w);
            out = out.res("witness_distance", d).witness(format!("unit element of Cl_e' at HS distance {d:.6} from (A°)_C"));
        }
        Ok(out)
    });
    push("orientability.obstruction", &|| {
        let t = tri()?;
        if grading()?.is_none() {
            return Ok(Outcome::skipped("no grading"));
        }
        let cases = [
            ("x_color_mixing", "x_color_mixing_vs_algebra_d0", x_color_mixing(), ObstructionMode::AlgebraD0),
            ("x_majorana", "x_majorana_vs_zero_chains", x_majorana(), ObstructionMode::ZeroChain),
        ];
        let mut out = Outcome::default();
        let mut found = Vec::new();
        for (name, key, x, mode) in cases {
            let o = obstruction_check(&x, t, mode)?;
            out = out.res(key, o.commutator.max(o.anticommutator));
            if o.holds {
                found.push(name);
            }
        }
        out.status = Some(Status::from_bool(!found.is_empty()));
        if !found.is_empty() {
            out = out.witness(format!("{} commute with the data and anticommute with gamma", found.join(", ")));
        }
        Ok(out)
    });
    push("orientability.weak", &|| {
        let t = tri()?;
        let Some(g) = t.gamma() else { return Ok(Outcome::skipped("no grading")) };
        Ok(Outcome::new(in_algebra_plus_conjugate(t.algebra(), t.j(), g, t.tol())?))
    });
    push("irreducibility.full", &|| {
        let t = tri()?;
        irreducibility_outcome(t, irreducible(t)?)
    });
    push("irreducibility.algebra_and_j", &|| {
        let t = algebra_and_j(tri()?)?;
        irreducibility_outcome(&t, irreducible(&t)?)
    });
    push("gauge.z6_kernel", &|| gauge_z6(tri()?));
    push("gauge.hypercharges", &|| gauge_hypercharges(tri()?));
    push("gauge.rho_representation", &|| gauge_rho(tri()?));

    VerificationReport { config: cfg.clone(), tolerance: cfg.tol, version: VERSION, checks }
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

impl CheckRecord {
    pub fn to_json(&self) -> Value {
        let residuals: Map<String, Value> = self.residuals.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
        let dimensions: Map<String, Value> = self.dimensions.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({
            "name": self.name,
            "status": self.status.as_str(),
            "residuals": residuals,
            "dimensions": dimensions,
            "witness": self.witness,
            "detail": self.detail,
            "wall_ms": num(self.wall_ms),
        })
    }
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.check(name).map(|c| c.status)
    }

    /// Canonical JSON: sorted keys, floats at 12 significant digits.
    pub fn to_json(&self) -> Value {
        json!({
            "config": round_floats(self.config.to_json()),
            "checks": self.checks.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
            "tolerance": num(self.tolerance),
            "version": self.version,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let name = self.config.name.as_deref().unwrap_or("(unnamed)");
        let _ = writeln!(
            s,
            "config {name}: algebra {}, grading {}, dirac {}, tol {:e}",
            self.config.algebra.as_str(),
            self.config.grading.as_str(),
            self.config.dirac.as_str(),
            self.tolerance
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mut facts: Vec<String> = c.dimensions.iter().map(|(k, v)| format!("{k}={v}")).collect();
            facts.extend(c.residuals.iter().map(|(k, v)| format!("{k}={v:.2e}")));
            let _ = writeln!(s, "{:<width$}  {:<7}  {:>9.1} ms  {}", c.name, c.status.as_str(), c.wall_ms, facts.join(" "));
            for extra in c.witness.iter().chain(&c.detail) {
                let _ = writeln!(s, "{:<width$}           {extra}", "");
            }
        }
        let count = |st| self.checks.iter().filter(|c| c.status == st).count();
        let _ = writeln!(
            s,
            "{} pass, {} fail, {} skipped (version {})",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            self.version
        );
        s
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    checks: BTreeMap<String, Status>,
}

/// Expected statuses keyed by check name.
pub fn parse_expect(text: &str) -> Result<BTreeMap<String, Status>> {
    let raw: RawManifest = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        Error::Config { line, column, message: e.message().to_string() }
    })?;
    Ok(raw.checks)
}

/// Disagreements between a report and a manifest. Skipped checks are not compared;
/// a ran check missing from the manifest, or a manifest entry naming no check, is a mismatch.
pub fn compare_expect(report: &VerificationReport, expect: &BTreeMap<String, Status>) -> Vec<String> {
    let mut out = Vec::new();
    for c in report.checks.iter().filter(|c| c.status != Status::Skipped) {
        match expect.get(c.name) {
            None => out.push(format!("{}: {} but not in manifest", c.name, c.status.as_str())),
            Some(&e) if e != c.status => {
                out.push(format!("{}: expected {}, got {}", c.name, e.as_str(), c.status.as_str()))
            }
            Some(_) => {}
        }
    }
    for name in expect.keys() {
        if report.check(name).is_none() {
            out.push(format!("{name}: no such check"));
        }
    }
    out
}
