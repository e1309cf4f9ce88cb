//! Job specs and the command runner behind the binary.
//!
//! Every command returns a [`Report`]: a versioned JSON body plus a text
//! rendering. Output depends only on the job, so reruns are byte-identical.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::central_ops::{
    apply_operator, centrality_report, fit_central, stated_central_coefficients, vir_bracket_report,
    GeneratorScope, IdentityReport, OperatorSpec, Realization,
};
use crate::comm_algebra::{crt_split, radical, AlgebraError, CommAlgebra, IdealBasis};
use crate::io::{
    element_of, format_rational, parse_element, parse_rationals, parse_word, AlgebraSpec, InputError, PsiInput,
};
use crate::lie::SimpleLieData;
use crate::linear::SparseVec;
use crate::scalar::Field;
use crate::selftest::{self, example_expected, example_module, lagrange_pair};
use crate::tau::{BiDegree, CentralConvention, SymbolKind, TauAlgebra, TauSymbol};
use crate::weight_modules::{
    check_cofinite_annihilation, dominant_integral, nilpotency_probe, singular_vectors, HighestWeightModule,
    Irreducible, ModVec, ModuleError, Nilpotency, PbwMonomial, PsiFunctional, Verma, WeightBox,
};
use crate::Q;

pub const SCHEMA: &str = "tau-loop-report/1";

pub const COMMANDS: &[&str] = &[
    "validate-algebra",
    "radical",
    "crt",
    "verma-dims",
    "irreducible-dims",
    "apply",
    "singular",
    "check-central",
    "check-bracket",
    "check-integrable",
    "check-annihilation",
    "example31",
    "selftest",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleChoice {
    Verma,
    #[default]
    Irreducible,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionChoice {
    #[default]
    First,
    Second,
}

impl From<ConventionChoice> for CentralConvention {
    fn from(c: ConventionChoice) -> Self {
        match c {
            ConventionChoice::First => CentralConvention::FirstExponent,
            ConventionChoice::Second => CentralConvention::SecondExponent,
        }
    }
}

/// Command parameters; each command reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<ConventionChoice>,
    /// Ideal generators as coordinate vectors.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gens: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization: Option<Realization>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<GeneratorScope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lam: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<u32>,
}

/// A complete job, as read from `run --job` or assembled from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiInput>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounds: Option<(i64, i64)>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub status: Status,
    pub body: Value,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    fn new(command: &str, status: Status, body: Value, text: String) -> Self {
        Report { schema: SCHEMA.into(), command: command.into(), status, body, text }
    }

    pub fn error(command: &str, e: &InputError) -> Self {
        Report::new(
            command,
            Status::Error,
            json!({"error": {"location": e.location, "message": e.message}}),
            format!("error: {e}\n"),
        )
    }

    pub fn render(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Text => self.text.clone(),
            OutputMode::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn module_err(e: ModuleError) -> InputError {
    match e {
        ModuleError::Truncation { .. } | ModuleError::BoxTooSmall { .. } => InputError::new("box", e.to_string()),
        other => InputError::new("params", other.to_string()),
    }
}

fn rationals(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violation
    }
}

/// Runs a job. Input problems come back as a report with status `error`.
pub fn run(job: &JobSpec) -> Report {
    match dispatch(job) {
        Ok(r) => r,
        Err(e) => Report::error(&job.command, &e),
    }
}

struct Ctx<'a> {
    job: &'a JobSpec,
}

impl<'a> Ctx<'a> {
    fn algebra(&self) -> Result<Arc<CommAlgebra<Q>>, InputError> {
        let spec = self.job.algebra.clone().unwrap_or_else(|| AlgebraSpec::preset("scalar"));
        Ok(Arc::new(spec.build("algebra")?))
    }

    fn tau(&self) -> Result<TauAlgebra<Q>, InputError> {
        let conv = self.job.params.convention.unwrap_or_default();
        Ok(TauAlgebra::new(SimpleLieData::sl2(), self.algebra()?, conv.into()))
    }

    fn psi(&self, dim: usize) -> Result<PsiFunctional<Q>, InputError> {
        let input = self.job.psi.clone().ok_or_else(|| InputError::new("psi", "this command needs psi"))?;
        input.build(dim, "psi")
    }

    fn bounds(&self, default: (i64, i64)) -> Result<WeightBox, InputError> {
        let (p, q) = self.job.bounds.unwrap_or(default);
        if p < 0 || q < 0 {
            return Err(InputError::new("box", format!("box ({p},{q}) must be non-negative")));
        }
        Ok(WeightBox::new(p, q))
    }

    fn element(&self, field: &str, values: &Option<Vec<String>>, dim: usize) -> Result<Option<SparseVec<Q>>, InputError> {
        match values {
            None => Ok(None),
            Some(v) => {
                let at = format!("params.{field}");
                Ok(Some(element_of(&parse_rationals(v, &at)?, dim, &at)?))
            }
        }
    }

    /// The `(a, b)` pairs to test: the given ones, or every basis pair.
    fn pairs(&self, dim: usize) -> Result<Vec<ElementPair>, InputError> {
        let p = &self.job.params;
        let a = self.element("a", &p.a, dim)?;
        let b = self.element("b", &p.b, dim)?;
        let basis: Vec<SparseVec<Q>> = (0..dim).map(SparseVec::unit).collect();
        let aa = a.map(|x| vec![x]).unwrap_or_else(|| basis.clone());
        let bb = b.map(|x| vec![x]).unwrap_or(basis);
        Ok(aa.iter().flat_map(|x| bb.iter().map(move |y| (x.clone(), y.clone()))).collect())
    }

    fn module(&self, default_box: (i64, i64)) -> Result<Built, InputError> {
        let tau = self.tau()?;
        let psi = self.psi(tau.algebra().dim())?;
        let bounds = self.bounds(default_box)?;
        Ok(match self.job.params.module.unwrap_or_default() {
            ModuleChoice::Verma => Built::Verma(Verma::new(tau, psi, bounds).map_err(module_err)?),
            ModuleChoice::Irreducible => Built::Irreducible(Irreducible::new(tau, psi, bounds).map_err(module_err)?),
        })
    }
}

type ElementPair = (SparseVec<Q>, SparseVec<Q>);

enum Built {
    Verma(Verma<Q>),
    Irreducible(Irreducible<Q>),
}

macro_rules! with_module {
    ($built:expr, $m:ident => $body:expr) => {
        match $built {
            Built::Verma($m) => $body,
            Built::Irreducible($m) => $body,
        }
    };
}

fn dispatch(job: &JobSpec) -> Result<Report, InputError> {
    let ctx = Ctx { job };
    match job.command.as_str() {
        "validate-algebra" => validate_algebra(&ctx),
        "radical" => radical_cmd(&ctx),
        "crt" => crt_cmd(&ctx),
        "verma-dims" => dims_cmd(&ctx, ModuleChoice::Verma),
        "irreducible-dims" => dims_cmd(&ctx, ModuleChoice::Irreducible),
        "apply" => with_module!(ctx.module((2, 2))?, m => apply_cmd(&ctx, &m)),
        "singular" => with_module!(ctx.module((2, 2))?, m => singular_cmd(&m)),
        "check-central" => with_module!(ctx.module((3, 3))?, m => central_cmd(&ctx, &m)),
        "check-bracket" => with_module!(ctx.module((3, 3))?, m => bracket_cmd(&ctx, &m)),
        "check-integrable" => integrable_cmd(&ctx),
        "check-annihilation" => annihilation_cmd(&ctx),
        "example31" => example_cmd(&ctx),
        "selftest" => Ok(selftest_cmd(&ctx)),
        other => Err(InputError::new(
            "command",
            format!("unknown command `{other}`; expected one of {}", COMMANDS.join(", ")),
        )),
    }
}

fn validate_algebra(ctx: &Ctx) -> Result<Report, InputError> {
    let a = ctx.algebra()?;
    let r = a.validate();
    let mut text = format!("dim {} basis [{}]\n", a.dim(), a.labels().join(", "));
    for (i, j) in &r.commutativity {
        text.push_str(&format!("commutativity fails: e{i}e{j} != e{j}e{i}\n"));
    }
    for (i, j, k) in &r.associativity {
        text.push_str(&format!("associativity fails: (e{i}e{j})e{k} != e{i}(e{j}e{k})\n"));
    }
    for i in &r.unit_law {
        text.push_str(&format!("unit law fails on e{i}\n"));
    }
    text.push_str(if r.is_valid() { "valid\n" } else { "invalid\n" });
    let body = json!({
        "dim": a.dim(),
        "labels": a.labels(),
        "valid": r.is_valid(),
        "commutativity": r.commutativity,
        "associativity": r.associativity,
        "unit_law": r.unit_law,
    });
    Ok(Report::new("validate-algebra", verdict(r.is_valid()), body, text))
}

fn ideal_from(ctx: &Ctx, a: &Arc<CommAlgebra<Q>>) -> Result<IdealBasis<Q>, InputError> {
    let gens: Vec<SparseVec<Q>> = ctx
        .job
        .params
        .gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let at = format!("params.gens[{i}]");
            element_of(&parse_rationals(g, &at)?, a.dim(), &at)
        })
        .collect::<Result<_, _>>()?;
    IdealBasis::generated_by(a.clone(), &gens).map_err(|e| InputError::new("params.gens", e.to_string()))
}

fn radical_cmd(ctx: &Ctx) -> Result<Report, InputError> {
    let a = ctx.algebra()?;
    let ideal = ideal_from(ctx, &a)?;
    let r = radical(&ideal).map_err(|e| InputError::new("params.gens", e.to_string()))?;
    let fmt = |i: &IdealBasis<Q>| -> Vec<String> { i.space().rows().iter().map(|v| a.format_element(v)).collect() };
    let ideal_rows = fmt(&ideal);
    let rad_rows = fmt(&r);
    let text = format!(
        "I    = span{{{}}} (dim {})\nsqrt = span{{{}}} (dim {})\n",
        ideal_rows.join(", "),
        ideal.dim(),
        rad_rows.join(", "),
        r.dim()
    );
    let body = json!({"ideal": ideal_rows, "radical": rad_rows, "radical_dim": r.dim()});
    Ok(Report::new("radical", Status::Ok, body, text))
}

fn crt_cmd(ctx: &Ctx) -> Result<Report, InputError> {
    let a = ctx.algebra()?;
    match crt_split(&a) {
        Ok(split) => {
            let mut text = String::new();
            let mut comps = Vec::new();
            for (i, e) in split.idempotents.iter().enumerate() {
                let images: Vec<String> = (0..a.dim())
                    .map(|k| format_rational(&split.evaluate(i, &SparseVec::unit(k))))
                    .collect();
                text.push_str(&format!("e{} = {}   basis -> [{}]\n", i + 1, a.format_element(e), images.join(", ")));
                comps.push(json!({"idempotent": a.format_element(e), "coordinates": rationals(&e.to_dense(a.dim())), "basis_images": images}));
            }
            Ok(Report::new("crt", Status::Ok, json!({"components": comps}), text))
        }
        Err(e @ (AlgebraError::NotSemisimple { .. } | AlgebraError::SplitFieldRequired { .. })) => Ok(Report::new(
            "crt",
            Status::Violation,
            json!({"split": false, "reason": e.to_string()}),
            format!("no split: {e}\n"),
        )),
        Err(e) => Err(InputError::new("algebra", e.to_string())),
    }
}

fn dims_cmd(ctx: &Ctx, which: ModuleChoice) -> Result<Report, InputError> {
    let mut job = ctx.job.clone();
    job.params.module = Some(which);
    let ctx = Ctx { job: &job };
    let built = ctx.module((2, 2))?;
    let table = with_module!(&built, m => m.dim_table()).map_err(module_err)?;
    let bounds = with_module!(&built, m => m.weight_box());
    let mut text = format!("offset (p,q) -> dim, box ({},{})\n", bounds.p_max, bounds.q_max);
    let mut rows = Vec::new();
    for (off, d) in &table {
        text.push_str(&format!("{:>8} -> {d}\n", off.to_string()));
        rows.push(json!([off.p, off.q, d]));
    }
    let name = if which == ModuleChoice::Verma { "verma-dims" } else { "irreducible-dims" };
    Ok(Report::new(name, Status::Ok, json!({"box": [bounds.p_max, bounds.q_max], "dims": rows}), text))
}

/// Builds the vector named by a word, applying the symbols right to left.
fn word_vector<M: HighestWeightModule<Q, Key = PbwMonomial>>(
    m: &M,
    word: &str,
) -> Result<ModVec<PbwMonomial, Q>, InputError> {
    let syms = parse_word(m.tau(), word, "params.vector")?;
    let mut v = m.highest_vector();
    for s in syms.iter().rev() {
        v = m.act_symbol(s, &v).map_err(module_err)?;
    }
    Ok(v)
}

fn apply_cmd<M: HighestWeightModule<Q, Key = PbwMonomial>>(ctx: &Ctx, m: &M) -> Result<Report, InputError> {
    let p = &ctx.job.params;
    let label = p.vector.clone().unwrap_or_else(|| "v".into());
    let v = word_vector(m, &label)?;
    let dim = m.tau().algebra().dim();
    let (what, w) = if let Some(el) = &p.element {
        let u = parse_element(m.tau(), el, "params.element")?;
        (m.tau().format_element(&u), m.act(&u, &v).map_err(module_err)?)
    } else {
        let unit = m.tau().algebra().unit().clone();
        let a = ctx.element("a", &p.a, dim)?.unwrap_or_else(|| unit.clone());
        let b = ctx.element("b", &p.b, dim)?.unwrap_or(unit);
        let op = OperatorSpec::new(p.j.unwrap_or(0), a, b)
            .with_realization(p.realization.unwrap_or(Realization::NormalOrdered));
        if op.j == 0 && op.realization == Realization::CommutatorDefined {
            return Err(InputError::new("params.realization", "the commutator form needs j != 0"));
        }
        (op.describe(m.tau().algebra()), apply_operator(m, &op, &v).map_err(module_err)?)
    };
    let vin = m.format_vector(&v);
    let out = m.format_vector(&w);
    let text = format!("{what} on {vin}\n= {out}\n");
    let offset = m.offset_of_vector(&w).map(|o| o.to_string());
    Ok(Report::new("apply", Status::Ok, json!({"applied": what, "input": vin, "result": out, "offset": offset}), text))
}

fn singular_cmd<M: HighestWeightModule<Q, Key = PbwMonomial>>(m: &M) -> Result<Report, InputError> {
    let mut text = String::from("singular vectors (killed by every raising generator of the loop algebra)\n");
    let mut rows = Vec::new();
    for off in m.weight_box().offsets() {
        let s = singular_vectors(m, off).map_err(module_err)?;
        if s.dim() == 0 {
            continue;
        }
        let vecs: Vec<String> = s.vectors().iter().map(|v| m.format_vector(v)).collect();
        text.push_str(&format!("{off}: dim {}\n", s.dim()));
        for v in &vecs {
            text.push_str(&format!("    {v}\n"));
        }
        rows.push(json!({"offset": [off.p, off.q], "dim": s.dim(), "vectors": vecs}));
    }
    Ok(Report::new("singular", Status::Ok, json!({"offsets": rows}), text))
}

fn identity_text(r: &IdentityReport) -> String {
    let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mark = if r.passed() { "PASS" } else { "FAIL" };
    let mut s = format!(
        "[{mark}] {} [{}] checked {} skipped {} violations {}\n",
        r.identity,
        params.join(", "),
        r.checked,
        r.skipped,
        r.violations.len()
    );
    for v in r.violations.iter().take(5) {
        s.push_str(&format!("    {v}\n"));
    }
    s
}

fn identity_json(r: &IdentityReport) -> Value {
    json!({
        "identity": r.identity,
        "parameters": r.parameters.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<serde_json::Map<_, _>>(),
        "checked": r.checked,
        "skipped": r.skipped,
        "passed": r.passed(),
        "violations": r.violations,
    })
}

fn central_cmd<M: HighestWeightModule<Q, Key = PbwMonomial>>(ctx: &Ctx, m: &M) -> Result<Report, InputError> {
    let p = &ctx.job.params;
    let j = p.j.unwrap_or(0);
    let window = p.window.unwrap_or(2);
    let scope = p.scope.unwrap_or_default();
    let realization = p.realization.unwrap_or(Realization::NormalOrdered);
    if j == 0 && realization == Realization::CommutatorDefined {
        return Err(InputError::new("params.realization", "the commutator form needs j != 0"));
    }
    let mut reports = Vec::new();
    for (a, b) in ctx.pairs(m.tau().algebra().dim())? {
        let op = OperatorSpec::new(j, a, b).with_realization(realization);
        reports.push(centrality_report(m, &op, window, scope).map_err(module_err)?);
    }
    let ok = reports.iter().all(IdentityReport::passed);
    let text: String = reports.iter().map(identity_text).collect();
    let body = json!({"reports": reports.iter().map(identity_json).collect::<Vec<_>>()});
    Ok(Report::new("check-central", verdict(ok), body, text))
}

fn bracket_cmd<M: HighestWeightModule<Q, Key = PbwMonomial>>(ctx: &Ctx, m: &M) -> Result<Report, InputError> {
    let p = &ctx.job.params;
    let k = p.k.ok_or_else(|| InputError::new("params.k", "check-bracket needs k"))?;
    let j = p.j.ok_or_else(|| InputError::new("params.j", "check-bracket needs j"))?;
    if j == 0 {
        return Err(InputError::new("params.j", "j must be nonzero"));
    }
    let lie = m.tau().lie().clone();
    let (g1, g2) = stated_central_coefficients(&lie, k);
    let mut reports = Vec::new();
    let mut samples = Vec::new();
    let mut central = Vec::new();
    for (a, b) in ctx.pairs(m.tau().algebra().dim())? {
        let (rep, sample) = vir_bracket_report(m, k, j, &a, &b).map_err(module_err)?;
        if let Some(s) = &sample {
            let predicted = g1.clone() * s.k_ab.clone() + g2.clone() * s.k_a_k_b.clone();
            central.push(json!({
                "operator": rep.parameters.iter().find(|(n, _)| n == "operator").map(|(_, v)| v.clone()),
                "psi_K_ab": format_rational(&s.k_ab),
                "psi_K_a_psi_K_b": format_rational(&s.k_a_k_b),
                "measured_scalar": format_rational(&s.scalar),
                "stated_scalar": format_rational(&predicted),
                "agrees": predicted == s.scalar,
            }));
        }
        samples.extend(sample);
        reports.push(rep);
    }
    let ok = reports.iter().all(IdentityReport::passed);
    let mut text: String = reports.iter().map(identity_text).collect();
    let mut body = json!({"reports": reports.iter().map(identity_json).collect::<Vec<_>>()});
    if j + k == 0 {
        let fit = fit_central(&lie, k, &samples);
        let measured = fit.measured.as_ref().map(|(a, b)| vec![format_rational(a), format_rational(b)]);
        text.push_str(&format!(
            "central part: stated (gamma1, gamma2) = ({g1}, {g2}); fitted from this psi: {}\n",
            measured.as_ref().map(|m| format!("({}, {})", m[0], m[1])).unwrap_or_else(|| "underdetermined".into())
        ));
        for c in &central {
            text.push_str(&format!(
                "    {}: measured {} stated {}{}\n",
                c["operator"].as_str().unwrap_or("?"),
                c["measured_scalar"].as_str().unwrap_or("?"),
                c["stated_scalar"].as_str().unwrap_or("?"),
                if c["agrees"].as_bool() == Some(true) { "" } else { "  DISCREPANCY" }
            ));
        }
        body["central"] = json!({
            "stated": [format_rational(&g1), format_rational(&g2)],
            "measured": measured,
            "samples": central,
        });
    }
    Ok(Report::new("check-bracket", verdict(ok), body, text))
}

fn integrable_cmd(ctx: &Ctx) -> Result<Report, InputError> {
    let tau = ctx.tau()?;
    let psi = ctx.psi(tau.algebra().dim())?;
    let n_max = ctx.job.params.n_max.unwrap_or(6);
    let dom = dominant_integral(&psi, tau.algebra()).map_err(module_err)?;
    let bounds = ctx.bounds((n_max as i64, 1))?;
    let mut job = ctx.job.clone();
    job.params.module.get_or_insert(ModuleChoice::Irreducible);
    let built = Ctx { job: &job }.module((n_max as i64, 1))?;
    let unit = tau.algebra().unit().clone();
    let mut probes = Vec::new();
    let mut text = format!(
        "dominant integral: {}{}\n",
        dom.dominant,
        dom.witness.as_ref().map(|w| format!(" ({w})")).unwrap_or_default()
    );
    for (name, kind) in [
        ("Y", SymbolKind::Current { g: 1, power: 0 }),
        ("X(t^-1)", SymbolKind::Current { g: 0, power: -1 }),
    ] {
        // powers whose image still lies in the box
        let deg = tau.degree(&TauSymbol { kind, a: 0 });
        let steps = (1..=n_max)
            .take_while(|&n| bounds.contains(BiDegree::new(deg.p * n as i64, deg.q * n as i64)))
            .last()
            .unwrap_or(0);
        let result = with_module!(&built, m => {
            let top = m.highest_vector();
            nilpotency_probe(m, kind, &unit, &top, steps).map(|r| match r {
                Nilpotency::Nilpotent(n) => (Some(n), None),
                Nilpotency::Survives(w) => (None, Some(m.format_vector(&w))),
            })
        })
        .map_err(module_err)?;
        match &result {
            (Some(n), _) => text.push_str(&format!("{name}^{n} v = 0\n")),
            (None, _) => text.push_str(&format!("{name}^N v != 0 for all N <= {steps}\n")),
        }
        probes.push(json!({"generator": name, "steps": steps, "nilpotent_at": result.0, "survivor": result.1}));
    }
    // only the irreducible quotient is expected to be integrable
    let is_verma = matches!(built, Built::Verma(_));
    let consistent = is_verma || !dom.dominant || probes.iter().all(|p| !p["nilpotent_at"].is_null());
    let body = json!({
        "dominant": dom.dominant,
        "witness": dom.witness,
        "components": dom.components.iter().map(|c| json!({"lambda": format_rational(&c.lambda), "level": format_rational(&c.level)})).collect::<Vec<_>>(),
        "module": if is_verma { "verma" } else { "irreducible" },
        "box": [bounds.p_max, bounds.q_max],
        "probes": probes,
    });
    Ok(Report::new("check-integrable", verdict(consistent), body, text))
}

fn annihilation_cmd(ctx: &Ctx) -> Result<Report, InputError> {
    let tau = ctx.tau()?;
    let psi = ctx.psi(tau.algebra().dim())?;
    let ideal = ideal_from(ctx, tau.algebra())?;
    let bounds = ctx.bounds((3, 3))?;
    let r = check_cofinite_annihilation(&tau, &psi, &ideal, bounds).map_err(module_err)?;
    let mut text = format!(
        "hypothesis psi(I) = 0: {}\nchecked {} generator/vector products, {} nonzero\n",
        r.hypothesis_holds,
        r.checked,
        r.violations.len()
    );
    for f in r.hypothesis_failures.iter().chain(r.violations.iter().take(5)) {
        text.push_str(&format!("    {f}\n"));
    }
    let body = json!({
        "hypothesis_holds": r.hypothesis_holds,
        "hypothesis_failures": r.hypothesis_failures,
        "checked": r.checked,
        "violations": r.violations,
    });
    Ok(Report::new("check-annihilation", verdict(r.passed()), body, text))
}

fn pair_of(v: &Option<Vec<String>>, field: &str, default: [i64; 2]) -> Result<[Q; 2], InputError> {
    match v {
        None => Ok([Q::from_int(default[0]), Q::from_int(default[1])]),
        Some(items) => {
            let at = format!("params.{field}");
            let xs = parse_rationals(items, &at)?;
            match <[Q; 2]>::try_from(xs) {
                Ok(pair) => Ok(pair),
                Err(xs) => Err(InputError::new(at, format!("expected 2 values, got {}", xs.len()))),
            }
        }
    }
}

fn example_cmd(ctx: &Ctx) -> Result<Report, InputError> {
    use crate::central_ops::{singular_generation, t_apply, t_apply_commutator};
    let p = &ctx.job.params;
    let zs = pair_of(&p.z, "z", [1, 2])?;
    let lams = pair_of(&p.lam, "lam", [2, 3])?;
    let levels = pair_of(&p.c, "c", [1, 2])?;
    let bounds = ctx.bounds((2, 2))?;
    let m = example_module(zs.clone(), lams.clone(), levels.clone(), bounds).map_err(module_err)?;
    let (p1, p2) = lagrange_pair(&zs);
    let v = m.highest_vector();
    let (want1, want2) = example_expected(&m, &lams, &levels);
    let pair = [(p1.clone(), p2.clone())];
    let gens = singular_generation(&m, &[-1, -2], &pair, GeneratorScope::Affine).map_err(module_err)?;
    let a = m.tau().algebra();
    let mut text = format!("P1 = {}, P2 = {}\n", a.format_element(&p1), a.format_element(&p2));
    let mut rows = Vec::new();
    let mut ok = true;
    for (j, want) in [(-1, want1), (-2, want2)] {
        let got = t_apply(&m, j, &p1, &p2, &v).map_err(module_err)?;
        let oracle = t_apply_commutator(&m, j, &p1, &p2, &v).map_err(module_err)?;
        let singular = gens.iter().find(|g| g.j == j);
        let is_singular = singular.is_some_and(|g| g.is_singular());
        let matches = got == want && oracle == got;
        ok &= matches && is_singular;
        text.push_str(&format!(
            "T_{j}(P1,P2)(v1⊗v2) = {}\n    commutator form agrees: {}; display agrees: {}; singular: {}\n",
            m.format_vector(&got),
            oracle == got,
            got == want,
            is_singular
        ));
        rows.push(json!({
            "j": j,
            "vector": m.format_vector(&got),
            "commutator_agrees": oracle == got,
            "display_agrees": got == want,
            "singular": is_singular,
            "not_killed_by": singular.map(|g| g.not_killed_by.clone()).unwrap_or_default(),
            "offset": singular.and_then(|g| g.offset).map(|o: BiDegree| [o.p, o.q]),
        }));
    }
    let body = json!({
        "z": rationals(&zs),
        "lambda": rationals(&lams),
        "c": rationals(&levels),
        "P1": a.format_element(&p1),
        "P2": a.format_element(&p2),
        "vectors": rows,
    });
    Ok(Report::new("example31", verdict(ok), body, text))
}

fn selftest_cmd(ctx: &Ctx) -> Report {
    let ids: Vec<u32> = if ctx.job.params.criteria.is_empty() {
        (1..=selftest::criterion_count() as u32).collect()
    } else {
        ctx.job.params.criteria.clone()
    };
    let mut results = Vec::new();
    for id in ids {
        match selftest::run_criterion(id) {
            Some(r) => results.push(r),
            None => {
                return Report::error("selftest", &InputError::new("params.criteria", format!("no criterion {id}")))
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!(
            "[{}] {:>2} {} ({} checks)\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.checked
        ));
        for d in &r.details {
            text.push_str(&format!("       {d}\n"));
        }
    }
    text.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    let body = json!({"passed": passed, "total": results.len(), "criteria": results});
    Report::new("selftest", verdict(passed == results.len()), body, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: &str) -> JobSpec {
        JobSpec { command: command.into(), ..Default::default() }
    }

    #[test]
    fn unknown_command_is_an_input_error() {
        let r = run(&job("frobnicate"));
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.body["error"]["location"], "command");
    }

    #[test]
    fn verma_dims_scalar() {
        let mut j = job("verma-dims");
        j.psi = Some(PsiInput::Short("λ=1,c=1,d0=0".into()));
        j.bounds = Some((4, 4));
        let r = run(&j);
        assert_eq!(r.status, Status::Ok);
        let dims = r.body["dims"].as_array().unwrap();
        assert!(dims.contains(&json!([0, 1, 3])));
        assert!(dims.contains(&json!([1, 1, 4])));
    }

    #[test]
    fn missing_psi_is_located() {
        let r = run(&job("verma-dims"));
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.body["error"]["location"], "psi");
    }

    #[test]
    fn job_round_trip() {
        let text = r#"{"command": "check-central", "algebra": {"preset": "jet", "N": 2},
            "psi": {"h": ["1","0"], "K": ["1","0"], "L0": ["0","0"]}, "box": [2, 2],
            "params": {"module": "verma", "j": -1, "window": 1}, "output": "json"}"#;
        let spec: JobSpec = crate::io::read_json(text, "job").unwrap();
        let back: JobSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, back);
        let r = run(&spec);
        assert_eq!(r.status, Status::Ok, "{}", r.text);
        let again = run(&spec);
        assert_eq!(r.render(OutputMode::Json), again.render(OutputMode::Json));
    }
}
