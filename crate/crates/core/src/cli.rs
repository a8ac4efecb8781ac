//! One job of the command-line tool: parse the specs, run the construction or the checks,
//! and assemble a canonical JSON document plus a text rendering.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::adjunction::adjunction_suite;
use crate::axioms::check_tambara_axioms;
use crate::crossed::{cbr_comparison, CrossedBurnside};
use crate::diagram::diagram_lemma_suite;
use crate::group::{Group, GroupSpec, SubgroupId};
use crate::gset::GSet;
use crate::mackey::{check_axioms, functor_from_spec};
use crate::marks::TableOfMarks;
use crate::monoid::{parse_gmonoid, GMonoid};
use crate::ring::RingPresentation;
use crate::strings::StringRing;
use crate::tambarize::Tambarization;
use crate::witt::witt_burnside;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Table,
    Verify,
    Adjunction,
    Crossed,
    Witt,
    Marks,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Verify => "verify",
            Command::Adjunction => "adjunction",
            Command::Crossed => "crossed",
            Command::Witt => "witt",
            Command::Marks => "marks",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [Command::Table, Command::Verify, Command::Adjunction, Command::Crossed, Command::Witt, Command::Marks]
            .into_iter()
            .find(|c| c.name() == text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub group: String,
    pub monoid: String,
    pub functor: String,
    pub level: String,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
}

impl JobSpec {
    pub fn new(command: Command, group: &str) -> Self {
        JobSpec {
            command,
            group: group.into(),
            monoid: "trivial".into(),
            functor: "trivial".into(),
            level: "G".into(),
            seed: 0,
            samples: 100,
            format: Format::Json,
        }
    }
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error("malformed spec: {0}")]
    Malformed(String),
    #[error("computation failed: {0}")]
    Failed(String),
}

/// Exit status: 0 when the run found nothing wrong, 1 on violations, 2 on a malformed spec.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug, Clone)]
pub struct JobOutput {
    pub violations: usize,
    pub document: Value,
    pub text: String,
}

impl JobOutput {
    pub fn exit_code(&self) -> i32 {
        if self.violations == 0 {
            EXIT_OK
        } else {
            EXIT_VIOLATIONS
        }
    }

    /// Sorted keys, two-space indentation, trailing newline.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.document).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s: String = self.text.lines().map(|l| format!("{}\n", l.trim_end())).collect();
                if s.is_empty() {
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn malformed(e: impl std::fmt::Display) -> JobError {
    JobError::Malformed(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> JobError {
    JobError::Failed(e.to_string())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

struct Context {
    group: Group,
    monoid: GMonoid,
    level: SubgroupId,
}

fn context(spec: &JobSpec) -> Result<Context, JobError> {
    if spec.samples == 0 {
        return Err(malformed("samples must be at least 1"));
    }
    let gs = GroupSpec::parse(&spec.group).map_err(malformed)?;
    let group = Group::build(&gs).map_err(malformed)?;
    let monoid = parse_gmonoid(&group, &spec.monoid).map_err(malformed)?;
    let level = group.parse_level(&spec.level).map_err(malformed)?;
    Ok(Context { group, monoid, level })
}

fn untwisted(ctx: &Context) -> Result<(), JobError> {
    if ctx.monoid.is_trivial_action() {
        Ok(())
    } else {
        Err(malformed(format!("{} carries a group action; this command needs a plain monoid", ctx.monoid.name())))
    }
}

pub fn run(spec: &JobSpec) -> Result<JobOutput, JobError> {
    let ctx = context(spec)?;
    let mut out = match spec.command {
        Command::Table => table(spec, &ctx)?,
        Command::Verify => verify(spec, &ctx)?,
        Command::Adjunction => adjunction(spec, &ctx)?,
        Command::Crossed => crossed(spec, &ctx),
        Command::Witt => witt(&ctx)?,
        Command::Marks => marks(&ctx),
    };
    if let Value::Object(map) = &mut out.document {
        map.insert("command".into(), json!(spec.command.name()));
        map.insert("group".into(), json!(ctx.group.name()));
        map.insert("violations".into(), json!(out.violations));
    }
    Ok(out)
}

fn presentation_json(p: &RingPresentation, ambient: &str) -> Value {
    json!({
        "rank": p.rank(),
        "basis": p.basis.iter().map(|b| b.display(ambient)).collect::<Vec<_>>(),
        "mul": p.mul,
        "one": p.one,
    })
}

fn table(spec: &JobSpec, ctx: &Context) -> Result<JobOutput, JobError> {
    let g = &ctx.group;
    let level = g.subgroup_name(ctx.level);
    let (what, p, ambient) = match spec.functor.trim() {
        "crossed" | "omega" => {
            let om = CrossedBurnside::new(&ctx.monoid);
            let (_, p) = om.presentation_over(&GSet::coset(g, ctx.level)).map_err(failed)?;
            (format!("Omega_{}", ctx.monoid.name()), p, g.name().to_string())
        }
        "strings" => {
            untwisted(ctx)?;
            let sr = StringRing::new(g, ctx.level, ctx.monoid.monoid());
            (format!("B_{}", ctx.monoid.name()), sr.presentation(), level.clone())
        }
        f => {
            let m = functor_from_spec(g, f, &ctx.monoid).map_err(malformed)?;
            let name = m.name().to_string();
            let t = Tambarization::new(m);
            let (_, p) = t.presentation(ctx.level);
            (format!("T_{name}"), p, g.name().to_string())
        }
    };
    let ring_check = p.check_ring_axioms();
    let violations = usize::from(ring_check.is_err());
    let mut doc = presentation_json(&p, &ambient);
    doc["ring"] = json!(what);
    doc["level"] = json!(level);
    doc["ring_axioms"] = json!(ring_check.clone().err().unwrap_or_else(|| "ok".into()));
    let mut text = format!("{what}({}/{level})\n", g.name());
    text.push_str(&p.render_text(&ambient));
    if let Err(e) = ring_check {
        text.push_str(&format!("ring axioms: {e}\n"));
    }
    Ok(JobOutput { violations, document: doc, text })
}

fn verify(spec: &JobSpec, ctx: &Context) -> Result<JobOutput, JobError> {
    let g = &ctx.group;
    let m = functor_from_spec(g, &spec.functor, &ctx.monoid).map_err(malformed)?;
    let name = m.name().to_string();
    let mackey = check_axioms(&m);
    let t = Tambarization::new(m);
    let tambara = check_tambara_axioms(&t, spec.seed, spec.samples);
    let lemmas = diagram_lemma_suite(g, spec.seed, spec.samples);
    let violations = mackey.violations.len() + tambara.violations.len() + lemmas.violations.len();
    let doc = json!({
        "functor": name,
        "samples": spec.samples,
        "seed": spec.seed,
        "mackey_axioms": to_value(&mackey),
        "tambara_axioms": to_value(&tambara),
        "diagram_lemmas": to_value(&lemmas),
    });
    let mut text = format!("verify {name} over {} (seed {}, {} samples)\n", g.name(), spec.seed, spec.samples);
    text.push_str(&format!(
        "mackey axioms:  {} checks, {} violations\n",
        mackey.checked,
        mackey.violations.len()
    ));
    text.push_str(&format!(
        "tambara axioms: {} instances, {} checks, {} skipped, {} violations\n",
        tambara.instances,
        tambara.checks,
        tambara.skipped,
        tambara.violations.len()
    ));
    text.push_str(&format!(
        "diagram lemmas: A {} B {} C {} adjunction {} pullback {}, {} violations\n",
        lemmas.lemma_a,
        lemmas.lemma_b,
        lemmas.lemma_c,
        lemmas.adjunction,
        lemmas.pullback_universal,
        lemmas.violations.len()
    ));
    for v in mackey.violations.iter().take(20) {
        text.push_str(&format!("  mackey: {v:?}\n"));
    }
    for v in tambara.violations.iter().take(20) {
        text.push_str(&format!("  tambara: {} (instance {}): {}\n", v.condition, v.instance, v.detail));
    }
    for v in lemmas.violations.iter().take(20) {
        text.push_str(&format!("  lemma: {v}\n"));
    }
    Ok(JobOutput { violations, document: doc, text })
}

fn adjunction(spec: &JobSpec, ctx: &Context) -> Result<JobOutput, JobError> {
    untwisted(ctx)?;
    let suite = adjunction_suite(&ctx.group, ctx.monoid.monoid(), ctx.monoid.name(), spec.seed, spec.samples);
    let violations = suite.violations();
    let mut text = format!("adjunctions over {} with Q = {}\n", suite.group, suite.monoid);
    for c in &suite.tambara {
        text.push_str(&format!(
            "{} -> {} [{}]: {} morphisms, {} values, {} failures\n",
            c.source,
            c.target,
            c.direction,
            c.morphisms,
            c.checked_values,
            c.failures.len()
        ));
        for f in c.failures.iter().take(5) {
            text.push_str(&format!("  {f}\n"));
        }
    }
    for c in &suite.ell {
        text.push_str(&format!(
            "L[{}] -> {}: {} monoid maps, {} Mackey morphisms, {} index checks, {} failures\n",
            suite.monoid,
            c.target,
            c.report.monoid_maps,
            c.report.mackey_morphisms,
            c.report.identity_checks,
            c.report.failures.len()
        ));
    }
    let mut doc = to_value(&suite);
    doc["samples"] = json!(spec.samples);
    doc["seed"] = json!(spec.seed);
    Ok(JobOutput { violations, document: doc, text })
}

fn crossed(spec: &JobSpec, ctx: &Context) -> JobOutput {
    let rep = cbr_comparison(&ctx.monoid, spec.seed, spec.samples);
    let mut text = format!("T_P[{}] vs Omega_{} over {}\n", rep.monoid, rep.monoid, rep.group);
    for l in &rep.levels {
        text.push_str(&format!("  {}/{}: rank {}\n", rep.group, l.subgroup, l.rank));
    }
    text.push_str(&format!(
        "{} sampled maps, {} checks, {} skipped, {} failures\n",
        rep.sampled_maps,
        rep.checks,
        rep.skipped,
        rep.failures.len()
    ));
    for f in rep.failures.iter().take(20) {
        text.push_str(&format!("  {f}\n"));
    }
    let mut doc = to_value(&rep);
    doc["samples"] = json!(spec.samples);
    doc["seed"] = json!(spec.seed);
    JobOutput { violations: rep.failures.len(), document: doc, text }
}

fn witt(ctx: &Context) -> Result<JobOutput, JobError> {
    untwisted(ctx)?;
    let w = witt_burnside(&ctx.group, ctx.monoid.monoid(), ctx.monoid.name(), ctx.level).map_err(failed)?;
    let mut doc = presentation_json(&w.presentation, &w.group);
    doc["metadata"] = json!({
        "ring": w.ring,
        "identification": w.identification,
        "monoid": w.monoid,
        "subgroup": w.subgroup,
    });
    let mut text = format!("{}\n", w.ring);
    for step in &w.identification {
        text.push_str(&format!("  {step}\n"));
    }
    text.push_str(&w.presentation.render_text(&w.group));
    Ok(JobOutput { violations: 0, document: doc, text })
}

fn marks(ctx: &Context) -> JobOutput {
    let tm = TableOfMarks::new(&ctx.group, ctx.level);
    let injective = tm.is_injective();
    let mut doc = to_value(&tm);
    doc["injective"] = json!(injective);
    let text = tm.render_text();
    JobOutput { violations: usize::from(!injective), document: doc, text }
}
