//! Runs the anchored checks over parameter ranges and collects the
//! outcomes as reports. Failures are data: a check never aborts the run.

mod checks;
pub mod cli;
mod report;

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{builtin_template, determinant, instantiate, DiagramError, TwistTemplate, CROSSING_BUDGET};
use crate::tangles::{BoundaryLabel, Fraction, Section};

pub use checks::REGISTRY;
pub use report::{render_structured, render_table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Printed at the head of every report.
pub const SCOPE_NOTE: &str =
    "checks cover arithmetic and symbolic claims only; hyperbolicity of the families is not certified";

pub type Fills = BTreeMap<BoundaryLabel, Fraction>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OraclePolicy {
    /// The check has no diagram oracle, or its oracle must run.
    Required,
    /// Diagram oracles over the crossing budget are skipped, not failed.
    SkipIfOverBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamRange {
    None,
    P(RangeInclusive<i64>),
    K(RangeInclusive<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssertionKind {
    Symbolic,
    Solver,
    Oracle,
    NonHomeomorphism,
    Distance,
    Transcription,
}

pub struct CheckSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
    pub range: ParamRange,
    pub oracle: OraclePolicy,
    pub kinds: &'static [AssertionKind],
    pub(crate) run: fn(&mut Ctx),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Param {
    pub name: char,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub param: Option<Param>,
    pub kind: AssertionKind,
    pub assertion: String,
    /// The family fill an oracle assertion is about, if any.
    pub subject: Option<String>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub anchor: String,
    pub summary: String,
    pub version: String,
    pub elapsed_ms: u64,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.records.iter().any(|r| matches!(r.outcome, Outcome::Fail { .. }))
    }

    pub fn count(&self, pick: fn(&Outcome) -> bool) -> usize {
        self.records.iter().filter(|r| pick(&r.outcome)).count()
    }
}

/// The family templates a run instantiates.
pub struct TemplateSet {
    templates: [TwistTemplate; 3],
}

impl TemplateSet {
    pub fn bundled() -> TemplateSet {
        TemplateSet {
            templates: [Section::Two, Section::Three, Section::Four].map(|s| builtin_template(s).clone()),
        }
    }

    /// Reads `section2.tmpl`, `section3.tmpl` and `section4.tmpl` from `dir`.
    pub fn load(dir: &Path) -> Result<TemplateSet, DiagramError> {
        let read = |n: u8| TwistTemplate::load(&dir.join(format!("section{n}.tmpl")));
        Ok(TemplateSet { templates: [read(2)?, read(3)?, read(4)?] })
    }

    pub fn get(&self, section: Section) -> &TwistTemplate {
        &self.templates[section.number() as usize - 2]
    }
}

/// Options shared by every check in a run.
pub struct RunOptions {
    pub templates: TemplateSet,
    /// Replaces the default `p` range of parametrized checks.
    pub p_range: Option<RangeInclusive<i64>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { templates: TemplateSet::bundled(), p_range: None }
    }
}

/// Assertion collector for one parameter value of one check.
pub struct Ctx<'a> {
    spec: &'a CheckSpec,
    param: Option<Param>,
    templates: &'a TemplateSet,
    range: RangeInclusive<i64>,
    records: Vec<Record>,
}

impl Ctx<'_> {
    pub(crate) fn p(&self) -> i64 {
        self.param.map(|x| x.value).expect("check is parametrized")
    }

    /// The `p` values of this run, for comparisons across the family.
    pub(crate) fn range(&self) -> RangeInclusive<i64> {
        self.range.clone()
    }

    fn push(&mut self, kind: AssertionKind, assertion: String, subject: Option<String>, outcome: Outcome) {
        self.records.push(Record { param: self.param, kind, assertion, subject, outcome });
    }

    pub(crate) fn check(&mut self, kind: AssertionKind, assertion: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail { witness: witness() } };
        self.push(kind, assertion.into(), None, outcome);
    }

    pub(crate) fn equal<T: PartialEq + std::fmt::Display>(
        &mut self,
        kind: AssertionKind,
        assertion: impl Into<String>,
        got: T,
        want: T,
    ) {
        let ok = got == want;
        self.check(kind, assertion, ok, || format!("got {got}, expected {want}"));
    }

    /// Records an assertion computed from a family diagram. The inner
    /// `Err` is a mismatch witness; the outer one a diagram failure.
    pub(crate) fn diagram(
        &mut self,
        kind: AssertionKind,
        assertion: impl Into<String>,
        subject: String,
        result: Result<Result<(), String>, DiagramError>,
    ) {
        let outcome = match result {
            Ok(Ok(())) => Outcome::Pass,
            Ok(Err(w)) => Outcome::Fail { witness: w },
            Err(DiagramError::OverBudget(n, b)) if self.spec.oracle == OraclePolicy::SkipIfOverBudget => {
                Outcome::Skipped { reason: format!("oracle skipped: {n} crossings over budget {b}") }
            }
            Err(e) => Outcome::Fail { witness: e.to_string() },
        };
        self.push(kind, assertion.into(), Some(subject), outcome);
    }

    pub(crate) fn template(&self, section: Section) -> &TwistTemplate {
        self.templates.get(section)
    }

    /// Determinant of a closed family instance, or the reason it is
    /// unavailable.
    pub(crate) fn family_det(&self, section: Section, p: i64, fills: &Fills) -> Result<u64, DiagramError> {
        let inst = instantiate(self.template(section), p, fills)?;
        let n = inst.diagram.crossings().len();
        if n > CROSSING_BUDGET {
            return Err(DiagramError::OverBudget(n, CROSSING_BUDGET));
        }
        determinant(&inst.diagram)
    }
}

pub fn fills_text(fills: &Fills) -> String {
    if fills.is_empty() {
        return "unfilled".into();
    }
    fills.iter().map(|(l, f)| format!("{l}={f}")).collect::<Vec<_>>().join(",")
}

fn p_range(spec: &CheckSpec, opts: &RunOptions) -> RangeInclusive<i64> {
    match (&opts.p_range, &spec.range) {
        (Some(r), _) | (None, ParamRange::P(r)) => r.clone(),
        _ => 2..=20,
    }
}

fn params(spec: &CheckSpec, opts: &RunOptions) -> Vec<Option<Param>> {
    match &spec.range {
        ParamRange::None => vec![None],
        ParamRange::P(_) => p_range(spec, opts).map(|value| Some(Param { name: 'p', value })).collect(),
        ParamRange::K(r) => r.clone().map(|value| Some(Param { name: 'k', value })).collect(),
    }
}

pub fn run_check(spec: &CheckSpec, opts: &RunOptions) -> VerificationReport {
    let start = Instant::now();
    let range = p_range(spec, opts);
    let records = params(spec, opts)
        .into_par_iter()
        .map(|param| {
            let mut ctx = Ctx { spec, param, templates: &opts.templates, range: range.clone(), records: Vec::new() };
            (spec.run)(&mut ctx);
            ctx.records
        })
        .collect::<Vec<_>>()
        .concat();
    VerificationReport {
        check: spec.id.to_string(),
        anchor: spec.anchor.to_string(),
        summary: spec.summary.to_string(),
        version: VERSION.to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        records,
    }
}

/// Checks selected by an id: `all`, an exact id, or a prefix ending at
/// `(` or `-`, so `L4.1` selects `L4.1(1)` through `L4.1(4)`.
pub fn select(id: &str) -> Vec<&'static CheckSpec> {
    REGISTRY
        .iter()
        .filter(|c| {
            id == "all"
                || c.id == id
                || c.id.strip_prefix(id).is_some_and(|rest| rest.starts_with('(') || rest.starts_with('-'))
        })
        .collect()
}

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}

pub fn run_checks(specs: &[&CheckSpec], opts: &RunOptions) -> Vec<VerificationReport> {
    specs.par_iter().map(|s| run_check(s, opts)).collect()
}
