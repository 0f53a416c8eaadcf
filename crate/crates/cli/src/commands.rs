//! Command implementations. Each returns the text to print and the exit code.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use rho_lab_core::parse::{parse_exp_set, parse_group_spec};
use rho_lab_core::recognize::Outcome;
use rho_lab_core::rho::{closed_form, rho_enumerative};
use rho_lab_core::{
    Builder, CatalogStore, Completeness, ExpSet, FactoredInt, Family, GroupSpec, OrderSpectrum, RecognitionReport,
    RecognizeOptions, Recognizer,
};
use serde::Serialize;

use crate::cache::SpectrumCache;
use crate::verify::{Suite, SuiteReport, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;

/// Rendered output plus the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    /// Normalizes `text` to end with exactly one newline.
    pub fn new(text: impl Into<String>, code: i32) -> Self {
        let mut text = text.into();
        let trimmed = text.trim_end_matches('\n').len();
        text.truncate(trimmed);
        text.push('\n');
        Self { text, code }
    }

    fn json<T: Serialize>(value: &T, code: i32) -> Result<Self> {
        Ok(Self::new(serde_json::to_string_pretty(value)?, code))
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    parse_group_spec(text).map_err(|d| anyhow!("cannot parse group spec '{text}' {d}"))
}

/// Parses an exponent set; duplicate values are reported on stderr.
pub fn parse_target(text: &str) -> Result<ExpSet> {
    let parsed = parse_exp_set(text).map_err(|d| anyhow!("cannot parse exponent set '{text}' {d}"))?;
    for w in parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.set)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComputeOptions {
    pub json: bool,
    pub closed_form: bool,
    pub no_cache: bool,
    /// Recompute even on a cache hit and fail if the two disagree.
    pub compare_cache: bool,
}

#[derive(Serialize)]
struct ClosedFormCheck {
    formula: Option<&'static str>,
    rho: Option<FactoredInt>,
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct ComputeReport {
    spec: String,
    order: u64,
    rho: FactoredInt,
    exp: Vec<u64>,
    spectrum: OrderSpectrum,
    cached: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedFormCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

/// Spectrum through the cache: `(spectrum, served from cache)`.
fn spectrum_of(
    builder: &Builder,
    spec: &GroupSpec,
    cache: Option<&SpectrumCache>,
    compare: bool,
) -> Result<(OrderSpectrum, bool)> {
    let fresh = || -> Result<OrderSpectrum> { Ok(builder.build(spec)?.order_spectrum()) };
    let Some(cache) = cache else { return Ok((fresh()?, false)) };
    if let Some(hit) = cache.get(spec) {
        if compare {
            let recomputed = fresh()?;
            anyhow::ensure!(recomputed == hit, "cached spectrum of {spec} differs from recomputation");
        }
        return Ok((hit, true));
    }
    let spectrum = fresh()?;
    if let Err(e) = cache.put(spec, &spectrum) {
        eprintln!("warning: cache not written: {e:#}");
    }
    Ok((spectrum, false))
}

pub fn compute(
    builder: &Builder,
    spec_text: &str,
    opts: ComputeOptions,
    cache: Option<&SpectrumCache>,
) -> Result<Output> {
    let spec = parse_spec(spec_text)?;
    spec.validate()?;
    let cache = if opts.no_cache { None } else { cache };
    let (spectrum, cached) = spectrum_of(builder, &spec, cache, opts.compare_cache)?;
    let rho = rho_enumerative(&spectrum)?;
    let exp: Vec<u64> = rho.exp_set().into_iter().collect();
    let mut code = EXIT_OK;
    let closed = opts.closed_form.then(|| match closed_form(&spec) {
        None => Ok(ClosedFormCheck { formula: None, rho: None, agrees: None }),
        Some(value) => value.map(|(value, form)| {
            let agrees = value == rho;
            if !agrees {
                code = EXIT_FAILURE;
            }
            ClosedFormCheck { formula: Some(form.as_str()), rho: Some(value), agrees: Some(agrees) }
        }),
    });
    let closed = closed.transpose()?;
    let note = exp.is_empty().then(|| "the exponent set is empty: rho = 1 only for the trivial group".to_string());
    let report = ComputeReport {
        spec: spec.to_string(),
        order: spectrum.group_order(),
        rho,
        exp,
        spectrum,
        cached,
        closed_form: closed,
        note,
    };
    if opts.json {
        return Output::json(&report, code);
    }
    let mut out = format!(
        "spec = {}\norder = {}\nrho = {}\nexp = {}\nspectrum = {}\n",
        report.spec,
        report.order,
        report.rho,
        render_values(&report.exp),
        report.spectrum
    );
    if let Some(c) = &report.closed_form {
        match (c.formula, &c.rho, c.agrees) {
            (Some(f), Some(r), Some(true)) => out.push_str(&format!("closed form ({f}) = {r}: agrees\n")),
            (Some(f), Some(r), _) => out.push_str(&format!("closed form ({f}) = {r}: DISAGREES\n")),
            _ => out.push_str("closed form: none applies to this spec\n"),
        }
    }
    if let Some(n) = &report.note {
        out.push_str(&format!("note: {n}\n"));
    }
    Ok(Output::new(out, code))
}

fn render_values(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Serialize)]
struct RecognizeJson<'a> {
    outcome: &'static str,
    exit_code: i32,
    matched: Vec<&'a str>,
    #[serde(flatten)]
    report: &'a RecognitionReport,
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Matched => "matched",
        Outcome::OnlyUnresolved => "unresolved",
        Outcome::AllEliminated => "all-eliminated",
    }
}

fn render_report(report: &RecognitionReport, json: bool) -> Result<Output> {
    let code = report.outcome().exit_code();
    if json {
        let body = RecognizeJson {
            outcome: outcome_name(report.outcome()),
            exit_code: code,
            matched: report.matched_labels(),
            report,
        };
        return Output::json(&body, code);
    }
    Ok(Output::new(report.render_trace(), code))
}

pub fn recognize(builder: &Builder, target: &str, opts: RecognizeOptions, json: bool) -> Result<Output> {
    let target = parse_target(target)?;
    let report = Recognizer::new(*builder).recognize(&target, &opts)?;
    render_report(&report, json)
}

pub fn family(builder: &Builder, family: &str, opts: RecognizeOptions, json: bool) -> Result<Output> {
    let family: Family = family.parse().map_err(|e| anyhow!("cannot parse family '{family}': {e}"))?;
    let report = Recognizer::new(*builder).recognize_family(&family, &opts)?;
    render_report(&report, json)
}

#[derive(Serialize)]
struct CatalogGroup {
    index: usize,
    label: String,
    spec: GroupSpec,
    rho: FactoredInt,
    exp: Vec<u64>,
}

#[derive(Serialize)]
struct CatalogJson {
    order: u64,
    completeness: Completeness,
    known_count: Option<u64>,
    groups: Vec<CatalogGroup>,
}

pub fn catalog(builder: &Builder, order: u64, json: bool) -> Result<Output> {
    anyhow::ensure!(
        CatalogStore::covers(order),
        "no catalog for order {order}: only squarefree orders and the curated orders are covered"
    );
    let catalog = CatalogStore::new(*builder).catalog(order)?;
    let groups: Vec<CatalogGroup> = catalog
        .entries
        .par_iter()
        .enumerate()
        .map(|(index, e)| CatalogGroup {
            index,
            label: e.label.clone(),
            spec: e.spec.clone(),
            rho: e.rho.clone(),
            exp: e.rho.exp_set().into_iter().collect(),
        })
        .collect();
    let listing = CatalogJson { order, completeness: catalog.completeness, known_count: catalog.known_count, groups };
    if json {
        return Output::json(&listing, EXIT_OK);
    }
    let mut out = format!("order {order}: {} groups, {}\n", listing.groups.len(), listing.completeness.as_str());
    let mut by_set: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for g in &listing.groups {
        *by_set.entry(g.exp.clone()).or_default() += 1;
        let spec = match &g.spec {
            GroupSpec::CatalogRef { .. } => String::new(),
            s if s.to_string() == g.label => String::new(),
            s => format!(" [{s}]"),
        };
        out.push_str(&format!("{:>3}  {}{spec}  exp = {}  rho = {}\n", g.index, g.label, render_values(&g.exp), g.rho));
    }
    let shared = by_set.values().filter(|&&c| c > 1).count();
    out.push_str(&format!("{} distinct exponent sets, {shared} shared by more than one group\n", by_set.len()));
    Ok(Output::new(out, EXIT_OK))
}

pub fn verify(suite: &str, opts: &VerifyOptions, json: bool) -> Result<Output> {
    let suites: Vec<Suite> =
        if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse().context("verify")?] };
    let reports: Vec<SuiteReport> = suites.iter().map(|s| s.run(opts)).collect();
    let code = if reports.iter().all(SuiteReport::passed) { EXIT_OK } else { EXIT_FAILURE };
    if json {
        #[derive(Serialize)]
        struct VerifyJson<'a> {
            passed: bool,
            suites: &'a [SuiteReport],
        }
        return Output::json(&VerifyJson { passed: code == EXIT_OK, suites: &reports }, code);
    }
    let text: String = reports.iter().map(SuiteReport::render).collect();
    Ok(Output::new(text, code))
}
