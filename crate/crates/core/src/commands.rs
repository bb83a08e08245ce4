//! The command-line operations, as library calls returning reports.
//!
//! Errors are usage or input errors. Failed checks are reported through
//! [`Report::pass`].

use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::json;

use crate::duality::{koszul_report, quadratic_dual, CobarOptions};
use crate::operad::io::{from_json, to_json};
use crate::operad::presets::{preset, Preset};
use crate::operad::{Operad, Presentation};
use crate::pdspace::{verify, BuildOptions, ComplexJson, Mutation, PdAlgebra, PdFile, PdReport, SimplicialComplex};
use crate::report::{Record, Report};
use crate::trees::Signature;
use crate::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn timed(mut r: Report, start: Instant) -> Report {
    r.timing.elapsed_ms = start.elapsed().as_millis();
    r
}

pub enum Source<'a> {
    Preset(Preset),
    File(&'a Path),
}

fn presentation(src: &Source) -> Result<Presentation> {
    match src {
        Source::Preset(p) => Ok(preset(*p)),
        Source::File(path) => from_json(&read(path)?),
    }
}

pub fn cmd_koszul(command: Vec<String>, src: &Source, max_arity: usize, hat: bool) -> Result<Report> {
    let start = Instant::now();
    if max_arity < 2 {
        return Err(Error::Parse("--max-arity must be at least 2".into()));
    }
    let p = presentation(src)?;
    let k = koszul_report(&p, max_arity, hat, CobarOptions::default())?;
    let mut r = Report::new(command);
    for e in &k.entries {
        let expected: Vec<usize> = e.degrees.iter().map(|&d| if d == 0 { e.target } else { 0 }).collect();
        r.push(Record::new("cobar_homology", &e.signature, format!("{expected:?}"), format!("{:?}", e.homology), e.pass));
    }
    let h0: Vec<usize> = k
        .entries
        .iter()
        .map(|e| e.degrees.iter().zip(&e.homology).filter(|(d, _)| **d == 0).map(|(_, h)| *h).sum())
        .collect();
    r.detail = json!({ "operad": k.operad, "dual": k.dual, "hat": hat, "h0": h0, "entries": k.entries });
    Ok(timed(r, start))
}

fn uncolored_dims(p: &Presentation, max: usize) -> Result<Option<Vec<usize>>> {
    if p.colors().len() != 1 {
        return Ok(None);
    }
    let op = Arc::new(Operad::new(p.clone())?);
    Ok(Some((2..=max).map(|n| op.dim(&Signature::uncolored(n))).collect()))
}

pub fn cmd_dual(command: Vec<String>, input: &Path, out: &Path) -> Result<Report> {
    let start = Instant::now();
    let p = from_json(&read(input)?)?;
    let dual = quadratic_dual(&p)?;
    fs::write(out, to_json(&dual.presentation)?)?;
    let mut r = Report::new(command);
    for b in dual.summary() {
        r.push(Record::compare("complement", &b.signature, b.ambient, b.relations + b.dual_relations));
    }
    let dims = uncolored_dims(&dual.presentation, 4)?;
    if let Some(orig) = uncolored_dims(&p, 4)? {
        let double = quadratic_dual(&dual.presentation)?.presentation;
        let back = uncolored_dims(&double, 4)?.unwrap_or_default();
        r.push(Record::compare("double_dual_dims", "n<=4", format!("{orig:?}"), format!("{back:?}")));
    }
    r.detail = json!({ "dual": dual.presentation.name, "blocks": dual.summary(), "dims": dims });
    Ok(timed(r, start))
}

fn pd_records(r: &mut Report, v: &PdReport) {
    for c in &v.checks {
        let key = c.order.map_or("-".to_string(), |o| format!("order {o}"));
        let actual = match (&c.detail, c.pass) {
            (_, true) => "pass".to_string(),
            (Some(d), false) => format!("fail: {d}"),
            (None, false) => "fail".to_string(),
        };
        r.push(Record::new(&c.name, key, "pass", actual, c.pass));
    }
    if !v.locality_violations.is_empty() {
        r.push(Record::new("locality_violations", "-", 0, v.locality_violations.len(), false));
    }
}

pub fn parse_mutation(s: &str) -> Result<Mutation> {
    match s {
        "sign" => Ok(Mutation::CorruptSign),
        "skip" => Ok(Mutation::SkipCorrection(3)),
        "perturb" => Ok(Mutation::PerturbCoefficient),
        _ => Err(Error::Parse(format!("unknown mutation {s:?} (sign, skip, perturb)"))),
    }
}

pub fn cmd_pd_build(command: Vec<String>, complex: &Path, order: usize, out: &Path, mutation: Option<Mutation>) -> Result<Report> {
    let start = Instant::now();
    if order == 0 {
        return Err(Error::Parse("--order must be at least 1".into()));
    }
    let cj: ComplexJson = serde_json::from_str(&read(complex)?)?;
    let c = SimplicialComplex::from_json(&cj)?;
    let built = PdAlgebra::new(c, order).build(&BuildOptions { order, mutation })?;
    let file = PdFile::from_structure(&built);
    fs::write(out, serde_json::to_string_pretty(&file)?)?;
    let v = verify(&file)?;
    let mut r = Report::new(command);
    pd_records(&mut r, &v);
    r.detail = serde_json::to_value(&v)?;
    Ok(timed(r, start))
}

pub fn cmd_pd_verify(command: Vec<String>, input: &Path) -> Result<Report> {
    let start = Instant::now();
    let file: PdFile = serde_json::from_str(&read(input)?)?;
    let v = verify(&file)?;
    let mut r = Report::new(command);
    pd_records(&mut r, &v);
    r.detail = serde_json::to_value(&v)?;
    Ok(timed(r, start))
}
