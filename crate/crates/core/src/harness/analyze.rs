//! Single-group analysis for the `analyze` command.

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::matgroup::MatGroup;
use crate::numtheory::{bound_f, bound_g, bound_h, Bound};
use crate::perm::PermGroup;
use crate::ratio::ExactRatio;

use super::corpus::{affine_image_in_range, mat_facts, perm_facts, PermFacts};
use super::report::SCHEMA;
use super::specfile::{read_spec, GroupSpec};

/// A threshold compared with one computed quantity.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdNote {
    pub threshold: String,
    pub quantity: &'static str,
    pub bound: Bound,
    /// `equality`, `above`, `below`, or `undetermined` when an enclosure straddles the value.
    pub annotation: &'static str,
}

fn note(threshold: String, quantity: &'static str, bound: Bound, value: &ExactRatio) -> ThresholdNote {
    let annotation = match bound.exact() {
        Some(b) if b == value => "equality",
        _ => match bound.is_below_or_equal(value) {
            Some(true) => "above",
            Some(false) => "below",
            None => "undetermined",
        },
    };
    ThresholdNote { threshold, quantity, bound, annotation }
}

#[derive(Debug, Clone, Serialize)]
pub struct PermAnalysis {
    pub orbits: usize,
    /// Only the identity fixes a point.
    pub semiregular: bool,
    #[serde(flatten)]
    pub facts: PermFacts,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatAnalysis {
    pub p: u64,
    pub f: u32,
    pub dim: usize,
    pub vectors: u64,
    pub linear: bool,
    pub irreducible: Option<bool>,
    pub semiregular_nonzero: bool,
    pub alpha: ExactRatio,
    pub eta: ExactRatio,
    pub delta_affine: ExactRatio,
    pub a_index: u64,
    /// The affine permutation image, when `|V|·|G|` is small enough.
    pub affine_image: Option<PermAnalysis>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub name: Option<String>,
    pub kind: &'static str,
    pub order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatAnalysis>,
    pub notes: Vec<String>,
    pub thresholds: Vec<ThresholdNote>,
}

fn perm_analysis(g: &PermGroup, cap: usize) -> Result<PermAnalysis> {
    let facts = perm_facts(g, cap)?;
    let identity_only = facts.fixed_point_histogram[0] + 1 == facts.order;
    Ok(PermAnalysis { orbits: g.orbits().len(), semiregular: identity_only, facts })
}

fn delta_thresholds(n: u64, delta: &ExactRatio, out: &mut Vec<ThresholdNote>) -> Result<()> {
    out.push(note(format!("1/n, n = {n}"), "delta", Bound::Exact { value: ExactRatio::new(1, n) }, delta));
    out.push(note(format!("2/n, n = {n}"), "delta", Bound::Exact { value: ExactRatio::new(2, n) }, delta));
    out.push(note(format!("g(n), n = {n}"), "delta", bound_g(n)?, delta));
    out.push(note(format!("f(n), n = {n}"), "delta", bound_f(n)?, delta));
    Ok(())
}

pub fn analyze_perm(name: Option<String>, group: PermGroup, cap: usize) -> Result<AnalysisReport> {
    let g = group.enumerated(cap)?;
    let pa = perm_analysis(&g, cap)?;
    let mut notes = Vec::new();
    let mut thresholds = Vec::new();
    match &pa.facts.delta {
        Some(d) if pa.facts.degree >= 2 => delta_thresholds(pa.facts.degree as u64, d, &mut thresholds)?,
        Some(_) => {}
        None => notes.push("delta is undefined: the group is not transitive".into()),
    }
    Ok(AnalysisReport {
        schema: SCHEMA,
        name,
        kind: "perm",
        order: pa.facts.order,
        permutation: Some(pa),
        matrix: None,
        notes,
        thresholds,
    })
}

pub fn analyze_mat(name: Option<String>, group: MatGroup, cap: usize) -> Result<AnalysisReport> {
    let g = group.enumerated(cap)?;
    let facts = mat_facts(&g, false, cap)?;
    let s = &facts.stats;
    let mut notes = Vec::new();
    let affine_image = if affine_image_in_range(&g) {
        Some(perm_analysis(&g.affine_to_perm()?.enumerated(cap)?, cap)?)
    } else {
        notes.push("affine permutation image not built: |V|·|G| exceeds 10^6".into());
        None
    };
    let n = s.vector_count;
    let mut thresholds = vec![
        note(format!("h(n), n = {n}"), "alpha", bound_h(n)?, &s.alpha),
        note(format!("g(n), n = {n}"), "delta_affine", bound_g(n)?, &s.delta_affine),
        note(format!("f(n), n = {n}"), "delta_affine", bound_f(n)?, &s.delta_affine),
    ];
    thresholds.push(note(format!("1/n, n = {n}"), "delta_affine", Bound::Exact { value: ExactRatio::new(1, n) }, &s.delta_affine));
    let ctx = g.ctx();
    Ok(AnalysisReport {
        schema: SCHEMA,
        name,
        kind: "matrix",
        order: s.order,
        permutation: None,
        matrix: Some(MatAnalysis {
            p: ctx.p(),
            f: ctx.f(),
            dim: g.dim(),
            vectors: n,
            linear: g.is_linear(),
            irreducible: facts.irreducible,
            semiregular_nonzero: s.semiregular_nonzero,
            alpha: s.alpha.clone(),
            eta: s.eta.clone(),
            delta_affine: s.delta_affine.clone(),
            a_index: s.a_index,
            affine_image,
        }),
        notes,
        thresholds,
    })
}

pub fn analyze_spec(spec: GroupSpec, cap: usize) -> Result<AnalysisReport> {
    match spec {
        GroupSpec::Perm { name, group } => analyze_perm(name, group, cap),
        GroupSpec::Matrix { name, group } => analyze_mat(name, group, cap),
    }
}

pub fn analyze(path: &Path, cap: usize) -> Result<AnalysisReport> {
    analyze_spec(read_spec(path)?, cap)
}
