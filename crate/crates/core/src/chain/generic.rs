//! A finite generic filter through the chain forcing and the chain it adds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

use crate::chain::cond::{chain_leq, ChainCondition};
use crate::chain::hierarchy::ChainHierarchy;
use crate::report::{Check, Report};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChainDense {
    /// `D_α = {p : α ∈ a_p}`
    Column { alpha: usize },
    /// `D′_β = {p : β ∈ b_p}`
    Row { beta: usize },
    /// `D″_{η,α,β} = {p : ∃γ ≥ η p(β,γ)=0, p(α,γ)=1}`, `β < α`
    Split { eta: usize, alpha: usize, beta: usize },
}

impl ChainDense {
    pub fn contains(&self, p: &ChainCondition) -> bool {
        match *self {
            ChainDense::Column { alpha } => p.has_col(alpha),
            ChainDense::Row { beta } => p.has_row(beta),
            ChainDense::Split { eta, alpha, beta } => {
                p.rows().into_iter().any(|g| g >= eta && p.get(beta, g) == Some(false) && p.get(alpha, g) == Some(true))
            }
        }
    }

    /// The cells a least member below `p` must add, as `(cols, rows)` masks
    /// for each way of meeting the set.
    fn targets(&self, rows: usize) -> Vec<(u8, u8)> {
        match *self {
            ChainDense::Column { alpha } => vec![(1 << alpha, 0)],
            ChainDense::Row { beta } => vec![(0, 1 << beta)],
            ChainDense::Split { eta, alpha, beta } => (eta..rows).map(|g| ((1 << alpha) | (1 << beta), 1 << g)).collect(),
        }
    }

    fn in_range(&self, cols: usize, rows: usize) -> bool {
        match *self {
            ChainDense::Column { alpha } => alpha < cols,
            ChainDense::Row { beta } => beta < rows,
            ChainDense::Split { eta, alpha, beta } => beta < alpha && alpha < cols && eta < rows,
        }
    }
}

/// `D″_{0,α,β}` for every pair, then every `D_α`, then every `D′_β`.
///
/// At finite scale the rows run out, so only `η = 0` is listed and the
/// splitting sets go first while rows are still free.
pub fn default_chain_sets(h: &ChainHierarchy) -> Vec<ChainDense> {
    let (w, rows) = (h.width(), h.height());
    let mut v = Vec::new();
    if rows > 0 {
        for alpha in 0..w {
            for beta in 0..alpha {
                v.push(ChainDense::Split { eta: 0, alpha, beta });
            }
        }
    }
    v.extend((0..w).map(|alpha| ChainDense::Column { alpha }));
    v.extend((0..rows).map(|beta| ChainDense::Row { beta }));
    v
}

#[derive(Clone, Debug)]
pub struct ChainGenericConfig {
    pub start: ChainCondition,
    pub sets: Vec<ChainDense>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSummary {
    pub beta: usize,
    pub alpha: usize,
    /// `X_β − X_α`
    pub beta_minus_alpha: Vec<usize>,
    /// `X_α − X_β`
    pub alpha_minus_beta: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericChain {
    /// The least element of the filter.
    pub condition: ChainCondition,
    /// `X_α = {γ : F(α,γ) = 1}` for every column `α`.
    pub chain: BTreeMap<usize, Vec<usize>>,
    pub pairs: Vec<PairSummary>,
    pub steps: Vec<ChainCondition>,
    pub report: Report,
}

/// Some `q ≤ p` in `ℙ ∩ D`, or `None`; searched over the least rectangles
/// that can meet `D`.
pub fn extension_into(h: &ChainHierarchy, p: &ChainCondition, d: &ChainDense) -> Option<ChainCondition> {
    if d.contains(p) {
        return Some(*p);
    }
    least_extensions(h, p, d).into_iter().next()
}

fn least_extensions(h: &ChainHierarchy, p: &ChainCondition, d: &ChainDense) -> Vec<ChainCondition> {
    let targets = d.targets(h.height());
    let mut best: Vec<ChainCondition> = Vec::new();
    for q in h.forcing() {
        if !d.contains(q) || !chain_leq(q, p) {
            continue;
        }
        // only the rectangles the set forces
        if !targets.iter().any(|&(c, r)| q.col_mask() == p.col_mask() | c && q.row_mask() == p.row_mask() | r) {
            continue;
        }
        match best.first().map(|b| b.weight().cmp(&q.weight())) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => best.push(*q),
            _ => best = vec![*q],
        }
    }
    best
}

/// For each `D` the first `p ∈ ℙ` with no extension into `D`.
pub fn density_report(h: &ChainHierarchy, sets: &[ChainDense], name: &str) -> Check {
    let mut checked = 0usize;
    for d in sets {
        for p in h.forcing() {
            checked += 1;
            if extension_into(h, p, d).is_none() {
                return Check::fail(name, json!({"set": d, "p": p, "checked": checked}));
            }
        }
    }
    Check::pass(name, json!({"sets": sets.len(), "conditions": h.forcing().len()}))
}

/// Nodes the backtracking search may visit before giving up.
pub const SEARCH_BUDGET: u64 = 200_000;

/// Meets `sets` in order, taking least extensions; backtracks when a later
/// set cannot be met below an earlier choice.
fn meet_from(
    h: &ChainHierarchy,
    sets: &[ChainDense],
    steps: Vec<ChainCondition>,
    rng: &mut Option<ChaCha8Rng>,
    budget: &mut u64,
) -> Option<Vec<ChainCondition>> {
    let Some((d, rest)) = sets.split_first() else { return Some(steps) };
    let p = *steps.last().expect("start");
    if d.contains(&p) {
        return meet_from(h, rest, steps, rng, budget);
    }
    let mut cands = least_extensions(h, &p, d);
    cands.sort_unstable();
    if let Some(r) = rng.as_mut() {
        cands.shuffle(r);
    }
    for q in cands {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let mut next = steps.clone();
        next.push(q);
        if let Some(done) = meet_from(h, rest, next, rng, budget) {
            return Some(done);
        }
    }
    None
}

pub fn generic_chain(h: &ChainHierarchy, cfg: &ChainGenericConfig) -> Result<GenericChain> {
    if !h.in_forcing(&cfg.start) {
        return Err(Error::Seed(format!("start condition {:?} is not in ℙ", cfg.start)));
    }
    let (w, rows) = (h.width(), h.height());
    if let Some(d) = cfg.sets.iter().find(|d| !d.in_range(w, rows)) {
        return Err(Error::Seed(format!("{d:?} lies outside {w} columns × {rows} rows")));
    }
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut budget = SEARCH_BUDGET;
    let steps = meet_from(h, &cfg.sets, vec![cfg.start], &mut rng, &mut budget).ok_or_else(|| {
        Error::Seed(format!("no filter below {:?} meets all {} sets (searched {} nodes)", cfg.start, cfg.sets.len(), SEARCH_BUDGET - budget))
    })?;
    let p = *steps.last().expect("start");

    // first step at which each column and row is present
    let entered = |test: &dyn Fn(&ChainCondition) -> bool| steps.iter().position(test);
    let col_in: Vec<Option<usize>> = (0..w).map(|c| entered(&|q| q.has_col(c))).collect();
    let row_in: Vec<Option<usize>> = (0..rows).map(|r| entered(&|q| q.has_row(r))).collect();

    let chain: BTreeMap<usize, Vec<usize>> =
        (0..w).map(|a| (a, (0..rows).filter(|&g| p.get(a, g) == Some(true)).collect())).collect();
    let mut pairs = Vec::new();
    for alpha in 0..w {
        for beta in 0..alpha {
            let diff = |x: usize, y: usize| chain[&x].iter().filter(|g| !chain[&y].contains(g)).copied().collect();
            pairs.push(PairSummary { beta, alpha, beta_minus_alpha: diff(beta, alpha), alpha_minus_beta: diff(alpha, beta) });
        }
    }

    let mut report = Report::new("generic-chain");
    let unmet: Vec<&ChainDense> = cfg.sets.iter().filter(|d| !d.contains(&p)).collect();
    report.push(Check::from_failure(
        "dense sets met",
        unmet.first().map(|d| json!({"set": d})),
        json!({"sets": cfg.sets.len(), "steps": steps.len() - 1}),
    ));
    let full = p.col_mask().count_ones() as usize == w && p.row_mask().count_ones() as usize == rows;
    let lists_all = (0..w).all(|alpha| cfg.sets.contains(&ChainDense::Column { alpha }))
        && (0..rows).all(|beta| cfg.sets.contains(&ChainDense::Row { beta }));
    if lists_all {
        report.push(Check::from_failure(
            "F total",
            (!full).then(|| json!({"a": p.cols(), "b": p.rows()})),
            json!({"cells": w * rows}),
        ));
    }
    // rows that arrive after both columns obey the order
    let mut bad = None;
    let mut early_diff = None;
    for pr in &pairs {
        let both = match (col_in[pr.beta], col_in[pr.alpha]) {
            (Some(x), Some(y)) => x.max(y),
            _ => continue,
        };
        for g in 0..rows {
            let Some(rg) = row_in[g] else { continue };
            if rg > both && p.get(pr.beta, g) == Some(true) && p.get(pr.alpha, g) == Some(false) {
                bad.get_or_insert(json!({"beta": pr.beta, "alpha": pr.alpha, "row": g}));
            }
        }
        for &g in &pr.beta_minus_alpha {
            if row_in[g].is_some_and(|rg| rg > both) {
                early_diff.get_or_insert(json!({"beta": pr.beta, "alpha": pr.alpha, "row": g}));
            }
        }
    }
    report.push(Check::from_failure("order constraint", bad, json!({"pairs": pairs.len()})));
    report.push(Check::from_failure(
        "X_β − X_α forced before both columns",
        early_diff,
        json!({"pairs": pairs.len()}),
    ));
    let mut missing = None;
    let mut witnessed = 0usize;
    for d in &cfg.sets {
        if let ChainDense::Split { alpha, beta, .. } = *d {
            if pairs.iter().any(|pr| pr.alpha == alpha && pr.beta == beta && !pr.alpha_minus_beta.is_empty()) {
                witnessed += 1;
            } else {
                missing.get_or_insert(json!({"alpha": alpha, "beta": beta}));
            }
        }
    }
    report.push(Check::from_failure("X_α − X_β nonempty", missing, json!({"split_sets": witnessed})));
    Ok(GenericChain { condition: p, chain, pairs, steps, report })
}
