//! A finite generic filter through `ℙ` and the space it describes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

use crate::report::{Check, Report};
use crate::topology::cond::TopCondition;
use crate::topology::hierarchy::TopologyHierarchy;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DenseSet {
    /// `{q : (γ, μ) ∈ x_q}`
    Total { gamma: usize, mu: usize },
    /// `{q : ∃μ q(γ,μ) ≠ q(δ,μ)}`
    Separate { gamma: usize, delta: usize },
}

impl DenseSet {
    pub fn contains(&self, q: &TopCondition, colors: usize) -> bool {
        match *self {
            DenseSet::Total { gamma, mu } => q.get(gamma, mu).is_some(),
            DenseSet::Separate { gamma, delta } => (0..colors)
                .any(|mu| matches!((q.get(gamma, mu), q.get(delta, mu)), (Some(a), Some(b)) if a != b)),
        }
    }
}

/// Separation sets for every pair, then totality sets for every cell.
pub fn default_dense_sets(h: &TopologyHierarchy) -> Vec<DenseSet> {
    let r = h.rect();
    let mut v = Vec::new();
    for gamma in 0..r.points {
        for delta in gamma + 1..r.points {
            v.push(DenseSet::Separate { gamma, delta });
        }
    }
    for gamma in 0..r.points {
        for mu in 0..r.colors {
            v.push(DenseSet::Total { gamma, mu });
        }
    }
    v
}

#[derive(Clone, Debug)]
pub struct GenericConfig {
    pub start: TopCondition,
    pub sets: Vec<DenseSet>,
    /// `None` takes the least extension; otherwise ties are broken by a seeded shuffle.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericSpace {
    /// The union of the filter, i.e. its least element.
    pub condition: TopCondition,
    /// `F(γ, μ)` by point, then color.
    pub coloring: Vec<Vec<Option<bool>>>,
    /// `A^i_ν`, keyed by `"ν,i"`.
    pub subbasis: BTreeMap<String, Vec<usize>>,
    /// The nonempty `B_ε` with `dom(ε)` all colors: the points grouped by
    /// their full color vectors.
    pub atoms: Vec<Vec<usize>>,
    /// The extension taken for each dense set, in order.
    pub steps: Vec<TopCondition>,
    pub report: Report,
}

pub fn generic_space(h: &TopologyHierarchy, cfg: &GenericConfig) -> Result<GenericSpace> {
    if !h.in_forcing(&cfg.start) {
        return Err(Error::Seed(format!("start condition {:?} is not in ℙ", cfg.start)));
    }
    let rect = h.rect();
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut budget = SEARCH_BUDGET;
    let steps = meet_from(h, &cfg.sets, cfg.start, Vec::new(), &mut rng, &mut budget).ok_or_else(|| {
        let first = cfg.sets.iter().find(|d| least_extensions(h, &cfg.start, d).is_empty() && !d.contains(&cfg.start, rect.colors));
        Error::Seed(format!(
            "no filter below {:?} meets all {} sets (first unmeetable alone: {first:?}; searched {} nodes)",
            cfg.start,
            cfg.sets.len(),
            SEARCH_BUDGET - budget
        ))
    })?;
    let p = steps.last().copied().unwrap_or(cfg.start);

    let coloring: Vec<Vec<Option<bool>>> =
        (0..rect.points).map(|g| (0..rect.colors).map(|mu| p.get(g, mu)).collect()).collect();
    let mut subbasis = BTreeMap::new();
    for mu in 0..rect.colors {
        for i in [false, true] {
            let pts = (0..rect.points).filter(|&g| coloring[g][mu] == Some(i)).collect();
            subbasis.insert(format!("{mu},{}", i as u8), pts);
        }
    }
    let mut groups: BTreeMap<&Vec<Option<bool>>, Vec<usize>> = BTreeMap::new();
    for (g, row) in coloring.iter().enumerate() {
        groups.entry(row).or_default().push(g);
    }
    let atoms = groups.into_values().collect();

    let mut report = Report::new("generic-space");
    let undetermined: Vec<[usize; 2]> = (0..rect.points)
        .flat_map(|g| (0..rect.colors).map(move |mu| [g, mu]))
        .filter(|&[g, mu]| coloring[g][mu].is_none())
        .collect();
    report.push(Check::from_failure(
        "F total",
        (!undetermined.is_empty()).then(|| json!({"undetermined": undetermined})),
        json!({"cells": rect.cells()}),
    ));
    let mut unseparated = None;
    'o: for g in 0..rect.points {
        for d in g + 1..rect.points {
            if !(0..rect.colors).any(|mu| matches!((coloring[g][mu], coloring[d][mu]), (Some(a), Some(b)) if a != b)) {
                unseparated = Some(json!({"gamma": g, "delta": d}));
                break 'o;
            }
        }
    }
    report.push(Check::from_failure("Hausdorff", unseparated, json!({"points": rect.points})));
    report.push(remark_2_at(h, &cfg.start));
    Ok(GenericSpace { condition: p, coloring, subbasis, atoms, steps, report })
}

/// Nodes the backtracking search may visit before giving up.
pub const SEARCH_BUDGET: u64 = 200_000;

/// Meets `sets` in order by least extensions, backtracking when a later set
/// cannot be met below an earlier choice.  `steps[i]` is the condition after
/// set `i`.
fn meet_from(
    h: &TopologyHierarchy,
    sets: &[DenseSet],
    p: TopCondition,
    steps: Vec<TopCondition>,
    rng: &mut Option<ChaCha8Rng>,
    budget: &mut u64,
) -> Option<Vec<TopCondition>> {
    let Some((d, rest)) = sets.split_first() else { return Some(steps) };
    if d.contains(&p, h.rect().colors) {
        let mut next = steps;
        next.push(p);
        return meet_from(h, rest, p, next, rng, budget);
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
        if let Some(done) = meet_from(h, rest, q, next, rng, budget) {
            return Some(done);
        }
    }
    None
}

/// The extensions `q ≤ p` in `ℙ ∩ D` of least size.
fn least_extensions(h: &TopologyHierarchy, p: &TopCondition, d: &DenseSet) -> Vec<TopCondition> {
    let colors = h.rect().colors;
    let mut best: Vec<TopCondition> = Vec::new();
    for q in h.forcing() {
        if !q.leq(p) || !d.contains(q, colors) {
            continue;
        }
        match best.first().map(|b| b.len().cmp(&q.len())) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => best.push(*q),
            _ => best = vec![*q],
        }
    }
    best
}

/// Cells in colors whose block offset `p` never uses can still take both values.
fn remark_2_at(h: &TopologyHierarchy, p: &TopCondition) -> Check {
    let rect = h.rect();
    let b = h.block();
    let used: Vec<usize> = p.used_colors().into_iter().map(|mu| mu % b).collect();
    let mut open = 0usize;
    for c in 0..rect.cells() {
        let (g, mu) = rect.coords(c);
        if used.contains(&(mu % b)) {
            continue;
        }
        for v in [false, true] {
            let q = p.with(g, mu, v);
            if !h.forcing().iter().any(|r| r.leq(&q)) {
                return Check::fail("Remark 2", json!({"start": p, "cell": [g, mu], "value": v}));
            }
        }
        open += 1;
    }
    Check::pass("Remark 2", json!({"open_cells": open, "used_offsets": used}))
}
