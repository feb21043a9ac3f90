//! The chain-forcing lemmas as exhaustive checks.

use serde_json::json;

use crate::chain::cond::{all_conditions, bits, chain_leq, ChainCondition};
use crate::chain::generic::{density_report, ChainDense};
use crate::chain::hierarchy::{thinned_membership, ChainHierarchy};
use crate::chain::star::merge_conditions;
use crate::fs::max_antichain;
use crate::report::{Check, Report};
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct ChainScope {
    /// Run the maximum-antichain comparison (exponential; small fixtures only).
    pub antichains: bool,
    pub antichain_cap: u64,
}

impl Default for ChainScope {
    fn default() -> Self {
        ChainScope { antichains: true, antichain_cap: 50_000_000 }
    }
}

pub fn chain_suite(h: &ChainHierarchy, scope: ChainScope) -> Result<Report> {
    let mut rep = Report::new("chain-5.x");
    rep.push(partial_order(h.unthinned()));
    rep.push(lemma_5_1(h)?);
    rep.push(criterion_levels(h));
    for c in lemma_5_2(h)? {
        rep.push(c);
    }
    rep.push(merge_check(h)?);
    rep.push(antichain_family(h)?);
    if scope.antichains {
        rep.push(antichain_contrast(h, scope.antichain_cap));
    }
    let (w, rows) = (h.width(), h.height());
    let cols: Vec<ChainDense> = (0..w).map(|alpha| ChainDense::Column { alpha }).collect();
    let rws: Vec<ChainDense> = (0..rows).map(|beta| ChainDense::Row { beta }).collect();
    let splits = |etas: std::ops::Range<usize>| -> Vec<ChainDense> {
        etas.flat_map(|eta| (0..w).flat_map(move |alpha| (0..alpha).map(move |beta| ChainDense::Split { eta, alpha, beta })))
            .collect()
    };
    rep.push(density_report(h, &cols, "D_α dense"));
    rep.push(density_report(h, &rws, "D′_β dense"));
    rep.push(density_report(h, &splits(0..rows.min(1)), "D″ dense at η = 0"));
    Ok(rep)
}

/// The antichain family `p_β`: `p(0,β) = 1`, `p(1,β) = 0`, one per row.
pub fn p_beta_family(rows: usize) -> Vec<ChainCondition> {
    (0..rows)
        .map(|b| ChainCondition::new(&[0, 1], &[b], &[(0, b, true), (1, b, false)]).expect("two cells"))
        .collect()
}

/// Reflexive, antisymmetric and transitive on `conds`.
pub fn partial_order(conds: &[ChainCondition]) -> Check {
    let n = conds.len();
    let mut ups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in conds.iter().enumerate() {
        if !chain_leq(p, p) {
            return Check::fail("≤ is a partial order", json!({"not_reflexive": p}));
        }
        for (j, q) in conds.iter().enumerate() {
            if i != j && chain_leq(p, q) {
                ups[i].push(j);
            }
        }
    }
    let mut pairs = 0usize;
    for (i, up) in ups.iter().enumerate() {
        for &j in up {
            pairs += 1;
            if ups[j].contains(&i) {
                return Check::fail("≤ is a partial order", json!({"not_antisymmetric": [conds[i], conds[j]]}));
            }
        }
    }
    let mut triples = 0usize;
    for (i, up) in ups.iter().enumerate() {
        for &j in up {
            for &k in &ups[j] {
                triples += 1;
                if k != i && !chain_leq(&conds[i], &conds[k]) {
                    return Check::fail(
                        "≤ is a partial order",
                        json!({"not_transitive": [conds[i], conds[j], conds[k]]}),
                    );
                }
            }
        }
    }
    Check::pass("≤ is a partial order", json!({"conditions": n, "strict_pairs": pairs, "chains_of_three": triples}))
}

/// Monotone rows along every `f` ⟺ membership in the clause-built `ℙ`.
pub fn lemma_5_1(h: &ChainHierarchy) -> Result<Check> {
    let mut members = 0usize;
    for p in h.unthinned() {
        let crit = thinned_membership(p, h.morass())?;
        let built = h.in_forcing(p);
        if crit.is_none() != built {
            return Ok(Check::fail(
                "Lemma 5.1",
                json!({"p": p, "criterion": crit.is_none(), "hierarchy": built, "violation": crit}),
            ));
        }
        members += built as usize;
    }
    Ok(Check::pass("Lemma 5.1", json!({"conditions": h.unthinned().len(), "in_forcing": members})))
}

/// The inductive claim of Lemma 5.1 at each level `γ ≥ 1`.
pub fn criterion_levels(h: &ChainHierarchy) -> Check {
    let m = h.morass();
    let mut sizes = Vec::new();
    for g in 1..=h.height() {
        for p in all_conditions(m.theta(g), g) {
            if h.criterion_at(g, &p) != h.level(g).contains(&p) {
                return Check::fail("Lemma 5.1 at every level", json!({"level": g, "p": p}));
            }
        }
        sizes.push(json!({"level": g, "size": h.level(g).len()}));
    }
    Check::pass("Lemma 5.1 at every level", json!(sizes))
}

/// Lemma 5.2 over every nonempty `Δ`, plus whether the claim's level-by-level
/// fill alone produces the common extension.
pub fn lemma_5_2(h: &ChainHierarchy) -> Result<Vec<Check>> {
    let top = h.height();
    let w = h.width();
    let (mut pairs, mut at_top, mut premise, mut filled) = (0u64, 0u64, 0u64, 0u64);
    let mut misses = 0u64;
    let mut first_miss = None;
    let mut counter = None;
    let mut counters = 0u64;
    for dmask in 1u16..1 << w {
        let delta: Vec<usize> = bits(dmask as u8).collect();
        let members: Vec<&ChainCondition> =
            h.forcing().iter().filter(|p| p.col_mask() & !(dmask as u8) == 0).collect();
        let stars = members.iter().map(|p| h.local_star(p, &delta)).collect::<Result<Vec<_>>>()?;
        let masks: Vec<u32> = stars.iter().map(|s| s.support_mask()).collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                pairs += 1;
                let common = masks[i] & masks[j];
                let alpha = 31 - common.leading_zeros() as usize;
                if alpha == top {
                    at_top += 1;
                    continue;
                }
                let (si, sj) = (&stars[i].values[&alpha], &stars[j].values[&alpha]);
                if h.common_extension(Some(alpha), si, sj).is_none() {
                    continue;
                }
                premise += 1;
                let (p, q) = (members[i], members[j]);
                let by_fill = h.lift_common_extension(&stars[i], &stars[j], alpha);
                if by_fill.is_some() {
                    filled += 1;
                } else if h.compatible(p, q) {
                    misses += 1;
                    first_miss.get_or_insert_with(|| json!({"delta": delta, "p": p, "q": q, "alpha": alpha}));
                } else {
                    counters += 1;
                    counter.get_or_insert_with(|| json!({"delta": delta, "p": p, "q": q, "alpha": alpha, "p_star": si, "q_star": sj}));
                }
            }
        }
    }
    let summary = json!({"deltas": (1u32 << w) - 1, "pairs": pairs, "pairs_meeting_at_top": at_top, "premise_holds": premise});
    let main = match counter {
        Some(c) => Check::fail("Lemma 5.2", json!({"counterexamples": counters, "first": c, "summary": summary})),
        None => Check::pass("Lemma 5.2", summary),
    };
    let fill = match first_miss {
        Some(m) => Check::fail("Lemma 5.2 fill rule", json!({"misses": misses, "filled": filled, "first": m})),
        None => Check::pass("Lemma 5.2 fill rule", json!({"filled": filled})),
    };
    Ok(vec![main, fill])
}

/// The merge of every eligible pair lies in `ℙ` below both inputs.
pub fn merge_check(h: &ChainHierarchy) -> Result<Check> {
    let f = h.forcing();
    let (mut eligible, mut pairs) = (0u64, 0u64);
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            pairs += 1;
            let (p1, p2) = (&f[i], &f[j]);
            if !h.merge_eligible(p1, p2) {
                continue;
            }
            eligible += 1;
            let root: Vec<usize> = bits(p1.col_mask() & p2.col_mask()).collect();
            let r = merge_conditions(p1, p2, &root)?;
            let below = chain_leq(&r, p1) && chain_leq(&r, p2);
            if !below || !h.in_forcing(&r) {
                let violation = thinned_membership(&r, h.morass())?;
                return Ok(Check::fail(
                    "Lemma 5.3 merge",
                    json!({"p1": p1, "p2": p2, "merge": r, "below_both": below, "violation": violation}),
                ));
            }
        }
    }
    Ok(Check::pass("Lemma 5.3 merge", json!({"pairs": pairs, "eligible": eligible})))
}

/// `p_β` is an antichain in `P` and misses `ℙ` entirely.
pub fn antichain_family(h: &ChainHierarchy) -> Result<Check> {
    let name = "p_β antichain";
    let rows = h.height();
    if h.width() < 2 {
        return Ok(Check::fail(name, json!({"reason": "fewer than two columns"})));
    }
    let fam = p_beta_family(rows);
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            if h.compatible_unthinned(&fam[i], &fam[j]) {
                return Ok(Check::fail(name, json!({"compatible_in_P": [fam[i], fam[j]]})));
            }
        }
    }
    let mut witnesses = Vec::new();
    for p in &fam {
        match thinned_membership(p, h.morass())? {
            None => return Ok(Check::fail(name, json!({"in_forcing": p}))),
            Some(v) => witnesses.push(v),
        }
        if h.in_forcing(p) {
            return Ok(Check::fail(name, json!({"in_forcing": p})));
        }
    }
    Ok(Check::pass(name, json!({"size": fam.len(), "violations": witnesses})))
}

/// Maximum antichain of `ℙ` strictly below that of `P`.
pub fn antichain_contrast(h: &ChainHierarchy, cap: u64) -> Check {
    let name = "max antichain ℙ < P";
    let p_all = h.unthinned();
    let thin = h.forcing();
    let big = max_antichain(p_all.len(), |i, j| !h.compatible_unthinned(&p_all[i], &p_all[j]), cap);
    let small = max_antichain(thin.len(), |i, j| !h.compatible(&thin[i], &thin[j]), cap);
    let wit = json!({
        "P": {"conditions": p_all.len(), "max": big.size, "exact": big.exact},
        "thinned": {"conditions": thin.len(), "max": small.size, "exact": small.exact},
    });
    // an inexact ℙ bound is only a lower bound, so it cannot certify the gap
    if small.exact && small.size < big.size {
        Check::pass(name, wit)
    } else {
        Check::fail(name, wit)
    }
}
