//! Local stars over a finite column set and the merge of two conditions.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::chain::cond::{bits, chain_leq, ChainCondition, MAX_COLS};
use crate::chain::hierarchy::ChainHierarchy;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalStarForm {
    pub delta: Vec<usize>,
    pub alpha0: usize,
    /// `p*(α)` for `α0 ≤ α ≤ top`.
    pub values: BTreeMap<usize, ChainCondition>,
    pub support: BTreeSet<usize>,
}

impl LocalStarForm {
    pub(crate) fn support_mask(&self) -> u32 {
        self.support.iter().fold(0, |m, &a| m | 1 << a)
    }
}

impl ChainHierarchy {
    /// `p*` and `supp(p)` relative to `Δ`, read along the branch below
    /// `t = (top, max Δ)`.
    pub fn local_star(&self, p: &ChainCondition, delta: &[usize]) -> Result<LocalStarForm> {
        let top = self.height();
        let dset: BTreeSet<usize> = delta.iter().copied().collect();
        let eta = *dset.last().ok_or_else(|| Error::Precondition("Δ is empty".into()))?;
        if eta >= self.width() {
            return Err(Error::OutOfRange(format!("column {eta} outside θ_top = {}", self.width())));
        }
        if let Some(c) = p.cols().into_iter().find(|c| !dset.contains(c)) {
            return Err(Error::Precondition(format!("column {c} of {p:?} is not in Δ")));
        }
        let t = (top, eta);
        let mut alpha0 = None;
        let mut values = BTreeMap::new();
        for alpha in 0..=top {
            let Some(s) = self.tree.predecessor_at(t, alpha) else { continue };
            let pi = self.tree.pi(s, t).ok_or_else(|| Error::Inconsistent(format!("{s:?} ≺ {t:?} has no π")))?;
            if alpha0.is_none() && dset.iter().all(|&c| pi.in_range(c)) {
                alpha0 = Some(alpha);
            }
            if alpha0.is_some() {
                values.insert(alpha, p.rows_below(alpha).pullback(&pi));
            }
        }
        let alpha0 = alpha0.ok_or_else(|| {
            Error::Inconsistent(format!("branch not found: no s ≺ {t:?} has Δ = {dset:?} in the range of π_st"))
        })?;
        let mut support = BTreeSet::from([alpha0]);
        for alpha in alpha0..top {
            let (lo, hi) = (&values[&alpha], &values[&(alpha + 1)]);
            let h = self
                .morass
                .successor_map(alpha)
                .ok_or_else(|| Error::Inconsistent(format!("no successor map at level {alpha}")))?;
            if hi != lo && *hi != lo.image(&h)? {
                support.insert(alpha + 1);
            }
        }
        Ok(LocalStarForm { delta: dset.into_iter().collect(), alpha0, values, support })
    }

    /// A common extension of `p` and `q` in `ℙ` built as in the claim of
    /// Lemma 5.2: start from the least one at `α`, push it up one level at a
    /// time along the branch below `(top, max Δ)`, and fill each new cell by
    /// the threshold of the known zeros in its row.  Every step is checked;
    /// `None` means the rule failed somewhere, not that `p ⊥ q`.
    pub fn lift_common_extension(&self, sp: &LocalStarForm, sq: &LocalStarForm, alpha: usize) -> Option<ChainCondition> {
        let top = self.height();
        let eta = *sp.delta.last()?;
        let t = (top, eta);
        let mut r = self.common_extension(Some(alpha), sp.values.get(&alpha)?, sq.values.get(&alpha)?)?;
        for g in alpha + 1..=top {
            let s_lo = self.tree.predecessor_at(t, g - 1)?;
            let s_hi = self.tree.predecessor_at(t, g)?;
            let lifted = r.image(&self.tree.pi(s_lo, s_hi)?).ok()?;
            let (pg, qg) = (&sp.values[&g], &sq.values[&g]);
            r = threshold_union(&[&lifted, pg, qg])?;
            if !self.criterion_at(g, &r) || !chain_leq(&r, pg) || !chain_leq(&r, qg) {
                return None;
            }
        }
        Some(r)
    }

    /// The conclusions of the Δ-system thinning that the merge needs: the
    /// roots agree and are compatible, rows in both are comparable on every
    /// `rng f`, and no `rng f` of a row in only one of them meets both
    /// private column sets.
    pub fn merge_eligible(&self, p1: &ChainCondition, p2: &ChainCondition) -> bool {
        if !p1.agrees_with(p2) {
            return false;
        }
        let root = p1.col_mask() & p2.col_mask();
        let r1 = p1.restrict(root, 0xff);
        let r2 = p2.restrict(root, 0xff);
        if !self.compatible(&r1, &r2) {
            return false;
        }
        let only1 = p1.col_mask() & !p2.col_mask();
        let only2 = p2.col_mask() & !p1.col_mask();
        for a in bits(p1.row_mask() | p2.row_mask()) {
            let both = p1.has_row(a) && p2.has_row(a);
            for &m in self.top_ranges(a) {
                let ok = if both {
                    let (c1, c2) = (p1.col_mask() & m, p2.col_mask() & m);
                    c1 & !c2 == 0 || c2 & !c1 == 0
                } else {
                    m & only1 == 0 || m & only2 == 0
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

/// The union of `parts` on the rectangle they span; a cell no part defines
/// is 1 right of the last known zero in its row and 0 elsewhere.
fn threshold_union(parts: &[&ChainCondition]) -> Option<ChainCondition> {
    if parts.iter().enumerate().any(|(i, a)| parts[i + 1..].iter().any(|b| !a.agrees_with(b))) {
        return None;
    }
    let cols = parts.iter().fold(0u8, |m, p| m | p.col_mask());
    let rows = parts.iter().fold(0u8, |m, p| m | p.row_mask());
    let mut cells = Vec::new();
    for r in bits(rows) {
        let known = |c: usize| parts.iter().find_map(|p| p.get(c, r));
        let cut = bits(cols).filter(|&c| known(c) == Some(false)).max().unwrap_or(0);
        for c in bits(cols) {
            cells.push((c, r, known(c).unwrap_or(c > cut)));
        }
    }
    ChainCondition::new(&bits(cols).collect::<Vec<_>>(), &bits(rows).collect::<Vec<_>>(), &cells).ok()
}

/// Union of `p1` and `p2` with the empty cells filled by the `δ_β` rule:
/// `1` right of the last root zero in row `β`, `0` elsewhere.
pub fn merge_conditions(p1: &ChainCondition, p2: &ChainCondition, delta1: &[usize]) -> Result<ChainCondition> {
    let mut root = 0u8;
    for &d in delta1 {
        if d >= MAX_COLS {
            return Err(Error::OutOfRange(format!("root column {d} exceeds the cap {MAX_COLS}")));
        }
        root |= 1 << d;
    }
    let shared = p1.col_mask() & p2.col_mask();
    if shared & !root != 0 {
        return Err(Error::Precondition(format!("a_p1 ∩ a_p2 = {:?} is not inside Δ1 = {delta1:?}", bits(shared).collect::<Vec<_>>())));
    }
    if !p1.agrees_with(p2) {
        return Err(Error::Inconsistent(format!("merge impossible: {p1:?} and {p2:?} disagree on a shared cell")));
    }
    let cols = p1.col_mask() | p2.col_mask();
    let rows = p1.row_mask() | p2.row_mask();
    let mut cells = Vec::new();
    for r in bits(rows) {
        let known = |c: usize| p1.get(c, r).or_else(|| p2.get(c, r));
        let delta_r = bits(root).filter(|&d| known(d) == Some(false)).max().unwrap_or(0);
        for c in bits(cols) {
            cells.push((c, r, known(c).unwrap_or(c > delta_r)));
        }
    }
    ChainCondition::new(&bits(cols).collect::<Vec<_>>(), &bits(rows).collect::<Vec<_>>(), &cells)
}
