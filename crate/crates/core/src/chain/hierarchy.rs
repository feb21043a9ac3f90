//! The thinned hierarchy `ℙ_{θ_β}` along a gap-1 morass.

use serde::Serialize;
use std::collections::HashSet;

use crate::chain::cond::{all_conditions, bits, count_conditions, descent, ChainCondition, MAX_COLS, MAX_ROWS};
use crate::gap1::{FakeGap1Morass, MorassTree};
use crate::order::OrdMap;
use crate::{Error, Result};

/// Largest `P` the hierarchy will enumerate.
pub const CONDITION_BUDGET: u128 = 4_000_000;

/// A row whose pullback along some `f ∈ F_{α+1,top}` is not monotone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneViolation {
    /// The row `α`.
    pub row: usize,
    pub map: OrdMap,
    /// Columns `c1 < c2` of `p` with `p(c1,α) = 1`, `p(c2,α) = 0`.
    pub pair: (usize, usize),
}

fn range_mask(f: &OrdMap) -> u8 {
    f.images().iter().filter(|&&y| y < MAX_COLS).fold(0, |m, &y| m | 1 << y)
}

fn check_box(m: &FakeGap1Morass, p: &ChainCondition) -> Result<()> {
    let top = m.height();
    if p.cols().iter().any(|&c| c >= m.theta(top)) || p.rows().iter().any(|&r| r >= top) {
        return Err(Error::OutOfRange(format!("{p:?} is not inside θ_top × top = {} × {top}", m.theta(top))));
    }
    Ok(())
}

/// Lemma 5.1 form of membership in `ℙ`: every row `α` is monotone along
/// each `f ∈ F_{α+1,top}`.  `Ok(None)` means `p ∈ ℙ`.
pub fn thinned_membership(p: &ChainCondition, m: &FakeGap1Morass) -> Result<Option<MonotoneViolation>> {
    check_box(m, p)?;
    let top = m.height();
    for row in p.rows() {
        for f in m.family(row + 1, top) {
            if let Some(pair) = p.row_descent(row, range_mask(&f)) {
                return Ok(Some(MonotoneViolation { row, map: f, pair }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct ChainHierarchy {
    pub(crate) morass: FakeGap1Morass,
    pub(crate) tree: MorassTree,
    /// `ranges[γ][α]`: `rng f` for each `f ∈ F_{α+1,γ}`, as column masks.
    ranges: Vec<Vec<Vec<u8>>>,
    /// `ℙ_{θ_β}`, built bottom-up from the clauses.
    levels: Vec<HashSet<ChainCondition>>,
    forcing: Vec<ChainCondition>,
    all: Vec<ChainCondition>,
}

impl ChainHierarchy {
    pub fn build(m: &FakeGap1Morass) -> Result<Self> {
        let top = m.height();
        if let Some(l) = (1..=top).find(|&b| m.is_limit(b)) {
            return Err(Error::Precondition(format!(
                "level {l} is a limit; the chain hierarchy is only built over successor levels"
            )));
        }
        if m.theta(top) > MAX_COLS || top > MAX_ROWS {
            return Err(Error::Scale(format!("θ_top = {} with {top} rows exceeds {MAX_COLS} × {MAX_ROWS}", m.theta(top))));
        }
        let n = count_conditions(m.theta(top), top);
        if n > CONDITION_BUDGET {
            return Err(Error::Scale(format!("{n} conditions exceed the budget {CONDITION_BUDGET}")));
        }
        let tree = MorassTree::build(m)?;
        let ranges = (0..=top)
            .map(|g| (0..g).map(|a| m.family(a + 1, g).iter().map(range_mask).collect()).collect())
            .collect();
        let mut levels: Vec<HashSet<ChainCondition>> = Vec::new();
        levels.push(all_conditions(m.theta(0), 1).into_iter().collect());
        for beta in 1..=top {
            let alpha = beta - 1;
            let h = m
                .successor_map(alpha)
                .ok_or_else(|| Error::Inconsistent(format!("no successor map at level {alpha}")))?;
            let below = &levels[alpha];
            let low_cols = ((1u16 << m.theta(alpha)) - 1) as u8;
            let low_rows = ((1u16 << alpha) - 1) as u8;
            let lvl: HashSet<ChainCondition> = all_conditions(m.theta(beta), beta)
                .into_iter()
                .filter(|p| {
                    below.contains(&p.pullback(&h).restrict(low_cols, low_rows))
                        && below.contains(&p.restrict(low_cols, low_rows))
                        && p.row_descent(alpha, 0xff).is_none()
                })
                .collect();
            levels.push(lvl);
        }
        let mut forcing: Vec<ChainCondition> = levels[top].iter().copied().collect();
        forcing.sort_unstable();
        let all = all_conditions(m.theta(top), top);
        Ok(ChainHierarchy { morass: m.clone(), tree, ranges, levels, forcing, all })
    }

    pub fn morass(&self) -> &FakeGap1Morass {
        &self.morass
    }

    pub fn tree(&self) -> &MorassTree {
        &self.tree
    }

    pub fn height(&self) -> usize {
        self.morass.height()
    }

    /// Columns of the top level.
    pub fn width(&self) -> usize {
        self.morass.theta(self.height())
    }

    /// `ℙ`, sorted.
    pub fn forcing(&self) -> &[ChainCondition] {
        &self.forcing
    }

    /// The unthinned `P` inside `θ_top × top`, sorted.
    pub fn unthinned(&self) -> &[ChainCondition] {
        &self.all
    }

    pub fn in_forcing(&self, p: &ChainCondition) -> bool {
        self.levels[self.height()].contains(p)
    }

    /// `ℙ_{θ_β}` as built from the clauses.
    pub fn level(&self, beta: usize) -> &HashSet<ChainCondition> {
        &self.levels[beta]
    }

    /// The Lemma 5.1 criterion at level `γ`: inside `θ_γ × γ`, and each row
    /// `α` monotone along every `f ∈ F_{α+1,γ}`.
    pub fn criterion_at(&self, gamma: usize, p: &ChainCondition) -> bool {
        let cols = ((1u16 << self.morass.theta(gamma)) - 1) as u8;
        let rows = ((1u16 << gamma) - 1) as u8;
        p.col_mask() & !cols == 0
            && p.row_mask() & !rows == 0
            && bits(p.row_mask()).all(|r| self.ranges[gamma][r].iter().all(|&m| p.row_descent(r, m).is_none()))
    }

    /// Least `r ≤ p, q` (in `ℙ_{θ_γ}` by the criterion, or in the
    /// unthinned `P` when `level` is `None`).  Rows are independent, so each is
    /// filled separately; a common extension can always be cut down to
    /// `(a_p ∪ a_q) × (b_p ∪ b_q)`.
    pub fn common_extension(
        &self,
        level: Option<usize>,
        p: &ChainCondition,
        q: &ChainCondition,
    ) -> Option<ChainCondition> {
        if !p.agrees_with(q) {
            return None;
        }
        let cols = p.col_mask() | q.col_mask();
        let rows = p.row_mask() | q.row_mask();
        if let Some(g) = level {
            let cap = ((1u16 << self.morass.theta(g)) - 1) as u8;
            let rcap = ((1u16 << g) - 1) as u8;
            if cols & !cap != 0 || rows & !rcap != 0 {
                return None;
            }
        }
        let mut vals = 0u64;
        for r in bits(rows) {
            let in_p = p.has_row(r);
            let in_q = q.has_row(r);
            let known = if in_p { p.col_mask() } else { 0 } | if in_q { q.col_mask() } else { 0 };
            let known_vals = if in_p { p.row(r) & p.col_mask() } else { 0 } | if in_q { q.row(r) & q.col_mask() } else { 0 };
            let free = cols & !known;
            let mut masks: Vec<u8> = Vec::new();
            if !in_p {
                masks.push(p.col_mask());
            }
            if !in_q {
                masks.push(q.col_mask());
            }
            if let Some(g) = level {
                masks.extend(self.ranges[g][r].iter().map(|m| m & cols));
            }
            let mut s = 0u8;
            let row = loop {
                let row = known_vals | s;
                if masks.iter().all(|&m| descent(row, m).is_none()) {
                    break Some(row);
                }
                if s == free {
                    break None;
                }
                s = s.wrapping_sub(free) & free;
            }?;
            vals |= (row as u64) << (8 * r);
        }
        Some(ChainCondition::from_masks(cols, rows, vals))
    }

    /// Compatibility in `ℙ`.
    pub fn compatible(&self, p: &ChainCondition, q: &ChainCondition) -> bool {
        self.common_extension(Some(self.height()), p, q).is_some()
    }

    /// Compatibility in the unthinned `P`.
    pub fn compatible_unthinned(&self, p: &ChainCondition, q: &ChainCondition) -> bool {
        self.common_extension(None, p, q).is_some()
    }

    /// Column masks `rng f`, `f ∈ F_{α+1,top}`.
    pub(crate) fn top_ranges(&self, alpha: usize) -> &[u8] {
        &self.ranges[self.height()][alpha]
    }

}
