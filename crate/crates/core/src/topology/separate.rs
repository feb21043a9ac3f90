//! Separating two points by a color: `q ≤ p` with `q(γ,μ) ≠ q(δ,μ)`.

use serde::Serialize;

use crate::topology::cond::TopCondition;
use crate::topology::hierarchy::TopologyHierarchy;
use crate::{Error, Result};

/// How a separating extension was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationCase {
    /// Level 0, fresh color.
    Base,
    /// Both points in `rng(h_{θα})`; descend and lift.
    BothInRange,
    /// Neither point in range; fresh color in the top block.
    NeitherInRange,
    /// Exactly one point in range.
    OneInRange,
    /// No fresh color was available; found by exhaustive search instead.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub q: TopCondition,
    pub mu: usize,
    /// Outermost case first.
    pub trace: Vec<SeparationCase>,
}

impl Separation {
    pub fn separates(&self, gamma: usize, delta: usize) -> bool {
        matches!((self.q.get(gamma, self.mu), self.q.get(delta, self.mu)), (Some(a), Some(b)) if a != b)
    }
}

/// Outcome of the inductive construction.
#[derive(Clone, Debug)]
pub enum Constructed {
    Done(Separation),
    /// Some step needed a color column that `p` already uses.
    NoRoom { level: usize },
}

impl TopologyHierarchy {
    /// A separating extension in `ℙ`; follows the inductive cases where
    /// possible and falls back to search.
    pub fn separate(&self, p: &TopCondition, gamma: usize, delta: usize) -> Result<Separation> {
        self.check_points(gamma, delta)?;
        if !self.in_forcing(p) {
            return Err(Error::Precondition(format!("{p:?} is not in ℙ")));
        }
        let top = self.thin.len() - 1;
        if self.in_thinned(top, p) {
            if let Constructed::Done(s) = self.separate_at(top, p, gamma, delta)? {
                if self.in_forcing(&s.q) {
                    return Ok(s);
                }
            }
        }
        self.separate_search(p, gamma, delta)
            .ok_or_else(|| Error::Inconsistent(format!("no extension of {p:?} separates {gamma} and {delta}")))
    }

    fn check_points(&self, gamma: usize, delta: usize) -> Result<()> {
        if gamma == delta {
            return Err(Error::Precondition(format!("cannot separate {gamma} from itself")));
        }
        let n = self.rect.points;
        if gamma >= n || delta >= n {
            return Err(Error::OutOfRange(format!("points {gamma}, {delta} outside {n}")));
        }
        Ok(())
    }

    /// Least `q ≤ p` in `ℙ` (by condition order) with a separating color.
    pub fn separate_search(&self, p: &TopCondition, gamma: usize, delta: usize) -> Option<Separation> {
        let sep = |q: &TopCondition| (0..self.rect.colors).find(|&mu| matches!((q.get(gamma, mu), q.get(delta, mu)), (Some(a), Some(b)) if a != b));
        // cheap candidates first: fill the two cells of one column
        for mu in 0..self.rect.colors {
            for v in [false, true] {
                let a = p.get(gamma, mu).unwrap_or(v);
                let b = p.get(delta, mu).unwrap_or(!a);
                if a == b {
                    continue;
                }
                let q = p.with(gamma, mu, a).with(delta, mu, b);
                if self.in_forcing(&q) {
                    return Some(Separation { q, mu, trace: vec![SeparationCase::Search] });
                }
            }
        }
        self.forcing()
            .iter()
            .filter(|q| q.leq(p))
            .find_map(|q| sep(q).map(|mu| Separation { q: *q, mu, trace: vec![SeparationCase::Search] }))
    }

    /// The claim at outer level `β`: `p ∈ ℙ_{φ_{θβ}}`, `γ ≠ δ < φ_{θβ}`.
    pub fn separate_at(&self, beta: usize, p: &TopCondition, gamma: usize, delta: usize) -> Result<Constructed> {
        self.check_points(gamma, delta)?;
        let inner = self.m2.inner();
        let th = self.m2.thetas();
        let bound = inner.theta(th[beta]);
        if gamma >= bound || delta >= bound || !self.in_thinned(beta, p) {
            return Err(Error::Precondition(format!("{p:?}, {gamma}, {delta} not at outer level {beta}")));
        }
        let b = self.block;
        if beta == 0 {
            let Some(mu) = self.fresh_color(p, 0, b * th[0]) else { return Ok(Constructed::NoRoom { level: 0 }) };
            let q = p.with(gamma, mu, false).with(delta, mu, true);
            return self.finish(beta, p, q, mu, vec![SeparationCase::Base]);
        }
        if self.m2.is_limit(beta) {
            return self.separate_at(beta - 1, p, gamma, delta);
        }
        let alpha = beta - 1;
        let t = self.right_tensor(alpha)?;
        let star = self.stars.get(p).ok_or_else(|| Error::Inconsistent(format!("{p:?} has no star")))?;
        let top_block = b * (th[beta] - 1)..b * th[beta];
        let pbar = || {
            star.values[th[alpha]]
                .union(&t.preimage(p))
                .ok_or_else(|| Error::Inconsistent(format!("p*(θ_α) and the pullback of {p:?} disagree")))
        };
        match (t.vertex.preimage(gamma), t.vertex.preimage(delta)) {
            (Some(gb), Some(db)) => {
                let pb = pbar()?;
                let sub = match self.separate_at(alpha, &pb, gb, db)? {
                    Constructed::Done(s) => s,
                    no => return Ok(no),
                };
                let q = p
                    .union(&t.image(&sub.q)?)
                    .ok_or_else(|| Error::Inconsistent(format!("lift of {:?} disagrees with {p:?}", sub.q)))?;
                let (_, mu) = t.apply(gb, sub.mu).expect("in range");
                let mut trace = vec![SeparationCase::BothInRange];
                trace.extend(sub.trace);
                self.finish(beta, p, q, mu, trace)
            }
            (None, None) => {
                let Some(mu) = self.fresh_color(p, top_block.start, top_block.end) else {
                    return Ok(Constructed::NoRoom { level: beta });
                };
                let q = p.with(gamma, mu, false).with(delta, mu, true);
                self.finish(beta, p, q, mu, vec![SeparationCase::NeitherInRange])
            }
            (gb, db) => {
                let (inside, bar, outside) = match (gb, db) {
                    (Some(x), None) => (gamma, x, delta),
                    (None, Some(x)) => (delta, x, gamma),
                    _ => unreachable!(),
                };
                let Some(mu) = self.fresh_color(p, top_block.start, top_block.end) else {
                    return Ok(Constructed::NoRoom { level: beta });
                };
                let level = t.level.as_ref().expect("level part");
                let mu_bar = level.preimage(mu / b).map(|tau| b * tau + mu % b).ok_or_else(|| {
                    Error::Inconsistent(format!("color {mu} is not in the range of the level map"))
                })?;
                let pb = pbar()?;
                let Some(qb) = self.extend_to_cell(alpha, &pb, bar, mu_bar) else {
                    return Err(Error::Inconsistent(format!("no extension of {pb:?} defines ({bar},{mu_bar})")));
                };
                let r = p
                    .union(&t.image(&qb)?)
                    .ok_or_else(|| Error::Inconsistent(format!("lift of {qb:?} disagrees with {p:?}")))?;
                let eps = !r.get(inside, mu).expect("lifted cell");
                let q = r.with(outside, mu, eps);
                self.finish(beta, p, q, mu, vec![SeparationCase::OneInRange])
            }
        }
    }

    fn finish(
        &self,
        beta: usize,
        p: &TopCondition,
        q: TopCondition,
        mu: usize,
        trace: Vec<SeparationCase>,
    ) -> Result<Constructed> {
        if !self.in_thinned(beta, &q) || !q.leq(p) {
            return Err(Error::Inconsistent(format!(
                "constructed {q:?} is not an extension of {p:?} at outer level {beta} (cases {trace:?})"
            )));
        }
        Ok(Constructed::Done(Separation { q, mu, trace }))
    }

    /// A color in `[lo, hi)` that `p` does not use.
    fn fresh_color(&self, p: &TopCondition, lo: usize, hi: usize) -> Option<usize> {
        let used = p.used_colors();
        (lo..hi).find(|mu| !used.contains(mu))
    }

    /// Some `q ≤ p` in `ℙ_{φ_{θα}}` with `(γ, μ) ∈ x_q`.
    fn extend_to_cell(&self, alpha: usize, p: &TopCondition, gamma: usize, mu: usize) -> Option<TopCondition> {
        if p.get(gamma, mu).is_some() {
            return Some(*p);
        }
        [false, true]
            .into_iter()
            .map(|v| p.with(gamma, mu, v))
            .find(|q| self.in_thinned(alpha, q))
            .or_else(|| self.thinned(alpha).iter().find(|q| q.leq(p) && q.get(gamma, mu).is_some()).copied())
    }
}
