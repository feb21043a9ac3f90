//! Named single-defect mutations of the shipped morasses.
//!
//! Each mutation breaks one axiom on purpose; the validator must then fail
//! the named check.  (P1) and gap-2 (1) are cardinality bounds that finite
//! families always meet, so nothing targets them.

use serde::Serialize;

use crate::fixtures;
use crate::gap1::FakeGap1Morass;
use crate::gap2::FakeGap2Morass;
use crate::order::{all_maps, OrdMap};
use crate::report::Report;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationTarget {
    Gap1,
    Gap2,
}

#[derive(Clone, Copy)]
enum Edit {
    Gap1(fn(&mut FakeGap1Morass) -> Result<()>),
    Gap2(fn(&mut FakeGap2Morass) -> Result<()>),
}

#[derive(Clone, Copy)]
pub struct Mutation {
    pub name: &'static str,
    pub fixture: &'static str,
    /// The check that has to fail.
    pub breaks: &'static str,
    edit: Edit,
}

impl std::fmt::Debug for Mutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({} on {})", self.name, self.breaks, self.fixture)
    }
}

/// Outcome of one mutation run.
#[derive(Clone, Debug, Serialize)]
pub struct Detection {
    pub mutation: &'static str,
    pub fixture: &'static str,
    pub expected: &'static str,
    pub failed: Vec<String>,
    pub attributed: bool,
}

impl Mutation {
    pub fn target(&self) -> MutationTarget {
        match self.edit {
            Edit::Gap1(_) => MutationTarget::Gap1,
            Edit::Gap2(_) => MutationTarget::Gap2,
        }
    }

    /// The suite that validates the mutated morass.
    pub fn suite(&self) -> &'static str {
        match self.target() {
            MutationTarget::Gap1 => "gap1-axioms",
            MutationTarget::Gap2 => "gap2-axioms",
        }
    }

    pub fn apply_gap1(&self, m: &FakeGap1Morass) -> Result<FakeGap1Morass> {
        let Edit::Gap1(f) = self.edit else {
            return Err(Error::Precondition(format!("{} mutates a gap-2 morass", self.name)));
        };
        let mut m = m.clone();
        f(&mut m)?;
        Ok(m)
    }

    pub fn apply_gap2(&self, m: &FakeGap2Morass) -> Result<FakeGap2Morass> {
        let Edit::Gap2(f) = self.edit else {
            return Err(Error::Precondition(format!("{} mutates a gap-1 morass", self.name)));
        };
        let mut m = m.clone();
        f(&mut m)?;
        Ok(m)
    }

    /// Mutate the mutation's own fixture and validate it.
    pub fn run(&self) -> Result<Report> {
        match self.target() {
            MutationTarget::Gap1 => Ok(self.apply_gap1(&fixtures::gap1(self.fixture)?)?.validate()),
            MutationTarget::Gap2 => Ok(self.apply_gap2(&fixtures::gap2(self.fixture)?)?.validate()),
        }
    }

    pub fn detect(&self) -> Result<Detection> {
        let rep = self.run()?;
        let failed: Vec<String> = rep.failures().map(|c| c.name.clone()).collect();
        let attributed = failed.iter().any(|n| n == self.breaks);
        Ok(Detection { mutation: self.name, fixture: self.fixture, expected: self.breaks, failed, attributed })
    }
}

fn broken(what: &str) -> Error {
    Error::Precondition(format!("fixture has no {what} to mutate"))
}

// ---- gap-1 edits ----

fn drop_p2_map(m: &mut FakeGap1Morass) -> Result<()> {
    let fam = m.families.get_mut(&(0, 2)).ok_or_else(|| broken("F_{0,2}"))?;
    fam.pop().ok_or_else(|| broken("map in F_{0,2}"))?;
    Ok(())
}

fn theta0_two(m: &mut FakeGap1Morass) -> Result<()> {
    m.theta[0] = 2;
    Ok(())
}

fn wrong_codomain(m: &mut FakeGap1Morass) -> Result<()> {
    let cod = m.theta[1] + 1;
    let fam = m.families.get_mut(&(0, 1)).ok_or_else(|| broken("F_{0,1}"))?;
    fam[0] = fam[0].with_cod(cod)?;
    Ok(())
}

fn split_out_of_range(m: &mut FakeGap1Morass) -> Result<()> {
    let t = m.theta[1];
    *m.splits.get_mut(1).ok_or_else(|| broken("step 1"))? = Some(t);
    Ok(())
}

fn split_mismatch(m: &mut FakeGap1Morass) -> Result<()> {
    let s = m.splits.get_mut(1).and_then(|s| s.as_mut()).ok_or_else(|| broken("split at step 1"))?;
    *s = if *s == 0 { 1 } else { 0 };
    Ok(())
}

/// Drop `h_α` at the top step and recompose everything into the top.
fn drop_successor_map(m: &mut FakeGap1Morass) -> Result<()> {
    let top = m.height();
    let a = top.checked_sub(1).ok_or_else(|| broken("successor step"))?;
    let id = OrdMap::inclusion(m.theta[a], m.theta[top])?;
    m.families.insert((a, top), vec![id.clone()]);
    for b in 0..a {
        let mut v: Vec<OrdMap> = m.family(b, a).iter().map(|f| id.compose(f)).collect::<Result<_>>()?;
        v.sort();
        v.dedup();
        m.families.insert((b, top), v);
    }
    Ok(())
}

fn successor_as_limit(m: &mut FakeGap1Morass) -> Result<()> {
    let top = m.height();
    m.limits.insert(top, vec![top - 1]);
    Ok(())
}

fn empty_limit_family(m: &mut FakeGap1Morass) -> Result<()> {
    let l = *m.limits.keys().next_back().ok_or_else(|| broken("limit level"))?;
    for b in 0..l {
        m.families.insert((b, l), Vec::new());
    }
    Ok(())
}

/// One extra top point that no map reaches.
fn pad_top_level(m: &mut FakeGap1Morass) -> Result<()> {
    let top = m.height();
    m.theta[top] += 1;
    let cod = m.theta[top];
    for b in 0..top {
        if let Some(fam) = m.families.get_mut(&(b, top)) {
            for f in fam.iter_mut() {
                *f = f.with_cod(cod)?;
            }
        }
    }
    Ok(())
}

/// Two maps that meet at a point reached from different positions.
fn crosses(f1: &OrdMap, f2: &OrdMap) -> bool {
    (0..f1.dom()).any(|t1| {
        f2.preimage(f1.images()[t1]).is_some_and(|t2| t1 != t2 || f1.images()[..t1] != f2.images()[..t2])
    })
}

fn lemma21_cross(m: &mut FakeGap1Morass) -> Result<()> {
    let (a, b) = (1, m.height());
    let fam = m.family(a, b);
    let extra = all_maps(m.theta[a], m.theta[b])
        .into_iter()
        .find(|g| !fam.contains(g) && fam.iter().any(|f| crosses(f, g)))
        .ok_or_else(|| broken("crossing map"))?;
    let fam = m.families.get_mut(&(a, b)).ok_or_else(|| broken("F_{1,top}"))?;
    fam.push(extra);
    fam.sort();
    Ok(())
}

// ---- gap-2 edits ----

fn drop_gap2_family(m: &mut FakeGap2Morass) -> Result<()> {
    m.families.remove(&(0, 1)).ok_or_else(|| broken("F_{0,1}"))?;
    Ok(())
}

fn drop_composite_embedding(m: &mut FakeGap2Morass) -> Result<()> {
    let fam = m.families.get_mut(&(0, 2)).ok_or_else(|| broken("F_{0,2}"))?;
    fam.pop().ok_or_else(|| broken("member of F_{0,2}"))?;
    Ok(())
}

fn gap2_split_mismatch(m: &mut FakeGap2Morass) -> Result<()> {
    let s = m.splits.get_mut(0).and_then(|s| s.as_mut()).ok_or_else(|| broken("split at step 0"))?;
    *s += 1;
    Ok(())
}

fn gap2_successor_as_limit(m: &mut FakeGap2Morass) -> Result<()> {
    let top = m.height();
    m.limits.insert(top, vec![top - 1]);
    Ok(())
}

fn gap2_empty_limit_family(m: &mut FakeGap2Morass) -> Result<()> {
    let l = *m.limits.keys().next_back().ok_or_else(|| broken("limit level"))?;
    for b in 0..l {
        m.families.insert((b, l), Vec::new());
    }
    Ok(())
}

fn first_embedding(m: &mut FakeGap2Morass) -> Result<&mut crate::gap2::Gap1Embedding> {
    m.families.get_mut(&(0, 1)).and_then(|f| f.first_mut()).ok_or_else(|| broken("member of F_{0,1}"))
}

fn embedding_level_codomain(m: &mut FakeGap2Morass) -> Result<()> {
    let e = first_embedding(m)?;
    e.level = e.level.with_cod(e.level.cod() + 1)?;
    Ok(())
}

fn embedding_vertex_codomain(m: &mut FakeGap2Morass) -> Result<()> {
    let e = first_embedding(m)?;
    e.vertex[0] = e.vertex[0].with_cod(e.vertex[0].cod() + 1)?;
    Ok(())
}

fn embedding_drop_action(m: &mut FakeGap2Morass) -> Result<()> {
    let e = first_embedding(m)?;
    let act = e.gmap.values_mut().find(|a| !a.is_empty()).ok_or_else(|| broken("G-action"))?;
    let k = act.keys().next().cloned().expect("nonempty");
    act.remove(&k);
    Ok(())
}

/// Move the image of a split point in some `f_ζ` off the target split.
fn embedding_split_image(m: &mut FakeGap2Morass) -> Result<()> {
    let inner = m.inner.clone();
    for fam in m.families.values_mut() {
        for e in fam.iter_mut() {
            for z in 0..e.vertex.len().saturating_sub(1) {
                let (Some(d), Some(d2)) = (inner.split(z), inner.split(e.level.images()[z])) else { continue };
                let cur = &e.vertex[z];
                if let Some(g) = all_maps(cur.dom(), cur.cod()).into_iter().find(|g| g.apply(d).ok() != Some(d2)) {
                    e.vertex[z] = g;
                    return Ok(());
                }
            }
        }
    }
    Err(broken("split point with a movable image"))
}

/// Reassign one `G`-action value to another member of the target `G`, on a
/// pair with a level in between so the composition square sees it.
fn embedding_action_swap(m: &mut FakeGap2Morass) -> Result<()> {
    let inner = m.inner.clone();
    for fam in m.families.values_mut() {
        for e in fam.iter_mut() {
            let level = e.level.clone();
            for (&(z, x), act) in e.gmap.iter_mut().filter(|(&(z, x), _)| x >= z + 2) {
                let targets = crate::gap2::gfam(&inner, level.images()[z], level.images()[x]);
                for v in act.values_mut() {
                    if let Some(other) = targets.iter().find(|t| *t != v) {
                        *v = other.clone();
                        return Ok(());
                    }
                }
            }
        }
    }
    Err(broken("G-action with a second target"))
}

/// Replace some `f_ξ` (`ξ ≥ 1`) by a different map with the same shape.
fn embedding_vertex_shift(m: &mut FakeGap2Morass) -> Result<()> {
    for fam in m.families.values_mut() {
        for e in fam.iter_mut() {
            for x in 1..e.vertex.len() {
                let cur = e.vertex[x].clone();
                if let Some(g) = all_maps(cur.dom(), cur.cod()).into_iter().find(|g| *g != cur) {
                    e.vertex[x] = g;
                    return Ok(());
                }
            }
        }
    }
    Err(broken("vertex map with an alternative"))
}

const fn g1(name: &'static str, fixture: &'static str, breaks: &'static str, f: fn(&mut FakeGap1Morass) -> Result<()>) -> Mutation {
    Mutation { name, fixture, breaks, edit: Edit::Gap1(f) }
}

const fn g2(name: &'static str, fixture: &'static str, breaks: &'static str, f: fn(&mut FakeGap2Morass) -> Result<()>) -> Mutation {
    Mutation { name, fixture, breaks, edit: Edit::Gap2(f) }
}

pub const MUTATIONS: &[Mutation] = &[
    g1("theta0-two", "m3", "P0", theta0_two),
    g1("wrong-codomain", "m3", "P0", wrong_codomain),
    g1("drop-P2-map", "m3", "P2", drop_p2_map),
    g1("split-out-of-range", "m3", "P3", split_out_of_range),
    g1("split-mismatch", "m3", "P3", split_mismatch),
    g1("drop-successor-map", "m4", "P3", drop_successor_map),
    g1("successor-as-limit", "m3", "P4", successor_as_limit),
    g1("empty-limit-family", "m3-limit", "P5", empty_limit_family),
    g1("pad-top-level", "m3", "P5", pad_top_level),
    g1("extra-crossing-map", "m3", "Lemma 2.1", lemma21_cross),
    g2("drop-gap2-family", "minimal", "gap2 (0)", drop_gap2_family),
    g2("drop-composite-embedding", "two-step", "gap2 (2)", drop_composite_embedding),
    g2("gap2-split-mismatch", "minimal", "gap2 (3)", gap2_split_mismatch),
    g2("gap2-successor-as-limit", "two-step", "gap2 (4)", gap2_successor_as_limit),
    g2("gap2-empty-limit-family", "minimal-limit", "gap2 (5)", gap2_empty_limit_family),
    g2("embedding-level-codomain", "minimal", "embedding (1)", embedding_level_codomain),
    g2("embedding-vertex-codomain", "minimal", "embedding (2)", embedding_vertex_codomain),
    g2("embedding-drop-action", "two-step", "embedding (3)", embedding_drop_action),
    g2("embedding-split-image", "two-step", "embedding (4)", embedding_split_image),
    g2("embedding-action-swap", "two-step", "embedding (5)", embedding_action_swap),
    g2("embedding-vertex-shift", "two-step", "embedding (6)", embedding_vertex_shift),
];

pub fn mutation(name: &str) -> Result<&'static Mutation> {
    MUTATIONS.iter().find(|m| m.name == name).ok_or_else(|| {
        let known: Vec<&str> = MUTATIONS.iter().map(|m| m.name).collect();
        Error::Parse(format!("unknown mutation {name:?}; known: {}", known.join(", ")))
    })
}
