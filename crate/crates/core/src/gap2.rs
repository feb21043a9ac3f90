//! Fake simplified gap-2 morasses: three-layer embeddings between initial
//! segments of one inner gap-1 morass.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

use crate::gap1::{pair_key, parse_pair, FakeGap1Morass, MorassTree, Vertex};
use crate::order::OrdMap;
use crate::report::{Check, Report};
use crate::{Error, Result};

/// An embedding of the segment `M↾θ` of the inner morass into `M↾θ′`.
///
/// `vertex[ζ]` is `f_ζ : φ_ζ -> φ_{f(ζ)}`; `gmap[(ζ,ξ)]` is the action
/// `f_{ζξ} : G_{ζξ} -> G_{f(ζ)f(ξ)}`, stored extensionally.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedding", into = "RawEmbedding")]
pub struct Gap1Embedding {
    pub level: OrdMap,
    pub vertex: Vec<OrdMap>,
    pub gmap: BTreeMap<(usize, usize), BTreeMap<OrdMap, OrdMap>>,
}

#[derive(Serialize, Deserialize)]
struct RawEmbedding {
    level: OrdMap,
    vertex: Vec<OrdMap>,
    gmap: BTreeMap<String, Vec<(OrdMap, OrdMap)>>,
}

impl TryFrom<RawEmbedding> for Gap1Embedding {
    type Error = Error;
    fn try_from(r: RawEmbedding) -> Result<Self> {
        let mut gmap = BTreeMap::new();
        for (k, v) in r.gmap {
            gmap.insert(parse_pair(&k)?, v.into_iter().collect());
        }
        if r.level.dom() == 0 || r.vertex.len() != r.level.dom() {
            return Err(Error::Parse("embedding needs one vertex map per level ≤ θ".into()));
        }
        Ok(Gap1Embedding { level: r.level, vertex: r.vertex, gmap })
    }
}

impl From<Gap1Embedding> for RawEmbedding {
    fn from(e: Gap1Embedding) -> Self {
        RawEmbedding {
            gmap: e.gmap.into_iter().map(|((a, b), m)| (pair_key(a, b), m.into_iter().collect())).collect(),
            level: e.level,
            vertex: e.vertex,
        }
    }
}

/// `G_{ζξ}` of the inner morass, with `G_{ζζ} = {id}`.
pub fn gfam(inner: &FakeGap1Morass, z: usize, x: usize) -> Vec<OrdMap> {
    inner.family(z, x)
}

fn in_g(inner: &FakeGap1Morass, z: usize, x: usize, b: &OrdMap) -> bool {
    if z == x {
        return b.is_identity();
    }
    inner.family_ref(z, x).binary_search(b).is_ok()
}

/// `g^{-1} ∘ f` when every image of `f` lies in `rng g`.
fn factor_through(g: &OrdMap, f: &OrdMap) -> Option<OrdMap> {
    let img: Option<Vec<usize>> = f.images().iter().map(|&y| g.preimage(y)).collect();
    OrdMap::new(f.dom(), g.dom(), img?).ok()
}

impl Gap1Embedding {
    pub fn src_top(&self) -> usize {
        self.level.dom() - 1
    }

    pub fn dst_top(&self) -> usize {
        self.level.cod() - 1
    }

    pub fn at(&self, z: usize) -> usize {
        self.level.images()[z]
    }

    pub fn vertex_map(&self, z: usize) -> &OrdMap {
        &self.vertex[z]
    }

    /// `f_{ζξ}(b)`; identity arguments on `ζ == ξ` map to the identity.
    pub fn act(&self, z: usize, x: usize, b: &OrdMap) -> Option<OrdMap> {
        if z == x {
            return b.is_identity().then(|| OrdMap::identity(self.vertex[z].cod()));
        }
        self.gmap.get(&(z, x))?.get(b).cloned()
    }

    /// The embedding that is the identity on `M↾θ`.
    pub fn identity(inner: &FakeGap1Morass, theta: usize) -> Self {
        let vertex = (0..=theta).map(|z| OrdMap::identity(inner.theta(z))).collect();
        let mut gmap = BTreeMap::new();
        for x in 1..=theta {
            for z in 0..x {
                gmap.insert((z, x), gfam(inner, z, x).into_iter().map(|b| (b.clone(), b)).collect());
            }
        }
        Gap1Embedding { level: OrdMap::identity(theta + 1), vertex, gmap }
    }

    /// Restriction to the segment `M↾ν`, an embedding into `M↾f(ν)`.
    pub fn restrict(&self, nu: usize) -> Result<Self> {
        if nu > self.src_top() {
            return Err(Error::OutOfRange(format!("cannot restrict to {nu} above θ = {}", self.src_top())));
        }
        let level = self.level.restrict_tight(nu + 1)?;
        let vertex = self.vertex[..=nu].to_vec();
        let gmap = self.gmap.iter().filter(|(&(_, x), _)| x <= nu).map(|(k, v)| (*k, v.clone())).collect();
        Ok(Gap1Embedding { level, vertex, gmap })
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Gap1Embedding) -> Result<Self> {
        if g.dst_top() != self.src_top() {
            return Err(Error::DomainMismatch(format!(
                "inner embedding lands in θ = {}, outer starts at θ = {}",
                g.dst_top(),
                self.src_top()
            )));
        }
        let level = self.level.compose(&g.level)?;
        let mut vertex = Vec::with_capacity(g.vertex.len());
        for (z, gz) in g.vertex.iter().enumerate() {
            vertex.push(self.vertex[g.at(z)].compose(gz)?);
        }
        let mut gmap = BTreeMap::new();
        for (&(z, x), act) in &g.gmap {
            let (gz, gx) = (g.at(z), g.at(x));
            let mut m = BTreeMap::new();
            for (b, c) in act {
                let d = self.act(gz, gx, c).ok_or_else(|| {
                    Error::DomainMismatch(format!("outer embedding has no action on {c} at ({gz},{gx})"))
                })?;
                m.insert(b.clone(), d);
            }
            gmap.insert((z, x), m);
        }
        Ok(Gap1Embedding { level, vertex, gmap })
    }

    /// Embedding properties (1)–(6) against the inner morass, as
    /// `(property, witness)` failures.
    pub fn failures(&self, inner: &FakeGap1Morass, theta: usize, theta2: usize) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        fn fail(out: &mut Vec<(String, Value)>, p: &str, w: Value) {
            out.push((format!("embedding ({p})"), w));
        }
        if self.level.dom() != theta + 1 || self.level.cod() != theta2 + 1 || self.at(theta) != theta2 {
            fail(&mut out, "1", json!({"level": self.level.to_string(), "expected": [theta, theta2]}));
            return out;
        }
        if theta2 > inner.height() {
            fail(&mut out, "1", json!({"problem": "target segment above the inner morass", "theta2": theta2}));
            return out;
        }
        for z in 0..=theta {
            let fz = &self.vertex[z];
            if fz.dom() != inner.theta(z) || fz.cod() != inner.theta(self.at(z)) {
                fail(&mut out, "2", json!({"zeta": z, "map": fz.to_string(), "expected": [inner.theta(z), inner.theta(self.at(z))]}));
            }
        }
        for x in 1..=theta {
            for z in 0..x {
                let act = self.gmap.get(&(z, x));
                for b in gfam(inner, z, x) {
                    match act.and_then(|a| a.get(&b)) {
                        Some(c) if in_g(inner, self.at(z), self.at(x), c) => {}
                        other => fail(&mut out, 
                            "3",
                            json!({"pair": [z, x], "b": b.to_string(), "image": other.map(|c| c.to_string())}),
                        ),
                    }
                }
                if let Some(a) = act {
                    if a.len() != gfam(inner, z, x).len() {
                        fail(&mut out, "3", json!({"pair": [z, x], "problem": "action defined outside G"}));
                    }
                }
            }
        }
        for z in 0..theta {
            match (inner.split(z), inner.split(self.at(z))) {
                (Some(d), Some(d2)) => {
                    if self.vertex[z].apply(d).ok() != Some(d2) {
                        fail(&mut out, "4", json!({"zeta": z, "split": d, "image": self.vertex[z].apply(d).ok(), "target_split": d2}));
                    }
                }
                (Some(d), None) => fail(&mut out, "4", json!({"zeta": z, "split": d, "problem": "target step has no split"})),
                (None, _) => {}
            }
        }
        if out.iter().any(|(p, _)| p == "embedding (3)") {
            return out;
        }
        for e in 2..=theta {
            for x in 1..e {
                for z in 0..x {
                    for b in gfam(inner, z, x) {
                        for c in gfam(inner, x, e) {
                            let Ok(cb) = c.compose(&b) else { continue };
                            let lhs = self.act(z, e, &cb);
                            let rhs = match (self.act(x, e, &c), self.act(z, x, &b)) {
                                (Some(u), Some(v)) => u.compose(&v).ok(),
                                _ => None,
                            };
                            if lhs.is_none() || lhs != rhs {
                                fail(&mut out, "5", json!({"levels": [z, x, e], "b": b.to_string(), "c": c.to_string()}));
                            }
                        }
                    }
                }
            }
        }
        for x in 1..=theta {
            for z in 0..x {
                for b in gfam(inner, z, x) {
                    let lhs = self.vertex[x].compose(&b).ok();
                    let rhs = self.act(z, x, &b).and_then(|c| c.compose(&self.vertex[z]).ok());
                    if lhs.is_none() || lhs != rhs {
                        fail(&mut out, "6", json!({"pair": [z, x], "b": b.to_string()}));
                    }
                }
            }
        }
        out
    }

    /// Left-branching shape from `M↾θ` into `M↾θ′` with top map `f_θ`.
    pub fn is_left_branching(&self, inner: &FakeGap1Morass) -> bool {
        let th = self.src_top();
        let ft = &self.vertex[th];
        self.level.is_identity_below(th)
            && (0..th).all(|z| self.vertex[z].is_identity())
            && self.gmap.iter().all(|(&(_, x), act)| {
                act.iter().all(|(b, c)| if x < th { b == c } else { ft.compose(b).as_ref() == Ok(c) })
            })
            && in_g(inner, th, self.dst_top(), ft)
    }

    /// The `η` of a right-branching embedding, if the shape matches.
    pub fn right_branching_eta(&self, inner: &FakeGap1Morass) -> Option<usize> {
        let th = self.src_top();
        let eta = (0..th).find(|&z| self.at(z) != z)?;
        let shape = (0..=th - eta).all(|k| self.at(eta + k) == th + k)
            && (0..eta).all(|z| self.vertex[z].is_identity())
            && self.gmap.iter().filter(|(&(_, x), _)| x < eta).all(|(_, a)| a.iter().all(|(b, c)| b == c))
            && in_g(inner, eta, th, &self.vertex[eta]);
        if !shape {
            return None;
        }
        for x in eta + 1..=th {
            for z in eta..x {
                let img: BTreeSet<&OrdMap> = self.gmap.get(&(z, x))?.values().collect();
                let want = gfam(inner, self.at(z), self.at(x));
                if img.len() != want.len() || !want.iter().all(|w| img.contains(w)) {
                    return None;
                }
            }
        }
        Some(eta)
    }
}

/// The left-branching embedding `M↾θ -> M↾θ′` determined by `f_top ∈ G_{θθ′}`.
pub fn make_left_branching(inner: &FakeGap1Morass, theta: usize, theta2: usize, f_top: &OrdMap) -> Result<Gap1Embedding> {
    if theta2 <= theta || theta2 > inner.height() {
        return Err(Error::Precondition(format!("no extension from {theta} to {theta2}")));
    }
    if !in_g(inner, theta, theta2, f_top) {
        return Err(Error::InvalidChoice(format!("{f_top} is not in G_{{{theta},{theta2}}}")));
    }
    let mut e = Gap1Embedding::identity(inner, theta);
    let mut img = (0..theta).collect::<Vec<_>>();
    img.push(theta2);
    e.level = OrdMap::new(theta + 1, theta2 + 1, img)?;
    e.vertex[theta] = f_top.clone();
    for z in 0..theta {
        let act = gfam(inner, z, theta).into_iter().map(|b| (b.clone(), f_top.compose(&b).expect("composable"))).collect();
        e.gmap.insert((z, theta), act);
    }
    Ok(e)
}

/// The right-branching embedding with split `η` and `f_η = f_eta`.
///
/// The actions on `G_{ζ,ζ+1}` for `η ≤ ζ < θ` are chosen among the
/// bijections onto the shifted steps; everything else is forced by
/// (5) and (6).  The first choice (in lexicographic order) passing all
/// checks is returned.
pub fn make_right_branching(inner: &FakeGap1Morass, theta: usize, eta: usize, f_eta: &OrdMap) -> Result<Gap1Embedding> {
    if eta >= theta {
        return Err(Error::Precondition(format!("η = {eta} must be below θ = {theta}")));
    }
    let theta2 = 2 * theta - eta;
    if theta2 > inner.height() {
        return Err(Error::Precondition(format!("inner morass has height {} < {theta2}", inner.height())));
    }
    if !in_g(inner, eta, theta, f_eta) {
        return Err(Error::InvalidChoice(format!("{f_eta} is not in G_{{{eta},{theta}}}")));
    }
    let level = OrdMap::new(theta + 1, theta2 + 1, (0..=theta).map(|z| if z < eta { z } else { theta + z - eta }).collect())?;
    // candidate bijections per step
    let steps: Vec<Vec<BTreeMap<OrdMap, OrdMap>>> = (eta..theta)
        .map(|z| {
            let src = gfam(inner, z, z + 1);
            let dst = gfam(inner, level.images()[z], level.images()[z + 1]);
            permutations(&dst)
                .into_iter()
                .filter(|p| p.len() == src.len())
                .map(|p| src.iter().cloned().zip(p).collect())
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; steps.len()];
    let mut tried = 0usize;
    loop {
        if steps.iter().any(|s| s.is_empty()) {
            break;
        }
        tried += 1;
        let pick: Vec<&BTreeMap<OrdMap, OrdMap>> = steps.iter().zip(&choice).map(|(s, &i)| &s[i]).collect();
        if let Some(e) = assemble_right(inner, theta, eta, &level, f_eta, &pick) {
            if e.failures(inner, theta, theta2).is_empty() && e.right_branching_eta(inner) == Some(eta) {
                return Ok(e);
            }
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Err(Error::Construction(format!(
                    "no right-branching embedding with η = {eta}, f_η = {f_eta} ({tried} step choices tried)"
                )));
            }
            choice[i] += 1;
            if choice[i] < steps[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    Err(Error::Construction(format!("no bijection between shifted steps for η = {eta}")))
}

fn permutations(v: &[OrdMap]) -> Vec<Vec<OrdMap>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn assemble_right(
    inner: &FakeGap1Morass,
    theta: usize,
    eta: usize,
    level: &OrdMap,
    f_eta: &OrdMap,
    steps: &[&BTreeMap<OrdMap, OrdMap>],
) -> Option<Gap1Embedding> {
    let lv = |z: usize| level.images()[z];
    let mut vertex: Vec<OrdMap> = (0..eta).map(|z| OrdMap::identity(inner.theta(z))).collect();
    vertex.push(f_eta.clone());
    // f_{ζ+1} from (6) on the step ζ -> ζ+1
    for (k, act) in steps.iter().enumerate() {
        let z = eta + k;
        let mut img: Vec<Option<usize>> = vec![None; inner.theta(z + 1)];
        for (b, c) in act.iter() {
            for x in 0..b.dom() {
                let y = c.images()[vertex[z].images()[x]];
                let slot = &mut img[b.images()[x]];
                if slot.is_some_and(|v| v != y) {
                    return None;
                }
                *slot = Some(y);
            }
        }
        let img: Vec<usize> = img.into_iter().collect::<Option<_>>()?;
        vertex.push(OrdMap::new(inner.theta(z + 1), inner.theta(lv(z + 1)), img).ok()?);
    }
    let mut gmap: BTreeMap<(usize, usize), BTreeMap<OrdMap, OrdMap>> = BTreeMap::new();
    for x in 1..=theta {
        for z in 0..x {
            let mut act = BTreeMap::new();
            if x < eta {
                for b in gfam(inner, z, x) {
                    act.insert(b.clone(), b);
                }
            } else if z < eta {
                for b in gfam(inner, z, x) {
                    let c = vertex[x].compose(&b).ok()?;
                    act.insert(b, c);
                }
            } else {
                // paths of steps from z to x
                let mut cur: BTreeMap<OrdMap, OrdMap> = gfam(inner, z, z).into_iter().map(|b| {
                    let id = OrdMap::identity(inner.theta(lv(z)));
                    (b, id)
                }).collect();
                for w in z..x {
                    let mut next: BTreeMap<OrdMap, OrdMap> = BTreeMap::new();
                    for (b, c) in &cur {
                        for (s, t) in steps[w - eta].iter() {
                            let nb = s.compose(b).ok()?;
                            let nc = t.compose(c).ok()?;
                            if next.get(&nb).is_some_and(|old| *old != nc) {
                                return None;
                            }
                            next.insert(nb, nc);
                        }
                    }
                    cur = next;
                }
                act = cur;
            }
            gmap.insert((z, x), act);
        }
    }
    Some(Gap1Embedding { level: level.clone(), vertex, gmap })
}

/// The `f̄ / f^#` factorization of an embedding at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarDecomposition {
    pub zeta: usize,
    pub bar_level: usize,
    pub bar_vertex: OrdMap,
    pub sharp: OrdMap,
    /// `f̄_{ξζ}` for `ξ < ζ`, keyed by `ξ`.
    pub bar_gmaps: BTreeMap<usize, BTreeMap<OrdMap, OrdMap>>,
}

/// Factor `f_ζ = f^#(ζ) ∘ f̄_ζ` by exhaustive search over `G_{f̄(ζ)f(ζ)}`.
pub fn bar_decompose(inner: &FakeGap1Morass, f: &Gap1Embedding, zeta: usize) -> Result<BarDecomposition> {
    if zeta > f.src_top() {
        return Err(Error::OutOfRange(format!("ζ = {zeta} above θ = {}", f.src_top())));
    }
    let bar = f.level.ssup_image(zeta)?;
    let fz = f.at(zeta);
    let mut found = Vec::new();
    'g: for g in gfam(inner, bar, fz) {
        let Some(bv) = factor_through(&g, &f.vertex[zeta]) else { continue };
        let mut gm = BTreeMap::new();
        for xi in 0..zeta {
            let mut act = BTreeMap::new();
            for b in gfam(inner, xi, zeta) {
                let Some(c) = f.act(xi, zeta, &b) else { continue 'g };
                let Some(d) = factor_through(&g, &c) else { continue 'g };
                if !in_g(inner, f.at(xi), bar, &d) {
                    continue 'g;
                }
                act.insert(b, d);
            }
            gm.insert(xi, act);
        }
        found.push(BarDecomposition { zeta, bar_level: bar, bar_vertex: bv, sharp: g, bar_gmaps: gm });
    }
    match found.len() {
        1 => Ok(found.pop().expect("one")),
        n => Err(Error::Inconsistent(format!("{n} factorizations of f_{zeta} through G_{{{bar},{fz}}}"))),
    }
}

impl BarDecomposition {
    /// Lemma 2.6 (1)–(5) for this decomposition; returns the failing clause.
    pub fn failures(&self, inner: &FakeGap1Morass, f: &Gap1Embedding) -> Vec<(String, Value)> {
        let z = self.zeta;
        let mut out = Vec::new();
        let w = |c: &str, v: Value| (format!("Lemma 2.6({c})"), v);
        if self.sharp.compose(&self.bar_vertex).as_ref() != Ok(&f.vertex[z]) {
            out.push(w("1", json!({"zeta": z})));
        }
        for (&xi, act) in &self.bar_gmaps {
            for (b, d) in act {
                if self.sharp.compose(d).ok() != f.act(xi, z, b) {
                    out.push(w("2", json!({"zeta": z, "xi": xi, "b": b.to_string()})));
                }
                // (4)
                let lhs = self.bar_vertex.compose(b).ok();
                let rhs = d.compose(&f.vertex[xi]).ok();
                if lhs.is_none() || lhs != rhs {
                    out.push(w("4", json!({"zeta": z, "xi": xi, "b": b.to_string()})));
                }
            }
        }
        // (3): every b ∈ G_{ξ f̄(ζ)} with ξ < f̄(ζ) factors as f̄_{ηζ}(c) ∘ d
        for xi in 0..self.bar_level {
            for b in gfam(inner, xi, self.bar_level) {
                let ok = self.bar_gmaps.iter().any(|(&e, act)| {
                    f.at(e) >= xi
                        && act.values().any(|fc| {
                            gfam(inner, xi, f.at(e)).iter().any(|d| fc.compose(d).as_ref() == Ok(&b))
                        })
                });
                if !ok {
                    out.push(w("3", json!({"zeta": z, "xi": xi, "b": b.to_string()})));
                }
            }
        }
        // (5)
        for xi in 0..z {
            for eta in 0..xi {
                for b in gfam(inner, xi, z) {
                    for c in gfam(inner, eta, xi) {
                        let Ok(bc) = b.compose(&c) else { continue };
                        let lhs = self.bar_gmaps.get(&eta).and_then(|a| a.get(&bc)).cloned();
                        let rhs = match (self.bar_gmaps.get(&xi).and_then(|a| a.get(&b)), f.act(eta, xi, &c)) {
                            (Some(u), Some(v)) => u.compose(&v).ok(),
                            _ => None,
                        };
                        if lhs.is_none() || lhs != rhs {
                            out.push(w("5", json!({"zeta": z, "levels": [eta, xi], "b": b.to_string(), "c": c.to_string()})));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Lemma 2.6(6) for `f ∘ g` at `ζ`, from three independent decompositions.
pub fn composition_identity_failure(
    inner: &FakeGap1Morass,
    f: &Gap1Embedding,
    g: &Gap1Embedding,
    zeta: usize,
) -> Result<Option<Value>> {
    let fg = f.compose(g)?;
    let dg = bar_decompose(inner, g, zeta)?;
    let dfg = bar_decompose(inner, &fg, zeta)?;
    let df = bar_decompose(inner, f, dg.bar_level)?;
    let vertex_ok = df.bar_vertex.compose(&dg.bar_vertex).as_ref() == Ok(&dfg.bar_vertex);
    let sharp_rhs = f
        .act(dg.bar_level, g.at(zeta), &dg.sharp)
        .and_then(|a| a.compose(&df.sharp).ok());
    let sharp_ok = sharp_rhs.as_ref() == Some(&dfg.sharp);
    let mut gm_ok = true;
    for (&xi, act) in &dg.bar_gmaps {
        for (b, d) in act {
            let lhs = dfg.bar_gmaps.get(&xi).and_then(|a| a.get(b));
            let rhs = df.bar_gmaps.get(&g.at(xi)).and_then(|a| a.get(d));
            if lhs.is_none() || lhs != rhs {
                gm_ok = false;
            }
        }
    }
    Ok((!(vertex_ok && sharp_ok && gm_ok)).then(|| {
        json!({"zeta": zeta, "vertex": vertex_ok, "sharp": sharp_ok, "gmaps": gm_ok})
    }))
}

/// A finite simplified gap-2 morass over a fixed inner gap-1 morass.
///
/// `splits[α]` is the `η` of the right-branching member of `F_{α,α+1}`
/// (`None` at limit steps).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGap2", into = "RawGap2")]
pub struct FakeGap2Morass {
    pub(crate) inner: FakeGap1Morass,
    pub(crate) theta: Vec<usize>,
    pub(crate) families: BTreeMap<(usize, usize), Vec<Gap1Embedding>>,
    pub(crate) splits: Vec<Option<usize>>,
    pub(crate) limits: BTreeMap<usize, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGap2 {
    theta: Vec<usize>,
    phi: Vec<usize>,
    #[serde(rename = "G")]
    g: FakeGap1Morass,
    embeddings: BTreeMap<String, Vec<Gap1Embedding>>,
    limits: Vec<usize>,
    splits: Vec<Option<usize>>,
}

impl TryFrom<RawGap2> for FakeGap2Morass {
    type Error = Error;
    fn try_from(r: RawGap2) -> Result<Self> {
        if r.phi != r.g.thetas() {
            return Err(Error::Parse("phi does not match the inner morass levels".into()));
        }
        let h = r.theta.len().checked_sub(1).ok_or_else(|| Error::Parse("empty theta".into()))?;
        if r.splits.len() != h {
            return Err(Error::Parse(format!("expected {h} split entries")));
        }
        let mut families = BTreeMap::new();
        for (k, mut v) in r.embeddings {
            let (a, b) = parse_pair(&k)?;
            if a >= b || b > h {
                return Err(Error::Parse(format!("embedding key {k:?} out of range")));
            }
            v.sort();
            v.dedup();
            families.insert((a, b), v);
        }
        let limits = r.limits.into_iter().map(|l| (l, vec![l.saturating_sub(1)])).collect();
        Ok(FakeGap2Morass { inner: r.g, theta: r.theta, families, splits: r.splits, limits })
    }
}

impl From<FakeGap2Morass> for RawGap2 {
    fn from(m: FakeGap2Morass) -> Self {
        RawGap2 {
            phi: m.inner.thetas().to_vec(),
            theta: m.theta,
            embeddings: m.families.into_iter().map(|((a, b), v)| (pair_key(a, b), v)).collect(),
            limits: m.limits.keys().copied().collect(),
            splits: m.splits,
            g: m.inner,
        }
    }
}

fn compose_families(outer: &[Gap1Embedding], inner: &[Gap1Embedding]) -> Result<Vec<Gap1Embedding>> {
    let mut s = BTreeSet::new();
    for f in outer {
        for g in inner {
            s.insert(f.compose(g)?);
        }
    }
    Ok(s.into_iter().collect())
}

impl FakeGap2Morass {
    /// The one-level gap-2 morass `θ = [1]` over `inner`.
    pub fn new(inner: FakeGap1Morass) -> Result<Self> {
        if inner.height() < 1 {
            return Err(Error::Precondition("the inner morass needs a level 1".into()));
        }
        Ok(FakeGap2Morass { inner, theta: vec![1], families: BTreeMap::new(), splits: vec![], limits: BTreeMap::new() })
    }

    pub fn inner(&self) -> &FakeGap1Morass {
        &self.inner
    }

    pub fn height(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self, a: usize) -> usize {
        self.theta[a]
    }

    pub fn thetas(&self) -> &[usize] {
        &self.theta
    }

    pub fn top_theta(&self) -> usize {
        *self.theta.last().expect("nonempty")
    }

    pub fn split(&self, a: usize) -> Option<usize> {
        self.splits.get(a).copied().flatten()
    }

    pub fn is_limit(&self, l: usize) -> bool {
        self.limits.contains_key(&l)
    }

    pub fn family(&self, a: usize, b: usize) -> Vec<Gap1Embedding> {
        if a == b {
            return vec![Gap1Embedding::identity(&self.inner, self.theta[a])];
        }
        self.families.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn family_ref(&self, a: usize, b: usize) -> &[Gap1Embedding] {
        self.families.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    /// The right-branching member of `F_{α,α+1}`.
    pub fn right_branching(&self, a: usize) -> Option<&Gap1Embedding> {
        self.family_ref(a, a + 1).iter().find(|e| e.right_branching_eta(&self.inner).is_some())
    }

    /// Append `θ_{α+1} = 2θ_α − η` with the amalgamation for `(η, f_η)`.
    pub fn amalgamate(&self, eta: usize, f_eta: &OrdMap) -> Result<Self> {
        let a = self.height();
        let th = self.theta[a];
        let right = make_right_branching(&self.inner, th, eta, f_eta)?;
        let th2 = right.dst_top();
        let mut step = BTreeSet::new();
        for ft in gfam(&self.inner, th, th2) {
            step.insert(make_left_branching(&self.inner, th, th2, &ft)?);
        }
        step.insert(right);
        let step: Vec<Gap1Embedding> = step.into_iter().collect();
        let mut m = self.clone();
        m.theta.push(th2);
        m.splits.push(Some(eta));
        for b in 0..a {
            m.families.insert((b, a + 1), compose_families(&step, self.family_ref(b, a))?);
        }
        m.families.insert((a, a + 1), step);
        Ok(m)
    }

    /// Append a limit level that is an identity copy of the current top.
    pub fn attach_identity_limit(&self) -> Result<Self> {
        let a = self.height();
        let id = Gap1Embedding::identity(&self.inner, self.theta[a]);
        let mut m = self.clone();
        m.theta.push(self.theta[a]);
        m.splits.push(None);
        m.limits.insert(a + 1, vec![a]);
        for b in 0..a {
            m.families.insert((b, a + 1), self.family_ref(b, a).to_vec());
        }
        m.families.insert((a, a + 1), vec![id]);
        Ok(m)
    }

    /// The simplified gap-1 morass `⟨θ_α⟩, F′_{αβ} = {f↾θ_α}` over the θ-levels.
    pub fn theta_morass(&self) -> FakeGap1Morass {
        let families = self
            .families
            .iter()
            .map(|(&(a, b), fam)| {
                let mut v: Vec<OrdMap> = fam
                    .iter()
                    .filter_map(|f| f.level.restrict(self.theta[a]).and_then(|r| r.with_cod(self.theta[b])).ok())
                    .collect();
                v.sort();
                v.dedup();
                ((a, b), v)
            })
            .collect();
        FakeGap1Morass { theta: self.theta.clone(), families, splits: self.splits.clone(), limits: self.limits.clone() }
    }

    /// The tree of the θ-morass.
    pub fn theta_tree(&self) -> Result<MorassTree> {
        MorassTree::build(&self.theta_morass())
    }

    /// `π′_st`: the restriction of any `f ∈ F_{αβ}` with `f(ν) = τ` to `M↾ν`.
    pub fn pi_prime(&self, s: Vertex, t: Vertex) -> Option<Gap1Embedding> {
        if s == t {
            return Some(Gap1Embedding::identity(&self.inner, s.1));
        }
        self.family_ref(s.0, t.0).iter().find(|f| f.at(s.1) == t.1).and_then(|f| f.restrict(s.1).ok())
    }

    fn structure_failure(&self) -> Option<Value> {
        if self.theta[0] != 1 {
            return Some(json!({"theta_0": self.theta[0]}));
        }
        if self.top_theta() > self.inner.height() {
            return Some(json!({"problem": "θ-top above the inner morass", "top": self.top_theta()}));
        }
        if self.theta.windows(2).any(|w| w[1] < w[0]) {
            return Some(json!({"problem": "θ decreases", "theta": self.theta}));
        }
        for b in 1..=self.height() {
            for a in 0..b {
                if !self.families.contains_key(&(a, b)) {
                    return Some(json!({"missing_family": [a, b]}));
                }
            }
        }
        None
    }

    fn embedding_failures(&self) -> BTreeMap<String, Value> {
        let mut out: BTreeMap<String, Value> = BTreeMap::new();
        for (&(a, b), fam) in &self.families {
            for (i, f) in fam.iter().enumerate() {
                for (p, w) in f.failures(&self.inner, self.theta[a], self.theta[b]) {
                    out.entry(p).or_insert_with(|| json!({"family": [a, b], "member": i, "detail": w}));
                }
            }
        }
        out
    }

    fn axiom2_failure(&self) -> Option<Value> {
        for c in 2..=self.height() {
            for b in 1..c {
                for a in 0..b {
                    let comp = match compose_families(self.family_ref(b, c), self.family_ref(a, b)) {
                        Ok(v) => v,
                        Err(e) => return Some(json!({"triple": [a, b, c], "error": e.to_string()})),
                    };
                    let have = self.family_ref(a, c);
                    if comp.as_slice() != have {
                        let missing = comp.iter().filter(|f| !have.contains(f)).count();
                        let extra = have.iter().filter(|f| !comp.contains(f)).count();
                        return Some(json!({"triple": [a, b, c], "missing": missing, "extra": extra}));
                    }
                }
            }
        }
        None
    }

    fn axiom3_failure(&self) -> Option<Value> {
        for a in 0..self.height() {
            if self.is_limit(a + 1) {
                continue;
            }
            let (th, th2) = (self.theta[a], self.theta[a + 1]);
            let fam = self.family_ref(a, a + 1);
            let mut rights = 0;
            for (i, f) in fam.iter().enumerate() {
                let left = f.is_left_branching(&self.inner);
                let right = f.right_branching_eta(&self.inner);
                match (left, right) {
                    (true, _) => {}
                    (false, Some(eta)) => {
                        rights += 1;
                        if Some(eta) != self.split(a) {
                            return Some(json!({"step": a, "member": i, "eta": eta, "recorded": self.split(a)}));
                        }
                    }
                    (false, None) => return Some(json!({"step": a, "member": i, "problem": "neither left- nor right-branching"})),
                }
            }
            if rights != 1 {
                return Some(json!({"step": a, "right_branching_members": rights}));
            }
            for ft in gfam(&self.inner, th, th2) {
                let Ok(l) = make_left_branching(&self.inner, th, th2, &ft) else {
                    return Some(json!({"step": a, "problem": "left-branching construction failed"}));
                };
                if !fam.contains(&l) {
                    return Some(json!({"step": a, "missing_left_branching_top": ft.to_string()}));
                }
            }
        }
        None
    }

    fn axiom4_failure(&self) -> Option<Value> {
        for &l in self.limits.keys() {
            for b1 in 0..l {
                for b2 in b1..l {
                    for (i1, f1) in self.family_ref(b1, l).iter().enumerate() {
                        for (i2, f2) in self.family_ref(b2, l).iter().enumerate() {
                            let ok = (b2..l).any(|g| {
                                self.family(g, l).iter().any(|k| {
                                    let fac = |b: usize, f: &Gap1Embedding| {
                                        self.family(b, g).iter().any(|j| k.compose(j).as_ref() == Ok(f))
                                    };
                                    fac(b1, f1) && fac(b2, f2)
                                })
                            });
                            if !ok {
                                return Some(json!({"limit": l, "pair": [[b1, i1], [b2, i2]]}));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn axiom5_failure(&self) -> Option<Value> {
        for &l in self.limits.keys() {
            let tl = self.theta[l];
            let mut cov_theta = vec![false; tl];
            let mut cov_phi: Vec<Vec<bool>> = (0..=tl).map(|z| vec![false; self.inner.theta(z)]).collect();
            let mut cov_g: BTreeMap<(usize, usize), BTreeSet<OrdMap>> = BTreeMap::new();
            for b in 0..l {
                for f in self.family_ref(b, l) {
                    for z in 0..self.theta[b] {
                        cov_theta[f.at(z)] = true;
                    }
                    for z in 0..=self.theta[b] {
                        for &x in f.vertex[z].images() {
                            cov_phi[f.at(z)][x] = true;
                        }
                    }
                    for (&(z, x), act) in &f.gmap {
                        cov_g.entry((f.at(z), f.at(x))).or_default().extend(act.values().cloned());
                    }
                }
            }
            if let Some(x) = cov_theta.iter().position(|c| !c) {
                return Some(json!({"clause": "a", "limit": l, "uncovered": x}));
            }
            for (z, row) in cov_phi.iter().enumerate() {
                if let Some(x) = row.iter().position(|c| !c) {
                    return Some(json!({"clause": "b", "limit": l, "zeta": z, "uncovered": x}));
                }
            }
            for x in 1..=tl {
                for z in 0..x {
                    let have = cov_g.get(&(z, x));
                    for b in gfam(&self.inner, z, x) {
                        if !have.is_some_and(|h| h.contains(&b)) {
                            return Some(json!({"clause": "c", "limit": l, "pair": [z, x], "uncovered": b.to_string()}));
                        }
                    }
                }
            }
        }
        None
    }

    fn lemma24_failure(&self) -> Option<Value> {
        for (&(a, b), fam) in &self.families {
            for (i1, f1) in fam.iter().enumerate() {
                for (i2, f2) in fam.iter().enumerate().skip(i1) {
                    for z1 in 0..self.theta[a] {
                        let Some(z2) = f2.level.restrict(self.theta[a]).ok().and_then(|r| r.preimage(f1.at(z1))) else {
                            continue;
                        };
                        let agree = z1 == z2
                            && f1.level.images()[..z1] == f2.level.images()[..z1]
                            && (0..=z1).all(|x| f1.vertex[x] == f2.vertex[x])
                            && f1.gmap.iter().filter(|(&(_, x), _)| x <= z1).all(|(k, v)| f2.gmap.get(k) == Some(v));
                        if !agree {
                            return Some(json!({"family": [a, b], "members": [i1, i2], "zeta": [z1, z2]}));
                        }
                    }
                }
            }
        }
        None
    }

    fn lemma25_failure(&self) -> (Option<Value>, Option<Value>) {
        let mut a_fail = None;
        'a: for x in 1..=self.inner.height() {
            for z in 0..x {
                if !in_g(&self.inner, z, x, &OrdMap::inclusion(self.inner.theta(z), self.inner.theta(x)).expect("fits")) {
                    a_fail = Some(json!({"pair": [z, x]}));
                    break 'a;
                }
            }
        }
        let b_fail = self.families.iter().find_map(|(&(a, b), fam)| {
            (!fam.iter().any(|f| f.level.is_identity_below(self.theta[a]))).then(|| json!({"family": [a, b]}))
        });
        (a_fail, b_fail)
    }

    /// Bar decompositions at every `(f, ζ)`; Lemma 2.6 (1)–(5) on each and
    /// (6) on every composable pair.
    pub fn bar_report(&self) -> Report {
        let mut r = Report::new("bar-decomposition");
        let mut count = 0usize;
        let mut uniq: Option<Value> = None;
        let mut clauses: BTreeMap<String, Value> = BTreeMap::new();
        for (&(a, b), fam) in &self.families {
            for (i, f) in fam.iter().enumerate() {
                for z in 0..=self.theta[a] {
                    count += 1;
                    match bar_decompose(&self.inner, f, z) {
                        Ok(d) => {
                            for (c, w) in d.failures(&self.inner, f) {
                                clauses.entry(c).or_insert(json!({"family": [a, b], "member": i, "detail": w}));
                            }
                        }
                        Err(e) => {
                            uniq.get_or_insert(json!({"family": [a, b], "member": i, "zeta": z, "error": e.to_string()}));
                        }
                    }
                }
            }
        }
        let mut six: Option<Value> = None;
        'six: for c in 2..=self.height() {
            for b in 1..c {
                for a in 0..b {
                    for f in self.family_ref(b, c) {
                        for g in self.family_ref(a, b) {
                            for z in 0..=self.theta[a] {
                                match composition_identity_failure(&self.inner, f, g, z) {
                                    Ok(None) => {}
                                    Ok(Some(w)) => {
                                        six = Some(json!({"levels": [a, b, c], "detail": w}));
                                        break 'six;
                                    }
                                    Err(e) => {
                                        six = Some(json!({"levels": [a, b, c], "error": e.to_string()}));
                                        break 'six;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        r.push(Check::from_failure("unique factorization", uniq, json!({"decompositions": count})));
        for c in ["1", "2", "3", "4", "5"] {
            let name = format!("Lemma 2.6({c})");
            let w = clauses.remove(&name);
            r.push(Check::from_failure(name, w, json!(null)));
        }
        r.push(Check::from_failure("Lemma 2.6(6)", six, json!(null)));
        r
    }

    /// Gap-2 axioms, embedding properties and Lemmas 2.4 and 2.5.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("gap2-axioms");
        let inner = self.inner.validate();
        let inner_fail = inner.failures().next().map(|c| json!({"axiom": c.name, "witness": c.witness}));
        r.push(Check::from_failure("inner morass", inner_fail, json!({"phi": self.inner.thetas()})));
        let st = self.structure_failure();
        let broken = st.is_some();
        r.push(Check::from_failure("gap2 (0)", st, json!({"theta": self.theta})));
        if broken {
            return r;
        }
        r.push(Check::pass("gap2 (1)", json!("cardinality bound; vacuous for finite families")));
        let mut emb = self.embedding_failures();
        for p in 1..=6 {
            let name = format!("embedding ({p})");
            let w = emb.remove(&name);
            r.push(Check::from_failure(name, w, json!(null)));
        }
        r.push(Check::from_failure("gap2 (2)", self.axiom2_failure(), json!(null)));
        r.push(Check::from_failure("gap2 (3)", self.axiom3_failure(), json!({"splits": self.splits})));
        r.push(Check::from_failure("gap2 (4)", self.axiom4_failure(), json!({"form": "non-strict"})));
        r.push(Check::from_failure("gap2 (5)", self.axiom5_failure(), json!(null)));
        r.push(Check::from_failure("Lemma 2.4", self.lemma24_failure(), json!(null)));
        let (a, b) = self.lemma25_failure();
        r.push(Check::from_failure("Lemma 2.5(a)", a, json!(null)));
        r.push(Check::from_failure("Lemma 2.5(b)", b, json!(null)));
        let tm = self.theta_morass().validate();
        let tf = tm.failures().next().map(|c| json!({"axiom": c.name, "witness": c.witness}));
        r.push(Check::from_failure("theta morass", tf, json!(null)));
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("morass serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: usize, c: usize, i: &[usize]) -> OrdMap {
        OrdMap::new(d, c, i.to_vec()).unwrap()
    }

    fn minimal() -> FakeGap2Morass {
        let inner = FakeGap1Morass::from_splits(&[0, 1]).unwrap();
        FakeGap2Morass::new(inner).unwrap().amalgamate(0, &m(1, 2, &[1])).unwrap()
    }

    #[test]
    fn minimal_amalgamation_has_three_members() {
        let g = minimal();
        assert_eq!(g.thetas(), &[1, 2]);
        let fam = g.family_ref(0, 1);
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.iter().filter(|f| f.right_branching_eta(g.inner()).is_some()).count(), 1);
        let h = g.right_branching(0).unwrap();
        assert_eq!(h.vertex[1], m(2, 3, &[1, 2]));
        let rep = g.validate();
        assert!(rep.all_pass(), "{}", rep.to_json());
    }

    #[test]
    fn right_level_map_is_the_neat_gap1_map() {
        let g = minimal();
        let h = g.right_branching(0).unwrap();
        let neat = FakeGap1Morass::trivial().amalgamate_step(0, 1).unwrap().successor_map(0).unwrap();
        assert_eq!(h.level.restrict(1).unwrap().with_cod(2).unwrap(), neat);
    }

    #[test]
    fn branching_errors() {
        let inner = FakeGap1Morass::from_splits(&[0, 1]).unwrap();
        assert!(matches!(make_right_branching(&inner, 1, 1, &m(2, 2, &[0, 1])), Err(Error::Precondition(_))));
        assert!(matches!(make_left_branching(&inner, 1, 2, &m(2, 3, &[1, 2])), Err(Error::InvalidChoice(_))));
        // f_η = id violates split preservation here
        assert!(make_right_branching(&inner, 1, 0, &m(1, 2, &[0])).is_err());
    }

    #[test]
    fn composition_with_identity() {
        let g = minimal();
        for f in g.family_ref(0, 1) {
            let id0 = Gap1Embedding::identity(g.inner(), 1);
            let id1 = Gap1Embedding::identity(g.inner(), 2);
            assert_eq!(&f.compose(&id0).unwrap(), f);
            assert_eq!(&id1.compose(f).unwrap(), f);
        }
        let f = &g.family_ref(0, 1)[0];
        assert!(matches!(f.compose(f), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn bar_decomposition_of_right_branching_at_split() {
        let g = minimal();
        let h = g.right_branching(0).unwrap();
        let d = bar_decompose(g.inner(), h, 0).unwrap();
        assert_eq!(d.bar_level, 0);
        assert_eq!(d.bar_vertex, OrdMap::identity(1));
        assert_eq!(d.sharp, h.vertex[0]);
        assert!(g.bar_report().all_pass());
    }
}
