//! Fake simplified gap-1 morasses over finite levels.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

use crate::order::OrdMap;
use crate::report::{Check, Report};
use crate::{Error, Result};

/// A tree vertex `(level, point)`.
pub type Vertex = (usize, usize);

/// A finite simplified gap-1 morass.
///
/// `splits[α]` is the split point of the step `α -> α+1`, or `None` when
/// `α+1` is a designated limit level.  `limits` maps each limit level to its
/// designated predecessor levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGap1", into = "RawGap1")]
pub struct FakeGap1Morass {
    pub(crate) theta: Vec<usize>,
    pub(crate) families: BTreeMap<(usize, usize), Vec<OrdMap>>,
    pub(crate) splits: Vec<Option<usize>>,
    pub(crate) limits: BTreeMap<usize, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGap1 {
    theta: Vec<usize>,
    families: BTreeMap<String, Vec<OrdMap>>,
    limits: Vec<usize>,
    splits: Vec<Option<usize>>,
    #[serde(default)]
    limit_preds: BTreeMap<String, Vec<usize>>,
}

pub(crate) fn pair_key(a: usize, b: usize) -> String {
    format!("{a},{b}")
}

pub(crate) fn parse_pair(k: &str) -> Result<(usize, usize)> {
    let (a, b) = k.split_once(',').ok_or_else(|| Error::Parse(format!("bad family key {k:?}")))?;
    let p = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad family key {k:?}")));
    Ok((p(a)?, p(b)?))
}

impl TryFrom<RawGap1> for FakeGap1Morass {
    type Error = Error;
    fn try_from(r: RawGap1) -> Result<Self> {
        if r.theta.is_empty() {
            return Err(Error::Parse("theta must list at least level 0".into()));
        }
        let height = r.theta.len() - 1;
        if r.splits.len() != height {
            return Err(Error::Parse(format!("expected {height} split entries, got {}", r.splits.len())));
        }
        let mut families = BTreeMap::new();
        for (k, mut v) in r.families {
            let (a, b) = parse_pair(&k)?;
            if a >= b || b > height {
                return Err(Error::Parse(format!("family key {k:?} is not a pair a<b<={height}")));
            }
            v.sort();
            v.dedup();
            families.insert((a, b), v);
        }
        let mut limits = BTreeMap::new();
        for l in r.limits {
            if l == 0 || l > height {
                return Err(Error::Parse(format!("limit level {l} out of range")));
            }
            let preds = match r.limit_preds.get(&l.to_string()) {
                Some(p) => p.clone(),
                None => vec![l - 1],
            };
            limits.insert(l, preds);
        }
        Ok(FakeGap1Morass { theta: r.theta, families, splits: r.splits, limits })
    }
}

impl From<FakeGap1Morass> for RawGap1 {
    fn from(m: FakeGap1Morass) -> Self {
        RawGap1 {
            families: m.families.iter().map(|(&(a, b), v)| (pair_key(a, b), v.clone())).collect(),
            limits: m.limits.keys().copied().collect(),
            limit_preds: m.limits.iter().map(|(l, p)| (l.to_string(), p.clone())).collect(),
            theta: m.theta,
            splits: m.splits,
        }
    }
}

fn compose_all(outer: &[OrdMap], inner: &[OrdMap]) -> Result<Vec<OrdMap>> {
    let mut out = BTreeSet::new();
    for f in outer {
        for g in inner {
            out.insert(f.compose(g)?);
        }
    }
    Ok(out.into_iter().collect())
}

impl FakeGap1Morass {
    /// The one-level morass `θ = [1]`.
    pub fn trivial() -> Self {
        FakeGap1Morass { theta: vec![1], families: BTreeMap::new(), splits: vec![], limits: BTreeMap::new() }
    }

    /// Build by successive amalgamations with the given split points.
    pub fn from_splits(splits: &[usize]) -> Result<Self> {
        let mut m = Self::trivial();
        for &d in splits {
            let tail = m.top_theta() - d.min(m.top_theta());
            m = m.amalgamate_step(d, tail)?;
        }
        Ok(m)
    }

    pub fn height(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self, alpha: usize) -> usize {
        self.theta[alpha]
    }

    pub fn thetas(&self) -> &[usize] {
        &self.theta
    }

    pub fn top_theta(&self) -> usize {
        *self.theta.last().expect("nonempty")
    }

    pub fn split(&self, alpha: usize) -> Option<usize> {
        self.splits.get(alpha).copied().flatten()
    }

    pub fn splits(&self) -> &[Option<usize>] {
        &self.splits
    }

    pub fn is_limit(&self, lambda: usize) -> bool {
        self.limits.contains_key(&lambda)
    }

    pub fn limits(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.limits
    }

    /// `F_{αβ}`; for `α == β` the singleton identity.
    pub fn family(&self, alpha: usize, beta: usize) -> Vec<OrdMap> {
        if alpha == beta {
            return vec![OrdMap::identity(self.theta[alpha])];
        }
        self.families.get(&(alpha, beta)).cloned().unwrap_or_default()
    }

    pub fn family_ref(&self, alpha: usize, beta: usize) -> &[OrdMap] {
        self.families.get(&(alpha, beta)).map_or(&[], |v| v.as_slice())
    }

    /// The non-identity successor map `h_α`.
    pub fn successor_map(&self, alpha: usize) -> Option<OrdMap> {
        let d = self.split(alpha)?;
        OrdMap::shifted(self.theta[alpha], self.theta[alpha + 1], d, self.theta[alpha]).ok()
    }

    /// Append a successor level by amalgamation at split `delta`.
    ///
    /// The neat successor map forces `tail == θ_α - δ`; a shorter tail has
    /// no room for the shifted segment and a longer one leaves points uncovered.
    pub fn amalgamate_step(&self, delta: usize, tail: usize) -> Result<Self> {
        let alpha = self.height();
        let t = self.theta[alpha];
        if delta >= t {
            return Err(Error::InvalidSplit(format!("split {delta} not below θ_{alpha} = {t}")));
        }
        let need = t - delta;
        if tail < need {
            return Err(Error::axiom("P5", format!("tail {tail} < {need}: the shifted segment does not fit")));
        }
        if tail > need {
            return Err(Error::axiom("P5", format!("tail {tail} > {need}: points {}.. of the new level are not covered", t + need)));
        }
        let nt = t + tail;
        let h = OrdMap::shifted(t, nt, delta, t)?;
        let step = vec![OrdMap::inclusion(t, nt)?, h];
        let mut m = self.clone();
        m.theta.push(nt);
        m.splits.push(Some(delta));
        m.families.insert((alpha, alpha + 1), step.clone());
        for beta in 0..alpha {
            let fam = compose_all(&step, self.family_ref(beta, alpha))?;
            m.families.insert((beta, alpha + 1), fam);
        }
        Ok(m)
    }

    /// Append a designated limit level of size `theta_lambda` fed by the given maps.
    ///
    /// Families into the new level are the closure
    /// `F_{αλ} = ⋃ { S_γ ∘ F_{αγ} : γ designated, γ ≥ α }`.  Directedness is
    /// checked in the non-strict form (a common level `γ ≥ β₁, β₂`), since a
    /// finite limit has a largest predecessor.
    pub fn attach_limit_level(&self, theta_lambda: usize, cofinal: BTreeMap<usize, Vec<OrdMap>>) -> Result<Self> {
        let lambda = self.height() + 1;
        if cofinal.is_empty() {
            return Err(Error::axiom("P4", "no predecessor levels supplied"));
        }
        for (&b, maps) in &cofinal {
            if b >= lambda {
                return Err(Error::axiom("P4", format!("predecessor {b} is not below the new level {lambda}")));
            }
            for f in maps {
                if f.dom() != self.theta[b] || f.cod() != theta_lambda {
                    return Err(Error::axiom("P0", format!("map {f} is not θ_{b} -> {theta_lambda}")));
                }
            }
        }
        let mut m = self.clone();
        m.theta.push(theta_lambda);
        m.splits.push(None);
        m.limits.insert(lambda, cofinal.keys().copied().collect());
        for alpha in 0..lambda {
            let mut fam = BTreeSet::new();
            for (&g, maps) in cofinal.range(alpha..) {
                for f in maps {
                    for k in self.family(alpha, g) {
                        fam.insert(f.compose(&k)?);
                    }
                }
            }
            m.families.insert((alpha, lambda), fam.into_iter().collect());
        }
        if let Some(w) = m.p4_failure(lambda) {
            return Err(Error::axiom("P4", w.to_string()));
        }
        if let Some(w) = m.p2_failure_into(lambda) {
            return Err(Error::axiom("P4", format!("the supplied system is not directed: {w}")));
        }
        if let Some(w) = m.p5_failure(lambda) {
            return Err(Error::axiom("P5", w.to_string()));
        }
        Ok(m)
    }

    /// The degenerate limit level: an identity copy of the current top.
    pub fn attach_identity_limit(&self) -> Result<Self> {
        let t = self.top_theta();
        let mut c = BTreeMap::new();
        c.insert(self.height(), vec![OrdMap::identity(t)]);
        self.attach_limit_level(t, c)
    }

    // ---- axiom checks; each returns the first failure as a witness ----

    fn p0_failure(&self) -> Option<Value> {
        if self.theta[0] != 1 {
            return Some(json!({"theta_0": self.theta[0]}));
        }
        if let Some(a) = self.theta.iter().position(|&t| t == 0) {
            return Some(json!({"level": a, "theta": 0}));
        }
        for b in 1..=self.height() {
            for a in 0..b {
                let Some(fam) = self.families.get(&(a, b)) else {
                    return Some(json!({"missing_family": [a, b]}));
                };
                for f in fam {
                    if f.dom() != self.theta[a] || f.cod() != self.theta[b] {
                        return Some(json!({"family": [a, b], "map": f.to_string(), "expected": [self.theta[a], self.theta[b]]}));
                    }
                }
            }
        }
        None
    }

    fn p2_failure_into(&self, c: usize) -> Option<Value> {
        for b in 1..c {
            for a in 0..b {
                let comp = match compose_all(self.family_ref(b, c), self.family_ref(a, b)) {
                    Ok(v) => v,
                    Err(e) => return Some(json!({"triple": [a, b, c], "error": e.to_string()})),
                };
                let have = self.family_ref(a, c);
                if comp.as_slice() != have {
                    let missing: Vec<String> =
                        comp.iter().filter(|f| !have.contains(f)).map(|f| f.to_string()).collect();
                    let extra: Vec<String> =
                        have.iter().filter(|f| !comp.contains(f)).map(|f| f.to_string()).collect();
                    return Some(json!({"triple": [a, b, c], "missing": missing, "extra": extra}));
                }
            }
        }
        None
    }

    fn p2_failure(&self) -> Option<Value> {
        (2..=self.height()).find_map(|c| self.p2_failure_into(c))
    }

    fn p3_failure(&self) -> Option<Value> {
        for a in 0..self.height() {
            let lim = self.is_limit(a + 1);
            match (self.splits[a], lim) {
                (None, false) => return Some(json!({"step": a, "problem": "no split recorded for a successor step"})),
                (Some(_), true) => return Some(json!({"step": a, "problem": "split recorded for a limit step"})),
                (None, true) => continue,
                (Some(d), false) => {
                    let t = self.theta[a];
                    let fam = self.family_ref(a, a + 1);
                    if d >= t {
                        return Some(json!({"step": a, "split": d, "problem": "split not below θ_α"}));
                    }
                    let id = OrdMap::inclusion(t, self.theta[a + 1]).ok();
                    let h = OrdMap::shifted(t, self.theta[a + 1], d, t).ok();
                    let (Some(id), Some(h)) = (id, h) else {
                        return Some(json!({"step": a, "split": d, "problem": "neat successor map does not fit"}));
                    };
                    let mut want = vec![id, h];
                    want.sort();
                    if fam != want.as_slice() {
                        return Some(json!({
                            "step": a,
                            "split": d,
                            "family": fam.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                            "expected": want.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
        }
        None
    }

    fn p4_failure(&self, lambda: usize) -> Option<Value> {
        for b1 in 0..lambda {
            for b2 in b1..lambda {
                for f1 in self.family_ref(b1, lambda) {
                    for f2 in self.family_ref(b2, lambda) {
                        let ok = (b2..lambda).any(|g| {
                            self.family(g, lambda).iter().any(|k| {
                                let fac = |b: usize, f: &OrdMap| self.family(b, g).iter().any(|j| k.compose(j).as_ref() == Ok(f));
                                fac(b1, f1) && fac(b2, f2)
                            })
                        });
                        if !ok {
                            return Some(json!({"limit": lambda, "pair": [[b1, f1.to_string()], [b2, f2.to_string()]]}));
                        }
                    }
                }
            }
        }
        None
    }

    fn p5_failure(&self, a: usize) -> Option<Value> {
        let mut covered = vec![false; self.theta[a]];
        for b in 0..a {
            for f in self.family_ref(b, a) {
                for &x in f.images() {
                    if x < covered.len() {
                        covered[x] = true;
                    }
                }
            }
        }
        covered.iter().position(|c| !c).map(|x| json!({"level": a, "uncovered": x}))
    }

    fn lemma21_failure(&self) -> Option<Value> {
        for b in 1..=self.height() {
            for a in 0..b {
                let fam = self.family_ref(a, b);
                for f1 in fam {
                    for f2 in fam {
                        for t1 in 0..f1.dom() {
                            let y = f1.images()[t1];
                            if let Some(t2) = f2.preimage(y) {
                                if t1 != t2 || f1.images()[..t1] != f2.images()[..t2] {
                                    return Some(json!({"levels": [a, b], "f1": f1.to_string(), "f2": f2.to_string(), "tau": [t1, t2]}));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Per-axiom verdicts with witnesses.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("gap1-axioms");
        let p0 = self.p0_failure();
        let blocked = p0.clone();
        r.push(Check::from_failure("P0", p0, json!({"height": self.height(), "theta": self.theta})));
        r.push(Check::pass("P1", json!("cardinality bound; vacuous for finite families")));
        if let Some(w) = blocked {
            // the remaining axioms read F through θ, so they are not evaluated
            for ax in ["P2", "P3", "P4", "P5", "Lemma 2.1"] {
                r.push(Check::fail(ax, json!({"skipped": true, "blocked_by": "P0", "P0": w})));
            }
            return r;
        }
        r.push(Check::from_failure("P2", self.p2_failure(), json!(null)));
        r.push(Check::from_failure("P3", self.p3_failure(), json!({"splits": self.splits})));
        let p4 = self.limits.keys().find_map(|&l| self.p4_failure(l));
        r.push(Check::from_failure("P4", p4, json!({"limits": self.limits.keys().collect::<Vec<_>>(), "form": "non-strict"})));
        let p5 = (1..=self.height()).find_map(|a| self.p5_failure(a));
        r.push(Check::from_failure("P5", p5, json!(null)));
        r.push(Check::from_failure("Lemma 2.1", self.lemma21_failure(), json!(null)));
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("morass serializes")
    }
}

/// The tree `⟨T, ≺⟩` of a gap-1 morass together with the maps `π_st`.
#[derive(Clone, Debug)]
pub struct MorassTree {
    theta: Vec<usize>,
    limits: BTreeSet<usize>,
    pi: BTreeMap<(Vertex, Vertex), OrdMap>,
}

impl MorassTree {
    pub fn build(m: &FakeGap1Morass) -> Result<Self> {
        let mut pi: BTreeMap<(Vertex, Vertex), OrdMap> = BTreeMap::new();
        for (&(a, b), fam) in &m.families {
            for f in fam {
                for nu in 0..f.dom() {
                    let key = ((a, nu), (b, f.images()[nu]));
                    let r = f.restrict_tight(nu + 1)?;
                    match pi.get(&key) {
                        Some(old) if *old != r => {
                            return Err(Error::Inconsistent(format!(
                                "π between {:?} and {:?} depends on the map: {old} vs {r}",
                                key.0, key.1
                            )))
                        }
                        _ => {
                            pi.insert(key, r);
                        }
                    }
                }
            }
        }
        let tree = MorassTree { theta: m.theta.clone(), limits: m.limits.keys().copied().collect(), pi };
        if let Some(w) = tree.failures().into_iter().next() {
            return Err(Error::Inconsistent(format!("tree property fails: {w}")));
        }
        Ok(tree)
    }

    pub fn height(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self, a: usize) -> usize {
        self.theta[a]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.theta.iter().enumerate().flat_map(|(a, &t)| (0..t).map(move |n| (a, n)))
    }

    pub fn level(&self, a: usize) -> impl Iterator<Item = Vertex> {
        (0..self.theta[a]).map(move |n| (a, n))
    }

    pub fn prec(&self, s: Vertex, t: Vertex) -> bool {
        self.pi.contains_key(&(s, t))
    }

    /// `π_st`; the identity on `ν(s)+1` when `s == t`.
    pub fn pi(&self, s: Vertex, t: Vertex) -> Option<OrdMap> {
        if s == t {
            return Some(OrdMap::identity(s.1 + 1));
        }
        self.pi.get(&(s, t)).cloned()
    }

    pub fn pi_ref(&self, s: Vertex, t: Vertex) -> Option<&OrdMap> {
        self.pi.get(&(s, t))
    }

    /// The unique predecessor of `t` on level `a` (or `t` itself when `a == α(t)`).
    pub fn predecessor_at(&self, t: Vertex, a: usize) -> Option<Vertex> {
        if a == t.0 {
            return Some(t);
        }
        if a > t.0 {
            return None;
        }
        self.level(a).find(|&s| self.prec(s, t))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &OrdMap)> {
        self.pi.iter()
    }

    /// Lemma 2.2 (a)–(d), each as the first failure found.
    pub fn failures(&self) -> Vec<Value> {
        let mut out = Vec::new();
        // (a) exactly one predecessor on every lower level
        'a: for t in self.vertices() {
            for a in 0..t.0 {
                let n = self.level(a).filter(|&s| self.prec(s, t)).count();
                if n != 1 {
                    out.push(json!({"lemma": "2.2(a)", "vertex": [t.0, t.1], "level": a, "predecessors": n}));
                    break 'a;
                }
            }
        }
        // (b) commutativity
        'b: for (&(t0, t1), p01) in &self.pi {
            for (&(u1, t2), p12) in self.pi.range((t1, (0, 0))..) {
                if u1 != t1 {
                    break;
                }
                let Some(p02) = self.pi.get(&(t0, t2)) else {
                    out.push(json!({"lemma": "2.2(b)", "chain": [[t0.0, t0.1], [t1.0, t1.1], [t2.0, t2.1]], "problem": "not transitive"}));
                    break 'b;
                };
                if p12.compose(p01).as_ref() != Ok(p02) {
                    out.push(json!({"lemma": "2.2(b)", "chain": [[t0.0, t0.1], [t1.0, t1.1], [t2.0, t2.1]]}));
                    break 'b;
                }
            }
        }
        // (c) restriction coherence
        'c: for (&(s, t), p) in &self.pi {
            for nu in 0..=s.1 {
                let s2 = (s.0, nu);
                let t2 = (t.0, p.images()[nu]);
                let want = p.restrict_tight(nu + 1).ok();
                if self.pi.get(&(s2, t2)).cloned() != want {
                    out.push(json!({"lemma": "2.2(c)", "s": [s.0, s.1], "t": [t.0, t.1], "nu": nu}));
                    break 'c;
                }
            }
        }
        // (d) limit coverage
        'd: for &l in &self.limits {
            for t in self.level(l) {
                let mut cov = vec![false; t.1 + 1];
                for a in 0..l {
                    for s in self.level(a) {
                        if let Some(p) = self.pi.get(&(s, t)) {
                            for &x in p.images() {
                                cov[x] = true;
                            }
                        }
                    }
                }
                if let Some(x) = cov.iter().position(|c| !c) {
                    out.push(json!({"lemma": "2.2(d)", "vertex": [t.0, t.1], "uncovered": x}));
                    break 'd;
                }
            }
        }
        out
    }

    /// Graphviz rendering: vertices `(α,ν)`, edges between consecutive levels labelled by `π`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph morass_tree {\n  rankdir=BT;\n");
        for (a, n) in self.vertices() {
            s.push_str(&format!("  \"{a},{n}\" [label=\"({a},{n})\"];\n"));
        }
        for (&(u, v), p) in &self.pi {
            if v.0 == u.0 + 1 {
                let label: Vec<String> = p.images().iter().map(|x| x.to_string()).collect();
                s.push_str(&format!(
                    "  \"{},{}\" -> \"{},{}\" [label=\"{}\"];\n",
                    u.0,
                    u.1,
                    v.0,
                    v.1,
                    label.join(" ")
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: usize, c: usize, i: &[usize]) -> OrdMap {
        OrdMap::new(d, c, i.to_vec()).unwrap()
    }

    #[test]
    fn first_amalgamation() {
        let m1 = FakeGap1Morass::trivial().amalgamate_step(0, 1).unwrap();
        assert_eq!(m1.thetas(), &[1, 2]);
        assert_eq!(m1.family(0, 1), vec![m(1, 2, &[0]), m(1, 2, &[1])]);
    }

    #[test]
    fn second_amalgamation_closure() {
        let m2 = FakeGap1Morass::trivial().amalgamate_step(0, 1).unwrap().amalgamate_step(1, 1).unwrap();
        assert_eq!(m2.thetas(), &[1, 2, 3]);
        assert!(m2.family(1, 2).contains(&m(2, 3, &[0, 2])));
        assert_eq!(m2.family(0, 2), vec![m(1, 3, &[0]), m(1, 3, &[1]), m(1, 3, &[2])]);
        assert!(m2.validate().all_pass());
    }

    #[test]
    fn amalgamation_errors() {
        let m1 = FakeGap1Morass::trivial().amalgamate_step(0, 1).unwrap();
        assert!(matches!(m1.amalgamate_step(2, 1), Err(Error::InvalidSplit(_))));
        assert!(matches!(m1.amalgamate_step(0, 1), Err(Error::Axiom { .. })));
        assert!(matches!(m1.amalgamate_step(1, 2), Err(Error::Axiom { .. })));
    }

    #[test]
    fn limit_levels() {
        let m1 = FakeGap1Morass::trivial().amalgamate_step(0, 1).unwrap();
        let l = m1.attach_identity_limit().unwrap();
        assert!(l.validate().all_pass());

        let mut gap = BTreeMap::new();
        gap.insert(1, vec![m(2, 3, &[0, 2])]);
        let err = m1.attach_limit_level(3, gap).unwrap_err();
        assert!(matches!(err, Error::Axiom { ref axiom, .. } if axiom == "P5"), "{err}");

        let m2 = m1.amalgamate_step(1, 1).unwrap();
        let mut two = BTreeMap::new();
        two.insert(1, m2.family(1, 2));
        two.insert(2, vec![OrdMap::identity(3)]);
        let l2 = m2.attach_limit_level(3, two).unwrap();
        assert_eq!(l2.family(0, 3), m2.family(0, 2));
        assert!(l2.validate().all_pass());

        let mut bad = BTreeMap::new();
        bad.insert(2, vec![OrdMap::identity(3), m(3, 3, &[0, 1, 2])]);
        bad.insert(1, vec![m(2, 3, &[1, 2])]);
        assert!(m2.attach_limit_level(3, bad).is_err());
    }

    #[test]
    fn tree_of_m3() {
        let m3 = FakeGap1Morass::from_splits(&[0, 1]).unwrap();
        let t = MorassTree::build(&m3).unwrap();
        let v: Vec<Vertex> = t.vertices().collect();
        assert_eq!(v, vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]);
        assert_eq!(t.pi((1, 1), (2, 1)).unwrap(), OrdMap::identity(2));
        assert_eq!(t.pi((1, 1), (2, 2)).unwrap(), m(2, 3, &[0, 2]));
        assert_eq!(t.pi((0, 0), (2, 2)).unwrap(), m(1, 3, &[2]));
        assert!(t.failures().is_empty());
        let single = MorassTree::build(&FakeGap1Morass::trivial()).unwrap();
        assert_eq!(single.vertices().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let m3 = FakeGap1Morass::from_splits(&[0, 1]).unwrap();
        let s = m3.to_json();
        let back: FakeGap1Morass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m3);
        assert!(serde_json::from_str::<FakeGap1Morass>(r#"{"theta":[1],"families":{"x":[]},"limits":[],"splits":[]}"#).is_err());
    }
}
