//! FS systems along a gap-1 morass, the star recursion, and generic
//! finite-poset tools (complete embeddings, antichains, Δ-systems).

use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::gap1::{FakeGap1Morass, MorassTree, Vertex};
use crate::report::{Check, Report};
use crate::{Error, Result};

/// A finite FS system `⟨P_η⟩, ⟨σ_st⟩, ⟨e_α⟩` along `morass()`.
///
/// Poset indices run over `0..=points()` where `points()` is the top
/// level's θ.  The order is the same relation in every `P_η`.
pub trait FsSystem {
    type Cond: Clone + Eq + Ord + Hash + Debug + Serialize;

    fn morass(&self) -> &FakeGap1Morass;
    fn tree(&self) -> &MorassTree;

    fn points(&self) -> usize {
        self.morass().top_theta()
    }

    /// The elements of `P_η`, in canonical order.
    fn poset(&self, eta: usize) -> Vec<Self::Cond>;
    fn contains(&self, eta: usize, p: &Self::Cond) -> bool;
    fn leq(&self, p: &Self::Cond, q: &Self::Cond) -> bool;
    /// Compatibility inside `P_η`.
    fn compatible(&self, eta: usize, p: &Self::Cond, q: &Self::Cond) -> bool;
    /// `σ_st(p)`, or `None` when `p ∉ P_{ν(s)+1}`.
    fn sigma(&self, s: Vertex, t: Vertex, p: &Self::Cond) -> Option<Self::Cond>;
    /// `σ_st^{-1}(p)` when `p ∈ rng(σ_st)`.
    fn sigma_preimage(&self, s: Vertex, t: Vertex, p: &Self::Cond) -> Option<Self::Cond>;
    /// `e_α : P_{θ_{α+1}} -> P_{θ_α}`.
    fn e(&self, alpha: usize, p: &Self::Cond) -> Option<Self::Cond>;

    /// The vertex pair carrying `σ_α = σ_{h_α}` (the identity at limit steps).
    fn sigma_alpha_pair(&self, alpha: usize) -> (Vertex, Vertex) {
        let m = self.morass();
        let top = m.theta(alpha) - 1;
        let img = m.successor_map(alpha).map_or(top, |h| h.images()[top]);
        ((alpha, top), (alpha + 1, img))
    }
}

/// The star form `p*` of a top condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarForm<C> {
    /// `γ_0 > γ_1 > … = 0`.
    pub gammas: Vec<usize>,
    pub nus: Vec<usize>,
    /// `p*(α)` for every level `α ≤ top`.
    pub values: Vec<C>,
}

impl<C: Clone> StarForm<C> {
    pub fn support(&self) -> BTreeSet<usize> {
        self.gammas.iter().copied().collect()
    }

    /// `p*↾supp(p)`.
    pub fn restricted(&self) -> BTreeMap<usize, C> {
        self.gammas.iter().map(|&g| (g, self.values[g].clone())).collect()
    }

    /// `p*↾(supp(p) ∩ bound)`.
    pub fn restricted_below(&self, bound: usize) -> BTreeMap<usize, C> {
        self.gammas.iter().filter(|&&g| g < bound).map(|&g| (g, self.values[g].clone())).collect()
    }
}

/// The star recursion.  The top level itself counts as a predecessor of
/// the top vertex (with `σ = id`), so supports live in `[0, top]`.
pub fn compute_star<S: FsSystem>(sys: &S, p: &S::Cond) -> Result<StarForm<S::Cond>> {
    let tree = sys.tree();
    let z = tree.height();
    let mut values: Vec<Option<S::Cond>> = vec![None; z + 1];
    let (mut gammas, mut nus) = (Vec::new(), Vec::new());
    let mut cur = p.clone();
    let mut hi = z + 1;
    loop {
        let nu = (0..sys.points())
            .find(|&e| sys.contains(e + 1, &cur))
            .ok_or_else(|| Error::Inconsistent(format!("{cur:?} lies in no poset of the system")))?;
        let t = (z, nu);
        let mut dom: BTreeMap<usize, S::Cond> = BTreeMap::new();
        for a in 0..hi {
            if let Some(s) = tree.predecessor_at(t, a) {
                let v = if s == t { Some(cur.clone()) } else { sys.sigma_preimage(s, t, &cur) };
                if let Some(v) = v {
                    dom.insert(a, v);
                }
            }
        }
        let (&gamma, _) = dom
            .iter()
            .next()
            .ok_or_else(|| Error::Inconsistent(format!("star recursion stalls at {cur:?} below level {hi}")))?;
        for (a, slot) in values.iter_mut().enumerate().take(hi).skip(gamma) {
            let v = dom.get(&a).ok_or_else(|| {
                Error::Inconsistent(format!("{cur:?} leaves rng(σ) at level {a} inside [{gamma}, {hi})"))
            })?;
            *slot = Some(v.clone());
        }
        gammas.push(gamma);
        nus.push(nu);
        if gamma == 0 {
            break;
        }
        let base = dom[&gamma].clone();
        cur = sys
            .e(gamma - 1, &base)
            .ok_or_else(|| Error::Inconsistent(format!("e_{} undefined on {base:?}", gamma - 1)))?;
        hi = gamma;
    }
    let values = values.into_iter().collect::<Option<Vec<_>>>().expect("every level covered");
    Ok(StarForm { gammas, nus, values })
}

/// Order on star restrictions: `x ≤ y` iff `dom y ⊆ dom x` and `x(α) ≤ y(α)`.
pub fn star_leq<C, F: Fn(&C, &C) -> bool>(x: &BTreeMap<usize, C>, y: &BTreeMap<usize, C>, leq: F) -> bool {
    y.iter().all(|(a, v)| x.get(a).is_some_and(|u| leq(u, v)))
}

fn show<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).unwrap_or(Value::Null)
}

fn fs1<S: FsSystem>(sys: &S) -> Option<Value> {
    for eta in 0..sys.points() {
        let lo = sys.poset(eta);
        for p in &lo {
            if !sys.contains(eta + 1, p) {
                return Some(json!({"index": eta, "not_contained": show(p)}));
            }
        }
        for (i, p) in lo.iter().enumerate() {
            for q in &lo[i + 1..] {
                if !sys.compatible(eta, p, q) && sys.compatible(eta + 1, p, q) {
                    return Some(json!({"index": eta, "pair": [show(p), show(q)], "problem": "compatibility appears higher up"}));
                }
            }
        }
    }
    None
}

fn fs2<S: FsSystem>(sys: &S) -> Option<Value> {
    let tree = sys.tree();
    let edges: Vec<(Vertex, Vertex)> = tree.edges().map(|(k, _)| *k).collect();
    for &(s, t) in &edges {
        let dom = sys.poset(s.1 + 1);
        let mut seen = HashSet::new();
        let mut img = Vec::with_capacity(dom.len());
        for p in &dom {
            let Some(q) = sys.sigma(s, t, p) else {
                return Some(json!({"edge": [s, t], "undefined_on": show(p)}));
            };
            if !sys.contains(t.1 + 1, &q) {
                return Some(json!({"edge": [s, t], "image_outside": show(&q)}));
            }
            if !seen.insert(q.clone()) {
                return Some(json!({"edge": [s, t], "not_injective_at": show(p)}));
            }
            img.push(q);
        }
        for i in 0..dom.len() {
            for j in 0..dom.len() {
                if sys.leq(&dom[i], &dom[j]) && !sys.leq(&img[i], &img[j]) {
                    return Some(json!({"edge": [s, t], "order_broken": [show(&dom[i]), show(&dom[j])]}));
                }
                if j > i && sys.compatible(s.1 + 1, &dom[i], &dom[j]) != sys.compatible(t.1 + 1, &img[i], &img[j]) {
                    return Some(json!({"edge": [s, t], "compatibility_changed": [show(&dom[i]), show(&dom[j])]}));
                }
            }
        }
    }
    for &(s, t) in &edges {
        for &(t2, u) in &edges {
            if t2 != t {
                continue;
            }
            for p in sys.poset(s.1 + 1) {
                let two = sys.sigma(s, t, &p).and_then(|q| sys.sigma(t, u, &q));
                if two != sys.sigma(s, u, &p) {
                    return Some(json!({"triple": [s, t, u], "not_commutative_at": show(&p)}));
                }
            }
        }
    }
    let m = sys.morass();
    for &l in m.limits().keys() {
        for t in tree.level(l) {
            for p in sys.poset(t.1 + 1) {
                let covered = (0..l).any(|a| {
                    tree.predecessor_at(t, a).is_some_and(|s| sys.sigma_preimage(s, t, &p).is_some())
                });
                if !covered {
                    return Some(json!({"limit_vertex": t, "uncovered": show(&p)}));
                }
            }
        }
    }
    None
}

fn fs3<S: FsSystem>(sys: &S) -> Option<Value> {
    let m = sys.morass();
    for a in 0..m.height() {
        for p in sys.poset(m.theta(a + 1)) {
            match sys.e(a, &p) {
                Some(q) if sys.contains(m.theta(a), &q) => {}
                Some(q) => return Some(json!({"alpha": a, "p": show(&p), "e": show(&q), "problem": "e lands outside"})),
                None => return Some(json!({"alpha": a, "p": show(&p), "problem": "e undefined"})),
            }
        }
    }
    None
}

fn fs4<S: FsSystem>(sys: &S) -> Option<Value> {
    let tree = sys.tree();
    for ((s, t), pi) in tree.edges() {
        for nu in 0..s.1 {
            let s2 = (s.0, nu);
            let t2 = (t.0, pi.images()[nu]);
            for p in sys.poset(nu + 1) {
                if sys.sigma(*s, *t, &p) != sys.sigma(s2, t2, &p) {
                    return Some(json!({"edge": [s, t], "sub_edge": [s2, t2], "p": show(&p)}));
                }
            }
        }
    }
    None
}

fn fs5<S: FsSystem>(sys: &S) -> Option<Value> {
    for ((s, t), pi) in sys.tree().edges() {
        if pi.is_identity() {
            for p in sys.poset(s.1 + 1) {
                if sys.sigma(*s, *t, &p).as_ref() != Some(&p) {
                    return Some(json!({"edge": [s, t], "p": show(&p)}));
                }
            }
        }
    }
    None
}

fn fs6<S: FsSystem>(sys: &S) -> (Option<Value>, Option<Value>) {
    let m = sys.morass();
    let (mut a_fail, mut b_fail) = (None, None);
    for a in 0..m.height() {
        let (lo, hi) = (m.theta(a), m.theta(a + 1));
        let small = sys.poset(lo);
        let big = sys.poset(hi);
        let (s, t) = sys.sigma_alpha_pair(a);
        let sig: Vec<Option<S::Cond>> = small.iter().map(|r| sys.sigma(s, t, r)).collect();
        if b_fail.is_none() {
            'emb: for i in 0..small.len() {
                let Some(si) = &sig[i] else {
                    b_fail = Some(json!({"alpha": a, "sigma_undefined_on": show(&small[i])}));
                    break;
                };
                for j in i + 1..small.len() {
                    let Some(sj) = &sig[j] else { continue };
                    if sys.compatible(lo, &small[i], &small[j]) != sys.compatible(hi, si, sj)
                        || (sys.leq(&small[i], &small[j]) && !sys.leq(si, sj))
                    {
                        b_fail = Some(json!({"alpha": a, "not_an_embedding_at": [show(&small[i]), show(&small[j])]}));
                        break 'emb;
                    }
                }
            }
        }
        for p in &big {
            let Some(ep) = sys.e(a, p) else { continue };
            for (i, r) in small.iter().enumerate() {
                if !sys.leq(r, &ep) {
                    continue;
                }
                if a_fail.is_none() && !sys.compatible(hi, r, p) {
                    a_fail = Some(json!({"alpha": a, "p": show(p), "e": show(&ep), "r": show(r)}));
                }
                if b_fail.is_none() {
                    if let Some(sr) = &sig[i] {
                        if !sys.compatible(hi, sr, p) {
                            b_fail = Some(json!({"alpha": a, "p": show(p), "e": show(&ep), "r": show(r), "sigma_r": show(sr)}));
                        }
                    }
                }
            }
            if a_fail.is_some() && b_fail.is_some() {
                return (a_fail, b_fail);
            }
        }
    }
    (a_fail, b_fail)
}

fn fs7<S: FsSystem>(sys: &S) -> (Option<Value>, Option<Value>) {
    let m = sys.morass();
    let (mut a_fail, mut b_fail) = (None, None);
    for a in 0..m.height() {
        let (lo, hi) = (m.theta(a), m.theta(a + 1));
        let (s, t) = sys.sigma_alpha_pair(a);
        for p in sys.poset(hi) {
            let ep = sys.e(a, &p);
            if a_fail.is_none() && sys.contains(lo, &p) && ep.as_ref() != Some(&p) {
                a_fail = Some(json!({"alpha": a, "p": show(&p), "e": show(&ep)}));
            }
            if b_fail.is_none() {
                if let Some(pre) = sys.sigma_preimage(s, t, &p) {
                    if ep.as_ref() != Some(&pre) {
                        b_fail = Some(json!({"alpha": a, "p": show(&p), "e": show(&ep), "preimage": show(&pre)}));
                    }
                }
            }
        }
    }
    (a_fail, b_fail)
}

/// (FS1)–(FS7) as separate checks named with `prefix` (e.g. `"FS"`).
pub fn check_fs_axioms<S: FsSystem>(sys: &S, prefix: &str) -> Report {
    let mut r = Report::new("fs-axioms");
    let name = |n: &str| format!("{prefix}{n}");
    r.push(Check::from_failure(name("1"), fs1(sys), json!({"form": "⊆⊥ between consecutive indices"})));
    r.push(Check::from_failure(name("2"), fs2(sys), json!(null)));
    r.push(Check::from_failure(name("3"), fs3(sys), json!(null)));
    r.push(Check::from_failure(name("4"), fs4(sys), json!(null)));
    r.push(Check::from_failure(name("5"), fs5(sys), json!(null)));
    let (a, b) = fs6(sys);
    r.push(Check::from_failure(name("6(a)"), a, json!(null)));
    r.push(Check::from_failure(name("6(b)"), b, json!(null)));
    let (a, b) = fs7(sys);
    r.push(Check::from_failure(name("7(a)"), a, json!(null)));
    r.push(Check::from_failure(name("7(b)"), b, json!(null)));
    r
}

/// The gap-2 variant: `p_sys` must be an FS system along the inner morass
/// and `q_sys` one along the θ-morass.
pub fn check_fs2_axioms<S: FsSystem, Q: FsSystem>(p_sys: &S, q_sys: &Q) -> Report {
    let mut r = Report::new("fs-axioms");
    let inner = check_fs_axioms(p_sys, "FS");
    let first = inner.failures().next().map(|c| json!({"axiom": c.name, "witness": c.witness}));
    r.push(Check::from_failure("FS₂1", first, json!({"checked": inner.checks.len()})));
    for c in check_fs_axioms(q_sys, "FS₂").checks {
        if c.name != "FS₂1" {
            r.push(c);
        } else {
            // (FS₂1) is the inner system; the θ-side chain property is still reported
            r.push(Check { name: "FS₂1 (θ-side ⊆⊥)".into(), ..c });
        }
    }
    r
}

/// Lemma 3.1 over every pair of the top poset.
pub fn check_compat_lemma<S: FsSystem>(sys: &S) -> Result<Report> {
    let top = sys.points();
    let elems = sys.poset(top);
    let stars: Vec<StarForm<S::Cond>> = elems.iter().map(|p| compute_star(sys, p)).collect::<Result<_>>()?;
    let supps: Vec<BTreeSet<usize>> = stars.iter().map(StarForm::support).collect();
    let thetas = sys.morass().thetas().to_vec();
    let z = thetas.len() - 1;
    // When both supports contain the top, the stars there are p and q
    // themselves and the implication is trivially true.
    let at_top: Vec<bool> = (0..elems.len()).map(|i| supps[i].contains(&z) && stars[i].values[z] == elems[i]).collect();
    let low: Vec<usize> = (0..elems.len()).filter(|&i| !at_top[i]).collect();
    let n_top = (elems.len() - low.len()) as u64;
    let mut checked = 0u64;
    let mut failure = None;
    'outer: for &i in &low {
        for j in 0..elems.len() {
            if !at_top[j] && j < i {
                continue;
            }
            let a = *supps[i].intersection(&supps[j]).max().expect("0 is in every support");
            checked += 1;
            if sys.compatible(thetas[a], &stars[i].values[a], &stars[j].values[a])
                && !sys.compatible(top, &elems[i], &elems[j])
            {
                failure = Some(json!({"p": show(&elems[i]), "q": show(&elems[j]), "alpha": a}));
                break 'outer;
            }
        }
    }
    let mut r = Report::new("compat-3.1");
    r.push(Check::from_failure(
        "Lemma 3.1",
        failure,
        json!({"conditions": elems.len(), "pairs": checked, "pairs_meeting_at_top": n_top * (n_top + 1) / 2}),
    ));
    Ok(r)
}

/// Complete-embedding check of `σ : P -> Q` with one reduction witness per `q`.
pub fn is_complete_embedding<P, Q>(
    dom: &[P],
    cod: &[Q],
    sigma: impl Fn(&P) -> Q,
    leq_p: impl Fn(&P, &P) -> bool,
    leq_q: impl Fn(&Q, &Q) -> bool,
    compat_p: impl Fn(&P, &P) -> bool,
    compat_q: impl Fn(&Q, &Q) -> bool,
) -> (Report, Vec<Option<usize>>)
where
    P: Serialize,
    Q: Serialize,
{
    let img: Vec<Q> = dom.iter().map(&sigma).collect();
    let mut order = None;
    let mut incompat = None;
    'o: for i in 0..dom.len() {
        for j in 0..dom.len() {
            if order.is_none() && leq_p(&dom[i], &dom[j]) && !leq_q(&img[i], &img[j]) {
                order = Some(json!({"pair": [show(&dom[i]), show(&dom[j])]}));
            }
            if incompat.is_none() && j > i && compat_p(&dom[i], &dom[j]) != compat_q(&img[i], &img[j]) {
                incompat = Some(json!({"pair": [show(&dom[i]), show(&dom[j])], "compatible_in_source": compat_p(&dom[i], &dom[j])}));
            }
            if order.is_some() && incompat.is_some() {
                break 'o;
            }
        }
    }
    // p is a reduction of q iff every r ≤ p has σ(r) compatible with q
    let mut witnesses = Vec::with_capacity(cod.len());
    let mut missing = None;
    for q in cod {
        let w = (0..dom.len()).find(|&p| {
            (0..dom.len()).filter(|&r| leq_p(&dom[r], &dom[p])).all(|r| compat_q(&img[r], q))
        });
        if w.is_none() && missing.is_none() {
            missing = Some(json!({"no_reduction_for": show(q)}));
        }
        witnesses.push(w);
    }
    let mut r = Report::new("complete-embedding");
    r.push(Check::from_failure("order", order, json!(null)));
    r.push(Check::from_failure("incompatibility", incompat, json!(null)));
    r.push(Check::from_failure("reductions", missing, json!({"targets": cod.len()})));
    (r, witnesses)
}

/// Result of a maximum-antichain search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Antichain {
    pub size: usize,
    /// False when the node budget ran out; `size` is then a lower bound.
    pub exact: bool,
    pub witness: Vec<usize>,
}

/// Maximum set of pairwise incompatible elements among `0..n`, by
/// branch and bound on the incompatibility graph.
pub fn max_antichain(n: usize, incompatible: impl Fn(usize, usize) -> bool, cap: u64) -> Antichain {
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            if incompatible(i, j) {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    max_clique(&adj, n, cap)
}

fn max_clique(adj: &[Vec<u64>], n: usize, cap: u64) -> Antichain {
    struct St<'a> {
        adj: &'a [Vec<u64>],
        best: Vec<usize>,
        nodes: u64,
        cap: u64,
        out_of_budget: bool,
    }
    fn members(set: &[u64]) -> Vec<usize> {
        let mut v = Vec::new();
        for (w, &bits) in set.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                v.push(w * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        v
    }
    // greedy colouring bound
    fn colour(st: &St, cand: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            let k = classes.iter().position(|c| c.iter().all(|&u| st.adj[v][u / 64] >> (u % 64) & 1 == 0));
            match k {
                Some(k) => classes[k].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut out = Vec::with_capacity(cand.len());
        for (k, c) in classes.iter().enumerate() {
            for &v in c {
                out.push((v, k + 1));
            }
        }
        out
    }
    fn expand(st: &mut St, cur: &mut Vec<usize>, cand: Vec<u64>) {
        st.nodes += 1;
        if st.nodes > st.cap {
            st.out_of_budget = true;
            return;
        }
        let order = colour(st, &members(&cand));
        let mut cand = cand;
        for &(v, c) in order.iter().rev() {
            if cur.len() + c <= st.best.len() {
                return;
            }
            cur.push(v);
            let next: Vec<u64> = cand.iter().zip(&st.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if cur.len() > st.best.len() {
                    st.best = cur.clone();
                }
            } else {
                expand(st, cur, next);
            }
            cur.pop();
            cand[v / 64] &= !(1 << (v % 64));
            if st.out_of_budget {
                return;
            }
        }
    }
    let mut all = vec![0u64; n.div_ceil(64)];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut st = St { adj, best: Vec::new(), nodes: 0, cap, out_of_budget: false };
    if n > 0 {
        st.best = vec![0];
        expand(&mut st, &mut Vec::new(), all);
    }
    let mut witness = st.best;
    witness.sort_unstable();
    Antichain { size: witness.len(), exact: !st.out_of_budget, witness }
}

/// A largest Δ-subsystem (sunflower) of `sets`: indices whose pairwise
/// intersections all equal one root.
pub fn sunflower(sets: &[BTreeSet<usize>]) -> (BTreeSet<usize>, Vec<usize>) {
    let mut roots: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            roots.insert(sets[i].intersection(&sets[j]).copied().collect());
        }
    }
    let mut best: (BTreeSet<usize>, Vec<usize>) = (sets.first().cloned().unwrap_or_default(), (0..sets.len().min(1)).collect());
    for root in roots {
        let cand: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].is_superset(&root)).collect();
        if cand.len() <= best.1.len() {
            continue;
        }
        let disjoint_petals = |a: usize, b: usize| {
            sets[cand[a]].intersection(&sets[cand[b]]).copied().collect::<BTreeSet<_>>() == root
        };
        let ac = max_antichain(cand.len(), disjoint_petals, 1_000_000);
        if ac.size > best.1.len() {
            best = (root, ac.witness.iter().map(|&k| cand[k]).collect());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_antichain_one() {
        let a = max_antichain(6, |_, _| false, 1000);
        assert_eq!(a.size, 1);
        assert!(a.exact);
    }

    #[test]
    fn clique_found_exactly() {
        // complement of a 5-cycle plus an isolated vertex: max clique 2
        let edge = |i: usize, j: usize| i < 5 && j < 5 && (i + 5 - j) % 5 != 1 && (j + 5 - i) % 5 != 1;
        let a = max_antichain(6, edge, 10_000);
        assert_eq!(a.size, 2);
        let full = max_antichain(7, |_, _| true, 10_000);
        assert_eq!(full.size, 7);
    }

    #[test]
    fn sunflower_of_petals() {
        let s = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        let sets = vec![s(&[0, 1]), s(&[0, 2]), s(&[0, 3]), s(&[1, 2])];
        let (root, members) = sunflower(&sets);
        assert_eq!(root, s(&[0]));
        assert_eq!(members, vec![0, 1, 2]);
    }

    #[test]
    fn identity_is_complete() {
        let dom = vec![0u8, 1, 2];
        let (r, w) = is_complete_embedding(&dom, &dom, |&x| x, |a, b| a == b || *b == 0, |a, b| a == b || *b == 0, |a, b| a == b || *a == 0 || *b == 0, |a, b| a == b || *a == 0 || *b == 0);
        assert!(r.all_pass(), "{}", r.to_json());
        assert_eq!(w, vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn antichain_image_sharing_lower_bound_fails() {
        // 1 and 2 incompatible in P, but both sit above 3 in Q
        let dom = vec![1u8, 2];
        let cod = vec![1u8, 2, 3];
        let leq_q = |a: &u8, b: &u8| a == b || *a == 3;
        let compat_q = |_: &u8, _: &u8| true;
        let (r, _) = is_complete_embedding(&dom, &cod, |&x| x, |a, b| a == b, leq_q, |a, b| a == b, compat_q);
        assert!(!r.passed("incompatibility"));
    }
}
