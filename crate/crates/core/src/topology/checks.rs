//! The `topology-4.x` suite over a finished hierarchy.

use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

use crate::fs::{check_fs2_axioms, check_fs_axioms, star_leq, FsSystem};
use crate::gap2::gfam;
use crate::report::{Check, Report};
use crate::topology::cond::{TensorMap, TopCondition};
use crate::topology::hierarchy::{level_tensor, naive_image, QCondition, TopologyHierarchy};
use crate::topology::separate::Constructed;
use crate::Result;

/// Which parts of the suite to run.  The pairwise checks are quadratic in `|ℙ|`.
#[derive(Clone, Copy, Debug)]
pub struct SuiteScope {
    pub pairwise: bool,
}

impl Default for SuiteScope {
    fn default() -> Self {
        SuiteScope { pairwise: true }
    }
}

pub fn topology_suite(h: &TopologyHierarchy, scope: SuiteScope) -> Result<Report> {
    let mut r = Report::new("topology-4.x");
    for c in check_fs_axioms(h, "FS").checks {
        r.push(Check { name: format!("Lemma 4.1 {}", c.name), ..c });
    }
    r.push(lemma_4_2(h));
    r.extend(lemma_4_3(h)?);
    r.push(lemma_4_4(h)?);
    r.push(star_consistency(h));
    r.push(remark_3(h)?);
    for c in check_fs2_axioms(&h.thinned_system(), &h.q_system()).checks {
        r.push(Check { name: format!("Lemma 4.5 {}", c.name), ..c });
    }
    r.push(e_prime_independence(h));
    r.extend(lemma_4_6(h));
    r.push(lemma_4_6_construction(h)?);
    r.push(remark_2(h));
    if scope.pairwise {
        r.extend(lemma_4_8a(h));
    }
    Ok(r)
}

fn show<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Subsets of `p` obtained by dropping cells.
fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut s = m;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = s;
        if s == 0 {
            done = true;
        } else {
            s = (s - 1) & m;
        }
        Some(out)
    })
}

/// `p ≤ q` in `P(top)` gives `i(p) ≤ i(q)`.
pub fn lemma_4_2(h: &TopologyHierarchy) -> Check {
    let z = h.top_level();
    let mut pairs = 0u64;
    for p in h.p_top() {
        let ip = h.star_image(p).expect("star");
        for m in submasks(p.def_mask()) {
            let q = p.restrict(m);
            if !h.in_p_level(z, &q) {
                continue;
            }
            pairs += 1;
            let iq = h.star_image(&q).expect("star");
            if !star_leq(&ip, &iq, TopCondition::leq) {
                return Check::fail("Lemma 4.2", json!({"p": show(p), "q": show(&q), "i(p)": show(&ip), "i(q)": show(&iq)}));
            }
        }
    }
    Check::pass("Lemma 4.2", json!({"pairs": pairs}))
}

/// `f̄[q] ∈ ℚ_{θβ}` for every `f ∈ F_{αβ}` and `q ∈ ℚ_{θα}`, and the naive
/// `f[q]` leaves `ℚ` for some `q` at every right-branching step.
pub fn lemma_4_3(h: &TopologyHierarchy) -> Result<Report> {
    let m2 = h.morass2();
    let n = m2.thetas().len();
    let mut checked = 0u64;
    let mut failure = None;
    'o: for a in 0..n {
        for b in a + 1..n {
            for f in m2.family_ref(a, b) {
                for q in h.q_set(a).keys() {
                    checked += 1;
                    let img = h.bar_image(f, q);
                    let ok = img.as_ref().is_ok_and(|x| h.q_set(b).contains_key(x));
                    if !ok {
                        failure = Some(json!({"alpha": a, "beta": b, "f": show(f), "q": show(q),
                            "image": img.map(|x| show(&x)).unwrap_or_else(|e| json!(e.to_string()))}));
                        break 'o;
                    }
                }
            }
        }
    }
    let mut r = Report::new("topology-4.x");
    r.push(Check::from_failure("Lemma 4.3 bar image", failure, json!({"images": checked})));

    let mut missing = None;
    let mut outside = BTreeMap::new();
    for a in 0..n - 1 {
        let Some(hb) = m2.right_branching(a) else { continue };
        let mut count = 0usize;
        let mut example = None;
        for q in h.q_set(a).keys() {
            let lands = naive_image(hb, q, h.block()).is_ok_and(|x| h.q_set(a + 1).contains_key(&x));
            if !lands {
                count += 1;
                example.get_or_insert_with(|| q.clone());
            }
        }
        if count == 0 && missing.is_none() {
            missing = Some(json!({"alpha": a, "note": "every naive image lies in ℚ"}));
        }
        outside.insert(a, json!({"outside": count, "of": h.q_set(a).len(), "example": example.map(|q| show(&q))}));
    }
    r.push(Check::from_failure("Lemma 4.3 naive image leaves ℚ", missing, json!(outside)));
    Ok(r)
}

fn forcing_at(h: &TopologyHierarchy, beta: usize) -> BTreeSet<TopCondition> {
    let inner = h.morass2().inner();
    let (pts, lvl) = (inner.theta(h.morass2().theta(beta)), h.morass2().theta(beta));
    let mask = h.rect().box_mask(pts, h.block() * lvl);
    h.forcing().iter().filter(|p| p.def_mask() & !mask == 0).copied().collect()
}

/// At limit levels `ℙ_{φ_{θβ}}` is the union of the `f_{θα} ⊗ f` images.
pub fn lemma_4_4(h: &TopologyHierarchy) -> Result<Check> {
    let m2 = h.morass2();
    let mut levels = Vec::new();
    for beta in (1..m2.thetas().len()).filter(|&b| m2.is_limit(b)) {
        let lhs = forcing_at(h, beta);
        let mut rhs = BTreeSet::new();
        for a in 0..beta {
            let src = forcing_at(h, a);
            for f in m2.family_ref(a, beta) {
                let t = level_tensor(f, h.block())?;
                for p in &src {
                    rhs.insert(t.image(p)?);
                }
            }
        }
        if let Some(x) = lhs.difference(&rhs).next() {
            return Ok(Check::fail("Lemma 4.4", json!({"beta": beta, "missing_from_union": show(x)})));
        }
        if let Some(x) = rhs.difference(&lhs).next() {
            return Ok(Check::fail("Lemma 4.4", json!({"beta": beta, "image_outside": show(x)})));
        }
        levels.push(json!({"beta": beta, "size": lhs.len()}));
    }
    Ok(Check::pass("Lemma 4.4", json!({"limit_levels": levels})))
}

/// Clause-thinned levels sit inside the `(∗)` levels of `ℙ`.
pub fn star_consistency(h: &TopologyHierarchy) -> Check {
    let mut sizes = Vec::new();
    for beta in 0..h.morass2().thetas().len() {
        let star = forcing_at(h, beta);
        if let Some(p) = h.thinned(beta).iter().find(|p| !star.contains(p)) {
            return Check::fail("(∗) contains clause levels", json!({"beta": beta, "p": show(p)}));
        }
        sizes.push(json!({"beta": beta, "clauses": h.thinned(beta).len(), "star": star.len()}));
    }
    Check::pass("(∗) contains clause levels", json!(sizes))
}

/// `g[p₁]` and `(h̄⊗h)[p₂]` agree for compatible `p₁, p₂`, and the
/// single-condition images stay in `ℙ_{φ_{θβ}}`.
pub fn remark_3(h: &TopologyHierarchy) -> Result<Check> {
    let m2 = h.morass2();
    let th = m2.thetas();
    let mut checked = 0u64;
    for beta in 1..th.len() {
        if m2.is_limit(beta) {
            continue;
        }
        let a = beta - 1;
        let t = h.right_tensor(a)?;
        let gs: Vec<TensorMap> =
            gfam(m2.inner(), th[a], th[beta]).into_iter().map(|g| TensorMap::points(g, h.block())).collect();
        let src = h.thinned(a);
        let timgs: Vec<TopCondition> = src.iter().map(|p| t.image(p)).collect::<Result<_>>()?;
        for g in &gs {
            let gimgs: Vec<TopCondition> = src.iter().map(|p| g.image(p)).collect::<Result<_>>()?;
            for (i, p) in src.iter().enumerate() {
                let u = gimgs[i].union(&timgs[i]);
                let ok = h.in_thinned(beta, &gimgs[i])
                    && h.in_thinned(beta, &timgs[i])
                    && u.is_some_and(|u| h.in_thinned(beta, &u));
                if !ok {
                    return Ok(Check::fail("Remark 3", json!({"beta": beta, "g": show(&g.vertex), "p": show(p)})));
                }
                for (j, p2) in src.iter().enumerate() {
                    if !p.union(p2).is_some_and(|u| h.in_thinned(a, &u)) {
                        continue;
                    }
                    checked += 1;
                    if !gimgs[i].agrees_with(&timgs[j]) {
                        return Ok(Check::fail(
                            "Remark 3",
                            json!({"beta": beta, "g": show(&g.vertex), "p1": show(p), "p2": show(p2)}),
                        ));
                    }
                }
            }
        }
    }
    Ok(Check::pass("Remark 3", json!({"compatible_pairs": checked})))
}

/// `e′_α(q)` comes out the same from every representative `r`.
pub fn e_prime_independence(h: &TopologyHierarchy) -> Check {
    let q = h.q_system();
    let n = h.morass2().thetas().len();
    let (mut elems, mut multi) = (0u64, 0u64);
    for a in 0..n - 1 {
        if h.morass2().is_limit(a + 1) {
            continue;
        }
        for x in h.q_set(a + 1).keys() {
            let all = q.e_prime_all(a, x);
            elems += 1;
            if all.len() > 1 {
                multi += 1;
            }
            let vals: BTreeSet<String> =
                all.iter().map(|(_, v)| v.as_ref().map(|v| format!("{v:?}")).unwrap_or_else(|e| e.to_string())).collect();
            if vals.len() > 1 {
                let shown: Vec<Value> = all
                    .iter()
                    .map(|(r, v)| json!({"r": show(r), "e'": v.as_ref().map(show).unwrap_or_else(|e| json!(e.to_string()))}))
                    .collect();
                return Check::fail("e′ independent of representative", json!({"alpha": a, "q": show(x), "values": shown}));
            }
        }
    }
    Check::pass("e′ independent of representative", json!({"elements": elems, "with_several_representatives": multi}))
}

/// Every `p ∈ ℙ` and `γ ≠ δ` admit a separating `q ≤ p`.  Also reported:
/// the instances where the top color block still has a column unused at
/// both points, which is the room the proof takes its fresh color from.
pub fn lemma_4_6(h: &TopologyHierarchy) -> Report {
    let n = h.rect().points;
    let b = h.block();
    let z = h.top_level();
    let (mut checked, mut with_room, mut failed, mut failed_with_room) = (0u64, 0u64, 0u64, 0u64);
    let (mut first, mut first_room) = (None, None);
    for p in h.forcing() {
        for g in 0..n {
            for d in g + 1..n {
                checked += 1;
                let room = (b * (z - 1)..b * z).any(|mu| p.get(g, mu).is_none() && p.get(d, mu).is_none());
                with_room += room as u64;
                if h.separate_search(p, g, d).is_none() {
                    failed += 1;
                    let w = json!({"p": show(p), "gamma": g, "delta": d});
                    if room {
                        failed_with_room += 1;
                        first_room.get_or_insert_with(|| w.clone());
                    }
                    first.get_or_insert(w);
                }
            }
        }
    }
    let mut r = Report::new("topology-4.x");
    let note = json!({"instances": checked, "separable": checked - failed});
    r.push(Check::from_failure(
        "Lemma 4.6",
        first.map(|w| json!({"first": w, "inseparable": failed, "instances": checked, "inseparable_with_room": failed_with_room})),
        note,
    ));
    r.push(Check::from_failure(
        "Lemma 4.6 with a fresh top-block color",
        first_room,
        json!({"instances": with_room}),
    ));
    r
}

/// The inductive construction on the clause-thinned top level.
pub fn lemma_4_6_construction(h: &TopologyHierarchy) -> Result<Check> {
    let n = h.rect().points;
    let top = h.morass2().thetas().len() - 1;
    let mut cases: BTreeMap<String, u64> = BTreeMap::new();
    let mut no_room: BTreeMap<usize, u64> = BTreeMap::new();
    for p in h.thinned(top) {
        for g in 0..n {
            for d in g + 1..n {
                match h.separate_at(top, p, g, d) {
                    Ok(Constructed::Done(s)) => {
                        if !s.separates(g, d) {
                            return Ok(Check::fail(
                                "Lemma 4.6 construction",
                                json!({"p": show(p), "gamma": g, "delta": d, "q": show(&s.q), "mu": s.mu}),
                            ));
                        }
                        let key = s.trace.iter().map(|c| show(c).as_str().unwrap_or("").to_string()).collect::<Vec<_>>();
                        *cases.entry(key.join(" > ")).or_default() += 1;
                    }
                    Ok(Constructed::NoRoom { level }) => *no_room.entry(level).or_default() += 1,
                    Err(e) => {
                        return Ok(Check::fail(
                            "Lemma 4.6 construction",
                            json!({"p": show(p), "gamma": g, "delta": d, "error": e.to_string()}),
                        ))
                    }
                }
            }
        }
    }
    Ok(Check::pass("Lemma 4.6 construction", json!({"cases": cases, "no_fresh_color_at_level": no_room})))
}

/// Cells whose block offset `p` never uses stay open in both directions.
pub fn remark_2(h: &TopologyHierarchy) -> Check {
    let rect = h.rect();
    let b = h.block();
    let mut checked = 0u64;
    for p in h.forcing() {
        let offsets: BTreeSet<usize> = p.used_colors().into_iter().map(|mu| mu % b).collect();
        for c in 0..rect.cells() {
            let (g, mu) = rect.coords(c);
            if offsets.contains(&(mu % b)) || p.get(g, mu).is_some() {
                continue;
            }
            for v in [false, true] {
                checked += 1;
                let q = p.with(g, mu, v);
                let open = h.in_forcing(&q) || h.forcing().iter().any(|r| r.leq(&q));
                if !open {
                    return Check::fail("Remark 2", json!({"p": show(p), "cell": [g, mu], "value": v}));
                }
            }
        }
    }
    Check::pass("Remark 2", json!({"cell_values": checked}))
}

/// `i : ℙ → ℚ_top` is a dense embedding.
pub fn lemma_4_8a(h: &TopologyHierarchy) -> Report {
    let qs: Vec<&QCondition> = h.q_top().keys().collect();
    let pos: BTreeMap<&QCondition, usize> = qs.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let words = qs.len().div_ceil(64);
    // down[x] = {y : y ≤ x}
    let mut down = vec![vec![0u64; words]; qs.len()];
    for (x, dx) in down.iter_mut().enumerate() {
        for y in 0..qs.len() {
            if star_leq(qs[y], qs[x], TopCondition::leq) {
                dx[y / 64] |= 1 << (y % 64);
            }
        }
    }
    let compat_q = |a: usize, b: usize| down[a].iter().zip(&down[b]).any(|(x, y)| x & y != 0);
    let ps = h.forcing();
    let ip: Vec<usize> = ps.iter().map(|p| pos[&h.star_image(p).expect("star")]).collect();
    let mut r = Report::new("topology-4.x");

    let mut order = None;
    let mut pairs = 0u64;
    'o: for (i, p) in ps.iter().enumerate() {
        for m in submasks(p.def_mask()) {
            let q = p.restrict(m);
            if !h.in_forcing(&q) {
                continue;
            }
            pairs += 1;
            let j = pos[&h.star_image(&q).expect("star")];
            if down[j][ip[i] / 64] >> (ip[i] % 64) & 1 == 0 {
                order = Some(json!({"p": show(p), "q": show(&q)}));
                break 'o;
            }
        }
    }
    r.push(Check::from_failure("Lemma 4.8(a) order", order, json!({"pairs": pairs})));

    let mut incompat = None;
    let mut counts = [0u64; 2];
    'o: for i in 0..ps.len() {
        for j in i..ps.len() {
            let cp = ps[i].union(&ps[j]).is_some_and(|u| {
                h.in_forcing(&u) || (!h.forcing_subset_closed() && ps.iter().any(|r| r.leq(&u)))
            });
            counts[cp as usize] += 1;
            if cp != compat_q(ip[i], ip[j]) {
                incompat = Some(json!({"p": show(&ps[i]), "q": show(&ps[j]), "compatible_in_P": cp}));
                break 'o;
            }
        }
    }
    r.push(Check::from_failure(
        "Lemma 4.8(a) incompatibility",
        incompat,
        json!({"compatible_pairs": counts[1], "incompatible_pairs": counts[0]}),
    ));

    let hit: BTreeSet<usize> = ip.iter().copied().collect();
    let dense = (0..qs.len()).find(|&x| !hit.iter().any(|&y| down[x][y / 64] >> (y % 64) & 1 == 1));
    r.push(Check::from_failure(
        "Lemma 4.8(a) density",
        dense.map(|x| json!({"no_image_below": show(qs[x])})),
        json!({"targets": qs.len()}),
    ));
    r
}

/// Maximum antichain of `ℙ` strictly below that of `P_top`.
pub fn antichain_contrast(h: &TopologyHierarchy, cap: u64) -> Check {
    let name = "max antichain ℙ < P";
    let (all, thin) = (h.p_top(), h.forcing());
    if all == thin {
        // the thinning removed nothing, so the two maxima coincide
        return Check::fail(name, json!({"identical": true, "conditions": all.len()}));
    }
    let top = h.points();
    let sys = h.thinned_system();
    let big = crate::fs::max_antichain(all.len(), |i, j| !h.compatible(top, &all[i], &all[j]), cap);
    let small = crate::fs::max_antichain(thin.len(), |i, j| !sys.compatible(top, &thin[i], &thin[j]), cap);
    let wit = json!({
        "P": {"conditions": all.len(), "max": big.size, "exact": big.exact},
        "thinned": {"conditions": thin.len(), "max": small.size, "exact": small.exact},
    });
    if small.exact && small.size < big.size {
        Check::pass(name, wit)
    } else {
        Check::fail(name, wit)
    }
}
