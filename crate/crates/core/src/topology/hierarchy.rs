//! The `P(η)`, `ℙ_η` and `ℚ_γ` hierarchies along a fake gap-2 morass.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::fs::{compute_star, star_leq, FsSystem, StarForm};
use crate::gap1::{FakeGap1Morass, MorassTree, Vertex};
use crate::gap2::{bar_decompose, gfam, BarDecomposition, FakeGap2Morass, Gap1Embedding};
use crate::topology::cond::{all_within, Bitset, Indexer, Rect, TensorMap, TopCondition};
use crate::{Error, Result};

/// An element of `ℚ`: a finite map from θ-levels to conditions.
pub type QCondition = BTreeMap<usize, TopCondition>;

/// Block size `B` (standing in for ω) and the gap-2 morass.
#[derive(Clone, Debug)]
pub struct ScaleProfile {
    pub block: usize,
    pub morass: FakeGap2Morass,
}

/// `f̄[q]`: `f̄[q](f̄(η)) = f̄_η ⊗ f [q(η)]`.
pub fn bar_image(inner: &FakeGap1Morass, f: &Gap1Embedding, q: &QCondition, block: usize) -> Result<QCondition> {
    let mut out = QCondition::new();
    for (&eta, v) in q {
        let d = bar_decompose(inner, f, eta)?;
        out.insert(d.bar_level, bar_tensor(f, &d, block)?.image(v)?);
    }
    Ok(out)
}

/// The naive `f[q]` with `f[q](f(η)) = f_η ⊗ f [q(η)]`.
pub fn naive_image(f: &Gap1Embedding, q: &QCondition, block: usize) -> Result<QCondition> {
    let mut out = QCondition::new();
    for (&eta, v) in q {
        let t = TensorMap::new(f.vertex_map(eta).clone(), f.level.restrict(eta)?, block);
        out.insert(f.at(eta), t.image(v)?);
    }
    Ok(out)
}

fn bar_tensor(f: &Gap1Embedding, d: &BarDecomposition, block: usize) -> Result<TensorMap> {
    Ok(TensorMap::new(d.bar_vertex.clone(), f.level.restrict(d.zeta)?, block))
}

/// `f_{θα} ⊗ f` for `f ∈ F_{αβ}`.
pub fn level_tensor(f: &Gap1Embedding, block: usize) -> Result<TensorMap> {
    let top = f.src_top();
    Ok(TensorMap::new(f.vertex_map(top).clone(), f.level.restrict(top)?, block))
}

/// The finished hierarchy for one profile.
pub struct TopologyHierarchy {
    pub(crate) block: usize,
    pub(crate) m2: FakeGap2Morass,
    pub(crate) inner_tree: MorassTree,
    pub(crate) theta_m: FakeGap1Morass,
    pub(crate) theta_tree: MorassTree,
    pub(crate) rect: Rect,
    pub(crate) ix: Indexer,
    /// `P(φ_ζ)` for every inner level.
    pub(crate) plev: Vec<Bitset>,
    pub(crate) plist: Vec<Vec<TopCondition>>,
    /// `ℙ_{φ_{θ_β}}` from the thinning clauses, per outer level.
    pub(crate) thin: Vec<Bitset>,
    pub(crate) thin_list: Vec<Vec<TopCondition>>,
    pub(crate) stars: HashMap<TopCondition, StarForm<TopCondition>>,
    /// `ℚ_{θ_β}` with the representatives `r` of each element.
    pub(crate) qsets: Vec<BTreeMap<QCondition, Vec<TopCondition>>>,
    /// `{p*↾supp(p) : p ∈ ℙ}` with the full support.
    pub(crate) q_top: BTreeMap<QCondition, Vec<TopCondition>>,
    /// `ℙ = {p ∈ P(φ_Z) : p*↾(supp(p) ∩ Z) ∈ ℚ_{θ_top}}`.
    pub(crate) forcing: Bitset,
    pub(crate) forcing_list: Vec<TopCondition>,
    pub(crate) thin_closed: bool,
    bar_cache: RefCell<HashMap<(Gap1Embedding, usize), BarDecomposition>>,
}

impl TopologyHierarchy {
    pub fn build(profile: &ScaleProfile) -> Result<Self> {
        let b = profile.block;
        let m2 = profile.morass.clone();
        let inner = m2.inner().clone();
        let z = m2.top_theta();
        if z != inner.height() {
            return Err(Error::Precondition(format!(
                "the θ-top {z} must equal the inner height {}",
                inner.height()
            )));
        }
        if b == 0 {
            return Err(Error::Precondition("block size must be positive".into()));
        }
        let rect = Rect::new(inner.top_theta(), b * z, b)?;
        let ix = Indexer::new(rect.cells())?;
        let inner_tree = MorassTree::build(&inner)?;
        let theta_m = m2.theta_morass();
        let theta_tree = MorassTree::build(&theta_m)?;

        let mut plev = vec![Bitset::new(ix.size)];
        plev[0].set(ix.index(&rect.empty()));
        let mut plist = vec![vec![rect.empty()]];
        for zeta in 1..=z {
            let a = zeta - 1;
            if inner.split(a).is_none() {
                return Err(Error::Precondition(format!("inner level {zeta} is a limit; only successor levels are built")));
            }
            let h = TensorMap::points(inner.successor_map(a).expect("split exists"), b);
            let (pa, pb) = (inner.theta(a), inner.theta(zeta));
            let box_b = rect.box_mask(pb, b * zeta);
            let box_a = rect.box_mask(pa, b * a);
            let low_b = rect.box_mask(pb, b * a);
            let mut bits = Bitset::new(ix.size);
            let mut list = Vec::new();
            let prev = &plev[a];
            all_within(box_b, rect.colors, |p| {
                let x = p.restrict(box_a);
                let y = h.preimage(&p.restrict(low_b));
                if prev.get(ix.index(&x)) && prev.get(ix.index(&y)) && x.agrees_with(&y) {
                    bits.set(ix.index(&p));
                    list.push(p);
                }
            });
            list.sort_unstable();
            plev.push(bits);
            plist.push(list);
        }

        let mut hier = TopologyHierarchy {
            block: b,
            m2,
            inner_tree,
            theta_m,
            theta_tree,
            rect,
            ix,
            plev,
            plist,
            thin: Vec::new(),
            thin_list: Vec::new(),
            stars: HashMap::new(),
            qsets: Vec::new(),
            q_top: BTreeMap::new(),
            forcing: Bitset::new(0),
            forcing_list: Vec::new(),
            thin_closed: false,
            bar_cache: RefCell::new(HashMap::new()),
        };
        let mut stars = HashMap::with_capacity(hier.plist[z].len());
        for p in &hier.plist[z] {
            stars.insert(*p, compute_star(&hier, p)?);
        }
        hier.stars = stars;
        hier.build_thinned()?;
        hier.build_q();
        Ok(hier)
    }

    fn build_thinned(&mut self) -> Result<()> {
        let inner = self.m2.inner().clone();
        let th = self.m2.thetas().to_vec();
        let first = self.plev[th[0]].clone();
        self.thin = vec![first];
        self.thin_list = vec![self.plist[th[0]].clone()];
        for beta in 1..th.len() {
            if self.m2.is_limit(beta) {
                if th[beta] != th[beta - 1] {
                    return Err(Error::Precondition(format!("limit level {beta} is not an identity copy")));
                }
                let (bits, list) = (self.thin[beta - 1].clone(), self.thin_list[beta - 1].clone());
                self.thin.push(bits);
                self.thin_list.push(list);
                continue;
            }
            let a = beta - 1;
            let t = self.right_tensor(a)?;
            let gs: Vec<TensorMap> =
                gfam(&inner, th[a], th[beta]).into_iter().map(|g| TensorMap::points(g, self.block)).collect();
            let low = self.rect.box_mask(inner.theta(th[beta]), self.block * th[a]);
            let mut bits = Bitset::new(self.ix.size);
            let mut list = Vec::new();
            for p in &self.plist[th[beta]] {
                let pb = t.preimage(p);
                if !self.thin[a].get(self.ix.index(&pb)) {
                    continue;
                }
                let lowp = p.restrict(low);
                if gs.iter().all(|g| g.preimage(&lowp).agrees_with(&pb)) {
                    bits.set(self.ix.index(p));
                    list.push(*p);
                }
            }
            self.thin.push(bits);
            self.thin_list.push(list);
        }
        Ok(())
    }

    fn build_q(&mut self) {
        let th = self.m2.thetas().to_vec();
        for (beta, list) in self.thin_list.iter().enumerate() {
            let mut m: BTreeMap<QCondition, Vec<TopCondition>> = BTreeMap::new();
            for p in list {
                m.entry(self.stars[p].restricted_below(th[beta])).or_default().push(*p);
            }
            self.qsets.push(m);
        }
        let z = self.top_level();
        let top_q = self.qsets.last().expect("level 0");
        let mut bits = Bitset::new(self.ix.size);
        let mut list = Vec::new();
        for p in &self.plist[z] {
            if top_q.contains_key(&self.stars[p].restricted_below(z)) {
                bits.set(self.ix.index(p));
                list.push(*p);
            }
        }
        self.forcing = bits;
        self.forcing_list = list;
        for p in &self.forcing_list {
            self.q_top.entry(self.stars[p].restricted()).or_default().push(*p);
        }
        self.thin_closed = self.forcing_list.iter().all(|p| {
            crate::topology::cond::bits(p.def_mask()).all(|c| self.forcing.get(self.ix.index(&p.restrict(!(1u64 << c)))))
        });
    }

    /// `h̄_{θα} ⊗ h` for the right-branching `h ∈ F_{α,α+1}`.
    pub fn right_tensor(&self, alpha: usize) -> Result<TensorMap> {
        let h = self
            .m2
            .right_branching(alpha)
            .ok_or_else(|| Error::Precondition(format!("no right-branching embedding at level {alpha}")))?;
        let d = self.bar(h, self.m2.theta(alpha))?;
        bar_tensor(h, &d, self.block)
    }

    pub(crate) fn bar(&self, f: &Gap1Embedding, zeta: usize) -> Result<BarDecomposition> {
        let key = (f.clone(), zeta);
        if let Some(d) = self.bar_cache.borrow().get(&key) {
            return Ok(d.clone());
        }
        let d = bar_decompose(self.m2.inner(), f, zeta)?;
        self.bar_cache.borrow_mut().insert(key, d.clone());
        Ok(d)
    }

    /// `f̄[q]` with cached decompositions.
    pub fn bar_image(&self, f: &Gap1Embedding, q: &QCondition) -> Result<QCondition> {
        let mut out = QCondition::new();
        for (&eta, v) in q {
            let d = self.bar(f, eta)?;
            out.insert(d.bar_level, bar_tensor(f, &d, self.block)?.image(v)?);
        }
        Ok(out)
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn morass2(&self) -> &FakeGap2Morass {
        &self.m2
    }

    /// The top inner level `Z = θ_top`.
    pub fn top_level(&self) -> usize {
        self.m2.top_theta()
    }

    /// `P(φ_Z)`, i.e. `P(top)`.
    pub fn p_top(&self) -> &[TopCondition] {
        &self.plist[self.top_level()]
    }

    pub fn p_level(&self, zeta: usize) -> &[TopCondition] {
        &self.plist[zeta]
    }

    pub fn in_p_level(&self, zeta: usize, p: &TopCondition) -> bool {
        self.plev[zeta].get(self.ix.index(p))
    }

    /// `ℙ`, the top of the thinned system.
    pub fn forcing(&self) -> &[TopCondition] {
        &self.forcing_list
    }

    pub fn in_forcing(&self, p: &TopCondition) -> bool {
        self.forcing.get(self.ix.index(p))
    }

    /// `ℙ_{φ_{θ_β}}` from the thinning clauses.
    pub fn thinned(&self, beta: usize) -> &[TopCondition] {
        &self.thin_list[beta]
    }

    pub fn in_thinned(&self, beta: usize, p: &TopCondition) -> bool {
        self.thin[beta].get(self.ix.index(p))
    }

    pub fn forcing_subset_closed(&self) -> bool {
        self.thin_closed
    }

    pub fn star(&self, p: &TopCondition) -> Option<&StarForm<TopCondition>> {
        self.stars.get(p)
    }

    /// `i(p) = p*↾supp(p)`.
    pub fn star_image(&self, p: &TopCondition) -> Option<QCondition> {
        self.stars.get(p).map(StarForm::restricted)
    }

    pub fn q_set(&self, beta: usize) -> &BTreeMap<QCondition, Vec<TopCondition>> {
        &self.qsets[beta]
    }

    pub fn q_top(&self) -> &BTreeMap<QCondition, Vec<TopCondition>> {
        &self.q_top
    }

    /// Least inner level `ζ` with `η ≤ φ_ζ`.
    pub(crate) fn level_of(&self, eta: usize) -> usize {
        let inner = self.m2.inner();
        (0..=inner.height()).find(|&z| inner.theta(z) >= eta).unwrap_or(inner.height())
    }

    /// Least outer level `β` with `η ≤ θ_β`.
    pub(crate) fn outer_level_of(&self, eta: usize) -> usize {
        let th = self.m2.thetas();
        (0..th.len()).find(|&b| th[b] >= eta).unwrap_or(th.len() - 1)
    }

    pub(crate) fn p_contains(&self, eta: usize, p: &TopCondition) -> bool {
        let z = self.level_of(eta);
        p.def_mask() & !self.rect.box_mask(eta, self.block * z) == 0 && self.plev[z].get(self.ix.index(p))
    }

    pub fn thinned_system(&self) -> Thinned<'_> {
        Thinned(self)
    }

    pub fn q_system(&self) -> QSystem<'_> {
        QSystem(self)
    }

    /// `e′_α(q)` computed from one representative `r` of `q`.
    pub fn e_prime_via(&self, alpha: usize, r: &TopCondition) -> Result<QCondition> {
        let th = self.m2.theta(alpha);
        let t = self.right_tensor(alpha)?;
        let star = self.stars.get(r).ok_or_else(|| Error::Inconsistent(format!("{r:?} has no star")))?;
        let qhat = star.values[th]
            .union(&t.preimage(r))
            .ok_or_else(|| Error::Inconsistent(format!("r*(θ_α) and the pullback of {r:?} disagree")))?;
        let s = self
            .stars
            .get(&qhat)
            .ok_or_else(|| Error::Inconsistent(format!("{qhat:?} is not a P-condition")))?;
        Ok(s.restricted_below(th))
    }
}

impl FsSystem for TopologyHierarchy {
    type Cond = TopCondition;

    fn morass(&self) -> &FakeGap1Morass {
        self.m2.inner()
    }

    fn tree(&self) -> &MorassTree {
        &self.inner_tree
    }

    fn poset(&self, eta: usize) -> Vec<TopCondition> {
        let z = self.level_of(eta);
        self.plist[z].iter().filter(|p| p.max_point().is_none_or(|m| m < eta)).copied().collect()
    }

    fn contains(&self, eta: usize, p: &TopCondition) -> bool {
        self.p_contains(eta, p)
    }

    fn leq(&self, p: &TopCondition, q: &TopCondition) -> bool {
        p.leq(q)
    }

    fn compatible(&self, eta: usize, p: &TopCondition, q: &TopCondition) -> bool {
        p.union(q).is_some_and(|u| self.p_contains(eta, &u))
    }

    fn sigma(&self, s: Vertex, t: Vertex, p: &TopCondition) -> Option<TopCondition> {
        if !self.p_contains(s.1 + 1, p) {
            return None;
        }
        TensorMap::points(self.inner_tree.pi(s, t)?, self.block).image(p).ok()
    }

    fn sigma_preimage(&self, s: Vertex, t: Vertex, p: &TopCondition) -> Option<TopCondition> {
        let m = TensorMap::points(self.inner_tree.pi(s, t)?, self.block);
        if !m.covers(p) {
            return None;
        }
        let q = m.preimage(p);
        self.p_contains(s.1 + 1, &q).then_some(q)
    }

    fn e(&self, alpha: usize, p: &TopCondition) -> Option<TopCondition> {
        let inner = self.m2.inner();
        let (pa, pb) = (inner.theta(alpha), inner.theta(alpha + 1));
        if !self.p_contains(pb, p) {
            return None;
        }
        let (s, t) = self.sigma_alpha_pair(alpha);
        if let Some(q) = self.sigma_preimage(s, t, p) {
            return Some(q);
        }
        if self.p_contains(pa, p) {
            return Some(*p);
        }
        let h = TensorMap::points(inner.successor_map(alpha)?, self.block);
        let x = p.restrict(self.rect.box_mask(pa, self.block * alpha));
        let y = h.preimage(&p.restrict(self.rect.box_mask(pb, self.block * alpha)));
        x.union(&y)
    }
}

/// The thinned system `⟨ℙ_η⟩` with the same `σ` and `e`.
pub struct Thinned<'a>(pub &'a TopologyHierarchy);

impl Thinned<'_> {
    fn member(&self, eta: usize, p: &TopCondition) -> bool {
        self.0.p_contains(eta, p) && self.0.in_forcing(p)
    }
}

impl FsSystem for Thinned<'_> {
    type Cond = TopCondition;

    fn morass(&self) -> &FakeGap1Morass {
        self.0.m2.inner()
    }

    fn tree(&self) -> &MorassTree {
        &self.0.inner_tree
    }

    fn poset(&self, eta: usize) -> Vec<TopCondition> {
        self.0.poset(eta).into_iter().filter(|p| self.0.in_forcing(p)).collect()
    }

    fn contains(&self, eta: usize, p: &TopCondition) -> bool {
        self.member(eta, p)
    }

    fn leq(&self, p: &TopCondition, q: &TopCondition) -> bool {
        p.leq(q)
    }

    fn compatible(&self, eta: usize, p: &TopCondition, q: &TopCondition) -> bool {
        let Some(u) = p.union(q) else { return false };
        if self.0.thin_closed {
            return self.member(eta, &u);
        }
        self.poset(eta).iter().any(|r| r.leq(&u))
    }

    fn sigma(&self, s: Vertex, t: Vertex, p: &TopCondition) -> Option<TopCondition> {
        if !self.member(s.1 + 1, p) {
            return None;
        }
        self.0.sigma(s, t, p)
    }

    fn sigma_preimage(&self, s: Vertex, t: Vertex, p: &TopCondition) -> Option<TopCondition> {
        self.0.sigma_preimage(s, t, p).filter(|q| self.0.in_forcing(q))
    }

    fn e(&self, alpha: usize, p: &TopCondition) -> Option<TopCondition> {
        if !self.member(self.0.m2.inner().theta(alpha + 1), p) {
            return None;
        }
        self.0.e(alpha, p)
    }
}

/// The system `⟨ℚ_γ⟩, σ′, e′` along the θ-morass.
pub struct QSystem<'a>(pub &'a TopologyHierarchy);

impl QSystem<'_> {
    fn level_set(&self, eta: usize) -> &BTreeMap<QCondition, Vec<TopCondition>> {
        &self.0.qsets[self.0.outer_level_of(eta)]
    }

    /// `e′_α(q)` for every representative; the report shows whether they agree.
    pub fn e_prime_all(&self, alpha: usize, q: &QCondition) -> Vec<(TopCondition, Result<QCondition>)> {
        let reps = self.0.qsets[alpha + 1].get(q).cloned().unwrap_or_default();
        reps.into_iter().map(|r| (r, self.0.e_prime_via(alpha, &r))).collect()
    }
}

impl FsSystem for QSystem<'_> {
    type Cond = QCondition;

    fn morass(&self) -> &FakeGap1Morass {
        &self.0.theta_m
    }

    fn tree(&self) -> &MorassTree {
        &self.0.theta_tree
    }

    fn poset(&self, eta: usize) -> Vec<QCondition> {
        self.level_set(eta).keys().filter(|q| q.keys().all(|&k| k < eta)).cloned().collect()
    }

    fn contains(&self, eta: usize, q: &QCondition) -> bool {
        q.keys().all(|&k| k < eta) && self.level_set(eta).contains_key(q)
    }

    fn leq(&self, p: &QCondition, q: &QCondition) -> bool {
        star_leq(p, q, TopCondition::leq)
    }

    fn compatible(&self, eta: usize, p: &QCondition, q: &QCondition) -> bool {
        self.level_set(eta)
            .keys()
            .filter(|r| r.keys().all(|&k| k < eta))
            .any(|r| self.leq(r, p) && self.leq(r, q))
    }

    fn sigma(&self, s: Vertex, t: Vertex, q: &QCondition) -> Option<QCondition> {
        if !self.contains(s.1 + 1, q) {
            return None;
        }
        let f = self.0.m2.pi_prime(s, t)?;
        self.0.bar_image(&f, q).ok()
    }

    fn sigma_preimage(&self, s: Vertex, t: Vertex, q: &QCondition) -> Option<QCondition> {
        self.poset(s.1 + 1).into_iter().find(|r| self.sigma(s, t, r).as_ref() == Some(q))
    }

    fn e(&self, alpha: usize, q: &QCondition) -> Option<QCondition> {
        let m = &self.0.theta_m;
        if !self.contains(m.theta(alpha + 1), q) {
            return None;
        }
        let (s, t) = self.sigma_alpha_pair(alpha);
        if let Some(r) = self.sigma_preimage(s, t, q) {
            return Some(r);
        }
        if self.contains(m.theta(alpha), q) {
            return Some(q.clone());
        }
        let r = self.0.qsets[alpha + 1].get(q)?.first()?;
        self.0.e_prime_via(alpha, r).ok()
    }
}
