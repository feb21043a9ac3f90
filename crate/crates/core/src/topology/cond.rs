//! Finite partial functions `x_p -> 2` on a points × colors rectangle.

use serde::ser::{Serialize, SerializeSeq, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::order::OrdMap;
use crate::{Error, Result};

/// The ambient rectangle `points × colors`; colors come in blocks of `block`.
///
/// Cell `(γ, μ)` has index `γ·colors + μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub points: usize,
    pub colors: usize,
    pub block: usize,
}

impl Rect {
    pub const MAX_CELLS: usize = 64;

    pub fn new(points: usize, colors: usize, block: usize) -> Result<Self> {
        if points * colors > Self::MAX_CELLS {
            return Err(Error::Scale(format!("{points}×{colors} rectangle exceeds {} cells", Self::MAX_CELLS)));
        }
        if block == 0 || colors % block != 0 {
            return Err(Error::Precondition(format!("{colors} colors do not split into blocks of {block}")));
        }
        Ok(Rect { points, colors, block })
    }

    pub fn cells(&self) -> usize {
        self.points * self.colors
    }

    pub fn cell(&self, gamma: usize, mu: usize) -> usize {
        gamma * self.colors + mu
    }

    pub fn coords(&self, c: usize) -> (usize, usize) {
        (c / self.colors, c % self.colors)
    }

    /// The cells of `pts × cols` (both initial segments).
    pub fn box_mask(&self, pts: usize, cols: usize) -> u64 {
        let mut m = 0u64;
        for g in 0..pts.min(self.points) {
            for mu in 0..cols.min(self.colors) {
                m |= 1 << self.cell(g, mu);
            }
        }
        m
    }

    pub fn empty(&self) -> TopCondition {
        TopCondition { def: 0, val: 0, width: self.colors as u16 }
    }

    pub fn condition(&self, entries: &[(usize, usize, bool)]) -> Result<TopCondition> {
        let mut p = self.empty();
        for &(g, mu, v) in entries {
            if g >= self.points || mu >= self.colors {
                return Err(Error::OutOfRange(format!("cell ({g},{mu}) outside {}×{}", self.points, self.colors)));
            }
            let c = self.cell(g, mu);
            if p.def >> c & 1 == 1 && (p.val >> c & 1 == 1) != v {
                return Err(Error::Inconsistent(format!("cell ({g},{mu}) given two values")));
            }
            p.def |= 1 << c;
            if v {
                p.val |= 1 << c;
            }
        }
        Ok(p)
    }
}

/// A condition `p : x_p -> 2`, stored as a definedness mask and a value mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TopCondition {
    def: u64,
    val: u64,
    width: u16,
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let c = m.trailing_zeros() as usize;
            m &= m - 1;
            c
        })
    })
}

impl TopCondition {
    pub fn def_mask(&self) -> u64 {
        self.def
    }

    pub fn val_mask(&self) -> u64 {
        self.val
    }

    fn w(&self) -> usize {
        self.width as usize
    }

    pub fn len(&self) -> usize {
        self.def.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.def == 0
    }

    pub fn get(&self, gamma: usize, mu: usize) -> Option<bool> {
        let c = gamma * self.w() + mu;
        (c < 64 && mu < self.w() && self.def >> c & 1 == 1).then(|| self.val >> c & 1 == 1)
    }

    pub fn entries(&self) -> Vec<(usize, usize, bool)> {
        bits(self.def).map(|c| (c / self.w(), c % self.w(), self.val >> c & 1 == 1)).collect()
    }

    /// Agreement on the common part of the domains.
    pub fn agrees_with(&self, q: &TopCondition) -> bool {
        self.def & q.def & (self.val ^ q.val) == 0
    }

    pub fn union(&self, q: &TopCondition) -> Option<TopCondition> {
        self.agrees_with(q).then(|| TopCondition { def: self.def | q.def, val: self.val | q.val, width: self.width })
    }

    pub fn is_subset_of(&self, q: &TopCondition) -> bool {
        self.def & !q.def == 0 && q.val & self.def == self.val
    }

    /// `self ≤ q` iff `q ⊆ self`.
    pub fn leq(&self, q: &TopCondition) -> bool {
        q.is_subset_of(self)
    }

    pub fn restrict(&self, mask: u64) -> TopCondition {
        TopCondition { def: self.def & mask, val: self.val & mask, width: self.width }
    }

    pub fn with(&self, gamma: usize, mu: usize, v: bool) -> TopCondition {
        let c = gamma * self.w() + mu;
        let mut q = *self;
        q.def |= 1 << c;
        q.val = (q.val & !(1 << c)) | (u64::from(v) << c);
        q
    }

    pub fn max_point(&self) -> Option<usize> {
        (self.def != 0).then(|| (63 - self.def.leading_zeros() as usize) / self.w())
    }

    /// Colors `μ` with some `(τ, μ) ∈ x_p`.
    pub fn used_colors(&self) -> Vec<usize> {
        let mut v: Vec<usize> = bits(self.def).map(|c| c % self.w()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Moves every entry through `f`; `None` from `f` drops the entry.
    pub(crate) fn map_cells(&self, f: impl Fn(usize, usize) -> Option<(usize, usize)>) -> TopCondition {
        let mut q = TopCondition { def: 0, val: 0, width: self.width };
        for c in bits(self.def) {
            if let Some((g, mu)) = f(c / self.w(), c % self.w()) {
                let d = g * self.w() + mu;
                q.def |= 1 << d;
                q.val |= (self.val >> c & 1) << d;
            }
        }
        q
    }
}

impl Ord for TopCondition {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.def.count_ones(), self.def, self.val).cmp(&(o.def.count_ones(), o.def, o.val))
    }
}

impl PartialOrd for TopCondition {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for TopCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, mu, v)) in self.entries().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({g},{mu})={}", u8::from(v))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for TopCondition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let e = self.entries();
        let mut seq = s.serialize_seq(Some(e.len()))?;
        for (g, mu, v) in e {
            seq.serialize_element(&[g, mu, usize::from(v)])?;
        }
        seq.end()
    }
}

/// `⟨γ, B·δ+n⟩ ↦ ⟨vertex(γ), B·level(δ)+n⟩`; with no level part the colors stay put.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMap {
    pub vertex: OrdMap,
    pub level: Option<OrdMap>,
    pub block: usize,
}

impl TensorMap {
    pub fn new(vertex: OrdMap, level: OrdMap, block: usize) -> Self {
        TensorMap { vertex, level: Some(level), block }
    }

    /// A map on points only, as induced by `π`, `h_α` or `g ∈ G`.
    pub fn points(vertex: OrdMap, block: usize) -> Self {
        TensorMap { vertex, level: None, block }
    }

    pub fn apply(&self, gamma: usize, mu: usize) -> Option<(usize, usize)> {
        let g = self.vertex.images().get(gamma)?;
        let mu2 = match &self.level {
            None => mu,
            Some(l) => self.block * l.images().get(mu / self.block)? + mu % self.block,
        };
        Some((*g, mu2))
    }

    fn unapply(&self, gamma: usize, mu: usize) -> Option<(usize, usize)> {
        let g = self.vertex.preimage(gamma)?;
        let mu2 = match &self.level {
            None => mu,
            Some(l) => self.block * l.preimage(mu / self.block)? + mu % self.block,
        };
        Some((g, mu2))
    }

    /// `T[p]`; every entry of `p` must lie in the source rectangle.
    pub fn image(&self, p: &TopCondition) -> Result<TopCondition> {
        for (g, mu, _) in p.entries() {
            if self.apply(g, mu).is_none() {
                return Err(Error::OutOfRange(format!("cell ({g},{mu}) outside the source of the tensor map")));
            }
        }
        Ok(p.map_cells(|g, mu| self.apply(g, mu)))
    }

    /// `T^{-1}[p]`: the entries of `p` inside `rng(T)`, pulled back.
    pub fn preimage(&self, p: &TopCondition) -> TopCondition {
        p.map_cells(|g, mu| self.unapply(g, mu))
    }

    /// `p ⊆ rng(T)`.
    pub fn covers(&self, p: &TopCondition) -> bool {
        p.entries().into_iter().all(|(g, mu, _)| self.unapply(g, mu).is_some())
    }
}

/// Base-3 positions of conditions inside a rectangle of at most `MAX` cells.
#[derive(Clone, Debug)]
pub(crate) struct Indexer {
    tables: Vec<Vec<u32>>,
    pub(crate) size: usize,
}

impl Indexer {
    pub(crate) const MAX: usize = 16;

    pub(crate) fn new(cells: usize) -> Result<Self> {
        if cells > Self::MAX {
            return Err(Error::Scale(format!("{cells} cells; exhaustive enumeration is capped at {}", Self::MAX)));
        }
        let mut tables = Vec::new();
        for chunk in 0..cells.div_ceil(8) {
            let mut t = vec![0u32; 1 << 16];
            for d in 0..256usize {
                for v in 0..256usize {
                    if v & !d != 0 {
                        continue;
                    }
                    let mut x = 0u64;
                    for b in 0..8 {
                        let c = chunk * 8 + b;
                        if c < cells && d >> b & 1 == 1 {
                            x += 3u64.pow(c as u32) * (1 + (v >> b & 1) as u64);
                        }
                    }
                    t[d << 8 | v] = x as u32;
                }
            }
            tables.push(t);
        }
        Ok(Indexer { tables, size: 3usize.pow(cells as u32) })
    }

    #[inline]
    pub(crate) fn index_masks(&self, def: u64, val: u64) -> usize {
        let mut x = 0usize;
        for (k, t) in self.tables.iter().enumerate() {
            let d = (def >> (8 * k)) as usize & 0xff;
            let v = (val >> (8 * k)) as usize & 0xff;
            x += t[d << 8 | v] as usize;
        }
        x
    }

    pub(crate) fn index(&self, p: &TopCondition) -> usize {
        self.index_masks(p.def, p.val)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bitset(Vec<u64>);

impl Bitset {
    pub(crate) fn new(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}

/// Every condition with domain inside `mask`, in no particular order.
pub(crate) fn all_within(mask: u64, width: usize, mut f: impl FnMut(TopCondition)) {
    let mut def = mask;
    loop {
        let mut val = def;
        loop {
            f(TopCondition { def, val, width: width as u16 });
            if val == 0 {
                break;
            }
            val = (val - 1) & def;
        }
        if def == 0 {
            break;
        }
        def = (def - 1) & mask;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_moves_blocks() {
        let r = Rect::new(2, 6, 2).unwrap();
        let t = TensorMap::new(OrdMap::new(1, 2, vec![1]).unwrap(), OrdMap::new(1, 3, vec![2]).unwrap(), 2);
        let p = r.condition(&[(0, 1, true)]).unwrap();
        assert_eq!(t.image(&p).unwrap(), r.condition(&[(1, 5, true)]).unwrap());
        assert_eq!(t.preimage(&t.image(&p).unwrap()), p);
        let bad = r.condition(&[(0, 2, false)]).unwrap();
        assert!(t.image(&bad).is_err());
    }

    #[test]
    fn identity_tensor_is_identity() {
        let r = Rect::new(2, 4, 2).unwrap();
        let t = TensorMap::new(OrdMap::identity(2), OrdMap::identity(2), 2);
        let p = r.condition(&[(0, 1, true), (1, 3, false)]).unwrap();
        assert_eq!(t.image(&p).unwrap(), p);
    }

    #[test]
    fn enumeration_and_index_are_bijective() {
        let r = Rect::new(2, 2, 1).unwrap();
        let ix = Indexer::new(r.cells()).unwrap();
        let mut seen = vec![false; ix.size];
        let mut n = 0;
        all_within(r.box_mask(2, 2), 2, |p| {
            assert!(!seen[ix.index(&p)]);
            seen[ix.index(&p)] = true;
            n += 1;
        });
        assert_eq!(n, 81);
    }

    #[test]
    fn union_and_order() {
        let r = Rect::new(2, 2, 1).unwrap();
        let p = r.condition(&[(0, 0, true)]).unwrap();
        let q = r.condition(&[(0, 0, false)]).unwrap();
        let s = r.condition(&[(1, 1, true)]).unwrap();
        assert!(p.union(&q).is_none());
        let u = p.union(&s).unwrap();
        assert!(u.leq(&p) && u.leq(&s) && !p.leq(&u));
        assert_eq!(serde_json::to_string(&u).unwrap(), "[[0,0,1],[1,1,1]]");
    }
}
