//! Order-preserving maps between finite ordinals.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::Error;

/// A strictly increasing map from the ordinal `dom` into the ordinal `cod`.
///
/// The invariant (`img.len() == dom`, strictly increasing, every image below
/// `cod`) holds for every value built through the public constructors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawOrdMap", into = "RawOrdMap")]
pub struct OrdMap {
    dom: usize,
    cod: usize,
    img: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawOrdMap {
    dom: usize,
    cod: usize,
    img: Vec<usize>,
}

impl TryFrom<RawOrdMap> for OrdMap {
    type Error = Error;
    fn try_from(r: RawOrdMap) -> Result<Self, Error> {
        OrdMap::new(r.dom, r.cod, r.img)
    }
}

impl From<OrdMap> for RawOrdMap {
    fn from(m: OrdMap) -> Self {
        RawOrdMap { dom: m.dom, cod: m.cod, img: m.img }
    }
}

impl OrdMap {
    pub fn new(dom: usize, cod: usize, img: Vec<usize>) -> Result<Self, Error> {
        if img.len() != dom {
            return Err(Error::NotOrderPreserving(format!(
                "image list has {} entries for domain {dom}",
                img.len()
            )));
        }
        if let Some(w) = img.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::NotOrderPreserving(format!("{} is not below {}", w[0], w[1])));
        }
        if let Some(&x) = img.iter().find(|&&x| x >= cod) {
            return Err(Error::OutOfRange(format!("image {x} outside codomain {cod}")));
        }
        Ok(OrdMap { dom, cod, img })
    }

    pub fn identity(n: usize) -> Self {
        OrdMap { dom: n, cod: n, img: (0..n).collect() }
    }

    /// The identity on `dom` viewed as a map into the larger ordinal `cod`.
    pub fn inclusion(dom: usize, cod: usize) -> Result<Self, Error> {
        OrdMap::new(dom, cod, (0..dom).collect())
    }

    /// The map that is the identity below `split` and shifts `[split, dom)` up to start at `start`.
    pub fn shifted(dom: usize, cod: usize, split: usize, start: usize) -> Result<Self, Error> {
        let img = (0..dom).map(|x| if x < split { x } else { start + (x - split) }).collect();
        OrdMap::new(dom, cod, img)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn apply(&self, x: usize) -> Result<usize, Error> {
        self.img
            .get(x)
            .copied()
            .ok_or_else(|| Error::OutOfRange(format!("{x} outside domain {}", self.dom)))
    }

    /// `self ∘ inner`.  Requires `inner.cod == self.dom`.
    pub fn compose(&self, inner: &OrdMap) -> Result<OrdMap, Error> {
        if inner.cod != self.dom {
            return Err(Error::DomainMismatch(format!(
                "cannot compose: inner map lands in {}, outer map starts at {}",
                inner.cod, self.dom
            )));
        }
        Ok(OrdMap { dom: inner.dom, cod: self.cod, img: inner.img.iter().map(|&x| self.img[x]).collect() })
    }

    /// Restriction to the initial segment `d`, keeping the codomain.
    pub fn restrict(&self, d: usize) -> Result<OrdMap, Error> {
        if d > self.dom {
            return Err(Error::OutOfRange(format!("cannot restrict domain {} to {d}", self.dom)));
        }
        Ok(OrdMap { dom: d, cod: self.cod, img: self.img[..d].to_vec() })
    }

    /// Restriction to `d` with the codomain cut down to `sup` of the image.
    pub fn restrict_tight(&self, d: usize) -> Result<OrdMap, Error> {
        let r = self.restrict(d)?;
        let cod = r.img.last().map_or(0, |x| x + 1);
        Ok(OrdMap { cod, ..r })
    }

    /// Same images, different codomain.
    pub fn with_cod(&self, cod: usize) -> Result<OrdMap, Error> {
        OrdMap::new(self.dom, cod, self.img.clone())
    }

    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.img.binary_search(&y).ok()
    }

    pub fn in_range(&self, y: usize) -> bool {
        self.img.binary_search(&y).is_ok()
    }

    /// Strict supremum of the image of the initial segment `z`: the least
    /// ordinal above every `self(x)` with `x < z`.
    pub fn ssup_image(&self, z: usize) -> Result<usize, Error> {
        if z > self.dom {
            return Err(Error::OutOfRange(format!("{z} exceeds domain {}", self.dom)));
        }
        Ok(if z == 0 { 0 } else { self.img[z - 1] + 1 })
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.img.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Identity on the segment `d`, whatever happens above.
    pub fn is_identity_below(&self, d: usize) -> bool {
        self.img.iter().take(d).enumerate().all(|(i, &x)| i == x)
    }
}

impl fmt::Debug for OrdMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.img.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}->{x}")?;
        }
        write!(f, "}}:{}->{}", self.dom, self.cod)
    }
}

impl fmt::Display for OrdMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All strictly increasing maps `dom -> cod`, in lexicographic order of images.
pub fn all_maps(dom: usize, cod: usize) -> Vec<OrdMap> {
    fn go(dom: usize, cod: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<OrdMap>) {
        if cur.len() == dom {
            out.push(OrdMap { dom, cod, img: cur.clone() });
            return;
        }
        let left = dom - cur.len();
        for x in start..=cod.saturating_sub(left) {
            if x + left > cod {
                break;
            }
            cur.push(x);
            go(dom, cod, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dom <= cod {
        go(dom, cod, 0, &mut Vec::with_capacity(dom), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_example() {
        let h1 = OrdMap::new(2, 3, vec![0, 2]).unwrap();
        let h0 = OrdMap::new(1, 2, vec![1]).unwrap();
        let c = h1.compose(&h0).unwrap();
        assert_eq!(c, OrdMap::new(1, 3, vec![2]).unwrap());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = OrdMap::new(2, 3, vec![0, 2]).unwrap();
        let b = OrdMap::new(1, 3, vec![1]).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn ssup_examples() {
        let f = OrdMap::new(3, 5, vec![0, 2, 4]).unwrap();
        assert_eq!(f.ssup_image(2).unwrap(), 3);
        assert_eq!(f.ssup_image(0).unwrap(), 0);
        assert_eq!(f.ssup_image(3).unwrap(), 5);
        assert!(f.ssup_image(4).is_err());
    }

    #[test]
    fn constructor_rejects_bad_maps() {
        assert!(matches!(OrdMap::new(2, 3, vec![2, 1]), Err(Error::NotOrderPreserving(_))));
        assert!(matches!(OrdMap::new(2, 3, vec![1, 3]), Err(Error::OutOfRange(_))));
        assert!(OrdMap::new(2, 3, vec![1]).is_err());
    }

    #[test]
    fn all_maps_counts_binomials() {
        assert_eq!(all_maps(2, 4).len(), 6);
        assert_eq!(all_maps(0, 3).len(), 1);
        assert_eq!(all_maps(3, 2).len(), 0);
        assert!(all_maps(3, 5).iter().all(|m| m.images().windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let f = OrdMap::new(2, 3, vec![0, 2]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dom":2,"cod":3,"img":[0,2]}"#);
        assert_eq!(serde_json::from_str::<OrdMap>(&s).unwrap(), f);
        assert!(serde_json::from_str::<OrdMap>(r#"{"dom":2,"cod":3,"img":[2,0]}"#).is_err());
    }
}
