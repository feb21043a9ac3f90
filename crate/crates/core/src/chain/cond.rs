//! Rectangular conditions `p : a_p × b_p → 2` and the chain order.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::order::OrdMap;
use crate::{Error, Result};

/// Columns and rows are both capped at 8 so a condition fits in one word.
pub const MAX_COLS: usize = 8;
pub const MAX_ROWS: usize = 8;

/// A finite condition of the chain forcing.
///
/// Cell `(c, r)` (column `c`, row `r`) lives at bit `8r + c` of `vals`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCondition", into = "RawCondition")]
pub struct ChainCondition {
    cols: u8,
    rows: u8,
    vals: u64,
}

#[derive(Serialize, Deserialize)]
struct RawCondition {
    a: Vec<usize>,
    b: Vec<usize>,
    /// `[column, row, value]`
    values: Vec<[usize; 3]>,
}

impl TryFrom<RawCondition> for ChainCondition {
    type Error = Error;
    fn try_from(r: RawCondition) -> Result<Self> {
        let cells: Vec<(usize, usize, bool)> = r.values.iter().map(|&[c, row, v]| (c, row, v != 0)).collect();
        ChainCondition::new(&r.a, &r.b, &cells)
    }
}

impl From<ChainCondition> for RawCondition {
    fn from(p: ChainCondition) -> Self {
        let mut values = Vec::new();
        for c in p.cols() {
            for r in p.rows() {
                values.push([c, r, p.get(c, r).expect("in rectangle") as usize]);
            }
        }
        RawCondition { a: p.cols(), b: p.rows(), values }
    }
}

pub(crate) fn bits(m: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| m >> i & 1 == 1)
}

pub(crate) fn rect_mask(cols: u8, rows: u8) -> u64 {
    bits(rows).fold(0, |acc, r| acc | (cols as u64) << (8 * r))
}

/// The first pair `c1 < c2` in `mask` with `row(c1) = 1`, `row(c2) = 0`.
pub(crate) fn descent(row: u8, mask: u8) -> Option<(usize, usize)> {
    let ones = row & mask;
    let zeros = !row & mask;
    if ones == 0 || zeros == 0 {
        return None;
    }
    let lo = ones.trailing_zeros() as usize;
    let hi = 7 - zeros.leading_zeros() as usize;
    (lo < hi).then_some((lo, hi))
}

fn mask_of(xs: &[usize], cap: usize, what: &str) -> Result<u8> {
    let mut m = 0u8;
    for &x in xs {
        if x >= cap {
            return Err(Error::OutOfRange(format!("{what} {x} exceeds the cap {cap}")));
        }
        m |= 1 << x;
    }
    Ok(m)
}

impl ChainCondition {
    pub const EMPTY: ChainCondition = ChainCondition { cols: 0, rows: 0, vals: 0 };

    /// Every cell of `cols × rows` must be listed exactly once.
    pub fn new(cols: &[usize], rows: &[usize], cells: &[(usize, usize, bool)]) -> Result<Self> {
        let cm = mask_of(cols, MAX_COLS, "column")?;
        let rm = mask_of(rows, MAX_ROWS, "row")?;
        let rect = rect_mask(cm, rm);
        let mut seen = 0u64;
        let mut vals = 0u64;
        for &(c, r, v) in cells {
            if c >= MAX_COLS || r >= MAX_ROWS || rect >> (8 * r + c) & 1 == 0 {
                return Err(Error::DomainMismatch(format!("cell ({c},{r}) lies outside a_p × b_p")));
            }
            let bit = 1u64 << (8 * r + c);
            if seen & bit != 0 {
                return Err(Error::Inconsistent(format!("cell ({c},{r}) given twice")));
            }
            seen |= bit;
            if v {
                vals |= bit;
            }
        }
        if seen != rect {
            let missing = (rect & !seen).trailing_zeros() as usize;
            return Err(Error::Precondition(format!("cell ({},{}) has no value", missing % 8, missing / 8)));
        }
        Ok(ChainCondition { cols: cm, rows: rm, vals })
    }

    pub(crate) fn from_masks(cols: u8, rows: u8, vals: u64) -> Self {
        ChainCondition { cols, rows, vals: vals & rect_mask(cols, rows) }
    }

    pub fn col_mask(&self) -> u8 {
        self.cols
    }

    pub fn row_mask(&self) -> u8 {
        self.rows
    }

    pub fn cols(&self) -> Vec<usize> {
        bits(self.cols).collect()
    }

    pub fn rows(&self) -> Vec<usize> {
        bits(self.rows).collect()
    }

    pub fn has_col(&self, c: usize) -> bool {
        c < MAX_COLS && self.cols >> c & 1 == 1
    }

    pub fn has_row(&self, r: usize) -> bool {
        r < MAX_ROWS && self.rows >> r & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.cols == 0 && self.rows == 0
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        (self.cols.count_ones() * self.rows.count_ones()) as usize
    }

    /// Columns plus rows; the size used to rank least extensions.
    pub fn weight(&self) -> usize {
        (self.cols.count_ones() + self.rows.count_ones()) as usize
    }

    pub fn get(&self, c: usize, r: usize) -> Option<bool> {
        (self.has_col(c) && self.has_row(r)).then(|| self.vals >> (8 * r + c) & 1 == 1)
    }

    /// Row `r` as a column mask of its 1-cells.
    pub(crate) fn row(&self, r: usize) -> u8 {
        (self.vals >> (8 * r)) as u8
    }

    pub fn restrict(&self, cols: u8, rows: u8) -> Self {
        Self::from_masks(self.cols & cols, self.rows & rows, self.vals)
    }

    /// `p ↾ (· × α)`
    pub fn rows_below(&self, alpha: usize) -> Self {
        let m = if alpha >= 8 { 0xff } else { (1u16 << alpha) as u8 - 1 };
        self.restrict(0xff, m)
    }

    /// `f⁻¹[p]`: the columns in `rng f`, renamed to their preimages.
    pub fn pullback(&self, f: &OrdMap) -> Self {
        let mut cols = 0u8;
        let mut vals = 0u64;
        for (x, &y) in f.images().iter().enumerate() {
            if x >= MAX_COLS || !self.has_col(y) {
                continue;
            }
            cols |= 1 << x;
            for r in bits(self.rows) {
                if self.vals >> (8 * r + y) & 1 == 1 {
                    vals |= 1 << (8 * r + x);
                }
            }
        }
        ChainCondition { cols, rows: self.rows, vals }
    }

    /// `f[p]`; every column must lie in `dom f`.
    pub fn image(&self, f: &OrdMap) -> Result<Self> {
        let mut cols = 0u8;
        let mut vals = 0u64;
        for c in bits(self.cols) {
            let y = f.apply(c)?;
            if y >= MAX_COLS {
                return Err(Error::OutOfRange(format!("column {y} exceeds the cap {MAX_COLS}")));
            }
            cols |= 1 << y;
            for r in bits(self.rows) {
                if self.vals >> (8 * r + c) & 1 == 1 {
                    vals |= 1 << (8 * r + y);
                }
            }
        }
        Ok(ChainCondition { cols, rows: self.rows, vals })
    }

    /// `self ⊆ other` as rectangles with values.
    pub fn is_sub(&self, other: &ChainCondition) -> bool {
        self.cols & !other.cols == 0
            && self.rows & !other.rows == 0
            && (self.vals ^ other.vals) & rect_mask(self.cols, self.rows) == 0
    }

    /// True when the two agree on every cell they share.
    pub fn agrees_with(&self, other: &ChainCondition) -> bool {
        (self.vals ^ other.vals) & rect_mask(self.cols, self.rows) & rect_mask(other.cols, other.rows) == 0
    }

    /// The first pair of columns in `mask` where row `r` drops from 1 to 0.
    pub fn row_descent(&self, r: usize, mask: u8) -> Option<(usize, usize)> {
        if !self.has_row(r) {
            return None;
        }
        descent(self.row(r), mask & self.cols)
    }
}

impl fmt::Debug for ChainCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{a={:?} b={:?}", self.cols(), self.rows())?;
        for r in self.rows() {
            for c in self.cols() {
                write!(f, " ({c},{r})={}", self.get(c, r).expect("cell") as u8)?;
            }
        }
        write!(f, "}}")
    }
}

/// `p ≤ q`: `q ⊆ p`, and every row of `p` not in `q` is nondecreasing on `a_q`.
pub fn chain_leq(p: &ChainCondition, q: &ChainCondition) -> bool {
    q.is_sub(p) && bits(p.rows & !q.rows).all(|r| descent(p.row(r), q.cols).is_none())
}

/// Every condition inside `cols × rows`.
pub fn all_conditions(ncols: usize, nrows: usize) -> Vec<ChainCondition> {
    let mut out = Vec::new();
    for cm in 0..1u16 << ncols {
        for rm in 0..1u16 << nrows {
            let (cm, rm) = (cm as u8, rm as u8);
            let rect = rect_mask(cm, rm);
            let pos: Vec<u32> = (0..64).filter(|i| rect >> i & 1 == 1).collect();
            for v in 0..1u64 << pos.len() {
                let vals = pos.iter().enumerate().fold(0u64, |acc, (k, &i)| acc | (v >> k & 1) << i);
                out.push(ChainCondition { cols: cm, rows: rm, vals });
            }
        }
    }
    out.sort_unstable();
    out
}

/// `|all_conditions(ncols, nrows)|` without building it.
pub fn count_conditions(ncols: usize, nrows: usize) -> u128 {
    let mut binom = vec![1u128; ncols + 1];
    for i in 1..=ncols {
        binom[i] = binom[i - 1] * (ncols - i + 1) as u128 / i as u128;
    }
    (0..=ncols).map(|i| binom[i] * (1 + (1u128 << i)).pow(nrows as u32)).sum()
}
