//! Shipped fixtures, addressable by name from tests, examples and the CLI.

use crate::gap1::FakeGap1Morass;
use crate::gap2::FakeGap2Morass;
use crate::order::OrdMap;
use crate::topology::ScaleProfile;
use crate::{Error, Result};

pub const GAP1_NAMES: &[&str] = &["trivial", "m3", "m3-limit", "m4", "m4-limit", "mixed", "mixed-limit"];
pub const GAP2_NAMES: &[&str] = &["minimal", "minimal-limit", "two-step", "two-step-limit", "wide"];
pub const CHAIN_NAMES: &[&str] = &["two-column", "small", "h3"];
pub const TOPOLOGY_NAMES: &[&str] = &["minimal-b1", "minimal-b2", "two-step-b1"];

/// `θ = [1,2,3]` with splits `0, 1`.
pub fn m3() -> FakeGap1Morass {
    FakeGap1Morass::from_splits(&[0, 1]).expect("m3 builds")
}

pub fn gap1(name: &str) -> Result<FakeGap1Morass> {
    match name {
        "trivial" => Ok(FakeGap1Morass::trivial()),
        "m3" => Ok(m3()),
        "m3-limit" => m3().attach_identity_limit(),
        "m4" => FakeGap1Morass::from_splits(&[0, 1, 2]),
        "m4-limit" => FakeGap1Morass::from_splits(&[0, 1, 2])?.attach_identity_limit(),
        // θ = [1,2,3,5,8]
        "mixed" => FakeGap1Morass::from_splits(&[0, 1, 1, 2]),
        "mixed-limit" => FakeGap1Morass::from_splits(&[0, 1, 1, 2])?.attach_identity_limit(),
        _ => Err(unknown(name, GAP1_NAMES)),
    }
}

fn map(dom: usize, cod: usize, img: &[usize]) -> OrdMap {
    OrdMap::new(dom, cod, img.to_vec()).expect("fixture map")
}

pub fn gap2(name: &str) -> Result<FakeGap2Morass> {
    match name {
        // θ = [1,2] over m3
        "minimal" => FakeGap2Morass::new(m3())?.amalgamate(0, &map(1, 2, &[1])),
        "minimal-limit" => gap2("minimal")?.attach_identity_limit(),
        // θ = [1,2,3] over θ = [1,2,3,4]
        "two-step" => FakeGap2Morass::new(FakeGap1Morass::from_splits(&[0, 1, 2])?)?
            .amalgamate(0, &map(1, 2, &[1]))?
            .amalgamate(1, &map(2, 3, &[0, 2])),
        "two-step-limit" => gap2("two-step")?.attach_identity_limit(),
        // θ = [1,2,4] over θ = [1,2,3,4,5]
        "wide" => FakeGap2Morass::new(FakeGap1Morass::from_splits(&[0, 1, 2, 3])?)?
            .amalgamate(0, &map(1, 2, &[1]))?
            .amalgamate(0, &map(1, 3, &[2])),
        _ => Err(unknown(name, GAP2_NAMES)),
    }
}

pub fn topology(name: &str) -> Result<ScaleProfile> {
    let (block, m) = match name {
        "minimal-b1" => (1, "minimal-limit"),
        "minimal-b2" => (2, "minimal-limit"),
        "two-step-b1" => (1, "two-step-limit"),
        _ => return Err(unknown(name, TOPOLOGY_NAMES)),
    };
    Ok(ScaleProfile { block, morass: gap2(m)? })
}

/// Morasses for the chain forcing; all levels are successors.
pub fn chain(name: &str) -> Result<FakeGap1Morass> {
    match name {
        // θ = [1,2]
        "two-column" => FakeGap1Morass::from_splits(&[0]),
        "small" => Ok(m3()),
        // θ = [1,2,3,4]
        "h3" => FakeGap1Morass::from_splits(&[0, 1, 2]),
        _ => Err(unknown(name, CHAIN_NAMES)),
    }
}

fn unknown(name: &str, known: &[&str]) -> Error {
    Error::Parse(format!("unknown fixture {name:?}; known: {}", known.join(", ")))
}
