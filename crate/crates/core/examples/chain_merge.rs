//! Chain conditions: the order, local stars and the merge of two conditions.

use morass::chain::{chain_leq, merge_conditions, thinned_membership, ChainCondition, ChainHierarchy};
use morass::fixtures;

fn main() -> morass::Result<()> {
    let p1 = ChainCondition::new(&[1, 2], &[0], &[(1, 0, false), (2, 0, true)])?;
    let p2 = ChainCondition::new(&[1, 3], &[1], &[(1, 1, true), (3, 1, true)])?;
    let m = merge_conditions(&p1, &p2, &[1])?;
    println!("p1 = {p1:?}\np2 = {p2:?}\nmerge over Δ1 = {{1}}: {m:?}");
    println!("merge ≤ p1: {}, merge ≤ p2: {}", chain_leq(&m, &p1), chain_leq(&m, &p2));

    let small = fixtures::chain("small")?;
    let bad = ChainCondition::new(&[0, 1], &[0], &[(0, 0, true), (1, 0, false)])?;
    println!("{bad:?} thinned? {:?}", thinned_membership(&bad, &small)?);

    let h = ChainHierarchy::build(&small)?;
    println!("|ℙ| = {} of |P| = {}", h.forcing().len(), h.unthinned().len());
    let q = ChainCondition::new(&[0, 2], &[1], &[(0, 1, false), (2, 1, true)])?;
    let s = h.local_star(&q, &[0, 2])?;
    println!("local star of {q:?}: α0 = {}, support {:?}", s.alpha0, s.support);
    Ok(())
}
