//! A generic filter through the chain forcing and the chain it adds.

use morass::chain::{default_chain_sets, generic_chain, ChainCondition, ChainGenericConfig, ChainHierarchy};
use morass::fixtures;

fn main() -> morass::Result<()> {
    let h = ChainHierarchy::build(&fixtures::chain("h3")?)?;
    let cfg = ChainGenericConfig { start: ChainCondition::EMPTY, sets: default_chain_sets(&h), seed: None };
    let g = generic_chain(&h, &cfg)?;
    println!("generic condition {:?}", g.condition);
    for (a, xs) in &g.chain {
        println!("X_{a} = {xs:?}");
    }
    for p in &g.pairs {
        println!("X_{} \\ X_{} = {:?}, X_{} \\ X_{} = {:?}", p.beta, p.alpha, p.beta_minus_alpha, p.alpha, p.beta, p.alpha_minus_beta);
    }
    for c in &g.report.checks {
        println!("{:<18} {:?}", c.name, c.verdict);
    }
    Ok(())
}
