//! A generic filter through the topology forcing and the space it colors.

use morass::fixtures;
use morass::topology::{default_dense_sets, generic_space, GenericConfig, TopologyHierarchy};

fn main() -> morass::Result<()> {
    let h = TopologyHierarchy::build(&fixtures::topology("two-step-b1")?)?;
    let r = h.rect();
    println!("{} points × {} colors, |ℙ| = {}", r.points, r.colors, h.forcing().len());

    let s = h.separate(&r.empty(), 0, r.points - 1)?;
    println!("separate 0 and {}: color {} via {:?}", r.points - 1, s.mu, s.trace);

    let cfg = GenericConfig { start: r.empty(), sets: default_dense_sets(&h), seed: Some(7) };
    let g = generic_space(&h, &cfg)?;
    for (gamma, row) in g.coloring.iter().enumerate() {
        let bits: String = row.iter().map(|v| v.map_or('.', |b| if b { '1' } else { '0' })).collect();
        println!("F({gamma}, ·) = {bits}");
    }
    println!("atoms: {:?}", g.atoms);
    for c in &g.report.checks {
        println!("{:<12} {:?}", c.name, c.verdict);
    }
    Ok(())
}
