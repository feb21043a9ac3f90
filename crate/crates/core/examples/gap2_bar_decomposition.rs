//! A gap-2 morass, its embeddings and their bar decompositions.

use morass::fixtures;
use morass::gap2::bar_decompose;

fn main() -> morass::Result<()> {
    let g = fixtures::gap2("two-step")?;
    println!("outer θ = {:?} over inner θ = {:?}", g.thetas(), g.inner().thetas());
    let r = g.validate();
    println!("axioms: {}", if r.all_pass() { "all pass" } else { "failures" });

    for (i, f) in g.family(1, 2).iter().enumerate() {
        let kind = if f.is_left_branching(g.inner()) { "left" } else { "right" };
        println!("F_12[{i}] ({kind}-branching): level map {}", f.level);
        for zeta in 0..=f.src_top() {
            let d = bar_decompose(g.inner(), f, zeta)?;
            println!("  ζ = {zeta}: f̄(ζ) = {}, f̄_ζ = {}, f^# = {}", d.bar_level, d.bar_vertex, d.sharp);
        }
    }
    let bars = g.bar_report();
    println!("bar checks: {} of {} pass", bars.checks.iter().filter(|c| c.passed()).count(), bars.checks.len());
    Ok(())
}
