//! The FS axioms and the compatibility lemma on a small topology hierarchy.

use morass::fixtures;
use morass::fs::{check_compat_lemma, check_fs_axioms, compute_star};
use morass::topology::TopologyHierarchy;

fn main() -> morass::Result<()> {
    let h = TopologyHierarchy::build(&fixtures::topology("minimal-b1")?)?;
    let sys = h.thinned_system();
    for c in check_fs_axioms(&sys, "FS").checks {
        println!("{:<6} {:?}", c.name, c.verdict);
    }
    let p = h.forcing().iter().max_by_key(|p| p.len()).expect("nonempty");
    let star = compute_star(&h, p)?;
    println!("p = {p:?}\n  support {:?}, ν {:?}", star.support(), star.nus);
    let lemma = check_compat_lemma(&h)?;
    for c in lemma.checks {
        println!("{} {:?} {}", c.name, c.verdict, c.witness);
    }
    Ok(())
}
