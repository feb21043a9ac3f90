//! Build a gap-1 morass by amalgamation, validate it and walk its tree.

use morass::suites::gap1_report;
use morass::{FakeGap1Morass, MorassTree};

fn main() -> morass::Result<()> {
    let m = FakeGap1Morass::from_splits(&[0, 1, 1])?;
    println!("θ = {:?}, splits = {:?}", m.thetas(), m.splits());
    for b in 1..=m.height() {
        for a in 0..b {
            let fam: Vec<String> = m.family(a, b).iter().map(ToString::to_string).collect();
            println!("F_{a}{b}: {}", fam.join(" "));
        }
    }
    let limit = m.attach_identity_limit()?;
    println!("with a limit on top: θ = {:?}", limit.thetas());

    for c in gap1_report(&m).checks {
        println!("{:<12} {:?}", c.name, c.verdict);
    }

    let t = MorassTree::build(&m)?;
    let top = (m.height(), m.top_theta() - 1);
    for a in 0..=m.height() {
        let s = t.predecessor_at(top, a).expect("tree property");
        println!("below {top:?} at level {a}: {s:?} with π = {}", t.pi(s, top).expect("π"));
    }
    Ok(())
}
