//! Break one axiom at a time and see which check catches it.

use morass::mutate::MUTATIONS;

fn main() -> morass::Result<()> {
    for m in MUTATIONS {
        let d = m.detect()?;
        let mark = if d.attributed { "caught" } else { "MISSED" };
        println!("{:<28} {:<14} {mark:<6} failing: {}", m.name, m.breaks, d.failed.join(", "));
    }
    Ok(())
}
