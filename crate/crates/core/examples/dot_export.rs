//! Write the morass tree of a gap-2 morass's θ-levels as Graphviz DOT.

use morass::{fixtures, MorassTree};

fn main() -> morass::Result<()> {
    let g = fixtures::gap2("two-step")?;
    let tree = MorassTree::build(&g.theta_morass())?;
    print!("{}", tree.to_dot());
    Ok(())
}
