//! Order-preserving maps between finite ordinals.

use morass::order::{all_maps, OrdMap};

fn main() -> morass::Result<()> {
    let f = OrdMap::new(2, 4, vec![0, 3])?;
    let g = OrdMap::new(4, 5, vec![0, 1, 2, 4])?;
    let gf = g.compose(&f)?;
    println!("f = {f}\ng = {g}\ng∘f = {gf}");
    for z in 0..=f.dom() {
        println!("ssup f[{z}] = {}", f.ssup_image(z)?);
    }
    println!("shifted at 1: {}", OrdMap::shifted(3, 5, 1, 3)?);
    println!("|maps 2 -> 5| = {}", all_maps(2, 5).len());
    if let Err(e) = f.compose(&f) {
        println!("f∘f: {e}");
    }
    Ok(())
}
