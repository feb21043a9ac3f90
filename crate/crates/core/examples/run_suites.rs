//! Run registered suites the way the CLI does and summarize them.
//!
//! `cargo run --example run_suites -- gap2-axioms chain-5.x`

use morass::suites::{run_suite, suite_names, SuiteOptions};

fn main() -> morass::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = vec!["gap1-axioms".into(), "gap2-axioms".into(), "bar-decomposition".into()];
    }
    println!("known: {}", suite_names().join(", "));
    for n in &names {
        let r = run_suite(n, &SuiteOptions::default())?;
        let failing: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        println!("{n}: {} checks, failing {failing:?}", r.checks.len());
    }
    Ok(())
}
