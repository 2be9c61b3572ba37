//! Builds small lattices from their covers and prints structure flags,
//! join-irreducibles and decompositions.

use latint::{FiniteLattice, Result};

fn describe(l: &FiniteLattice) -> Result<()> {
    let f = l.flags();
    println!(
        "{}: {} elements, distributive={} modular={} lld={} boolean={} atomistic={}",
        l.name(),
        l.len(),
        f.is_distributive,
        f.is_modular,
        f.is_lower_locally_distributive,
        f.is_boolean,
        f.is_atomistic
    );
    let ji: Vec<&str> = l.join_irreducibles().members.iter().map(|&j| l.label(j)).collect();
    println!("  join-irreducibles: {}", ji.join(", "));
    for x in 0..l.len() {
        match l.decomposition(x) {
            Ok(d) => {
                let eta: Vec<&str> = d.eta.iter().map(|&j| l.label(j)).collect();
                let star: Vec<&str> = d.eta_star.iter().map(|&j| l.label(j)).collect();
                println!("  {:<14} eta = {{{}}}  eta* = {{{}}}", l.label(x), eta.join(","), star.join(","));
            }
            Err(e) => println!("  {:<14} {e}", l.label(x)),
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    // the four answers to a satisfaction question
    let opinion = FiniteLattice::build(
        "opinion",
        &["unsatisfactory", "neutral", "dont_know", "satisfactory"],
        &[("unsatisfactory", "neutral"), ("unsatisfactory", "dont_know"), ("neutral", "satisfactory"), ("dont_know", "satisfactory")],
    )?;
    describe(&opinion)?;
    describe(&FiniteLattice::chain("grade", &["low", "mid", "high"])?)?;
    describe(&FiniteLattice::m3("m3"))?;
    describe(&FiniteLattice::n5("n5"))?;
    Ok(())
}
