//! Does multiplicativity of f force multiplicativity of f_iso? A finite
//! look at the preset lattices.

use csl_lab::lattice::Preset;
use csl_lab::theorems::open_question_experiment;
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let lattices: Vec<_> = Preset::ALL.iter().map(|p| p.lattice()).collect();
    let rep = open_question_experiment(&lattices, 60)?;
    for e in &rep.entries {
        println!("{:<6} up to {}: f multiplicative {:<5} f_iso multiplicative {:<5} flag {}", e.lattice, e.range, e.f_multiplicative, e.f_iso_multiplicative, e.flag);
    }
    println!("{}", rep.note);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
