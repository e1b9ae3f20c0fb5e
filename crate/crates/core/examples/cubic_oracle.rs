//! Quaternion enumeration of the cubic lattice checked against the
//! generic search over rational orthogonal matrices.

use csl_lab::counting::multiplicity_table;
use csl_lab::enumerate::{enumerate_brute, enumerate_cubic, BruteLimits};
use csl_lab::isometry::PointGroup;
use csl_lab::lattice::Lattice;
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let n = 15;
    let fast = enumerate_cubic(n)?;
    let slow = enumerate_brute(&Lattice::integer(3), n, BruteLimits::default())?;
    assert_eq!(fast.classes(), slow.classes());
    let table = multiplicity_table(&fast, &PointGroup::of(&fast.lattice)?)?;
    for row in table.rows.values().filter(|r| r.f_iso > 0) {
        println!("Σ = {:>2}: f_iso = {:>2}, f = {:>2}", row.m, row.f_iso, row.f);
    }
    println!("both enumerations agree on {} classes", fast.records.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
