//! Index identities for products of coincidence isometries, swept over
//! all pairs of small index on Z^2.

use csl_lab::enumerate::enumerate_square;
use csl_lab::isometry::{Isometry, PointGroup};
use csl_lab::lattice::Lattice;
use csl_lab::theorems::{build_tower, sweep};
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let l = Lattice::integer(2);
    let r5 = Isometry::plane_rotation(3, 4, 5)?;
    let tower = build_tower(&l, &r5, &r5.inverse())?;
    println!("R5, R5^-1: m = {}, n = {}, d = {}, k = {}, consistent = {}", tower.m, tower.n, tower.d, tower.k, tower.consistent);
    for e in tower.edges.iter().take(4) {
        println!("  [{} : {}] = {:?} ({})", e.upper, e.lower, e.observed, e.label);
    }

    let pool = enumerate_square(50)?;
    let rep = sweep(&pool, &PointGroup::of(&l)?, 50)?;
    println!("{} pairs, {} with coprime indices", rep.pairs_tested, rep.coprime_pairs);
    for r in rep.reports() {
        println!("  {:<7} failures: {}", r.theorem, r.failures.len());
        assert!(r.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
