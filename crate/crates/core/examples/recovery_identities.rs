//! Recovering Γ(R) and RΓ(S) from Γ(RS) by intersecting with scaled copies
//! of the lattice, and which scalar the second identity needs.

use csl_lab::enumerate::enumerate_cubic;
use csl_lab::isometry::{Isometry, PointGroup};
use csl_lab::lattice::Lattice;
use csl_lab::theorems::{check_recovery, sweep};
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let l = Lattice::integer(2);
    let rep = check_recovery(&l, &Isometry::plane_rotation(3, 4, 5)?, &Isometry::plane_rotation(5, 12, 13)?)?;
    println!("Σ5 · Σ13: first = {}, with m = {}, with n = {}", rep.first, rep.second_m, rep.second_n);

    let pool = enumerate_cubic(7)?;
    let sw = sweep(&pool, &PointGroup::of(&pool.lattice)?, 7)?;
    println!(
        "cubic, Σ ≤ 7: {} coprime pairs, reading = {:?} (m fails {}, n fails {})",
        sw.coprime_pairs, sw.reading, sw.second_m_failures, sw.second_n_failures
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
