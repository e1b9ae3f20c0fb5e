//! Prime decompositions of CSLs and of coincidence rotations.

use csl_lab::enumerate::{enumerate_brute, enumerate_cubic, enumerate_square, BruteLimits};
use csl_lab::isometry::PointGroup;
use csl_lab::lattice::Preset;
use csl_lab::theorems::{decompose_csl, naive_intersection_search, pi_decompose};
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let pool = enumerate_square(65)?;
    let p = PointGroup::of(&pool.lattice)?;
    for rec in pool.records_at(65) {
        let dec = decompose_csl(rec, &pool)?.expect("f is multiplicative on Z^2");
        let idx: Vec<u64> = dec.parts.iter().map(|r| r.sigma).collect();
        let a = pi_decompose(&rec.isometry, &[5, 13], &pool, &p)?.is_some();
        let b = pi_decompose(&rec.isometry, &[13, 5], &pool, &p)?.is_some();
        println!("{}: CSL = ∩ of indices {idx:?} (unique: {}), π-decompositions (5,13): {a}, (13,5): {b}", rec.isometry, dec.unique());
    }

    let l = Preset::TwoByThree.lattice();
    let pool = enumerate_brute(&l, 6, BruteLimits::default())?;
    let six = pool.records_at(6).next().expect("one class");
    println!("2Z x 3Z, Σ = 6: decomposition = {:?}", decompose_csl(six, &pool)?.map(|d| d.parts.len()));

    let rep = naive_intersection_search(&enumerate_cubic(15)?, 15)?;
    println!("cubic: {} of {} non-commuting coprime pairs have Γ(R1R2) ≠ Γ(R1) ∩ Γ(R2)", rep.instances, rep.pairs_tested);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
