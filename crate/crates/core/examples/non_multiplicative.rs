//! 2Z x 3Z: a CSL of index 6 while there are none of index 2 or 3.

use csl_lab::counting::{check_multiplicative, check_supermultiplicative, multiplicity_table, Which};
use csl_lab::enumerate::{enumerate_brute, BruteLimits};
use csl_lab::isometry::PointGroup;
use csl_lab::lattice::Preset;
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let l = Preset::TwoByThree.lattice();
    let pool = enumerate_brute(&l, 36, BruteLimits::default())?;
    let table = multiplicity_table(&pool, &PointGroup::of(&l)?)?;
    for m in [2, 3, 6] {
        let r = table.row(m).expect("in range");
        println!("m = {m}: f = {}, f_iso = {}", r.f, r.f_iso);
    }
    let f = table.series(Which::F)?;
    let witnesses = check_multiplicative(&f);
    println!("first witnesses: {:?}", witnesses.iter().take(3).map(ToString::to_string).collect::<Vec<_>>());
    assert_eq!((witnesses[0].m, witnesses[0].n), (2, 3));
    assert!(check_supermultiplicative(&f).is_none());
    println!("still supermultiplicative up to {}", table.max_index);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
