//! The coincidence spectrum of the square lattice against its closed form
//! and its Euler product.

use csl_lab::counting::{dirichlet_coefficients, euler_product_square, multiplicity_table, square_formula, Which};
use csl_lab::enumerate::enumerate_square;
use csl_lab::isometry::PointGroup;
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let n = 1000;
    let pool = enumerate_square(n)?;
    let table = multiplicity_table(&pool, &PointGroup::of(&pool.lattice)?)?;
    let mismatches = table.rows.values().filter(|r| r.f != square_formula(r.m) || r.f_iso != r.f || r.f_rot != r.f).count();
    println!("{} classes up to {n}, {mismatches} rows disagree with 2^r", pool.records.len());
    assert_eq!(mismatches, 0);

    let data = dirichlet_coefficients(&table.series(Which::F)?);
    println!("Φ(s) = {}", data.render(12));
    assert_eq!(euler_product_square(n).coefficients, data.coefficients);
    println!("Euler product over p ≡ 1 (4) agrees up to {n}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
