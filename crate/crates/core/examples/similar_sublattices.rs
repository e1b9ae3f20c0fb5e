//! Similar sublattices: the primitive one along a coincidence rotation and
//! the counting function g on Z x 5Z.

use csl_lab::isometry::{den, Isometry};
use csl_lab::lattice::{Lattice, Preset};
use csl_lab::ssl::{primitive_ssl, ssl_contrast, ssl_table};
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let l = Lattice::integer(2);
    let r5 = Isometry::plane_rotation(3, 4, 5)?;
    let rec = primitive_ssl(&l, &r5)?;
    println!("den(R5) = {}, primitive similar sublattice index {} = {}", den(&l, &r5)?, rec.index, rec.sublattice);

    let g = ssl_table(&l, 30)?;
    let nonzero: Vec<String> = g.rows.iter().filter(|(_, &v)| v > 0).map(|(m, v)| format!("{m}:{v}")).collect();
    println!("g on Z^2: {}", nonzero.join(" "));

    let c = ssl_contrast(&Preset::OneByFive.lattice(), &[50, 100, 200])?;
    println!(
        "Z x 5Z up to {}: g witnesses {}, first {}, f witnesses {}",
        c.range,
        c.g_witnesses.len(),
        c.g_witnesses.first().map(ToString::to_string).unwrap_or_default(),
        c.f_witnesses.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
