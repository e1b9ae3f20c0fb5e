//! Σ, CSL and symmetry class of a few planar isometries.

use csl_lab::csl::{csl, mcsl};
use csl_lab::isometry::{den, Isometry, PointGroup};
use csl_lab::lattice::{Lattice, Preset};
use csl_lab::linalg::RatMatrix;
use csl_lab::Result;

pub fn run_example() -> Result<()> {
    let square = PointGroup::of(&Lattice::integer(2))?;
    println!("point group of Z^2: |P| = {}, |P'| = {}", square.order(), square.rotation_order());

    let r5 = Isometry::plane_rotation(3, 4, 5)?;
    let rec = csl(&square, &r5)?;
    println!("R = {r5}");
    println!("  sigma = {}, den = {}, CSL = {}", rec.sigma, den(square.lattice(), &r5)?, rec.csl);
    assert_eq!(rec.sigma, 5);

    let r13 = Isometry::plane_rotation(5, 12, 13)?;
    let both = mcsl(square.lattice(), &[r5.clone(), r13])?;
    println!("  Γ(R5) ∩ Γ(R13) has index {}", both.sigma_multi);

    // a quarter turn is a symmetry of Z^2 but only a coincidence of 2Z x 3Z
    let rot90 = Isometry::new(RatMatrix::from_i64(2, 2, &[0, -1, 1, 0]))?;
    let rect = PointGroup::of(&Preset::TwoByThree.lattice())?;
    let rec = csl(&rect, &rot90)?;
    println!("rot90 on 2Z x 3Z: sigma = {}, CSL = {}", rec.sigma, rec.csl);
    assert_eq!(rec.sigma, 6);
    println!("{}", serde_json::to_string(&rec).expect("json"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
