//! Coincidence site lattices `Γ(R) = Γ ∩ RΓ`, multiple CSLs and the
//! coincidence index `Σ(R) = [Γ : Γ(R)]`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{coordinate_matrix, Isometry, PointGroup, SymmetryClass};
use crate::lattice::Lattice;

/// An isometry together with its CSL, index and symmetry class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceRecord {
    pub sigma: u64,
    pub csl: Lattice,
    pub isometry: Isometry,
    #[serde(rename = "class_rep", with = "class_as_isometry")]
    pub sym_class: SymmetryClass,
}

mod class_as_isometry {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &SymmetryClass, s: S) -> std::result::Result<S::Ok, S::Error> {
        c.representative.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<SymmetryClass, D::Error> {
        Ok(SymmetryClass { representative: Isometry::deserialize(d)? })
    }
}

/// `Γ(R₁, …, Rₙ) = Γ ∩ R₁Γ ∩ … ∩ RₙΓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCSLRecord {
    pub isometries: Vec<Isometry>,
    pub mcsl: Lattice,
    pub sigma_multi: u64,
}

/// `Γ ∩ RΓ` has finite index in `Γ` iff `B⁻¹RB` is rational, which always
/// holds for exact rational data; the check still validates dimensions.
pub fn is_coincidence(l: &Lattice, r: &Isometry) -> Result<bool> {
    // B⁻¹RB exists and is rational by construction
    coordinate_matrix(l, r)?;
    Ok(true)
}

/// `Γ(R)`.
pub fn csl_lattice(l: &Lattice, r: &Isometry) -> Result<Lattice> {
    if l.dim() != r.dim() {
        return Err(Error::DimensionMismatch(l.dim(), r.dim()));
    }
    l.intersect(&l.transform(r.mat())?)
}

/// `Σ(R)`.
pub fn sigma(l: &Lattice, r: &Isometry) -> Result<u64> {
    csl_lattice(l, r)?.index_in(l)
}

/// Full record for `R` over the point group's lattice.
pub fn csl(p: &PointGroup, r: &Isometry) -> Result<CoincidenceRecord> {
    let l = p.lattice();
    if !is_coincidence(l, r)? {
        return Err(Error::Precondition("not a coincidence isometry".into()));
    }
    let csl = csl_lattice(l, r)?;
    let sigma = csl.index_in(l)?;
    Ok(CoincidenceRecord { sigma, csl, isometry: r.clone(), sym_class: SymmetryClass::of(r, p) })
}

/// Multiple CSL of the isometries, by a left fold of pairwise intersections.
pub fn mcsl(l: &Lattice, rs: &[Isometry]) -> Result<MCSLRecord> {
    let mut acc = l.clone();
    for r in rs {
        acc = acc.intersect(&l.transform(r.mat())?)?;
    }
    let sigma_multi = acc.index_in(l)?;
    Ok(MCSLRecord { isometries: rs.to_vec(), mcsl: acc, sigma_multi })
}

/// The symmetry classes in `pool` whose CSL is `target`: the set `S(R)`
/// restricted to the pool. Empty when `target` is not a CSL of the pool.
pub fn generators_of_csl(target: &Lattice, pool: &[CoincidenceRecord]) -> BTreeSet<SymmetryClass> {
    pool.iter().filter(|rec| &rec.csl == target).map(|rec| rec.sym_class.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Preset;
    use crate::linalg::{IntMatrix, RatMatrix};

    fn r5() -> Isometry {
        Isometry::plane_rotation(3, 4, 5).unwrap()
    }

    fn r13() -> Isometry {
        Isometry::plane_rotation(5, 12, 13).unwrap()
    }

    fn rot90() -> Isometry {
        Isometry::new(RatMatrix::from_i64(2, 2, &[0, -1, 1, 0])).unwrap()
    }

    /// index of Γ ∩ RΓ in ℤ^2-coordinates by counting residues in a box that
    /// is a fundamental domain of (k ℤ)², for k a multiple of the index
    fn residue_index(l: &Lattice, r: &Isometry, k: i64) -> u64 {
        let b = l.basis();
        let rl = l.transform(r.mat()).unwrap();
        let mut hits = 0u64;
        for x in 0..k {
            for y in 0..k {
                let v = b.mul(&RatMatrix::from_i64(2, 1, &[x, y])).unwrap().col(0);
                if rl.contains(&v).unwrap() {
                    hits += 1;
                }
            }
        }
        (k * k) as u64 / hits
    }

    #[test]
    fn square_lattice_records() {
        let p = PointGroup::of(&Lattice::integer(2)).unwrap();
        let rec = csl(&p, &Isometry::identity(2)).unwrap();
        assert_eq!(rec.sigma, 1);
        assert_eq!(rec.csl, Lattice::integer(2));
        let rec = csl(&p, &r5()).unwrap();
        assert_eq!(rec.sigma, 5);
        assert_eq!(rec.sigma, residue_index(p.lattice(), &r5(), 5));
        assert_eq!(*rec.csl.mat(), IntMatrix::from_i64(2, 2, &[5, 2, 0, 1]));
        assert_eq!(sigma(p.lattice(), &r5().inverse()).unwrap(), 5);
        assert_eq!(sigma(p.lattice(), &rot90()).unwrap(), 1);
    }

    #[test]
    fn quarter_turn_on_two_by_three() {
        let l = Preset::TwoByThree.lattice();
        assert!(is_coincidence(&l, &rot90()).unwrap());
        assert_eq!(sigma(&l, &rot90()).unwrap(), 6);
        assert_eq!(residue_index(&l, &rot90(), 6), 6);
        assert!(is_coincidence(&l, &Isometry::identity(3)).is_err());
    }

    #[test]
    fn records_are_sublattices_and_class_invariant() {
        let p = PointGroup::of(&Lattice::integer(2)).unwrap();
        let l = p.lattice();
        for r in [r5(), r13(), r5().compose(&r13())] {
            let rec = csl(&p, &r).unwrap();
            assert!(rec.csl.is_sublattice_of(l).unwrap());
            assert!(rec.csl.is_sublattice_of(&l.transform(r.mat()).unwrap()).unwrap());
            assert_eq!(sigma(l, &r.inverse()).unwrap(), rec.sigma);
            for q in p.elements() {
                let twisted = csl(&p, &r.compose(q)).unwrap();
                assert_eq!(twisted.csl, rec.csl);
                assert_eq!(twisted.sym_class, rec.sym_class);
            }
        }
    }

    #[test]
    fn multiple_csls() {
        let l = Lattice::integer(2);
        assert_eq!(mcsl(&l, &[Isometry::identity(2)]).unwrap().mcsl, l);
        let rec = mcsl(&l, &[r5(), r5()]).unwrap();
        assert_eq!(rec.mcsl, csl_lattice(&l, &r5()).unwrap());
        let rec = mcsl(&l, &[r5(), r13()]).unwrap();
        // oracle: Γ(R5) ∩ Γ(R13) computed directly
        let direct = csl_lattice(&l, &r5()).unwrap().intersect(&csl_lattice(&l, &r13()).unwrap()).unwrap();
        assert_eq!(direct.index_in(&l).unwrap(), 65);
        assert_eq!(rec.mcsl, direct);
        assert_eq!(rec.sigma_multi, 65);
        assert_eq!(mcsl(&l, &[r13(), r5()]).unwrap().mcsl, rec.mcsl);
    }

    #[test]
    fn generator_sets() {
        let p = PointGroup::of(&Lattice::integer(2)).unwrap();
        let pool: Vec<CoincidenceRecord> =
            [Isometry::identity(2), r5(), r5().inverse()].iter().map(|r| csl(&p, r).unwrap()).collect();
        let ids = generators_of_csl(&Lattice::integer(2), &pool);
        assert_eq!(ids.len(), 1);
        assert!(ids.contains(&SymmetryClass::of(&Isometry::identity(2), &p)));
        let s5 = generators_of_csl(&pool[1].csl, &pool);
        assert_eq!(s5.len(), 1);
        assert!(generators_of_csl(&Lattice::diagonal(&[2, 2]).unwrap(), &pool).is_empty());
    }

    #[test]
    fn record_json_shape() {
        let p = PointGroup::of(&Lattice::integer(2)).unwrap();
        let rec = csl(&p, &r5()).unwrap();
        let v = serde_json::to_value(&rec).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["class_rep", "csl", "isometry", "sigma"]);
        let back: CoincidenceRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, rec);
    }
}
