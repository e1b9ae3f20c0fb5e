//! Exact orthogonal maps, point groups and symmetry classes `R·P`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{format_rational, parse_rational, to_u64, IntMatrix, RatMatrix, Rational};

/// Highest dimension the point-group search accepts.
pub const MAX_POINT_GROUP_DIM: usize = 4;

/// A linear isometry with exact rational entries (`RᵀR = I`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    mat: RatMatrix,
}

impl Isometry {
    /// Validates orthogonality exactly; nothing is ever rounded into shape.
    pub fn new(mat: RatMatrix) -> Result<Isometry> {
        if !mat.is_square() {
            return Err(Error::NotAnIsometry);
        }
        let n = mat.rows();
        if mat.transpose().mul(&mat)? != RatMatrix::identity(n) {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { mat })
    }

    pub fn identity(dim: usize) -> Isometry {
        Isometry { mat: RatMatrix::identity(dim) }
    }

    /// `-I`.
    pub fn inversion(dim: usize) -> Isometry {
        Isometry { mat: RatMatrix::identity(dim).neg() }
    }

    /// Rotation of the plane with `cos = a/c`, `sin = b/c`, where `a² + b² = c²`.
    pub fn plane_rotation(a: i64, b: i64, c: i64) -> Result<Isometry> {
        Isometry::new(RatMatrix::from_scaled_i64(2, 2, c, &[a, -b, b, a]))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &RatMatrix {
        &self.mat
    }

    /// `self ∘ other`, i.e. the matrix product `self · other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { mat: self.mat.mul(&other.mat).expect("equal dimensions") }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { mat: self.mat.transpose() }
    }

    pub fn det(&self) -> i32 {
        if self.mat.det().expect("square").is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.det() == 1
    }

    /// Least common denominator of the Cartesian entries.
    pub fn matrix_denominator(&self) -> BigInt {
        self.mat.denominator()
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mat)
    }
}

pub fn make_isometry(m: RatMatrix) -> Result<Isometry> {
    Isometry::new(m)
}

pub fn is_orientation_preserving(r: &Isometry) -> bool {
    r.is_orientation_preserving()
}

#[derive(Serialize, Deserialize)]
struct IsometryJson {
    dim: usize,
    mat: Vec<Vec<String>>,
}

impl Serialize for Isometry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        IsometryJson {
            dim: n,
            mat: (0..n).map(|r| (0..n).map(|c| format_rational(self.mat.get(r, c))).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = IsometryJson::deserialize(d)?;
        if raw.mat.len() != raw.dim || raw.mat.iter().any(|r| r.len() != raw.dim) {
            return Err(D::Error::custom("mat must be dim x dim"));
        }
        let entries = raw
            .mat
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Isometry::new(RatMatrix::new(raw.dim, raw.dim, entries)).map_err(D::Error::custom)
    }
}

/// Matrix of `R` in the lattice basis, `B⁻¹ R B`.
pub fn coordinate_matrix(l: &Lattice, r: &Isometry) -> Result<RatMatrix> {
    if l.dim() != r.dim() {
        return Err(Error::DimensionMismatch(l.dim(), r.dim()));
    }
    let b = l.basis();
    b.inverse()?.mul(&r.mat)?.mul(&b)
}

/// Smallest positive `n` with `n·R·Γ ⊆ Γ`.
pub fn den(l: &Lattice, r: &Isometry) -> Result<u64> {
    to_u64(&coordinate_matrix(l, r)?.denominator())
}

/// All integer vectors `x` with `xᵀ G x = norm` for a positive definite `G`
/// (Fincke-Pohst enumeration, exact).
pub fn vectors_of_norm(g: &RatMatrix, norm: &Rational) -> Vec<Vec<BigInt>> {
    let n = g.rows();
    // q[i][i] (x_i + Σ_{j>i} q[i][j] x_j)² decomposition
    let mut q: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| g.get(r, c).clone()).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    let mut out = vec![];
    let mut x = vec![BigInt::zero(); n];
    enumerate_level(&q, n, norm.clone(), &mut x, &mut out);
    out.sort();
    out
}

fn enumerate_level(
    q: &[Vec<Rational>],
    level: usize,
    remaining: Rational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        if remaining.is_zero() {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let n = q.len();
    let mut center = Rational::zero();
    for j in i + 1..n {
        center -= &q[i][j] * Rational::from_integer(x[j].clone());
    }
    let weight = &q[i][i];
    let start = center.ceil().to_integer();
    // walk outwards from the center in both directions
    for dir in [1i64, -1] {
        let mut v = if dir == 1 { start.clone() } else { start.clone() - 1 };
        loop {
            let diff = Rational::from_integer(v.clone()) - &center;
            let contrib = weight * &diff * &diff;
            if contrib > remaining {
                break;
            }
            x[i] = v.clone();
            enumerate_level(q, level - 1, &remaining - &contrib, x, out);
            v += dir;
        }
    }
    x[i] = BigInt::zero();
}

fn inner(g: &RatMatrix, a: &[BigInt], b: &[BigInt]) -> Rational {
    let mut acc = Rational::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            acc += g.get(i, j) * Rational::from_integer(ai * bj);
        }
    }
    acc
}

/// Integer matrices `T` with `Tᵀ · from · T = to`, found by norm-constrained
/// backtracking over columns. Stops after `limit` solutions when given.
pub fn gram_maps(from: &RatMatrix, to: &RatMatrix, limit: Option<usize>) -> Vec<IntMatrix> {
    let n = from.rows();
    let candidates: Vec<Vec<Vec<BigInt>>> = (0..n).map(|j| vectors_of_norm(from, to.get(j, j))).collect();
    let mut out = vec![];
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    gram_backtrack(from, to, &candidates, &mut chosen, &mut out, limit);
    out
}

fn gram_backtrack(
    from: &RatMatrix,
    to: &RatMatrix,
    candidates: &[Vec<Vec<BigInt>>],
    chosen: &mut Vec<Vec<BigInt>>,
    out: &mut Vec<IntMatrix>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    let j = chosen.len();
    let n = candidates.len();
    if j == n {
        out.push(IntMatrix::from_cols(n, chosen));
        return;
    }
    for cand in &candidates[j] {
        if (0..j).all(|i| inner(from, &chosen[i], cand) == *to.get(i, j)) {
            chosen.push(cand.clone());
            gram_backtrack(from, to, candidates, chosen, out, limit);
            chosen.pop();
            if limit.is_some_and(|l| out.len() >= l) {
                return;
            }
        }
    }
}

/// The point group `P` of a lattice, with its rotation subgroup size `|P'|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointGroup {
    lattice: Lattice,
    elements: Vec<Isometry>,
    rotation_order: usize,
}

impl PointGroup {
    /// All orthogonal `R` with `RΓ = Γ`, from the integer automorphisms of the Gram matrix.
    pub fn of(l: &Lattice) -> Result<PointGroup> {
        if l.dim() > MAX_POINT_GROUP_DIM {
            return Err(Error::UnsupportedDimension(l.dim()));
        }
        let g = l.gram();
        let b = l.basis();
        let b_inv = b.inverse()?;
        let mut elements: Vec<Isometry> = gram_maps(&g, &g, None)
            .into_iter()
            .map(|t| Isometry::new(b.mul(&t.to_rational())?.mul(&b_inv)?))
            .collect::<Result<_>>()?;
        elements.sort();
        elements.dedup();
        let rotation_order = elements.iter().filter(|e| e.is_orientation_preserving()).count();
        Ok(PointGroup { lattice: l.clone(), elements, rotation_order })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rotation_order(&self) -> usize {
        self.rotation_order
    }

    pub fn contains(&self, r: &Isometry) -> bool {
        self.elements.binary_search(r).is_ok()
    }

    pub fn has_orientation_reversing(&self) -> bool {
        self.rotation_order < self.order()
    }

    /// Closure under products and inverses, and invariance of the lattice.
    pub fn verify(&self) -> Result<bool> {
        let set: BTreeSet<&Isometry> = self.elements.iter().collect();
        for a in &self.elements {
            if !set.contains(&a.inverse()) || self.lattice.transform(a.mat())? != self.lattice {
                return Ok(false);
            }
            for b in &self.elements {
                if !set.contains(&a.compose(b)) {
                    return Ok(false);
                }
            }
        }
        Ok(set.contains(&Isometry::identity(self.lattice.dim())))
    }
}

pub fn point_group(l: &Lattice) -> Result<PointGroup> {
    PointGroup::of(l)
}

/// A coset `R·P`, represented by its lexicographically smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub representative: Isometry,
}

impl SymmetryClass {
    pub fn of(r: &Isometry, p: &PointGroup) -> SymmetryClass {
        let representative = p.elements().iter().map(|q| r.compose(q)).min().expect("point group contains the identity");
        SymmetryClass { representative }
    }

    /// All members `R·Q` of the coset.
    pub fn members(&self, p: &PointGroup) -> Vec<Isometry> {
        p.elements().iter().map(|q| self.representative.compose(q)).collect()
    }
}

pub fn symmetry_class(r: &Isometry, p: &PointGroup) -> SymmetryClass {
    SymmetryClass::of(r, p)
}

/// Whether `R⁻¹R' ∈ P`.
pub fn same_class(r: &Isometry, r2: &Isometry, p: &PointGroup) -> bool {
    p.contains(&r.inverse().compose(r2))
}

/// Exactness helper: whether an integer square matrix is unimodular.
pub fn is_unimodular(t: &IntMatrix) -> bool {
    t.det().map(|d| d.abs().is_one()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Preset;
    use crate::linalg::{int, rat};

    fn r5() -> Isometry {
        Isometry::plane_rotation(3, 4, 5).unwrap()
    }

    /// brute force over integer matrices with entries in {-1,0,1}: those that
    /// are orthogonal and map the diagonal lattice onto itself
    fn brute_point_group_order(scales: &[i64]) -> (usize, usize) {
        let d = scales.len();
        let l = Lattice::diagonal(scales).unwrap();
        let mut total = 0;
        let mut rot = 0;
        for code in 0..3usize.pow((d * d) as u32) {
            let mut c = code;
            let v: Vec<i64> = (0..d * d)
                .map(|_| {
                    let e = (c % 3) as i64 - 1;
                    c /= 3;
                    e
                })
                .collect();
            let m = RatMatrix::from_i64(d, d, &v);
            if let Ok(r) = Isometry::new(m) {
                if l.transform(r.mat()).unwrap() == l {
                    total += 1;
                    if r.det() == 1 {
                        rot += 1;
                    }
                }
            }
        }
        (total, rot)
    }

    #[test]
    fn make_isometry_examples() {
        assert!(Isometry::new(RatMatrix::identity(3)).is_ok());
        assert!(Isometry::new(RatMatrix::from_scaled_i64(2, 2, 5, &[3, -4, 4, 3])).is_ok());
        assert_eq!(Isometry::new(RatMatrix::from_i64(2, 2, &[1, 1, 0, 1])).unwrap_err(), Error::NotAnIsometry);
        assert_eq!(Isometry::new(RatMatrix::zeros(2, 3)).unwrap_err(), Error::NotAnIsometry);
    }

    #[test]
    fn point_group_orders_match_brute_force() {
        for (preset, scales) in [(Preset::Square, vec![1, 1]), (Preset::TwoByThree, vec![2, 3]), (Preset::Cubic, vec![1, 1, 1])] {
            let p = PointGroup::of(&preset.lattice()).unwrap();
            let (total, rot) = brute_point_group_order(&scales);
            assert_eq!((p.order(), p.rotation_order()), (total, rot), "{}", preset.name());
            assert!(p.verify().unwrap());
        }
        let p = PointGroup::of(&Preset::Square.lattice()).unwrap();
        assert_eq!((p.order(), p.rotation_order()), (8, 4));
        let p = PointGroup::of(&Preset::TwoByThree.lattice()).unwrap();
        assert_eq!((p.order(), p.rotation_order()), (4, 2));
        let p = PointGroup::of(&Preset::Cubic.lattice()).unwrap();
        assert_eq!((p.order(), p.rotation_order()), (48, 24));
    }

    #[test]
    fn point_group_of_skew_lattice() {
        // hexagonal lattice scaled to rational coordinates is not possible, but a
        // rhombic one is: basis (1,1), (1,-1) is ℤ² rotated by 45° and scaled
        let l = Lattice::from_basis(&RatMatrix::from_i64(2, 2, &[1, 1, 1, -1])).unwrap();
        let p = PointGroup::of(&l).unwrap();
        assert_eq!(p.order(), 8);
        assert!(p.verify().unwrap());
        assert!(p.has_orientation_reversing());
        assert_eq!(p.rotation_order() * 2, p.order());
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(PointGroup::of(&Lattice::integer(5)).unwrap_err(), Error::UnsupportedDimension(5));
    }

    #[test]
    fn symmetry_classes() {
        let p = PointGroup::of(&Lattice::integer(2)).unwrap();
        let id_class = SymmetryClass::of(&Isometry::identity(2), &p);
        for q in p.elements() {
            assert_eq!(SymmetryClass::of(q, &p), id_class);
            assert_eq!(SymmetryClass::of(&r5().compose(q), &p), SymmetryClass::of(&r5(), &p));
        }
        // (1/5)[[4,-3],[3,4]] = r5⁻¹ · (quarter turn): it lies in the class of the
        // inverse rotation, and r5⁻¹·r5b is a rotation by 2·atan(3/4), not a symmetry
        let r5b = Isometry::plane_rotation(4, 3, 5).unwrap();
        assert!(!p.contains(&r5().inverse().compose(&r5b)));
        assert!(same_class(&r5().inverse(), &r5b, &p));
        assert_eq!(SymmetryClass::of(&r5b, &p), SymmetryClass::of(&r5().inverse(), &p));
        assert_ne!(SymmetryClass::of(&r5(), &p), SymmetryClass::of(&r5b, &p));
        assert_eq!(id_class.members(&p).len(), 8);
    }

    #[test]
    fn denominators() {
        let z2 = Lattice::integer(2);
        assert_eq!(den(&z2, &Isometry::identity(2)).unwrap(), 1);
        assert_eq!(den(&z2, &r5()).unwrap(), 5);
        let rot90 = Isometry::new(RatMatrix::from_i64(2, 2, &[0, -1, 1, 0])).unwrap();
        assert_eq!(den(&z2, &rot90).unwrap(), 1);
        let p = PointGroup::of(&z2).unwrap();
        for q in p.elements() {
            assert_eq!(den(&z2, &r5().compose(q)).unwrap(), 5);
        }
        // on 2ℤ×3ℤ the quarter turn has coordinate matrix [[0,-3/2],[2/3,0]]
        let l = Preset::TwoByThree.lattice();
        assert_eq!(coordinate_matrix(&l, &rot90).unwrap(), RatMatrix::new(2, 2, vec![rat(0, 1), rat(-3, 2), rat(2, 3), rat(0, 1)]));
        assert_eq!(den(&l, &rot90).unwrap(), 6);
    }

    #[test]
    fn orientation() {
        assert!(Isometry::identity(3).is_orientation_preserving());
        assert!(!Isometry::new(RatMatrix::from_i64(2, 2, &[1, 0, 0, -1])).unwrap().is_orientation_preserving());
        assert!(r5().is_orientation_preserving());
        assert!(!Isometry::inversion(3).is_orientation_preserving());
    }

    #[test]
    fn short_vectors() {
        let g = RatMatrix::identity(2);
        let v = vectors_of_norm(&g, &rat(5, 1));
        assert_eq!(v.len(), 8);
        let g = RatMatrix::from_i64(2, 2, &[4, 0, 0, 9]);
        let v = vectors_of_norm(&g, &rat(13, 1));
        assert_eq!(v, vec![vec![int(-1), int(-1)], vec![int(-1), int(1)], vec![int(1), int(-1)], vec![int(1), int(1)]]);
        assert!(vectors_of_norm(&g, &rat(3, 1)).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let v = serde_json::to_value(r5()).unwrap();
        assert_eq!(v, serde_json::json!({"dim": 2, "mat": [["3/5", "-4/5"], ["4/5", "3/5"]]}));
        let back: Isometry = serde_json::from_value(v).unwrap();
        assert_eq!(back, r5());
        let bad = serde_json::json!({"dim": 2, "mat": [["1", "1"], ["0", "1"]]});
        assert!(serde_json::from_value::<Isometry>(bad).is_err());
    }
}
