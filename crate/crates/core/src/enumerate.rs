//! Complete lists of coincidence isometries up to an index bound.
//!
//! Three routes are available: Gaussian integers for ℤ², integer
//! quaternions for ℤ³, and a generic search over rational orthogonal
//! matrices that serves as the independent oracle for the other two.

use std::collections::{BTreeMap, HashMap};

use num_integer::{Integer, Roots};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csl::{csl, CoincidenceRecord};
use crate::error::{Error, Result};
use crate::isometry::{coordinate_matrix, Isometry, PointGroup, SymmetryClass};
use crate::lattice::{Lattice, Preset};
use crate::linalg::{to_u64, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub lattice: Lattice,
    pub max_sigma: u64,
    /// Sorted by `(sigma, class representative)`, one record per class.
    pub records: Vec<CoincidenceRecord>,
    /// No coincidence isometry with `Σ ≤ max_sigma` is missing.
    pub complete: bool,
}

impl EnumerationResult {
    fn from_records(lattice: Lattice, max_sigma: u64, records: impl IntoIterator<Item = CoincidenceRecord>) -> Self {
        let mut by_class: BTreeMap<(u64, SymmetryClass), CoincidenceRecord> = BTreeMap::new();
        for rec in records {
            if rec.sigma <= max_sigma {
                by_class.entry((rec.sigma, rec.sym_class.clone())).or_insert(rec);
            }
        }
        EnumerationResult { lattice, max_sigma, records: by_class.into_values().collect(), complete: true }
    }

    pub fn records_at(&self, sigma: u64) -> impl Iterator<Item = &CoincidenceRecord> {
        self.records.iter().filter(move |r| r.sigma == sigma)
    }

    pub fn classes(&self) -> BTreeMap<u64, Vec<SymmetryClass>> {
        let mut out: BTreeMap<u64, Vec<SymmetryClass>> = BTreeMap::new();
        for r in &self.records {
            out.entry(r.sigma).or_default().push(r.sym_class.clone());
        }
        out
    }

    /// Whether this enumeration can answer questions up to `sigma`.
    pub fn covers(&self, sigma: u64) -> Result<()> {
        if !self.complete || self.max_sigma < sigma {
            return Err(Error::IncompletePool { have: if self.complete { self.max_sigma } else { 0 }, needed: sigma });
        }
        Ok(())
    }
}

fn odd_part(mut n: u64) -> u64 {
    while n > 0 && n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

/// Coincidence isometries of ℤ² via primitive Gaussian integers `a + bi`
/// with odd norm `m = a² + b²`: the rotation `(a + bi)² / m` has `Σ = m`.
pub fn enumerate_square(max_sigma: u64) -> Result<EnumerationResult> {
    let lattice = Lattice::integer(2);
    let p = PointGroup::of(&lattice)?;
    let mut pairs = vec![];
    let r = max_sigma.sqrt() as i64;
    for a in 0..=r {
        for b in 0..=r {
            let m = (a * a + b * b) as u64;
            if m == 0 || m > max_sigma || m.is_multiple_of(2) || a.gcd(&b) != 1 {
                continue;
            }
            pairs.push((a, b, m));
        }
    }
    let reflection = Isometry::new(RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]))?;
    let records: Vec<CoincidenceRecord> = pairs
        .par_iter()
        .map(|&(a, b, m)| {
            let rot = Isometry::plane_rotation(a * a - b * b, 2 * a * b, m as i64)?;
            let rec = csl(&p, &rot)?;
            if rec.sigma != m {
                return Err(Error::Internal(format!("Σ of ({a},{b}) is {} not {m}", rec.sigma)));
            }
            let companion = csl(&p, &rot.compose(&reflection))?;
            Ok([rec, companion])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(EnumerationResult::from_records(lattice, max_sigma, records))
}

/// Rotation matrix of the integer quaternion `k + l i + m j + n k`, exact.
pub fn quaternion_rotation(k: i64, l: i64, m: i64, n: i64) -> Result<Isometry> {
    let (num, den) = quaternion_numerators(k, l, m, n);
    if den == 0 {
        return Err(Error::Precondition("zero quaternion".into()));
    }
    Isometry::new(RatMatrix::from_scaled_i64(3, 3, den, &num))
}

fn quaternion_numerators(k: i64, l: i64, m: i64, n: i64) -> ([i64; 9], i64) {
    let s = k * k + l * l + m * m + n * n;
    (
        [
            k * k + l * l - m * m - n * n,
            2 * (l * m - k * n),
            2 * (l * n + k * m),
            2 * (l * m + k * n),
            k * k - l * l + m * m - n * n,
            2 * (m * n - k * l),
            2 * (l * n - k * m),
            2 * (m * n + k * l),
            k * k - l * l - m * m + n * n,
        ],
        s,
    )
}

/// Lexicographically smallest `R·Q` over signed permutation matrices `Q`,
/// on the integer numerators of `R` (common denominator).
fn cubic_class_key(e: &[i64; 9]) -> [i64; 9] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best = [i64::MAX; 9];
    for perm in PERMS {
        for signs in 0..8u32 {
            let mut cand = [0i64; 9];
            for row in 0..3 {
                for col in 0..3 {
                    let s = if signs >> col & 1 == 1 { -1 } else { 1 };
                    cand[row * 3 + col] = s * e[row * 3 + perm[col]];
                }
            }
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// Coincidence isometries of ℤ³ from primitive integer quaternions.
///
/// `Σ` is predicted as the odd part of `|q|²` and cross-checked against the
/// exact intersection for every class. Classes are taken modulo the full
/// cubic point group, which contains `−I`, so the improper isometries are
/// covered by the same cosets.
pub fn enumerate_cubic(max_sigma: u64) -> Result<EnumerationResult> {
    let lattice = Lattice::integer(3);
    let p = PointGroup::of(&lattice)?;
    // odd part of |q|² ≤ N needs |q|² ≤ 4N: a primitive q has |q|² ≢ 0 mod 8
    let bound = 4 * max_sigma as i64;
    let r = bound.sqrt();
    let keys: HashMap<(i64, [i64; 9]), u64> = (0..=r)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut local = HashMap::new();
            for l in -r..=r {
                for m in -r..=r {
                    let partial = k * k + l * l + m * m;
                    if partial > bound {
                        continue;
                    }
                    for n in -r..=r {
                        let s = partial + n * n;
                        if s == 0 || s > bound {
                            continue;
                        }
                        let predicted = odd_part(s as u64);
                        if predicted > max_sigma || k.gcd(&l).gcd(&m).gcd(&n) != 1 {
                            continue;
                        }
                        let (num, den) = quaternion_numerators(k, l, m, n);
                        let g = num.iter().fold(den, |g, v| g.gcd(v));
                        let reduced: [i64; 9] = num.map(|v| v / g);
                        local.entry((den / g, cubic_class_key(&reduced))).or_insert(predicted);
                    }
                }
            }
            local.into_iter()
        })
        .collect();
    let mut keys: Vec<((i64, [i64; 9]), u64)> = keys.into_iter().collect();
    keys.sort();
    let records = keys
        .par_iter()
        .map(|((den, num), predicted)| {
            let r = Isometry::new(RatMatrix::from_scaled_i64(3, 3, *den, num))?;
            let rec = csl(&p, &r)?;
            if rec.sigma != *predicted {
                return Err(Error::Internal(format!("cubic Σ {} differs from odd part {predicted}", rec.sigma)));
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumerationResult::from_records(lattice, max_sigma, records))
}

/// Search limits for [`enumerate_brute`], on the Cartesian denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteLimits {
    pub max_cartesian_den_2d: u64,
    pub max_cartesian_den_3d: u64,
}

impl Default for BruteLimits {
    fn default() -> Self {
        BruteLimits { max_cartesian_den_2d: 5000, max_cartesian_den_3d: 60 }
    }
}

/// Smallest `c` with `den(B R B⁻¹) | c · den(R)` for every rational `R`:
/// `B M B⁻¹ = H M adj(H) / det(H)` for the integer HNF `H` of the lattice.
pub fn cartesian_den_factor(l: &Lattice) -> Result<u64> {
    let h = l.mat();
    let det = h.det()?;
    let adj = h
        .to_rational()
        .inverse()?
        .scaled(&Rational::from_integer(det.clone()))
        .to_integer()
        .ok_or_else(|| Error::Internal("adjugate not integral".into()))?;
    let g = det.gcd(&(h.content() * adj.content()));
    to_u64(&(det / g))
}

fn sphere_points(dim: usize, n: i64) -> Vec<Vec<i64>> {
    let n2 = n * n;
    let mut out = vec![];
    match dim {
        1 => {
            out.push(vec![n]);
            out.push(vec![-n]);
        }
        2 => {
            for x in -n..=n {
                let rest = n2 - x * x;
                let y = rest.sqrt();
                if y * y == rest {
                    out.push(vec![x, y]);
                    if y != 0 {
                        out.push(vec![x, -y]);
                    }
                }
            }
        }
        3 => {
            for x in -n..=n {
                for y in -n..=n {
                    let rest = n2 - x * x - y * y;
                    if rest < 0 {
                        continue;
                    }
                    let z = rest.sqrt();
                    if z * z == rest {
                        out.push(vec![x, y, z]);
                        if z != 0 {
                            out.push(vec![x, y, -z]);
                        }
                    }
                }
            }
        }
        _ => unreachable!("dimension checked by caller"),
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer matrices `X` (as column lists) with orthogonal columns of length `n`.
fn orthogonal_numerators(dim: usize, n: i64) -> Vec<Vec<Vec<i64>>> {
    let points = sphere_points(dim, n);
    let mut out = vec![];
    match dim {
        1 => {
            for p in points {
                out.push(vec![p]);
            }
        }
        2 => {
            for p in points {
                out.push(vec![p.clone(), vec![-p[1], p[0]]]);
                out.push(vec![p.clone(), vec![p[1], -p[0]]]);
            }
        }
        3 => {
            for a in &points {
                for b in &points {
                    if dot(a, b) != 0 {
                        continue;
                    }
                    let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                    if cross.iter().any(|v| v % n != 0) {
                        continue;
                    }
                    let c: Vec<i64> = cross.iter().map(|v| v / n).collect();
                    let neg: Vec<i64> = c.iter().map(|v| -v).collect();
                    out.push(vec![a.clone(), b.clone(), c]);
                    out.push(vec![a.clone(), b.clone(), neg]);
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

/// Every coincidence isometry of `l` whose lattice-coordinate matrix
/// `B⁻¹RB` has denominator at most `max_den`, found by assembling rational
/// orthogonal matrices column by column from points on spheres.
///
/// Since `den(B⁻¹RB)` divides `Σ(R)`, the result is complete for
/// `Σ ≤ max_den`; records with larger `Σ` are dropped. The divisibility is
/// checked on every record and a violation aborts the search.
pub fn enumerate_brute(l: &Lattice, max_den: u64, limits: BruteLimits) -> Result<EnumerationResult> {
    let dim = l.dim();
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let factor = cartesian_den_factor(l)?;
    let cart_bound = max_den
        .checked_mul(factor)
        .ok_or_else(|| Error::GuardExceeded(format!("denominator bound {max_den}·{factor} overflows")))?;
    let limit = if dim == 3 { limits.max_cartesian_den_3d } else { limits.max_cartesian_den_2d };
    if cart_bound > limit {
        return Err(Error::GuardExceeded(format!(
            "Cartesian denominator bound {cart_bound} exceeds {limit} in dimension {dim}"
        )));
    }
    let p = PointGroup::of(l)?;
    let records: Vec<Vec<CoincidenceRecord>> = (1..=cart_bound as i64)
        .into_par_iter()
        .map(|n| {
            let mut found: BTreeMap<SymmetryClass, CoincidenceRecord> = BTreeMap::new();
            for cols in orthogonal_numerators(dim, n) {
                // only keep matrices whose exact denominator is n
                let g = cols.iter().flatten().fold(n, |g, v| g.gcd(v));
                if g != 1 {
                    continue;
                }
                let flat: Vec<i64> = (0..dim).flat_map(|r| cols.iter().map(move |c| c[r])).collect();
                let r = Isometry::new(RatMatrix::from_scaled_i64(dim, dim, n, &flat))?;
                let coords = coordinate_matrix(l, &r)?;
                let den = to_u64(&coords.denominator())?;
                if den > max_den {
                    continue;
                }
                let class = SymmetryClass::of(&r, &p);
                if found.contains_key(&class) {
                    continue;
                }
                let rec = csl(&p, &r)?;
                if rec.sigma % den != 0 {
                    return Err(Error::DenominatorBound(format!("den {den} does not divide Σ {} for {r}", rec.sigma)));
                }
                if rec.sigma <= max_den {
                    found.insert(class, rec);
                }
            }
            Ok(found.into_values().collect())
        })
        .collect::<Result<_>>()?;
    Ok(EnumerationResult::from_records(l.clone(), max_den, records.into_iter().flatten()))
}

/// Coincidence spectrum of `Aℤ^d` via the conjugation criterion: `R` is a
/// coincidence isometry iff `A⁻¹RA` is rational. Wraps [`enumerate_brute`].
pub fn enumerate_conjugated(l: &Lattice, max_sigma: u64) -> Result<EnumerationResult> {
    // rational lattices make every rational R commensurate, so the criterion
    // reduces to the denominator search
    enumerate_brute(l, max_sigma, BruteLimits::default())
}

/// Picks the parametrized enumerator for ℤ² and ℤ³ and the conjugated
/// search otherwise.
pub fn enumerate_auto(l: &Lattice, max_sigma: u64) -> Result<EnumerationResult> {
    match Preset::identify(l) {
        Some(Preset::Square) => enumerate_square(max_sigma),
        Some(Preset::Cubic) => enumerate_cubic(max_sigma),
        _ => enumerate_conjugated(l, max_sigma),
    }
}

/// Integer matrix helper used by tests and sweeps: all point-group twists `R·Q`.
pub fn twists(r: &Isometry, p: &PointGroup) -> Vec<Isometry> {
    p.elements().iter().map(|q| r.compose(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(e: &EnumerationResult) -> BTreeMap<u64, usize> {
        e.classes().into_iter().map(|(m, c)| (m, c.len())).collect()
    }

    #[test]
    fn square_small_bounds() {
        let e = enumerate_square(4).unwrap();
        assert_eq!(counts(&e), BTreeMap::from([(1, 1)]));
        let e = enumerate_square(5).unwrap();
        assert_eq!(counts(&e), BTreeMap::from([(1, 1), (5, 2)]));
        let e = enumerate_square(65).unwrap();
        assert_eq!(counts(&e)[&65], 4);
        assert!(e.complete);
        assert!(e.records.windows(2).all(|w| (w[0].sigma, &w[0].sym_class) < (w[1].sigma, &w[1].sym_class)));
    }

    #[test]
    fn square_matches_brute_force() {
        let sq = enumerate_square(30).unwrap();
        let br = enumerate_brute(&Lattice::integer(2), 30, BruteLimits::default()).unwrap();
        assert_eq!(sq.classes(), br.classes());
        let br = enumerate_brute(&Lattice::integer(2), 5, BruteLimits::default()).unwrap();
        assert_eq!(counts(&br), BTreeMap::from([(1, 1), (5, 2)]));
        let br = enumerate_brute(&Lattice::integer(2), 1, BruteLimits::default()).unwrap();
        assert_eq!(counts(&br), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn cubic_small_bounds() {
        let e = enumerate_cubic(2).unwrap();
        assert_eq!(counts(&e), BTreeMap::from([(1, 1)]));
        // four Σ3 classes, one per threefold axis
        let e = enumerate_cubic(3).unwrap();
        assert_eq!(counts(&e), BTreeMap::from([(1, 1), (3, 4)]));
        let q = quaternion_rotation(1, 1, 1, 0).unwrap();
        assert_eq!(crate::csl::sigma(&Lattice::integer(3), &q).unwrap(), 3);
    }

    #[test]
    fn cubic_matches_brute_force() {
        let q = enumerate_cubic(15).unwrap();
        let b = enumerate_brute(&Lattice::integer(3), 15, BruteLimits::default()).unwrap();
        assert_eq!(q.classes(), b.classes());
        // every Σ is odd for the cubic lattice
        assert!(q.records.iter().all(|r| r.sigma % 2 == 1));
    }

    #[test]
    fn two_by_three_spectrum() {
        let l = Preset::TwoByThree.lattice();
        let e = enumerate_brute(&l, 6, BruteLimits::default()).unwrap();
        let c = counts(&e);
        assert_eq!(c.get(&2), None);
        assert_eq!(c.get(&3), None);
        assert_eq!(c[&6], 1);
        let rot90 = Isometry::new(RatMatrix::from_i64(2, 2, &[0, -1, 1, 0])).unwrap();
        let p = PointGroup::of(&l).unwrap();
        assert_eq!(e.records_at(6).next().unwrap().sym_class, SymmetryClass::of(&rot90, &p));
        let e = enumerate_conjugated(&l, 10).unwrap();
        let c = counts(&e);
        assert_eq!((c.get(&2), c.get(&3), c.get(&6)), (None, None, Some(&1)));
    }

    #[test]
    fn conjugated_agrees_on_square() {
        assert_eq!(enumerate_conjugated(&Lattice::integer(2), 40).unwrap().classes(), enumerate_square(40).unwrap().classes());
    }

    #[test]
    fn guard_rails() {
        assert!(matches!(
            enumerate_brute(&Lattice::integer(3), 61, BruteLimits::default()),
            Err(Error::GuardExceeded(_))
        ));
        assert!(matches!(
            enumerate_brute(&Lattice::integer(4), 1, BruteLimits::default()),
            Err(Error::UnsupportedDimension(4))
        ));
        assert_eq!(cartesian_den_factor(&Preset::TwoByThree.lattice()).unwrap(), 6);
        assert_eq!(cartesian_den_factor(&Preset::OneByFive.lattice()).unwrap(), 5);
        assert_eq!(cartesian_den_factor(&Lattice::integer(3)).unwrap(), 1);
    }

    #[test]
    fn deterministic_output() {
        let a = enumerate_cubic(21).unwrap();
        let b = enumerate_cubic(21).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn every_record_is_a_valid_coincidence() {
        let l = Preset::OneByFive.lattice();
        let e = enumerate_conjugated(&l, 30).unwrap();
        for rec in &e.records {
            assert!(crate::csl::is_coincidence(&l, &rec.isometry).unwrap());
            assert_eq!(crate::csl::sigma(&l, &rec.isometry).unwrap(), rec.sigma);
        }
    }
}
