//! Arithmetic functions `f_iso`, `f_rot`, `f` (and `g` from similar
//! sublattices), multiplicativity checks and Dirichlet series data.
//!
//! Everything here is finite-range: a check that finds nothing only says
//! so for the pairs with `m·n ≤ max_index`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{coprime_pairs, factorize, is_power_of, primes_up_to};
use crate::enumerate::EnumerationResult;
use crate::error::{Error, Result};
use crate::isometry::PointGroup;
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    FIso,
    FRot,
    F,
    G,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::FIso => "f_iso",
            Which::FRot => "f_rot",
            Which::F => "f",
            Which::G => "g",
        }
    }

    pub fn from_name(s: &str) -> Option<Which> {
        [Which::FIso, Which::FRot, Which::F, Which::G].into_iter().find(|w| w.name() == s)
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRow {
    pub m: u64,
    pub f_iso: u64,
    pub f_rot: u64,
    pub f: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub lattice: Lattice,
    pub max_index: u64,
    pub pg_order: u64,
    pub pg_rotation_order: u64,
    /// One row for every `1 ≤ m ≤ max_index`, zeros included.
    pub rows: BTreeMap<u64, MultiplicityRow>,
}

/// Values `a(1), …, a(N)` of an arithmetic function, as far as known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub max_index: u64,
    values: Vec<u64>,
}

impl Series {
    pub fn new(name: impl Into<String>, values: Vec<u64>) -> Series {
        Series { name: name.into(), max_index: values.len() as u64, values }
    }

    /// `a(m)`, or `None` outside `1..=max_index`.
    pub fn get(&self, m: u64) -> Option<u64> {
        if m == 0 {
            return None;
        }
        self.values.get(m as usize - 1).copied()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `a(mn) < a(m)a(n)`: breaks supermultiplicativity too.
    MultiplicativeViolation,
    /// `a(mn) > a(m)a(n)`.
    StrictSupermultiplicative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub m: u64,
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub kind: WitnessKind,
}

impl Witness {
    pub fn is_fatal(&self) -> bool {
        self.kind == WitnessKind::MultiplicativeViolation
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={}): a(mn)={} vs a(m)a(n)={}", self.m, self.n, self.lhs, self.rhs)
    }
}

/// Tabulates `f_iso`, `f_rot` and `f` from a complete enumeration.
pub fn multiplicity_table(e: &EnumerationResult, p: &PointGroup) -> Result<MultiplicityTable> {
    e.covers(e.max_sigma)?;
    if &e.lattice != p.lattice() {
        return Err(Error::Precondition("point group belongs to a different lattice".into()));
    }
    let order = p.order() as u64;
    let rot_order = p.rotation_order() as u64;
    let mut classes = vec![0u64; e.max_sigma as usize + 1];
    let mut rotations = vec![0u64; e.max_sigma as usize + 1];
    let mut raw = vec![0u64; e.max_sigma as usize + 1];
    let mut csls: Vec<BTreeSet<&Lattice>> = vec![BTreeSet::new(); e.max_sigma as usize + 1];
    for rec in &e.records {
        let m = rec.sigma as usize;
        classes[m] += 1;
        raw[m] += order;
        // #{Q ∈ P : det(RQ) = 1}
        rotations[m] += if rec.isometry.is_orientation_preserving() { rot_order } else { order - rot_order };
        csls[m].insert(&rec.csl);
    }
    let mut rows = BTreeMap::new();
    for m in 1..=e.max_sigma {
        let i = m as usize;
        if !raw[i].is_multiple_of(order) || !rotations[i].is_multiple_of(rot_order) {
            return Err(Error::Internal(format!("cosets do not partition the isometries at index {m}")));
        }
        let row = MultiplicityRow { m, f_iso: classes[i], f_rot: rotations[i] / rot_order, f: csls[i].len() as u64 };
        if row.f > row.f_iso {
            return Err(Error::Internal(format!("more CSLs than classes at index {m}")));
        }
        rows.insert(m, row);
    }
    if let Some(r1) = rows.get(&1) {
        if (r1.f_iso, r1.f_rot, r1.f) != (1, 1, 1) {
            return Err(Error::Internal(format!("index 1 is not normalized: {r1:?}")));
        }
    }
    Ok(MultiplicityTable { lattice: e.lattice.clone(), max_index: e.max_sigma, pg_order: order, pg_rotation_order: rot_order, rows })
}

impl MultiplicityTable {
    pub fn series(&self, which: Which) -> Result<Series> {
        let pick = |r: &MultiplicityRow| match which {
            Which::FIso => Ok(r.f_iso),
            Which::FRot => Ok(r.f_rot),
            Which::F => Ok(r.f),
            Which::G => Err(Error::Precondition("g is counted by the similar sublattice table".into())),
        };
        let values = self.rows.values().map(pick).collect::<Result<Vec<_>>>()?;
        Ok(Series::new(which.name(), values))
    }

    pub fn row(&self, m: u64) -> Option<&MultiplicityRow> {
        self.rows.get(&m)
    }

    /// Rows as CSV with header `m,f_iso,f_rot,f`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        for row in self.rows.values() {
            w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

/// Closed form for ℤ²: `2^r` when every prime factor of `m` is `1 mod 4`
/// (`r` distinct primes), `0` otherwise.
pub fn square_formula(m: u64) -> u64 {
    let f = factorize(m);
    if f.iter().all(|(p, _)| p % 4 == 1) {
        1 << f.len()
    } else {
        0
    }
}

fn compare(s: &Series, m: u64, n: u64) -> Option<Witness> {
    let (a, b, ab) = (s.get(m)?, s.get(n)?, s.get(m * n)?);
    let rhs = a * b;
    match ab.cmp(&rhs) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some(Witness { m, n, lhs: ab, rhs, kind: WitnessKind::MultiplicativeViolation }),
        std::cmp::Ordering::Greater => Some(Witness { m, n, lhs: ab, rhs, kind: WitnessKind::StrictSupermultiplicative }),
    }
}

/// Every coprime pair `(m, n)`, `m < n`, `mn ≤ max_index`, where
/// `a(mn) ≠ a(m)a(n)`. Pairs involving 1 never fail and are skipped.
pub fn check_multiplicative(s: &Series) -> Vec<Witness> {
    coprime_pairs(s.max_index).into_iter().filter_map(|(m, n)| compare(s, m, n)).collect()
}

/// First coprime pair with `a(mn) < a(m)a(n)`, if any.
pub fn check_supermultiplicative(s: &Series) -> Option<Witness> {
    check_multiplicative(s).into_iter().find(Witness::is_fatal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletData {
    /// Nonzero coefficients only.
    pub coefficients: BTreeMap<u64, u64>,
    pub euler_primes: Vec<u64>,
    pub truncation: u64,
}

impl DirichletData {
    pub fn coefficient(&self, m: u64) -> u64 {
        self.coefficients.get(&m).copied().unwrap_or(0)
    }

    /// `Σ a(m) m^{-s}` rendered up to the first `terms` nonzero terms.
    pub fn render(&self, terms: usize) -> String {
        let mut parts: Vec<String> = self
            .coefficients
            .iter()
            .take(terms)
            .map(|(&m, &c)| match (m, c) {
                (1, c) => c.to_string(),
                (m, 1) => format!("{m}^-s"),
                (m, c) => format!("{c}/{m}^s"),
            })
            .collect();
        if self.coefficients.len() > terms {
            parts.push("...".into());
        }
        parts.join(" + ")
    }
}

/// Nonzero terms of a series, with the primes whose powers carry them.
pub fn dirichlet_coefficients(s: &Series) -> DirichletData {
    let coefficients: BTreeMap<u64, u64> =
        (1..=s.max_index).filter_map(|m| s.get(m).filter(|&c| c != 0).map(|c| (m, c))).collect();
    let euler_primes = primes_up_to(s.max_index)
        .into_iter()
        .filter(|&p| coefficients.keys().any(|&m| m > 1 && is_power_of(m, p)))
        .collect();
    DirichletData { coefficients, euler_primes, truncation: s.max_index }
}

/// Expands `∏_{p ≡ 1 (4)} (1 + p^{-s}) / (1 - p^{-s})` up to `m ≤ truncation`
/// by exact convolution. Each factor is `1 + 2p^{-s} + 2p^{-2s} + …`.
pub fn euler_product_square(truncation: u64) -> DirichletData {
    let t = truncation as usize;
    let mut c = vec![0u64; t + 1];
    if t >= 1 {
        c[1] = 1;
    }
    let primes: Vec<u64> = primes_up_to(truncation).into_iter().filter(|p| p % 4 == 1).collect();
    for &p in &primes {
        let mut next = c.clone();
        for n in 1..=t {
            if c[n] == 0 {
                continue;
            }
            let mut q = n as u64 * p;
            while q <= truncation {
                next[q as usize] += 2 * c[n];
                q *= p;
            }
        }
        c = next;
    }
    let coefficients = (1..=t).filter(|&m| c[m] != 0).map(|m| (m as u64, c[m])).collect();
    DirichletData { coefficients, euler_primes: primes, truncation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_brute, enumerate_cubic, enumerate_square, BruteLimits};
    use crate::lattice::Preset;

    fn table(e: &EnumerationResult) -> MultiplicityTable {
        multiplicity_table(e, &PointGroup::of(&e.lattice).unwrap()).unwrap()
    }

    #[test]
    fn formula_against_primitive_circle_points() {
        // for odd m, f(m) is the number of primitive points on a circle of
        // radius √m divided by the 4 units, so it equals primitive r₂(m) / 4
        for m in (1..400u64).step_by(2) {
            let primitive: u64 = {
                let r = (m as f64).sqrt() as i64 + 1;
                let mut k = 0;
                for a in -r..=r {
                    for b in -r..=r {
                        if (a * a + b * b) as u64 == m && num_integer::Integer::gcd(&a, &b) == 1 {
                            k += 1;
                        }
                    }
                }
                k
            };
            assert_eq!(square_formula(m), primitive / 4, "m={m}");
        }
        assert_eq!(square_formula(1), 1);
        assert_eq!(square_formula(65), 4);
        assert_eq!(square_formula(10), 0);
        assert_eq!(square_formula(3), 0);
    }

    #[test]
    fn square_table() {
        let t = table(&enumerate_square(100).unwrap());
        for m in 1..=100 {
            let r = t.row(m).unwrap();
            assert_eq!(r.f, square_formula(m), "m={m}");
            assert_eq!((r.f_iso, r.f_rot), (r.f, r.f));
        }
        assert_eq!(t.row(5).unwrap().f, 2);
        assert_eq!(t.row(25).unwrap().f, 2);
        assert_eq!(t.row(65).unwrap().f, 4);
        assert_eq!(t.row(3).unwrap().f, 0);
        assert_eq!((t.pg_order, t.pg_rotation_order), (8, 4));
        for w in [Which::F, Which::FIso, Which::FRot] {
            let s = t.series(w).unwrap();
            assert!(check_multiplicative(&s).is_empty());
            assert!(check_supermultiplicative(&s).is_none());
        }
        assert!(t.series(Which::G).is_err());
    }

    #[test]
    fn two_by_three_is_not_multiplicative() {
        let l = Preset::TwoByThree.lattice();
        let t = table(&enumerate_brute(&l, 36, BruteLimits::default()).unwrap());
        let row = |m| *t.row(m).unwrap();
        assert_eq!((row(6).f, row(6).f_iso), (1, 1));
        assert_eq!((row(2).f, row(3).f, row(2).f_iso, row(3).f_iso), (0, 0, 0, 0));
        let w = check_multiplicative(&t.series(Which::F).unwrap());
        assert!(w.contains(&Witness { m: 2, n: 3, lhs: 1, rhs: 0, kind: WitnessKind::StrictSupermultiplicative }));
        for which in [Which::F, Which::FIso, Which::FRot] {
            assert!(check_supermultiplicative(&t.series(which).unwrap()).is_none());
        }
        assert_eq!(t.pg_order, 4);
        let d = dirichlet_coefficients(&t.series(Which::F).unwrap());
        assert_eq!(d.coefficients.keys().nth(1), Some(&6));
    }

    #[test]
    fn cubic_table() {
        let t = table(&enumerate_cubic(60).unwrap());
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(t.row(p).unwrap().f_iso, p + 1, "p={p}");
        }
        for m in (2..=60).step_by(2) {
            assert_eq!(t.row(m).unwrap().f, 0);
        }
        let s = t.series(Which::F).unwrap();
        assert!(check_multiplicative(&s).is_empty());
        assert!(check_supermultiplicative(&t.series(Which::FIso).unwrap()).is_none());
    }

    #[test]
    fn dirichlet_terms() {
        let t = table(&enumerate_square(80).unwrap());
        let d = dirichlet_coefficients(&t.series(Which::F).unwrap());
        let expect = [(1, 1), (5, 2), (13, 2), (17, 2), (25, 2), (29, 2), (37, 2), (41, 2), (53, 2), (61, 2), (65, 4), (73, 2)];
        let got: Vec<(u64, u64)> = d.coefficients.iter().map(|(&m, &c)| (m, c)).take(12).collect();
        assert_eq!(got, expect);
        assert_eq!(d.coefficient(81), 0);
        assert_eq!(d.euler_primes, vec![5, 13, 17, 29, 37, 41, 53, 61, 73]);
        assert!(d.render(3).starts_with("1 + 2/5^s + 2/13^s"));
        let e = euler_product_square(80);
        assert_eq!(e.coefficients, d.coefficients);
        assert_eq!(e.coefficient(125), 0);
    }

    #[test]
    fn euler_product_matches_formula() {
        let e = euler_product_square(2000);
        for m in 1..=2000 {
            assert_eq!(e.coefficient(m), square_formula(m), "m={m}");
        }
    }

    #[test]
    fn series_and_witness_basics() {
        let s = Series::new("a", vec![1, 0, 0, 0, 0, 1]);
        assert_eq!(s.get(0), None);
        assert_eq!(s.get(7), None);
        let w = check_multiplicative(&s);
        assert_eq!(w, vec![Witness { m: 2, n: 3, lhs: 1, rhs: 0, kind: WitnessKind::StrictSupermultiplicative }]);
        assert!(check_supermultiplicative(&s).is_none());
        let bad = Series::new("b", vec![1, 2, 2, 0, 0, 3]);
        assert!(check_supermultiplicative(&bad).unwrap().is_fatal());
        let json = serde_json::to_string(&w[0]).unwrap();
        assert!(json.contains("\"strict-supermultiplicative\""));
    }

    #[test]
    fn csv_shape() {
        let t = table(&enumerate_square(5).unwrap());
        let csv = t.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("m,f_iso,f_rot,f"));
        assert_eq!(lines.nth(4), Some("5,2,2,2"));
    }

    #[test]
    fn incomplete_enumeration_is_rejected() {
        let mut e = enumerate_square(10).unwrap();
        e.complete = false;
        let p = PointGroup::of(&e.lattice).unwrap();
        assert!(matches!(multiplicity_table(&e, &p), Err(Error::IncompletePool { .. })));
        let other = PointGroup::of(&Preset::TwoByThree.lattice()).unwrap();
        assert!(multiplicity_table(&enumerate_square(10).unwrap(), &other).is_err());
    }
}
