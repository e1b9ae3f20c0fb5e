//! Similar sublattices `cRΓ ⊆ Γ`, the count `g(m)` of those with index
//! `m`, and the contrast with the CSL count `f(m)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{check_multiplicative, check_supermultiplicative, multiplicity_table, Series, Which, Witness};
use crate::enumerate::enumerate_auto;
use crate::error::{Error, Result};
use crate::isometry::{den, gram_maps, Isometry, PointGroup};
use crate::lattice::Lattice;
use crate::linalg::{IntMatrix, RatMatrix, Rational};
use crate::theorems::lattice_label;

/// Largest index [`enumerate_sublattices`] accepts, per dimension.
pub const MAX_SUBLATTICE_INDEX: [u64; 4] = [0, 1_000_000, 5_000, 400];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityRecord {
    pub isometry: Isometry,
    #[serde(with = "rational_string")]
    pub c: Rational,
    pub sublattice: Lattice,
    pub index: u64,
}

mod rational_string {
    use super::*;
    use crate::linalg::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(c))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// The upper triangular HNF matrices of determinant `m`, in lexicographic
/// order of their diagonals.
fn hnf_matrices(d: usize, m: u64) -> Vec<IntMatrix> {
    fn go(d: usize, i: usize, m: u64, diag: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == d - 1 {
            diag.push(m);
            out.push(diag.clone());
            diag.pop();
            return;
        }
        for a in 1..=m {
            if m.is_multiple_of(a) {
                diag.push(a);
                go(d, i + 1, m / a, diag, out);
                diag.pop();
            }
        }
    }
    let mut diags = vec![];
    go(d, 0, m, &mut vec![], &mut diags);
    let mut out = vec![];
    for diag in diags {
        // free entries (i, j), j > i, range over [0, diag[i])
        let free: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        let total: u64 = free.iter().map(|&(i, _)| diag[i]).product();
        for mut code in 0..total {
            let mut h = IntMatrix::zeros(d, d);
            for (i, &a) in diag.iter().enumerate() {
                h.set(i, i, BigInt::from(a));
            }
            for &(i, j) in &free {
                h.set(i, j, BigInt::from(code % diag[i]));
                code /= diag[i];
            }
            out.push(h);
        }
    }
    out
}

/// All sublattices of index `m`, one per HNF coordinate matrix.
pub fn enumerate_sublattices(l: &Lattice, m: u64) -> Result<Vec<Lattice>> {
    let d = l.dim();
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if m == 0 {
        return Err(Error::Precondition("index must be positive".into()));
    }
    if m > MAX_SUBLATTICE_INDEX[d] {
        return Err(Error::GuardExceeded(format!("sublattice index {m} above {}", MAX_SUBLATTICE_INDEX[d])));
    }
    let b = l.basis();
    hnf_matrices(d, m).into_iter().map(|h| Lattice::from_basis(&b.mul(&h.to_rational())?)).collect()
}

/// Entries of a rational symmetric matrix times one common positive integer.
fn integral_gram(g: &RatMatrix, scale: &BigInt) -> Vec<BigInt> {
    g.entries().iter().map(|x| (x * Rational::from_integer(scale.clone())).to_integer()).collect()
}

/// GL₂(ℤ)-reduced form `[a, b, c]` with `0 ≤ 2b ≤ a ≤ c` of the positive
/// definite Gram matrix `[[a, b], [b, c]]`.
pub fn reduce_binary(a: &BigInt, b: &BigInt, c: &BigInt) -> [BigInt; 3] {
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    loop {
        if c < a {
            std::mem::swap(&mut a, &mut c);
        }
        // b - q·a with |2(b - q·a)| ≤ a
        let q = (BigInt::from(2) * &b + &a).div_floor(&(BigInt::from(2) * &a));
        if q.is_zero() {
            break;
        }
        c = &c - BigInt::from(2) * &q * &b + &q * &q * &a;
        b -= &q * &a;
    }
    if c < a {
        std::mem::swap(&mut a, &mut c);
    }
    [a, b.abs(), c]
}

/// Whether `sub = c·R·l` for some scalar `c` and orthogonal `R`.
pub fn is_similar(l: &Lattice, sub: &Lattice) -> Result<bool> {
    let m = sub.index_in(l)?;
    let d = l.dim();
    match d {
        1 => Ok(true),
        2 => {
            let gs = sub.gram();
            let gl = l.gram().scaled(&Rational::from_integer(BigInt::from(m)));
            let scale = gs.denominator().lcm(&gl.denominator());
            let (s, t) = (integral_gram(&gs, &scale), integral_gram(&gl, &scale));
            Ok(reduce_binary(&s[0], &s[1], &s[3]) == reduce_binary(&t[0], &t[1], &t[3]))
        }
        3 => {
            // c³ = m and c² must be rational, so m is a cube
            let t = m.cbrt();
            if t * t * t != m {
                return Ok(false);
            }
            let target = l.gram().scaled(&Rational::from_integer(BigInt::from(t * t)));
            Ok(!gram_maps(&sub.gram(), &target, Some(1)).is_empty())
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Similar sublattice counts `g(1), …, g(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSLTable {
    pub lattice: Lattice,
    pub max_index: u64,
    pub rows: BTreeMap<u64, u64>,
}

impl SSLTable {
    pub fn series(&self) -> Series {
        Series::new(Which::G.name(), self.rows.values().copied().collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row {
            m: u64,
            g: u64,
        }
        let mut w = csv::Writer::from_writer(vec![]);
        for (&m, &g) in &self.rows {
            w.serialize(Row { m, g }).map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

pub fn ssl_table(l: &Lattice, n: u64) -> Result<SSLTable> {
    let d = l.dim();
    let counts: Vec<u64> = (1..=n)
        .into_par_iter()
        .map(|m| {
            if d == 3 && m.cbrt().pow(3) != m {
                return Ok(0);
            }
            let mut g = 0;
            for sub in enumerate_sublattices(l, m)? {
                g += u64::from(is_similar(l, &sub)?);
            }
            Ok(g)
        })
        .collect::<Result<_>>()?;
    Ok(SSLTable { lattice: l.clone(), max_index: n, rows: (1..=n).zip(counts).collect() })
}

/// `den(R)·R·Γ`, the smallest similar sublattice along `R`.
pub fn primitive_ssl(l: &Lattice, r: &Isometry) -> Result<SimilarityRecord> {
    let n = den(l, r)?;
    let c = Rational::from_integer(BigInt::from(n));
    let sublattice = l.transform(r.mat())?.scale(&c)?;
    let index = sublattice.index_in(l)?;
    if index != n.pow(l.dim() as u32) {
        return Err(Error::Internal(format!("primitive index {index} is not {n}^{}", l.dim())));
    }
    Ok(SimilarityRecord { isometry: r.clone(), c, sublattice, index })
}

/// Outcome of searching for a multiplicativity failure of `g` with
/// increasing ceilings, next to the behaviour of `f` on the same range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSLContrast {
    pub lattice: String,
    pub ceilings: Vec<u64>,
    /// Ceiling at which the search stopped.
    pub range: u64,
    pub g_witnesses: Vec<Witness>,
    pub g_supermultiplicative: bool,
    pub f_witnesses: Vec<Witness>,
}

impl SSLContrast {
    pub fn found(&self) -> bool {
        !self.g_witnesses.is_empty()
    }
}

/// Tries each ceiling in turn until `g` shows a multiplicativity failure.
pub fn ssl_contrast(l: &Lattice, ceilings: &[u64]) -> Result<SSLContrast> {
    if ceilings.is_empty() {
        return Err(Error::Precondition("no ceiling given".into()));
    }
    let mut range = 0;
    let mut g_witnesses = vec![];
    let mut g_super = true;
    for &n in ceilings {
        let g = ssl_table(l, n)?.series();
        g_witnesses = check_multiplicative(&g);
        g_super = check_supermultiplicative(&g).is_none();
        range = n;
        if !g_witnesses.is_empty() {
            break;
        }
    }
    let table = multiplicity_table(&enumerate_auto(l, range)?, &PointGroup::of(l)?)?;
    let f_witnesses = check_multiplicative(&table.series(Which::F)?);
    Ok(SSLContrast {
        lattice: lattice_label(l),
        ceilings: ceilings.to_vec(),
        range,
        g_witnesses,
        g_supermultiplicative: g_super,
        f_witnesses,
    })
}
