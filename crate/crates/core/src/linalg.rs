//! Exact scalars and dense matrices over ℤ and ℚ, together with the
//! integer normal forms the lattice layer is built on.
//!
//! Lattice generators are always matrix *columns*.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision fraction, always stored reduced with positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, dropping `/1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    Rational::from_str(s).map_err(|_| Error::Parse(format!("invalid rational '{s}'")))
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("invalid integer '{s}'")))
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from a list of columns, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.entries[r * cols.len() + c] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Ok(IntMatrix::from_cols(self.rows, &cols))
    }

    pub fn scaled(&self, k: &BigInt) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.entries.iter().map(|v| v * k).collect())
    }

    /// gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|v| Rational::from_integer(v.clone())).collect(),
        )
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// True when the matrix is square and in the fixed column HNF shape:
    /// upper triangular, positive diagonal, `0 <= h[i][j] < h[i][i]` for `j > i`.
    pub fn is_hnf(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            let d = self.get(i, i);
            if !d.is_positive() {
                return false;
            }
            for j in 0..n {
                let v = self.get(i, j);
                if j < i && !v.is_zero() {
                    return false;
                }
                if j > i && (v.is_negative() || v >= d) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, entries }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        IntMatrix::from_i64(rows, cols, entries).to_rational()
    }

    /// `(1/den) * entries`.
    pub fn from_scaled_i64(rows: usize, cols: usize, den: i64, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&v| rat(v, den)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rational()
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn hcat(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Ok(RatMatrix::from_cols(self.rows, &cols))
    }

    pub fn scaled(&self, k: &Rational) -> RatMatrix {
        RatMatrix::new(self.rows, self.cols, self.entries.iter().map(|v| v * k).collect())
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix::new(self.rows, self.cols, self.entries.iter().map(|v| -v).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.is_integer())
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
    }

    /// Integer matrix of a matrix known to be integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix::new(self.rows, self.cols, self.entries.iter().map(|v| v.to_integer()).collect()))
    }

    /// Splits into `(q, N)` with `self = N / q`, `q` the least common denominator.
    pub fn split_denominator(&self) -> (BigInt, IntMatrix) {
        let q = self.denominator();
        let scaled = self.scaled(&Rational::from_integer(q.clone()));
        (q, scaled.to_integer().expect("scaled by lcm of denominators"))
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let pivot = a[k][k].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &pivot;
                for j in k..n {
                    let v = &factor * &a[k][j];
                    a[i][j] -= v;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, k);
            inv.swap(p, k);
            let pivot = a[k][k].clone();
            for j in 0..n {
                a[k][j] /= &pivot;
                inv[k][j] /= &pivot;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let factor = a[i][k].clone();
                for j in 0..n {
                    let va = &factor * &a[k][j];
                    a[i][j] -= va;
                    let vi = &factor * &inv[k][j];
                    inv[i][j] -= vi;
                }
            }
        }
        Ok(RatMatrix::new(n, n, inv.into_iter().flatten().collect()))
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Column echelon reduction by unimodular column operations.
///
/// Rows are visited in `row_order`; the k-th pivot found lands in column k,
/// is positive, and the entries of earlier pivot columns in its row are
/// reduced into `[0, pivot)`. Returns the transformed columns of `m`, the
/// matching columns of the unimodular transform, and the rank.
fn column_echelon(m: &IntMatrix, row_order: &[usize], track: bool) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let small: Option<Vec<Vec<i128>>> =
        (0..m.cols()).map(|c| m.col(c).iter().map(|v| v.to_i64().map(i128::from)).collect()).collect();
    if let Some(cols) = small {
        if let Some((images, transforms, rank)) = echelon_generic(cols, m.rows(), row_order, track) {
            let widen = |v: Vec<Vec<i128>>| v.into_iter().map(|c| c.into_iter().map(BigInt::from).collect()).collect();
            return (widen(images), widen(transforms), rank);
        }
    }
    let cols = (0..m.cols()).map(|c| m.col(c)).collect();
    echelon_generic(cols, m.rows(), row_order, track).expect("big integers do not overflow")
}

/// Integer arithmetic the echelon needs; `None` signals overflow.
trait EchelonInt: Clone + Ord {
    fn zero_val() -> Self;
    fn one_val() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_val(&self) -> Self;
    fn negated(&self) -> Option<Self>;
    /// Floor division by a positive divisor.
    fn floor_div(&self, d: &Self) -> Self;
    /// `self -= q·y`.
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Option<()>;
}

impl EchelonInt for i128 {
    fn zero_val() -> Self {
        0
    }
    fn one_val() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn floor_div(&self, d: &Self) -> Self {
        self.div_euclid(*d)
    }
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Option<()> {
        *self = self.checked_sub(q.checked_mul(*y)?)?;
        Some(())
    }
}

impl EchelonInt for BigInt {
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn one_val() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn floor_div(&self, d: &Self) -> Self {
        self.div_floor(d)
    }
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Option<()> {
        *self -= q * y;
        Some(())
    }
}

type Echelon<T> = (Vec<Vec<T>>, Vec<Vec<T>>, usize);

fn echelon_generic<T: EchelonInt>(images: Vec<Vec<T>>, rows: usize, row_order: &[usize], track: bool) -> Option<Echelon<T>> {
    let k = images.len();
    // each column carries its image (first `rows` entries) and, if tracked,
    // its transform column
    let mut cols: Vec<Vec<T>> = images
        .into_iter()
        .enumerate()
        .map(|(c, mut v)| {
            if track {
                v.extend((0..k).map(|r| if r == c { T::one_val() } else { T::zero_val() }));
            }
            v
        })
        .collect();

    let sub_col = |cols: &mut Vec<Vec<T>>, target: usize, src: usize, q: &T| -> Option<()> {
        if q.is_nil() {
            return Some(());
        }
        let (a, b) = if target < src {
            let (lo, hi) = cols.split_at_mut(src);
            (&mut lo[target], &hi[0])
        } else {
            let (lo, hi) = cols.split_at_mut(target);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            if !y.is_nil() {
                x.sub_mul(q, y)?;
            }
        }
        Some(())
    };

    let mut rank = 0;
    for &i in row_order {
        if rank == k {
            break;
        }
        loop {
            let best = (rank..k).filter(|&j| !cols[j][i].is_nil()).min_by_key(|&j| cols[j][i].abs_val());
            let Some(best) = best else { break };
            cols.swap(rank, best);
            if cols[rank][i].is_neg() {
                for x in cols[rank].iter_mut() {
                    *x = x.negated()?;
                }
            }
            let pivot = cols[rank][i].clone();
            let mut done = true;
            for j in rank + 1..k {
                if cols[j][i].is_nil() {
                    continue;
                }
                let q = cols[j][i].floor_div(&pivot);
                sub_col(&mut cols, j, rank, &q)?;
                if !cols[j][i].is_nil() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rank < k && !cols[rank][i].is_nil() {
            let pivot = cols[rank][i].clone();
            for c in 0..rank {
                let q = cols[c][i].floor_div(&pivot);
                sub_col(&mut cols, c, rank, &q)?;
            }
            rank += 1;
        }
    }

    let (images, transforms) = cols
        .into_iter()
        .map(|mut v| {
            let t = if track { v.split_off(rows) } else { vec![] };
            (v, t)
        })
        .unzip();
    Some((images, transforms, rank))
}

/// Column Hermite normal form of a `d x k` integer matrix of rank `d`.
///
/// Returns `(H, U)` with `H` the unique `d x d` upper triangular basis of the
/// column span and `U` unimodular (`k x k`) such that `M U = [H | 0]`.
pub fn hnf(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let d = m.rows();
    let k = m.cols();
    if k < d {
        return Err(Error::RankDeficient);
    }
    let order: Vec<usize> = (0..d).rev().collect();
    let (images, transforms, rank) = column_echelon(m, &order, true);
    if rank < d {
        return Err(Error::RankDeficient);
    }
    // pivot for row d-1 sits in column 0: reverse the pivot block
    let mut h_cols: Vec<Vec<BigInt>> = images[..d].to_vec();
    h_cols.reverse();
    let mut u_cols: Vec<Vec<BigInt>> = transforms[..d].to_vec();
    u_cols.reverse();
    u_cols.extend(transforms[d..].iter().cloned());
    Ok((IntMatrix::from_cols(d, &h_cols), IntMatrix::from_cols(k, &u_cols)))
}

/// The `H` of [`hnf`] alone, without tracking the transform.
pub fn hnf_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let d = m.rows();
    if m.cols() < d {
        return Err(Error::RankDeficient);
    }
    let order: Vec<usize> = (0..d).rev().collect();
    let (images, _, rank) = column_echelon(m, &order, false);
    if rank < d {
        return Err(Error::RankDeficient);
    }
    let mut h_cols: Vec<Vec<BigInt>> = images[..d].to_vec();
    h_cols.reverse();
    Ok(IntMatrix::from_cols(d, &h_cols))
}

/// Basis (as columns) of the integer kernel `{x in Z^k : M x = 0}`.
///
/// The basis is put in column echelon form (pivots top-down, positive), so
/// the output is canonical for the kernel lattice. A trivial kernel yields a
/// `k x 0` matrix.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let k = m.cols();
    let order: Vec<usize> = (0..m.rows()).collect();
    let (_, transforms, rank) = column_echelon(m, &order, true);
    let basis: Vec<Vec<BigInt>> = transforms[rank..].to_vec();
    if basis.is_empty() {
        return IntMatrix::zeros(k, 0);
    }
    let raw = IntMatrix::from_cols(k, &basis);
    let order: Vec<usize> = (0..k).collect();
    let (images, _, r) = column_echelon(&raw, &order, false);
    IntMatrix::from_cols(k, &images[..r])
}

pub fn det_int(m: &IntMatrix) -> Result<Rational> {
    m.det().map(Rational::from_integer)
}

pub fn det_rat(m: &RatMatrix) -> Result<Rational> {
    m.det()
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    m.inverse()
}

/// Converts a small exact integer to `u64`, failing loudly on overflow.
pub fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::Overflow(format!("{v} does not fit u64")))
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|r| (0..self.cols).map(|c| format_rational(self.get(r, c))).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|row| row.len() != raw.cols) {
            return Err(D::Error::custom("entries do not match rows/cols"));
        }
        let entries = raw
            .entries
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(RatMatrix::new(raw.rows, raw.cols, entries))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|row| row.len() != raw.cols) {
            return Err(D::Error::custom("entries do not match rows/cols"));
        }
        let entries = raw
            .entries
            .iter()
            .flatten()
            .map(|s| parse_int(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(IntMatrix::new(raw.rows, raw.cols, entries))
    }
}
