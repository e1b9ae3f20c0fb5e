//! Full-rank lattices `Γ = (1/q) · H · ℤ^d` in canonical form and the
//! lattice algebra (index, intersection, sum, scaling, linear images).
//!
//! The canonical form is the column HNF `H` of `q·B` with `q` minimal, so
//! two lattices are equal as point sets exactly when their representations
//! are identical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{hnf_basis, integer_kernel, IntMatrix, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    dim: usize,
    den: BigInt,
    mat: IntMatrix,
}

impl Lattice {
    /// Canonical lattice spanned by the columns of a nonsingular `d x d` basis.
    pub fn from_basis(basis: &RatMatrix) -> Result<Lattice> {
        if !basis.is_square() {
            return Err(Error::NotSquare { rows: basis.rows(), cols: basis.cols() });
        }
        if basis.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Self::from_generators(basis)
    }

    /// Canonical lattice generated by the columns of a `d x k` matrix of rank `d`.
    pub fn from_generators(gens: &RatMatrix) -> Result<Lattice> {
        let (q, m) = gens.split_denominator();
        Self::from_scaled_generators(q, &m)
    }

    /// Lattice generated by the columns of `(1/q)·m`.
    fn from_scaled_generators(q: BigInt, m: &IntMatrix) -> Result<Lattice> {
        let h = hnf_basis(m)?;
        let g = h.content().gcd(&q);
        let (den, mat) = if g.is_one() {
            (q, h)
        } else {
            let entries = h.entries().iter().map(|v| v / &g).collect();
            (q / &g, IntMatrix::new(h.rows(), h.cols(), entries))
        };
        Ok(Lattice { dim: m.rows(), den, mat })
    }

    pub fn from_int_basis(mat: &IntMatrix) -> Result<Lattice> {
        Self::from_basis(&mat.to_rational())
    }

    /// Diagonal lattice `a₁ℤ × … × a_dℤ`.
    pub fn diagonal(scales: &[i64]) -> Result<Lattice> {
        let d = scales.len();
        let mut m = IntMatrix::zeros(d, d);
        for (i, &s) in scales.iter().enumerate() {
            m.set(i, i, BigInt::from(s));
        }
        Self::from_int_basis(&m)
    }

    /// `ℤ^d`.
    pub fn integer(dim: usize) -> Lattice {
        Lattice { dim, den: BigInt::one(), mat: IntMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn mat(&self) -> &IntMatrix {
        &self.mat
    }

    /// Basis matrix `(1/q) · H` (columns are the basis vectors).
    pub fn basis(&self) -> RatMatrix {
        self.mat.to_rational().scaled(&Rational::new(BigInt::one(), self.den.clone()))
    }

    /// Unit cell volume `|det B|`.
    pub fn volume(&self) -> Rational {
        let d = self.mat.det().expect("square");
        Rational::new(d, num_traits::pow(self.den.clone(), self.dim))
    }

    /// Gram matrix `BᵀB`.
    pub fn gram(&self) -> RatMatrix {
        let b = self.basis();
        b.transpose().mul(&b).expect("square")
    }

    fn check_dim(&self, other: &Lattice) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Coordinates of `v` with respect to this lattice's basis.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.len()));
        }
        let col = RatMatrix::from_cols(self.dim, &[v.to_vec()]);
        Ok(self.basis().inverse()?.mul(&col)?.col(0))
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.iter().all(|x| x.is_integer()))
    }

    /// `self ⊆ other`, by back substitution against the triangular basis
    /// of `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other)?;
        let d = self.dim;
        // q₂·M₁ ∈ q₁·M₂·ℤ^d
        let target = self.mat.scaled(&other.den);
        let lattice = other.mat.scaled(&self.den);
        for j in 0..d {
            let mut v: Vec<BigInt> = (0..d).map(|i| target.get(i, j).clone()).collect();
            for i in (0..d).rev() {
                let (x, r) = v[i].div_rem(lattice.get(i, i));
                if !r.is_zero() {
                    return Ok(false);
                }
                if !x.is_zero() {
                    for (t, vt) in v.iter_mut().enumerate().take(i + 1) {
                        *vt -= &x * lattice.get(t, i);
                    }
                }
            }
        }
        Ok(true)
    }

    fn diagonal_product(&self) -> BigInt {
        (0..self.dim).map(|i| self.mat.get(i, i).clone()).product()
    }

    /// `[other : self]` for `self ⊆ other`.
    pub fn index_in(&self, other: &Lattice) -> Result<u64> {
        if !self.is_sublattice_of(other)? {
            return Err(Error::NotSublattice);
        }
        let d = self.dim;
        let num = self.diagonal_product() * num_traits::pow(other.den.clone(), d);
        let den = other.diagonal_product() * num_traits::pow(self.den.clone(), d);
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::Internal(format!("non-integral index {num}/{den}")));
        }
        q.to_u64().ok_or_else(|| Error::Overflow("lattice index".into()))
    }

    /// Set intersection, from the integer kernel of `[q₂·M₁ | −q₁·M₂]`.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other)?;
        if self == other {
            return Ok(self.clone());
        }
        let d = self.dim;
        let left = self.mat.scaled(&other.den);
        let right = other.mat.scaled(&(-self.den.clone()));
        let kernel = integer_kernel(&left.hcat(&right)?);
        if kernel.cols() != d {
            return Err(Error::Internal(format!("intersection kernel has rank {}", kernel.cols())));
        }
        let x_rows: Vec<BigInt> = (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).map(|(r, c)| kernel.get(r, c).clone()).collect();
        let x = IntMatrix::new(d, d, x_rows);
        Lattice::from_scaled_generators(self.den.clone(), &self.mat.mul(&x)?)
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other)?;
        let q = self.den.lcm(&other.den);
        let gens = self.mat.scaled(&(&q / &self.den)).hcat(&other.mat.scaled(&(&q / &other.den)))?;
        Lattice::from_scaled_generators(q, &gens)
    }

    /// `{c·v : v ∈ self}` for positive rational `c`.
    pub fn scale(&self, c: &Rational) -> Result<Lattice> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        let mat = self.mat.scaled(c.numer());
        Lattice::from_scaled_generators(&self.den * c.denom(), &mat)
    }

    pub fn scale_int(&self, c: u64) -> Result<Lattice> {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Image `R·Γ` under a nonsingular linear map.
    pub fn transform(&self, r: &RatMatrix) -> Result<Lattice> {
        if r.rows() != self.dim || r.cols() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, r.rows()));
        }
        let (q, m) = r.split_denominator();
        Lattice::from_scaled_generators(q * &self.den, &m.mul(&self.mat)?).map_err(|e| match e {
            Error::RankDeficient => Error::Singular,
            e => e,
        })
    }

    /// Whether `self ∩ other` has finite index in both. Rational lattices of
    /// equal dimension always are.
    pub fn commensurate(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other)?;
        Ok(true)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.mat)
        } else {
            write!(f, "(1/{}){}", self.den, self.mat)
        }
    }
}

pub fn lattice_from_basis(b: &RatMatrix) -> Result<Lattice> {
    Lattice::from_basis(b)
}

pub fn is_sublattice(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    l1.is_sublattice_of(l2)
}

pub fn index(sub: &Lattice, l: &Lattice) -> Result<u64> {
    sub.index_in(l)
}

pub fn intersect(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    l1.intersect(l2)
}

pub fn sum(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    l1.sum(l2)
}

pub fn scale(l: &Lattice, c: &Rational) -> Result<Lattice> {
    l.scale(c)
}

pub fn transform(l: &Lattice, r: &RatMatrix) -> Result<Lattice> {
    l.transform(r)
}

pub fn commensurate(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    l1.commensurate(l2)
}

/// Named lattices used throughout the examples and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// ℤ²
    Square,
    /// 2ℤ × 3ℤ
    TwoByThree,
    /// ℤ × 5ℤ
    OneByFive,
    /// ℤ³
    Cubic,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Square, Preset::TwoByThree, Preset::OneByFive, Preset::Cubic];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Square => "square",
            Preset::TwoByThree => "2zx3z",
            Preset::OneByFive => "zx5z",
            Preset::Cubic => "cubic",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn lattice(self) -> Lattice {
        match self {
            Preset::Square => Lattice::integer(2),
            Preset::TwoByThree => Lattice::diagonal(&[2, 3]).expect("nonsingular"),
            Preset::OneByFive => Lattice::diagonal(&[1, 5]).expect("nonsingular"),
            Preset::Cubic => Lattice::integer(3),
        }
    }

    /// Preset whose lattice equals `l`, if any.
    pub fn identify(l: &Lattice) -> Option<Preset> {
        Self::ALL.into_iter().find(|p| &p.lattice() == l)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    dim: usize,
    den: serde_json::Value,
    mat: Vec<Vec<String>>,
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let den = match self.den.to_u64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(self.den.to_string()),
        };
        LatticeJson {
            dim: self.dim,
            den,
            mat: self.mat.columns().into_iter().map(|c| c.iter().map(|v| v.to_string()).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LatticeJson::deserialize(d)?;
        let den: BigInt = match &raw.den {
            serde_json::Value::Number(n) => n.as_u64().map(BigInt::from).ok_or_else(|| D::Error::custom("den must be a positive integer"))?,
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom)?,
            _ => return Err(D::Error::custom("den must be an integer")),
        };
        if !den.is_positive() {
            return Err(D::Error::custom("den must be positive"));
        }
        if raw.mat.len() != raw.dim || raw.mat.iter().any(|c| c.len() != raw.dim) {
            return Err(D::Error::custom("mat must hold dim columns of length dim"));
        }
        let cols = raw
            .mat
            .iter()
            .map(|c| c.iter().map(|v| v.parse::<BigInt>().map_err(D::Error::custom)).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let basis = IntMatrix::from_cols(raw.dim, &cols).to_rational().scaled(&Rational::new(BigInt::one(), den));
        // re-canonicalize so hand-written input is accepted in any basis
        Lattice::from_basis(&basis).map_err(D::Error::custom)
    }
}
