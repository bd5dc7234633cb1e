//! Gadgets turning 0/1 vectors into permutations whose LCS encodes inner
//! products.
//!
//! Layering, bottom to top:
//!
//! * coordinate gadgets: length 3, `LCS(C_A(x), C_B(y)) = 2 - xy`;
//! * vector gadgets: `d` coordinate gadgets on disjoint symbol blocks,
//!   `LCS = 2d - <a, b>`;
//! * normalized gadgets: a shared run `P` of `2d - 1` symbols prepended (side A)
//!   or appended (side B), so the LCS is `2d` for orthogonal pairs and `2d - 1`
//!   otherwise;
//! * OR gadgets `f`, `g`: `n^2` normalized gadgets laid out so that block
//!   `(i, j)` of `f(A)` only aligns with block `(i, j)` of `g(B)`, which pairs
//!   `a_i` with `b_j`.
//!
//! Symbol ranges are fixed: coordinate block `i` (1-based) uses `3i-2..=3i`,
//! `P` uses `3d+1..=5d-1`, and OR block `(i, j)` is shifted by
//! `((i-1)n + (j-1))(5d-1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Perm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("vectors must have dimension at least 1")]
    ZeroDimension,
    #[error("vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid bit character {0:?}")]
    BadBit(char),
}

/// A vector in `{0,1}^d`, `d >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BinaryVector(Vec<u8>);

impl BinaryVector {
    pub fn new(bits: Vec<u8>) -> Result<Self, VectorError> {
        if bits.is_empty() {
            return Err(VectorError::ZeroDimension);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(VectorError::BadBit(char::from(b'0' + b.min(9))));
        }
        Ok(Self(bits))
    }

    pub fn zeros(d: usize) -> Result<Self, VectorError> {
        Self::new(vec![0; d])
    }

    pub fn ones(d: usize) -> Result<Self, VectorError> {
        Self::new(vec![1; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn inner(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| **a & **b == 1).count()
    }

    /// Coordinate-wise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

impl FromStr for BinaryVector {
    type Err = VectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(VectorError::BadBit(other)),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(bits)
    }
}

impl TryFrom<String> for BinaryVector {
    type Error = VectorError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BinaryVector> for String {
    fn from(v: BinaryVector) -> Self {
        v.to_string()
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

/// An indexed family of vectors of one common dimension. Duplicates are
/// allowed; the family may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawVectorSet", into = "RawVectorSet")]
pub struct VectorSet {
    dim: usize,
    vectors: Vec<BinaryVector>,
}

#[derive(Serialize, Deserialize)]
struct RawVectorSet {
    dim: usize,
    vectors: Vec<BinaryVector>,
}

impl TryFrom<RawVectorSet> for VectorSet {
    type Error = VectorError;

    fn try_from(raw: RawVectorSet) -> Result<Self, Self::Error> {
        VectorSet::with_dim(raw.dim, raw.vectors)
    }
}

impl From<VectorSet> for RawVectorSet {
    fn from(v: VectorSet) -> Self {
        RawVectorSet { dim: v.dim, vectors: v.vectors }
    }
}

impl VectorSet {
    /// Infers the dimension from the first vector; an empty family is rejected
    /// here since it has none (use [`VectorSet::with_dim`]).
    pub fn new(vectors: Vec<BinaryVector>) -> Result<Self, VectorError> {
        let dim = vectors.first().map(BinaryVector::dim).ok_or(VectorError::ZeroDimension)?;
        Self::with_dim(dim, vectors)
    }

    pub fn with_dim(dim: usize, vectors: Vec<BinaryVector>) -> Result<Self, VectorError> {
        if dim == 0 {
            return Err(VectorError::ZeroDimension);
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(VectorError::DimensionMismatch { expected: dim, found: v.dim() });
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinaryVector> {
        self.vectors.iter()
    }

    pub fn vectors(&self) -> &[BinaryVector] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &BinaryVector {
        &self.vectors[i]
    }

    pub fn push(&mut self, v: BinaryVector) -> Result<(), VectorError> {
        if v.dim() != self.dim {
            return Err(VectorError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        self.vectors.push(v);
        Ok(())
    }

    /// `{ v ⊙ w : w in self }`, in this set's order.
    pub fn masked_by(&self, v: &BinaryVector) -> VectorSet {
        VectorSet { dim: self.dim, vectors: self.vectors.iter().map(|w| v.hadamard(w)).collect() }
    }

    /// Number of index pairs `(i, j)` with `<self_i, other_j> = 0`.
    pub fn orthogonal_pairs(&self, other: &VectorSet) -> usize {
        self.iter()
            .map(|a| other.iter().filter(|b| a.inner(b) == 0).count())
            .sum()
    }
}

/// Which side of the reduction a gadget is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

pub fn coordinate_gadget(side: Side, bit: bool) -> Perm {
    let s: [Symbol; 3] = match (side, bit) {
        (Side::A, false) => [1, 2, 3],
        (Side::A, true) => [3, 1, 2],
        (Side::B, false) => [1, 3, 2],
        (Side::B, true) => [2, 1, 3],
    };
    Perm::from_vec_unchecked(s.to_vec())
}

fn vector_symbols(side: Side, v: &BinaryVector) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(3 * v.dim());
    for (i, &b) in v.bits().iter().enumerate() {
        let shift = 3 * i as Symbol;
        out.extend(coordinate_gadget(side, b == 1).as_slice().iter().map(|s| s + shift));
    }
    out
}

/// Length `3d`; `LCS(V_A(a), V_B(b)) = 2d - <a, b>`.
pub fn vector_gadget(side: Side, v: &BinaryVector) -> Perm {
    Perm::from_vec_unchecked(vector_symbols(side, v))
}

/// Length `5d - 1`; LCS of an A/B pair is `2d` iff the vectors are orthogonal,
/// `2d - 1` otherwise.
pub fn normalized_gadget(side: Side, v: &BinaryVector) -> Perm {
    let d = v.dim() as Symbol;
    let pad = (3 * d + 1)..=(5 * d - 1);
    let core = vector_symbols(side, v);
    let out: Vec<Symbol> = match side {
        Side::A => pad.chain(core).collect(),
        Side::B => core.into_iter().chain(pad).collect(),
    };
    Perm::from_vec_unchecked(out)
}

fn or_gadget(t: &VectorSet, side: Side) -> Perm {
    let n = t.len();
    let v = (5 * t.dim() - 1) as Symbol;
    let blocks: Vec<Vec<Symbol>> = t
        .iter()
        .map(|vec| normalized_gadget(side, vec).into_vec())
        .collect();
    let mut out = Vec::with_capacity(n * n * v as usize);
    for i in 0..n {
        for j in 0..n {
            let shift = (i * n + j) as Symbol * v;
            let src = match side {
                Side::A => &blocks[i],
                Side::B => &blocks[j],
            };
            out.extend(src.iter().map(|s| s + shift));
        }
    }
    Perm::from_vec_unchecked(out)
}

/// Each normalized A-gadget repeated `n` times in a row, rows concatenated.
pub fn or_gadget_f(t: &VectorSet) -> Perm {
    or_gadget(t, Side::A)
}

/// The sequence of all normalized B-gadgets, repeated `n` times.
pub fn or_gadget_g(t: &VectorSet) -> Perm {
    or_gadget(t, Side::B)
}
