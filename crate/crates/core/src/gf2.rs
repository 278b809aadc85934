//! Linear algebra over the two-element field.
//!
//! Vectors and square matrices are bit-packed: a vector of dimension `n ≤ 64`
//! is a single `u64`, a matrix is one word per row. Matrices act on column
//! vectors, so `(A·B)v = A(Bv)`; this is the functional composition order used
//! for mapping-class words throughout the crate.

use std::fmt;

use thiserror::Error;

/// Largest supported dimension (one machine word per row).
pub const MAX_DIM: usize = 64;

/// Iteration cap for [`BitMat::order`].
pub const ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("no power up to {ORDER_CAP} equals the identity")]
    OrderCapExceeded,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[inline]
fn mask(dim: usize) -> u64 {
    if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

fn check_dim(dim: usize) -> Result<(), Gf2Error> {
    if dim == 0 || dim > MAX_DIM {
        Err(Gf2Error::BadDimension(dim))
    } else {
        Ok(())
    }
}

/// A vector in `GF(2)^dim`; coordinate `i` (0-based) is bit `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    dim: usize,
    bits: u64,
}

impl BitVec {
    pub fn zero(dim: usize) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        Ok(Self { dim, bits: 0 })
    }

    /// Builds a vector from raw bits; bits above `dim` are rejected.
    pub fn from_bits(dim: usize, bits: u64) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if bits & !mask(dim) != 0 {
            return Err(Gf2Error::IndexOutOfRange {
                index: 63 - bits.leading_zeros() as usize,
                dim,
            });
        }
        Ok(Self { dim, bits })
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn unit(dim: usize, index: usize) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Gf2Error::IndexOutOfRange { index, dim });
        }
        Ok(Self {
            dim,
            bits: 1 << index,
        })
    }

    /// Sum of the standard basis vectors at the given 0-based positions.
    /// Repeated positions cancel.
    pub fn from_indices(dim: usize, indices: &[usize]) -> Result<Self, Gf2Error> {
        let mut v = Self::zero(dim)?;
        for &i in indices {
            v = v.add(&Self::unit(dim, i)?)?;
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        index < self.dim && (self.bits >> index) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// 0-based positions of the set coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.get(i)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        same_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            bits: self.bits ^ other.bits,
        })
    }

    /// The bilinear form `Σ uᵢvᵢ mod 2`.
    pub fn dot(&self, other: &Self) -> Result<bool, Gf2Error> {
        same_dim(self.dim, other.dim)?;
        Ok(parity(self.bits & other.bits))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.dim {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// `dot(u, v)` as a free function.
pub fn dot(u: &BitVec, v: &BitVec) -> Result<bool, Gf2Error> {
    u.dot(v)
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

fn same_dim(left: usize, right: usize) -> Result<(), Gf2Error> {
    if left == right {
        Ok(())
    } else {
        Err(Gf2Error::DimensionMismatch { left, right })
    }
}

/// A square matrix over `GF(2)`, row-major, one word per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMat {
    dim: usize,
    rows: Vec<u64>,
}

impl BitMat {
    pub fn identity(dim: usize) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            rows: (0..dim).map(|i| 1u64 << i).collect(),
        })
    }

    pub fn zero(dim: usize) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            rows: vec![0; dim],
        })
    }

    pub fn from_rows(rows: &[BitVec]) -> Result<Self, Gf2Error> {
        let dim = rows.len();
        check_dim(dim)?;
        for r in rows {
            same_dim(dim, r.dim)?;
        }
        Ok(Self {
            dim,
            rows: rows.iter().map(|r| r.bits).collect(),
        })
    }

    pub fn from_row_bits(dim: usize, rows: Vec<u64>) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        same_dim(dim, rows.len())?;
        if rows.iter().any(|r| r & !mask(dim) != 0) {
            return Err(Gf2Error::IndexOutOfRange { index: dim, dim });
        }
        Ok(Self { dim, rows })
    }

    /// Matrix with columns given by the images of the standard basis.
    pub fn from_columns(cols: &[BitVec]) -> Result<Self, Gf2Error> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    /// Permutation matrix sending `e_i` to `e_{perm[i]}` (0-based).
    pub fn permutation(perm: &[usize]) -> Result<Self, Gf2Error> {
        let dim = perm.len();
        check_dim(dim)?;
        let mut seen = vec![false; dim];
        let mut rows = vec![0u64; dim];
        for (i, &p) in perm.iter().enumerate() {
            if p >= dim || seen[p] {
                return Err(Gf2Error::IndexOutOfRange { index: p, dim });
            }
            seen[p] = true;
            rows[p] |= 1 << i;
        }
        Ok(Self { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec {
            dim: self.dim,
            bits: self.rows[i],
        }
    }

    pub fn row_bits(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    /// Image of `e_j`, i.e. column `j`.
    pub fn column(&self, j: usize) -> BitVec {
        let mut bits = 0;
        for (i, &r) in self.rows.iter().enumerate() {
            bits |= ((r >> j) & 1) << i;
        }
        BitVec {
            dim: self.dim,
            bits,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![0u64; self.dim];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut bits = r;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                rows[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        Self {
            dim: self.dim,
            rows,
        }
    }

    pub fn apply(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        same_dim(self.dim, v.dim)?;
        Ok(self.apply_bits(v.bits))
    }

    /// `apply` on raw bits without a dimension check.
    #[inline]
    pub fn apply_bits(&self, v: u64) -> BitVec {
        let mut bits = 0;
        for (i, &r) in self.rows.iter().enumerate() {
            bits |= u64::from(parity(r & v)) << i;
        }
        BitVec {
            dim: self.dim,
            bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Gf2Error> {
        same_dim(self.dim, other.dim)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= other.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Self {
            dim: self.dim,
            rows,
        }
    }

    /// Gauss-Jordan elimination on `[M | I]`; the pivot for column `c` is the
    /// first remaining row with bit `c` set.
    pub fn inverse(&self) -> Result<Self, Gf2Error> {
        let n = self.dim;
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for c in 0..n {
            let pivot = (c..n).find(|&r| (a[r] >> c) & 1 == 1).ok_or(Gf2Error::Singular)?;
            a.swap(c, pivot);
            inv.swap(c, pivot);
            for r in 0..n {
                if r != c && (a[r] >> c) & 1 == 1 {
                    a[r] ^= a[c];
                    inv[r] ^= inv[c];
                }
            }
        }
        Ok(Self { dim: n, rows: inv })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.dim {
            let Some(pivot) = (rank..rows.len()).find(|&r| (rows[r] >> c) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && (rows[r] >> c) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self {
            dim: self.dim,
            rows: (0..self.dim).map(|i| 1u64 << i).collect(),
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Least `k ≥ 1` with `M^k = I`, by direct iteration up to [`ORDER_CAP`].
    pub fn order(&self) -> Result<u64, Gf2Error> {
        if !self.is_invertible() {
            return Err(Gf2Error::Singular);
        }
        let mut power = self.clone();
        for k in 1..=ORDER_CAP {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.mul_unchecked(self);
        }
        Err(Gf2Error::OrderCapExceeded)
    }
}

impl fmt::Debug for BitMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMat({})[", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn mat_apply(m: &BitMat, v: &BitVec) -> Result<BitVec, Gf2Error> {
    m.apply(v)
}

pub fn mat_mul(a: &BitMat, b: &BitMat) -> Result<BitMat, Gf2Error> {
    a.mul(b)
}

pub fn mat_inverse(m: &BitMat) -> Result<BitMat, Gf2Error> {
    m.inverse()
}

pub fn mat_order(m: &BitMat) -> Result<u64, Gf2Error> {
    m.order()
}

pub fn rank(m: &BitMat) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(dim: usize, idx: &[usize]) -> BitVec {
        BitVec::from_indices(dim, idx).unwrap()
    }

    fn cycle(n: usize) -> BitMat {
        BitMat::permutation(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>()).unwrap()
    }

    fn transvection(a: &BitVec) -> BitMat {
        let cols: Vec<BitVec> = (0..a.dim())
            .map(|j| {
                let e = BitVec::unit(a.dim(), j).unwrap();
                if e.dot(a).unwrap() {
                    e.add(a).unwrap()
                } else {
                    e
                }
            })
            .collect();
        BitMat::from_columns(&cols).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(v(3, &[0, 1]).dot(&v(3, &[1, 2])).unwrap());
        let u = v(3, &[0, 2]);
        assert!(!u.dot(&u).unwrap());
        assert_eq!(
            v(3, &[0]).dot(&v(4, &[0])),
            Err(Gf2Error::DimensionMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn apply_examples() {
        let x = v(5, &[0, 3]);
        assert_eq!(BitMat::identity(5).unwrap().apply(&x).unwrap(), x);
        let swap = BitMat::permutation(&[1, 0, 2]).unwrap();
        assert_eq!(swap.apply(&v(3, &[0])).unwrap(), v(3, &[1]));
        let a = v(6, &[1, 4]);
        assert_eq!(transvection(&a).apply(&a).unwrap(), a);
        assert!(BitMat::identity(3).unwrap().apply(&v(4, &[])).is_err());
    }

    #[test]
    fn mul_examples() {
        let swap = BitMat::permutation(&[1, 0, 2]).unwrap();
        assert!(swap.mul(&swap).unwrap().is_identity());
        let m = cycle(7);
        assert_eq!(m.mul(&BitMat::identity(7).unwrap()).unwrap(), m);
        let t = transvection(&v(8, &[0, 3, 5, 6]));
        assert!(t.mul(&t).unwrap().is_identity());
    }

    #[test]
    fn inverse_and_singular() {
        let id = BitMat::identity(4).unwrap();
        assert_eq!(id.inverse().unwrap(), id);
        let t = transvection(&v(5, &[1, 2]));
        assert_eq!(t.inverse().unwrap(), t);
        assert_eq!(BitMat::zero(4).unwrap().inverse(), Err(Gf2Error::Singular));
        let c = cycle(9);
        assert!(c.mul(&c.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn order_examples() {
        assert_eq!(BitMat::identity(3).unwrap().order().unwrap(), 1);
        assert_eq!(cycle(13).order().unwrap(), 13);
        assert_eq!(transvection(&v(4, &[0, 1])).order().unwrap(), 2);
        assert_eq!(BitMat::zero(2).unwrap().order(), Err(Gf2Error::Singular));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMat::identity(6).unwrap().rank(), 6);
        assert_eq!(BitMat::zero(6).unwrap().rank(), 0);
        assert_eq!(transvection(&v(6, &[2, 3])).rank(), 6);
        let m = BitMat::from_rows(&[v(3, &[0, 1]), v(3, &[1, 2]), v(3, &[0, 2])]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn dimension_limits() {
        assert_eq!(BitVec::zero(0), Err(Gf2Error::BadDimension(0)));
        assert_eq!(BitVec::zero(65), Err(Gf2Error::BadDimension(65)));
        let full = BitMat::identity(64).unwrap();
        let x = BitVec::from_bits(64, u64::MAX).unwrap();
        assert_eq!(full.apply(&x).unwrap(), x);
    }

    #[test]
    fn transpose_and_columns() {
        let m = BitMat::from_rows(&[v(3, &[0, 2]), v(3, &[1]), v(3, &[0, 1])]).unwrap();
        assert_eq!(m.column(0), v(3, &[0, 2]));
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.apply(&v(3, &[0])).unwrap(), m.column(0));
    }
}
