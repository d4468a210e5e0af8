//! Exact linear algebra over F₂.
//!
//! Vectors are row vectors and matrices act on the right: `x ↦ xM`, row `i`
//! of a matrix is the image of `e_i`. Coordinates are 1-based in every public
//! method. A vector `v ∈ F₂ⁿ` is stored as an `n`-bit word with coordinate 1 in
//! the most significant position, so the integer value of `v` is its
//! big-endian bit string read in base 2 (`e_n = 1`, `e_1 = 2ⁿ⁻¹`). This integer
//! is also the point index used by permutations of `V`.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// Largest supported dimension (permutation tables of 2¹⁶ points).
pub const MAX_DIM: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: u8,
    bits: u32,
}

#[inline]
fn mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

impl BitVector {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, 0, MAX_DIM));
        }
        if bits & !mask(n) != 0 {
            return Err(Error::Parse(format!("{bits} does not fit in {n} bits")));
        }
        Ok(BitVector { n: n as u8, bits })
    }

    /// The vector whose integer value is `index`. Panics if out of range.
    #[inline]
    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(n <= MAX_DIM && index >> n == 0, "index {index} out of range for n = {n}");
        BitVector { n: n as u8, bits: index as u32 }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_index(n, 0)
    }

    /// The canonical basis vector `e_i`, `1 ≤ i ≤ n`.
    pub fn unit(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "coordinate {i} out of range for n = {n}");
        BitVector { n: n as u8, bits: 1 << (n - i) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// `v^{(i)}`.
    #[inline]
    pub fn coord(&self, i: usize) -> bool {
        debug_assert!((1..=self.dim()).contains(&i));
        (self.bits >> (self.dim() - i)) & 1 == 1
    }

    pub fn with_coord(mut self, i: usize, value: bool) -> Self {
        assert!((1..=self.dim()).contains(&i));
        let bit = 1 << (self.dim() - i);
        if value {
            self.bits |= bit;
        } else {
            self.bits &= !bit;
        }
        self
    }

    /// `v^{(i:j)}`, the coordinates `i..=j` as a vector of dimension `j - i + 1`.
    pub fn slice(&self, i: usize, j: usize) -> BitVector {
        assert!(1 <= i && i <= j + 1 && j <= self.dim(), "bad slice {i}:{j}");
        let len = j + 1 - i;
        let bits = (self.bits >> (self.dim() - j)) & mask(len);
        BitVector { n: len as u8, bits }
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let n = self.dim() + other.dim();
        assert!(n <= MAX_DIM);
        BitVector { n: n as u8, bits: (self.bits << other.dim()) | other.bits }
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Position (1-based) of the first nonzero coordinate.
    pub fn leading(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.dim() - (31 - self.bits.leading_zeros() as usize))
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.n, other.n);
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// All vectors of `F₂ⁿ` in increasing integer order.
    pub fn all(n: usize) -> impl Iterator<Item = BitVector> {
        (0..1usize << n).map(move |i| BitVector::from_index(n, i))
    }
}

impl Add for BitVector {
    type Output = BitVector;

    #[inline]
    fn add(self, rhs: BitVector) -> BitVector {
        debug_assert_eq!(self.n, rhs.n, "dimension mismatch in vector addition");
        BitVector { n: self.n, bits: self.bits ^ rhs.bits }
    }
}

impl AddAssign for BitVector {
    #[inline]
    fn add_assign(&mut self, rhs: BitVector) {
        *self = *self + rhs;
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.dim() {
            f.write_str(if self.coord(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_DIM {
            return Err(Error::Parse(format!("bit string of invalid length: {s:?}")));
        }
        let mut bits = 0u32;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::Parse(format!("invalid bit string {s:?}"))),
            }
        }
        BitVector::new(s.len(), bits)
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense matrix over F₂ stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    cols: u8,
    rows: Vec<u32>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_DIM + 1, "too many columns");
        BitMatrix { cols: cols as u8, rows: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 1..=n {
            m.set(i, i, true);
        }
        m
    }

    /// `1_n + E_{i,j}` for `i ≠ j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        assert_ne!(i, j, "elementary matrix needs i ≠ j");
        let mut m = Self::identity(n);
        m.set(i, j, true);
        m
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.dim());
        for r in rows {
            check_dim(cols, r.dim())?;
        }
        Ok(BitMatrix { cols: cols as u8, rows: rows.iter().map(|r| r.bits).collect() })
    }

    /// Builds a square matrix from the images of the basis vectors under `f`.
    pub fn from_fn(n: usize, f: impl Fn(BitVector) -> BitVector) -> Self {
        let rows: Vec<_> = (1..=n).map(|i| f(BitVector::unit(n, i))).collect();
        Self::from_rows(&rows).expect("images share a dimension")
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols as usize
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Row `i` (1-based).
    pub fn row(&self, i: usize) -> BitVector {
        BitVector { n: self.cols, bits: self.rows[i - 1] }
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        self.rows.iter().map(move |&bits| BitVector { n: self.cols, bits })
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i - 1] >> (self.ncols() - j)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(j >= 1 && j <= self.ncols());
        let bit = 1 << (self.ncols() - j);
        if value {
            self.rows[i - 1] |= bit;
        } else {
            self.rows[i - 1] &= !bit;
        }
    }

    /// `xM`.
    #[inline]
    pub fn mul_vec(&self, x: BitVector) -> BitVector {
        assert_eq!(x.dim(), self.nrows(), "vector and matrix dimensions differ");
        let mut acc = 0u32;
        let n = self.nrows();
        let mut bits = x.bits;
        while bits != 0 {
            let low = bits.trailing_zeros() as usize;
            acc ^= self.rows[n - 1 - low];
            bits &= bits - 1;
        }
        BitVector { n: self.cols, bits: acc }
    }

    /// The matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols(), other.nrows(), "matrix dimensions differ");
        BitMatrix {
            cols: other.cols,
            rows: self.rows().map(|r| other.mul_vec(r).bits).collect(),
        }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.nrows(), self.ncols()), (other.nrows(), other.ncols()));
        BitMatrix {
            cols: self.cols,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.ncols(), self.nrows());
        for i in 1..=self.nrows() {
            for j in 1..=self.ncols() {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == BitMatrix::identity(self.nrows())
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (1..=self.nrows()).all(|i| {
                let r = self.row(i);
                r.leading() == Some(i)
            })
    }

    pub fn rank(&self) -> usize {
        Subspace::span_unchecked(self.ncols(), self.rows()).dim()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.nrows()
    }

    pub fn inverse(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let n = self.nrows();
        // Gauss-Jordan on the augmented rows (M | 1).
        let mut aug: Vec<u32> = (0..n).map(|i| (self.rows[i] << n) | (1 << (n - 1 - i))).collect();
        for col in 0..n {
            let bit = 1u32 << (2 * n - 1 - col);
            let pivot = (col..n).find(|&r| aug[r] & bit != 0).ok_or(Error::Singular)?;
            aug.swap(col, pivot);
            let p = aug[col];
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && *row & bit != 0 {
                    *row ^= p;
                }
            }
        }
        Ok(BitMatrix { cols: n as u8, rows: aug.iter().map(|r| r & mask(n)).collect() })
    }

    /// The `nr × nc` block whose top-left entry is `(r0, c0)` (1-based).
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> BitMatrix {
        assert!(r0 + nr <= self.nrows() + 1 && c0 + nc <= self.ncols() + 1);
        let rows = (r0..r0 + nr)
            .map(|i| if nc == 0 { 0 } else { self.row(i).slice(c0, c0 + nc - 1).bits })
            .collect();
        BitMatrix { cols: nc as u8, rows }
    }

    /// Writes `b` into `self` with its top-left entry at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &BitMatrix) {
        for i in 1..=b.nrows() {
            for j in 1..=b.ncols() {
                self.set(r0 + i - 1, c0 + j - 1, b.get(i, j));
            }
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.rows().enumerate() {
            if k > 0 {
                f.write_str("/")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({self})")
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s.split('/').map(str::parse).collect::<Result<Vec<BitVector>>>()?;
        BitMatrix::from_rows(&rows)
    }
}

/// A subspace of `F₂ⁿ`, stored as its unique reduced row-echelon basis.
///
/// Pivots are the leading (lowest-index) coordinates; rows are sorted by
/// pivot, and every pivot column is zero outside its own row. Two subspaces
/// are equal exactly when their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: u8,
    basis: Vec<BitVector>,
}

impl Subspace {
    /// The span of `vectors` in canonical form.
    pub fn span(n: usize, vectors: &[BitVector]) -> Result<Self> {
        for v in vectors {
            check_dim(n, v.dim())?;
        }
        Ok(Self::span_unchecked(n, vectors.iter().copied()))
    }

    pub(crate) fn span_unchecked(n: usize, vectors: impl IntoIterator<Item = BitVector>) -> Self {
        let mut basis: Vec<u32> = Vec::new();
        for v in vectors {
            let mut x = v.bits;
            for &b in &basis {
                let top = 31 - b.leading_zeros();
                if x >> top & 1 == 1 {
                    x ^= b;
                }
            }
            if x != 0 {
                let top = 31 - x.leading_zeros();
                for b in basis.iter_mut() {
                    if *b >> top & 1 == 1 {
                        *b ^= x;
                    }
                }
                basis.push(x);
            }
        }
        basis.sort_unstable_by(|a, b| b.cmp(a));
        Subspace {
            n: n as u8,
            basis: basis.into_iter().map(|bits| BitVector { n: n as u8, bits }).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n: n as u8, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { n: n as u8, basis: (1..=n).map(|i| BitVector::unit(n, i)).collect() }
    }

    /// `⟨e_i, …, e_j⟩`.
    pub fn coordinate(n: usize, i: usize, j: usize) -> Self {
        Subspace { n: n as u8, basis: (i..=j).map(|k| BitVector::unit(n, k)).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn size(&self) -> usize {
        1 << self.dim()
    }

    /// The minimal element of the coset `v + self`.
    pub fn reduce(&self, v: BitVector) -> BitVector {
        let mut x = v;
        for b in &self.basis {
            let top = 31 - b.bits.leading_zeros();
            if x.bits >> top & 1 == 1 {
                x.bits ^= b.bits;
            }
        }
        x
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, v: BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains(&self, v: BitVector) -> Result<bool> {
        check_dim(self.ambient_dim(), v.dim())?;
        Ok(self.contains_unchecked(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        Ok(Self::span_unchecked(self.ambient_dim(), self.basis.iter().chain(&other.basis).copied()))
    }

    /// Zassenhaus: reduce `(a | a)` for `a ∈ A` together with `(b | 0)` for
    /// `b ∈ B`; rows whose left half vanishes span `A ∩ B` on the right.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        let n = self.ambient_dim();
        let doubled = self
            .basis
            .iter()
            .map(|a| (a.bits << n) | a.bits)
            .chain(other.basis.iter().map(|b| b.bits << n))
            .map(|bits| BitVector { n: (2 * n) as u8, bits });
        let reduced = Subspace::span_unchecked(2 * n, doubled);
        let right = reduced
            .basis
            .iter()
            .filter(|r| r.bits >> n == 0)
            .map(|r| BitVector { n: n as u8, bits: r.bits & mask(n) });
        Ok(Subspace::span_unchecked(n, right))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.n == other.n && self.basis.iter().all(|b| other.contains_unchecked(*b))
    }

    /// Every vector of the subspace, in increasing order.
    pub fn elements(&self) -> Vec<BitVector> {
        let mut out = Vec::with_capacity(self.size());
        for mask in 0..self.size() {
            let mut v = BitVector::zero(self.ambient_dim());
            for (k, b) in self.basis.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v += *b;
                }
            }
            out.push(v);
        }
        out.sort_unstable();
        out
    }

    /// Minimal representatives of the cosets of `self`, in increasing order.
    pub fn coset_representatives(&self) -> Vec<BitVector> {
        BitVector::all(self.ambient_dim()).filter(|&v| self.reduce(v) == v).collect()
    }

    /// Canonical basis vectors completing `self` to `V`, chosen greedily from `e_1`.
    pub fn complement_basis(&self) -> Vec<BitVector> {
        let n = self.ambient_dim();
        let mut acc = self.clone();
        let mut out = Vec::new();
        for i in 1..=n {
            let e = BitVector::unit(n, i);
            if !acc.contains_unchecked(e) {
                acc = Subspace::span_unchecked(n, acc.basis.iter().copied().chain([e]));
                out.push(e);
            }
        }
        out
    }

    /// The image `self·L`.
    pub fn map(&self, l: &BitMatrix) -> Subspace {
        Subspace::span_unchecked(l.ncols(), self.basis.iter().map(|b| l.mul_vec(*b)))
    }

    /// Every `k`-dimensional subspace of `F₂ⁿ`, each produced once from its
    /// RREF shape: a choice of pivot columns and the free entries to their right.
    pub fn all_of_dim(n: usize, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut pivots = Vec::with_capacity(k);
        fn choose(n: usize, k: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<Subspace>) {
            if pivots.len() == k {
                emit(n, pivots, out);
                return;
            }
            for p in start..=n {
                pivots.push(p);
                choose(n, k, p + 1, pivots, out);
                pivots.pop();
            }
        }
        fn emit(n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
            // Free positions of each row: non-pivot columns after its pivot.
            let free: Vec<Vec<usize>> = pivots
                .iter()
                .map(|&p| ((p + 1)..=n).filter(|c| !pivots.contains(c)).collect())
                .collect();
            let total: usize = free.iter().map(Vec::len).sum();
            for assignment in 0u64..(1u64 << total) {
                let mut bit = 0;
                let mut basis = Vec::with_capacity(pivots.len());
                for (row, &p) in pivots.iter().enumerate() {
                    let mut v = BitVector::unit(n, p);
                    for &c in &free[row] {
                        if assignment >> bit & 1 == 1 {
                            v = v.with_coord(c, true);
                        }
                        bit += 1;
                    }
                    basis.push(v);
                }
                out.push(Subspace { n: n as u8, basis });
            }
        }
        choose(n, k, 1, &mut pivots, &mut out);
        out.sort();
        out
    }

    /// Parses comma-separated spanning vectors; the empty string is `{0}`.
    pub fn parse(n: usize, s: &str) -> Result<Subspace> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Subspace::zero(n));
        }
        let vectors = s.split(',').map(str::parse).collect::<Result<Vec<BitVector>>>()?;
        Subspace::span(n, &vectors)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.basis.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, [{self}])", self.n)
    }
}

/// Canonicalizes a spanning set into RREF.
pub fn rref_basis(n: usize, vectors: &[BitVector]) -> Result<Subspace> {
    Subspace::span(n, vectors)
}

pub fn matrix_inverse(m: &BitMatrix) -> Result<BitMatrix> {
    m.inverse()
}

/// A maximal flag `{0} = V_0 < V_1 < … < V_n = V`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    n: u8,
    chain: Vec<Subspace>,
}

impl Flag {
    /// The flag with `V_i` spanned by the last `i` vectors of `basis_order`.
    pub fn complete(basis_order: &[BitVector]) -> Result<Flag> {
        let n = basis_order.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::NotABasis);
        }
        let mut chain = Vec::with_capacity(n + 1);
        chain.push(Subspace::zero(n));
        for i in 1..=n {
            let tail = &basis_order[n - i..];
            let s = Subspace::span(n, tail).map_err(|_| Error::NotABasis)?;
            if s.dim() != i {
                return Err(Error::NotABasis);
            }
            chain.push(s);
        }
        Ok(Flag { n: n as u8, chain })
    }

    /// `V_i = ⟨e_{n−i+1}, …, e_n⟩`.
    pub fn canonical(n: usize) -> Flag {
        let basis: Vec<_> = (1..=n).map(|i| BitVector::unit(n, i)).collect();
        Flag::complete(&basis).expect("canonical basis")
    }

    pub fn from_chain(chain: Vec<Subspace>) -> Result<Flag> {
        let n = chain.len().checked_sub(1).ok_or_else(|| Error::InvalidFlag("empty chain".into()))?;
        for (i, s) in chain.iter().enumerate() {
            if s.ambient_dim() != n || s.dim() != i {
                return Err(Error::InvalidFlag(format!("member {i} has dimension {}", s.dim())));
            }
            if i > 0 && !chain[i - 1].is_subspace_of(s) {
                return Err(Error::InvalidFlag(format!("member {} is not contained in member {i}", i - 1)));
            }
        }
        Ok(Flag { n: n as u8, chain })
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// `V_i`.
    pub fn member(&self, i: usize) -> &Subspace {
        &self.chain[i]
    }

    pub fn members(&self) -> &[Subspace] {
        &self.chain
    }

    /// The basis `ē_1, …, ē_n` with `ē_{n−i+1}` the least vector of `V_i ∖ V_{i−1}`.
    pub fn adapted_basis(&self) -> Vec<BitVector> {
        let n = self.dim();
        let mut out = vec![BitVector::zero(n); n];
        for i in 1..=n {
            let prev = &self.chain[i - 1];
            let fresh = self.chain[i]
                .basis()
                .iter()
                .find(|b| !prev.contains_unchecked(**b))
                .expect("strict inclusion");
            out[n - i] = prev.reduce(*fresh);
        }
        out
    }

    /// The matrix `L` with `e_i L = ē_i`, so that the canonical flag maps onto `self`.
    pub fn basis_change(&self) -> BitMatrix {
        BitMatrix::from_rows(&self.adapted_basis()).expect("adapted basis")
    }

    /// The image flag `F·L`.
    pub fn map(&self, l: &BitMatrix) -> Result<Flag> {
        if !l.is_invertible() || l.nrows() != self.dim() {
            return Err(Error::Singular);
        }
        Ok(Flag { n: self.n, chain: self.chain.iter().map(|s| s.map(l)).collect() })
    }

    /// All maximal flags of `F₂ⁿ`, extending `V_i` by one nonzero coset at a time.
    pub fn all(n: usize) -> Vec<Flag> {
        let mut out = Vec::new();
        let mut chain = vec![Subspace::zero(n)];
        fn extend(n: usize, chain: &mut Vec<Subspace>, out: &mut Vec<Flag>) {
            let top = chain.last().expect("nonempty").clone();
            if top.dim() == n {
                out.push(Flag { n: n as u8, chain: chain.clone() });
                return;
            }
            for rep in top.coset_representatives().into_iter().skip(1) {
                let next = Subspace::span_unchecked(n, top.basis().iter().copied().chain([rep]));
                chain.push(next);
                extend(n, chain, out);
                chain.pop();
            }
        }
        extend(n, &mut chain, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.adapted_basis().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag({self})")
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flag> {
        let basis = s.split(',').map(str::parse).collect::<Result<Vec<BitVector>>>()?;
        Flag::complete(&basis)
    }
}

pub fn complete_flag(basis_order: &[BitVector]) -> Result<Flag> {
    Flag::complete(basis_order)
}

/// Number of `k`-dimensional subspaces of `F₂ⁿ`.
pub fn gaussian_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= (BigUint::one() << (n - i)) - 1u32;
        den *= (BigUint::one() << (i + 1)) - 1u32;
    }
    num / den
}
