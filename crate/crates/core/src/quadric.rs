//! Split quadrics and the Galois data acting on their Chow groups.
//!
//! A split quadric of dimension `D = 2d` or `2d+1` has Chow group with
//! one generator in every homological dimension except the middle of an
//! even-dimensional quadric, which has two. We index the generating
//! cells as follows:
//!
//! * `L(i)` — the class of an `i`-dimensional linear subspace, for
//!   `2i <= D`;
//! * `L'(d)` — the second family of middle linear subspaces, only when
//!   `D = 2d`; the two middle cells satisfy `L(d) + L'(d) = h^d`;
//! * `H(j)` — the `j`-th power of the hyperplane class, of homological
//!   dimension `D - j`, kept as a cell only while `2(D-j) > D`; powers
//!   past the middle are rewritten by `h^(D-i) = 2 L(i)`.
//!
//! The acting Galois group is an elementary abelian 2-group with `r`
//! marked commuting involutions. A group element is a bit vector; a
//! quadric's discriminant character is another bit vector, and the
//! element swaps the two middle families exactly when the two pair
//! nontrivially.

use crate::error::{Error, Result};

/// A bit vector of fixed length, used both for group elements of
/// `(Z/2)^r` and for discriminant characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    len: usize,
    mask: u32,
}

impl Bits {
    pub fn new(len: usize, mask: u32) -> Result<Self> {
        if len > 16 {
            return Err(Error::InvalidInput("at most 16 involutions supported".into()));
        }
        if len < 32 && mask >> len != 0 {
            return Err(Error::InvalidInput(format!(
                "bit mask {mask:#b} does not fit in {len} bits"
            )));
        }
        Ok(Bits { len, mask })
    }

    pub fn zero(len: usize) -> Self {
        Bits { len, mask: 0 }
    }

    /// The `k`-th standard generator.
    pub fn generator(len: usize, k: usize) -> Result<Self> {
        if k >= len {
            return Err(Error::InvalidInput(format!(
                "generator index {k} out of range for {len} involutions"
            )));
        }
        Bits::new(len, 1 << k)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut mask = 0u32;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::InvalidInput("bit vectors contain only 0 and 1".into()));
            }
            mask |= u32::from(b) << i;
        }
        Bits::new(bits.len(), mask)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| ((self.mask >> i) & 1) as u8).collect()
    }

    /// Parity of the pairing of two vectors of equal length.
    pub fn dot(&self, other: &Bits) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch(format!(
                "bit vectors of lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok((self.mask & other.mask).count_ones() % 2 == 1)
    }

    /// All `2^len` group elements, in mask order.
    pub fn all(len: usize) -> Vec<Bits> {
        (0..(1u32 << len)).map(|mask| Bits { len, mask }).collect()
    }
}

/// The Galois side of the model: `r` commuting involutions generating
/// `(Z/2)^r`, inside an extension of degree `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaloisContext {
    generators: usize,
    degree_exponent: u32,
}

impl GaloisContext {
    pub fn new(generators: usize, degree_exponent: u32) -> Result<Self> {
        if degree_exponent < 1 {
            return Err(Error::InvalidInput("extension degree must be at least 2".into()));
        }
        if (generators as u32) > degree_exponent {
            return Err(Error::InvalidInput(format!(
                "{generators} independent involutions do not fit in a degree 2^{degree_exponent} extension"
            )));
        }
        if generators > 16 {
            return Err(Error::InvalidInput("at most 16 involutions supported".into()));
        }
        Ok(GaloisContext {
            generators,
            degree_exponent,
        })
    }

    /// Number `r` of marked commuting involutions.
    pub fn generators(&self) -> usize {
        self.generators
    }

    /// `n` with extension degree `2^n`.
    pub fn degree_exponent(&self) -> u32 {
        self.degree_exponent
    }

    pub fn group_elements(&self) -> Vec<Bits> {
        Bits::all(self.generators)
    }

    pub fn generator_elements(&self) -> Vec<Bits> {
        (0..self.generators)
            .map(|k| Bits::generator(self.generators, k).expect("in range"))
            .collect()
    }
}

/// Combinatorial model of a split quadric: its dimension and the
/// discriminant character of the associated quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitQuadric {
    dim: u32,
    disc: Bits,
}

impl SplitQuadric {
    pub fn new(dim: u32, disc: Bits) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidInput("quadrics of dimension at least 1".into()));
        }
        if dim % 2 == 1 && !disc.is_zero() {
            return Err(Error::InvalidInput(
                "odd-dimensional quadrics have no middle swap; the discriminant character must vanish"
                    .into(),
            ));
        }
        Ok(SplitQuadric { dim, disc })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `d` with `dim = 2d` or `2d + 1`.
    pub fn half(&self) -> u32 {
        self.dim / 2
    }

    pub fn disc(&self) -> &Bits {
        &self.disc
    }

    pub fn is_even(&self) -> bool {
        self.dim.is_multiple_of(2)
    }

    pub fn has_middle(&self) -> bool {
        self.is_even()
    }

    /// Whether `gamma` exchanges the two middle families.
    pub fn swaps_middle(&self, gamma: &Bits) -> Result<bool> {
        Ok(self.has_middle() && self.disc.dot(gamma)?)
    }

    /// Rank of the `i`-th homogeneous component of the Chow group.
    pub fn chow_rank(&self, i: u32) -> Result<u32> {
        if i > self.dim {
            return Err(Error::DimensionOutOfRange(i, self.dim));
        }
        Ok(if self.is_even() && i == self.half() { 2 } else { 1 })
    }

    /// Generating cells of the `i`-th homogeneous component, the middle
    /// ordered as `[L(d), L'(d)]`.
    pub fn cells_in_dim(&self, i: u32) -> Result<Vec<Cell>> {
        if i > self.dim {
            return Err(Error::DimensionOutOfRange(i, self.dim));
        }
        Ok(if 2 * i < self.dim {
            vec![Cell::L(i)]
        } else if 2 * i == self.dim {
            vec![Cell::L(i), Cell::LPrime]
        } else {
            vec![Cell::H(self.dim - i)]
        })
    }

    /// All cells, by increasing homological dimension.
    pub fn basis_cells(&self) -> Vec<Cell> {
        (0..=self.dim)
            .flat_map(|i| self.cells_in_dim(i).expect("in range"))
            .collect()
    }

    /// Total number of basis cells: `D + 1`, plus one more for an even
    /// dimension.
    pub fn basis_size(&self) -> usize {
        (self.dim + 1 + u32::from(self.is_even())) as usize
    }
}

/// A generating cell of the Chow group of one split quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    /// `l_i`: an `i`-dimensional linear subspace.
    L(u32),
    /// `l_d'`: the second middle family (even dimension only).
    LPrime,
    /// `h^j`: the `j`-th hyperplane power, of dimension `D - j`.
    H(u32),
}

impl Cell {
    /// Homological dimension of the cell on `q`.
    pub fn dim_on(&self, q: &SplitQuadric) -> u32 {
        match self {
            Cell::L(i) => *i,
            Cell::LPrime => q.half(),
            Cell::H(j) => q.dim() - j,
        }
    }

    /// Whether the cell is a valid basis cell of `q`.
    pub fn valid_on(&self, q: &SplitQuadric) -> bool {
        match self {
            Cell::L(i) => 2 * i <= q.dim() && (2 * i < q.dim() || q.is_even()),
            Cell::LPrime => q.is_even(),
            Cell::H(j) => *j <= q.dim() && 2 * (q.dim() - j) > q.dim(),
        }
    }

    pub fn is_middle(&self, q: &SplitQuadric) -> bool {
        q.is_even() && 2 * self.dim_on(q) == q.dim()
    }

    /// Position of the cell inside `cells_in_dim`.
    pub fn index_in_dim(&self) -> usize {
        match self {
            Cell::LPrime => 1,
            _ => 0,
        }
    }

    /// Cell label used by the JSON schema: `L0`, `L2'`, `H1`, ...
    pub fn label(&self, q: &SplitQuadric) -> String {
        match self {
            Cell::L(i) => format!("L{i}"),
            Cell::LPrime => format!("L{}'", q.half()),
            Cell::H(j) => format!("H{j}"),
        }
    }

    /// Parses a cell label against a quadric.
    pub fn from_label(label: &str, q: &SplitQuadric) -> Result<Cell> {
        let bad = || Error::InvalidInput(format!("unknown cell label {label:?}"));
        let cell = if let Some(rest) = label.strip_prefix('L') {
            if let Some(idx) = rest.strip_suffix('\'') {
                let i: u32 = idx.parse().map_err(|_| bad())?;
                if !q.is_even() || i != q.half() {
                    return Err(bad());
                }
                Cell::LPrime
            } else {
                Cell::L(rest.parse().map_err(|_| bad())?)
            }
        } else if let Some(rest) = label.strip_prefix('H') {
            Cell::H(rest.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        if !cell.valid_on(q) {
            return Err(bad());
        }
        Ok(cell)
    }
}
