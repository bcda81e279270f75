//! Elements of the Chow group of one split quadric, as coefficient
//! vectors over the cell basis.
//!
//! Beyond the linear structure this implements the three pieces of
//! intersection theory the correspondence calculus needs:
//!
//! * hyperplane multiplication `h . -`, with the rewrite
//!   `h^(D-i) = 2 L(i)` past the middle and `h^d = L(d) + L'(d)` at an
//!   even middle;
//! * the degree map on dimension 0, normalised by `deg L(0) = 1` (so
//!   `deg h^D = 2`);
//! * the pairing `<x, u> = deg(x . u)` between complementary
//!   dimensions. Off the middle the only nonzero cell pairing is
//!   `<L(i), H(i)> = 1`; on the middle of `D = 2d` the Gram matrix in
//!   the `{L, L'}` basis is `[[1,0],[0,1]]` for even `d` and
//!   `[[0,1],[1,0]]` for odd `d`. Either form is forced by
//!   `<h^d, L(d)> = 1` together with the parity of self-intersections
//!   of maximal linear subspaces, and the choice is cross-checked by
//!   the diagonal-identity property tests of the correspondence layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quadric::{Bits, Cell, SplitQuadric};
use crate::ring::CoeffRing;

/// A cycle: an element of the Chow group of `quadric` with coefficients
/// in `ring`. Zero coefficients are never stored, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    quadric: SplitQuadric,
    ring: CoeffRing,
    coords: BTreeMap<Cell, BigInt>,
}

impl Cycle {
    pub fn zero(quadric: SplitQuadric, ring: CoeffRing) -> Self {
        Cycle {
            quadric,
            ring,
            coords: BTreeMap::new(),
        }
    }

    pub fn from_cell(quadric: SplitQuadric, ring: CoeffRing, cell: Cell) -> Result<Self> {
        Cycle::from_coords(quadric, ring, [(cell, BigInt::one())])
    }

    pub fn from_coords(
        quadric: SplitQuadric,
        ring: CoeffRing,
        coords: impl IntoIterator<Item = (Cell, BigInt)>,
    ) -> Result<Self> {
        let mut out = Cycle::zero(quadric, ring);
        for (cell, c) in coords {
            if !cell.valid_on(&quadric) {
                return Err(Error::InvalidInput(format!(
                    "cell {cell:?} is not a basis cell of a {}-dimensional quadric",
                    quadric.dim()
                )));
            }
            out.add_assign_cell(cell, &c);
        }
        Ok(out)
    }

    /// The `a`-th hyperplane power `h^a` as a cycle, rewriting past the
    /// middle: `h^a = 2 L(D-a)` for `2(D-a) < D`, and `h^d = L(d) + L'(d)`
    /// on an even middle. Powers beyond `D` vanish.
    pub fn h_power(quadric: SplitQuadric, ring: CoeffRing, a: u32) -> Self {
        let dim = quadric.dim();
        if a > dim {
            return Cycle::zero(quadric, ring);
        }
        let i = dim - a; // homological dimension
        let mut out = Cycle::zero(quadric, ring);
        if 2 * i > dim {
            out.add_assign_cell(Cell::H(a), &BigInt::one());
        } else if 2 * i == dim {
            out.add_assign_cell(Cell::L(i), &BigInt::one());
            out.add_assign_cell(Cell::LPrime, &BigInt::one());
        } else {
            out.add_assign_cell(Cell::L(i), &BigInt::from(2));
        }
        out
    }

    pub fn quadric(&self) -> &SplitQuadric {
        &self.quadric
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn coords(&self) -> &BTreeMap<Cell, BigInt> {
        &self.coords
    }

    pub fn coefficient(&self, cell: &Cell) -> BigInt {
        self.coords.get(cell).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add_assign_cell(&mut self, cell: Cell, c: &BigInt) {
        let entry = self.coords.entry(cell).or_insert_with(BigInt::zero);
        *entry = self.ring.reduce(&(&*entry + c));
        if entry.is_zero() {
            self.coords.remove(&cell);
        }
    }

    fn check_compatible(&self, other: &Cycle) -> Result<()> {
        if self.quadric != other.quadric {
            return Err(Error::QuadricMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cycle) -> Result<Cycle> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (cell, c) in &other.coords {
            out.add_assign_cell(*cell, c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> Cycle {
        let mut out = Cycle::zero(self.quadric, self.ring.clone());
        for (cell, c) in &self.coords {
            out.add_assign_cell(*cell, &(c * s));
        }
        out
    }

    /// Homological dimension when the cycle is homogeneous; `None` for
    /// the zero cycle or a mixed one.
    pub fn homogeneous_dim(&self) -> Option<u32> {
        let mut dims = self.coords.keys().map(|c| c.dim_on(&self.quadric));
        let first = dims.next()?;
        dims.all(|d| d == first).then_some(first)
    }

    /// Multiplication by the hyperplane class; drops dimension by one.
    pub fn h_mult(&self) -> Cycle {
        let mut out = Cycle::zero(self.quadric, self.ring.clone());
        for (cell, c) in &self.coords {
            let image = match cell {
                Cell::L(0) => continue,
                Cell::L(i) => Cycle::from_cell(self.quadric, self.ring.clone(), Cell::L(i - 1))
                    .expect("valid cell"),
                Cell::LPrime => Cycle::from_cell(
                    self.quadric,
                    self.ring.clone(),
                    Cell::L(self.quadric.half() - 1),
                )
                .expect("valid cell"),
                Cell::H(j) => Cycle::h_power(self.quadric, self.ring.clone(), j + 1),
            };
            for (icell, ic) in &image.coords {
                out.add_assign_cell(*icell, &(ic * c));
            }
        }
        out
    }

    /// Degree of a dimension-0 cycle: the coefficient of `L(0)`.
    pub fn degree(&self) -> Result<BigInt> {
        for cell in self.coords.keys() {
            if cell.dim_on(&self.quadric) != 0 {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(self.coefficient(&Cell::L(0)))
    }

    /// Action of the group element `gamma`: swaps the two middle cells
    /// when the discriminant character pairs nontrivially with `gamma`,
    /// and fixes every other cell.
    pub fn gal_act(&self, gamma: &Bits) -> Result<Cycle> {
        if !self.quadric.swaps_middle(gamma)? {
            return Ok(self.clone());
        }
        let d = self.quadric.half();
        let mut out = self.clone();
        let a = out.coords.remove(&Cell::L(d));
        let b = out.coords.remove(&Cell::LPrime);
        if let Some(b) = b {
            out.coords.insert(Cell::L(d), b);
        }
        if let Some(a) = a {
            out.coords.insert(Cell::LPrime, a);
        }
        Ok(out)
    }
}

/// Pairing of basis cells in complementary dimensions.
fn cell_pairing(q: &SplitQuadric, x: &Cell, u: &Cell) -> BigInt {
    if x.is_middle(q) {
        let d = q.half();
        let same = if d.is_multiple_of(2) { (1, 0) } else { (0, 1) };
        let (s, t) = same;
        return match (x, u) {
            (Cell::L(_), Cell::L(_)) | (Cell::LPrime, Cell::LPrime) => BigInt::from(s),
            _ => BigInt::from(t),
        };
    }
    match (x, u) {
        (Cell::L(i), Cell::H(j)) if i == j => BigInt::one(),
        (Cell::H(j), Cell::L(i)) if i == j => BigInt::one(),
        _ => BigInt::zero(),
    }
}

/// `<x, u> = deg(x . u)` for homogeneous cycles in complementary
/// dimensions on the same quadric.
pub fn pairing(x: &Cycle, u: &Cycle) -> Result<BigInt> {
    x.check_compatible(u)?;
    if x.is_zero() || u.is_zero() {
        return Ok(BigInt::zero());
    }
    let q = x.quadric;
    let dx = x.homogeneous_dim().ok_or(Error::NotHomogeneous)?;
    let du = u.homogeneous_dim().ok_or(Error::NotHomogeneous)?;
    if dx + du != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pairing needs complementary dimensions, got {dx} and {du} on dimension {}",
            q.dim()
        )));
    }
    let mut acc = BigInt::zero();
    for (cx, cc) in &x.coords {
        for (cu, uc) in &u.coords {
            acc += cc * uc * cell_pairing(&q, cx, cu);
        }
    }
    Ok(x.ring.reduce(&acc))
}
