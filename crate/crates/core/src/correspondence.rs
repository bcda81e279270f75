//! Degree-0 correspondences between split quadrics.
//!
//! A degree-0 correspondence from `X` to `Y` acts on Chow groups
//! preserving the homological grading, so it is stored as one block per
//! dimension `i`, a matrix of shape `chow_rank(Y, i) x chow_rank(X, i)`
//! acting on coordinate columns in the cell bases (middle ordered
//! `[L, L']`). Composition is blockwise matrix multiplication.
//!
//! The cycle presentation is kept only for constructing named cycles
//! and for display: the product cycle `u x v` with `dim u + dim v =
//! dim X` acts by `x -> <x, u> v`, and the two presentations are
//! interchangeable because the pairing between complementary
//! dimensions is invertible over any coefficient ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cycle::{pairing, Cycle};
use crate::error::{Error, Result};
use crate::howell::howell;
use crate::mat::Mat;
use crate::quadric::{Bits, Cell, SplitQuadric};
use crate::ring::CoeffRing;
use crate::smith::snf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    source: SplitQuadric,
    target: SplitQuadric,
    ring: CoeffRing,
    /// `blocks[i]`: the action on the `i`-th homogeneous components,
    /// for `0 <= i <= min(dim X, dim Y)`.
    blocks: Vec<Mat>,
}

impl Correspondence {
    pub fn zero(source: SplitQuadric, target: SplitQuadric, ring: CoeffRing) -> Self {
        let top = source.dim().min(target.dim());
        let blocks = (0..=top)
            .map(|i| {
                Mat::zero(
                    ring.clone(),
                    target.chow_rank(i).expect("in range") as usize,
                    source.chow_rank(i).expect("in range") as usize,
                )
            })
            .collect();
        Correspondence {
            source,
            target,
            ring,
            blocks,
        }
    }

    pub fn from_blocks(
        source: SplitQuadric,
        target: SplitQuadric,
        ring: CoeffRing,
        blocks: impl IntoIterator<Item = (u32, Mat)>,
    ) -> Result<Self> {
        let mut out = Correspondence::zero(source, target, ring);
        for (i, block) in blocks {
            out.set_block(i, block)?;
        }
        Ok(out)
    }

    /// The identity correspondence of `x`.
    pub fn diagonal(x: SplitQuadric, ring: CoeffRing) -> Self {
        let mut out = Correspondence::zero(x, x, ring.clone());
        for i in 0..=x.dim() {
            let rank = x.chow_rank(i).expect("in range") as usize;
            out.blocks[i as usize] = Mat::identity(ring.clone(), rank);
        }
        out
    }

    pub fn source(&self) -> &SplitQuadric {
        &self.source
    }

    pub fn target(&self) -> &SplitQuadric {
        &self.target
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    /// Largest dimension carrying a block.
    pub fn top_dim(&self) -> u32 {
        self.source.dim().min(self.target.dim())
    }

    pub fn block(&self, i: u32) -> &Mat {
        &self.blocks[i as usize]
    }

    pub fn set_block(&mut self, i: u32, block: Mat) -> Result<()> {
        if i > self.top_dim() {
            return Err(Error::DimensionOutOfRange(i, self.top_dim()));
        }
        let expected = &self.blocks[i as usize];
        if block.rows() != expected.rows() || block.cols() != expected.cols() {
            return Err(Error::DimensionMismatch(format!(
                "block {i} must be {}x{}",
                expected.rows(),
                expected.cols()
            )));
        }
        if block.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", block.ring(), self.ring)));
        }
        self.blocks[i as usize] = block;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn is_endo(&self) -> bool {
        self.source == self.target
    }

    fn check_linear_compatible(&self, other: &Correspondence) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::QuadricMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Correspondence) -> Result<Correspondence> {
        self.check_linear_compatible(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Correspondence {
            source: self.source,
            target: self.target,
            ring: self.ring.clone(),
            blocks,
        })
    }

    pub fn sub(&self, other: &Correspondence) -> Result<Correspondence> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> Correspondence {
        Correspondence {
            source: self.source,
            target: self.target,
            ring: self.ring.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
        }
    }

    /// `self . other`: first `other`, then `self`.
    pub fn compose(&self, other: &Correspondence) -> Result<Correspondence> {
        if other.target != self.source {
            return Err(Error::QuadricMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        let mut out = Correspondence::zero(other.source, self.target, self.ring.clone());
        for i in 0..=out.top_dim() {
            if i <= self.source.dim().min(other.source.dim()).min(self.target.dim()) {
                let b = self.block(i).mul(other.block(i))?;
                out.set_block(i, b)?;
            }
        }
        Ok(out)
    }

    /// Transpose along the pairing; requires `dim X = dim Y` to stay of
    /// degree 0. Off-middle blocks swap dimensions `i <-> D - i`; the
    /// middle block is conjugated by the two Gram matrices.
    pub fn transpose(&self) -> Result<Correspondence> {
        if self.source.dim() != self.target.dim() {
            return Err(Error::DimensionMismatch(
                "transpose needs source and target of equal dimension".into(),
            ));
        }
        let d = self.source.dim();
        let mut out = Correspondence::zero(self.target, self.source, self.ring.clone());
        for i in 0..=d {
            let m = self.block(d - i);
            let mt = m.transpose();
            let b = if self.source.is_even() && 2 * i == d {
                let gx = gram(&self.source, &self.ring);
                let gy = gram(&self.target, &self.ring);
                gx.mul(&mt)?.mul(&gy)?
            } else {
                mt
            };
            out.set_block(i, b)?;
        }
        Ok(out)
    }

    /// Action of a Galois element on both factors: `M_i` becomes
    /// `P_Y M_i P_X` with `P` the middle swap permutations.
    pub fn gal_act(&self, gamma: &Bits) -> Result<Correspondence> {
        let mut out = self.clone();
        let swap_source = self.source.swaps_middle(gamma)?;
        let swap_target = self.target.swaps_middle(gamma)?;
        if !swap_source && !swap_target {
            return Ok(out);
        }
        for i in 0..=self.top_dim() {
            let mut b = self.block(i).clone();
            if swap_target && 2 * i == self.target.dim() {
                b = swap2(&self.ring).mul(&b)?;
            }
            if swap_source && 2 * i == self.source.dim() {
                b = b.mul(&swap2(&self.ring))?;
            }
            out.set_block(i, b)?;
        }
        Ok(out)
    }

    /// Invariance under every marked involution. The number of marked
    /// involutions is the common length of the discriminant characters.
    pub fn is_gal_invariant(&self) -> Result<bool> {
        let r = self.source.disc().len();
        if self.target.disc().len() != r {
            return Err(Error::DimensionMismatch(
                "source and target live under different Galois groups".into(),
            ));
        }
        for k in 0..r {
            let gamma = Bits::generator(r, k)?;
            if self.gal_act(&gamma)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Entrywise coefficient reduction. Integers reduce to any ring;
    /// `Z/m` reduces to `Z/m'` exactly when `m'` divides `m`.
    pub fn reduce(&self, ring: &CoeffRing) -> Result<Correspondence> {
        check_reduction(&self.ring, ring)?;
        Ok(Correspondence {
            source: self.source,
            target: self.target,
            ring: ring.clone(),
            blocks: self.blocks.iter().map(|b| b.map_ring(ring)).collect(),
        })
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        if !self.is_endo() {
            return Ok(false);
        }
        Ok(self.compose(self)? == *self)
    }

    /// Flattened entries in dimension order, row-major inside a block;
    /// the coordinate vector used by the rationality spans.
    pub fn flatten(&self) -> Vec<BigInt> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().iter().cloned())
            .collect()
    }

    pub fn unflatten(
        source: SplitQuadric,
        target: SplitQuadric,
        ring: CoeffRing,
        entries: &[BigInt],
    ) -> Result<Correspondence> {
        let mut out = Correspondence::zero(source, target, ring.clone());
        let mut used = 0usize;
        for i in 0..=out.top_dim() {
            let b = &out.blocks[i as usize];
            let len = b.rows() * b.cols();
            if used + len > entries.len() {
                return Err(Error::DimensionMismatch("flattened vector too short".into()));
            }
            let block = Mat::new(
                ring.clone(),
                b.rows(),
                b.cols(),
                entries[used..used + len].to_vec(),
            )?;
            used += len;
            out.set_block(i, block)?;
        }
        if used != entries.len() {
            return Err(Error::DimensionMismatch("flattened vector too long".into()));
        }
        Ok(out)
    }

    /// The cycle presentation: coefficients over pairs of cells
    /// `(e on X, f on Y)` with `dim e + dim f = dim X`.
    pub fn to_cycle(&self) -> CycleForm {
        let mut coeffs = BTreeMap::new();
        let dx = self.source.dim();
        for i in 0..=self.top_dim() {
            let m = self.block(i);
            // C_i = M_i * (P^X_i)^{-T}; off the middle P = (1), on the
            // middle it is the involutive Gram matrix
            let c = if self.source.is_even() && 2 * i == dx {
                m.mul(&gram(&self.source, &self.ring)).expect("shapes agree")
            } else {
                m.clone()
            };
            let target_cells = self.target.cells_in_dim(i).expect("in range");
            let source_cells = self.source.cells_in_dim(dx - i).expect("in range");
            for (row, f) in target_cells.iter().enumerate() {
                for (col, e) in source_cells.iter().enumerate() {
                    let v = c.at(row, col);
                    if !v.is_zero() {
                        coeffs.insert((*e, *f), v.clone());
                    }
                }
            }
        }
        CycleForm {
            source: self.source,
            target: self.target,
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Rank of each block of an idempotent: the rank of the free image
    /// summand, read off over `Z` from the Smith form and over `Z/2^n`
    /// from the mod-2 reduction.
    pub fn image_ranks(&self) -> Result<Vec<(u32, u32)>> {
        if !self.is_idempotent()? {
            return Err(Error::NotIdempotent);
        }
        let mut out = Vec::new();
        for i in 0..=self.top_dim() {
            out.push((i, block_rank(self.block(i))?));
        }
        Ok(out)
    }

    /// Middle rank of an idempotent endo-correspondence: 0 in odd
    /// dimension, the rank of the middle block otherwise.
    pub fn middle_rank(&self) -> Result<u32> {
        if !self.is_idempotent()? {
            return Err(Error::NotIdempotent);
        }
        if !self.source.is_even() {
            return Ok(0);
        }
        block_rank(self.block(self.source.half()))
    }
}

/// Rank of an idempotent block: number of nonzero Smith invariants over
/// `Z`, number of Howell pivots of the mod-2 reduction over `Z/2^n`.
/// For idempotents the two agree with the rank of the free image.
fn block_rank(b: &Mat) -> Result<u32> {
    match b.ring() {
        CoeffRing::Integers => Ok(snf(b)?.rank() as u32),
        CoeffRing::Residue(_) => {
            b.ring().two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
            let mod2 = b.map_ring(&CoeffRing::residue_pow2(1));
            Ok(howell(&mod2)?.num_rows() as u32)
        }
    }
}

fn check_reduction(from: &CoeffRing, to: &CoeffRing) -> Result<()> {
    use num_integer::Integer;
    let ok = match (from, to) {
        (_, CoeffRing::Integers) => from.is_integers(),
        (CoeffRing::Integers, CoeffRing::Residue(_)) => true,
        (CoeffRing::Residue(m), CoeffRing::Residue(m2)) => m.mod_floor(m2).is_zero(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidReduction(from.tag(), to.tag()))
    }
}

/// The middle Gram matrix of `q` in the `{L, L'}` basis.
fn gram(q: &SplitQuadric, ring: &CoeffRing) -> Mat {
    let d = q.half();
    if d.is_multiple_of(2) {
        Mat::identity(ring.clone(), 2)
    } else {
        swap2(ring)
    }
}

fn swap2(ring: &CoeffRing) -> Mat {
    Mat::from_i64(ring.clone(), &[&[0, 1], &[1, 0]])
}

/// The correspondence `u x v` acting by `x -> <x, u> v`; requires
/// `dim u + dim v = dim X`.
pub fn external_product(u: &Cycle, v: &Cycle) -> Result<Correspondence> {
    if u.ring() != v.ring() {
        return Err(Error::RingMismatch(format!("{} vs {}", u.ring(), v.ring())));
    }
    let x = *u.quadric();
    let y = *v.quadric();
    if u.is_zero() || v.is_zero() {
        return Ok(Correspondence::zero(x, y, u.ring().clone()));
    }
    let du = u.homogeneous_dim().ok_or(Error::NotHomogeneous)?;
    let dv = v.homogeneous_dim().ok_or(Error::NotHomogeneous)?;
    if du + dv != x.dim() {
        return Err(Error::DegreeMismatch);
    }
    let mut out = Correspondence::zero(x, y, u.ring().clone());
    let i = dv; // the only dimension the product acts on
    let source_cells = x.cells_in_dim(i)?;
    let target_cells = y.cells_in_dim(i)?;
    let mut block = Mat::zero(
        u.ring().clone(),
        target_cells.len(),
        source_cells.len(),
    );
    for (col, xc) in source_cells.iter().enumerate() {
        let basis = Cycle::from_cell(x, u.ring().clone(), *xc)?;
        let weight = pairing(&basis, u)?;
        if weight.is_zero() {
            continue;
        }
        for (row, yc) in target_cells.iter().enumerate() {
            block.set(row, col, v.coefficient(yc) * &weight);
        }
    }
    out.set_block(i, block)?;
    Ok(out)
}

/// The rational cycle `h^a x h^b` as a correspondence `X -> Y`; the
/// powers must satisfy `(dim X - a) + (dim Y - b) = dim X`.
pub fn h_product(
    x: SplitQuadric,
    y: SplitQuadric,
    ring: &CoeffRing,
    a: u32,
    b: u32,
) -> Result<Correspondence> {
    let u = Cycle::h_power(x, ring.clone(), a);
    let v = Cycle::h_power(y, ring.clone(), b);
    external_product(&u, &v)
}

/// Cycle presentation of a degree-0 correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleForm {
    pub source: SplitQuadric,
    pub target: SplitQuadric,
    pub ring: CoeffRing,
    /// Coefficient of `e x f` over pairs `(e, f)` of basis cells.
    pub coeffs: BTreeMap<(Cell, Cell), BigInt>,
}

impl CycleForm {
    /// Rebuilds the block-matrix presentation.
    pub fn to_correspondence(&self) -> Result<Correspondence> {
        let mut out = Correspondence::zero(self.source, self.target, self.ring.clone());
        for ((e, f), c) in &self.coeffs {
            let u = Cycle::from_cell(self.source, self.ring.clone(), *e)?.scale(c);
            let v = Cycle::from_cell(self.target, self.ring.clone(), *f)?;
            out = out.add(&external_product(&u, &v)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::TestRng;
    use num_traits::One;

    fn quad(dim: u32) -> SplitQuadric {
        SplitQuadric::new(dim, Bits::zero(1)).unwrap()
    }

    fn quad_disc(dim: u32) -> SplitQuadric {
        SplitQuadric::new(dim, Bits::new(1, 1).unwrap()).unwrap()
    }

    fn zz() -> CoeffRing {
        CoeffRing::Integers
    }

    fn random_correspondence(
        rng: &mut TestRng,
        x: SplitQuadric,
        y: SplitQuadric,
        ring: &CoeffRing,
        lo: i64,
        hi: i64,
    ) -> Correspondence {
        let mut out = Correspondence::zero(x, y, ring.clone());
        for i in 0..=out.top_dim() {
            let b = out.block(i);
            let m = rng.matrix(ring, b.rows(), b.cols(), lo, hi);
            out.set_block(i, m).unwrap();
        }
        out
    }

    #[test]
    fn h_times_h_has_the_all_ones_middle() {
        let q = quad(2);
        let c = h_product(q, q, &zz(), 1, 1).unwrap();
        assert_eq!(c.block(1), &Mat::from_i64(zz(), &[&[1, 1], &[1, 1]]));
        assert!(c.block(0).is_zero());
        assert!(c.block(2).is_zero());
    }

    #[test]
    fn fundamental_class_times_point() {
        let q = quad(2);
        let u = Cycle::h_power(q, zz(), 0);
        let v = Cycle::from_cell(q, zz(), Cell::L(0)).unwrap();
        let c = external_product(&u, &v).unwrap();
        assert_eq!(c.block(0), &Mat::from_i64(zz(), &[&[1]]));
        assert!(c.block(1).is_zero());
        assert!(c.block(2).is_zero());
    }

    #[test]
    fn middle_product_sends_the_partner_family() {
        // L(1) x L(1) on the quadric surface: <L,L> = 0, <L',L> = 1,
        // so the action sends L' to L and kills L
        let q = quad(2);
        let l = Cycle::from_cell(q, zz(), Cell::L(1)).unwrap();
        let c = external_product(&l, &l).unwrap();
        assert_eq!(c.block(1), &Mat::from_i64(zz(), &[&[0, 1], &[0, 0]]));
        let lp = Cycle::from_cell(q, zz(), Cell::LPrime).unwrap();
        let applied = c.block(1).apply(&[BigInt::zero(), BigInt::one()]).unwrap();
        assert_eq!(applied, vec![BigInt::one(), BigInt::zero()], "L' maps to L");
        let c2 = external_product(&lp, &l).unwrap();
        assert_eq!(c2.block(1), &Mat::from_i64(zz(), &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let q = quad(2);
        let l0 = Cycle::from_cell(q, zz(), Cell::L(0)).unwrap();
        assert!(matches!(
            external_product(&l0, &l0),
            Err(Error::DegreeMismatch)
        ));
    }

    #[test]
    fn diagonal_is_a_two_sided_identity() {
        let mut rng = TestRng::new(0xd1a6);
        for dim in 1..=4 {
            let q = quad(dim);
            let delta = Correspondence::diagonal(q, zz());
            for _ in 0..10 {
                let a = random_correspondence(&mut rng, q, q, &zz(), -4, 4);
                assert_eq!(delta.compose(&a).unwrap(), a);
                assert_eq!(a.compose(&delta).unwrap(), a);
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let mut rng = TestRng::new(0xa550);
        for ring in [zz(), CoeffRing::residue_pow2(2), CoeffRing::residue_pow2(1)] {
            for dim in 1..=4 {
                let q = quad(dim);
                for _ in 0..20 {
                    let a = random_correspondence(&mut rng, q, q, &ring, -4, 4);
                    let b = random_correspondence(&mut rng, q, q, &ring, -4, 4);
                    let c = random_correspondence(&mut rng, q, q, &ring, -4, 4);
                    let left = c.compose(&b.compose(&a).unwrap()).unwrap();
                    let right = c.compose(&b).unwrap().compose(&a).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn composition_matches_the_cycle_rule() {
        // (g x h) o (e x f) = <f, g> (e x h)
        let mut rng = TestRng::new(0x5e11);
        for dim in [2u32, 3, 4] {
            let q = quad(dim);
            let cells = q.basis_cells();
            for _ in 0..40 {
                let pick = |rng: &mut TestRng| cells[rng.range(0, cells.len() as i64 - 1) as usize];
                let (e, f, g, h) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let mk = |c: Cell| Cycle::from_cell(q, zz(), c).unwrap();
                if f.dim_on(&q) + g.dim_on(&q) != q.dim()
                    || e.dim_on(&q) + f.dim_on(&q) != q.dim()
                    || g.dim_on(&q) + h.dim_on(&q) != q.dim()
                {
                    continue;
                }
                let ef = external_product(&mk(e), &mk(f)).unwrap();
                let gh = external_product(&mk(g), &mk(h)).unwrap();
                let composite = gh.compose(&ef).unwrap();
                let w = pairing(&mk(f), &mk(g)).unwrap();
                let expected = external_product(&mk(e).scale(&w), &mk(h)).unwrap();
                assert_eq!(composite, expected, "e={e:?} f={f:?} g={g:?} h={h:?}");
            }
        }
    }

    #[test]
    fn square_of_h_cross_h() {
        let q = quad(2);
        let c = h_product(q, q, &zz(), 1, 1).unwrap();
        let sq = c.compose(&c).unwrap();
        assert_eq!(sq, c.scale(&BigInt::from(2)));
    }

    #[test]
    fn zero_composes_to_zero() {
        let q = quad(3);
        let z = Correspondence::zero(q, q, zz());
        let d = Correspondence::diagonal(q, zz());
        assert!(z.compose(&d).unwrap().is_zero());
        assert!(d.compose(&z).unwrap().is_zero());
    }

    #[test]
    fn diagonal_cycle_form_on_the_surface() {
        // middle part of the diagonal is L x L' + L' x L for d odd
        let q = quad(2);
        let delta = Correspondence::diagonal(q, zz());
        let cf = delta.to_cycle();
        assert_eq!(cf.coeffs.get(&(Cell::L(1), Cell::LPrime)), Some(&BigInt::one()));
        assert_eq!(cf.coeffs.get(&(Cell::LPrime, Cell::L(1))), Some(&BigInt::one()));
        assert_eq!(cf.coeffs.get(&(Cell::L(1), Cell::L(1))), None);
        // and the off-middle parts pair cells with their duals
        assert_eq!(cf.coeffs.get(&(Cell::H(0), Cell::L(0))), Some(&BigInt::one()));
        assert_eq!(cf.coeffs.get(&(Cell::L(0), Cell::H(0))), Some(&BigInt::one()));
        assert_eq!(cf.to_correspondence().unwrap(), delta);
    }

    #[test]
    fn cycle_form_round_trips() {
        let mut rng = TestRng::new(0x0c1c);
        for (dx, dy) in [(2u32, 2u32), (3, 3), (2, 4), (4, 2), (1, 3)] {
            let x = quad(dx);
            let y = quad(dy);
            for ring in [zz(), CoeffRing::residue_pow2(3)] {
                for _ in 0..10 {
                    let a = random_correspondence(&mut rng, x, y, &ring, -5, 5);
                    assert_eq!(a.to_cycle().to_correspondence().unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn transpose_examples_and_laws() {
        let q = quad(2);
        let delta = Correspondence::diagonal(q, zz());
        assert_eq!(delta.transpose().unwrap(), delta);

        // transpose(e x f) = f x e on cells
        let mut rng = TestRng::new(0x7a13);
        for dim in [2u32, 3, 4] {
            let q = quad(dim);
            let cells = q.basis_cells();
            for e in &cells {
                for f in &cells {
                    if e.dim_on(&q) + f.dim_on(&q) != q.dim() {
                        continue;
                    }
                    let mk = |c: Cell| Cycle::from_cell(q, zz(), c).unwrap();
                    let ef = external_product(&mk(*e), &mk(*f)).unwrap();
                    let fe = external_product(&mk(*f), &mk(*e)).unwrap();
                    assert_eq!(ef.transpose().unwrap(), fe, "e={e:?} f={f:?}");
                }
            }
            for _ in 0..10 {
                let a = random_correspondence(&mut rng, q, q, &zz(), -4, 4);
                let b = random_correspondence(&mut rng, q, q, &zz(), -4, 4);
                assert_eq!(a.transpose().unwrap().transpose().unwrap(), a);
                let lhs = b.compose(&a).unwrap().transpose().unwrap();
                let rhs = a.transpose().unwrap().compose(&b.transpose().unwrap()).unwrap();
                assert_eq!(lhs, rhs, "transpose is an anti-homomorphism");
            }
        }
    }

    #[test]
    fn galois_action_examples() {
        let q = quad_disc(2);
        let gamma = Bits::generator(1, 0).unwrap();
        // zero middle block: fixed
        let mut a = Correspondence::zero(q, q, zz());
        a.set_block(0, Mat::from_i64(zz(), &[&[3]])).unwrap();
        a.set_block(2, Mat::from_i64(zz(), &[&[-1]])).unwrap();
        assert_eq!(a.gal_act(&gamma).unwrap(), a);
        assert!(a.is_gal_invariant().unwrap());
        // symmetric middle [[a,b],[b,a]] is invariant
        let mut b = Correspondence::zero(q, q, zz());
        b.set_block(1, Mat::from_i64(zz(), &[&[2, 5], &[5, 2]])).unwrap();
        assert!(b.is_gal_invariant().unwrap());
        // L x L flips to L' x L'
        let l = Cycle::from_cell(q, zz(), Cell::L(1)).unwrap();
        let lp = Cycle::from_cell(q, zz(), Cell::LPrime).unwrap();
        let ll = external_product(&l, &l).unwrap();
        let lplp = external_product(&lp, &lp).unwrap();
        assert_eq!(ll.gal_act(&gamma).unwrap(), lplp);
        assert_ne!(ll.gal_act(&gamma).unwrap(), ll);
    }

    #[test]
    fn galois_action_is_an_algebra_automorphism() {
        let mut rng = TestRng::new(0x6a10);
        let q = quad_disc(2);
        let gamma = Bits::generator(1, 0).unwrap();
        for _ in 0..30 {
            let a = random_correspondence(&mut rng, q, q, &zz(), -4, 4);
            let b = random_correspondence(&mut rng, q, q, &zz(), -4, 4);
            let lhs = b.compose(&a).unwrap().gal_act(&gamma).unwrap();
            let rhs = b
                .gal_act(&gamma)
                .unwrap()
                .compose(&a.gal_act(&gamma).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            let twice = a.gal_act(&gamma).unwrap().gal_act(&gamma).unwrap();
            assert_eq!(twice, a, "involution");
        }
    }

    #[test]
    fn reduction_examples_and_functoriality() {
        let q = quad(2);
        let delta = Correspondence::diagonal(q, zz());
        let mod2 = CoeffRing::residue_pow2(1);
        assert_eq!(
            delta.reduce(&mod2).unwrap(),
            Correspondence::diagonal(q, mod2.clone())
        );
        assert!(delta.scale(&BigInt::from(2)).reduce(&mod2).unwrap().is_zero());

        let m4 = Mat::from_i64(CoeffRing::residue_pow2(2), &[&[3, 1], &[2, 2]]);
        let c = Correspondence::from_blocks(q, q, CoeffRing::residue_pow2(2), [(1u32, m4)]).unwrap();
        let r = c.reduce(&mod2).unwrap();
        assert_eq!(r.block(1), &Mat::from_i64(mod2.clone(), &[&[1, 1], &[0, 0]]));

        assert!(delta.reduce(&zz()).is_ok(), "Z to Z is the identity");
        assert!(c.reduce(&zz()).is_err(), "no lift from residue to Z");
        assert!(c
            .reduce(&CoeffRing::residue_pow2(3))
            .is_err(), "no reduction from Z/4 to Z/8");

        let mut rng = TestRng::new(0xf00d);
        for _ in 0..20 {
            let a = random_correspondence(&mut rng, q, q, &zz(), -6, 6);
            let b = random_correspondence(&mut rng, q, q, &zz(), -6, 6);
            let lhs = b.compose(&a).unwrap().reduce(&mod2).unwrap();
            let rhs = b
                .reduce(&mod2)
                .unwrap()
                .compose(&a.reduce(&mod2).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "reduction is functorial");
        }
    }

    #[test]
    fn image_ranks_examples() {
        let q = quad(2);
        let delta = Correspondence::diagonal(q, zz());
        assert_eq!(delta.image_ranks().unwrap(), vec![(0, 1), (1, 2), (2, 1)]);
        assert_eq!(delta.middle_rank().unwrap(), 2);

        let zero = Correspondence::zero(q, q, zz());
        assert_eq!(zero.image_ranks().unwrap(), vec![(0, 0), (1, 0), (2, 0)]);

        let e11 = Mat::from_i64(zz(), &[&[1, 0], &[0, 0]]);
        let mid = Correspondence::from_blocks(q, q, zz(), [(1u32, e11)]).unwrap();
        assert_eq!(mid.image_ranks().unwrap(), vec![(0, 0), (1, 1), (2, 0)]);
        assert_eq!(mid.middle_rank().unwrap(), 1);

        let q3 = quad(3);
        assert_eq!(Correspondence::diagonal(q3, zz()).middle_rank().unwrap(), 0);

        let mut bad = Correspondence::zero(q, q, zz());
        bad.set_block(0, Mat::from_i64(zz(), &[&[2]])).unwrap();
        assert!(matches!(bad.image_ranks(), Err(Error::NotIdempotent)));
    }

    #[test]
    fn image_rank_of_non_canonical_idempotent_mod4() {
        // the image span{(2,1)} mod 4 is free of rank 1 but its Howell
        // form has no unit pivot; the mod-2 rank still sees it
        let ring = CoeffRing::residue_pow2(2);
        let q = quad(2);
        let p = Mat::from_i64(ring.clone(), &[&[0, 2], &[0, 1]]);
        let c = Correspondence::from_blocks(q, q, ring, [(1u32, p)]).unwrap();
        assert_eq!(c.middle_rank().unwrap(), 1);
    }

    #[test]
    fn invariant_idempotents_with_nontrivial_disc_avoid_middle_rank_one() {
        // exhaustive over all correspondences mod 2 on the disc surface
        let ring = CoeffRing::residue_pow2(1);
        let q = quad_disc(2);
        let len = Correspondence::zero(q, q, ring.clone()).flatten().len();
        assert_eq!(len, 6);
        let mut seen_rank = [false; 3];
        for bits in 0..(1u64 << len) {
            let entries: Vec<BigInt> = (0..len).map(|i| BigInt::from((bits >> i) & 1)).collect();
            let c = Correspondence::unflatten(q, q, ring.clone(), &entries).unwrap();
            if !c.is_idempotent().unwrap() || !c.is_gal_invariant().unwrap() {
                continue;
            }
            let r = c.middle_rank().unwrap();
            seen_rank[r as usize] = true;
            assert_ne!(r, 1, "no invariant idempotent has middle rank 1");
        }
        assert!(seen_rank[0] && seen_rank[2]);
    }
}
