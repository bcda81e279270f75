//! Motives `(X, p)`: a split quadric together with an idempotent,
//! Galois-invariant degree-0 endo-correspondence, and the graded bases
//! of the image summands that the isomorphism-lifting algorithm works
//! in.
//!
//! Off the middle an image summand of rank 1 is generated by the basis
//! cell itself. On the middle the rank-2 case keeps `{L, L'}`; in the
//! rank-1 case the generator is canonical: over `Z/2^n` the unique
//! unimodular Howell row of the image, over `Z` the Smith-form image
//! generator with positive leading coordinate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::howell::howell;
use crate::mat::Mat;
use crate::quadric::SplitQuadric;
use crate::ring::CoeffRing;
use crate::smith::snf;

/// A quadric with a projector on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motive {
    quadric: SplitQuadric,
    projector: Correspondence,
}

impl Motive {
    pub fn new(projector: Correspondence) -> Result<Self> {
        if !projector.is_endo() {
            return Err(Error::QuadricMismatch);
        }
        if !projector.is_idempotent()? {
            return Err(Error::NotIdempotent);
        }
        if !projector.is_gal_invariant()? {
            return Err(Error::NotGalInvariant);
        }
        Ok(Motive {
            quadric: *projector.source(),
            projector,
        })
    }

    pub fn quadric(&self) -> &SplitQuadric {
        &self.quadric
    }

    pub fn projector(&self) -> &Correspondence {
        &self.projector
    }

    pub fn ring(&self) -> &CoeffRing {
        self.projector.ring()
    }

    pub fn image_ranks(&self) -> Result<Vec<(u32, u32)>> {
        self.projector.image_ranks()
    }

    pub fn middle_rank(&self) -> Result<u32> {
        self.projector.middle_rank()
    }
}

/// Basis of one graded summand of the image of a projector: columns in
/// the coordinate space of `CH_i`, together with dual vectors pairing
/// to the Kronecker delta against them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandBasis {
    pub dim: u32,
    /// One column per basis vector; `chow_rank(X, i)` entries each.
    pub vectors: Vec<Vec<BigInt>>,
    /// `duals[j] . vectors[k] = delta_jk`.
    pub duals: Vec<Vec<BigInt>>,
}

/// Graded image bases of an idempotent endo-correspondence, in
/// increasing dimension, one entry per dimension of nonzero rank.
pub fn image_bases(projector: &Correspondence) -> Result<Vec<SummandBasis>> {
    if !projector.is_idempotent()? {
        return Err(Error::NotIdempotent);
    }
    let q = projector.source();
    let ring = projector.ring();
    let mut out = Vec::new();
    for i in 0..=q.dim() {
        let block = projector.block(i);
        let rank = block_rank_of_idempotent(block)?;
        if rank == 0 {
            continue;
        }
        let ambient = q.chow_rank(i)? as usize;
        let (vectors, duals): (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) = if ambient == 1 {
            (vec![vec![BigInt::one()]], vec![vec![BigInt::one()]])
        } else if rank == 2 {
            let std = vec![
                vec![BigInt::one(), BigInt::zero()],
                vec![BigInt::zero(), BigInt::one()],
            ];
            (std.clone(), std)
        } else {
            let g = image_generator_rank1(block)?;
            let w = dual_vector_2(ring, &g)?;
            (vec![g], vec![w])
        };
        out.push(SummandBasis {
            dim: i,
            vectors,
            duals,
        });
    }
    Ok(out)
}

fn block_rank_of_idempotent(b: &Mat) -> Result<u32> {
    match b.ring() {
        CoeffRing::Integers => Ok(snf(b)?.rank() as u32),
        CoeffRing::Residue(_) => {
            let mod2 = b.map_ring(&CoeffRing::residue_pow2(1));
            Ok(howell(&mod2)?.num_rows() as u32)
        }
    }
}

/// Canonical generator of the rank-1 free image of an idempotent
/// block.
fn image_generator_rank1(b: &Mat) -> Result<Vec<BigInt>> {
    match b.ring() {
        CoeffRing::Integers => {
            // U A V = S with S = diag(1, 0): the image is spanned by
            // the first column of U^{-1}; normalise the sign
            let dec = snf(b)?;
            if dec.rank() != 1 || !dec.s.at(0, 0).is_one() {
                return Err(Error::NotRankOneIdempotent);
            }
            let uinv = invert_unimodular(&dec.u)?;
            let mut g: Vec<BigInt> = (0..uinv.rows()).map(|r| uinv.at(r, 0).clone()).collect();
            if let Some(first) = g.iter().find(|e| !e.is_zero()) {
                if first.is_negative() {
                    for e in g.iter_mut() {
                        *e = -&*e;
                    }
                }
            }
            Ok(g)
        }
        CoeffRing::Residue(_) => {
            let h = howell(&b.transpose())?;
            let mut gens: Vec<&Vec<BigInt>> = h
                .rows()
                .iter()
                .filter(|row| row.iter().any(|e| e.is_odd()))
                .collect();
            if gens.len() != 1 {
                return Err(Error::NotRankOneIdempotent);
            }
            Ok(gens.pop().expect("one unimodular row").clone())
        }
    }
}

/// Inverse of a unimodular integer matrix through its Smith form.
fn invert_unimodular(u: &Mat) -> Result<Mat> {
    let n = u.rows();
    let det = u.det()?;
    if det.clone().abs() != BigInt::one() {
        return Err(Error::NotAUnit(format!("matrix with determinant {det}")));
    }
    // adjugate scaled by det^{-1} = det for det = +-1
    let mut adj = Mat::zero(CoeffRing::Integers, n, n);
    for r in 0..n {
        for c in 0..n {
            let minor = minor_det(u, c, r)?;
            let sign = if (r + c) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            adj.set(r, c, sign * minor * &det);
        }
    }
    Ok(adj)
}

fn minor_det(u: &Mat, skip_row: usize, skip_col: usize) -> Result<BigInt> {
    let n = u.rows();
    let mut entries = Vec::with_capacity((n - 1) * (n - 1));
    for r in 0..n {
        if r == skip_row {
            continue;
        }
        for c in 0..n {
            if c == skip_col {
                continue;
            }
            entries.push(u.at(r, c).clone());
        }
    }
    Mat::new(CoeffRing::Integers, n - 1, n - 1, entries)?.det()
}

/// Vector `w` with `w . g = 1` for a unimodular `g` of length 2, from
/// the extended Euclid relation on representatives.
pub fn dual_vector_2(ring: &CoeffRing, g: &[BigInt]) -> Result<Vec<BigInt>> {
    if g.len() != 2 {
        return Err(Error::DimensionMismatch("expected a vector of length 2".into()));
    }
    let ext = g[0].extended_gcd(&g[1]);
    match ring {
        CoeffRing::Integers => {
            if !ext.gcd.is_one() {
                return Err(Error::NotAUnit(format!("({}, {})", g[0], g[1])));
            }
            Ok(vec![ext.x, ext.y])
        }
        CoeffRing::Residue(_) => {
            let inv = ring.inverse(&ext.gcd)?;
            Ok(vec![ring.reduce(&(ext.x * &inv)), ring.reduce(&(ext.y * inv))])
        }
    }
}
