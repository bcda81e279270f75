//! Lifting of motives between coefficient rings: idempotents from mod 2
//! to mod `2^n`, projectors from mod `2^n` to the integers, and
//! isomorphisms of mod-`2^n` motives to integral isomorphisms.
//!
//! The isomorphism lift follows a fixed normalisation recipe. Writing
//! the given isomorphism as restricted matrices on the graded image
//! summands, the off-middle entries are units; composing with
//! `identity + 2 sum k_i (e_(D-i) x e_i)` rescales each of them to 1,
//! because the doubled complementary-cell products are rational and act
//! by `1 + 2 k_i` on dimension `i`. What remains is the middle 2x2
//! block: swap-symmetric when the common discriminant is nontrivial,
//! where subtracting a multiple of `h^d x h^d` reaches the identity,
//! and an arbitrary invertible matrix when the discriminant is trivial,
//! where one more correction pins its determinant to 1 so that an exact
//! integral `SL_2` lift exists. The integral output is assembled on the
//! image bases with zero off-summand entries; it is generally not a
//! lift of the input isomorphism, only of its class.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::correspondence::{h_product, Correspondence};
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::lifts::{conjugate_e11, lift_idempotent_newton, lift_sl, rank1_decomposition_to_sl2};
use crate::mat::Mat;
use crate::motive::{image_bases, Motive, SummandBasis};
use crate::quadric::{Bits, SplitQuadric};
use crate::rationality::RationalityContext;
use crate::ring::{unit_decompose, CoeffRing};

/// The isomorphism-class invariant of a motive: the multiset of twist
/// dimensions of its split summands, plus a marker for a full middle
/// carrying a nontrivial discriminant (which is then an indecomposable
/// two-dimensional summand rather than two split twists).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsoClass {
    /// dimension -> multiplicity of split Tate summands
    pub twists: BTreeMap<u32, u32>,
    /// (middle dimension, discriminant character), when the middle has
    /// rank 2 and the discriminant is nontrivial
    pub middle_marker: Option<(u32, Bits)>,
}

/// Why two motives cannot be isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotIsomorphicReason {
    /// Exactly one side has a full middle.
    MiddleRankMismatch,
    /// Both have full middles but the quadrics differ in dimension.
    DimensionMismatch,
    /// Both have full middles but different discriminants.
    DiscriminantMismatch,
    /// The graded ranks of the images differ somewhere.
    RankProfileMismatch,
}

impl NotIsomorphicReason {
    pub fn describe(&self) -> &'static str {
        match self {
            NotIsomorphicReason::MiddleRankMismatch => "only one middle has rank 2",
            NotIsomorphicReason::DimensionMismatch => "full middles in different dimensions",
            NotIsomorphicReason::DiscriminantMismatch => "full middles with different discriminants",
            NotIsomorphicReason::RankProfileMismatch => "graded image ranks differ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(Correspondence),
    NotIsomorphic(NotIsomorphicReason),
}

/// The twist multiset and middle marker of a motive.
pub fn classify(motive: &Motive) -> Result<IsoClass> {
    let q = motive.quadric();
    let mut twists = BTreeMap::new();
    let mut middle_marker = None;
    for (i, r) in motive.image_ranks()? {
        if r == 0 {
            continue;
        }
        if q.is_even() && i == q.half() && !q.disc().is_zero() {
            if r == 1 {
                return Err(Error::MiddleRankContradiction);
            }
            middle_marker = Some((i, *q.disc()));
        } else {
            twists.insert(i, r);
        }
    }
    Ok(IsoClass {
        twists,
        middle_marker,
    })
}

/// Lifts an idempotent mod 2 to an idempotent mod `2^n` congruent to
/// it, applying the Newton iteration blockwise to the canonical
/// entrywise preimage. The iteration is a polynomial in the input, so
/// Galois invariance is preserved.
pub fn lift_mod2_to_mod2n(pi: &Correspondence, n: u32) -> Result<Correspondence> {
    if pi.ring().two_exponent() != Some(1) {
        return Err(Error::RingMismatch("expected mod-2 coefficients".into()));
    }
    if !pi.is_idempotent()? {
        return Err(Error::NotIdempotent);
    }
    if !pi.is_gal_invariant()? {
        return Err(Error::NotGalInvariant);
    }
    let ring = CoeffRing::residue_pow2(n);
    let mut out = Correspondence::zero(*pi.source(), *pi.target(), ring.clone());
    for i in 0..=pi.top_dim() {
        let lifted = lift_idempotent_newton(&pi.block(i).map_ring(&ring))?;
        out.set_block(i, lifted)?;
    }
    debug_assert!(out.is_idempotent()?);
    debug_assert!(out.is_gal_invariant()?);
    Ok(out)
}

/// Lifts a rational Galois-invariant idempotent mod `2^n` to an
/// integral one with the same reduction.
///
/// Off-middle blocks of an idempotent are 0 or 1 and lift verbatim, as
/// does a middle equal to 0 or the identity — which is the only
/// possibility when the discriminant is nontrivial, the middle then
/// being an indecomposable Galois module. A middle of rank 1 (trivial
/// discriminant) is conjugate to the elementary projector by a
/// determinant-one matrix; lifting that matrix to `SL_2(Z)` and
/// conjugating back gives the integral middle block.
pub fn lift_projector(tau: &Correspondence, ctx: &RationalityContext) -> Result<Correspondence> {
    let n = tau
        .ring()
        .two_exponent()
        .ok_or(Error::ExpectedTwoPowerResidue)?;
    if n != ctx.modulus_exponent() {
        return Err(Error::RingMismatch("projector modulus must match the context".into()));
    }
    if !tau.is_endo() {
        return Err(Error::QuadricMismatch);
    }
    if !tau.is_idempotent()? {
        return Err(Error::NotIdempotent);
    }
    if !tau.is_gal_invariant()? {
        return Err(Error::NotGalInvariant);
    }
    let q = *tau.source();
    let zz = CoeffRing::Integers;
    let mut out = Correspondence::zero(q, q, zz.clone());
    for i in 0..=q.dim() {
        let block = tau.block(i);
        if q.is_even() && i == q.half() {
            if block.is_zero() || block.is_identity() {
                out.set_block(i, block.balanced_integer_lift())?;
                continue;
            }
            // a proper middle idempotent has rank 1
            if !q.disc().is_zero() {
                return Err(Error::MiddleRankContradiction);
            }
            let g_residue = rank1_decomposition_to_sl2(block)?;
            let g = lift_sl(&g_residue)?;
            out.set_block(i, conjugate_e11(&g)?)?;
        } else {
            let e = block.at(0, 0);
            if !e.is_zero() && !e.is_one() {
                return Err(Error::NotIdempotent);
            }
            out.set_block(i, block.balanced_integer_lift())?;
        }
    }
    // postconditions: integral idempotent, invariant, reduces to the
    // input, and rational once the input joins the context
    if !out.is_idempotent()? {
        return Err(Error::NotIdempotent);
    }
    if !out.is_gal_invariant()? {
        return Err(Error::NotGalInvariant);
    }
    if out.reduce(tau.ring())? != *tau {
        return Err(Error::InvalidInput("lift does not reduce to the input".into()));
    }
    let ctx2 = ctx.add_generators(vec![tau.clone()])?;
    if !ctx2.is_rational_integral(&out)? {
        return Err(Error::NotRational);
    }
    Ok(out)
}

/// Restricted matrix of `alpha` on the image summands in dimension
/// `dim`: columns are the `alpha`-images of the source basis vectors,
/// expressed in the target basis. Fails when an image falls outside the
/// target summand.
fn restricted_matrix(
    alpha: &Correspondence,
    source_basis: &SummandBasis,
    target_basis: &SummandBasis,
) -> Result<Mat> {
    let ring = alpha.ring().clone();
    let i = source_basis.dim;
    let block = alpha.block(i);
    let rank = source_basis.vectors.len();
    if target_basis.vectors.len() != rank || target_basis.dim != i {
        return Err(Error::DimensionMismatch("summand ranks differ".into()));
    }
    let mut a = Mat::zero(ring.clone(), rank, rank);
    for (col, e) in source_basis.vectors.iter().enumerate() {
        let e_red: Vec<BigInt> = e.iter().map(|v| ring.reduce(v)).collect();
        let w = block.apply(&e_red)?;
        // coordinates in the target basis, through the dual vectors
        let mut recon = vec![BigInt::zero(); w.len()];
        for (row, (f, fd)) in target_basis
            .vectors
            .iter()
            .zip(&target_basis.duals)
            .enumerate()
        {
            let mut coeff = BigInt::zero();
            for (wk, fdk) in w.iter().zip(fd) {
                coeff += wk * fdk;
            }
            let coeff = ring.reduce(&coeff);
            for (rk, fk) in recon.iter_mut().zip(f) {
                *rk = ring.reduce(&(&*rk + &coeff * fk));
            }
            a.set(row, col, coeff);
        }
        if recon != w {
            return Err(Error::NotInvertibleOnSummands);
        }
    }
    Ok(a)
}

fn restricted_matrices(
    alpha: &Correspondence,
    source_bases: &[SummandBasis],
    target_bases: &[SummandBasis],
) -> Result<Vec<(u32, Mat)>> {
    if source_bases.len() != target_bases.len() {
        return Err(Error::NotInvertibleOnSummands);
    }
    source_bases
        .iter()
        .zip(target_bases)
        .map(|(s, t)| restricted_matrix(alpha, s, t).map(|m| (s.dim, m)))
        .collect()
}

/// The correspondence that maps each source basis vector to the
/// matching target basis vector, with zero off-summand entries:
/// `sigma . E . rho` where the blocks of `E` are `sum_j f_j w_j^T`
/// over the dual vectors `w_j` of the source basis. `middle_override`
/// replaces the block at the source middle dimension.
fn profile_correspondence(
    rho: &Correspondence,
    sigma: &Correspondence,
    rho_bases: &[SummandBasis],
    sigma_bases: &[SummandBasis],
    middle_override: Option<&Mat>,
) -> Result<Correspondence> {
    let ring = rho.ring().clone();
    let x = *rho.source();
    let y = *sigma.source();
    let mut e = Correspondence::zero(x, y, ring.clone());
    for (sb, tb) in rho_bases.iter().zip(sigma_bases) {
        let i = sb.dim;
        let rows = y.chow_rank(i)? as usize;
        let cols = x.chow_rank(i)? as usize;
        let mut block = Mat::zero(ring.clone(), rows, cols);
        if let (Some(m), true) = (middle_override, x.is_even() && i == x.half()) {
            block = m.clone();
        } else {
            for (f, wd) in tb.vectors.iter().zip(&sb.duals) {
                for (r, fr) in f.iter().enumerate() {
                    for (c, wc) in wd.iter().enumerate() {
                        let v = block.at(r, c) + fr * wc;
                        block.set(r, c, v);
                    }
                }
            }
        }
        e.set_block(i, block)?;
    }
    sigma.compose(&e)?.compose(rho)
}

/// The correction `identity + 2 sum k_i (e_(D-i) x e_i)` over the
/// active non-middle dimensions, with `1 + 2 k_i` inverse to the given
/// diagonal entries. Each doubled product is checked against the
/// rational span.
fn diagonal_correction(
    x: SplitQuadric,
    ring: &CoeffRing,
    entries: &[(u32, BigInt)],
    ctx: &RationalityContext,
) -> Result<Correspondence> {
    let mut gamma = Correspondence::diagonal(x, ring.clone());
    for (i, nu) in entries {
        let k = unit_decompose(ring, nu)?.k;
        let u_cell = x.cells_in_dim(x.dim() - i)?[0];
        let v_cell = x.cells_in_dim(*i)?[0];
        let u = Cycle::from_cell(x, ring.clone(), u_cell)?;
        let v = Cycle::from_cell(x, ring.clone(), v_cell)?;
        let doubled =
            crate::correspondence::external_product(&u, &v)?.scale(&BigInt::from(2));
        if !ctx.is_rational_mod(&doubled)? {
            return Err(Error::NotRational);
        }
        gamma = gamma.add(&doubled.scale(&k))?;
    }
    Ok(gamma)
}

fn is_identity_profile(mats: &[(u32, Mat)]) -> bool {
    mats.iter().all(|(_, m)| m.is_identity())
}

/// Builds an integral isomorphism `(X, rho) -> (Y, sigma)` out of an
/// invertible mod-`2^n` one, or reports that the two motives cannot be
/// isomorphic. The output `c` satisfies `c = sigma . c . rho`, is
/// Galois-invariant, reduces into the rational span of the extended
/// context, and is invertible on the summands; it is not in general
/// congruent to `alpha`.
pub fn lift_isomorphism(
    rho: &Correspondence,
    sigma: &Correspondence,
    alpha: &Correspondence,
    ctx: &RationalityContext,
) -> Result<IsoOutcome> {
    // -- validate the inputs
    for p in [rho, sigma] {
        if !p.ring().is_integers() {
            return Err(Error::RingMismatch("projectors must be integral".into()));
        }
        if !p.is_idempotent()? {
            return Err(Error::NotIdempotent);
        }
        if !p.is_gal_invariant()? {
            return Err(Error::NotGalInvariant);
        }
    }
    let ring = ctx.ring().clone();
    if alpha.ring() != &ring {
        return Err(Error::RingMismatch("isomorphism modulus must match the context".into()));
    }
    let x = *rho.source();
    let y = *sigma.source();
    if alpha.source() != &x || alpha.target() != &y {
        return Err(Error::QuadricMismatch);
    }
    if !alpha.is_gal_invariant()? {
        return Err(Error::NotGalInvariant);
    }
    let rho_n = rho.reduce(&ring)?;
    let sigma_n = sigma.reduce(&ring)?;
    if sigma_n.compose(alpha)?.compose(&rho_n)? != *alpha {
        return Err(Error::InvalidInput(
            "isomorphism is not sandwiched between the projectors".into(),
        ));
    }

    // -- structural obstructions
    let r_x = rho.middle_rank()?;
    let r_y = sigma.middle_rank()?;
    if (r_x == 2) != (r_y == 2) {
        return Ok(IsoOutcome::NotIsomorphic(NotIsomorphicReason::MiddleRankMismatch));
    }
    if r_x == 2 {
        if x.dim() != y.dim() {
            return Ok(IsoOutcome::NotIsomorphic(NotIsomorphicReason::DimensionMismatch));
        }
        if x.disc() != y.disc() {
            return Ok(IsoOutcome::NotIsomorphic(NotIsomorphicReason::DiscriminantMismatch));
        }
    }
    let profile = |p: &Correspondence| -> Result<BTreeMap<u32, u32>> {
        Ok(p.image_ranks()?
            .into_iter()
            .filter(|&(_, r)| r > 0)
            .collect())
    };
    if profile(rho)? != profile(sigma)? {
        return Ok(IsoOutcome::NotIsomorphic(NotIsomorphicReason::RankProfileMismatch));
    }

    // -- the working context and the graded restricted matrices
    let ctx2 = ctx.add_generators(vec![rho_n.clone(), sigma_n.clone(), alpha.clone()])?;
    if !ctx2.is_rational_mod(alpha)? {
        return Err(Error::NotRational);
    }
    let rho_bases_z = image_bases(rho)?;
    let sigma_bases_z = image_bases(sigma)?;
    let reduce_bases = |bases: &[SummandBasis]| -> Vec<SummandBasis> {
        bases
            .iter()
            .map(|b| SummandBasis {
                dim: b.dim,
                vectors: b
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(|e| ring.reduce(e)).collect())
                    .collect(),
                duals: b
                    .duals
                    .iter()
                    .map(|v| v.iter().map(|e| ring.reduce(e)).collect())
                    .collect(),
            })
            .collect()
    };
    let rho_bases = reduce_bases(&rho_bases_z);
    let sigma_bases = reduce_bases(&sigma_bases_z);
    let restricted = restricted_matrices(alpha, &rho_bases, &sigma_bases)?;
    for (_, m) in &restricted {
        if !ring.is_unit(&m.det()?) {
            return Err(Error::NotInvertibleOnSummands);
        }
    }

    let middle_dim = x.half();
    let has_full_middle = r_x == 2;

    let final_check = |c: &Correspondence, expected_reduction: &Correspondence| -> Result<()> {
        if !c.is_gal_invariant()? {
            return Err(Error::NotGalInvariant);
        }
        if &c.reduce(&ring)? != expected_reduction {
            return Err(Error::InvalidInput("reduction mismatch in the lifted isomorphism".into()));
        }
        if !ctx2.is_rational_integral(c)? {
            return Err(Error::NotRational);
        }
        Ok(())
    };

    if !has_full_middle {
        // every restricted entry is a 1x1 unit
        let lambda_middle = restricted
            .iter()
            .find(|(i, _)| x.is_even() && *i == middle_dim)
            .map(|(_, m)| m.at(0, 0).clone());
        let beta = match &lambda_middle {
            Some(l) => alpha.scale(&ring.inverse(l)?),
            None => alpha.clone(),
        };
        let beta_restricted = restricted_matrices(&beta, &rho_bases, &sigma_bases)?;
        let outer: Vec<(u32, BigInt)> = beta_restricted
            .iter()
            .filter(|(i, _)| !(x.is_even() && *i == middle_dim))
            .map(|(i, m)| (*i, m.at(0, 0).clone()))
            .collect();
        let gamma = diagonal_correction(x, &ring, &outer, &ctx2)?;
        let normalized = sigma_n
            .compose(&beta.compose(&gamma)?)?
            .compose(&rho_n)?;
        let norm_restricted = restricted_matrices(&normalized, &rho_bases, &sigma_bases)?;
        if !is_identity_profile(&norm_restricted) {
            return Err(Error::NotInvertibleOnSummands);
        }
        if !ctx2.is_rational_mod(&normalized)? {
            return Err(Error::NotRational);
        }
        let c = profile_correspondence(rho, sigma, &rho_bases_z, &sigma_bases_z, None)?;
        final_check(&c, &normalized)?;
        return Ok(IsoOutcome::Isomorphic(c));
    }

    // full middle on both sides: x.dim() == y.dim(), same discriminant
    let b = restricted
        .iter()
        .find(|(i, _)| *i == middle_dim)
        .map(|(_, m)| m.clone())
        .expect("full middle is active");

    if !x.disc().is_zero() {
        // swap-symmetric middle: B = [[a, b], [b, a]]
        if b.at(0, 0) != b.at(1, 1) || b.at(0, 1) != b.at(1, 0) {
            return Err(Error::NotGalInvariant);
        }
        let diff = ring.reduce(&(b.at(0, 0) - b.at(0, 1)));
        let alpha1 = alpha.scale(&ring.inverse(&diff)?);
        let a1_restricted = restricted_matrices(&alpha1, &rho_bases, &sigma_bases)?;
        let outer: Vec<(u32, BigInt)> = a1_restricted
            .iter()
            .filter(|(i, _)| *i != middle_dim)
            .map(|(i, m)| (*i, m.at(0, 0).clone()))
            .collect();
        let gamma = diagonal_correction(x, &ring, &outer, &ctx2)?;
        let alpha2 = sigma_n
            .compose(&alpha1.compose(&gamma)?)?
            .compose(&rho_n)?;
        let b2 = alpha2.block(middle_dim).clone();
        let off = b2.at(0, 1).clone();
        if ring.reduce(&(b2.at(0, 0) - &off)) != BigInt::one() {
            return Err(Error::NotInvertibleOnSummands);
        }
        let hxy = h_product(x, y, &ring, middle_dim, middle_dim)?;
        let normalized = alpha2.sub(&hxy.scale(&off))?;
        let norm_restricted = restricted_matrices(&normalized, &rho_bases, &sigma_bases)?;
        if !is_identity_profile(&norm_restricted) {
            return Err(Error::NotInvertibleOnSummands);
        }
        if !ctx2.is_rational_mod(&normalized)? {
            return Err(Error::NotRational);
        }
        let c = profile_correspondence(rho, sigma, &rho_bases_z, &sigma_bases_z, None)?;
        final_check(&c, &normalized)?;
        return Ok(IsoOutcome::Isomorphic(c));
    }

    // trivial discriminant: normalise the outer diagonal, fix the
    // middle determinant to 1, lift to SL_2(Z)
    let outer: Vec<(u32, BigInt)> = restricted
        .iter()
        .filter(|(i, _)| *i != middle_dim)
        .map(|(i, m)| (*i, m.at(0, 0).clone()))
        .collect();
    let gamma = diagonal_correction(x, &ring, &outer, &ctx2)?;
    let alpha1 = sigma_n.compose(&alpha.compose(&gamma)?)?.compose(&rho_n)?;
    let det_b = alpha1.block(middle_dim).det()?;
    let k = unit_decompose(&ring, &det_b)?.k;
    let hxx = h_product(x, x, &ring, middle_dim, middle_dim)?;
    let delta_corr = Correspondence::diagonal(x, ring.clone()).add(&hxx.scale(&k))?;
    let alpha2 = sigma_n
        .compose(&alpha1.compose(&delta_corr)?)?
        .compose(&rho_n)?;
    let b2 = alpha2.block(middle_dim).clone();
    if !b2.det()?.is_one() {
        return Err(Error::DetNotOne);
    }
    let outer2: Vec<(u32, Mat)> = restricted_matrices(&alpha2, &rho_bases, &sigma_bases)?
        .into_iter()
        .filter(|(i, _)| *i != middle_dim)
        .collect();
    if !is_identity_profile(&outer2) {
        return Err(Error::NotInvertibleOnSummands);
    }
    if !ctx2.is_rational_mod(&alpha2)? {
        return Err(Error::NotRational);
    }
    let g = lift_sl(&b2)?;
    let c = profile_correspondence(rho, sigma, &rho_bases_z, &sigma_bases_z, Some(&g))?;
    final_check(&c, &alpha2)?;
    Ok(IsoOutcome::Isomorphic(c))
}

/// The categorical inverse of a lifted isomorphism: restricted matrices
/// are inverted on the summands and reassembled with zero off-summand
/// entries. Composites satisfy `inv . c = rho` and `c . inv = sigma`.
pub fn isomorphism_inverse(
    c: &Correspondence,
    rho: &Correspondence,
    sigma: &Correspondence,
) -> Result<Correspondence> {
    let rho_bases = image_bases(rho)?;
    let sigma_bases = image_bases(sigma)?;
    let restricted = restricted_matrices(c, &rho_bases, &sigma_bases)?;
    let mut middle_inv = None;
    let x = rho.source();
    for (i, m) in &restricted {
        if x.is_even() && *i == x.half() && m.rows() == 2 {
            middle_inv = Some(crate::lifts::inverse_det_one_2x2(m)?);
        } else if !m.is_identity() {
            return Err(Error::NotInvertibleOnSummands);
        }
    }
    profile_correspondence(sigma, rho, &sigma_bases, &rho_bases, middle_inv.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::GaloisContext;

    fn quad(dim: u32) -> SplitQuadric {
        SplitQuadric::new(dim, Bits::zero(1)).unwrap()
    }

    fn quad_disc(dim: u32) -> SplitQuadric {
        SplitQuadric::new(dim, Bits::new(1, 1).unwrap()).unwrap()
    }

    fn galois(n: u32) -> GaloisContext {
        GaloisContext::new(1, n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let delta_triv = Correspondence::diagonal(quad(2), CoeffRing::Integers);
        let c = classify(&Motive::new(delta_triv).unwrap()).unwrap();
        assert_eq!(
            c.twists,
            BTreeMap::from([(0u32, 1u32), (1, 2), (2, 1)]),
            "full split surface"
        );
        assert!(c.middle_marker.is_none());

        let delta_disc = Correspondence::diagonal(quad_disc(2), CoeffRing::Integers);
        let c = classify(&Motive::new(delta_disc).unwrap()).unwrap();
        assert_eq!(c.twists, BTreeMap::from([(0u32, 1u32), (2, 1)]));
        assert_eq!(c.middle_marker, Some((1, Bits::new(1, 1).unwrap())));

        let delta_conic = Correspondence::diagonal(quad(1), CoeffRing::Integers);
        let c = classify(&Motive::new(delta_conic).unwrap()).unwrap();
        assert_eq!(c.twists, BTreeMap::from([(0u32, 1u32), (1, 1)]));
        assert!(c.middle_marker.is_none());
    }

    #[test]
    fn newton_lift_of_correspondences() {
        let q = quad(2);
        let mod2 = CoeffRing::residue_pow2(1);
        let delta = Correspondence::diagonal(q, mod2.clone());
        let lifted = lift_mod2_to_mod2n(&delta, 3).unwrap();
        assert_eq!(lifted, Correspondence::diagonal(q, CoeffRing::residue_pow2(3)));

        let zero = Correspondence::zero(q, q, mod2.clone());
        assert!(lift_mod2_to_mod2n(&zero, 3).unwrap().is_zero());

        // a middle idempotent mod 2 lifts to an idempotent mod 4
        let m = Mat::from_i64(mod2.clone(), &[&[1, 1], &[0, 0]]);
        let pi = Correspondence::from_blocks(q, q, mod2, [(1u32, m)]).unwrap();
        let lifted = lift_mod2_to_mod2n(&pi, 2).unwrap();
        assert!(lifted.is_idempotent().unwrap());
        assert_eq!(lifted.reduce(&CoeffRing::residue_pow2(1)).unwrap(), pi);
    }

    #[test]
    fn projector_lift_keeps_zero_one_diagonals() {
        let q = quad(3);
        let ring = CoeffRing::residue_pow2(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let tau = Correspondence::from_blocks(
            q,
            q,
            ring,
            [
                (0u32, Mat::from_i64(CoeffRing::residue_pow2(2), &[&[1]])),
                (2u32, Mat::from_i64(CoeffRing::residue_pow2(2), &[&[1]])),
            ],
        )
        .unwrap();
        let rho = lift_projector(&tau, &ctx).unwrap();
        assert_eq!(rho.block(0), &Mat::from_i64(CoeffRing::Integers, &[&[1]]));
        assert_eq!(rho.block(1), &Mat::zero(CoeffRing::Integers, 1, 1));
        assert_eq!(rho.block(2), &Mat::from_i64(CoeffRing::Integers, &[&[1]]));
        assert_eq!(rho.block(3), &Mat::zero(CoeffRing::Integers, 1, 1));
    }

    #[test]
    fn projector_lift_of_nontrivial_disc_middle() {
        let q = quad_disc(2);
        let ring = CoeffRing::residue_pow2(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let tau = Correspondence::from_blocks(q, q, ring.clone(), [(1u32, Mat::identity(ring, 2))])
            .unwrap();
        let rho = lift_projector(&tau, &ctx).unwrap();
        assert!(rho.block(1).is_identity());
    }

    #[test]
    fn projector_lift_worked_middle_example() {
        let q = quad(2);
        let ring = CoeffRing::residue_pow2(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let tau = Correspondence::from_blocks(
            q,
            q,
            ring.clone(),
            [(1u32, Mat::from_i64(ring, &[&[3, 1], &[2, 2]]))],
        )
        .unwrap();
        let rho = lift_projector(&tau, &ctx).unwrap();
        assert_eq!(
            rho.block(1),
            &Mat::from_i64(CoeffRing::Integers, &[&[-1, 1], &[-2, 2]]),
            "bit-exact middle lift"
        );
        assert!(rho.is_idempotent().unwrap());
    }

    #[test]
    fn projector_lift_rejects_bad_inputs() {
        let q = quad(2);
        let ring = CoeffRing::residue_pow2(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let not_idem = Correspondence::from_blocks(
            q,
            q,
            ring.clone(),
            [(0u32, Mat::from_i64(ring.clone(), &[&[2]]))],
        )
        .unwrap();
        assert!(matches!(
            lift_projector(&not_idem, &ctx),
            Err(Error::NotIdempotent)
        ));
        // invariant idempotents on a twisted middle must be 0 or 1 there
        let qd = quad_disc(2);
        let ctxd = RationalityContext::standard(galois(2), qd, qd).unwrap();
        let mod2 = Correspondence::diagonal(qd, CoeffRing::residue_pow2(1));
        assert!(matches!(
            lift_projector(&mod2, &ctxd),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn identity_isomorphism_lifts_to_the_diagonal() {
        let q = quad(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let alpha = Correspondence::diagonal(q, ctx.ring().clone());
        let out = lift_isomorphism(&rho, &rho, &alpha, &ctx).unwrap();
        assert_eq!(out, IsoOutcome::Isomorphic(rho.clone()));
    }

    #[test]
    fn disc_field_swap_middle_lifts_to_the_identity() {
        // common nontrivial discriminant, middle B = [[0,1],[1,0]] mod 4
        let q = quad_disc(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let mut alpha = Correspondence::diagonal(q, ring.clone());
        alpha
            .set_block(1, Mat::from_i64(ring, &[&[0, 1], &[1, 0]]))
            .unwrap();
        let out = lift_isomorphism(&rho, &rho, &alpha, &ctx).unwrap();
        assert_eq!(out, IsoOutcome::Isomorphic(rho.clone()), "output is the integral identity");
    }

    #[test]
    fn disc_trivial_middle_lifts_to_minus_identity() {
        // trivial discriminant, middle B = [[1,2],[2,1]] mod 8
        let q = quad(2);
        let ctx = RationalityContext::standard(galois(3), q, q).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let mut alpha = Correspondence::diagonal(q, ring.clone());
        alpha
            .set_block(1, Mat::from_i64(ring, &[&[1, 2], &[2, 1]]))
            .unwrap();
        let out = lift_isomorphism(&rho, &rho, &alpha, &ctx).unwrap();
        let IsoOutcome::Isomorphic(c) = out else {
            panic!("expected an isomorphism");
        };
        assert_eq!(
            c.block(1),
            &Mat::from_i64(CoeffRing::Integers, &[&[-1, 0], &[0, -1]]),
            "middle block is minus the identity"
        );
        assert!(c.block(0).is_identity());
        assert!(c.block(2).is_identity());
        let inv = isomorphism_inverse(&c, &rho, &rho).unwrap();
        assert_eq!(inv.compose(&c).unwrap(), rho);
        assert_eq!(c.compose(&inv).unwrap(), rho);
    }

    #[test]
    fn disc_field_even_middle_dimension_four() {
        // full middle in dimension 2 of a 4-fold, common nontrivial
        // discriminant, swap-symmetric B = [[2,1],[1,2]] mod 4
        let q = SplitQuadric::new(4, Bits::new(1, 1).unwrap()).unwrap();
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let mut alpha = Correspondence::diagonal(q, ring.clone());
        alpha
            .set_block(2, Mat::from_i64(ring, &[&[2, 1], &[1, 2]]))
            .unwrap();
        let out = lift_isomorphism(&rho, &rho, &alpha, &ctx).unwrap();
        assert_eq!(out, IsoOutcome::Isomorphic(rho.clone()));
    }

    #[test]
    fn mismatched_markers_are_not_isomorphic() {
        let xd = quad_disc(2);
        let y = quad(2);
        let ctx = RationalityContext::standard(galois(2), xd, y).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(xd, CoeffRing::Integers);
        let sigma = Correspondence::diagonal(y, CoeffRing::Integers);
        let alpha = Correspondence::zero(xd, y, ring);
        let out = lift_isomorphism(&rho, &sigma, &alpha, &ctx).unwrap();
        assert_eq!(
            out,
            IsoOutcome::NotIsomorphic(NotIsomorphicReason::DiscriminantMismatch)
        );
    }

    #[test]
    fn rank_profile_mismatch_is_detected() {
        let q = quad(3);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let sigma_blocks = Correspondence::from_blocks(
            q,
            q,
            CoeffRing::Integers,
            [(0u32, Mat::from_i64(CoeffRing::Integers, &[&[1]]))],
        )
        .unwrap();
        let alpha = Correspondence::zero(q, q, ring);
        let out = lift_isomorphism(&rho, &sigma_blocks, &alpha, &ctx).unwrap();
        assert_eq!(
            out,
            IsoOutcome::NotIsomorphic(NotIsomorphicReason::RankProfileMismatch)
        );
    }

    #[test]
    fn unit_rescaling_does_not_change_liftability() {
        let q = quad(2);
        let ctx = RationalityContext::standard(galois(3), q, q).unwrap();
        let ring = ctx.ring().clone();
        let rho = Correspondence::diagonal(q, CoeffRing::Integers);
        let mut alpha = Correspondence::diagonal(q, ring.clone());
        alpha
            .set_block(1, Mat::from_i64(ring.clone(), &[&[1, 2], &[2, 1]]))
            .unwrap();
        for unit in [1i64, 3, 5, 7] {
            let scaled = alpha.scale(&BigInt::from(unit));
            let out = lift_isomorphism(&rho, &rho, &scaled, &ctx).unwrap();
            assert!(matches!(out, IsoOutcome::Isomorphic(_)), "unit {unit}");
        }
    }

    #[test]
    fn rank_one_middles_lift_through_the_basis_map() {
        // both motives are middle rank-1 projectors on the split surface
        let q = quad(2);
        let ctx = RationalityContext::standard(galois(2), q, q).unwrap();
        let ring = ctx.ring().clone();
        let tau_block = Mat::from_i64(ring.clone(), &[&[3, 1], &[2, 2]]);
        let tau =
            Correspondence::from_blocks(q, q, ring.clone(), [(1u32, tau_block)]).unwrap();
        let ctx = ctx.add_generators(vec![tau.clone()]).unwrap();
        let rho = lift_projector(&tau, &ctx).unwrap();
        // alpha: tau itself acts as the identity of (X, tau)
        let out = lift_isomorphism(&rho, &rho, &tau, &ctx).unwrap();
        let IsoOutcome::Isomorphic(c) = out else {
            panic!("expected an isomorphism");
        };
        assert_eq!(c, rho, "identity of the motive is the projector itself");
        let inv = isomorphism_inverse(&c, &rho, &rho).unwrap();
        assert_eq!(inv.compose(&c).unwrap(), rho);
    }
}
