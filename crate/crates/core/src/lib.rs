//! Exact-arithmetic model of Chow groups of split projective quadrics
//! and their degree-0 correspondences, together with the constructive
//! algorithms that lift projectors and isomorphisms from mod-2
//! coefficients through `Z/2^n` up to the integers.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`], [`mat`], [`smith`], [`howell`], [`lifts`] — exact linear
//!   algebra over `Z` and `Z/m`: Smith and Howell normal forms, span
//!   membership, `SL_k` lifting by elementary matrices, Newton
//!   idempotent lifting and unit decompositions.
//! * [`quadric`], [`cycle`] — the combinatorial Chow group of a split
//!   quadric in the `h^i`/`l_i` cell basis, with hyperplane
//!   multiplication, the degree pairing and the Galois action driven by
//!   the discriminant character.
//! * [`correspondence`], [`motive`] — degree-0 correspondences as
//!   graded block matrices, composition, transposition, coefficient
//!   reduction, image ranks and motives `(X, p)`.
//! * [`rationality`] — the generated subgroup of correspondences
//!   declared rational, with Howell-backed membership tests.
//! * [`lifting`] — projector and isomorphism lifting between
//!   coefficient rings, and the isomorphism-class invariant.
//! * [`harness`] — exhaustive desk-scale verification that reduction of
//!   coefficients is a bijection on isomorphism classes, plus the
//!   enumeration oracle it relies on.
//! * [`json`] — serialisation of every public value to a stable JSON
//!   schema, shared with the command-line front end.

pub mod error;
pub mod ring;
pub mod mat;
pub mod smith;
pub mod howell;
pub mod lifts;
pub mod quadric;
pub mod cycle;
pub mod correspondence;
pub mod motive;
pub mod rationality;
pub mod lifting;
pub mod harness;
pub mod json;

pub mod testing;

pub use correspondence::Correspondence;
pub use harness::{enumerate_idempotents_mod2, reduction_bijection_check, BijectionReport};
pub use lifting::{classify, lift_isomorphism, lift_mod2_to_mod2n, lift_projector, IsoClass, IsoOutcome, NotIsomorphicReason};
pub use motive::Motive;
pub use rationality::RationalityContext;
pub use cycle::Cycle;
pub use error::{Error, Result};
pub use mat::Mat;
pub use quadric::{Bits, Cell, GaloisContext, SplitQuadric};
pub use ring::{unit_decompose, CoeffRing, UnitDecomposition};

/// Coordinates of `x` in the row span of `basis`, or `None` when it is
/// not a member. Dispatches on the basis ring: Smith form over the
/// integers, Howell form over `Z/2^n`.
pub fn membership(
    x: &[num_bigint::BigInt],
    basis: &Mat,
) -> Result<Option<Vec<num_bigint::BigInt>>> {
    match basis.ring() {
        CoeffRing::Integers => smith::integer_row_membership(x, basis),
        CoeffRing::Residue(_) => howell::residue_row_membership(x, basis),
    }
}

#[cfg(test)]
mod membership_tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn dispatches_on_the_ring() {
        let zbasis = Mat::from_i64(CoeffRing::Integers, &[&[1, 0]]);
        let coords = membership(&[BigInt::from(2), BigInt::from(0)], &zbasis)
            .unwrap()
            .unwrap();
        assert_eq!(coords, vec![BigInt::from(2)]);

        let rbasis = Mat::from_i64(CoeffRing::residue_pow2(2), &[&[2]]);
        assert!(membership(&[BigInt::from(2)], &rbasis).unwrap().is_some());
        assert!(membership(&[BigInt::from(1)], &rbasis).unwrap().is_none());
    }
}
