//! Constructive lifts: determinant-one matrices from residue rings to
//! the integers, idempotents along the kernel of `Z/2^n -> Z/2`, and
//! rank-1 idempotent decompositions in `SL_2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::howell::howell;
use crate::mat::Mat;
use crate::ring::CoeffRing;

/// Lifts `M` in `SL_k(Z/m)` to an integer matrix with determinant
/// exactly 1 that reduces to `M` mod `m`.
///
/// The entrywise lift by smallest-magnitude representatives is returned
/// whenever it already has determinant one. Otherwise `M` is reduced to
/// the identity by elementary row transvections (always possible since
/// `Z/m` is semi-local) and the recorded operations are lifted and
/// multiplied out over the integers. The output is not unique; only the
/// determinant and the reduction are contractual.
pub fn lift_sl(m: &Mat) -> Result<Mat> {
    let modulus = match m.ring() {
        CoeffRing::Integers => return Err(Error::RingMismatch("expected a residue ring".into())),
        CoeffRing::Residue(modulus) => modulus.clone(),
    };
    if !m.is_square() {
        return Err(Error::DimensionMismatch("SL lift of a non-square matrix".into()));
    }
    if !m.det()?.is_one() {
        return Err(Error::DetNotOne);
    }
    let k = m.rows();
    if k == 0 {
        return Ok(Mat::identity(CoeffRing::Integers, 0));
    }

    let naive = m.balanced_integer_lift();
    if naive.det()?.is_one() {
        return Ok(naive);
    }

    let ring = m.ring().clone();
    let mut a = m.clone();
    // reduction = E_N ... E_1, applied on the left; the lift accumulates
    // lift(E_1)^{-1} ... lift(E_N)^{-1} so that lift = M mod m
    let mut lift = Mat::identity(CoeffRing::Integers, k);
    let apply = |a: &mut Mat, lift: &mut Mat, r: usize, s: usize, t: &BigInt| {
        let t = ring.reduce(t);
        if t.is_zero() {
            return;
        }
        let mut e = Mat::identity(ring.clone(), k);
        e.set(r, s, t.clone());
        *a = e.mul(a).expect("square");
        let mut inv = Mat::identity(CoeffRing::Integers, k);
        inv.set(r, s, -t);
        *lift = lift.mul(&inv).expect("square");
    };

    let primes = factor_primes(&modulus);
    for c in 0..k {
        // make the pivot a unit, massaging one prime at a time; the
        // cofactor of the other prime powers leaves them untouched
        for (p, e) in &primes {
            if !a.at(c, c).mod_floor(p).is_zero() {
                continue;
            }
            let Some(r) = (c + 1..k).find(|&r| !a.at(r, c).mod_floor(p).is_zero()) else {
                return Err(Error::DetNotOne);
            };
            let cof = &modulus / p.pow(*e);
            apply(&mut a, &mut lift, c, r, &cof);
            debug_assert!(!a.at(c, c).mod_floor(p).is_zero());
        }
        let u = a.at(c, c).clone();
        debug_assert!(ring.is_unit(&u), "pivot must now be a unit");
        if !u.is_one() && c + 1 < k {
            // two transvections set the pivot to exactly 1
            let inv_u = ring.inverse(&u)?;
            let t1 = ring.reduce(&((BigInt::one() - a.at(c + 1, c)) * &inv_u));
            apply(&mut a, &mut lift, c + 1, c, &t1);
            let t2 = ring.reduce(&(BigInt::one() - &u));
            apply(&mut a, &mut lift, c, c + 1, &t2);
        }
        if a.at(c, c).is_one() {
            for r in 0..k {
                if r != c && !a.at(r, c).is_zero() {
                    let t = -a.at(r, c);
                    apply(&mut a, &mut lift, r, c, &t);
                }
            }
        }
    }
    // columns 0..k-1 are unit vectors, so the last pivot is det(M) = 1
    if !a.is_identity() {
        return Err(Error::DetNotOne);
    }
    debug_assert!(lift.det()?.is_one());
    debug_assert_eq!(lift.map_ring(m.ring()), *m);
    Ok(lift)
}

fn factor_primes(m: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut rest = m.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        if rest.mod_floor(&p).is_zero() {
            let mut e = 0;
            while rest.mod_floor(&p).is_zero() {
                rest /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    out
}

/// Number of Newton steps needed to reach idempotency mod `2^n`
/// starting from idempotency mod 2.
fn newton_steps(n: u32) -> u32 {
    let mut steps = 0;
    let mut precision = 1u32;
    while precision < n {
        precision *= 2;
        steps += 1;
    }
    steps
}

/// Lifts a matrix idempotent mod 2 to an exact idempotent mod `2^n`
/// congruent to it mod 2, by the iteration `F <- 3F^2 - 2F^3`. Each
/// step doubles the 2-adic precision of `F^2 - F`.
pub fn lift_idempotent_newton(e: &Mat) -> Result<Mat> {
    let n = e.ring().two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
    if !e.is_square() {
        return Err(Error::DimensionMismatch("idempotent lift of a non-square matrix".into()));
    }
    let mod2 = e.map_ring(&CoeffRing::residue_pow2(1));
    if mod2.mul(&mod2)? != mod2 {
        return Err(Error::NotIdempotentMod2);
    }
    let mut f = e.clone();
    for _ in 0..newton_steps(n) {
        let f2 = f.mul(&f)?;
        let f3 = f2.mul(&f)?;
        f = f2.scale(&BigInt::from(3)).sub(&f3.scale(&BigInt::from(2)))?;
    }
    debug_assert_eq!(f.mul(&f)?, f);
    Ok(f)
}

/// Canonical generator of the column space of an idempotent matrix
/// over `Z/2^n` with free rank-1 image: the unique unimodular row of
/// the Howell form of the span.
fn rank1_image_generator(p: &Mat) -> Result<Vec<BigInt>> {
    let h = howell(&p.transpose())?;
    let mut gens: Vec<&Vec<BigInt>> = h
        .rows()
        .iter()
        .filter(|row| row.iter().any(|e| e.is_odd()))
        .collect();
    if gens.len() != 1 {
        return Err(Error::NotRankOneIdempotent);
    }
    Ok(gens.pop().expect("one generator").clone())
}

/// For a rank-1 idempotent `p` (2x2 over `Z/2^n`, neither 0 nor the
/// identity) returns `g` with `det g = 1` and `g E11 g^{-1} = p`, where
/// `E11` projects onto the first coordinate. The columns of `g` are the
/// Howell-canonical generators of the image and the kernel, with the
/// kernel column rescaled to fix the determinant.
pub fn rank1_decomposition_to_sl2(p: &Mat) -> Result<Mat> {
    let ring = p.ring().clone();
    ring.two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
    if p.rows() != 2 || p.cols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
    }
    if p.mul(p)? != *p {
        return Err(Error::NotRankOneIdempotent);
    }
    if p.is_zero() || p.is_identity() {
        return Err(Error::NotRankOneIdempotent);
    }
    let image = rank1_image_generator(p)?;
    let complement = Mat::identity(ring.clone(), 2).sub(p)?;
    let kernel = rank1_image_generator(&complement)?;
    let mut g = Mat::new(
        ring.clone(),
        2,
        2,
        vec![
            image[0].clone(),
            kernel[0].clone(),
            image[1].clone(),
            kernel[1].clone(),
        ],
    )?;
    let d = g.det()?;
    let dinv = ring
        .inverse(&d)
        .map_err(|_| Error::NotRankOneIdempotent)?;
    for r in 0..2 {
        let scaled = g.at(r, 1) * &dinv;
        g.set(r, 1, scaled);
    }
    debug_assert!(g.det()?.is_one());
    debug_assert_eq!(conjugate_e11(&g)?, *p);
    Ok(g)
}

/// `g E11 g^{-1}` for `g` in `SL_2`.
pub fn conjugate_e11(g: &Mat) -> Result<Mat> {
    let ring = g.ring().clone();
    let e11 = {
        let mut m = Mat::zero(ring.clone(), 2, 2);
        m.set(0, 0, BigInt::one());
        m
    };
    let inv = inverse_det_one_2x2(g)?;
    g.mul(&e11)?.mul(&inv)
}

/// Inverse of a 2x2 matrix with determinant 1 over any ring.
pub fn inverse_det_one_2x2(g: &Mat) -> Result<Mat> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
    }
    if !g.det()?.is_one() {
        return Err(Error::DetNotOne);
    }
    Mat::new(
        g.ring().clone(),
        2,
        2,
        vec![
            g.at(1, 1).clone(),
            -g.at(0, 1),
            -g.at(1, 0),
            g.at(0, 0).clone(),
        ],
    )
}
