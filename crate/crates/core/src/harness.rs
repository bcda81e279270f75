//! The exhaustive desk-scale verification that reducing coefficients
//! from the integers to mod 2 is a bijection on isomorphism classes,
//! together with the enumeration and search oracles it is checked
//! against.
//!
//! For every quadric shape the driver enumerates the Galois-invariant
//! idempotents mod 2 inside the closed rational span, lifts each one
//! through the Newton iteration and the projector lift, and then
//! decides mod-2 isomorphism of every pair by exhaustive search over
//! the span — independently of the lifting algorithms — before asking
//! the isomorphism lift to reproduce exactly the same relation with
//! integral coefficients.

use serde::{Deserialize, Serialize};

use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::lifting::{
    classify, isomorphism_inverse, lift_isomorphism, lift_mod2_to_mod2n, lift_projector, IsoClass,
    IsoOutcome,
};
use crate::motive::Motive;
use crate::quadric::{Bits, GaloisContext, SplitQuadric};
use crate::rationality::RationalityContext;
use crate::ring::CoeffRing;

/// Abort threshold for exhaustive span walks.
const ENUMERATION_LOG2_LIMIT: u64 = 20;

/// All Galois-invariant idempotents mod 2 inside the closed rational
/// span of `ctx`, in the canonical order induced by the Howell basis.
pub fn enumerate_idempotents_mod2(
    x: &SplitQuadric,
    ctx: &RationalityContext,
) -> Result<Vec<Correspondence>> {
    let basis = ctx.mod2_span_basis(x, x)?;
    if basis.len() as u64 > ENUMERATION_LOG2_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "mod-2 span with 2^{} elements",
            basis.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << basis.len()) {
        let mut member = Correspondence::zero(*x, *x, CoeffRing::residue_pow2(1));
        for (i, b) in basis.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                member = member.add(b)?;
            }
        }
        if member.is_idempotent()? && member.is_gal_invariant()? {
            out.push(member);
        }
    }
    Ok(out)
}

/// Exhaustive search for an invertible rational correspondence between
/// two mod-2 motives: a pair `(g, g')` in the spans with
/// `g = pi2 . g . pi1`, `g' . g = pi1` and `g . g' = pi2`. Returns the
/// first such `g` in span order.
pub fn search_mod2_isomorphism(
    ctx: &RationalityContext,
    pi1: &Correspondence,
    pi2: &Correspondence,
) -> Result<Option<Correspondence>> {
    let x = pi1.source();
    let y = pi2.source();
    let forward_basis = ctx.mod2_span_basis(x, y)?;
    let backward_basis = ctx.mod2_span_basis(y, x)?;
    if forward_basis.len().max(backward_basis.len()) as u64 > ENUMERATION_LOG2_LIMIT {
        return Err(Error::ResourceLimit("mod-2 span too large to search".into()));
    }
    let expand = |basis: &[Correspondence], source: &SplitQuadric, target: &SplitQuadric| -> Result<Vec<Correspondence>> {
        let mut all = Vec::with_capacity(1 << basis.len());
        for mask in 0u64..(1 << basis.len()) {
            let mut member = Correspondence::zero(*source, *target, CoeffRing::residue_pow2(1));
            for (i, b) in basis.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    member = member.add(b)?;
                }
            }
            all.push(member);
        }
        Ok(all)
    };
    let forward = expand(&forward_basis, x, y)?;
    let backward = expand(&backward_basis, y, x)?;
    for g in &forward {
        if &pi2.compose(g)?.compose(pi1)? != g {
            continue;
        }
        for ginv in &backward {
            if &pi1.compose(ginv)?.compose(pi2)? != ginv {
                continue;
            }
            if ginv.compose(g)? == *pi1 && g.compose(ginv)? == *pi2 {
                return Ok(Some(g.clone()));
            }
        }
    }
    Ok(None)
}

/// Per-projector outcome recorded in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub ranks: Vec<(u32, u32)>,
    pub marker: Option<(u32, Vec<u8>)>,
    pub lifted: bool,
    pub reduction_isomorphic: bool,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub dim: u32,
    pub disc: Vec<u8>,
    pub mod2_classes: usize,
    pub integral_classes: usize,
    pub surjectivity: String,
    pub injectivity: String,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub shapes: Vec<ShapeReport>,
    pub verdict: String,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Runs the whole reduction-bijection verification for every quadric
/// shape of dimension at most `dim_max` and every discriminant
/// character of the Galois context.
pub fn reduction_bijection_check(
    dim_max: u32,
    galois: GaloisContext,
    n: u32,
) -> Result<BijectionReport> {
    if n != galois.degree_exponent() {
        return Err(Error::InvalidInput(
            "coefficient exponent must match the Galois context".into(),
        ));
    }
    let mut shapes = Vec::new();
    let mut all_pass = true;
    for dim in 1..=dim_max {
        let masks: Vec<Bits> = if dim % 2 == 0 {
            Bits::all(galois.generators())
        } else {
            vec![Bits::zero(galois.generators())]
        };
        for disc in masks {
            let report = check_shape(SplitQuadric::new(dim, disc)?, galois)?;
            all_pass &= report.surjectivity == "pass" && report.injectivity == "pass";
            shapes.push(report);
        }
    }
    Ok(BijectionReport {
        shapes,
        verdict: if all_pass { "pass" } else { "fail" }.to_string(),
    })
}

fn check_shape(q: SplitQuadric, galois: GaloisContext) -> Result<ShapeReport> {
    let n = galois.degree_exponent();
    let ctx = RationalityContext::standard(galois, q, q)?;
    let mod2_idempotents = enumerate_idempotents_mod2(&q, &ctx)?;

    // lift every enumerated idempotent to an integral projector
    let mut taus = Vec::new();
    for pi in &mod2_idempotents {
        taus.push(lift_mod2_to_mod2n(pi, n)?);
    }
    let ctx_all = ctx.add_generators(taus.clone())?;
    let mut lifted = Vec::new();
    let mut surjectivity_ok = true;
    let mut witnesses = Vec::new();
    for (index, (pi, tau)) in mod2_idempotents.iter().zip(&taus).enumerate() {
        let rho = lift_projector(tau, &ctx_all)?;
        let ranks = rho.image_ranks()?;
        // surjectivity: the reduction is isomorphic to the input mod 2,
        // witnessed inside the span
        let back = rho.reduce(&CoeffRing::residue_pow2(1))?;
        let reduction_isomorphic = search_mod2_isomorphism(&ctx_all, pi, &back)?.is_some();
        surjectivity_ok &= reduction_isomorphic;
        witnesses.push((index, ranks, reduction_isomorphic));
        lifted.push(rho);
    }

    // decide both sides of the bijection on every pair
    let count = mod2_idempotents.len();
    let mut mod2_iso = vec![vec![false; count]; count];
    let mut integral_iso = vec![vec![false; count]; count];
    let mut injectivity_ok = true;
    for a in 0..count {
        for b in 0..count {
            let oracle = search_mod2_isomorphism(&ctx_all, &mod2_idempotents[a], &mod2_idempotents[b])?;
            mod2_iso[a][b] = oracle.is_some();
            let outcome = match oracle {
                Some(g) => {
                    // lift the mod-2 isomorphism to mod 2^n by taking the
                    // canonical preimage; inverses survive because the
                    // kernel of the reduction is nilpotent
                    let ring = CoeffRing::residue_pow2(n);
                    let g_lift = Correspondence::unflatten(
                        *g.source(),
                        *g.target(),
                        ring.clone(),
                        &g.flatten(),
                    )?;
                    let alpha = taus[b].compose(&g_lift)?.compose(&taus[a])?;
                    lift_isomorphism(&lifted[a], &lifted[b], &alpha, &ctx_all)?
                }
                None => {
                    let alpha = Correspondence::zero(q, q, CoeffRing::residue_pow2(n));
                    match lift_isomorphism(&lifted[a], &lifted[b], &alpha, &ctx_all) {
                        Ok(out) => out,
                        // a structurally compatible pair with no rational
                        // isomorphism cannot be certified either way
                        Err(Error::NotInvertibleOnSummands) => {
                            injectivity_ok = false;
                            continue;
                        }
                        Err(e) => return Err(e),
                    }
                }
            };
            match outcome {
                IsoOutcome::Isomorphic(c) => {
                    integral_iso[a][b] = true;
                    // certify invertibility of the integral isomorphism
                    let inv = isomorphism_inverse(&c, &lifted[a], &lifted[b])?;
                    if inv.compose(&c)? != lifted[a] || c.compose(&inv)? != lifted[b] {
                        return Err(Error::NotInvertibleOnSummands);
                    }
                }
                IsoOutcome::NotIsomorphic(_) => {}
            }
        }
    }
    // exact agreement of the two relations, and consistency with the
    // class invariant
    let mut classes: Vec<IsoClass> = Vec::new();
    let mut class_of = vec![0usize; count];
    for a in 0..count {
        let motive = Motive::new(lifted[a].clone())?;
        let cls = classify(&motive)?;
        let pos = classes.iter().position(|c| *c == cls);
        class_of[a] = match pos {
            Some(p) => p,
            None => {
                classes.push(cls);
                classes.len() - 1
            }
        };
    }
    for a in 0..count {
        for b in 0..count {
            if mod2_iso[a][b] != integral_iso[a][b] {
                injectivity_ok = false;
            }
            // motives without a rational isomorphism must be told apart
            // by the class invariant, and conversely
            if (class_of[a] == class_of[b]) != mod2_iso[a][b] {
                injectivity_ok = false;
            }
        }
    }
    let mod2_classes = count_classes(&mod2_iso);
    let integral_classes = count_classes(&integral_iso);
    if mod2_classes != integral_classes {
        injectivity_ok = false;
    }

    Ok(ShapeReport {
        dim: q.dim(),
        disc: q.disc().to_bits(),
        mod2_classes,
        integral_classes,
        surjectivity: pass_fail(surjectivity_ok),
        injectivity: pass_fail(injectivity_ok),
        witnesses: witnesses
            .into_iter()
            .map(|(index, ranks, reduction_isomorphic)| Witness {
                index,
                ranks,
                marker: classes[class_of[index]]
                    .middle_marker
                    .map(|(d, bits)| (d, bits.to_bits())),
                lifted: true,
                reduction_isomorphic,
                class: class_of[index],
            })
            .collect(),
    })
}

fn pass_fail(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

/// Number of equivalence classes of a reflexive symmetric relation.
fn count_classes(iso: &[Vec<bool>]) -> usize {
    let nitems = iso.len();
    let mut seen = vec![false; nitems];
    let mut classes = 0;
    for a in 0..nitems {
        if seen[a] {
            continue;
        }
        classes += 1;
        for (b, seen_b) in seen.iter_mut().enumerate() {
            if iso[a][b] {
                *seen_b = true;
            }
        }
    }
    classes
}

/// Randomised algebra soundness sweep: associativity and the two-sided
/// identity on random triples of endo-correspondences. Returns the
/// number of triples checked.
pub fn algebra_soundness_check(seed: u64, triples: usize) -> Result<usize> {
    use crate::testing::TestRng;
    let mut rng = TestRng::new(seed);
    let rings = [
        CoeffRing::Integers,
        CoeffRing::residue_pow2(2),
        CoeffRing::residue_pow2(1),
    ];
    let mut done = 0;
    for t in 0..triples {
        let dim = 1 + (t % 4) as u32;
        let ring = &rings[(t / 4) % 3];
        let q = SplitQuadric::new(dim, Bits::zero(1))?;
        let random_corr = |rng: &mut TestRng| -> Result<Correspondence> {
            let mut c = Correspondence::zero(q, q, ring.clone());
            for i in 0..=dim {
                let b = c.block(i);
                let m = rng.matrix(ring, b.rows(), b.cols(), -4, 4);
                c.set_block(i, m)?;
            }
            Ok(c)
        };
        let a = random_corr(&mut rng)?;
        let b = random_corr(&mut rng)?;
        let c = random_corr(&mut rng)?;
        let left = c.compose(&b.compose(&a)?)?;
        let right = c.compose(&b)?.compose(&a)?;
        if left != right {
            return Err(Error::InvalidInput(format!(
                "associativity failed on triple {t} (dim {dim}, ring {ring})"
            )));
        }
        let delta = Correspondence::diagonal(q, ring.clone());
        if delta.compose(&a)? != a || a.compose(&delta)? != a {
            return Err(Error::InvalidInput(format!(
                "identity law failed on triple {t} (dim {dim}, ring {ring})"
            )));
        }
        done += 1;
    }
    Ok(done)
}
