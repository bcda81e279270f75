//! Which correspondences count as defined over the base field.
//!
//! Rationality is modelled, not computed from an actual field: a
//! context fixes a pair of quadrics, the Galois data and a finite set
//! of mod-`2^n` generators declared rational, and closes the generated
//! subgroup under addition, composition and transposition. Membership
//! in the closed span — through Howell forms of the flattened block
//! coordinates — is then the mod-`2^n` rationality test, and an
//! integral correspondence is rational exactly when it is
//! Galois-invariant and its mod-`2^n` reduction lies in the span.
//!
//! The default generators are the ones always available over the base
//! field: products of hyperplane powers `h^a x h^b`, doubled products
//! of non-middle cells (one factor is then an `l`-class whose double is
//! a hyperplane power), `2^n` times any invariant orbit sum, and the
//! diagonal on each quadric.

use num_bigint::BigInt;

use crate::correspondence::{external_product, h_product, Correspondence};
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::howell::{howell, HowellForm};
use crate::mat::Mat;
use crate::quadric::{GaloisContext, SplitQuadric};
use crate::ring::CoeffRing;

/// A rationality context for one pair of quadrics. Two contexts are
/// equal when they declare the same correspondences rational, i.e. when
/// their closed spans agree; the generating sets themselves are not
/// part of the comparison.
#[derive(Debug, Clone)]
pub struct RationalityContext {
    galois: GaloisContext,
    /// One object when the two quadrics coincide, two otherwise.
    objects: Vec<SplitQuadric>,
    ring: CoeffRing,
    /// Generators beyond the standard set.
    extra: Vec<Correspondence>,
    /// Closed Howell span per (source index, target index).
    spans: Vec<((usize, usize), HowellForm)>,
    /// Mod-2 reductions of the closed spans, cached.
    spans_mod2: Vec<((usize, usize), HowellForm)>,
}

impl PartialEq for RationalityContext {
    fn eq(&self, other: &Self) -> bool {
        self.galois == other.galois
            && self.objects == other.objects
            && self.ring == other.ring
            && self.spans == other.spans
    }
}

impl Eq for RationalityContext {}

impl RationalityContext {
    /// Context over the standard generators for the pair `(x, y)`.
    pub fn standard(galois: GaloisContext, x: SplitQuadric, y: SplitQuadric) -> Result<Self> {
        Self::with_generators(galois, x, y, Vec::new())
    }

    /// Context over the standard generators plus `extra`; every extra
    /// generator must be Galois-invariant.
    pub fn with_generators(
        galois: GaloisContext,
        x: SplitQuadric,
        y: SplitQuadric,
        extra: Vec<Correspondence>,
    ) -> Result<Self> {
        let r = galois.generators();
        if x.disc().len() != r || y.disc().len() != r {
            return Err(Error::DimensionMismatch(
                "discriminant characters must match the number of involutions".into(),
            ));
        }
        let objects = if x == y { vec![x] } else { vec![x, y] };
        let ring = CoeffRing::residue_pow2(galois.degree_exponent());
        for g in &extra {
            if g.ring() != &ring {
                return Err(Error::RingMismatch(format!("{} vs {}", g.ring(), ring)));
            }
            if !g.is_gal_invariant()? {
                return Err(Error::NotGalInvariant);
            }
            Self::slot_of(&objects, g)?;
        }
        let mut ctx = RationalityContext {
            galois,
            objects,
            ring,
            extra,
            spans: Vec::new(),
            spans_mod2: Vec::new(),
        };
        ctx.close()?;
        Ok(ctx)
    }

    pub fn galois(&self) -> &GaloisContext {
        &self.galois
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn modulus_exponent(&self) -> u32 {
        self.galois.degree_exponent()
    }

    pub fn objects(&self) -> &[SplitQuadric] {
        &self.objects
    }

    pub fn extra_generators(&self) -> &[Correspondence] {
        &self.extra
    }

    /// A new context with `extra` added to the generators.
    pub fn add_generators(&self, extra: Vec<Correspondence>) -> Result<Self> {
        let x = self.objects[0];
        let y = *self.objects.last().expect("nonempty");
        let mut gens = self.extra.clone();
        for g in extra {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        Self::with_generators(self.galois, x, y, gens)
    }

    fn slot_of(objects: &[SplitQuadric], c: &Correspondence) -> Result<(usize, usize)> {
        let a = objects
            .iter()
            .position(|q| q == c.source())
            .ok_or(Error::QuadricMismatch)?;
        let b = objects
            .iter()
            .position(|q| q == c.target())
            .ok_or(Error::QuadricMismatch)?;
        Ok((a, b))
    }

    fn span(&self, slot: (usize, usize)) -> &HowellForm {
        &self
            .spans
            .iter()
            .find(|(s, _)| *s == slot)
            .expect("every slot has a span")
            .1
    }

    fn span_mod2(&self, slot: (usize, usize)) -> &HowellForm {
        &self
            .spans_mod2
            .iter()
            .find(|(s, _)| *s == slot)
            .expect("every slot has a span")
            .1
    }

    /// Saturates the spans under composition and transposition of
    /// members. Terminates because every span is a submodule of a
    /// finite group and only ever grows.
    fn close(&mut self) -> Result<()> {
        let k = self.objects.len();
        let idx = |a: usize, b: usize| a * k + b;
        let mut members: Vec<Vec<Correspondence>> = vec![Vec::new(); k * k];
        for a in 0..k {
            for b in 0..k {
                members[idx(a, b)] =
                    standard_generators(&self.galois, self.objects[a], self.objects[b])?;
            }
        }
        for g in &self.extra {
            let (a, b) = Self::slot_of(&self.objects, g)?;
            members[idx(a, b)].push(g.clone());
        }
        let mut bases: Vec<Vec<Correspondence>> = Vec::with_capacity(k * k);
        for (a, b) in (0..k).flat_map(|a| (0..k).map(move |b| (a, b))) {
            bases.push(self.howell_members(a, b, &members[idx(a, b)])?);
        }
        loop {
            let mut new_members: Vec<Vec<Correspondence>> = vec![Vec::new(); k * k];
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        for first in &bases[idx(a, b)] {
                            for second in &bases[idx(b, c)] {
                                new_members[idx(a, c)].push(second.compose(first)?);
                            }
                        }
                    }
                }
            }
            for a in 0..k {
                for b in 0..k {
                    if self.objects[a].dim() != self.objects[b].dim() {
                        continue;
                    }
                    for m in &bases[idx(a, b)] {
                        new_members[idx(b, a)].push(m.transpose()?);
                    }
                }
            }
            let mut changed = false;
            for (a, b) in (0..k).flat_map(|a| (0..k).map(move |b| (a, b))) {
                let slot = idx(a, b);
                let mut all = bases[slot].clone();
                all.append(&mut new_members[slot]);
                let rebuilt = self.howell_members(a, b, &all)?;
                if rebuilt != bases[slot] {
                    bases[slot] = rebuilt;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.spans.clear();
        self.spans_mod2.clear();
        for a in 0..k {
            for b in 0..k {
                let h = self.howell_of(a, b, &bases[idx(a, b)], &self.ring.clone())?;
                let h2 =
                    self.howell_of(a, b, &bases[idx(a, b)], &CoeffRing::residue_pow2(1))?;
                self.spans.push(((a, b), h));
                self.spans_mod2.push(((a, b), h2));
            }
        }
        Ok(())
    }

    /// Canonical basis of the span of `members`, back as
    /// correspondences.
    fn howell_members(
        &self,
        a: usize,
        b: usize,
        members: &[Correspondence],
    ) -> Result<Vec<Correspondence>> {
        let h = self.howell_of(a, b, members, &self.ring.clone())?;
        h.rows()
            .iter()
            .map(|row| {
                Correspondence::unflatten(self.objects[a], self.objects[b], self.ring.clone(), row)
            })
            .collect()
    }

    fn howell_of(
        &self,
        a: usize,
        b: usize,
        members: &[Correspondence],
        ring: &CoeffRing,
    ) -> Result<HowellForm> {
        let template = Correspondence::zero(self.objects[a], self.objects[b], ring.clone());
        let width = template.flatten().len();
        let rows: Vec<Vec<BigInt>> = members
            .iter()
            .map(|m| m.reduce(ring).map(|r| r.flatten()))
            .collect::<Result<_>>()?;
        let entries: Vec<BigInt> = rows.iter().flatten().cloned().collect();
        let mat = Mat::new(ring.clone(), rows.len(), width, entries)?;
        howell(&mat)
    }

    /// Membership of a mod-`2^k` correspondence, `k <= n`, in the
    /// reduction of the closed span.
    pub fn is_rational_mod(&self, c: &Correspondence) -> Result<bool> {
        let Some(k) = c.ring().two_exponent() else {
            return Err(Error::ExpectedTwoPowerResidue);
        };
        let n = self.modulus_exponent();
        if k > n {
            return Err(Error::ModulusTooLarge);
        }
        let slot = Self::slot_of(&self.objects, c)?;
        if k == n {
            return self.span(slot).contains(&c.flatten());
        }
        if k == 1 {
            return self.span_mod2(slot).contains(&c.flatten());
        }
        let ring = CoeffRing::residue_pow2(k);
        let members: Vec<Correspondence> = self
            .span(slot)
            .rows()
            .iter()
            .map(|row| {
                Correspondence::unflatten(
                    self.objects[slot.0],
                    self.objects[slot.1],
                    self.ring.clone(),
                    row,
                )
            })
            .collect::<Result<_>>()?;
        let h = self.howell_of(slot.0, slot.1, &members, &ring)?;
        h.contains(&c.flatten())
    }

    /// The integral rationality criterion: invariant under the Galois
    /// group and rational mod `2^n`.
    pub fn is_rational_integral(&self, c: &Correspondence) -> Result<bool> {
        if !c.ring().is_integers() {
            return Err(Error::RingMismatch("expected integral coefficients".into()));
        }
        if !c.is_gal_invariant()? {
            return Ok(false);
        }
        let reduced = c.reduce(&self.ring)?;
        self.is_rational_mod(&reduced)
    }

    /// Basis of the closed mod-2 span of a slot, as correspondences.
    pub fn mod2_span_basis(
        &self,
        source: &SplitQuadric,
        target: &SplitQuadric,
    ) -> Result<Vec<Correspondence>> {
        let probe = Correspondence::zero(*source, *target, CoeffRing::residue_pow2(1));
        let slot = Self::slot_of(&self.objects, &probe)?;
        self.span_mod2(slot)
            .rows()
            .iter()
            .map(|row| Correspondence::unflatten(*source, *target, CoeffRing::residue_pow2(1), row))
            .collect()
    }

    /// Basis of the closed mod-2^n span of a slot, as correspondences.
    pub fn span_basis(
        &self,
        source: &SplitQuadric,
        target: &SplitQuadric,
    ) -> Result<Vec<Correspondence>> {
        let probe = Correspondence::zero(*source, *target, self.ring.clone());
        let slot = Self::slot_of(&self.objects, &probe)?;
        self.span(slot)
            .rows()
            .iter()
            .map(|row| Correspondence::unflatten(*source, *target, self.ring.clone(), row))
            .collect()
    }
}

/// The default rational set for the slot `X -> Y`:
///
/// * `h^a x h^b` for every degree-0 pair of hyperplane powers;
/// * `2 (e x f)` for every degree-0 product of non-middle cells;
/// * `2^n` times the orbit sum of every basis product;
/// * the diagonal when `X = Y`.
pub fn standard_generators(
    galois: &GaloisContext,
    x: SplitQuadric,
    y: SplitQuadric,
) -> Result<Vec<Correspondence>> {
    let ring = CoeffRing::residue_pow2(galois.degree_exponent());
    let mut out = Vec::new();
    for a in 0..=x.dim().min(y.dim()) {
        out.push(h_product(x, y, &ring, a, y.dim() - a)?);
    }
    for e in x.basis_cells() {
        if e.is_middle(&x) {
            continue;
        }
        for f in y.basis_cells() {
            if f.is_middle(&y) {
                continue;
            }
            if e.dim_on(&x) + f.dim_on(&y) != x.dim() {
                continue;
            }
            let u = Cycle::from_cell(x, ring.clone(), e)?;
            let v = Cycle::from_cell(y, ring.clone(), f)?;
            out.push(external_product(&u, &v)?.scale(&BigInt::from(2)));
        }
    }
    let two_n = BigInt::from(1) << galois.degree_exponent() as usize;
    for e in x.basis_cells() {
        for f in y.basis_cells() {
            if e.dim_on(&x) + f.dim_on(&y) != x.dim() {
                continue;
            }
            let u = Cycle::from_cell(x, ring.clone(), e)?;
            let v = Cycle::from_cell(y, ring.clone(), f)?;
            let base = external_product(&u, &v)?;
            let mut orbit: Vec<Correspondence> = Vec::new();
            for gamma in galois.group_elements() {
                let image = base.gal_act(&gamma)?;
                if !orbit.contains(&image) {
                    orbit.push(image);
                }
            }
            let mut sum = Correspondence::zero(x, y, ring.clone());
            for member in orbit {
                sum = sum.add(&member)?;
            }
            out.push(sum.scale(&two_n));
        }
    }
    if x == y {
        out.push(Correspondence::diagonal(x, ring));
    }
    Ok(out)
}
