//! Howell form of row spans over `Z/2^n`.
//!
//! The Howell form is the canonical echelon generating set of a row
//! span: two matrices have equal row spans exactly when their Howell
//! forms coincide, and membership of a vector is decided by successive
//! elimination against the pivots. Pivot entries are powers of two and
//! entries above a pivot are reduced modulo the pivot.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::ring::CoeffRing;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HowellForm {
    ring: CoeffRing,
    cols: usize,
    /// Echelon rows, pivots strictly to the right as we go down.
    rows: Vec<Vec<BigInt>>,
    /// (column, 2-adic valuation) of each pivot.
    pivots: Vec<(usize, u32)>,
    /// Each Howell row expressed as a combination of the input rows.
    transform: Vec<Vec<BigInt>>,
}

/// Computes the Howell form of the row span of `a`.
pub fn howell(a: &Mat) -> Result<HowellForm> {
    let n = a.ring().two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
    let ring = a.ring().clone();
    let cols = a.cols();
    let input_rows = a.rows();

    // work rows carry (vector, combination-of-input-rows)
    let mut work: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..input_rows)
        .map(|r| {
            let mut tag = vec![BigInt::zero(); input_rows];
            tag[r] = BigInt::one();
            (a.row(r).to_vec(), tag)
        })
        .collect();

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    let mut transform: Vec<Vec<BigInt>> = Vec::new();

    for col in 0..cols {
        let mut best: Option<(usize, u32)> = None;
        for (idx, (v, _)) in work.iter().enumerate() {
            if v[col].is_zero() {
                continue;
            }
            let val = ring.two_valuation(&v[col])?;
            if best.is_none_or(|(_, bv)| val < bv) {
                best = Some((idx, val));
            }
        }
        let Some((idx, val)) = best else { continue };
        let (mut pivot_row, mut pivot_tag) = work.swap_remove(idx);
        // scale so the pivot entry is exactly 2^val
        let unit = &pivot_row[col] >> val as usize;
        let inv = ring.inverse(&unit)?;
        scale_vec(&ring, &mut pivot_row, &inv);
        scale_vec(&ring, &mut pivot_tag, &inv);

        for (v, tag) in work.iter_mut() {
            if v[col].is_zero() {
                continue;
            }
            let q = &v[col] >> val as usize;
            axpy(&ring, v, &pivot_row, &-&q);
            axpy(&ring, tag, &pivot_tag, &-&q);
        }
        // the annihilator multiple keeps span elements supported past col
        if val > 0 {
            let mult = BigInt::one() << (n - val) as usize;
            let extra: Vec<BigInt> = pivot_row.iter().map(|e| ring.reduce(&(e * &mult))).collect();
            if extra.iter().any(|e| !e.is_zero()) {
                let extra_tag = pivot_tag.iter().map(|e| ring.reduce(&(e * &mult))).collect();
                work.push((extra, extra_tag));
            }
        }
        rows.push(pivot_row);
        transform.push(pivot_tag);
        pivots.push((col, val));
        work.retain(|(v, _)| v.iter().any(|e| !e.is_zero()));
    }

    // reduce entries above each pivot modulo the pivot
    #[allow(clippy::needless_range_loop)]
    for i in 0..rows.len() {
        let (col, val) = pivots[i];
        let pivot = BigInt::one() << val as usize;
        for j in 0..i {
            let q = &rows[j][col] / &pivot;
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(i);
            axpy(&ring, &mut head[j], &tail[0], &-&q);
            let (thead, ttail) = transform.split_at_mut(i);
            axpy(&ring, &mut thead[j], &ttail[0], &-&q);
        }
    }

    Ok(HowellForm {
        ring,
        cols,
        rows,
        pivots,
        transform,
    })
}

fn scale_vec(ring: &CoeffRing, v: &mut [BigInt], s: &BigInt) {
    for e in v.iter_mut() {
        *e = ring.reduce(&(&*e * s));
    }
}

/// v += q * w
fn axpy(ring: &CoeffRing, v: &mut [BigInt], w: &[BigInt], q: &BigInt) {
    for (e, we) in v.iter_mut().zip(w) {
        *e = ring.reduce(&(&*e + q * we));
    }
}

impl HowellForm {
    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// Number of rows whose pivot is a unit.
    pub fn unit_pivot_count(&self) -> usize {
        self.pivots.iter().filter(|&&(_, v)| v == 0).count()
    }

    pub fn as_mat(&self) -> Mat {
        let entries: Vec<BigInt> = self.rows.iter().flatten().cloned().collect();
        Mat::new(self.ring.clone(), self.rows.len(), self.cols, entries).expect("shape")
    }

    /// log2 of the number of elements in the span.
    pub fn span_log2(&self) -> u64 {
        let n = self.ring.two_exponent().expect("power-of-two ring") as u64;
        self.pivots.iter().map(|&(_, v)| n - v as u64).sum()
    }

    /// Coordinates of `x` with respect to the Howell rows, or `None`.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut rem: Vec<BigInt> = x.iter().map(|e| self.ring.reduce(e)).collect();
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        for (i, &(col, val)) in self.pivots.iter().enumerate() {
            if rem[col].is_zero() {
                continue;
            }
            let ev = self.ring.two_valuation(&rem[col])?;
            if ev < val {
                return Ok(None);
            }
            let q = &rem[col] >> val as usize;
            axpy(&self.ring, &mut rem, &self.rows[i], &-&q);
            coords[i] = self.ring.reduce(&q);
        }
        if rem.iter().all(|e| e.is_zero()) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// Coordinates of `x` with respect to the original input rows.
    pub fn input_coordinates(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let Some(q) = self.coordinates(x)? else {
            return Ok(None);
        };
        let width = self.transform.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); width];
        for (qi, trow) in q.iter().zip(&self.transform) {
            axpy(&self.ring, &mut out, trow, qi);
        }
        Ok(Some(out))
    }
}

/// Row-span membership over `Z/2^n`: coordinates of `x` in terms of the
/// rows of `basis`, or `None` when `x` is outside the span.
pub fn residue_row_membership(x: &[BigInt], basis: &Mat) -> Result<Option<Vec<BigInt>>> {
    howell(basis)?.input_coordinates(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::TestRng;
    use num_traits::{One, Zero};

    fn big_vec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&e| BigInt::from(e)).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let a = Mat::identity(CoeffRing::residue_pow2(2), 2);
        let h = howell(&a).unwrap();
        assert_eq!(h.as_mat(), a);
        assert_eq!(h.unit_pivot_count(), 2);
    }

    #[test]
    fn one_by_one_ideal() {
        let a = Mat::from_i64(CoeffRing::residue_pow2(2), &[&[2]]);
        let h = howell(&a).unwrap();
        assert_eq!(h.as_mat(), a);
        assert!(h.contains(&big_vec(&[2])).unwrap());
        assert!(!h.contains(&big_vec(&[1])).unwrap());
    }

    #[test]
    fn doubled_identity_mod4() {
        let a = Mat::from_i64(CoeffRing::residue_pow2(2), &[&[2, 0], &[0, 2]]);
        let h = howell(&a).unwrap();
        assert_eq!(h.as_mat(), a, "already canonical");
        assert!(h.contains(&big_vec(&[2, 2])).unwrap());
        assert!(!h.contains(&big_vec(&[1, 0])).unwrap());
    }

    #[test]
    fn howell_property_adds_annihilator_rows() {
        // span{(2,1)} mod 4 contains (0,2) = 2*(2,1); the echelon form
        // alone would hide it behind the pivot in column 0
        let a = Mat::from_i64(CoeffRing::residue_pow2(2), &[&[2, 1]]);
        let h = howell(&a).unwrap();
        assert_eq!(
            h.as_mat(),
            Mat::from_i64(CoeffRing::residue_pow2(2), &[&[2, 1], &[0, 2]])
        );
        assert!(h.contains(&big_vec(&[0, 2])).unwrap());
    }

    #[test]
    fn input_coordinates_reconstruct() {
        let ring = CoeffRing::residue_pow2(3);
        let a = Mat::from_i64(ring.clone(), &[&[2, 1, 3], &[4, 0, 2], &[1, 1, 1]]);
        let h = howell(&a).unwrap();
        let x = big_vec(&[7, 2, 6]);
        if let Some(c) = h.input_coordinates(&x).unwrap() {
            let mut back = vec![BigInt::zero(); 3];
            for (ci, row) in c.iter().zip(0..a.rows()) {
                for (j, b) in back.iter_mut().enumerate() {
                    *b = ring.reduce(&(&*b + ci * a.at(row, j)));
                }
            }
            assert_eq!(back, x);
        }
    }

    /// Brute-force span of the rows of `a` by enumerating all
    /// coefficient tuples.
    fn brute_span(a: &Mat) -> std::collections::BTreeSet<Vec<BigInt>> {
        let ring = a.ring().clone();
        let m = ring.modulus().unwrap().clone();
        let mbig: u64 = (&m).try_into().unwrap();
        let rows = a.rows();
        let mut out = std::collections::BTreeSet::new();
        let total = mbig.pow(rows as u32);
        for mut t in 0..total {
            let mut v = vec![BigInt::zero(); a.cols()];
            for r in 0..rows {
                let c = BigInt::from(t % mbig);
                t /= mbig;
                for (j, vj) in v.iter_mut().enumerate() {
                    *vj = ring.reduce(&(&*vj + &c * a.at(r, j)));
                }
            }
            out.insert(v);
        }
        out
    }

    #[test]
    fn span_equality_exhaustive_small() {
        let mut rng = TestRng::new(0x40e1);
        for _ in 0..60 {
            let n = rng.range(1, 3) as u32;
            let cols = rng.range(1, 3) as usize;
            let rows = rng.range(1, 3) as usize;
            let ring = CoeffRing::residue_pow2(n);
            let hi = i64::from(2u32.pow(n)) - 1;
            let a = rng.matrix(&ring, rows, cols, 0, hi);
            let h = howell(&a).unwrap();
            let span = brute_span(&a);
            // every vector of the ambient module agrees on membership
            let m = 2u64.pow(n);
            let total = m.pow(cols as u32);
            let mut span_size = 0u64;
            for mut t in 0..total {
                let mut v = Vec::with_capacity(cols);
                for _ in 0..cols {
                    v.push(BigInt::from(t % m));
                    t /= m;
                }
                let member = h.contains(&v).unwrap();
                assert_eq!(member, span.contains(&v), "membership parity for {v:?}");
                if member {
                    span_size += 1;
                }
            }
            assert_eq!(span_size, span.len() as u64);
            assert_eq!(span_size, 1u64 << h.span_log2());
            // canonical: Howell form of the Howell form is itself
            let again = howell(&h.as_mat()).unwrap();
            assert_eq!(again.as_mat(), h.as_mat());
        }
    }

    #[test]
    fn canonical_for_equal_spans() {
        // the same span presented by different generators
        let ring = CoeffRing::residue_pow2(2);
        let a = Mat::from_i64(ring.clone(), &[&[2, 1]]);
        let b = Mat::from_i64(ring.clone(), &[&[2, 3], &[0, 2]]);
        assert_eq!(howell(&a).unwrap().as_mat(), howell(&b).unwrap().as_mat());
    }

    #[test]
    fn rejects_non_two_power_modulus() {
        let a = Mat::identity(CoeffRing::residue(6).unwrap(), 2);
        assert!(matches!(howell(&a), Err(Error::ExpectedTwoPowerResidue)));
        let b = Mat::identity(CoeffRing::Integers, 2);
        assert!(howell(&b).is_err());
    }

    #[test]
    fn membership_via_original_basis() {
        let ring = CoeffRing::residue_pow2(2);
        let basis = Mat::from_i64(ring, &[&[2, 0], &[0, 2]]);
        let c = residue_row_membership(&big_vec(&[2, 2]), &basis)
            .unwrap()
            .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(
            (c[0].clone() * 2 % 4, c[1].clone() * 2 % 4),
            (BigInt::from(2), BigInt::from(2))
        );
        assert!(residue_row_membership(&big_vec(&[1, 0]), &basis)
            .unwrap()
            .is_none());
    }

    #[test]
    fn zero_vector_always_member() {
        let h = howell(&Mat::from_i64(CoeffRing::residue_pow2(3), &[&[4, 2]])).unwrap();
        let c = h.coordinates(&[BigInt::zero(), BigInt::zero()]).unwrap();
        assert_eq!(c.unwrap().iter().filter(|e| !e.is_zero()).count(), 0);
        let _ = BigInt::one();
    }
}
