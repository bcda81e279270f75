//! Smith normal form over the integers, with the transforming
//! unimodular matrices, and row-span membership based on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::ring::CoeffRing;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Mat,
    pub s: Mat,
    pub v: Mat,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        (0..self.s.rows().min(self.s.cols()))
            .take_while(|&i| !self.s.at(i, i).is_zero())
            .count()
    }
}

/// Computes `U * A * V = S` with `U`, `V` unimodular and `S` diagonal,
/// each diagonal entry nonnegative and dividing the next.
///
/// Pivot selection: entry of smallest absolute value, ties broken in
/// row-major order, so the output is deterministic.
pub fn snf(a: &Mat) -> Result<SmithDecomposition> {
    if !a.ring().is_integers() {
        return Err(Error::ExpectedIntegers);
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = Mat::identity(CoeffRing::Integers, rows);
    let mut v = Mat::identity(CoeffRing::Integers, cols);

    let mut t = 0usize;
    while t < rows && t < cols {
        let Some((pr, pc)) = smallest_nonzero(&s, t) else {
            break;
        };
        swap_rows(&mut s, t, pr);
        swap_rows(&mut u, t, pr);
        swap_cols(&mut s, t, pc);
        swap_cols(&mut v, t, pc);

        loop {
            // shrink the pivot against its row and column
            let mut dirty = false;
            for r in t + 1..rows {
                if s.at(r, t).is_zero() {
                    continue;
                }
                let q = div_nearest(s.at(r, t), s.at(t, t));
                if !q.is_zero() {
                    row_axpy(&mut s, r, t, &-&q);
                    row_axpy(&mut u, r, t, &-&q);
                }
                if !s.at(r, t).is_zero() {
                    // remainder became the smaller pivot
                    swap_rows(&mut s, t, r);
                    swap_rows(&mut u, t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if s.at(t, c).is_zero() {
                    continue;
                }
                let q = div_nearest(s.at(t, c), s.at(t, t));
                if !q.is_zero() {
                    col_axpy(&mut s, c, t, &-&q);
                    col_axpy(&mut v, c, t, &-&q);
                }
                if !s.at(t, c).is_zero() {
                    swap_cols(&mut s, t, c);
                    swap_cols(&mut v, t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot now divides its whole row and column and they are cleared;
            // fold in any entry of the remaining block it does not divide
            let mut offender = None;
            'search: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !s.at(r, c).mod_floor(s.at(t, t)).is_zero() {
                        offender = Some(r);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(r) => {
                    row_axpy(&mut s, t, r, &BigInt::from(1));
                    row_axpy(&mut u, t, r, &BigInt::from(1));
                }
                None => break,
            }
        }
        t += 1;
    }

    // normalize signs
    for i in 0..rows.min(cols) {
        if s.at(i, i).is_negative() {
            negate_row(&mut s, i);
            negate_row(&mut u, i);
        }
    }
    Ok(SmithDecomposition { u, s, v })
}

/// Pivot search over the trailing block starting at `(t, t)`.
fn smallest_nonzero(s: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            let e = s.at(r, c);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if s.at(br, bc).abs() <= e.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Quotient rounded to nearest, so remainders have at most half the
/// pivot's absolute value.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if r.abs() * 2 > b.abs() {
        q += r.signum() * b.signum();
    }
    q
}

fn swap_rows(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols() {
        let x = m.at(a, c).clone();
        let y = m.at(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows() {
        let x = m.at(r, a).clone();
        let y = m.at(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// row_a += q * row_b
fn row_axpy(m: &mut Mat, a: usize, b: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let val = m.at(a, c) + q * m.at(b, c);
        m.set(a, c, val);
    }
}

/// col_a += q * col_b
fn col_axpy(m: &mut Mat, a: usize, b: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let val = m.at(r, a) + q * m.at(r, b);
        m.set(r, a, val);
    }
}

fn negate_row(m: &mut Mat, r: usize) {
    for c in 0..m.cols() {
        let val = -m.at(r, c);
        m.set(r, c, val);
    }
}

/// Solves `c * basis = x` over the integers; `None` when `x` is not in
/// the row span.
pub fn integer_row_membership(x: &[BigInt], basis: &Mat) -> Result<Option<Vec<BigInt>>> {
    if !basis.ring().is_integers() {
        return Err(Error::ExpectedIntegers);
    }
    if x.len() != basis.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against basis with {} columns",
            x.len(),
            basis.cols()
        )));
    }
    // c * B = x  <=>  B^T c^T = x^T; with U B^T V = S this becomes
    // S (V^{-1} c^T) = U x^T.
    let bt = basis.transpose();
    let dec = snf(&bt)?;
    let y = dec.u.apply(x)?;
    let k = bt.rows(); // = basis.cols()
    let r = bt.cols(); // = basis.rows()
    let mut z = vec![BigInt::zero(); r];
    for i in 0..k {
        if i < r && !dec.s.at(i, i).is_zero() {
            let (q, rem) = y[i].div_mod_floor(dec.s.at(i, i));
            if !rem.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !y[i].is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(dec.v.apply(&z)?))
}
