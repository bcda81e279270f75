//! Deterministic random generators shared by the unit, property and
//! acceptance test suites.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mat::Mat;
use crate::ring::CoeffRing;

/// Seeded generator; identical seeds give identical streams everywhere.
pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn matrix(&mut self, ring: &CoeffRing, rows: usize, cols: usize, lo: i64, hi: i64) -> Mat {
        let entries: Vec<BigInt> = (0..rows * cols)
            .map(|_| BigInt::from(self.range(lo, hi)))
            .collect();
        Mat::new(ring.clone(), rows, cols, entries).expect("consistent shape")
    }

    /// Random element of `SL_k(Z/m)` built as a product of transvections.
    pub fn special_linear(&mut self, ring: &CoeffRing, k: usize, ops: usize) -> Mat {
        let m = ring.modulus().expect("residue ring").clone();
        let mut a = Mat::identity(ring.clone(), k);
        for _ in 0..ops {
            let i = self.range(0, k as i64 - 1) as usize;
            let mut j = self.range(0, k as i64 - 2) as usize;
            if j >= i {
                j += 1;
            }
            let span = i64::try_from(&m - 1u8).unwrap_or(i64::MAX);
            let t = BigInt::from(self.range(0, span));
            let mut tr = Mat::identity(ring.clone(), k);
            tr.set(i, j, t);
            a = a.mul(&tr).expect("square");
        }
        a
    }
}
