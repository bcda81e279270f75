//! Property tests over randomly generated rings, quadrics and
//! correspondences.

use num_bigint::BigInt;
use proptest::prelude::*;

use quadric_motives::correspondence::Correspondence;
use quadric_motives::howell::howell;
use quadric_motives::mat::Mat;
use quadric_motives::quadric::{Bits, SplitQuadric};
use quadric_motives::ring::CoeffRing;
use quadric_motives::smith::snf;

fn ring_strategy() -> impl Strategy<Value = CoeffRing> {
    prop_oneof![
        Just(CoeffRing::Integers),
        (1u32..=4).prop_map(CoeffRing::residue_pow2),
    ]
}

fn quadric_strategy() -> impl Strategy<Value = SplitQuadric> {
    (1u32..=4, any::<bool>()).prop_map(|(dim, twisted)| {
        let mask = u32::from(twisted && dim % 2 == 0);
        SplitQuadric::new(dim, Bits::new(1, mask).unwrap()).unwrap()
    })
}

fn mat_strategy(ring: CoeffRing, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        Mat::new(
            ring.clone(),
            rows,
            cols,
            v.into_iter().map(BigInt::from).collect(),
        )
        .unwrap()
    })
}

fn corr_strategy(q: SplitQuadric, ring: CoeffRing) -> impl Strategy<Value = Correspondence> {
    let template = Correspondence::zero(q, q, ring.clone());
    let blocks: Vec<_> = (0..=q.dim())
        .map(|i| {
            let b = template.block(i);
            mat_strategy(ring.clone(), b.rows(), b.cols())
        })
        .collect();
    blocks.prop_map(move |mats| {
        let mut out = Correspondence::zero(q, q, ring.clone());
        for (i, m) in mats.into_iter().enumerate() {
            out.set_block(i as u32, m).unwrap();
        }
        out
    })
}

/// A quadric, a ring and `K` independent endo-correspondences on it.
fn setting<const K: usize>(
) -> impl Strategy<Value = (SplitQuadric, CoeffRing, [Correspondence; K])> {
    (quadric_strategy(), ring_strategy()).prop_flat_map(|(q, ring)| {
        let corrs: [_; K] = std::array::from_fn(|_| corr_strategy(q, ring.clone()));
        corrs.prop_map(move |cs| (q, ring.clone(), cs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_contract(
        rows in 1usize..=3,
        cols in 1usize..=3,
        seedv in proptest::collection::vec(-9i64..=9, 9),
    ) {
        let entries: Vec<BigInt> = seedv.iter().take(rows * cols).map(|&v| BigInt::from(v)).collect();
        prop_assume!(entries.len() == rows * cols);
        let a = Mat::new(CoeffRing::Integers, rows, cols, entries).unwrap();
        let dec = snf(&a).unwrap();
        prop_assert_eq!(dec.u.mul(&a).unwrap().mul(&dec.v).unwrap(), dec.s.clone());
        prop_assert_eq!(dec.u.det().unwrap().magnitude().clone(), 1u32.into());
        prop_assert_eq!(dec.v.det().unwrap().magnitude().clone(), 1u32.into());
        for i in 0..rows.min(cols).saturating_sub(1) {
            let d0 = dec.s.at(i, i);
            let d1 = dec.s.at(i + 1, i + 1);
            if !num_traits::Zero::is_zero(d0) {
                prop_assert!(num_traits::Zero::is_zero(&(d1 % d0)));
            } else {
                prop_assert!(num_traits::Zero::is_zero(d1));
            }
        }
    }

    #[test]
    fn howell_membership_matches_brute_force(
        n in 1u32..=2,
        rows in 1usize..=2,
        cols in 1usize..=2,
        seedv in proptest::collection::vec(0i64..=3, 4),
        probe in proptest::collection::vec(0i64..=3, 2),
    ) {
        let ring = CoeffRing::residue_pow2(n);
        let m = 2u64.pow(n);
        let entries: Vec<BigInt> = seedv.iter().take(rows * cols).map(|&v| BigInt::from(v)).collect();
        prop_assume!(entries.len() == rows * cols);
        let a = Mat::new(ring.clone(), rows, cols, entries).unwrap();
        let h = howell(&a).unwrap();
        let x: Vec<BigInt> = probe.iter().take(cols).map(|&v| ring.reduce(&BigInt::from(v))).collect();
        prop_assume!(x.len() == cols);
        // brute force over all coefficient tuples
        let mut brute = false;
        'outer: for code in 0..m.pow(rows as u32) {
            let mut rest = code;
            let mut acc = vec![BigInt::from(0); cols];
            for r in 0..rows {
                let c = BigInt::from(rest % m);
                rest /= m;
                for (j, accj) in acc.iter_mut().enumerate() {
                    *accj = ring.reduce(&(&*accj + &c * a.at(r, j)));
                }
            }
            if acc == x {
                brute = true;
                break 'outer;
            }
        }
        prop_assert_eq!(h.contains(&x).unwrap(), brute);
    }

    #[test]
    fn composition_associates_and_respects_identity(
        (q, ring, [a, b, c]) in setting::<3>(),
    ) {
        let left = c.compose(&b.compose(&a).unwrap()).unwrap();
        let right = c.compose(&b).unwrap().compose(&a).unwrap();
        prop_assert_eq!(left, right);
        let delta = Correspondence::diagonal(q, ring);
        prop_assert_eq!(delta.compose(&a).unwrap(), a.clone());
        prop_assert_eq!(a.compose(&delta).unwrap(), a);
    }

    #[test]
    fn transpose_is_an_involutive_antihomomorphism(
        (_q, _ring, [a, b]) in setting::<2>(),
    ) {
        prop_assert_eq!(a.transpose().unwrap().transpose().unwrap(), a.clone());
        let lhs = b.compose(&a).unwrap().transpose().unwrap();
        let rhs = a.transpose().unwrap().compose(&b.transpose().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn galois_action_commutes_with_everything(
        (_q, _ring, [a, b]) in setting::<2>(),
    ) {
        let gamma = Bits::generator(1, 0).unwrap();
        let act = |c: &Correspondence| c.gal_act(&gamma).unwrap();
        prop_assert_eq!(act(&act(&a)), a.clone(), "involution");
        prop_assert_eq!(
            act(&b.compose(&a).unwrap()),
            act(&b).compose(&act(&a)).unwrap(),
            "algebra automorphism"
        );
        prop_assert_eq!(act(&a.transpose().unwrap()), act(&a).transpose().unwrap());
    }

    #[test]
    fn reduction_is_functorial(
        q in quadric_strategy(),
        k in 1u32..=3,
        seedv in proptest::collection::vec(-9i64..=9, 64),
    ) {
        let mut it = seedv.into_iter().cycle();
        let mut build = || {
            let mut out = Correspondence::zero(q, q, CoeffRing::Integers);
            for i in 0..=q.dim() {
                let b = out.block(i).clone();
                let entries: Vec<BigInt> = (0..b.rows() * b.cols())
                    .map(|_| BigInt::from(it.next().unwrap()))
                    .collect();
                let m = Mat::new(CoeffRing::Integers, b.rows(), b.cols(), entries).unwrap();
                out.set_block(i, m).unwrap();
            }
            out
        };
        let a = build();
        let b = build();
        let target = CoeffRing::residue_pow2(k);
        let lhs = b.compose(&a).unwrap().reduce(&target).unwrap();
        let rhs = b.reduce(&target).unwrap().compose(&a.reduce(&target).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cycle_form_round_trips(
        (_q, _ring, [a]) in setting::<1>(),
    ) {
        prop_assert_eq!(a.to_cycle().to_correspondence().unwrap(), a);
    }
}
