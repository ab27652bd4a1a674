use num_traits::Zero;
use proptest::prelude::*;

use psi_core::arith::int;
use psi_core::asymptotics::poly::Poly;
use psi_core::asymptotics::{reconstruct, series_coeffs};
use psi_core::coefficients::{a_coeff_pattern, a_coeff_trace, canonical_rotation, classify, PatternClass};
use psi_core::mr::{enumerate_permutations, MrEngine};
use psi_core::virasoro::VirasoroOracle;
use psi_core::{CorrelatorSource, MultiIndex};

fn key() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1i64..=20, 1..=7)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn trace_routes_agree(ks in key()) {
        prop_assert_eq!(a_coeff_trace(&ks), a_coeff_pattern(&ks));
    }

    #[test]
    fn trace_is_cyclic(ks in key(), shift in 0usize..7) {
        let mut r = ks.clone();
        let s = shift % r.len();
        r.rotate_left(s);
        prop_assert_eq!(a_coeff_trace(&ks), a_coeff_trace(&r));
        prop_assert_eq!(canonical_rotation(&ks), canonical_rotation(&r));
    }

    #[test]
    fn shifting_by_three_keeps_the_class(ks in key(), i in 0usize..7) {
        let mut moved = ks.clone();
        let i = i % moved.len();
        moved[i] += 3;
        let (a, b) = (classify(&ks), classify(&moved));
        prop_assert_eq!(a.class, b.class);
        prop_assert_eq!(a.sign, b.sign);
    }

    #[test]
    fn only_three_classes_have_a_trace(ks in key()) {
        let class = classify(&ks).class;
        let nonzero = !a_coeff_pattern(&ks).is_zero();
        let traced = matches!(class, PatternClass::P1 | PatternClass::P2 | PatternClass::P3);
        prop_assert!(!nonzero || traced);
    }

    #[test]
    fn interpolation_is_exact(coeffs in prop::collection::vec(-50i64..50, 0..7)) {
        let p = Poly::new(coeffs.into_iter().map(int).collect());
        let pts: Vec<_> = (0..8).map(|x| (int(x), p.eval(&int(x)))).collect();
        prop_assert_eq!(Poly::interpolate(&pts), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn engines_agree_on_random_indices(ds in prop::collection::vec(0u32..8, 1..=4), pad in 0u32..3) {
        // complete to the dimension constraint by bumping the last entry
        let mut ds = ds;
        let n = ds.len() as i64;
        let total: i64 = ds.iter().map(|&d| d as i64).sum();
        let g = ((total + 3 - n + 2) / 3).max(1) + pad as i64;
        let need = 3 * g - 3 + n - total;
        prop_assume!(need >= 0);
        *ds.last_mut().unwrap() += need as u32;
        let d = MultiIndex::new(ds).unwrap();
        prop_assume!(d.stable_genus().is_ok());
        let mr = MrEngine::new();
        let oracle = VirasoroOracle::new();
        prop_assert_eq!(mr.correlator(&d).unwrap(), oracle.correlator(&d).unwrap());
    }

    #[test]
    fn engine_is_symmetric(ds in prop::collection::vec(0u32..6, 2..=4), seed in any::<u64>()) {
        let mut ds = ds;
        let n = ds.len() as i64;
        let total: i64 = ds.iter().map(|&d| d as i64).sum();
        let g = ((total + 3 - n + 2) / 3).max(1);
        *ds.last_mut().unwrap() += (3 * g - 3 + n - total) as u32;
        let mut shuffled = ds.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.swap(0, len - 1);
        let mr = MrEngine::new();
        prop_assert_eq!(
            mr.normalized(&MultiIndex::new(ds).unwrap()).unwrap(),
            mr.normalized(&MultiIndex::new(shuffled).unwrap()).unwrap()
        );
    }
}

#[test]
fn permutation_class_counts() {
    for n in 2..=8usize {
        let records: Vec<_> = enumerate_permutations(n).collect();
        assert_eq!(records.len(), (1..n).product::<usize>());
        let unimodal = records.iter().filter(|r| r.class_l == 1).count();
        assert_eq!(unimodal, 1 << (n - 2));
    }
}

#[test]
fn first_coefficients_ignore_the_total() {
    // (3) and (4) at n = 2 share p_0 = p_1 = p_2 = 0
    let oracle = VirasoroOracle::new();
    let a = series_coeffs(&reconstruct(&oracle, 2, &[3]).unwrap(), 2).unwrap();
    let b = series_coeffs(&reconstruct(&oracle, 2, &[4]).unwrap(), 2).unwrap();
    assert_eq!(a.g[1], b.g[1]);
    assert_eq!(a.g[2], b.g[2]);
    assert_ne!(a.c[1], b.c[1]);
}

#[test]
fn liu_xu_expansion_truncates() {
    let mr = MrEngine::new();
    for (n, d) in [(2usize, vec![2u32]), (3, vec![1, 1]), (3, vec![3, 0]), (4, vec![2, 1, 0])] {
        let rf = reconstruct(&mr, n, &d).unwrap();
        let total: usize = d.iter().map(|&x| x as usize).sum();
        let s = series_coeffs(&rf, total as i64 + 3).unwrap();
        assert_eq!(s.c[0], int(1));
        assert_eq!(s.g[0], int(1));
        assert!(s.c[total + 1..].iter().all(|c| *c == int(0)), "{n} {d:?}");
    }
}
