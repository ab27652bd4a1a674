use psi_core::arith::{int, ratio};
use psi_core::mr::MrEngine;
use psi_core::source::one_point;
use psi_core::virasoro::VirasoroOracle;
use psi_core::{CorrelatorSource, Error, MultiIndex, Rational};

fn idx(ds: &[u32]) -> MultiIndex {
    MultiIndex::new(ds.to_vec()).unwrap()
}

#[test]
fn known_values_from_both_engines() {
    let mr = MrEngine::new();
    let oracle = VirasoroOracle::new();
    let cases: [(&[u32], Rational); 6] = [
        (&[1], ratio(1, 24)),
        (&[0, 0, 0], int(1)),
        (&[2, 3], ratio(29, 5760)),
        (&[2, 2, 2], ratio(7, 240)),
        (&[7], ratio(1, 82944)),
        (&[1, 1], ratio(1, 24)),
    ];
    for (ds, want) in cases {
        assert_eq!(mr.correlator(&idx(ds)).unwrap(), want, "mr {ds:?}");
        assert_eq!(oracle.correlator(&idx(ds)).unwrap(), want, "virasoro {ds:?}");
    }
}

#[test]
fn dimension_mismatch_is_zero_and_instability_is_an_error() {
    let mr = MrEngine::new();
    let oracle = VirasoroOracle::new();
    assert_eq!(mr.correlator(&idx(&[0, 0, 1])).unwrap(), int(0));
    assert_eq!(oracle.correlator(&idx(&[0, 0, 1])).unwrap(), int(0));
    // with nonnegative exponents the dimension constraint already forces
    // stability, so the only unstable input left is the empty index
    assert_eq!(mr.correlator(&idx(&[0, 0])).unwrap(), int(0));
    assert!(matches!(MultiIndex::new(vec![]), Err(Error::Domain(_))));
}

#[test]
fn string_and_dilaton_equations_hold_for_the_engine() {
    let mr = MrEngine::new();
    // ⟨τ_0 τ_a τ_b⟩_g = ⟨τ_{a-1} τ_b⟩_g + ⟨τ_a τ_{b-1}⟩_g
    for g in 1..=6i64 {
        let total = (3 * g - 1) as u32;
        for a in 1..total {
            let b = total - a;
            let lhs = mr.correlator(&idx(&[0, a, b])).unwrap();
            let rhs = mr.correlator(&idx(&[a - 1, b])).unwrap() + mr.correlator(&idx(&[a, b - 1])).unwrap();
            assert_eq!(lhs, rhs, "string g={g} a={a}");
        }
    }
    // ⟨τ_1 τ_a τ_b⟩_g = 2g ⟨τ_a τ_b⟩_g
    for g in 1..=6i64 {
        let total = (3 * g - 1) as u32;
        for a in 0..=total {
            let lhs = mr.correlator(&idx(&[1, a, total - a])).unwrap();
            let rhs = mr.correlator(&idx(&[a, total - a])).unwrap() * int(2 * g);
            assert_eq!(lhs, rhs, "dilaton g={g} a={a}");
        }
    }
}

#[test]
fn one_point_values_to_genus_twelve() {
    let mr = MrEngine::new();
    let oracle = VirasoroOracle::new();
    for g in 1..=12i64 {
        let d = idx(&[(3 * g - 2) as u32]);
        assert_eq!(oracle.correlator(&d).unwrap(), one_point(g).unwrap());
        assert_eq!(mr.correlator(&d).unwrap(), one_point(g).unwrap());
    }
}

#[test]
fn engine_is_symmetric_in_its_arguments() {
    // the permutation sum fixes σ(1) = 1, so the first slot is special in
    // the formula but not in the result
    let mr = MrEngine::new();
    for ds in [[4u32, 2, 0, 1], [5, 3, 0, 0], [3, 3, 2, 0]] {
        let base = mr.correlator(&idx(&ds)).unwrap();
        for rot in 1..4 {
            let mut r = ds;
            r.rotate_left(rot);
            assert_eq!(mr.correlator(&idx(&r)).unwrap(), base, "{r:?}");
        }
        let mut rev = ds;
        rev.reverse();
        assert_eq!(mr.correlator(&idx(&rev)).unwrap(), base);
    }
}

#[test]
fn enlarging_the_lattice_bound_changes_nothing() {
    let tight = MrEngine::new();
    let loose = MrEngine::new().with_extra_bound(2);
    for ds in [&[2u32, 3][..], &[1, 1, 4], &[2, 2, 2, 1], &[0, 3, 3, 3, 0], &[5, 5, 1]] {
        assert_eq!(tight.normalized(&idx(ds)).unwrap(), loose.normalized(&idx(ds)).unwrap(), "{ds:?}");
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let par = MrEngine::new();
    let seq = MrEngine::new().sequential();
    for ds in [&[3u32, 3, 2, 1][..], &[6, 2, 1, 0, 0], &[10, 1]] {
        assert_eq!(par.normalized(&idx(ds)).unwrap(), seq.normalized(&idx(ds)).unwrap());
    }
}
