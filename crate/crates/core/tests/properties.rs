//! Property tests across arbitrary family members: the structural facts
//! (midpoint tightness, split symmetry, the quartet identity, partition and
//! child conservation) must hold for every choice of bases and addend, not
//! just for T and P.

use std::collections::HashMap;

use proptest::prelude::*;

use halfsplit::{
    children, equality_set, midpoint_set, special_set, split_rhs, split_value, verify_range,
    verify_range_with, EpsilonPartition, HalfSplitRecurrence, MemoTable, Relation, VerifyMode,
    VerifyOptions, ViolationKind,
};

/// Straight u128 recursion with its own memo, sharing no code with MemoTable.
fn independent_value(bases: (u64, u64, u64), addend: u64, n: u64, memo: &mut HashMap<u64, u128>) -> u128 {
    match n {
        0 => return bases.0 as u128,
        1 => return bases.1 as u128,
        2 => return bases.2 as u128,
        _ => {}
    }
    if let Some(&v) = memo.get(&n) {
        return v;
    }
    let half_up = n.div_ceil(2);
    let half_down = n / 2;
    let v = independent_value(bases, addend, half_up, memo)
        + independent_value(bases, addend, half_down + 1, memo)
        + independent_value(bases, addend, half_up - 1, memo)
        + independent_value(bases, addend, half_down, memo)
        + addend as u128;
    memo.insert(n, v);
    v
}

fn member() -> impl Strategy<Value = HalfSplitRecurrence> {
    (0..40u64, 0..40u64, 0..40u64, 0..12u64)
        .prop_map(|(b0, b1, b2, c)| HalfSplitRecurrence::new("m", b0, b1, b2, c).unwrap())
}

fn filled(r: &HalfSplitRecurrence, max: u64) -> MemoTable {
    let mut memo = MemoTable::new(r.clone());
    memo.ensure(max).unwrap();
    memo
}

proptest! {
    #[test]
    fn memo_matches_independent_recursion(r in member(), n in 0..300u64) {
        let memo = filled(&r, n);
        let mut oracle = HashMap::new();
        let expected = independent_value(r.bases(), r.addend(), n, &mut oracle);
        prop_assert_eq!(memo.value(n).unwrap() as u128, expected);
    }

    #[test]
    fn rhs_symmetric_in_split_point(r in member(), n in 3..200u64) {
        let memo = filled(&r, n);
        for i in 1..=n {
            prop_assert_eq!(
                split_rhs(&memo, n, i).unwrap(),
                split_rhs(&memo, n, n - i + 1).unwrap(),
                "n={} i={}", n, i
            );
        }
    }

    #[test]
    fn midpoints_tight_for_every_member(r in member(), n in 3..300u64) {
        let memo = filled(&r, n);
        for m in midpoint_set(n).unwrap().to_vec() {
            let ev = split_value(&memo, n, m).unwrap();
            prop_assert_eq!(ev.relation, Relation::Tight, "n={} m={}", n, m);
        }
    }

    /// The identity is algebraic, so it must hold whenever the gaps are
    /// representable at all. Members that drop below F(n) somewhere are
    /// refused with InequalityViolated rather than computed modulo 2^64;
    /// T and P (where every gap exists) are swept in the acceptance suite.
    #[test]
    fn quartet_identity_holds_whenever_representable(r in member(), n in 7..300u64) {
        let memo = filled(&r, n);
        for i in 4..=n - 3 {
            match halfsplit::verify_quartet_identity(&memo, n, i) {
                Ok(q) => prop_assert!(
                    q.holds,
                    "n={} i={} lhs={} cols={:?}", n, i, q.lhs_gap, q.column_gaps
                ),
                Err(halfsplit::Error::InequalityViolated { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected error at (n={}, i={}): {}", n, i, e),
            }
        }
    }

    #[test]
    fn children_conserve_and_stay_inside(n in 3..(1u64 << 40)) {
        let ch = children(n).unwrap();
        let mut sum = 0u64;
        for c in ch {
            prop_assert!(c >= 1 && c < n, "n={} child {}", n, c);
            sum += c;
        }
        prop_assert_eq!(sum, 2 * n);
    }

    #[test]
    fn epsilon_partition_conserves(pair in (1..(1u64 << 40)).prop_flat_map(|n| (Just(n), 1..=n))) {
        let (n, i) = pair;
        let p = EpsilonPartition::new(n, i).unwrap();
        prop_assert_eq!(p.sum(), 2 * n);
        prop_assert_eq!(p.degenerate, i == 1 || i == n);
    }

    #[test]
    fn cache_round_trip_any_member(r in member(), max in 3..120u64) {
        let memo = filled(&r, max);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.hsc");
        halfsplit::cache::save(&memo, &path).unwrap();
        let loaded = halfsplit::cache::load(&path).unwrap();
        prop_assert!(loaded.recurrence().same_parameters(&r));
        prop_assert_eq!(loaded.values(), memo.values());
        // re-serialization is byte-stable
        let mut a = Vec::new();
        let mut b = Vec::new();
        halfsplit::cache::write_to(&memo, &mut a).unwrap();
        halfsplit::cache::write_to(&loaded, &mut b).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn parallel_verification_matches_sequential(
        r in member(),
        max in 10..120u64,
        jobs in 2..5usize,
        iff in proptest::bool::ANY,
    ) {
        let memo = filled(&r, max);
        let mode = if iff { VerifyMode::IffCharacterization } else { VerifyMode::InequalityOnly };
        let seq = verify_range(&memo, max, mode).unwrap();
        let par = verify_range_with(&memo, max, mode, VerifyOptions { jobs, list_cap: 1000 }).unwrap();
        prop_assert_eq!(seq.violations, par.violations);
        prop_assert_eq!(seq.violations_total, par.violations_total);
        prop_assert_eq!(seq.special_equalities, par.special_equalities);
        prop_assert_eq!(seq.special_total, par.special_total);
    }
}

#[test]
fn members_below_their_own_splits_are_refused() {
    // found by the property above and frozen: bases (0, 3, 0), addend 0 has
    // rhs(13, 5) = 99 below F(13) = 102, so the gap machinery must refuse
    let r = HalfSplitRecurrence::new("m", 0, 3, 0, 0).unwrap();
    let memo = filled(&r, 13);
    assert_eq!(memo.value(13).unwrap(), 102);
    match split_value(&memo, 13, 5) {
        Err(halfsplit::Error::InequalityViolated { n, i, rhs, fn_value }) => {
            assert_eq!((n, i, rhs, fn_value), (13, 5, 99, 102));
        }
        other => panic!("expected InequalityViolated, got {other:?}"),
    }
    assert!(matches!(
        halfsplit::verify_quartet_identity(&memo, 13, 5),
        Err(halfsplit::Error::InequalityViolated { .. })
    ));
}

#[test]
fn off_midpoint_splits_of_t_keep_a_strict_column() {
    // every off-midpoint split leaves at least one column able to supply a
    // local strict inequality
    let memo = filled(&HalfSplitRecurrence::t(), 1024);
    for n in 3..=1024u64 {
        let mids = midpoint_set(n).unwrap();
        for i in 2..=n - 1 {
            if mids.contains(i) {
                continue;
            }
            let c = halfsplit::census(&memo, n, i).unwrap();
            assert!(c.strict_count() >= 1, "(n={n}, i={i}) has no strict column");
        }
    }
}

#[test]
fn t_has_no_specials_up_to_4096() {
    let memo = filled(&HalfSplitRecurrence::t(), 4096);
    assert!(special_set(&memo, 4096).unwrap().is_empty());
}

#[test]
fn p_specials_pause_after_255_until_385() {
    // the next group is predicted to start at 385, so (255, 385) is empty
    let memo = filled(&HalfSplitRecurrence::p(), 384);
    for n in 256..=384 {
        assert!(!halfsplit::is_special(&memo, n).unwrap(), "n={n}");
    }
}

#[test]
fn iff_violations_are_exactly_the_off_midpoint_equalities() {
    // the two modes describe the same set of off-midpoint tights for P
    let memo = filled(&HalfSplitRecurrence::p(), 128);
    let iff = verify_range(&memo, 128, VerifyMode::IffCharacterization).unwrap();
    let ineq = verify_range(&memo, 128, VerifyMode::InequalityOnly).unwrap();
    assert_eq!(ineq.violations_total, 0);
    assert_eq!(iff.violations_total, ineq.special_total);
    let from_iff: Vec<(u64, u64)> = iff.violations.iter().map(|v| (v.n, v.i)).collect();
    let from_ineq: Vec<(u64, u64)> = ineq.special_equalities.iter().map(|s| (s.n, s.i)).collect();
    assert_eq!(from_iff, from_ineq);
    assert!(iff
        .violations
        .iter()
        .all(|v| v.kind == ViolationKind::UnexpectedEqualityOffMidpoint));
}

#[test]
fn equality_sets_are_symmetric_intervals_for_p() {
    let memo = filled(&HalfSplitRecurrence::p(), 256);
    for n in 3..=256 {
        let eq = equality_set(&memo, n).unwrap();
        // mirror-closed: i is tight iff n - i + 1 is
        for &i in &eq {
            assert!(eq.contains(&(n - i + 1)), "n={n} i={i}");
        }
        // contiguous
        for w in eq.windows(2) {
            assert_eq!(w[1], w[0] + 1, "n={n} gap in {eq:?}");
        }
    }
}
