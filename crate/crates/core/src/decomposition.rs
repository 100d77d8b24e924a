//! Split comparisons, equality sets, and range verification.
//!
//! For 1 <= i <= n the split quadruple (i, n-i+1, i-1, n-i) partitions 2n.
//! The comparison pits the recurrence value F(n) against
//!
//! ```text
//! rhs(n, i) = F(i) + F(n-i+1) + F(i-1) + F(n-i) + c
//! ```
//!
//! At a midpoint index the quadruple is exactly the defining decomposition,
//! so rhs equals F(n) for every family member. The interesting questions are
//! whether rhs can dip below F(n) anywhere (it must not), and where equality
//! occurs away from the midpoints.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::recurrence::{midpoint_set, sum5, MemoTable};

/// Outcome of a split comparison. rhs below F(n) is not representable; it is
/// reported as a violation or surfaced as an error instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Strict,
    Tight,
}

/// One evaluated split comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitEvaluation {
    pub n: u64,
    pub i: u64,
    pub rhs: u64,
    #[serde(rename = "fn")]
    pub fn_value: u64,
    pub relation: Relation,
}

fn check_split_domain(n: u64, i: u64) -> Result<()> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::Domain(format!(
            "split index must satisfy 1 <= i <= n, got (n={n}, i={i})"
        )));
    }
    Ok(())
}

/// rhs of the split comparison at (n, i). Requires the memo filled through n.
pub fn split_rhs(memo: &MemoTable, n: u64, i: u64) -> Result<u64> {
    check_split_domain(n, i)?;
    sum5(
        memo.value(i)?,
        memo.value(n - i + 1)?,
        memo.value(i - 1)?,
        memo.value(n - i)?,
        memo.recurrence().addend(),
    )
    .ok_or_else(|| Error::Overflow {
        name: memo.recurrence().name().to_string(),
        n,
    })
}

/// Evaluate and classify one split comparison.
pub fn split_value(memo: &MemoTable, n: u64, i: u64) -> Result<SplitEvaluation> {
    let rhs = split_rhs(memo, n, i)?;
    let fn_value = memo.value(n)?;
    let relation = if rhs > fn_value {
        Relation::Strict
    } else if rhs == fn_value {
        Relation::Tight
    } else {
        return Err(Error::InequalityViolated {
            n,
            i,
            rhs,
            fn_value,
        });
    };
    Ok(SplitEvaluation {
        n,
        i,
        rhs,
        fn_value,
        relation,
    })
}

/// All split indices of n where the comparison is tight, ascending.
pub fn equality_set(memo: &MemoTable, n: u64) -> Result<Vec<u64>> {
    check_split_domain(n, 1)?;
    let fn_value = memo.value(n)?;
    let mut out = Vec::new();
    for i in 1..=n {
        let rhs = split_rhs(memo, n, i)?;
        if rhs == fn_value {
            out.push(i);
        } else if rhs < fn_value {
            return Err(Error::InequalityViolated {
                n,
                i,
                rhs,
                fn_value,
            });
        }
    }
    Ok(out)
}

/// True when the equality set of n strictly contains its midpoint set.
///
/// Midpoints are tight for every family member (their quadruple is the
/// defining decomposition), so for n >= 3 a length comparison decides strict
/// containment.
pub fn is_special(memo: &MemoTable, n: u64) -> Result<bool> {
    let eq = equality_set(memo, n)?;
    let mids = midpoint_set(n)?;
    debug_assert!(mids.to_vec().iter().all(|m| eq.contains(m)));
    Ok(eq.len() > mids.len())
}

/// What a verification sweep asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Equality exactly at the midpoints for n >= 3, strict elsewhere and
    /// for n in {1, 2}.
    IffCharacterization,
    /// rhs >= F(n) everywhere; off-midpoint equalities are collected as
    /// findings, not violations.
    InequalityOnly,
}

impl VerifyMode {
    pub fn short(&self) -> &'static str {
        match self {
            VerifyMode::IffCharacterization => "iff",
            VerifyMode::InequalityOnly => "ineq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    InequalityViolated,
    EqualityMissingAtMidpoint,
    UnexpectedEqualityOffMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub i: u64,
    pub rhs: u64,
    #[serde(rename = "fn")]
    pub fn_value: u64,
    pub kind: ViolationKind,
}

/// A tight comparison away from the midpoints, recorded in inequality-only
/// mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialEquality {
    pub n: u64,
    pub i: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Worker count for the sweep; 1 means fully sequential.
    pub jobs: usize,
    /// Max entries retained per finding list; totals stay exact.
    pub list_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 1,
            list_cap: 1000,
        }
    }
}

/// Result of sweeping every (n, i) with 1 <= i <= n <= n_max.
///
/// The finding lists are sorted by (n, i) and truncated at the configured
/// cap; `violations_total` and `special_total` count everything. Reports are
/// identical for any worker count.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub recurrence: String,
    pub n_max: u64,
    pub mode: VerifyMode,
    pub violations: Vec<Violation>,
    pub violations_total: u64,
    pub special_equalities: Vec<SpecialEquality>,
    pub special_total: u64,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations_total == 0
    }
}

#[derive(Default)]
struct Chunk {
    violations: Vec<Violation>,
    violations_total: u64,
    specials: Vec<SpecialEquality>,
    special_total: u64,
}

impl Chunk {
    fn push_violation(&mut self, v: Violation, cap: usize) {
        self.violations_total += 1;
        if self.violations.len() < cap {
            self.violations.push(v);
        }
    }

    fn push_special(&mut self, s: SpecialEquality, cap: usize) {
        self.special_total += 1;
        if self.specials.len() < cap {
            self.specials.push(s);
        }
    }

    fn absorb(&mut self, other: Chunk, cap: usize) {
        self.violations_total += other.violations_total;
        self.special_total += other.special_total;
        let room = cap.saturating_sub(self.violations.len());
        self.violations
            .extend(other.violations.into_iter().take(room));
        let room = cap.saturating_sub(self.specials.len());
        self.specials.extend(other.specials.into_iter().take(room));
    }
}

/// Check every split of one n. The memo is read-only here, so the same
/// function serves the sequential and the parallel sweep.
fn check_line(memo: &MemoTable, n: u64, mode: VerifyMode, cap: usize) -> Result<Chunk> {
    let vals = memo.values();
    let addend = memo.recurrence().addend();
    let fn_value = vals[n as usize];
    let mids = midpoint_set(n)?;
    let mut chunk = Chunk::default();
    for i in 1..=n {
        let rhs = sum5(
            vals[i as usize],
            vals[(n - i + 1) as usize],
            vals[(i - 1) as usize],
            vals[(n - i) as usize],
            addend,
        )
        .ok_or_else(|| Error::Overflow {
            name: memo.recurrence().name().to_string(),
            n,
        })?;
        let at_midpoint = mids.contains(i);
        if rhs < fn_value {
            chunk.push_violation(
                Violation {
                    n,
                    i,
                    rhs,
                    fn_value,
                    kind: ViolationKind::InequalityViolated,
                },
                cap,
            );
        } else if rhs == fn_value {
            if !at_midpoint {
                match mode {
                    VerifyMode::IffCharacterization => chunk.push_violation(
                        Violation {
                            n,
                            i,
                            rhs,
                            fn_value,
                            kind: ViolationKind::UnexpectedEqualityOffMidpoint,
                        },
                        cap,
                    ),
                    VerifyMode::InequalityOnly => {
                        chunk.push_special(SpecialEquality { n, i, rhs }, cap)
                    }
                }
            }
        } else if at_midpoint && mode == VerifyMode::IffCharacterization {
            // Unreachable for validated tables (midpoints are tight by
            // construction) but the sweep does not assume that.
            chunk.push_violation(
                Violation {
                    n,
                    i,
                    rhs,
                    fn_value,
                    kind: ViolationKind::EqualityMissingAtMidpoint,
                },
                cap,
            );
        }
    }
    Ok(chunk)
}

pub fn verify_range(memo: &MemoTable, n_max: u64, mode: VerifyMode) -> Result<VerificationReport> {
    verify_range_with(memo, n_max, mode, VerifyOptions::default())
}

/// Sweep with explicit worker count and list cap. The n-range is partitioned
/// across workers; per-n chunks merge associatively in ascending n, so the
/// report is byte-for-byte what the sequential sweep produces.
pub fn verify_range_with(
    memo: &MemoTable,
    n_max: u64,
    mode: VerifyMode,
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::Domain("verification range must start at n = 1".into()));
    }
    if opts.jobs == 0 {
        return Err(Error::Domain("jobs must be at least 1".into()));
    }
    memo.value(n_max)?;
    let start = Instant::now();
    let cap = opts.list_cap;
    let mut total = Chunk::default();
    if opts.jobs == 1 {
        for n in 1..=n_max {
            total.absorb(check_line(memo, n, mode, cap)?, cap);
        }
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
        let chunks: Vec<Chunk> = pool.install(|| {
            (1..=n_max)
                .into_par_iter()
                .map(|n| check_line(memo, n, mode, cap))
                .collect::<Result<Vec<_>>>()
        })?;
        for chunk in chunks {
            total.absorb(chunk, cap);
        }
    }
    Ok(VerificationReport {
        recurrence: memo.recurrence().name().to_string(),
        n_max,
        mode,
        violations: total.violations,
        violations_total: total.violations_total,
        special_equalities: total.specials,
        special_total: total.special_total,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::HalfSplitRecurrence;

    fn filled(r: HalfSplitRecurrence, max: u64) -> MemoTable {
        let mut memo = MemoTable::new(r);
        memo.ensure(max).unwrap();
        memo
    }

    #[test]
    fn split_fixed_cases() {
        let t = filled(HalfSplitRecurrence::t(), 16);
        let p = filled(HalfSplitRecurrence::p(), 16);
        let cases = [
            (&t, 7, 3, 20, 19, Relation::Strict),
            (&t, 5, 2, 11, 9, Relation::Strict),
            (&p, 7, 3, 7, 7, Relation::Tight),
            (&p, 8, 3, 10, 9, Relation::Strict),
            (&t, 3, 2, 3, 3, Relation::Tight),
        ];
        for (memo, n, i, rhs, fn_value, relation) in cases {
            let ev = split_value(memo, n, i).unwrap();
            assert_eq!((ev.rhs, ev.fn_value, ev.relation), (rhs, fn_value, relation), "({n}, {i})");
        }
    }

    #[test]
    fn split_domain_errors() {
        let t = filled(HalfSplitRecurrence::t(), 8);
        assert!(split_value(&t, 5, 0).is_err());
        assert!(split_value(&t, 5, 6).is_err());
        assert!(split_value(&t, 0, 1).is_err());
        // filled only through 8: asking about n = 9 must fail loudly
        assert!(split_value(&t, 9, 4).is_err());
    }

    #[test]
    fn equality_fixed_cases() {
        let t = filled(HalfSplitRecurrence::t(), 8);
        assert_eq!(equality_set(&t, 8).unwrap(), vec![4, 5]);
        assert_eq!(equality_set(&t, 1).unwrap(), Vec::<u64>::new());
        let p = filled(HalfSplitRecurrence::p(), 28);
        assert_eq!(equality_set(&p, 7).unwrap(), vec![3, 4, 5]);
        assert_eq!(equality_set(&p, 27).unwrap(), vec![12, 13, 14, 15, 16]);
        let thirteen = equality_set(&p, 13).unwrap();
        for i in [6, 7, 8] {
            assert!(thirteen.contains(&i));
        }
    }

    #[test]
    fn rhs_symmetric_under_index_reflection() {
        let t = filled(HalfSplitRecurrence::t(), 200);
        for n in 1..=200u64 {
            for i in 1..=n {
                assert_eq!(
                    split_rhs(&t, n, i).unwrap(),
                    split_rhs(&t, n, n - i + 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn extreme_indices_are_strict() {
        for r in [HalfSplitRecurrence::t(), HalfSplitRecurrence::p()] {
            let memo = filled(r, 2048);
            for n in 3..=2048u64 {
                for i in [1, n] {
                    assert_eq!(
                        split_value(&memo, n, i).unwrap().relation,
                        Relation::Strict,
                        "n = {n}, i = {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn midpoints_are_tight_for_any_member() {
        for r in [
            HalfSplitRecurrence::t(),
            HalfSplitRecurrence::p(),
            HalfSplitRecurrence::new("c", 3, 1, 4, 2).unwrap(),
        ] {
            let memo = filled(r, 300);
            for n in 3..=300u64 {
                for i in midpoint_set(n).unwrap().to_vec() {
                    assert_eq!(split_value(&memo, n, i).unwrap().relation, Relation::Tight);
                }
            }
        }
    }

    #[test]
    fn verify_iff_holds_for_t() {
        let t = filled(HalfSplitRecurrence::t(), 300);
        let report = verify_range(&t, 300, VerifyMode::IffCharacterization).unwrap();
        assert!(report.passed());
        assert_eq!(report.violations_total, 0);
        assert_eq!(report.special_total, 0);
    }

    #[test]
    fn verify_ineq_holds_for_p_with_findings() {
        let p = filled(HalfSplitRecurrence::p(), 300);
        let report = verify_range(&p, 300, VerifyMode::InequalityOnly).unwrap();
        assert!(report.passed());
        assert!(report.special_total > 0);
        assert_eq!(
            report.special_equalities.first().map(|s| (s.n, s.i)),
            Some((7, 3))
        );
        let tiny = verify_range(&p, 2, VerifyMode::InequalityOnly).unwrap();
        assert!(tiny.passed());
        assert_eq!(tiny.special_total, 0);
    }

    #[test]
    fn verify_iff_rejects_p() {
        let p = filled(HalfSplitRecurrence::p(), 300);
        let report = verify_range(&p, 300, VerifyMode::IffCharacterization).unwrap();
        assert!(!report.passed());
        let first = report.violations[0];
        assert_eq!((first.n, first.i), (7, 3));
        assert_eq!(first.kind, ViolationKind::UnexpectedEqualityOffMidpoint);
    }

    #[test]
    fn verify_cap_keeps_totals_exact() {
        let z = filled(HalfSplitRecurrence::new("zero", 0, 0, 0, 0).unwrap(), 50);
        let opts = VerifyOptions {
            jobs: 1,
            list_cap: 5,
        };
        let report = verify_range_with(&z, 50, VerifyMode::IffCharacterization, opts).unwrap();
        assert_eq!(report.violations.len(), 5);
        // every split of the all-zero member is tight, so each off-midpoint
        // pair is a violation in iff mode
        let mut expected = 0u64;
        for n in 1..=50u64 {
            expected += n - midpoint_set(n).unwrap().len() as u64;
        }
        assert_eq!(report.violations_total, expected);
        assert_eq!(report.violations[0].n, 1);
        assert_eq!(report.violations[0].i, 1);
    }

    #[test]
    fn parallel_sweep_matches_sequential() {
        let p = filled(HalfSplitRecurrence::p(), 400);
        for (mode, cap) in [
            (VerifyMode::InequalityOnly, 1000),
            (VerifyMode::IffCharacterization, 7),
        ] {
            let seq = verify_range_with(
                &p,
                400,
                mode,
                VerifyOptions {
                    jobs: 1,
                    list_cap: cap,
                },
            )
            .unwrap();
            let par = verify_range_with(
                &p,
                400,
                mode,
                VerifyOptions {
                    jobs: 3,
                    list_cap: cap,
                },
            )
            .unwrap();
            assert_eq!(seq.violations, par.violations);
            assert_eq!(seq.violations_total, par.violations_total);
            assert_eq!(seq.special_equalities, par.special_equalities);
            assert_eq!(seq.special_total, par.special_total);
        }
    }

    #[test]
    fn verify_requires_filled_memo() {
        let t = filled(HalfSplitRecurrence::t(), 10);
        assert!(verify_range(&t, 11, VerifyMode::IffCharacterization).is_err());
        assert!(verify_range(&t, 0, VerifyMode::IffCharacterization).is_err());
    }

    #[test]
    fn special_detection() {
        let p = filled(HalfSplitRecurrence::p(), 16);
        assert!(is_special(&p, 7).unwrap());
        assert!(!is_special(&p, 8).unwrap());
        let t = filled(HalfSplitRecurrence::t(), 16);
        assert!(!is_special(&t, 7).unwrap());
    }
}
