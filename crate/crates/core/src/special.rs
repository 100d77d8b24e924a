//! Special numbers: indices whose equality set spreads beyond the midpoints.
//!
//! For P the special numbers come in consecutive groups whose boundaries
//! follow a doubling rule (first' = 2*first - 1, last' = 2*last + 1). The
//! functions here detect the set, slice it into groups, check the boundary
//! rule, and profile how far each member's equality set spreads.

use serde::Serialize;

use crate::decomposition::{equality_set, is_special};
use crate::error::{Error, Result};
use crate::recurrence::{children, midpoint_set, MemoTable};

/// A maximal run of consecutive special numbers. `index` counts groups from
/// 1 in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialGroup {
    pub index: u32,
    pub first: u64,
    pub last: u64,
}

impl SpecialGroup {
    pub fn len(&self) -> u64 {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> std::ops::RangeInclusive<u64> {
        self.first..=self.last
    }
}

/// All special n with 3 <= n <= n_max, ascending. Requires the memo filled
/// through n_max.
pub fn special_set(memo: &MemoTable, n_max: u64) -> Result<Vec<u64>> {
    special_set_with(memo, n_max, 1)
}

/// Same sweep, partitioned by n across `jobs` workers. The merge keeps
/// ascending order, so the result never depends on the worker count.
pub fn special_set_with(memo: &MemoTable, n_max: u64, jobs: usize) -> Result<Vec<u64>> {
    if jobs == 0 {
        return Err(Error::Domain("jobs must be at least 1".into()));
    }
    memo.value(n_max)?;
    if n_max < 3 {
        return Ok(vec![]);
    }
    if jobs == 1 {
        let mut out = Vec::new();
        for n in 3..=n_max {
            if is_special(memo, n)? {
                out.push(n);
            }
        }
        return Ok(out);
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
    let flags: Vec<bool> = pool.install(|| {
        (3..=n_max)
            .into_par_iter()
            .map(|n| is_special(memo, n))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(flags
        .into_iter()
        .enumerate()
        .filter_map(|(idx, special)| special.then_some(idx as u64 + 3))
        .collect())
}

/// Slice an ascending list of special numbers into maximal consecutive runs.
pub fn detect_groups(specials: &[u64]) -> Vec<SpecialGroup> {
    let mut groups: Vec<SpecialGroup> = Vec::new();
    for &n in specials {
        match groups.last_mut() {
            Some(g) if n == g.last + 1 => g.last = n,
            _ => groups.push(SpecialGroup {
                index: groups.len() as u32 + 1,
                first: n,
                last: n,
            }),
        }
    }
    groups
}

/// Residuals of one group against the boundary rule applied to its
/// predecessor; zero residuals mean the rule holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupResidual {
    pub index: u32,
    pub first_residual: i64,
    pub last_residual: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupRecurrenceCheck {
    pub holds: bool,
    pub residuals: Vec<GroupResidual>,
}

/// Check first' = 2*first - 1 and last' = 2*last + 1 across consecutive
/// groups. Needs at least two groups to say anything.
pub fn check_group_recurrence(groups: &[SpecialGroup]) -> Result<GroupRecurrenceCheck> {
    if groups.len() < 2 {
        return Err(Error::Domain(
            "group recurrence needs at least two groups".into(),
        ));
    }
    let mut residuals = Vec::with_capacity(groups.len() - 1);
    for pair in groups.windows(2) {
        let (prev, cur) = (pair[0], pair[1]);
        residuals.push(GroupResidual {
            index: cur.index,
            first_residual: cur.first as i64 - (2 * prev.first as i64 - 1),
            last_residual: cur.last as i64 - (2 * prev.last as i64 + 1),
        });
    }
    Ok(GroupRecurrenceCheck {
        holds: residuals
            .iter()
            .all(|r| r.first_residual == 0 && r.last_residual == 0),
        residuals,
    })
}

/// The boundary rule extrapolated one step past a group. Callers must label
/// the prediction as unverified beyond whatever n_max they actually swept.
pub fn predict_next(group: &SpecialGroup) -> (u64, u64) {
    (
        group.first.saturating_mul(2).saturating_sub(1),
        group.last.saturating_mul(2).saturating_add(1),
    )
}

/// All n in [lo, hi] whose defining decomposition contains k.
///
/// Every child of n lies within [n/2 - 1, n/2 + 1] rounded, so candidates
/// are confined to [2k-2, 2k+2]; the scan intersects that window with the
/// requested interval.
pub fn parents_containing(k: u64, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if k < 1 {
        return Err(Error::Domain("parents_containing requires k >= 1".into()));
    }
    if lo > hi {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    let from = lo.max(3).max(k.saturating_mul(2).saturating_sub(2));
    let to = hi.min(k.saturating_mul(2).saturating_add(2));
    let mut out = Vec::new();
    let mut n = from;
    while n <= to {
        if children(n)?.contains(&k) {
            out.push(n);
        }
        n += 1;
    }
    Ok(out)
}

/// How one special number's equality set spreads around its midpoints.
/// Offsets are i - min(midpoint_set(n)) for each tight i, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadProfile {
    pub n: u64,
    #[serde(rename = "fn")]
    pub fn_value: u64,
    pub width: u64,
    pub offsets: Vec<i64>,
}

/// Profile every member of a group. Requires the memo filled through the
/// group's last member.
pub fn spread_profile(memo: &MemoTable, group: &SpecialGroup) -> Result<Vec<SpreadProfile>> {
    let mut out = Vec::with_capacity(group.len() as usize);
    for n in group.members() {
        let eq = equality_set(memo, n)?;
        let anchor = midpoint_set(n)?
            .min()
            .ok_or_else(|| Error::Domain(format!("n = {n} has no midpoint to anchor on")))?
            as i64;
        out.push(SpreadProfile {
            n,
            fn_value: memo.value(n)?,
            width: eq.len() as u64,
            offsets: eq.iter().map(|&i| i as i64 - anchor).collect(),
        });
    }
    Ok(out)
}

/// Non-strict rise to a peak followed by a non-strict fall.
pub fn is_unimodal(widths: &[u64]) -> bool {
    if widths.is_empty() {
        return true;
    }
    let mut i = 0;
    while i + 1 < widths.len() && widths[i] <= widths[i + 1] {
        i += 1;
    }
    while i + 1 < widths.len() && widths[i] >= widths[i + 1] {
        i += 1;
    }
    i == widths.len() - 1
}
