//! One-level expansion matrices and the column census.
//!
//! For a split pair (n, i) the four right-hand arguments (i, n-i+1, i-1, n-i)
//! each expand into the children pattern (ceil(a/2), floor(a/2)+1,
//! ceil(a/2)-1, floor(a/2)); stacking the four patterns gives a 4x4 matrix.
//! Read column-wise, the entries regroup: column c carries, as a multiset,
//! the split quadruple of a smaller pair (k_c, j_c), where {k_1..k_4} equals
//! children(n). `column_params` hard-codes that (k, j) table per parity of
//! (n, i); the regrouping is cross-validated by tests (entry conservation).
//!
//! A column is "unlucky" when its j lands on a midpoint of its k, so the
//! column cannot contribute a strict inequality. The census classifies all
//! four columns of a pair; the quartet identity ties the outer split gap to
//! the sum of the column gaps.

use serde::Serialize;

use crate::decomposition::{equality_set, split_value, Relation};
use crate::error::{Error, Result};
use crate::recurrence::{children, midpoint_set, sum5, MemoTable};

/// The split quadruple (i, n-i+1, i-1, n-i), which partitions 2n.
/// Representable for every 1 <= i <= n; the extreme indices i in {1, n} are
/// flagged degenerate (a zero part appears).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EpsilonPartition {
    pub n: u64,
    pub i: u64,
    pub parts: [u64; 4],
    pub degenerate: bool,
}

impl EpsilonPartition {
    pub fn new(n: u64, i: u64) -> Result<Self> {
        if n == 0 || i == 0 || i > n {
            return Err(Error::Domain(format!(
                "partition index must satisfy 1 <= i <= n, got (n={n}, i={i})"
            )));
        }
        Ok(EpsilonPartition {
            n,
            i,
            parts: [i, n - i + 1, i - 1, n - i],
            degenerate: i == 1 || i == n,
        })
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Parity of (n, i), in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    EvenEven,
    OddOdd,
    EvenOdd,
    OddEven,
}

impl ParityCase {
    pub fn of(n: u64, i: u64) -> Self {
        match (n % 2, i % 2) {
            (0, 0) => ParityCase::EvenEven,
            (1, 1) => ParityCase::OddOdd,
            (0, 1) => ParityCase::EvenOdd,
            _ => ParityCase::OddEven,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ParityCase::EvenEven => "even-even",
            ParityCase::OddOdd => "odd-odd",
            ParityCase::EvenOdd => "even-odd",
            ParityCase::OddEven => "odd-even",
        }
    }
}

/// The stacked one-level expansion of a split pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArgumentMatrix {
    pub n: u64,
    pub i: u64,
    /// Row arguments (i, n-i+1, i-1, n-i).
    pub row_args: [u64; 4],
    /// Row r is the children pattern of row_args[r].
    pub entries: [[u64; 4]; 4],
    /// Whether the row expansion is the defining equation (argument >= 3).
    /// Rows with smaller arguments use the same pattern formulas but stand
    /// for base values, not equations.
    pub exact_rows: [bool; 4],
}

fn check_matrix_domain(n: u64, i: u64) -> Result<()> {
    if n < 3 || i < 2 || i > n - 1 {
        return Err(Error::Domain(format!(
            "matrix pair requires n >= 3 and 2 <= i <= n-1, got (n={n}, i={i})"
        )));
    }
    Ok(())
}

/// Children pattern of a >= 1 by the floor/ceiling formulas.
fn pattern(a: u64) -> [u64; 4] {
    let half = a / 2;
    let ceil = a - half;
    [ceil, half + 1, ceil - 1, half]
}

pub fn build_matrix(n: u64, i: u64) -> Result<ArgumentMatrix> {
    check_matrix_domain(n, i)?;
    let row_args = [i, n - i + 1, i - 1, n - i];
    let mut entries = [[0u64; 4]; 4];
    let mut exact_rows = [false; 4];
    for (r, &a) in row_args.iter().enumerate() {
        entries[r] = pattern(a);
        exact_rows[r] = a >= 3;
    }
    Ok(ArgumentMatrix {
        n,
        i,
        row_args,
        entries,
        exact_rows,
    })
}

/// The (k, j) pair of each column, by parity of (n, i).
///
/// Invariants, cross-validated by tests: the k multiset equals children(n),
/// each pair satisfies 1 <= j <= k, and column c of the matrix equals (as a
/// multiset) the split quadruple (j, k-j+1, j-1, k-j) of its pair.
// the (k, j) table is written with the literal +-1 halving formulas of each
// parity case rather than div_ceil, so the four variants stay comparable
#[allow(clippy::manual_div_ceil)]
pub fn column_params(n: u64, i: u64) -> Result<[(u64, u64); 4]> {
    check_matrix_domain(n, i)?;
    let params = match ParityCase::of(n, i) {
        ParityCase::EvenEven => [
            (n / 2, i / 2),
            (n / 2 - 1, i / 2),
            (n / 2, i / 2),
            (n / 2 + 1, i / 2 + 1),
        ],
        ParityCase::OddOdd => [
            ((n - 1) / 2, (i - 1) / 2),
            ((n - 1) / 2, (i + 1) / 2),
            ((n + 1) / 2, (i + 1) / 2),
            ((n + 1) / 2, (i + 1) / 2),
        ],
        ParityCase::EvenOdd => [
            (n / 2 - 1, (i - 1) / 2),
            (n / 2, (i + 1) / 2),
            (n / 2 + 1, (i + 1) / 2),
            (n / 2, (i + 1) / 2),
        ],
        ParityCase::OddEven => [
            ((n - 1) / 2, i / 2),
            ((n - 1) / 2, i / 2),
            ((n + 1) / 2, i / 2),
            ((n + 1) / 2, i / 2 + 1),
        ],
    };
    debug_assert!({
        let mut ks: Vec<u64> = params.iter().map(|p| p.0).collect();
        let mut cs = children(n)?.to_vec();
        ks.sort_unstable();
        cs.sort_unstable();
        ks == cs
    });
    debug_assert!(params.iter().all(|&(k, j)| j >= 1 && j <= k));
    Ok(params)
}

/// One classified column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColumnRecord {
    pub k: u64,
    pub j: u64,
    pub relation: Relation,
    /// j lands on a midpoint of k.
    pub unlucky: bool,
    /// k <= 2 or j in {1, k}: classified by direct value comparison, outside
    /// the midpoint characterization's domain.
    pub degenerate: bool,
    /// k's equality set spreads beyond its midpoints and contains j, for the
    /// recurrence under census.
    pub special: bool,
}

pub fn classify_column(memo: &MemoTable, k: u64, j: u64) -> Result<ColumnRecord> {
    let ev = split_value(memo, k, j)?;
    let mids = midpoint_set(k)?;
    let eq = equality_set(memo, k)?;
    Ok(ColumnRecord {
        k,
        j,
        relation: ev.relation,
        unlucky: mids.contains(j),
        degenerate: k <= 2 || j == 1 || j == k,
        special: eq.len() > mids.len() && eq.contains(&j),
    })
}

/// The four classified columns of a split pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColumnCensus {
    pub n: u64,
    pub i: u64,
    pub parity: ParityCase,
    pub columns: [ColumnRecord; 4],
}

impl ColumnCensus {
    pub fn tight_count(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| c.relation == Relation::Tight)
            .count()
    }

    pub fn strict_count(&self) -> usize {
        4 - self.tight_count()
    }

    pub fn unlucky_count(&self) -> usize {
        self.columns.iter().filter(|c| c.unlucky).count()
    }

    pub fn degenerate_count(&self) -> usize {
        self.columns.iter().filter(|c| c.degenerate).count()
    }

    pub fn special_count(&self) -> usize {
        self.columns.iter().filter(|c| c.special).count()
    }

    pub fn all_tight(&self) -> bool {
        self.tight_count() == 4
    }
}

pub fn census(memo: &MemoTable, n: u64, i: u64) -> Result<ColumnCensus> {
    let params = column_params(n, i)?;
    let mut columns = [ColumnRecord {
        k: 0,
        j: 0,
        relation: Relation::Tight,
        unlucky: false,
        degenerate: false,
        special: false,
    }; 4];
    for (c, &(k, j)) in params.iter().enumerate() {
        columns[c] = classify_column(memo, k, j)?;
    }
    Ok(ColumnCensus {
        n,
        i,
        parity: ParityCase::of(n, i),
        columns,
    })
}

/// The outer split gap equals the sum of the four column gaps whenever every
/// row expansion is a genuine equation, which 4 <= i <= n-3 guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuartetIdentity {
    pub n: u64,
    pub i: u64,
    pub lhs_gap: u64,
    pub column_gaps: [u64; 4],
    pub holds: bool,
}

pub fn verify_quartet_identity(memo: &MemoTable, n: u64, i: u64) -> Result<QuartetIdentity> {
    if n < 7 || i < 4 || i > n - 3 {
        return Err(Error::Domain(format!(
            "quartet identity requires n >= 7 and 4 <= i <= n-3, got (n={n}, i={i})"
        )));
    }
    let outer = split_value(memo, n, i)?;
    let lhs_gap = outer.rhs - outer.fn_value;
    let mut column_gaps = [0u64; 4];
    for (c, &(k, j)) in column_params(n, i)?.iter().enumerate() {
        let ev = split_value(memo, k, j)?;
        column_gaps[c] = ev.rhs - ev.fn_value;
    }
    let total = sum5(column_gaps[0], column_gaps[1], column_gaps[2], column_gaps[3], 0)
        .ok_or_else(|| Error::Overflow {
            name: memo.recurrence().name().to_string(),
            n,
        })?;
    Ok(QuartetIdentity {
        n,
        i,
        lhs_gap,
        column_gaps,
        holds: lhs_gap == total,
    })
}
