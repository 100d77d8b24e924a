//! The half-split recurrence family and its exact evaluator.
//!
//! A family member is fixed by three base values and an additive constant:
//!
//! ```text
//! F(0) = b0,  F(1) = b1,  F(2) = b2
//! F(n) = F(ceil(n/2)) + F(floor(n/2)+1) + F(ceil(n/2)-1) + F(floor(n/2)) + c   for n >= 3
//! ```
//!
//! Two members are verified end to end by the test suite: T = (0, 0, 1, 1)
//! and P = (0, 0, 0, 1). Any other parameter choice is a legal but unverified
//! family member.
//!
//! All arithmetic is exact u64: evaluation returns the true value or an
//! overflow error, never a silently wrapped result.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest index a memo table will materialize. Keeps `ensure` from
/// attempting absurd allocations; desk-scale sweeps stay far below it.
pub const MAX_INDEX: u64 = 1 << 26;

/// Checked five-term sum shared by every place that evaluates the defining
/// right-hand side.
pub(crate) fn sum5(a: u64, b: u64, c: u64, d: u64, e: u64) -> Option<u64> {
    a.checked_add(b)?
        .checked_add(c)?
        .checked_add(d)?
        .checked_add(e)
}

/// One member of the family: name, bases, additive constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfSplitRecurrence {
    name: String,
    base0: u64,
    base1: u64,
    base2: u64,
    addend: u64,
}

impl HalfSplitRecurrence {
    /// Build a custom family member. Names are identifiers (ASCII
    /// alphanumeric plus `_` and `-`, at most 32 chars) so they survive the
    /// cache header format unescaped.
    pub fn new(
        name: impl Into<String>,
        base0: u64,
        base1: u64,
        base2: u64,
        addend: u64,
    ) -> Result<Self> {
        let name = name.into();
        let ok = !name.is_empty()
            && name.len() <= 32
            && name
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
        if !ok {
            return Err(Error::Domain(format!(
                "invalid recurrence name {name:?}: use 1-32 ASCII alphanumeric, '_' or '-' chars"
            )));
        }
        Ok(Self {
            name,
            base0,
            base1,
            base2,
            addend,
        })
    }

    /// The T member: bases (0, 0, 1), addend 1.
    pub fn t() -> Self {
        Self::new("T", 0, 0, 1, 1).expect("builtin name is valid")
    }

    /// The P member: bases (0, 0, 0), addend 1.
    pub fn p() -> Self {
        Self::new("P", 0, 0, 0, 1).expect("builtin name is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bases(&self) -> (u64, u64, u64) {
        (self.base0, self.base1, self.base2)
    }

    pub fn addend(&self) -> u64 {
        self.addend
    }

    /// True when the parameters equal T's or P's, the two members the test
    /// suite verifies exhaustively. Name is irrelevant; only numbers count.
    pub fn is_verified_instance(&self) -> bool {
        self.same_parameters(&Self::t()) || self.same_parameters(&Self::p())
    }

    /// Parameter equality, ignoring the display name.
    pub fn same_parameters(&self, other: &Self) -> bool {
        (self.base0, self.base1, self.base2, self.addend)
            == (other.base0, other.base1, other.base2, other.addend)
    }
}

/// The four arguments on the right side of the defining equation, in fixed
/// order (ceil(n/2), floor(n/2)+1, ceil(n/2)-1, floor(n/2)).
///
/// For n >= 3 every element lies in [1, n) and the four sum to 2n.
pub fn children(n: u64) -> Result<[u64; 4]> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "children(n) requires n >= 3, got {n}"
        )));
    }
    let half = n / 2;
    let ceil = n - half;
    Ok([ceil, half + 1, ceil - 1, half])
}

/// Midpoint split indices of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MidpointSet {
    /// n in {1, 2}: no midpoints.
    Empty,
    /// odd n >= 3: the single index (n+1)/2.
    One(u64),
    /// even n >= 3: the pair (n/2, n/2 + 1).
    Two(u64, u64),
}

impl MidpointSet {
    pub fn contains(&self, i: u64) -> bool {
        match *self {
            MidpointSet::Empty => false,
            MidpointSet::One(a) => i == a,
            MidpointSet::Two(a, b) => i == a || i == b,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MidpointSet::Empty => 0,
            MidpointSet::One(_) => 1,
            MidpointSet::Two(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, MidpointSet::Empty)
    }

    /// Smallest midpoint, if any.
    pub fn min(&self) -> Option<u64> {
        match *self {
            MidpointSet::Empty => None,
            MidpointSet::One(a) => Some(a),
            MidpointSet::Two(a, _) => Some(a),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        match *self {
            MidpointSet::Empty => vec![],
            MidpointSet::One(a) => vec![a],
            MidpointSet::Two(a, b) => vec![a, b],
        }
    }
}

/// Midpoints of n: {(n+1)/2} for odd n >= 3, {n/2, n/2+1} for even n >= 3,
/// empty for n in {1, 2}. n = 0 has no split indices at all.
pub fn midpoint_set(n: u64) -> Result<MidpointSet> {
    match n {
        0 => Err(Error::Domain("midpoint_set(0) is undefined".into())),
        1 | 2 => Ok(MidpointSet::Empty),
        n if n % 2 == 1 => Ok(MidpointSet::One(n.div_ceil(2))),
        n => Ok(MidpointSet::Two(n / 2, n / 2 + 1)),
    }
}

/// Dense bottom-up memo for one recurrence.
///
/// Entries are immutable once written: `ensure` only appends, so a filled
/// table can be shared read-only across worker threads.
#[derive(Debug, Clone)]
pub struct MemoTable {
    recurrence: HalfSplitRecurrence,
    values: Vec<u64>,
}

impl MemoTable {
    /// Fresh table holding exactly the three base values.
    pub fn new(recurrence: HalfSplitRecurrence) -> Self {
        let (b0, b1, b2) = recurrence.bases();
        MemoTable {
            recurrence,
            values: vec![b0, b1, b2],
        }
    }

    /// Rebuild a table from raw values, revalidating every entry against the
    /// recurrence. Rejects tables shorter than the three bases, base
    /// mismatches, and any n >= 3 whose stored value is not the defining sum.
    pub fn from_values(recurrence: HalfSplitRecurrence, values: Vec<u64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Cache(format!(
                "table must cover n = 0..=2, got {} entries",
                values.len()
            )));
        }
        let (b0, b1, b2) = recurrence.bases();
        if values[0] != b0 || values[1] != b1 || values[2] != b2 {
            return Err(Error::Cache(format!(
                "base values ({}, {}, {}) do not match recurrence {} = ({b0}, {b1}, {b2})",
                values[0],
                values[1],
                values[2],
                recurrence.name()
            )));
        }
        for n in 3..values.len() {
            let [a, b, c, d] = children(n as u64)?;
            let expect = sum5(
                values[a as usize],
                values[b as usize],
                values[c as usize],
                values[d as usize],
                recurrence.addend(),
            )
            .ok_or_else(|| Error::Cache(format!("stored table overflows at n = {n}")))?;
            if values[n] != expect {
                return Err(Error::Cache(format!(
                    "stored value {}({n}) = {} does not satisfy the recurrence (expected {expect})",
                    recurrence.name(),
                    values[n]
                )));
            }
        }
        Ok(MemoTable { recurrence, values })
    }

    pub fn recurrence(&self) -> &HalfSplitRecurrence {
        &self.recurrence
    }

    /// Largest n the table currently covers.
    pub fn max_index(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Extend the table through n, bottom-up. Appending never revisits an
    /// existing entry.
    pub fn ensure(&mut self, n: u64) -> Result<()> {
        if n > MAX_INDEX {
            return Err(Error::Domain(format!(
                "n = {n} exceeds the supported maximum {MAX_INDEX}"
            )));
        }
        while (self.values.len() as u64) <= n {
            let m = self.values.len() as u64;
            let [a, b, c, d] = children(m)?;
            let v = sum5(
                self.values[a as usize],
                self.values[b as usize],
                self.values[c as usize],
                self.values[d as usize],
                self.recurrence.addend(),
            )
            .ok_or_else(|| Error::Overflow {
                name: self.recurrence.name().to_string(),
                n: m,
            })?;
            self.values.push(v);
        }
        Ok(())
    }

    /// Evaluate F(n), filling the table as needed.
    pub fn eval(&mut self, n: u64) -> Result<u64> {
        self.ensure(n)?;
        Ok(self.values[n as usize])
    }

    /// Read-only lookup. Errors if the table has not been filled through n;
    /// callers that hold `&MemoTable` are expected to have sized it first.
    pub fn value(&self, n: u64) -> Result<u64> {
        self.values
            .get(n as usize)
            .copied()
            .ok_or_else(|| Error::Domain(format!("memo table not filled through n = {n}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Reference evaluator: independent top-down recursion in u128.
    fn oracle(b0: u64, b1: u64, b2: u64, addend: u64, n: u64, memo: &mut HashMap<u64, u128>) -> u128 {
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let v = match n {
            0 => b0 as u128,
            1 => b1 as u128,
            2 => b2 as u128,
            _ => {
                let half = n / 2;
                let ceil = n - half;
                oracle(b0, b1, b2, addend, ceil, memo)
                    + oracle(b0, b1, b2, addend, half + 1, memo)
                    + oracle(b0, b1, b2, addend, ceil - 1, memo)
                    + oracle(b0, b1, b2, addend, half, memo)
                    + addend as u128
            }
        };
        memo.insert(n, v);
        v
    }

    fn table(r: HalfSplitRecurrence, max: u64) -> Vec<u64> {
        let mut memo = MemoTable::new(r);
        memo.ensure(max).unwrap();
        memo.values().to_vec()
    }

    #[test]
    fn t_opening_values() {
        assert_eq!(table(HalfSplitRecurrence::t(), 8), vec![0, 0, 1, 3, 6, 9, 14, 19, 25]);
    }

    #[test]
    fn p_opening_values() {
        assert_eq!(table(HalfSplitRecurrence::p(), 9), vec![0, 0, 0, 1, 2, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn spot_values() {
        let mut t = MemoTable::new(HalfSplitRecurrence::t());
        assert_eq!(t.eval(0).unwrap(), 0);
        assert_eq!(t.eval(2).unwrap(), 1);
        assert_eq!(t.eval(5).unwrap(), 9);
        // T(9) = T(5) + T(5) + T(4) + T(4) + 1 = 9 + 9 + 6 + 6 + 1
        assert_eq!(t.eval(9).unwrap(), 31);
        // T(16) = T(8) + T(9) + T(7) + T(8) + 1 = 25 + 31 + 19 + 25 + 1
        assert_eq!(t.eval(16).unwrap(), 101);
        let mut p = MemoTable::new(HalfSplitRecurrence::p());
        assert_eq!(p.eval(7).unwrap(), 7);
    }

    #[test]
    fn matches_reference_evaluator() {
        for (b0, b1, b2, c) in [(0, 0, 1, 1), (0, 0, 0, 1), (5, 4, 3, 2), (1, 0, 7, 0)] {
            let r = HalfSplitRecurrence::new("x", b0, b1, b2, c).unwrap();
            let got = table(r, 400);
            let mut memo = HashMap::new();
            for (n, &v) in got.iter().enumerate() {
                assert_eq!(v as u128, oracle(b0, b1, b2, c, n as u64, &mut memo), "n = {n}");
            }
        }
    }

    #[test]
    fn children_fixed_cases() {
        assert_eq!(children(7).unwrap(), [4, 4, 3, 3]);
        assert_eq!(children(12).unwrap(), [6, 7, 5, 6]);
        assert_eq!(children(4).unwrap(), [2, 3, 1, 2]);
        assert!(children(2).is_err());
        assert!(children(0).is_err());
    }

    #[test]
    fn children_bounds_and_sum() {
        for n in 3..=4096u64 {
            let cs = children(n).unwrap();
            for c in cs {
                assert!(c >= 1 && c < n, "child {c} out of range for n = {n}");
            }
            assert_eq!(cs.iter().sum::<u64>(), 2 * n);
        }
    }

    #[test]
    fn midpoints_fixed_cases() {
        assert_eq!(midpoint_set(7).unwrap(), MidpointSet::One(4));
        assert_eq!(midpoint_set(8).unwrap(), MidpointSet::Two(4, 5));
        assert_eq!(midpoint_set(2).unwrap(), MidpointSet::Empty);
        assert_eq!(midpoint_set(1).unwrap(), MidpointSet::Empty);
        assert!(midpoint_set(0).is_err());
    }

    #[test]
    fn monotone_growth() {
        let t = table(HalfSplitRecurrence::t(), 4096);
        for n in 3..=4096usize {
            assert!(t[n] > t[n - 1], "T not increasing at n = {n}");
        }
        let p = table(HalfSplitRecurrence::p(), 4096);
        for n in 4..=4096usize {
            assert!(p[n] > p[n - 1], "P not increasing at n = {n}");
        }
    }

    #[test]
    fn zero_member_is_fixed_point() {
        let z = HalfSplitRecurrence::new("zero", 0, 0, 0, 0).unwrap();
        assert!(table(z, 1024).iter().all(|&v| v == 0));
    }

    #[test]
    fn cold_and_warm_fills_agree() {
        let mut cold = MemoTable::new(HalfSplitRecurrence::t());
        cold.ensure(4096).unwrap();
        let mut warm = MemoTable::new(HalfSplitRecurrence::t());
        for step in [10, 100, 1000, 4096] {
            warm.ensure(step).unwrap();
        }
        assert_eq!(cold.values(), warm.values());
        // re-asking never changes anything
        let snapshot = cold.values().to_vec();
        cold.ensure(2048).unwrap();
        assert_eq!(cold.values(), &snapshot[..]);
    }

    #[test]
    fn overflow_is_an_error_not_a_wrap() {
        let big = u64::MAX / 2;
        let r = HalfSplitRecurrence::new("big", big, big, big, 1).unwrap();
        let mut memo = MemoTable::new(r);
        match memo.eval(3) {
            Err(Error::Overflow { name, n }) => {
                assert_eq!(name, "big");
                assert_eq!(n, 3);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn value_requires_filled_table() {
        let memo = MemoTable::new(HalfSplitRecurrence::t());
        assert_eq!(memo.value(2).unwrap(), 1);
        assert!(memo.value(3).is_err());
    }

    #[test]
    fn from_values_validates() {
        let mut memo = MemoTable::new(HalfSplitRecurrence::t());
        memo.ensure(50).unwrap();
        let good = memo.values().to_vec();
        let rebuilt = MemoTable::from_values(HalfSplitRecurrence::t(), good.clone()).unwrap();
        assert_eq!(rebuilt.values(), &good[..]);

        let mut bad = good.clone();
        bad[40] += 1;
        assert!(matches!(
            MemoTable::from_values(HalfSplitRecurrence::t(), bad),
            Err(Error::Cache(_))
        ));
        assert!(MemoTable::from_values(HalfSplitRecurrence::p(), good).is_err());
        assert!(MemoTable::from_values(HalfSplitRecurrence::t(), vec![0, 0]).is_err());
    }

    #[test]
    fn name_validation() {
        assert!(HalfSplitRecurrence::new("ok_name-1", 0, 0, 0, 0).is_ok());
        assert!(HalfSplitRecurrence::new("", 0, 0, 0, 0).is_err());
        assert!(HalfSplitRecurrence::new("has space", 0, 0, 0, 0).is_err());
        assert!(HalfSplitRecurrence::new("x".repeat(33), 0, 0, 0, 0).is_err());
    }

    #[test]
    fn verified_instance_is_by_parameters() {
        assert!(HalfSplitRecurrence::t().is_verified_instance());
        assert!(HalfSplitRecurrence::p().is_verified_instance());
        let t_alias = HalfSplitRecurrence::new("mine", 0, 0, 1, 1).unwrap();
        assert!(t_alias.is_verified_instance());
        let custom = HalfSplitRecurrence::new("c", 1, 2, 3, 4).unwrap();
        assert!(!custom.is_verified_instance());
    }
}
