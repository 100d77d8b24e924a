//! Report payloads and rendering.
//!
//! Each command produces one record. JSON field order follows struct
//! declaration and every list is sorted, so machine formats (json, csv) are
//! byte-stable across identical runs. Wall-clock timing appears only in the
//! human text format.

use std::io::{self, Write};

use serde::Serialize;

use crate::decomposition::{
    SpecialEquality, VerificationReport, VerifyMode, Violation, ViolationKind,
};
use crate::error::{Error, Result};
use crate::matrix::ColumnCensus;
use crate::recurrence::HalfSplitRecurrence;
use crate::special::{SpecialGroup, SpreadProfile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// The recurrence echo carried by every report that has one.
#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceInfo {
    pub name: String,
    pub base0: u64,
    pub base1: u64,
    pub base2: u64,
    pub addend: u64,
    /// Whether these parameters are covered end to end by the verification
    /// suite (T or P). Anything else is a legal but unverified member.
    pub verified_instance: bool,
}

impl From<&HalfSplitRecurrence> for RecurrenceInfo {
    fn from(r: &HalfSplitRecurrence) -> Self {
        let (base0, base1, base2) = r.bases();
        RecurrenceInfo {
            name: r.name().to_string(),
            base0,
            base1,
            base2,
            addend: r.addend(),
            verified_instance: r.is_verified_instance(),
        }
    }
}

impl RecurrenceInfo {
    fn headline(&self) -> String {
        let tag = if self.verified_instance {
            ""
        } else {
            " [unverified family member]"
        };
        format!(
            "{} (bases {}, {}, {}; addend {}){tag}",
            self.name, self.base0, self.base1, self.base2, self.addend
        )
    }
}

pub trait Report: Serialize {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()>;
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()>;
}

pub fn emit(report: &impl Report, format: Format, w: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let body = serde_json::to_string_pretty(report)
                .map_err(|e| Error::Domain(format!("json encoding: {e}")))?;
            writeln!(w, "{body}")?;
        }
        Format::Text => report.write_text(w)?,
        Format::Csv => report.write_csv(w)?,
    }
    Ok(())
}

fn fmt_set(xs: &[u64]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn kind_str(k: ViolationKind) -> &'static str {
    match k {
        ViolationKind::InequalityViolated => "inequality_violated",
        ViolationKind::EqualityMissingAtMidpoint => "equality_missing_at_midpoint",
        ViolationKind::UnexpectedEqualityOffMidpoint => "unexpected_equality_off_midpoint",
    }
}

// ---------------------------------------------------------------- eval

#[derive(Debug, Serialize)]
pub struct EvalRow {
    pub n: u64,
    pub value: u64,
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub first: u64,
    pub last: u64,
    pub values: Vec<EvalRow>,
}

impl EvalReport {
    pub fn new(r: &HalfSplitRecurrence, first: u64, last: u64, values: Vec<EvalRow>) -> Self {
        EvalReport {
            schema_version: SCHEMA_VERSION,
            command: "eval",
            recurrence: r.into(),
            first,
            last,
            values,
        }
    }
}

impl Report for EvalReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.recurrence.headline())?;
        for row in &self.values {
            writeln!(w, "{}({}) = {}", self.recurrence.name, row.n, row.value)?;
        }
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "n,value")?;
        for row in &self.values {
            writeln!(w, "{},{}", row.n, row.value)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub n_max: u64,
    pub mode: &'static str,
    pub passed: bool,
    pub violations_total: u64,
    pub violations: Vec<Violation>,
    pub special_total: u64,
    pub special_equalities: Vec<SpecialEquality>,
    pub list_cap: usize,
    #[serde(skip)]
    elapsed_secs: f64,
}

impl VerifyReport {
    pub fn new(r: &HalfSplitRecurrence, report: &VerificationReport, list_cap: usize) -> Self {
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            recurrence: r.into(),
            n_max: report.n_max,
            mode: report.mode.short(),
            passed: report.passed(),
            violations_total: report.violations_total,
            violations: report.violations.clone(),
            special_total: report.special_total,
            special_equalities: report.special_equalities.clone(),
            list_cap,
            elapsed_secs: report.elapsed.as_secs_f64(),
        }
    }
}

const TEXT_LIST_LIMIT: usize = 10;

impl Report for VerifyReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "verify {} over n = 1..={}, mode {}",
            self.recurrence.headline(),
            self.n_max,
            self.mode
        )?;
        writeln!(w, "violations: {}", self.violations_total)?;
        for v in self.violations.iter().take(TEXT_LIST_LIMIT) {
            writeln!(
                w,
                "  (n={}, i={}) rhs {} vs F(n) {}: {}",
                v.n,
                v.i,
                v.rhs,
                v.fn_value,
                kind_str(v.kind)
            )?;
        }
        if self.violations_total as usize > self.violations.len().min(TEXT_LIST_LIMIT) {
            writeln!(w, "  ...")?;
        }
        if self.mode == VerifyMode::InequalityOnly.short() {
            writeln!(w, "off-midpoint equalities: {}", self.special_total)?;
            for s in self.special_equalities.iter().take(TEXT_LIST_LIMIT) {
                writeln!(w, "  (n={}, i={}) rhs {}", s.n, s.i, s.rhs)?;
            }
            if self.special_total as usize > self.special_equalities.len().min(TEXT_LIST_LIMIT) {
                writeln!(w, "  ...")?;
            }
        }
        writeln!(w, "result: {}", if self.passed { "PASS" } else { "FAIL" })?;
        writeln!(w, "elapsed: {:.3}s", self.elapsed_secs)?;
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "record,n,i,rhs,fn,kind")?;
        for v in &self.violations {
            writeln!(
                w,
                "violation,{},{},{},{},{}",
                v.n,
                v.i,
                v.rhs,
                v.fn_value,
                kind_str(v.kind)
            )?;
        }
        for s in &self.special_equalities {
            writeln!(w, "special_equality,{},{},{},{},", s.n, s.i, s.rhs, s.rhs)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- equality

#[derive(Debug, Serialize)]
pub struct EqualityReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub n: u64,
    #[serde(rename = "fn")]
    pub fn_value: u64,
    pub midpoints: Vec<u64>,
    pub equality_set: Vec<u64>,
    pub width: u64,
    pub special: bool,
}

impl EqualityReport {
    pub fn new(
        r: &HalfSplitRecurrence,
        n: u64,
        fn_value: u64,
        midpoints: Vec<u64>,
        equality_set: Vec<u64>,
    ) -> Self {
        let width = equality_set.len() as u64;
        let special = equality_set.len() > midpoints.len();
        EqualityReport {
            schema_version: SCHEMA_VERSION,
            command: "equality",
            recurrence: r.into(),
            n,
            fn_value,
            midpoints,
            equality_set,
            width,
            special,
        }
    }
}

impl Report for EqualityReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.recurrence.headline())?;
        writeln!(w, "{}({}) = {}", self.recurrence.name, self.n, self.fn_value)?;
        writeln!(w, "midpoints: {}", fmt_set(&self.midpoints))?;
        writeln!(
            w,
            "equality set: {} (width {})",
            fmt_set(&self.equality_set),
            self.width
        )?;
        writeln!(w, "special: {}", if self.special { "yes" } else { "no" })?;
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "n,i,rhs,is_midpoint")?;
        for &i in &self.equality_set {
            writeln!(
                w,
                "{},{},{},{}",
                self.n,
                i,
                self.fn_value,
                self.midpoints.contains(&i)
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- census

#[derive(Debug, Serialize)]
pub struct ColumnRow {
    pub column: usize,
    pub k: u64,
    pub j: u64,
    pub relation: &'static str,
    pub unlucky: bool,
    pub degenerate: bool,
    pub special: bool,
}

#[derive(Debug, Serialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub n: u64,
    pub i: u64,
    pub parity: &'static str,
    pub columns: Vec<ColumnRow>,
    pub tight: usize,
    pub strict: usize,
    pub unlucky: usize,
    pub degenerate: usize,
    pub special: usize,
}

impl CensusReport {
    pub fn new(r: &HalfSplitRecurrence, census: &ColumnCensus) -> Self {
        let columns = census
            .columns
            .iter()
            .enumerate()
            .map(|(idx, c)| ColumnRow {
                column: idx + 1,
                k: c.k,
                j: c.j,
                relation: match c.relation {
                    crate::decomposition::Relation::Strict => "strict",
                    crate::decomposition::Relation::Tight => "tight",
                },
                unlucky: c.unlucky,
                degenerate: c.degenerate,
                special: c.special,
            })
            .collect();
        CensusReport {
            schema_version: SCHEMA_VERSION,
            command: "census",
            recurrence: r.into(),
            n: census.n,
            i: census.i,
            parity: census.parity.label(),
            columns,
            tight: census.tight_count(),
            strict: census.strict_count(),
            unlucky: census.unlucky_count(),
            degenerate: census.degenerate_count(),
            special: census.special_count(),
        }
    }
}

impl Report for CensusReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "census {} at (n={}, i={}), parity {}",
            self.recurrence.headline(),
            self.n,
            self.i,
            self.parity
        )?;
        for c in &self.columns {
            let mut flags = String::new();
            if c.unlucky {
                flags.push_str(" unlucky");
            }
            if c.degenerate {
                flags.push_str(" degenerate");
            }
            if c.special {
                flags.push_str(" special");
            }
            writeln!(
                w,
                "column {}: (k={}, j={}) {}{}",
                c.column, c.k, c.j, c.relation, flags
            )?;
        }
        writeln!(
            w,
            "tight {}, strict {}, unlucky {}, degenerate {}, special {}",
            self.tight, self.strict, self.unlucky, self.degenerate, self.special
        )?;
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "column,k,j,relation,unlucky,degenerate,special")?;
        for c in &self.columns {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                c.column, c.k, c.j, c.relation, c.unlucky, c.degenerate, c.special
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- special

#[derive(Debug, Serialize)]
pub struct GroupRow {
    pub index: u32,
    pub first: u64,
    pub last: u64,
    pub size: u64,
}

impl From<&SpecialGroup> for GroupRow {
    fn from(g: &SpecialGroup) -> Self {
        GroupRow {
            index: g.index,
            first: g.first,
            last: g.last,
            size: g.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpecialReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub n_max: u64,
    pub count: u64,
    pub specials: Vec<u64>,
    pub groups: Vec<GroupRow>,
}

impl SpecialReport {
    pub fn new(
        r: &HalfSplitRecurrence,
        n_max: u64,
        specials: Vec<u64>,
        groups: &[SpecialGroup],
    ) -> Self {
        SpecialReport {
            schema_version: SCHEMA_VERSION,
            command: "special",
            recurrence: r.into(),
            n_max,
            count: specials.len() as u64,
            specials,
            groups: groups.iter().map(GroupRow::from).collect(),
        }
    }
}

impl Report for SpecialReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "special numbers of {} up to {}: {}",
            self.recurrence.headline(),
            self.n_max,
            self.count
        )?;
        if !self.specials.is_empty() {
            writeln!(w, "{}", fmt_set(&self.specials))?;
        }
        for g in &self.groups {
            writeln!(
                w,
                "group {}: [{}, {}] ({} member{})",
                g.index,
                g.first,
                g.last,
                g.size,
                if g.size == 1 { "" } else { "s" }
            )?;
        }
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "n,group")?;
        let mut cursor = self.groups.iter();
        let mut current = cursor.next();
        for &n in &self.specials {
            while let Some(g) = current {
                if n > g.last {
                    current = cursor.next();
                } else {
                    break;
                }
            }
            let idx = current.map(|g| g.index).unwrap_or(0);
            writeln!(w, "{n},{idx}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- groups

#[derive(Debug, Serialize)]
pub struct GroupDetail {
    pub index: u32,
    pub first: u64,
    pub last: u64,
    pub size: u64,
    /// Deviation from the boundary rule relative to the previous group;
    /// absent for the first group.
    pub first_residual: Option<i64>,
    pub last_residual: Option<i64>,
    pub widths: Vec<u64>,
    pub widths_unimodal: bool,
    pub members: Vec<SpreadProfile>,
}

#[derive(Debug, Serialize)]
pub struct PredictedGroup {
    pub first: u64,
    pub last: u64,
    /// Always false: the prediction extrapolates past the swept range.
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct GroupsReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub n_max: u64,
    pub groups: Vec<GroupDetail>,
    /// None when fewer than two groups exist to compare.
    pub boundary_rule_holds: Option<bool>,
    pub predicted_next: Option<PredictedGroup>,
}

impl Report for GroupsReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "special groups of {} up to {}",
            self.recurrence.headline(),
            self.n_max
        )?;
        if self.groups.is_empty() {
            writeln!(w, "none found")?;
        }
        for g in &self.groups {
            writeln!(
                w,
                "group {}: [{}, {}] ({} member{})",
                g.index,
                g.first,
                g.last,
                g.size,
                if g.size == 1 { "" } else { "s" }
            )?;
            let widths: Vec<String> = g.widths.iter().map(|x| x.to_string()).collect();
            writeln!(w, "  widths: {}", widths.join(", "))?;
            if let (Some(fr), Some(lr)) = (g.first_residual, g.last_residual) {
                writeln!(w, "  boundary rule residuals: first {fr:+}, last {lr:+}")?;
            }
            if !g.widths_unimodal {
                writeln!(w, "  warning: widths are not unimodal")?;
            }
        }
        if let Some(holds) = self.boundary_rule_holds {
            writeln!(
                w,
                "boundary rule (first' = 2*first - 1, last' = 2*last + 1): {}",
                if holds { "holds" } else { "VIOLATED" }
            )?;
        }
        if let Some(p) = &self.predicted_next {
            writeln!(
                w,
                "predicted next group: [{}, {}] (unverified beyond n = {})",
                p.first, p.last, self.n_max
            )?;
        }
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "group,n,width,min_offset,max_offset")?;
        for g in &self.groups {
            for m in &g.members {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    g.index,
                    m.n,
                    m.width,
                    m.offsets.first().copied().unwrap_or(0),
                    m.offsets.last().copied().unwrap_or(0)
                )?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- parents

#[derive(Debug, Serialize)]
pub struct ParentRow {
    pub n: u64,
    pub children: [u64; 4],
}

#[derive(Debug, Serialize)]
pub struct ParentsReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub k: u64,
    pub lo: u64,
    pub hi: u64,
    pub parents: Vec<ParentRow>,
}

impl Report for ParentsReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "decompositions containing {} for n in [{}, {}]:",
            self.k, self.lo, self.hi
        )?;
        for p in &self.parents {
            let [a, b, c, d] = p.children;
            writeln!(w, "n={}: ({a}, {b}, {c}, {d})", p.n)?;
        }
        if self.parents.is_empty() {
            writeln!(w, "none")?;
        }
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "n,child1,child2,child3,child4")?;
        for p in &self.parents {
            let [a, b, c, d] = p.children;
            writeln!(w, "{},{a},{b},{c},{d}", p.n)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- cache

#[derive(Debug, Serialize)]
pub struct CacheReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub recurrence: RecurrenceInfo,
    pub path: String,
    pub max_index: u64,
    pub entries: u64,
}

impl CacheReport {
    pub fn saved(r: &HalfSplitRecurrence, path: String, max_index: u64) -> Self {
        CacheReport {
            schema_version: SCHEMA_VERSION,
            command: "cache-save",
            recurrence: r.into(),
            path,
            max_index,
            entries: max_index + 1,
        }
    }

    pub fn checked(r: &HalfSplitRecurrence, path: String, max_index: u64) -> Self {
        CacheReport {
            schema_version: SCHEMA_VERSION,
            command: "cache-check",
            recurrence: r.into(),
            path,
            max_index,
            entries: max_index + 1,
        }
    }
}

impl Report for CacheReport {
    fn write_text(&self, w: &mut dyn Write) -> io::Result<()> {
        let verb = if self.command == "cache-save" {
            "saved"
        } else {
            "valid"
        };
        writeln!(
            w,
            "cache {}: {} for {} covering n = 0..={}",
            verb,
            self.path,
            self.recurrence.headline(),
            self.max_index
        )?;
        Ok(())
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "path,name,base0,base1,base2,addend,max_index")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            self.path,
            self.recurrence.name,
            self.recurrence.base0,
            self.recurrence.base1,
            self.recurrence.base2,
            self.recurrence.addend,
            self.max_index
        )?;
        Ok(())
    }
}
