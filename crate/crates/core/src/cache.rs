//! Plain-text persistence for memo tables.
//!
//! Format: one header line, then one `n,value` line per index, dense and
//! ascending from 0, ASCII with LF endings:
//!
//! ```text
//! halfsplit-cache v1 <name> <base0> <base1> <base2> <addend>
//! 0,<F(0)>
//! 1,<F(1)>
//! ...
//! ```
//!
//! Loading revalidates every entry against the recurrence declared in the
//! header; any mismatch, gap, or malformed line is a hard error. A cache is
//! trusted only because it re-proves itself on the way in.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::recurrence::{HalfSplitRecurrence, MemoTable};

pub const FORMAT_TAG: &str = "halfsplit-cache";
pub const FORMAT_VERSION: &str = "v1";

/// Serialize a table. The writer sees exactly the on-disk byte format.
pub fn write_to<W: Write>(memo: &MemoTable, w: &mut W) -> Result<()> {
    let r = memo.recurrence();
    let (b0, b1, b2) = r.bases();
    writeln!(
        w,
        "{FORMAT_TAG} {FORMAT_VERSION} {} {b0} {b1} {b2} {}",
        r.name(),
        r.addend()
    )?;
    for (n, v) in memo.values().iter().enumerate() {
        writeln!(w, "{n},{v}")?;
    }
    Ok(())
}

pub fn save(memo: &MemoTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_to(memo, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<HalfSplitRecurrence> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 7 || fields[0] != FORMAT_TAG {
        return Err(Error::Cache(format!("unrecognized header {line:?}")));
    }
    if fields[1] != FORMAT_VERSION {
        return Err(Error::Cache(format!(
            "unsupported format version {:?} (expected {FORMAT_VERSION})",
            fields[1]
        )));
    }
    let mut nums = [0u64; 4];
    for (slot, raw) in nums.iter_mut().zip(&fields[3..7]) {
        *slot = raw
            .parse()
            .map_err(|_| Error::Cache(format!("bad header number {raw:?}")))?;
    }
    HalfSplitRecurrence::new(fields[2], nums[0], nums[1], nums[2], nums[3])
        .map_err(|e| Error::Cache(format!("bad header name: {e}")))
}

/// Parse and revalidate a cache from any reader.
pub fn read_from<R: BufRead>(r: R) -> Result<MemoTable> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Cache("empty cache file".into()))??;
    let recurrence = parse_header(&header)?;
    let mut values = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let (n_str, v_str) = line
            .split_once(',')
            .ok_or_else(|| Error::Cache(format!("malformed line {:?}", line)))?;
        let n: u64 = n_str
            .parse()
            .map_err(|_| Error::Cache(format!("bad index {n_str:?}")))?;
        if n != idx as u64 {
            return Err(Error::Cache(format!(
                "index gap: expected n = {idx}, found {n}"
            )));
        }
        let v: u64 = v_str
            .parse()
            .map_err(|_| Error::Cache(format!("bad value {v_str:?}")))?;
        values.push(v);
    }
    MemoTable::from_values(recurrence, values)
}

/// Load and revalidate a cache file on its own terms (the header names the
/// recurrence).
pub fn load(path: &Path) -> Result<MemoTable> {
    read_from(BufReader::new(File::open(path)?))
}

/// Load a cache for a specific recurrence. The stored parameters must equal
/// the requested ones; the display name is a label and may differ. The
/// returned table carries the requested recurrence.
pub fn load_for(recurrence: &HalfSplitRecurrence, path: &Path) -> Result<MemoTable> {
    let loaded = load(path)?;
    if !loaded.recurrence().same_parameters(recurrence) {
        let (b0, b1, b2) = loaded.recurrence().bases();
        let (e0, e1, e2) = recurrence.bases();
        return Err(Error::Cache(format!(
            "cache holds ({b0}, {b1}, {b2}, {}), requested ({e0}, {e1}, {e2}, {})",
            loaded.recurrence().addend(),
            recurrence.addend()
        )));
    }
    MemoTable::from_values(recurrence.clone(), loaded.values().to_vec())
}
