//! `DSET v1`: a four-line plain-text run-length encoding of a grid set.
//!
//! ```text
//! DSET 1
//! n=<denominator>
//! offset=<first-cell-index>
//! runs=<start:len>,<start:len>,...
//! ```
//!
//! Run starts are relative to `offset`, strictly increasing and non-adjacent.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{GridScale, GridSet};

pub const MAGIC: &str = "DSET 1";

/// Canonical encoding: `offset` is the first occupied cell, so the first run starts at 0.
pub fn to_dset(set: &GridSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "n={}", set.scale().n());
    let _ = writeln!(out, "offset={}", set.offset());
    out.push_str("runs=");
    for (i, &(s, e)) in set.runs().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:{}", s - set.offset(), e - s);
    }
    out.push('\n');
    out
}

pub fn from_dset(text: &str) -> Result<GridSet> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let (line, magic) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if magic != MAGIC {
        return Err(parse_err(line, format!("expected `{MAGIC}`, found `{magic}`")));
    }

    let (line, n_text) = expect_field(lines.next(), 2, "n")?;
    let n: u64 = n_text
        .parse()
        .map_err(|_| parse_err(line, format!("bad denominator `{n_text}`")))?;
    let scale = GridScale::new(n).map_err(|e| parse_err(line, e.to_string()))?;

    let (line, off_text) = expect_field(lines.next(), 3, "offset")?;
    let offset: i64 = off_text
        .parse()
        .map_err(|_| parse_err(line, format!("bad offset `{off_text}`")))?;

    let (line, runs_text) = expect_field(lines.next(), 4, "runs")?;
    let mut ranges = Vec::new();
    let mut prev_end: Option<i64> = None;
    for item in runs_text.split(',').filter(|s| !s.is_empty()) {
        let (s, l) = item
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("run `{item}` is not start:len")))?;
        let start: i64 = s
            .parse()
            .map_err(|_| parse_err(line, format!("bad run start `{s}`")))?;
        let len: i64 = l
            .parse()
            .map_err(|_| parse_err(line, format!("bad run length `{l}`")))?;
        if start < 0 || len <= 0 {
            return Err(parse_err(line, format!("run `{item}` must have start >= 0 and len > 0")));
        }
        if let Some(pe) = prev_end {
            if start <= pe {
                return Err(parse_err(
                    line,
                    format!("run `{item}` overlaps or touches the previous run"),
                ));
            }
        }
        prev_end = Some(start + len);
        ranges.push((offset + start, offset + start + len));
    }
    if ranges.is_empty() {
        return Err(parse_err(line, "no runs: empty sets are not representable"));
    }
    for (extra_line, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(parse_err(extra_line, "unexpected trailing content"));
        }
    }
    GridSet::from_cell_ranges(scale, &ranges).map_err(|e| parse_err(line, e.to_string()))
}

fn expect_field<'a>(
    item: Option<(usize, &'a str)>,
    line: usize,
    key: &str,
) -> Result<(usize, &'a str)> {
    let (line, text) = item.ok_or_else(|| parse_err(line, format!("missing `{key}=` line")))?;
    let value = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=...`, found `{text}`")))?;
    Ok((line, value))
}

/// Serde adapter storing a [`GridSet`] as its DSET text.
pub mod serde_dset {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::grid::GridSet;

    pub fn serialize<S: Serializer>(set: &GridSet, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_dset(set))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<GridSet, D::Error> {
        let text = String::deserialize(d)?;
        super::from_dset(&text).map_err(serde::de::Error::custom)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
