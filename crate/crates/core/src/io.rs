//! Plain-text pattern and tiling files.
//!
//! ```text
//! trifold-pattern 1
//! sequence (+)*
//! region triangle 4 4 4
//! 1 -2 1 red
//! 1 -2 2 blue *
//! ```
//!
//! Records are `d p q color`, sorted by `(d, p, q)`. A trailing `*` marks a
//! boundary segment, whose colour may be `-`. Tiling files use records
//! `orient p q red_count [slot]` with `orient` one of `P`, `N`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{Orientation, SegmentId, TriangleId};
use crate::patch::{Color, PatternPatch, Region};
use crate::tiling::DecoratedTile;

pub const PATTERN_MAGIC: &str = "trifold-pattern";
pub const TILING_MAGIC: &str = "trifold-tiling";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFile {
    pub sequence: Option<String>,
    pub patch: PatternPatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingFile {
    pub sequence: Option<String>,
    /// Tiles sorted by triangle; `decoration` is `None` in undecorated files.
    pub tiles: Vec<DecoratedTile>,
}

fn color_token(c: Option<Color>) -> &'static str {
    match c {
        Some(Color::Red) => "red",
        Some(Color::Blue) => "blue",
        None => "-",
    }
}

fn write_header(out: &mut String, magic: &str, sequence: Option<&str>) {
    let _ = writeln!(out, "{magic} {FORMAT_VERSION}");
    let _ = writeln!(out, "sequence {}", sequence.unwrap_or("-"));
}

pub fn write_pattern(file: &PatternFile) -> String {
    let mut out = String::new();
    write_header(&mut out, PATTERN_MAGIC, file.sequence.as_deref());
    let _ = writeln!(out, "region {}", file.patch.region());
    let mut records: Vec<(SegmentId, Option<Color>, bool)> = file
        .patch
        .interior()
        .iter()
        .map(|(s, c)| (*s, Some(*c), false))
        .chain(file.patch.boundary().iter().map(|(s, c)| (*s, *c, true)))
        .collect();
    records.sort_by_key(|r| r.0);
    for (s, c, boundary) in records {
        let _ = write!(out, "{} {} {} {}", s.direction(), s.p, s.q, color_token(c));
        out.push_str(if boundary { " *\n" } else { "\n" });
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate() }
    }

    /// Next non-blank line that is not a `#` comment, with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
    }
}

fn read_header(lines: &mut Lines<'_>, magic: &str) -> Result<Option<String>, ParseError> {
    let Some((n, first)) = lines.next_content() else {
        return err(1, "empty file");
    };
    let mut parts = first.split_whitespace();
    if parts.next() != Some(magic) {
        return err(n, format!("expected '{magic}' header"));
    }
    match parts.next().map(str::parse::<u32>) {
        Some(Ok(FORMAT_VERSION)) => {}
        Some(Ok(v)) => return err(n, format!("unsupported version {v}")),
        _ => return err(n, "missing format version"),
    }
    let Some((n, seq)) = lines.next_content() else {
        return err(n + 1, "missing sequence line");
    };
    match seq.strip_prefix("sequence") {
        Some(rest) => {
            let rest = rest.trim();
            Ok((rest != "-" && !rest.is_empty()).then(|| rest.to_string()))
        }
        None => err(n, "expected 'sequence' line"),
    }
}

fn parse_int(line: usize, tok: Option<&str>, what: &str) -> Result<i64, ParseError> {
    match tok.map(str::parse::<i64>) {
        Some(Ok(x)) => Ok(x),
        Some(Err(_)) => err(line, format!("bad {what}")),
        None => err(line, format!("missing {what}")),
    }
}

fn parse_region(line: usize, text: &str) -> Result<Region, ParseError> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some("region") {
        return err(line, "expected 'region' line");
    }
    let region = match parts.next() {
        Some("triangle") => {
            let vals = [
                parse_int(line, parts.next(), "side value")?,
                parse_int(line, parts.next(), "side value")?,
                parse_int(line, parts.next(), "side value")?,
            ];
            match TriangleId::new(vals) {
                Some(t) => Region::Triangle(t),
                None => return err(line, "side values do not describe a grid triangle"),
            }
        }
        Some("ball") => {
            let r = parse_int(line, parts.next(), "radius")?;
            if r < 0 {
                return err(line, "negative radius");
            }
            Region::Ball { radius: r }
        }
        _ => return err(line, "unknown region kind"),
    };
    if parts.next().is_some() {
        return err(line, "trailing tokens after region");
    }
    Ok(region)
}

pub fn read_pattern(text: &str) -> Result<PatternFile, ParseError> {
    let mut lines = Lines::new(text);
    let sequence = read_header(&mut lines, PATTERN_MAGIC)?;
    let Some((rn, rline)) = lines.next_content() else {
        return err(3, "missing region line");
    };
    let region = parse_region(rn, rline)?;

    let mut interior = BTreeMap::new();
    let mut boundary = BTreeMap::new();
    let mut last: Option<SegmentId> = None;
    let mut last_line = rn;
    while let Some((n, l)) = lines.next_content() {
        last_line = n;
        let mut parts = l.split_whitespace();
        let d = parse_int(n, parts.next(), "direction")?;
        let p = parse_int(n, parts.next(), "p")?;
        let q = parse_int(n, parts.next(), "q")?;
        let seg = match u8::try_from(d).ok().and_then(|d| SegmentId::new(d, p, q).ok()) {
            Some(s) => s,
            None => return err(n, format!("invalid direction {d}")),
        };
        let color = match parts.next() {
            Some("red") => Some(Color::Red),
            Some("blue") => Some(Color::Blue),
            Some("-") => None,
            Some(t) => return err(n, format!("bad colour token '{t}'")),
            None => return err(n, "missing colour"),
        };
        let flagged = match parts.next() {
            None => false,
            Some("*") => true,
            Some(t) => return err(n, format!("unexpected token '{t}'")),
        };
        if parts.next().is_some() {
            return err(n, "trailing tokens");
        }
        if last.is_some_and(|prev| prev >= seg) {
            return err(n, "records not sorted by (d, p, q) or duplicated");
        }
        last = Some(seg);
        if flagged {
            boundary.insert(seg, color);
        } else {
            match color {
                Some(c) => {
                    interior.insert(seg, c);
                }
                None => return err(n, "interior segment without colour"),
            }
        }
    }
    let patch = PatternPatch::from_parts(region, interior, boundary)
        .or_else(|m| err(last_line, m))?;
    Ok(PatternFile { sequence, patch })
}

pub fn write_tiling(file: &TilingFile) -> String {
    let mut out = String::new();
    write_header(&mut out, TILING_MAGIC, file.sequence.as_deref());
    let mut tiles = file.tiles.clone();
    tiles.sort();
    for t in tiles {
        let (p, q, o) = t.tri.anchor();
        let o = if o == Orientation::Positive { 'P' } else { 'N' };
        let _ = write!(out, "{o} {p} {q} {}", t.red_count);
        if let Some(slot) = t.decoration {
            let _ = write!(out, " {slot}");
        }
        out.push('\n');
    }
    out
}

pub fn read_tiling(text: &str) -> Result<TilingFile, ParseError> {
    let mut lines = Lines::new(text);
    let sequence = read_header(&mut lines, TILING_MAGIC)?;
    let mut tiles = Vec::new();
    let mut last: Option<TriangleId> = None;
    while let Some((n, l)) = lines.next_content() {
        let mut parts = l.split_whitespace();
        let orientation = match parts.next() {
            Some("P") => Orientation::Positive,
            Some("N") => Orientation::Negative,
            _ => return err(n, "orientation must be P or N"),
        };
        let p = parse_int(n, parts.next(), "p")?;
        let q = parse_int(n, parts.next(), "q")?;
        let red_count = match parse_int(n, parts.next(), "red count")? {
            c @ 0..=3 => c as u8,
            c => return err(n, format!("red count {c} out of range")),
        };
        let decoration = match parts.next() {
            None => None,
            Some(tok) => match tok.parse::<u8>() {
                Ok(s @ 1..=3) if red_count == 1 || red_count == 2 => Some(s),
                Ok(_) => return err(n, "decoration needs a mixed tile and a slot in 1..=3"),
                Err(_) => return err(n, format!("bad decoration '{tok}'")),
            },
        };
        if parts.next().is_some() {
            return err(n, "trailing tokens");
        }
        let tri = TriangleId::unit(p, q, orientation);
        if last.is_some_and(|prev| prev >= tri) {
            return err(n, "records not sorted or duplicated");
        }
        last = Some(tri);
        tiles.push(DecoratedTile { tri, red_count, decoration });
    }
    Ok(TilingFile { sequence, tiles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::{parse_word, patch, FoldingSequence};

    #[test]
    fn single_fold_file() {
        let seq = FoldingSequence::Finite(parse_word("+").unwrap());
        let p = patch(&seq, 1).unwrap();
        let text = write_pattern(&PatternFile { sequence: Some(seq.to_string()), patch: p.clone() });
        let records: Vec<&str> = text.lines().skip(3).filter(|l| !l.ends_with('*')).collect();
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.ends_with(" red")));
        let back = read_pattern(&text).unwrap();
        assert_eq!(back.patch, p);
        assert_eq!(back.sequence.as_deref(), Some("+"));
        assert_eq!(write_pattern(&back), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "trifold-pattern 1\nsequence -\nregion triangle 1 1 1\n1 0 0 green *\n";
        assert_eq!(read_pattern(text).unwrap_err().line, 4);
        assert_eq!(read_pattern("nope").unwrap_err().line, 1);
        let bad_version = "trifold-pattern 7\nsequence -\n";
        assert!(read_pattern(bad_version).unwrap_err().message.contains("version"));
        let unsorted = "trifold-pattern 1\nsequence -\nregion triangle 1 1 1\n3 0 0 red *\n1 0 0 red *\n";
        assert_eq!(read_pattern(unsorted).unwrap_err().line, 5);
        let missing = "trifold-pattern 1\nsequence -\nregion triangle 1 1 1\n1 0 0 red *\n";
        assert!(read_pattern(missing).is_err());
    }

    #[test]
    fn tiling_round_trip() {
        let tiles = vec![
            DecoratedTile { tri: TriangleId::unit(0, 0, Orientation::Positive), red_count: 3, decoration: None },
            DecoratedTile { tri: TriangleId::unit(-1, 2, Orientation::Negative), red_count: 2, decoration: Some(1) },
            DecoratedTile { tri: TriangleId::unit(4, -3, Orientation::Negative), red_count: 1, decoration: None },
        ];
        let file = TilingFile { sequence: None, tiles };
        let text = write_tiling(&file);
        let back = read_tiling(&text).unwrap();
        let mut sorted = file.tiles.clone();
        sorted.sort();
        assert_eq!(back.tiles, sorted);
        assert_eq!(write_tiling(&back), text);
        let bad = "trifold-tiling 1\nsequence -\nP 0 0 3 2\n";
        assert_eq!(read_tiling(bad).unwrap_err().line, 3);
    }
}
