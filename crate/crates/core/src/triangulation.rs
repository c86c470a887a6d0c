//! Gluing tables and their tape encoding.
//!
//! A table has one row per triangle and three columns, the oriented edges
//! `(12)`, `(23)`, `(31)` of that triangle. On the tape each row is written as
//! `#` followed by three entries; an entry is `-` (unglued) or a binary
//! triangle index followed by one of the six oriented edge labels:
//!
//! ```text
//! # 10 (13) 11 (12) 11 (32) # 11 (13) - 1 (21) # 1 (23) 1 (13) 10 (21)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the six oriented edges of a triangle with corners 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    E12,
    E21,
    E23,
    E32,
    E31,
    E13,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 6] =
        [EdgeLabel::E12, EdgeLabel::E21, EdgeLabel::E23, EdgeLabel::E32, EdgeLabel::E31, EdgeLabel::E13];

    pub fn reverse(self) -> Self {
        use EdgeLabel::*;
        match self {
            E12 => E21,
            E21 => E12,
            E23 => E32,
            E32 => E23,
            E31 => E13,
            E13 => E31,
        }
    }

    /// True for the labels that agree with the triangle's orientation,
    /// i.e. the column labels (12), (23), (31).
    pub fn is_forward(self) -> bool {
        matches!(self, EdgeLabel::E12 | EdgeLabel::E23 | EdgeLabel::E31)
    }

    /// `(i, j)` for the label `(ij)`.
    pub fn corners(self) -> (u8, u8) {
        use EdgeLabel::*;
        match self {
            E12 => (1, 2),
            E21 => (2, 1),
            E23 => (2, 3),
            E32 => (3, 2),
            E31 => (3, 1),
            E13 => (1, 3),
        }
    }

    /// The column this edge lives in, ignoring direction.
    pub fn column(self) -> Column {
        use EdgeLabel::*;
        match self {
            E12 | E21 => Column::C12,
            E23 | E32 => Column::C23,
            E31 | E13 => Column::C31,
        }
    }

    pub fn as_str(self) -> &'static str {
        use EdgeLabel::*;
        match self {
            E12 => "(12)",
            E21 => "(21)",
            E23 => "(23)",
            E32 => "(32)",
            E31 => "(31)",
            E13 => "(13)",
        }
    }

    fn from_token(tok: &str) -> Option<Self> {
        EdgeLabel::ALL.into_iter().find(|l| l.as_str() == tok)
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.corners();
        write!(f, "{i}{j}")
    }
}

/// A column of the gluing table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    C12,
    C23,
    C31,
}

impl Column {
    pub const ALL: [Column; 3] = [Column::C12, Column::C23, Column::C31];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> EdgeLabel {
        match self {
            Column::C12 => EdgeLabel::E12,
            Column::C23 => EdgeLabel::E23,
            Column::C31 => EdgeLabel::E31,
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.label().fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GluingEntry {
    Boundary,
    Glued { target: usize, label: EdgeLabel },
}

impl GluingEntry {
    pub fn glued(target: usize, label: EdgeLabel) -> Self {
        GluingEntry::Glued { target, label }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, GluingEntry::Boundary)
    }

    pub fn target(&self) -> Option<usize> {
        match *self {
            GluingEntry::Glued { target, .. } => Some(target),
            GluingEntry::Boundary => None,
        }
    }
}

impl fmt::Display for GluingEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingEntry::Boundary => f.write_str("-"),
            GluingEntry::Glued { target, label } => write!(f, "{target:b} {}", label.as_str()),
        }
    }
}

/// A well-formed gluing table: every glued target is in `1..=n`.
///
/// Triangles are 1-indexed throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Triangulation {
    rows: Vec<[GluingEntry; 3]>,
}

impl Triangulation {
    pub fn new(rows: Vec<[GluingEntry; 3]>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            for entry in row {
                if let Some(t) = entry.target() {
                    if t == 0 || t > n {
                        return Err(Error::IndexOutOfRange { t, n });
                    }
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn triangle_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[GluingEntry; 3]] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> Result<&[GluingEntry; 3]> {
        let n = self.rows.len();
        if t == 0 || t > n {
            return Err(Error::IndexOutOfRange { t, n });
        }
        Ok(&self.rows[t - 1])
    }

    pub fn entry(&self, t: usize, col: Column) -> Result<GluingEntry> {
        Ok(self.row(t)?[col.index()])
    }

    /// Number of unglued triangle edges (`-` symbols on the tape).
    pub fn boundary_edge_count(&self) -> usize {
        self.rows.iter().flatten().filter(|e| e.is_boundary()).count()
    }

    /// Length of the tape encoding in alphabet symbols: one per `#`, `-`,
    /// binary digit and edge label.
    pub fn tape_symbols(&self) -> u64 {
        let mut total = 0u64;
        for row in &self.rows {
            total += 1;
            for entry in row {
                total += match entry {
                    GluingEntry::Boundary => 1,
                    GluingEntry::Glued { target, .. } => u64::from(usize::BITS - target.leading_zeros()) + 1,
                };
            }
        }
        total
    }

    /// Parses the tape encoding.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let n = tokens.iter().filter(|t| **t == "#").count();
        let mut rows = Vec::with_capacity(n);
        let mut pos = 0;
        while pos < tokens.len() {
            if tokens[pos] != "#" {
                return Err(Error::Syntax {
                    token: pos,
                    message: format!("expected '#', found {:?}", tokens[pos]),
                });
            }
            pos += 1;
            let mut row = [GluingEntry::Boundary; 3];
            for slot in &mut row {
                *slot = parse_entry(&tokens, &mut pos, n)?;
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    /// Canonical tape encoding: single spaces, minimal binary numerals.
    pub fn serialize(&self) -> String {
        let mut parts: Vec<String> = Vec::with_capacity(self.rows.len() * 4);
        for row in &self.rows {
            parts.push("#".to_owned());
            for entry in row {
                parts.push(match entry {
                    GluingEntry::Boundary => "-".to_owned(),
                    GluingEntry::Glued { target, label } => {
                        format!("{target:b} {}", label.as_str())
                    }
                });
            }
        }
        parts.join(" ")
    }
}

fn parse_entry(tokens: &[&str], pos: &mut usize, n: usize) -> Result<GluingEntry> {
    let Some(&tok) = tokens.get(*pos) else {
        return Err(Error::Syntax { token: *pos, message: "row ended before its third entry".to_owned() });
    };
    if tok == "-" {
        *pos += 1;
        return Ok(GluingEntry::Boundary);
    }
    let target = parse_numeral(tok, *pos, n)?;
    *pos += 1;
    let Some(&label_tok) = tokens.get(*pos) else {
        return Err(Error::Syntax {
            token: *pos,
            message: "numeral not followed by an edge label".to_owned(),
        });
    };
    let label = EdgeLabel::from_token(label_tok).ok_or_else(|| Error::Syntax {
        token: *pos,
        message: format!("expected edge label, found {label_tok:?}"),
    })?;
    *pos += 1;
    Ok(GluingEntry::Glued { target, label })
}

fn parse_numeral(tok: &str, pos: usize, n: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Syntax {
            token: pos,
            message: format!("expected '-' or a binary numeral, found {tok:?}"),
        });
    }
    if tok.starts_with('0') {
        return Err(Error::Range {
            token: pos,
            message: format!("numeral {tok:?} is zero or has a leading zero"),
        });
    }
    let value = u64::from_str_radix(tok, 2)
        .ok()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::Range { token: pos, message: format!("numeral {tok:?} overflows") })?;
    if value > n {
        return Err(Error::Range { token: pos, message: format!("triangle {value} exceeds n = {n}") });
    }
    Ok(value)
}

impl FromStr for Triangulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// The punctured Klein bottle used throughout the tests (3 triangles).
pub const KLEIN_TAPE: &str = "# 10 (13) 11 (12) 11 (32) # 11 (13) - 1 (21) # 1 (23) 1 (13) 10 (21)";
