//! Regular rasters and the ESRI ASCII grid interchange format.
//!
//! Values are stored bottom row first so that `get(col, row)` grows with the
//! world `y` axis. The text format lists the top row first; the parser and
//! serializer flip rows accordingly.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridParseError {
    #[error("line {line}: missing header key `{key}`")]
    MissingHeader { line: usize, key: &'static str },
    #[error("line {line}: duplicate header key `{key}`")]
    DuplicateHeader { line: usize, key: String },
    #[error("line {line}, column {column}: non-numeric token `{token}`")]
    NonNumeric {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}: nonpositive cellsize {value}")]
    NonpositiveCellSize { line: usize, value: f64 },
    #[error("line {line}: {key} must be a positive integer, got `{token}`")]
    BadDimension {
        line: usize,
        key: &'static str,
        token: String,
    },
    #[error("line {line}: value count mismatch, expected {expected} values but found {found}")]
    ValueCount {
        line: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {ncols}x{nrows}")]
    EmptyDimensions { ncols: usize, nrows: usize },
    #[error("cell size must be positive, got {0}")]
    NonpositiveCellSize(f64),
    #[error("expected {expected} values for the grid, got {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("built-up score {value} at cell ({col}, {row}) outside 0..=100")]
    ScoreOutOfRange { col: usize, row: usize, value: f64 },
}

/// A regular grid of real samples with an optional nodata sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    ncols: usize,
    nrows: usize,
    cell_size: f64,
    origin_x: f64,
    origin_y: f64,
    nodata: Option<f64>,
    values: Vec<f64>,
}

impl RasterGrid {
    /// Builds a grid from bottom-row-first values.
    pub fn new(
        ncols: usize,
        nrows: usize,
        cell_size: f64,
        origin: (f64, f64),
        nodata: Option<f64>,
        values: Vec<f64>,
    ) -> Result<Self, GridError> {
        if ncols == 0 || nrows == 0 {
            return Err(GridError::EmptyDimensions { ncols, nrows });
        }
        if !(cell_size > 0.0) || !cell_size.is_finite() {
            return Err(GridError::NonpositiveCellSize(cell_size));
        }
        if values.len() != ncols * nrows {
            return Err(GridError::ValueCount {
                expected: ncols * nrows,
                found: values.len(),
            });
        }
        Ok(Self {
            ncols,
            nrows,
            cell_size,
            origin_x: origin.0,
            origin_y: origin.1,
            nodata,
            values,
        })
    }

    /// Builds a grid whose value at each cell is `f(center_x, center_y)`.
    pub fn from_fn(
        ncols: usize,
        nrows: usize,
        cell_size: f64,
        origin: (f64, f64),
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self, GridError> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            for col in 0..ncols {
                let x = origin.0 + (col as f64 + 0.5) * cell_size;
                let y = origin.1 + (row as f64 + 0.5) * cell_size;
                values.push(f(x, y));
            }
        }
        Self::new(ncols, nrows, cell_size, origin, None, values)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Lower-left corner of the grid in world coordinates.
    pub fn origin(&self) -> (f64, f64) {
        (self.origin_x, self.origin_y)
    }

    pub fn nodata(&self) -> Option<f64> {
        self.nodata
    }

    /// Row-major values, bottom row first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Raw stored value, including the nodata sentinel.
    pub fn raw(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    /// Value at a cell, `None` when the cell holds the nodata sentinel.
    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        let v = self.raw(col, row);
        match self.nodata {
            Some(nd) if v == nd => None,
            _ if v.is_nan() => None,
            _ => Some(v),
        }
    }

    pub fn is_nodata(&self, col: usize, row: usize) -> bool {
        self.get(col, row).is_none()
    }

    /// World coordinates of a cell center.
    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            self.origin_x + (col as f64 + 0.5) * self.cell_size,
            self.origin_y + (row as f64 + 0.5) * self.cell_size,
        )
    }

    /// World extent as `(min_x, min_y, max_x, max_y)`.
    pub fn extent(&self) -> (f64, f64, f64, f64) {
        (
            self.origin_x,
            self.origin_y,
            self.origin_x + self.ncols as f64 * self.cell_size,
            self.origin_y + self.nrows as f64 * self.cell_size,
        )
    }

    /// Minimum and maximum over valid cells, `None` when every cell is nodata.
    pub fn value_range(&self) -> Option<(f64, f64)> {
        let mut range: Option<(f64, f64)> = None;
        for row in 0..self.nrows {
            for col in 0..self.ncols {
                if let Some(v) = self.get(col, row) {
                    range = Some(match range {
                        None => (v, v),
                        Some((lo, hi)) => (lo.min(v), hi.max(v)),
                    });
                }
            }
        }
        range
    }

    /// Checks the 0–100 built-up score invariant on every valid cell.
    pub fn validate_scores(&self) -> Result<(), GridError> {
        for row in 0..self.nrows {
            for col in 0..self.ncols {
                if let Some(v) = self.get(col, row) {
                    if !(0.0..=100.0).contains(&v) {
                        return Err(GridError::ScoreOutOfRange { col, row, value: v });
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes to ESRI ASCII grid text, top row first.
    ///
    /// Floats are written with Rust's shortest round-trip formatting so that
    /// parsing the output reproduces the grid exactly.
    pub fn to_ascii_grid(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ncols {}", self.ncols);
        let _ = writeln!(out, "nrows {}", self.nrows);
        let _ = writeln!(out, "xllcorner {:?}", self.origin_x);
        let _ = writeln!(out, "yllcorner {:?}", self.origin_y);
        let _ = writeln!(out, "cellsize {:?}", self.cell_size);
        if let Some(nd) = self.nodata {
            let _ = writeln!(out, "nodata_value {:?}", nd);
        }
        for row in (0..self.nrows).rev() {
            let line = self.values[row * self.ncols..(row + 1) * self.ncols]
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

const REQUIRED_KEYS: [&str; 5] = ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize"];

/// A header value with the position it was read from.
#[derive(Default)]
struct HeaderField {
    line: usize,
    column: usize,
    token: String,
}

/// Parses ESRI ASCII grid text. Header keys are case-insensitive.
pub fn parse_ascii_grid(text: &str) -> Result<RasterGrid, GridParseError> {
    let mut header: [Option<HeaderField>; 5] = Default::default();
    let mut nodata: Option<f64> = None;
    let mut lines = text.lines().enumerate().peekable();
    let mut last_header_line = 0;

    while let Some(&(idx, line)) = lines.peek() {
        let line_no = idx + 1;
        let tokens = tokenize(line);
        let Some(&(key_col, key_token)) = tokens.first() else {
            lines.next();
            continue;
        };
        if !key_token.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        let key = key_token.to_ascii_lowercase();
        let (column, token) = tokens
            .get(1)
            .map_or((line.len() + 1, ""), |&(c, t)| (c, t));
        last_header_line = line_no;
        if key == "nodata_value" {
            if nodata.is_some() {
                return Err(GridParseError::DuplicateHeader { line: line_no, key });
            }
            nodata = Some(parse_number(token, line_no, column)?);
        } else if let Some(slot) = REQUIRED_KEYS.iter().position(|k| *k == key) {
            if header[slot].is_some() {
                return Err(GridParseError::DuplicateHeader { line: line_no, key });
            }
            header[slot] = Some(HeaderField {
                line: line_no,
                column,
                token: token.to_string(),
            });
        } else {
            return Err(GridParseError::NonNumeric {
                line: line_no,
                column: key_col,
                token: key_token.to_string(),
            });
        }
        lines.next();
    }

    let mut fields: [HeaderField; 5] = Default::default();
    for (slot, key) in REQUIRED_KEYS.iter().enumerate() {
        fields[slot] = header[slot].take().ok_or(GridParseError::MissingHeader {
            line: last_header_line + 1,
            key,
        })?;
    }
    let dim = |slot: usize| -> Result<usize, GridParseError> {
        let f = &fields[slot];
        f.token
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| GridParseError::BadDimension {
                line: f.line,
                key: REQUIRED_KEYS[slot],
                token: f.token.clone(),
            })
    };
    let ncols = dim(0)?;
    let nrows = dim(1)?;
    let num = |slot: usize| {
        let f = &fields[slot];
        parse_number(&f.token, f.line, f.column)
    };
    let xll = num(2)?;
    let yll = num(3)?;
    let cell_size = num(4)?;
    if !(cell_size > 0.0) || !cell_size.is_finite() {
        return Err(GridParseError::NonpositiveCellSize {
            line: fields[4].line,
            value: cell_size,
        });
    }

    let expected = ncols * nrows;
    let mut top_first = Vec::with_capacity(expected);
    let mut last_line = last_header_line;
    for (idx, line) in lines {
        for (column, token) in tokenize(line) {
            top_first.push(parse_number(token, idx + 1, column)?);
            last_line = idx + 1;
        }
    }
    if top_first.len() != expected {
        return Err(GridParseError::ValueCount {
            line: last_line,
            expected,
            found: top_first.len(),
        });
    }

    let mut values = Vec::with_capacity(expected);
    for row in (0..nrows).rev() {
        values.extend_from_slice(&top_first[row * ncols..(row + 1) * ncols]);
    }
    Ok(RasterGrid {
        ncols,
        nrows,
        cell_size,
        origin_x: xll,
        origin_y: yll,
        nodata,
        values,
    })
}

/// Whitespace-separated tokens with their 1-based byte column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_number(token: &str, line: usize, column: usize) -> Result<f64, GridParseError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .ok_or_else(|| GridParseError::NonNumeric {
            line,
            column,
            token: token.to_string(),
        })
}
