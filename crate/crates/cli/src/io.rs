//! CSV ingestion and emission for block designs.
//!
//! Two layouts are supported:
//! - wide: header row of group labels, first column block labels, one
//!   numeric cell per (block, group);
//! - long: header `block,group,value`, one row per cell.
//!
//! Cells are plain UTF-8, comma-separated, `.` decimal point, no quoting.

use splot_core::BlockDesign;
use std::fmt::Write as _;

/// Input/output table layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Wide,
    Long,
}

/// A parse failure with enough location to fix the file.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn err(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

/// Parses CSV text into a validated design.
pub fn parse_table(text: &str, format: TableFormat) -> Result<BlockDesign, ParseError> {
    match format {
        TableFormat::Wide => parse_wide(text),
        TableFormat::Long => parse_long(text),
    }
}

fn rows(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| (i + 1, line.split(',').map(str::trim).collect()))
        .collect()
}

fn parse_cell(cell: &str, line: usize, column: usize) -> Result<f64, ParseError> {
    cell.parse::<f64>().map_err(|_| {
        err(format!("line {line}, column {column}: expected a number, found {cell:?}"))
    })
}

fn parse_wide(text: &str) -> Result<BlockDesign, ParseError> {
    let rows = rows(text);
    let Some(((_, header), body)) = rows.split_first() else {
        return Err(err("empty input: expected a header row of group labels"));
    };
    if header.len() < 3 {
        return Err(err(format!(
            "line 1: wide format needs a block column plus at least two groups, found {} columns",
            header.len()
        )));
    }
    let group_labels: Vec<String> = header[1..].iter().map(|s| s.to_string()).collect();
    if body.is_empty() {
        return Err(err("no data rows after the header"));
    }
    let mut block_labels = Vec::with_capacity(body.len());
    let mut values = Vec::with_capacity(body.len());
    for (line, cells) in body {
        if cells.len() != header.len() {
            return Err(err(format!(
                "line {line}: expected {} cells, found {}",
                header.len(),
                cells.len()
            )));
        }
        block_labels.push(cells[0].to_string());
        let row: Result<Vec<f64>, ParseError> = cells[1..]
            .iter()
            .enumerate()
            .map(|(j, cell)| parse_cell(cell, *line, j + 2))
            .collect();
        values.push(row?);
    }
    BlockDesign::new(values, block_labels, group_labels).map_err(|e| err(e.to_string()))
}

fn parse_long(text: &str) -> Result<BlockDesign, ParseError> {
    let rows = rows(text);
    let Some(((_, header), body)) = rows.split_first() else {
        return Err(err("empty input: expected the header `block,group,value`"));
    };
    let lowered: Vec<String> = header.iter().map(|s| s.to_ascii_lowercase()).collect();
    if lowered != ["block", "group", "value"] {
        return Err(err(format!(
            "line 1: long format needs the header `block,group,value`, found {:?}",
            header.join(",")
        )));
    }
    // First-appearance order of labels is preserved.
    let mut block_labels: Vec<String> = Vec::new();
    let mut group_labels: Vec<String> = Vec::new();
    let mut cells: Vec<(usize, usize, f64, usize)> = Vec::new();
    for (line, fields) in body {
        if fields.len() != 3 {
            return Err(err(format!("line {line}: expected 3 cells, found {}", fields.len())));
        }
        let b = index_of(&mut block_labels, fields[0]);
        let g = index_of(&mut group_labels, fields[1]);
        let v = parse_cell(fields[2], *line, 3)?;
        if let Some((_, _, _, first)) = cells.iter().find(|(cb, cg, _, _)| *cb == b && *cg == g) {
            return Err(err(format!(
                "line {line}: duplicate cell for block {:?}, group {:?} (first seen on line {first})",
                fields[0], fields[1]
            )));
        }
        cells.push((b, g, v, *line));
    }
    let (nb, ng) = (block_labels.len(), group_labels.len());
    let mut values = vec![vec![f64::NAN; ng]; nb];
    for (b, g, v, _) in &cells {
        values[*b][*g] = *v;
    }
    let mut missing = Vec::new();
    for (b, row) in values.iter().enumerate() {
        for (g, v) in row.iter().enumerate() {
            if v.is_nan() {
                missing.push(format!("({}, {})", block_labels[b], group_labels[g]));
            }
        }
    }
    if !missing.is_empty() {
        return Err(err(format!(
            "incomplete design: missing (block, group) cells: {}",
            missing.join(", ")
        )));
    }
    BlockDesign::new(values, block_labels, group_labels).map_err(|e| err(e.to_string()))
}

fn index_of(labels: &mut Vec<String>, label: &str) -> usize {
    if let Some(i) = labels.iter().position(|l| l == label) {
        i
    } else {
        labels.push(label.to_string());
        labels.len() - 1
    }
}

/// Emits a design as CSV; `parse_table(emit_table(d, f), f)` round-trips.
#[cfg_attr(not(test), allow(dead_code))]
pub fn emit_table(design: &BlockDesign, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Wide => {
            write!(out, "block").unwrap();
            for g in design.group_labels() {
                write!(out, ",{g}").unwrap();
            }
            out.push('\n');
            for (label, row) in design.block_labels().iter().zip(design.values()) {
                write!(out, "{label}").unwrap();
                for v in row {
                    write!(out, ",{v}").unwrap();
                }
                out.push('\n');
            }
        }
        TableFormat::Long => {
            out.push_str("block,group,value\n");
            for (label, row) in design.block_labels().iter().zip(design.values()) {
                for (g, v) in design.group_labels().iter().zip(row) {
                    writeln!(out, "{label},{g},{v}").unwrap();
                }
            }
        }
    }
    out
}
