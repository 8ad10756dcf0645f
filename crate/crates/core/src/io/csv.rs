//! 0/1 matrices as CSV, with an optional header row of attribute names and
//! an optional first column of object names.
//!
//! A header is assumed when the first row starts with an empty cell, has a
//! non-binary cell after its first, or is the only row starting with a
//! non-binary cell. A name column is assumed when the
//! header's first cell is empty, or when there is no header and no row
//! starts with a binary cell.

use crate::context::FormalContext;
use crate::error::{FcaError, Result};

fn binary(cell: &str) -> Option<bool> {
    match cell {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

pub fn parse_csv(text: &str) -> Result<FormalContext> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            FcaError::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<String> = record.iter().map(str::to_string).collect();
        records.push((line, cells));
    }
    if records.is_empty() {
        return Ok(FormalContext::from_fn(0, 0, |_, _| false));
    }

    let first = &records[0].1;
    let header_present = first[0].is_empty()
        || first[1..].iter().any(|c| binary(c).is_none())
        || (binary(&first[0]).is_none() && records[1..].iter().any(|(_, r)| binary(&r[0]).is_some()));
    let header = if header_present { Some(records.remove(0)) } else { None };
    let name_column = match &header {
        Some((_, h)) => h[0].is_empty(),
        None => !records.is_empty() && records.iter().all(|(_, r)| binary(&r[0]).is_none()),
    };
    let skip = usize::from(name_column);

    let width = match (&header, records.first()) {
        (Some((_, h)), _) => h.len(),
        (None, Some((_, r))) => r.len(),
        (None, None) => 0,
    };
    let n = width.saturating_sub(skip);
    let mut objects = Vec::with_capacity(records.len());
    let mut rows = Vec::with_capacity(records.len());
    for (g, (line, cells)) in records.iter().enumerate() {
        if cells.len() != width {
            return Err(FcaError::parse(*line, format!("row has {} cells, expected {width}", cells.len())));
        }
        objects.push(if name_column { cells[0].clone() } else { (g + 1).to_string() });
        let row = cells[skip..]
            .iter()
            .enumerate()
            .map(|(col, c)| {
                binary(c).ok_or_else(|| {
                    FcaError::parse(*line, format!("cell {c:?} in column {} is not 0 or 1", col + skip + 1))
                })
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(row);
    }
    let attributes = match &header {
        Some((_, h)) => h[skip..].to_vec(),
        None => (1..=n).map(|a| format!("a{a}")).collect(),
    };
    FormalContext::from_rows(n, &rows)?.with_names(objects, attributes)
}

/// Writes a header row and a name column so that names survive a round trip.
pub fn write_csv(ctx: &FormalContext) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header = std::iter::once("").chain(ctx.attribute_names().iter().map(String::as_str));
    writer.write_record(header).expect("writing to memory");
    for g in 0..ctx.object_count() {
        let cells = (0..ctx.attribute_count()).map(|a| if ctx.has(g, a) { "1" } else { "0" });
        let record = std::iter::once(ctx.object_names()[g].as_str()).chain(cells);
        writer.write_record(record).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}
