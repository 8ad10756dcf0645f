//! Burmeister context files:
//!
//! ```text
//! B
//!
//! <objects>
//! <attributes>
//!
//! <object names, one per line>
//! <attribute names, one per line>
//! <one row per object of '.' and 'X'>
//! ```

use crate::context::FormalContext;
use crate::error::{FcaError, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.split('\n').enumerate(), last: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, line)) => {
                self.last = i + 1;
                Ok((i + 1, line.strip_suffix('\r').unwrap_or(line)))
            }
            None => Err(FcaError::parse(self.last + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (line, text) = self.next(what)?;
        text.trim().parse().map_err(|_| FcaError::parse(line, format!("expected {what}, found {text:?}")))
    }

    fn blank(&mut self) -> Result<()> {
        let (line, text) = self.next("a blank line")?;
        if text.trim().is_empty() {
            Ok(())
        } else {
            Err(FcaError::parse(line, format!("expected a blank line, found {text:?}")))
        }
    }
}

pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let mut lines = Lines::new(text.strip_prefix('\u{feff}').unwrap_or(text));
    let (line, header) = lines.next("the 'B' header")?;
    if header.trim() != "B" {
        return Err(FcaError::parse(line, format!("expected 'B', found {header:?}")));
    }
    lines.blank()?;
    let m = lines.count("the object count")?;
    let n = lines.count("the attribute count")?;
    lines.blank()?;
    let mut objects = Vec::with_capacity(m);
    for _ in 0..m {
        objects.push(lines.next("an object name")?.1.trim_end().to_string());
    }
    let mut attributes = Vec::with_capacity(n);
    for _ in 0..n {
        attributes.push(lines.next("an attribute name")?.1.trim_end().to_string());
    }
    let mut rows = Vec::with_capacity(m);
    for g in 0..m {
        let (line, row) = lines.next("an incidence row")?;
        let row = row.trim_end();
        if row.chars().count() != n {
            return Err(FcaError::parse(
                line,
                format!("row {} ({:?}) has {} cells, expected {n}", g + 1, objects[g], row.chars().count()),
            ));
        }
        let cells = row
            .chars()
            .enumerate()
            .map(|(col, ch)| match ch {
                'X' | 'x' => Ok(true),
                '.' => Ok(false),
                other => Err(FcaError::parse(line, format!("illegal character {other:?} in column {}", col + 1))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(cells);
    }
    while let Some((i, rest)) = lines.inner.next() {
        if !rest.trim().is_empty() {
            return Err(FcaError::parse(i + 1, "unexpected content after the last row"));
        }
    }
    FormalContext::from_rows(n, &rows)?.with_names(objects, attributes)
}

pub fn write_cxt(ctx: &FormalContext) -> String {
    let (m, n) = (ctx.object_count(), ctx.attribute_count());
    let mut out = String::with_capacity(16 + m * (n + 8) + n * 8);
    out.push_str(&format!("B\n\n{m}\n{n}\n\n"));
    for name in ctx.object_names().iter().chain(ctx.attribute_names()) {
        out.push_str(name);
        out.push('\n');
    }
    for g in 0..m {
        out.extend((0..n).map(|a| if ctx.has(g, a) { 'X' } else { '.' }));
        out.push('\n');
    }
    out
}
