//! FIMI transaction lists: one object per line, each line the
//! whitespace-separated ids of the attributes the object has.

use crate::context::FormalContext;
use crate::error::{FcaError, Result};

/// Parses a transaction list. The attribute count is one past the largest id
/// seen, or `attribute_hint` when that is larger. Attributes are named by
/// their ids.
pub fn parse_fimi(text: &str, attribute_hint: Option<usize>) -> Result<FormalContext> {
    let mut objects = Vec::new();
    let mut n = attribute_hint.unwrap_or(0);
    for (i, line) in text.lines().enumerate() {
        let attrs = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| FcaError::parse(i + 1, format!("expected an attribute id, found {tok:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if let Some(&max) = attrs.iter().max() {
            n = n.max(max + 1);
        }
        objects.push(attrs);
    }
    let ctx = FormalContext::from_object_attributes(n, &objects)?;
    let objects = ctx.object_names().to_vec();
    ctx.with_names(objects, (0..n).map(|a| a.to_string()).collect())
}

pub fn write_fimi(ctx: &FormalContext) -> String {
    let mut out = String::new();
    for g in 0..ctx.object_count() {
        let line: Vec<String> = ctx.object_intent(g).iter().map(|a| a.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::table1;

    #[test]
    fn table1_as_transactions() {
        let ctx = parse_fimi("1 2\n0 1\n0\n4\n3 4\n2 3 4\n", None).unwrap();
        assert_eq!(ctx.object_count(), 6);
        assert_eq!(ctx.attribute_count(), 5);
        let reference = table1();
        assert!((0..6).all(|g| ctx.object_intent(g) == reference.object_intent(g)));
        assert_eq!(ctx.attribute_names()[0], "0");
        assert_eq!(write_fimi(&ctx), "1 2\n0 1\n0\n4\n3 4\n2 3 4\n");
    }

    #[test]
    fn empty_input_and_hint() {
        let ctx = parse_fimi("", None).unwrap();
        assert_eq!((ctx.object_count(), ctx.attribute_count()), (0, 0));
        let ctx = parse_fimi("", Some(7)).unwrap();
        assert_eq!((ctx.object_count(), ctx.attribute_count()), (0, 7));
        let ctx = parse_fimi("0 1\n", Some(4)).unwrap();
        assert_eq!(ctx.attribute_count(), 4);
    }

    #[test]
    fn duplicates_collapse() {
        let ctx = parse_fimi("2 2 2\n", None).unwrap();
        assert_eq!(ctx.object_count(), 1);
        assert_eq!(ctx.object_intent(0).as_slice(), &[2]);
        assert_eq!(ctx.incidence_count(), 1);
    }

    #[test]
    fn blank_lines_are_objects_without_attributes() {
        let ctx = parse_fimi("0\n\n1\n", None).unwrap();
        assert_eq!(ctx.object_count(), 3);
        assert!(ctx.object_intent(1).is_empty());
    }

    #[test]
    fn rejects_non_integers() {
        assert!(matches!(parse_fimi("1 2\n3 x\n", None), Err(FcaError::Parse { line: 2, .. })));
        assert!(matches!(parse_fimi("-1\n", None), Err(FcaError::Parse { line: 1, .. })));
    }
}
