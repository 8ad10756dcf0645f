//! One concept per line: `{object names} ; {attribute names}`.

use crate::context::{ConceptSet, FormalContext, IndexSet};

/// Quotes a name when it contains whitespace, quotes, backslashes or `;`,
/// or is empty.
pub fn quote_name(name: &str) -> String {
    let plain = !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '"' | '\\' | ';'));
    if plain {
        return name.to_string();
    }
    let mut out = String::with_capacity(name.len() + 2);
    out.push('"');
    for c in name.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn names(set: &IndexSet, names: &[String]) -> String {
    set.iter().map(|i| quote_name(&names[i])).collect::<Vec<_>>().join(" ")
}

/// Concepts in the set's canonical order, each line newline-terminated.
pub fn write_concepts_text(concepts: &ConceptSet, ctx: &FormalContext) -> String {
    let mut out = String::new();
    for c in concepts.iter() {
        let extent = names(&c.extent, ctx.object_names());
        let intent = names(&c.intent, ctx.attribute_names());
        if !extent.is_empty() {
            out.push_str(&extent);
            out.push(' ');
        }
        out.push(';');
        if !intent.is_empty() {
            out.push(' ');
            out.push_str(&intent);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::table1;
    use crate::oracle::brute_force_concepts;

    #[test]
    fn table1_lines() {
        let ctx = table1();
        let cs = brute_force_concepts(&ctx).unwrap();
        let text = write_concepts_text(&cs, &ctx);
        assert_eq!(text.lines().count(), 10);
        assert!(text.lines().any(|l| l == "5 6 ; a4 a5"));
        assert!(text.lines().any(|l| l == "; a1 a2 a3 a4 a5"));
        assert!(text.lines().any(|l| l == "1 2 3 4 5 6 ;"));
        assert_eq!(text, write_concepts_text(&cs, &ctx));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_name("a1"), "a1");
        assert_eq!(quote_name("cap shape"), "\"cap shape\"");
        assert_eq!(quote_name("say \"hi\""), "\"say \\\"hi\\\"\"");
        assert_eq!(quote_name(""), "\"\"");
        assert_eq!(quote_name("x;y"), "\"x;y\"");
    }
}
