//! Element labels and the pair-label scheme used by products.

use crate::error::{Error, Result};

/// Separator between the two halves of a pair label.
pub const SEP: char = '∘';

/// Separator inside the string keys of instance files, e.g. `"g|f"`.
pub const KEY_SEP: char = '|';

/// Label of the single element of the unit set.
pub const UNIT: &str = "*";

/// Renders the pair `(l, r)`. Halves that already contain the separator are
/// parenthesized so nested pairs stay unambiguous.
pub fn pair(l: &str, r: &str) -> String {
    let mut out = String::with_capacity(l.len() + r.len() + 5);
    push_part(&mut out, l);
    out.push(SEP);
    push_part(&mut out, r);
    out
}

fn push_part(out: &mut String, part: &str) {
    if part.contains(SEP) {
        out.push('(');
        out.push_str(part);
        out.push(')');
    } else {
        out.push_str(part);
    }
}

/// Renders a finite function as its sorted graph, e.g. `{a↦x,b↦y}`.
pub fn graph<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> String {
    let mut parts: Vec<String> = entries
        .into_iter()
        .map(|(k, v)| format!("{}↦{}", wrap(k), wrap(v)))
        .collect();
    parts.sort();
    format!("{{{}}}", parts.join(","))
}

fn wrap(s: &str) -> String {
    if s.contains(',') || s.contains('↦') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Accepts a label read from a file.
///
/// Labels produced by the pair and graph schemes are allowed so computed
/// cells re-parse unchanged; brackets must balance so those schemes stay
/// unambiguous when nested.
pub fn check_user_label(label: &str) -> Result<()> {
    let bad = |detail: String| Error::Invalid {
        what: "label",
        detail,
    };
    if label.is_empty() {
        return Err(bad("empty label".into()));
    }
    if label.contains(KEY_SEP) {
        return Err(bad(format!(
            "label {label:?} contains the key separator {KEY_SEP:?}"
        )));
    }
    let mut depth: Vec<char> = Vec::new();
    for c in label.chars() {
        match c {
            '(' | '{' => depth.push(c),
            ')' | '}' => {
                let open = if c == ')' { '(' } else { '{' };
                if depth.pop() != Some(open) {
                    return Err(bad(format!("label {label:?} has unbalanced brackets")));
                }
            }
            _ => {}
        }
    }
    if !depth.is_empty() {
        return Err(bad(format!("label {label:?} has unbalanced brackets")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_pairs_stay_distinct() {
        let left = pair(&pair("a", "b"), "c");
        let right = pair("a", &pair("b", "c"));
        assert_eq!(left, "(a∘b)∘c");
        assert_eq!(right, "a∘(b∘c)");
        assert_ne!(left, right);
    }

    #[test]
    fn graph_is_sorted() {
        assert_eq!(graph([("b", "y"), ("a", "x")]), "{a↦x,b↦y}");
        assert_eq!(graph(std::iter::empty()), "{}");
    }

    #[test]
    fn file_labels() {
        assert!(check_user_label("x∘y").is_ok());
        assert!(check_user_label("{a↦(x∘y)}").is_ok());
        assert!(check_user_label("(x").is_err());
        assert!(check_user_label("{x)").is_err());
        assert!(check_user_label("g|f").is_err());
        assert!(check_user_label("").is_err());
        assert!(check_user_label("x1").is_ok());
    }
}
