//! Parsing and rendering of textual accessibility-tree observations.
//!
//! The observation format is a newline-separated flattening of the page's
//! accessibility tree. Each element line carries a bracketed numeric id, a
//! role token, and a single-quoted name, indented one unit per tree level:
//!
//! ```text
//! [1] RootWebArea 'Shopping'
//! 	[21] link 'My Account'
//! 	[24] textbox 'Search' required: False
//! ```
//!
//! Lines that do not match the element pattern (tab headers, separators)
//! are kept as inert text nodes: they survive rendering but are excluded
//! from matching and diffing.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// One element of a parsed accessibility tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxElement {
    /// Bracketed numeric id as it appears in the observation text.
    pub elem_id: u64,
    /// Role token, e.g. `button`, `link`, `textbox`.
    pub role: String,
    /// Accessible name (contents of the single quotes).
    pub name: String,
    /// Tree depth derived from indentation, root level = 0.
    pub depth: usize,
    /// 0-based line position in the observation text; this is the
    /// element's location measure for matching.
    pub line_index: usize,
    /// Trailing `key: value` property strings, e.g. `focused: True`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<String>,
}

/// A non-element line preserved verbatim at its original position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertLine {
    pub line_index: usize,
    pub text: String,
}

/// A parsed accessibility-tree observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AxTree {
    /// Elements in document (source line) order.
    pub elements: Vec<AxElement>,
    /// Non-element lines, in document order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inert: Vec<InertLine>,
    /// Raw text as received.
    pub source_text: String,
    /// Page URL if known.
    #[serde(default)]
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTreeError {
    #[error("line {line}: malformed element id `{token}` is not an integer")]
    MalformedLine { line: usize, token: String },
}

impl AxTree {
    /// Number of element lines.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Stable digest of the whitespace-normalized observation text.
    ///
    /// Used for state-action dedup and trajectory records: two
    /// observations that differ only in whitespace share a digest.
    pub fn digest(&self) -> String {
        digest_text(&self.source_text)
    }

    /// Render the canonical text form. Elements and inert lines are
    /// emitted in line order; element lines are regenerated from their
    /// fields, so `parse(render(t))` preserves element count, ids, roles,
    /// names, and depths.
    pub fn render(&self) -> String {
        let unit = detect_indent_unit(&self.source_text).unwrap_or_else(|| "\t".to_string());
        let mut lines: Vec<(usize, String)> = Vec::with_capacity(self.elements.len() + self.inert.len());
        for e in &self.elements {
            let mut line = format!("{}[{}] {} '{}'", unit.repeat(e.depth), e.elem_id, e.role, e.name);
            for prop in &e.extra {
                line.push(' ');
                line.push_str(prop);
            }
            lines.push((e.line_index, line));
        }
        for i in &self.inert {
            lines.push((i.line_index, i.text.clone()));
        }
        lines.sort_by_key(|(idx, _)| *idx);
        let texts: Vec<&str> = lines.iter().map(|(_, l)| l.as_str()).collect();
        texts.join("\n")
    }
}

/// Digest of whitespace-normalized text: runs of whitespace (including
/// newlines) collapse to a single space, leading/trailing trimmed.
pub fn digest_text(text: &str) -> String {
    let normalized: Vec<&str> = text.split_whitespace().collect();
    let mut hasher = Sha256::new();
    hasher.update(normalized.join(" ").as_bytes());
    hex_string(&hasher.finalize())
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Parse an accessibility-tree observation.
///
/// Empty input yields an empty tree. A line is an element iff it matches
/// `[<integer>] <role> '<name>'` after indentation; a line that opens a
/// bracket with a non-integer id is a hard error (reported with its line
/// number), anything else is kept inert. Depth is indentation width in
/// units of the first indented line's leading whitespace.
pub fn parse_axtree(text: &str) -> Result<AxTree, ParseTreeError> {
    parse_axtree_with_url(text, "")
}

/// Same as [`parse_axtree`] but records the page URL on the result.
pub fn parse_axtree_with_url(text: &str, url: &str) -> Result<AxTree, ParseTreeError> {
    let mut tree = AxTree {
        source_text: text.to_string(),
        url: url.to_string(),
        ..AxTree::default()
    };
    if text.is_empty() {
        return Ok(tree);
    }
    let unit = detect_indent_unit(text);
    for (line_index, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start_matches([' ', '\t']);
        if trimmed.is_empty() {
            tree.inert.push(InertLine {
                line_index,
                text: raw.to_string(),
            });
            continue;
        }
        match parse_element_line(trimmed) {
            ElementLine::Element { elem_id, role, name, extra } => {
                let indent_len = raw.len() - trimmed.len();
                let depth = match &unit {
                    Some(u) if !u.is_empty() => indent_len / u.len(),
                    _ => 0,
                };
                tree.elements.push(AxElement {
                    elem_id,
                    role,
                    name,
                    depth,
                    line_index,
                    extra,
                });
            }
            ElementLine::BadId(token) => {
                return Err(ParseTreeError::MalformedLine {
                    line: line_index,
                    token,
                });
            }
            ElementLine::Inert => {
                tree.inert.push(InertLine {
                    line_index,
                    text: raw.to_string(),
                });
            }
        }
    }
    Ok(tree)
}

enum ElementLine {
    Element {
        elem_id: u64,
        role: String,
        name: String,
        extra: Vec<String>,
    },
    BadId(String),
    Inert,
}

fn parse_element_line(trimmed: &str) -> ElementLine {
    let Some(rest) = trimmed.strip_prefix('[') else {
        return ElementLine::Inert;
    };
    let Some(close) = rest.find(']') else {
        return ElementLine::Inert;
    };
    let id_token = &rest[..close];
    let after = rest[close + 1..].trim_start();
    // Role token runs to the next space; the quoted name must follow.
    let Some((role, name_part)) = after.split_once(' ') else {
        return ElementLine::Inert;
    };
    let name_part = name_part.trim_start();
    if role.is_empty() || !name_part.starts_with('\'') {
        return ElementLine::Inert;
    }
    let Some((name, tail)) = scan_quoted_name(name_part) else {
        return ElementLine::Inert;
    };
    let elem_id: u64 = match id_token.trim().parse() {
        Ok(v) => v,
        Err(_) => return ElementLine::BadId(id_token.to_string()),
    };
    ElementLine::Element {
        elem_id,
        role: role.to_string(),
        name,
        extra: split_properties(tail),
    }
}

/// Scan a single-quoted name. The closing quote is the first `'` followed
/// by a space or end of line, so apostrophes inside names survive.
fn scan_quoted_name(s: &str) -> Option<(String, &str)> {
    let inner = s.strip_prefix('\'')?;
    let bytes = inner.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\'' && (i + 1 == bytes.len() || bytes[i + 1] == b' ') {
            return Some((inner[..i].to_string(), &inner[i + 1..]));
        }
        i += 1;
    }
    None
}

/// Group a property tail like `focused: True required: False` into
/// `["focused: True", "required: False"]`. A token ending in `:` starts
/// a new property; value tokens accumulate until the next key.
fn split_properties(tail: &str) -> Vec<String> {
    let mut props: Vec<String> = Vec::new();
    for token in tail.split_whitespace() {
        if token.ends_with(':') || props.is_empty() {
            props.push(token.to_string());
        } else {
            let last = props.last_mut().expect("non-empty");
            last.push(' ');
            last.push_str(token);
        }
    }
    props
}

/// The first indented line's leading whitespace is one indent unit.
fn detect_indent_unit(text: &str) -> Option<String> {
    for raw in text.lines() {
        let trimmed = raw.trim_start_matches([' ', '\t']);
        if trimmed.is_empty() {
            continue;
        }
        let indent = &raw[..raw.len() - trimmed.len()];
        if !indent.is_empty() {
            return Some(indent.to_string());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line_element() {
        let t = parse_axtree("[1] button 'Add to cart'").unwrap();
        assert_eq!(t.elements.len(), 1);
        let e = &t.elements[0];
        assert_eq!(e.elem_id, 1);
        assert_eq!(e.role, "button");
        assert_eq!(e.name, "Add to cart");
        assert_eq!(e.depth, 0);
        assert_eq!(e.line_index, 0);
        assert!(e.extra.is_empty());
    }

    #[test]
    fn empty_input_is_empty_tree() {
        let t = parse_axtree("").unwrap();
        assert!(t.is_empty());
        assert!(t.inert.is_empty());
    }

    #[test]
    fn three_line_tree_with_indented_child() {
        let text = "[1] list 'Items'\n\t[2] link 'First'\n[3] button 'Done'";
        let t = parse_axtree(text).unwrap();
        let depths: Vec<usize> = t.elements.iter().map(|e| e.depth).collect();
        let lines: Vec<usize> = t.elements.iter().map(|e| e.line_index).collect();
        assert_eq!(depths, vec![0, 1, 0]);
        assert_eq!(lines, vec![0, 1, 2]);
        // Round-trip preserves structure.
        let rt = parse_axtree(&t.render()).unwrap();
        assert_eq!(rt.elements, t.elements);
    }

    #[test]
    fn two_space_indent_autodetected() {
        let text = "[1] list 'Items'\n  [2] link 'First'\n    [3] link 'Nested'";
        let t = parse_axtree(text).unwrap();
        let depths: Vec<usize> = t.elements.iter().map(|e| e.depth).collect();
        assert_eq!(depths, vec![0, 1, 2]);
    }

    #[test]
    fn non_integer_id_is_malformed() {
        let err = parse_axtree("[1] link 'ok'\n[x2] link 'bad'").unwrap_err();
        assert_eq!(
            err,
            ParseTreeError::MalformedLine {
                line: 1,
                token: "x2".to_string()
            }
        );
    }

    #[test]
    fn non_element_lines_kept_inert() {
        let text = "Tab 0 (current): Shop\n[4] link 'Cart'\n[5] separator\nplain text";
        let t = parse_axtree(text).unwrap();
        assert_eq!(t.elements.len(), 1);
        assert_eq!(t.elements[0].line_index, 1);
        let inert: Vec<usize> = t.inert.iter().map(|i| i.line_index).collect();
        assert_eq!(inert, vec![0, 2, 3]);
        assert_eq!(t.render(), text);
    }

    #[test]
    fn properties_grouped_into_extra() {
        let t = parse_axtree("[7] textbox 'Search' required: False focused: True").unwrap();
        assert_eq!(
            t.elements[0].extra,
            vec!["required: False".to_string(), "focused: True".to_string()]
        );
        let rt = parse_axtree(&t.render()).unwrap();
        assert_eq!(rt.elements, t.elements);
    }

    #[test]
    fn apostrophe_inside_name_survives() {
        let t = parse_axtree("[3] link 'O'Reilly books' focused: True").unwrap();
        assert_eq!(t.elements[0].name, "O'Reilly books");
        assert_eq!(t.elements[0].extra, vec!["focused: True".to_string()]);
    }

    #[test]
    fn digest_collapses_whitespace_only_differences() {
        let a = parse_axtree("[1] link 'A'\n[2] link 'B'").unwrap();
        let b = parse_axtree("[1]  link   'A'\n[2] link 'B'").unwrap();
        let c = parse_axtree("[1] link 'A'\n[2] link 'C'").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn line_indices_strictly_increasing() {
        let text = "header\n[1] link 'A'\nmid\n[2] link 'B'\n[3] link 'C'";
        let t = parse_axtree(text).unwrap();
        let lines: Vec<usize> = t.elements.iter().map(|e| e.line_index).collect();
        assert!(lines.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(t.elements.len(), 3);
    }
}
