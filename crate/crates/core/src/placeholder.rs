//! `{Role Name}` placeholders inside node statements.
//!
//! Placeholders are single-level: `{` opens, `}` closes, nesting is an
//! error. `\{` and `\}` stand for literal braces and are never placeholders.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaceholderError {
    #[error("unclosed placeholder starting at character {0}")]
    Unclosed(usize),
    #[error("nested placeholder at character {0}")]
    Nested(usize),
    #[error("unmatched `}}` at character {0}")]
    Unmatched(usize),
    #[error("empty placeholder at character {0}")]
    Empty(usize),
}

/// One piece of a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment<'a> {
    Text(&'a str),
    Role(&'a str),
}

fn segments(statement: &str) -> Result<Vec<Segment<'_>>, PlaceholderError> {
    let mut out = Vec::new();
    let mut text_start = 0;
    let mut open: Option<usize> = None;
    let mut chars = statement.char_indices().peekable();
    let mut position = 0usize;
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' if matches!(chars.peek(), Some((_, '{' | '}'))) => {
                chars.next();
                position += 1;
            }
            '{' => {
                if open.is_some() {
                    return Err(PlaceholderError::Nested(position));
                }
                out.push(Segment::Text(&statement[text_start..i]));
                open = Some(i);
            }
            '}' => match open.take() {
                Some(start) => {
                    let role = statement[start + 1..i].trim();
                    if role.is_empty() {
                        return Err(PlaceholderError::Empty(position));
                    }
                    out.push(Segment::Role(role));
                    text_start = i + 1;
                }
                None => return Err(PlaceholderError::Unmatched(position)),
            },
            _ => {}
        }
        position += 1;
    }
    if let Some(start) = open {
        let at = statement[..start].chars().count();
        return Err(PlaceholderError::Unclosed(at));
    }
    out.push(Segment::Text(&statement[text_start..]));
    Ok(out)
}

/// Ordered, deduplicated role names of every `{…}` span in `statement`.
pub fn placeholders(statement: &str) -> Result<Vec<String>, PlaceholderError> {
    let mut roles: Vec<String> = Vec::new();
    for seg in segments(statement)? {
        if let Segment::Role(r) = seg {
            if !roles.iter().any(|x| x == r) {
                roles.push(r.to_string());
            }
        }
    }
    Ok(roles)
}

/// Role occurrences including repeats, in order.
pub fn occurrences(statement: &str) -> Result<Vec<String>, PlaceholderError> {
    Ok(segments(statement)?
        .into_iter()
        .filter_map(|s| match s {
            Segment::Role(r) => Some(r.to_string()),
            Segment::Text(_) => None,
        })
        .collect())
}

/// Replaces every placeholder whose role has an entry in `lookup`; roles
/// without one are left in place. Escaped braces are preserved verbatim.
pub fn substitute<F>(statement: &str, mut lookup: F) -> Result<String, PlaceholderError>
where
    F: FnMut(&str) -> Option<String>,
{
    let mut out = String::with_capacity(statement.len());
    for seg in segments(statement)? {
        match seg {
            Segment::Text(t) => out.push_str(t),
            Segment::Role(r) => match lookup(r) {
                Some(v) => out.push_str(&v),
                None => {
                    out.push('{');
                    out.push_str(r);
                    out.push('}');
                }
            },
        }
    }
    Ok(out)
}

/// Convenience wrapper over [`substitute`] for a plain map.
pub fn bind_all(
    statement: &str,
    bindings: &HashMap<String, String>,
) -> Result<String, PlaceholderError> {
    substitute(statement, |r| bindings.get(r).cloned())
}
