use crate::diagnostic::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Int(u64),
    /// Number with a fractional part, kept as written.
    Decimal(String),
    Arrow,
    Colon,
    ColonColon,
    DotDot,
    Star,
    Comma,
    Eq,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Le,
    Ge,
    Percent,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(_) => "string".into(),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Decimal(n) => format!("`{n}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Star => "`*`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Percent => "`%`".into(),
            Tok::Eof => "end of file".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Token {
    pub(crate) fn span(&self, file: &str) -> SourceSpan {
        SourceSpan::new(file, (self.line, self.col), (self.end_line, self.end_col))
    }
}

/// A `#` comment. `trailing` is set when code precedes it on the same line.
#[derive(Debug, Clone)]
pub(crate) struct Comment {
    pub text: String,
    pub line: u32,
    pub trailing: bool,
}

pub(crate) struct Lexed {
    pub tokens: Vec<Token>,
    pub comments: Vec<Comment>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Normalizes CRLF and lone CR to LF.
pub fn normalize_newlines(text: &str) -> String {
    text.replace("\r\n", "\n").replace('\r', "\n")
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

/// Tokenizes the shared line-oriented grammar used by `.gsn`, `.trc`,
/// bindings and manifest files. Lexing never stops at an error: the bad
/// character is reported as `P001` and skipped.
pub(crate) fn lex(text: &str, file: &str) -> Lexed {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut comments = Vec::new();
    let mut diagnostics = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let mut last_code_line = 0u32;

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        let push = |tokens: &mut Vec<Token>, tok: Tok, line: u32, col: u32| {
            tokens.push(Token {
                tok,
                line: start_line,
                col: start_col,
                end_line: line,
                end_col: col,
            });
        };
        match c {
            ' ' | '\t' | '\n' => {
                let n = 1;
                advance(&mut i, &mut line, &mut col, n)
            }
            '#' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '\n' {
                    j += 1;
                }
                let body: String = chars[i + 1..j].iter().collect();
                comments.push(Comment {
                    text: body.trim_end().to_string(),
                    line: start_line,
                    trailing: last_code_line == start_line,
                });
                {
                    let n = j - i;
                    advance(&mut i, &mut line, &mut col, n)
                };
            }
            '"' => {
                let mut j = i + 1;
                let mut value = String::new();
                let mut closed = false;
                while j < chars.len() {
                    match chars[j] {
                        '"' => {
                            closed = true;
                            j += 1;
                            break;
                        }
                        '\n' => break,
                        '\\' if j + 1 < chars.len() => {
                            match chars[j + 1] {
                                '"' => value.push('"'),
                                '\\' => value.push('\\'),
                                'n' => value.push('\n'),
                                't' => value.push('\t'),
                                'r' => value.push('\r'),
                                other => {
                                    value.push('\\');
                                    value.push(other);
                                }
                            }
                            j += 2;
                        }
                        other => {
                            value.push(other);
                            j += 1;
                        }
                    }
                }
                {
                    let n = j - i;
                    advance(&mut i, &mut line, &mut col, n)
                };
                if closed {
                    push(&mut tokens, Tok::Str(value), line, col);
                } else {
                    diagnostics.push(
                        Diagnostic::error("P001", "unterminated string literal").with_span(Some(
                            SourceSpan::new(file, (start_line, start_col), (line, col)),
                        )),
                    );
                }
                last_code_line = line;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < chars.len() && ident_continue(chars[j]) {
                    if chars[j] == '-' && chars.get(j + 1) == Some(&'>') {
                        break;
                    }
                    if chars[j] == '.' && chars.get(j + 1) == Some(&'.') {
                        break;
                    }
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                {
                    let n = j - i;
                    advance(&mut i, &mut line, &mut col, n)
                };
                push(&mut tokens, Tok::Ident(word), line, col);
                last_code_line = line;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    let mut k = j + 1;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    let text: String = chars[i..k].iter().collect();
                    {
                        let n = k - i;
                        advance(&mut i, &mut line, &mut col, n)
                    };
                    push(&mut tokens, Tok::Decimal(text), line, col);
                    last_code_line = line;
                    continue;
                }
                let digits: String = chars[i..j].iter().collect();
                {
                    let n = j - i;
                    advance(&mut i, &mut line, &mut col, n)
                };
                match digits.parse::<u64>() {
                    Ok(n) => push(&mut tokens, Tok::Int(n), line, col),
                    Err(_) => diagnostics.push(
                        Diagnostic::error("P001", format!("integer `{digits}` is too large"))
                            .with_span(Some(SourceSpan::new(
                                file,
                                (start_line, start_col),
                                (line, col),
                            ))),
                    ),
                }
                last_code_line = line;
            }
            _ => {
                let next = chars.get(i + 1).copied();
                let (tok, len) = match (c, next) {
                    ('-', Some('>')) => (Some(Tok::Arrow), 2),
                    (':', Some(':')) => (Some(Tok::ColonColon), 2),
                    ('.', Some('.')) => (Some(Tok::DotDot), 2),
                    ('<', Some('=')) => (Some(Tok::Le), 2),
                    ('>', Some('=')) => (Some(Tok::Ge), 2),
                    (':', _) => (Some(Tok::Colon), 1),
                    ('*', _) => (Some(Tok::Star), 1),
                    (',', _) => (Some(Tok::Comma), 1),
                    ('=', _) => (Some(Tok::Eq), 1),
                    ('{', _) => (Some(Tok::LBrace), 1),
                    ('}', _) => (Some(Tok::RBrace), 1),
                    ('(', _) => (Some(Tok::LParen), 1),
                    (')', _) => (Some(Tok::RParen), 1),
                    ('[', _) => (Some(Tok::LBracket), 1),
                    (']', _) => (Some(Tok::RBracket), 1),
                    ('<', _) => (Some(Tok::Lt), 1),
                    ('>', _) => (Some(Tok::Gt), 1),
                    ('%', _) => (Some(Tok::Percent), 1),
                    _ => (None, 1),
                };
                {
                    let n = len;
                    advance(&mut i, &mut line, &mut col, n)
                };
                match tok {
                    Some(t) => push(&mut tokens, t, line, col),
                    None => diagnostics.push(
                        Diagnostic::error("P001", format!("unexpected character `{c}`")).with_span(
                            Some(SourceSpan::new(file, (start_line, start_col), (line, col))),
                        ),
                    ),
                }
                last_code_line = line;
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
        end_line: line,
        end_col: col,
    });
    Lexed {
        tokens,
        comments,
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, "t").tokens.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_split_identifiers() {
        assert_eq!(
            toks("G1->G2"),
            vec![
                Tok::Ident("G1".into()),
                Tok::Arrow,
                Tok::Ident("G2".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("REQ-SAFE-ER-1")[0], Tok::Ident("REQ-SAFE-ER-1".into()));
        assert_eq!(toks("G3.1")[0], Tok::Ident("G3.1".into()));
    }

    #[test]
    fn ranges() {
        assert_eq!(
            toks("1..*"),
            vec![Tok::Int(1), Tok::DotDot, Tok::Star, Tok::Eof]
        );
    }

    #[test]
    fn decimals() {
        assert_eq!(toks("0.95")[0], Tok::Decimal("0.95".into()));
        assert_eq!(toks("1..2")[0], Tok::Int(1));
    }

    #[test]
    fn string_escapes() {
        assert_eq!(
            toks(r#""a \"b\" \\ \{c\}""#)[0],
            Tok::Str(r#"a "b" \ \{c\}"#.into())
        );
    }

    #[test]
    fn comments_are_tracked() {
        let l = lex("# lead\ngoal G1 \"x\" # tail\n", "t");
        assert_eq!(l.comments.len(), 2);
        assert!(!l.comments[0].trailing);
        assert!(l.comments[1].trailing);
        assert_eq!(l.comments[1].text, " tail");
    }

    #[test]
    fn errors_recover() {
        let l = lex("goal $ G1 \"open", "t");
        assert_eq!(l.diagnostics.len(), 2);
        assert!(l.diagnostics.iter().all(|d| d.code == "P001"));
        assert_eq!(l.tokens.len(), 3);
    }
}
