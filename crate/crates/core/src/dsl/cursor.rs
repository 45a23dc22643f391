use crate::diagnostic::{Diagnostic, SourceSpan};

use super::lexer::{Tok, Token};

/// Token cursor shared by the text-format parsers.
pub(crate) struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    pub file: &'a str,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Token], file: &'a str) -> Self {
        Cursor {
            tokens,
            pos: 0,
            file,
        }
    }

    pub fn peek(&self) -> &'a Token {
        self.peek_at(0)
    }

    pub fn peek_at(&self, n: usize) -> &'a Token {
        let last = self.tokens.len() - 1;
        &self.tokens[(self.pos + n).min(last)]
    }

    pub fn tok(&self) -> &'a Tok {
        &self.peek().tok
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.tok(), Tok::Eof)
    }

    pub fn bump(&mut self) -> &'a Token {
        let t = self.peek();
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    /// The most recently consumed token.
    pub fn prev(&self) -> &'a Token {
        &self.tokens[self.pos.saturating_sub(1)]
    }

    /// Span from `start` to the end of the last consumed token.
    pub fn span_from(&self, start: &Token) -> SourceSpan {
        let end = self.prev();
        SourceSpan::new(
            self.file,
            (start.line, start.col),
            (end.end_line, end.end_col),
        )
    }

    pub fn at_word(&self, word: &str) -> bool {
        matches!(self.tok(), Tok::Ident(w) if w == word)
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.tok() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, word: &str) -> bool {
        if self.at_word(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn unexpected(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            "P002",
            format!("expected {expected}, found {}", t.tok.describe()),
        )
        .with_span(Some(self.eof_aware_span()))
    }

    /// The current token's span; at end of input, the last real token.
    fn eof_aware_span(&self) -> SourceSpan {
        let t = self.peek();
        if matches!(t.tok, Tok::Eof) && self.pos > 0 {
            self.prev().span(self.file)
        } else {
            t.span(self.file)
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<&'a Token, Diagnostic> {
        if self.tok() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub fn expect_word(&mut self, word: &str) -> Result<&'a Token, Diagnostic> {
        if self.at_word(word) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(String, &'a Token), Diagnostic> {
        match self.tok() {
            Tok::Ident(w) => {
                let t = self.bump();
                Ok((w.clone(), t))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// `IDENT` or `IDENT :: IDENT`; returns the joined text and its span.
    pub fn expect_ref(&mut self, what: &str) -> Result<(String, SourceSpan), Diagnostic> {
        let (first, start) = self.expect_ident(what)?;
        if matches!(self.tok(), Tok::ColonColon) {
            self.bump();
            let (second, _) = self.expect_ident("identifier after `::`")?;
            return Ok((format!("{first}::{second}"), self.span_from(start)));
        }
        Ok((first, start.span(self.file)))
    }

    pub fn expect_string(&mut self, what: &str) -> Result<(String, &'a Token), Diagnostic> {
        match self.tok() {
            Tok::Str(s) => {
                let t = self.bump();
                Ok((s.clone(), t))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn expect_int(&mut self, what: &str) -> Result<(u64, &'a Token), Diagnostic> {
        match self.tok() {
            Tok::Int(n) => {
                let n = *n;
                Ok((n, self.bump()))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// Integer or decimal literal.
    pub fn expect_number(&mut self, what: &str) -> Result<(f64, &'a Token), Diagnostic> {
        let value = match self.tok() {
            Tok::Int(n) => *n as f64,
            Tok::Decimal(d) => d.parse::<f64>().map_err(|_| self.unexpected(what))?,
            _ => return Err(self.unexpected(what)),
        };
        Ok((value, self.bump()))
    }

    /// Skips tokens until `stop` accepts the cursor or input ends. Always
    /// consumes at least one token unless already at end of input.
    pub fn recover(&mut self, stop: impl Fn(&Cursor<'a>) -> bool) {
        if !self.at_eof() {
            self.bump();
        }
        while !self.at_eof() && !stop(self) {
            self.bump();
        }
    }

    /// Skips every token starting on or before `line`.
    pub fn skip_through_line(&mut self, line: u32) {
        while !self.at_eof() && self.peek().line <= line {
            self.bump();
        }
    }

    pub fn line_of_prev(&self) -> u32 {
        self.prev().end_line
    }
}
