use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use gsnkit_core::Diagnostic;
use serde::Serialize;

/// Buffered result of a command. Nothing is printed until the command is
/// done, so output never interleaves.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    /// Error-severity diagnostics or rejected input: exit status 1.
    pub failed: bool,
}

impl Outcome {
    pub fn out(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        self.stdout.push('\n');
    }

    pub fn err(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }

    /// Pretty JSON on standard output.
    pub fn json<T: Serialize>(&mut self, value: &T) {
        let text = serde_json::to_string_pretty(value).expect("report types serialize");
        self.out(text);
    }

    pub fn diagnostics(&mut self, file: &str, diags: &[Diagnostic]) {
        for d in diags {
            self.out(d.render(file));
            self.failed |= d.is_error();
        }
    }

    /// Writes `text` to `out`, or to standard output when absent.
    pub fn emit(&mut self, text: &str, out: Option<&Path>) -> Result<(), Failure> {
        match out {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| Failure::Io(format!("cannot write `{}`: {e}", p.display()))),
            None => {
                self.stdout.push_str(text);
                Ok(())
            }
        }
    }
}

/// Exit status 2: the command could not run.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Usage(String),
}

/// A serialized diagnostic with the file it belongs to.
#[derive(Debug, Serialize)]
pub struct FileDiagnostic<'a> {
    pub file: &'a str,
    #[serde(flatten)]
    pub diagnostic: &'a Diagnostic,
}

fn styled(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        let colored = [("error[", "31"), ("warning[", "33")]
            .iter()
            .find_map(|(tag, color)| {
                line.find(tag).map(|at| {
                    format!(
                        "{}\x1b[{color}m{}\x1b[0m{}",
                        &line[..at],
                        &tag[..tag.len() - 1],
                        &line[at + tag.len() - 1..]
                    )
                })
            });
        let _ = write!(out, "{}", colored.as_deref().unwrap_or(line));
    }
    out
}

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal()
}

pub fn finish(result: Result<Outcome, Failure>) -> ExitCode {
    match result {
        Ok(o) => {
            let stdout = if use_color() {
                styled(&o.stdout)
            } else {
                o.stdout
            };
            let _ = std::io::stdout().lock().write_all(stdout.as_bytes());
            let _ = std::io::stderr().lock().write_all(o.stderr.as_bytes());
            ExitCode::from(u8::from(o.failed))
        }
        Err(Failure::Io(m) | Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn styling_wraps_only_the_severity() {
        let s = styled("a.gsn:1:1: error[V005] x\nplain\n");
        assert_eq!(s, "a.gsn:1:1: \x1b[31merror\x1b[0m[V005] x\nplain\n");
    }
}
