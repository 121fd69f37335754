//! Plain-text code files.
//!
//! ```text
//! c optional comment
//! length=7
//! 0000000
//! 1101000
//! ```
//!
//! Comment lines start with `c `; the first non-comment line may declare
//! `length=<n>`; every other line is one word of exactly that length.
//! Duplicate words are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Code, Word};

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ")
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut declared: Option<usize> = None;
    let mut code: Option<Code> = None;
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if is_comment(line) {
            continue;
        }
        if line.trim().is_empty() {
            return Err(Error::format(lineno, "empty line"));
        }
        if let Some(rest) = line.strip_prefix("length=") {
            if seen_content {
                return Err(Error::format(lineno, "length= must be the first non-comment line"));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::format(lineno, format!("bad length {rest:?}")))?;
            code = Some(Code::new(n).map_err(|e| Error::format(lineno, e.to_string()))?);
            declared = Some(n);
            seen_content = true;
            continue;
        }
        seen_content = true;
        let word = Word::parse(line).map_err(|e| Error::format(lineno, e.to_string()))?;
        if let Some(n) = declared {
            if word.len() != n {
                return Err(Error::format(
                    lineno,
                    format!("word has {} characters, expected {n}", word.len()),
                ));
            }
        }
        let c = match code.as_mut() {
            Some(c) => c,
            None => {
                declared = Some(word.len());
                code.insert(Code::new(word.len()).map_err(|e| Error::format(lineno, e.to_string()))?)
            }
        };
        c.insert(word).map_err(|e| Error::format(lineno, e.to_string()))?;
    }

    code.ok_or_else(|| Error::format(0, "no length declaration and no words"))
}

/// One word per line. The `length=` header is written only for an empty
/// code, whose length could not be read back otherwise.
pub fn format_code(code: &Code) -> String {
    let mut out = String::with_capacity(code.len() * (code.length() + 1) + 16);
    if code.is_empty() {
        writeln!(out, "length={}", code.length()).unwrap();
    }
    for w in code.words() {
        writeln!(out, "{w}").unwrap();
    }
    out
}

/// Vertex → word table: one `<vertex-id> <word>` line per vertex, 1-based ids.
pub fn format_mapping(words: &[Word]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        writeln!(out, "{} {w}", i + 1).unwrap();
    }
    out
}

pub fn parse_mapping(text: &str) -> Result<Vec<Word>> {
    let mut out: Vec<Option<Word>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if is_comment(line) {
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let (Some(id), Some(word), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(lineno, "expected `<vertex-id> <word>`"));
        };
        let id: usize = id
            .parse()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::format(lineno, format!("bad vertex id {id:?}")))?;
        let word = Word::parse(word).map_err(|e| Error::format(lineno, e.to_string()))?;
        if out.len() < id {
            out.resize(id, None);
        }
        if out[id - 1].replace(word).is_some() {
            return Err(Error::format(lineno, format!("vertex {id} mapped twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::format(0, format!("vertex {} unmapped", i + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_header_and_comments() {
        let c = parse_code("c hello\nlength=3\n000\nc mid\n111\n").unwrap();
        assert_eq!(c.length(), 3);
        assert_eq!(c.len(), 2);
        assert_eq!(format_code(&c), "000\n111\n");
    }

    #[test]
    fn parse_without_header() {
        let c = parse_code("0101\n1010\n").unwrap();
        assert_eq!(c.length(), 4);
        assert_eq!(c.len(), 2);
        let empty = parse_code("length=5\n").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_code("c x\n000\n000\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }), "{err}");
        let err = parse_code("length=3\n0000\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = parse_code("000\nlength=3\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = parse_code("012\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }), "{err}");
        assert!(parse_code("").is_err());
    }

    #[test]
    fn mapping_round_trip() {
        let words = vec![Word::parse("00").unwrap(), Word::parse("11").unwrap()];
        let text = format_mapping(&words);
        assert_eq!(text, "1 00\n2 11\n");
        assert_eq!(parse_mapping(&text).unwrap(), words);
        assert!(parse_mapping("2 00\n").is_err());
        assert!(parse_mapping("1 00\n1 11\n").is_err());
    }
}
