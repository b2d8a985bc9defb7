//! Codes and the plain-text code file format.
//!
//! One codeword per line, `n` space-separated symbols from `{0,1}`, column 0
//! holding bit 0. Lines end in LF and there is no header. The reader tolerates
//! trailing whitespace on a line and blank lines after the last codeword.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{CwcError, Result};
use crate::word::{min_pairwise_distance, pairwise_histogram, Codeword, DistanceHistogram, Params};

/// Codewords in construction order together with their instance parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub params: Params,
    pub words: Vec<Codeword>,
}

impl Code {
    pub fn new(params: Params, words: Vec<Codeword>) -> Self {
        Self { params, words }
    }

    pub fn empty(params: Params) -> Self {
        Self::new(params, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn histogram(&self) -> DistanceHistogram {
        pairwise_histogram(&self.words)
    }

    pub fn min_distance(&self) -> Result<u32> {
        min_pairwise_distance(&self.words)
    }

    pub fn to_text(&self) -> String {
        format_code(&self.words, self.params.n)
    }
}

pub fn write_code<W: Write>(mut out: W, words: &[Codeword], n: u32) -> io::Result<()> {
    let mut line = String::with_capacity(2 * n as usize);
    for word in words {
        line.clear();
        for i in 0..n {
            if i > 0 {
                line.push(' ');
            }
            line.push(if word.bit(i) { '1' } else { '0' });
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn format_code(words: &[Codeword], n: u32) -> String {
    let mut buf = Vec::with_capacity(words.len() * 2 * n as usize);
    write_code(&mut buf, words, n).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("code text is ASCII")
}

/// Parses code text of word length `n`. Errors carry 1-based line numbers.
pub fn parse_code(text: &str, n: u32) -> Result<Vec<Codeword>> {
    let mut words = Vec::new();
    let mut blank_at = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            blank_at.get_or_insert(line_no);
            continue;
        }
        if let Some(blank) = blank_at {
            return Err(parse_err(blank, "blank line between codewords".into()));
        }
        let mut bits = 0u64;
        let mut len = 0u32;
        for tok in line.split_whitespace() {
            let bit = match tok {
                "0" => 0,
                "1" => 1,
                other => return Err(parse_err(line_no, format!("symbol {other:?} is not 0 or 1"))),
            };
            if len < n {
                bits |= bit << len;
            }
            len += 1;
        }
        if len != n {
            return Err(parse_err(line_no, format!("expected {n} symbols, found {len}")));
        }
        words.push(Codeword(bits));
    }
    Ok(words)
}

fn parse_err(line: usize, message: String) -> CwcError {
    CwcError::Parse { line, message }
}

pub fn read_code_file(path: &Path, n: u32) -> Result<Vec<Codeword>> {
    parse_code(&fs::read_to_string(path)?, n)
}

/// Number of symbols on the first non-blank line, if any.
pub fn detect_length(text: &str) -> Option<u32> {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().count() as u32)
}
