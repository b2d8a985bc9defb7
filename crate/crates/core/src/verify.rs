//! Independent code validation.
//!
//! The checks here look only at the raw word list. Nothing from the
//! construction heuristics (cached distances, conflict sets) is consulted.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::code::{read_code_file, write_code};
use crate::error::{CwcError, Result};
use crate::word::{hamming_distance, Codeword, Params};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub size: usize,
    /// Smallest pairwise distance; `None` for fewer than two words.
    pub min_distance: Option<u32>,
    pub target: Option<usize>,
    /// `(word index, observed weight)`.
    pub weight_violations: Vec<(usize, u32)>,
    /// Words with bits set at or beyond position `n`.
    pub out_of_range: Vec<usize>,
    /// `(i, j, observed distance)` for every pair closer than `d`.
    pub distance_violations: Vec<(usize, usize, u32)>,
    pub duplicate_pairs: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn violation_count(&self) -> usize {
        self.weight_violations.len() + self.out_of_range.len() + self.distance_violations.len()
    }
}

/// Checks weight, range and pairwise distance of every word, plus `size >= params.s`.
pub fn verify(words: &[Codeword], params: &Params) -> VerifyReport {
    check(words, params.n, params.w, params.d, Some(params.s))
}

/// Exhaustive check against `(n, w, d)` with an optional size target.
pub fn check(words: &[Codeword], n: u32, w: u32, d: u32, target: Option<usize>) -> VerifyReport {
    let mut report = VerifyReport {
        size: words.len(),
        target,
        ..Default::default()
    };
    let range_mask = if n >= 64 { 0 } else { !0u64 << n };
    for (i, word) in words.iter().enumerate() {
        if word.weight() != w {
            report.weight_violations.push((i, word.weight()));
        }
        if word.0 & range_mask != 0 {
            report.out_of_range.push(i);
        }
    }
    let mut min_distance = None::<u32>;
    for (i, &a) in words.iter().enumerate() {
        for (j, &b) in words.iter().enumerate().skip(i + 1) {
            let dist = hamming_distance(a, b);
            min_distance = Some(min_distance.map_or(dist, |m| m.min(dist)));
            if dist < d {
                report.distance_violations.push((i, j, dist));
            }
            if dist == 0 {
                report.duplicate_pairs.push((i, j));
            }
        }
    }
    report.min_distance = min_distance;
    report.valid = report.violation_count() == 0 && target.is_none_or(|s| words.len() >= s);
    report
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        write!(f, "size: {}", self.size)?;
        match self.target {
            Some(s) => writeln!(f, " (target {s})")?,
            None => writeln!(f)?,
        }
        match self.min_distance {
            Some(m) => writeln!(f, "min distance: {m}")?,
            None => writeln!(f, "min distance: n/a")?,
        }
        for &(i, wt) in &self.weight_violations {
            writeln!(f, "weight violation: word {} has weight {wt}", i + 1)?;
        }
        for &i in &self.out_of_range {
            writeln!(f, "range violation: word {} has bits beyond n", i + 1)?;
        }
        for &(i, j, dist) in &self.distance_violations {
            writeln!(f, "distance violation: words {} and {} at distance {dist}", i + 1, j + 1)?;
        }
        for &(i, j) in &self.duplicate_pairs {
            writeln!(f, "duplicate: words {} and {}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Writes `words` to `path` only if they form a valid code for `params`.
///
/// The text goes to a temporary file in the destination directory, is read
/// back and verified from disk, then renamed over `path`.
pub fn persist_verified(path: &Path, words: &[Codeword], params: &Params) -> Result<VerifyReport> {
    let pre = verify(words, params);
    if !pre.valid {
        return Err(CwcError::Unverified(summary(&pre)));
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::env::current_dir()?,
    };
    fs::create_dir_all(&dir)?;
    let file_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "code".into());
    let tmp = dir.join(format!(".{file_name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        write_code(&mut f, words, params.n)?;
        f.flush()?;
        f.sync_all()?;
    }
    let on_disk = read_code_file(&tmp, params.n)?;
    let report = verify(&on_disk, params);
    if !report.valid || on_disk != words {
        let _ = fs::remove_file(&tmp);
        return Err(CwcError::Unverified(summary(&report)));
    }
    fs::rename(&tmp, path)?;
    Ok(report)
}

fn summary(r: &VerifyReport) -> String {
    format!(
        "size {} target {:?}, {} weight, {} range, {} distance violations",
        r.size,
        r.target,
        r.weight_violations.len(),
        r.out_of_range.len(),
        r.distance_violations.len()
    )
}
