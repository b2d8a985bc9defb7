//! Pairwise distance maps of a code in construction order.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::word::{hamming_distance, Codeword};

/// `M × M` matrix of pairwise distances, row-major, zero diagonal.
pub fn distance_matrix(words: &[Codeword]) -> Vec<u32> {
    let m = words.len();
    let mut out = vec![0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let d = hamming_distance(words[i], words[j]);
            out[i * m + j] = d;
            out[j * m + i] = d;
        }
    }
    out
}

/// Distinct distances among the first `prefix` words.
pub fn prefix_distances(words: &[Codeword], prefix: usize) -> BTreeSet<u32> {
    let block = &words[..prefix.min(words.len())];
    let mut set = BTreeSet::new();
    for (i, &a) in block.iter().enumerate() {
        for &b in &block[i + 1..] {
            set.insert(hamming_distance(a, b));
        }
    }
    set
}

pub fn write_distance_csv<W: Write>(out: W, words: &[Codeword]) -> io::Result<()> {
    let m = words.len();
    let matrix = distance_matrix(words);
    let mut out = BufWriter::new(out);
    for row in matrix.chunks(m.max(1)).take(m) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()
}

/// Binary 8-bit PGM; distance `x` maps to `round(255 · x / max_distance)`.
pub fn write_distance_pgm<W: Write>(out: W, words: &[Codeword], max_distance: u32) -> io::Result<()> {
    let m = words.len();
    let mut out = BufWriter::new(out);
    write!(out, "P5\n{m} {m}\n255\n")?;
    let scale = max_distance.max(1) as f64;
    let pixels: Vec<u8> = distance_matrix(words)
        .into_iter()
        .map(|x| (255.0 * x as f64 / scale).round().min(255.0) as u8)
        .collect();
    out.write_all(&pixels)?;
    out.flush()
}

/// Writes the CSV matrix to `csv_path` and, if asked, a grayscale image scaled
/// over `[0, 2·min(w, n−w)]`.
pub fn export_distance_map(words: &[Codeword], n: u32, csv_path: Option<&Path>, pgm_path: Option<&Path>) -> Result<()> {
    if let Some(path) = csv_path {
        write_distance_csv(File::create(path)?, words)?;
    }
    if let Some(path) = pgm_path {
        let w = words.first().map_or(0, |c| c.weight());
        write_distance_pgm(File::create(path)?, words, 2 * w.min(n.saturating_sub(w)))?;
    }
    Ok(())
}
