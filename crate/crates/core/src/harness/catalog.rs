//! Instance catalogs: CSV files with header `n,d,w,s,method,b,t` and an
//! optional trailing `budget` column (seconds per replica).

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::error::{CwcError, Result};
use crate::sliced::{SliceConfig, DEFAULT_TRIALS};
use crate::tabu::TabuConfig;
use crate::word::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Tabu(TabuConfig),
    Rsdh,
    Srsdh(SliceConfig),
    Msrsdh(SliceConfig),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Tabu(_) => "tabu",
            Method::Rsdh => "rsdh",
            Method::Srsdh(_) => "srsdh",
            Method::Msrsdh(_) => "msrsdh",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Srsdh(c) | Method::Msrsdh(c) => write!(f, "{}-b{}-t{}", self.name(), c.b, c.t),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub params: Params,
    pub method: Method,
    pub label: String,
    /// Per-replica wall-clock budget overriding the campaign default.
    pub budget_secs: Option<f64>,
}

impl Instance {
    /// Stable name used for output files, e.g. `dev-n10-d4-w4-s30-tabu`.
    pub fn name(&self) -> String {
        let p = &self.params;
        format!("{}-n{}-d{}-w{}-s{}-{}", self.label, p.n, p.d, p.w, p.s, self.method)
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    n: u32,
    d: u32,
    w: u32,
    s: usize,
    method: String,
    #[serde(default)]
    b: Option<u32>,
    #[serde(default)]
    t: Option<u32>,
    #[serde(default)]
    budget: Option<f64>,
}

/// Loads a catalog; instances are labelled with the file stem.
pub fn load_catalog(path: &Path) -> Result<Vec<Instance>> {
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "catalog".into());
    parse_catalog(std::fs::File::open(path)?, &label)
}

pub fn parse_catalog<R: Read>(input: R, label: &str) -> Result<Vec<Instance>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CwcError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: Row = record.deserialize(Some(&headers)).map_err(|e| CwcError::Parse {
            line,
            message: e.to_string(),
        })?;
        out.push(row_to_instance(row, label).map_err(|e| match e {
            CwcError::Validation(msg) => CwcError::Validation(format!("line {line}: {msg}")),
            other => other,
        })?);
    }
    Ok(out)
}

fn row_to_instance(row: Row, label: &str) -> Result<Instance> {
    let params = Params::strict(row.n, row.w, row.d, row.s)?;
    let slice = |name: &str| -> Result<SliceConfig> {
        let b = row
            .b
            .ok_or_else(|| CwcError::Validation(format!("method {name} needs a slice bit count b")))?;
        let cfg = SliceConfig::new(b, row.t.unwrap_or(DEFAULT_TRIALS));
        cfg.validate(&params)?;
        Ok(cfg)
    };
    let method = match row.method.to_ascii_lowercase().as_str() {
        "tabu" => Method::Tabu(TabuConfig::default()),
        "rsdh" => Method::Rsdh,
        "srsdh" => Method::Srsdh(slice("srsdh")?),
        "msrsdh" => Method::Msrsdh(slice("msrsdh")?),
        other => return Err(CwcError::Validation(format!("unknown method {other:?}"))),
    };
    if let Some(b) = row.budget {
        if !(b.is_finite() && b > 0.0) {
            return Err(CwcError::Validation(format!("budget {b} must be positive")));
        }
    }
    Ok(Instance {
        params,
        method,
        label: label.to_string(),
        budget_secs: row.budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_rows_parse() {
        let text = "n,d,w,s,method,b,t\n10,4,4,30,tabu\n25,8,11,1702,srsdh,1\n26,8,8,763,msrsdh,2,50\n";
        let cat = parse_catalog(text.as_bytes(), "dev").unwrap();
        assert_eq!(cat.len(), 3);
        assert_eq!(cat[0].params, Params::new(10, 4, 4, 30).unwrap());
        assert_eq!(cat[0].method, Method::Tabu(TabuConfig::default()));
        assert_eq!(cat[1].method, Method::Srsdh(SliceConfig::new(1, 1000)));
        assert_eq!(cat[2].method, Method::Msrsdh(SliceConfig::new(2, 50)));
        assert_eq!(cat[0].name(), "dev-n10-d4-w4-s30-tabu");
    }

    #[test]
    fn budget_column() {
        let text = "n,d,w,s,method,b,t,budget\n10,4,4,30,tabu,,,12.5\n";
        let cat = parse_catalog(text.as_bytes(), "x").unwrap();
        assert_eq!(cat[0].budget_secs, Some(12.5));
    }

    #[test]
    fn odd_distance_rejected() {
        let text = "n,d,w,s,method,b,t\n10,4,4,30,tabu\n10,5,4,30,tabu\n";
        match parse_catalog(text.as_bytes(), "dev") {
            Err(CwcError::Validation(msg)) => {
                assert!(msg.contains("line 3"), "{msg}");
                assert!(msg.contains("even"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_error_has_row() {
        let text = "n,d,w,s,method,b,t\n10,4,4,30,tabu\n10,x,4,30,tabu\n";
        assert!(matches!(parse_catalog(text.as_bytes(), "dev"), Err(CwcError::Parse { line: 3, .. })));
    }

    #[test]
    fn sliced_needs_b() {
        let text = "n,d,w,s,method,b,t\n25,8,11,1702,srsdh\n";
        assert!(matches!(parse_catalog(text.as_bytes(), "x"), Err(CwcError::Validation(_))));
        let text = "n,d,w,s,method,b,t\n25,8,11,1702,anneal\n";
        assert!(matches!(parse_catalog(text.as_bytes(), "x"), Err(CwcError::Validation(_))));
    }
}
