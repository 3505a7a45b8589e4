//! CSV and JSON emission. Every file starts with the full job configuration,
//! the artifact version and the working precision.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::Value;

use crate::config::{Format, JobConfig};
use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One rectangular table with its own metadata.
#[derive(Clone, Debug)]
pub struct Table {
    /// File-name suffix when several tables go to separate files.
    pub suffix: String,
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<String>,
    /// Cells already rendered as decimal strings.
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(suffix: impl Into<String>, columns: &[&str]) -> Self {
        Table { suffix: suffix.into(), meta: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(suffix: impl Into<String>, columns: Vec<String>) -> Self {
        Table { suffix: suffix.into(), meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) -> CliResult<()> {
        self.meta.push((key.to_string(), serde_json::to_value(value)?));
        Ok(())
    }
}

/// `digits` significant digits in scientific notation, or `nan`/`inf`.
pub fn fmt_f64(v: f64, digits: usize) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_finite() {
        format!("{:.*e}", digits.saturating_sub(1), v)
    } else {
        format!("{v}")
    }
}

fn header_lines(cfg: &JobConfig, table: &Table) -> CliResult<Vec<String>> {
    let mut lines = vec![
        format!("# betaedge {VERSION}"),
        format!("# config: {}", serde_json::to_string(cfg)?),
        format!("# precision_bits: {}", cfg.precision_bits),
    ];
    for (k, v) in &table.meta {
        lines.push(format!("# {k}: {}", serde_json::to_string(v)?));
    }
    Ok(lines)
}

fn write_csv(w: &mut dyn Write, cfg: &JobConfig, table: &Table) -> CliResult<()> {
    for line in header_lines(cfg, table)? {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn json_cell(s: &str) -> CliResult<Box<RawValue>> {
    // Keep every digit: finite numbers go out verbatim, anything else as a string.
    if s.parse::<f64>().is_ok_and(f64::is_finite) && !s.starts_with('+') {
        if let Ok(raw) = RawValue::from_string(s.to_string()) {
            return Ok(raw);
        }
    }
    Ok(RawValue::from_string(serde_json::to_string(s)?)?)
}

#[derive(Serialize)]
struct JsonTable<'a> {
    suffix: &'a str,
    meta: serde_json::Map<String, Value>,
    columns: &'a [String],
    rows: Vec<Vec<Box<RawValue>>>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    artifact: &'static str,
    version: &'static str,
    precision_bits: u32,
    config: &'a JobConfig,
    tables: Vec<JsonTable<'a>>,
}

fn write_json(w: &mut dyn Write, cfg: &JobConfig, tables: &[&Table]) -> CliResult<()> {
    let tables = tables
        .iter()
        .map(|t| {
            Ok(JsonTable {
                suffix: &t.suffix,
                meta: t.meta.iter().cloned().collect(),
                columns: &t.columns,
                rows: t.rows.iter().map(|r| r.iter().map(|c| json_cell(c)).collect::<CliResult<_>>()).collect::<CliResult<_>>()?,
            })
        })
        .collect::<CliResult<_>>()?;
    let doc = JsonDoc { artifact: "betaedge", version: VERSION, precision_bits: cfg.precision_bits, config: cfg, tables };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)?;
    Ok(())
}

fn write_one(w: &mut dyn Write, cfg: &JobConfig, tables: &[&Table]) -> CliResult<()> {
    match cfg.format {
        Format::Json => write_json(w, cfg, tables),
        Format::Csv => {
            for (k, t) in tables.iter().enumerate() {
                if k > 0 {
                    writeln!(w)?;
                }
                write_csv(w, cfg, t)?;
            }
            Ok(())
        }
    }
}

/// `<stem>_<suffix>.<ext>` next to `path`.
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

/// Standard output without `--out`; one file, or one file per table, with it.
pub fn emit(cfg: &JobConfig, tables: &[Table]) -> CliResult<Vec<PathBuf>> {
    let refs: Vec<&Table> = tables.iter().collect();
    match &cfg.out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_one(&mut lock, cfg, &refs)?;
            Ok(Vec::new())
        }
        Some(path) if tables.len() == 1 => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_one(&mut f, cfg, &refs)?;
            f.flush()?;
            Ok(vec![path.clone()])
        }
        Some(path) => tables
            .iter()
            .map(|t| {
                let p = suffixed(path, &t.suffix);
                let mut f = std::io::BufWriter::new(std::fs::File::create(&p)?);
                write_one(&mut f, cfg, &[t])?;
                f.flush()?;
                Ok(p)
            })
            .collect(),
    }
}
