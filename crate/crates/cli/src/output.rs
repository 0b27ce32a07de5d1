use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub const OUT_DIR_ENV: &str = "AWAVE_OUT_DIR";

/// Metadata embedded in every output: command, crate version, seed and the
/// verbatim argument list.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub flags: String,
}

impl Meta {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            flags: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        }
    }
}

/// Relative paths land under `$AWAVE_OUT_DIR` when it is set.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Numbers are written with 17 significant digits so they round-trip.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(meta: &Meta, extra: &[(&str, String)], header: &[&str]) -> Self {
        let mut text = String::new();
        writeln!(text, "# command: {}", meta.command).unwrap();
        writeln!(text, "# version: {}", meta.version).unwrap();
        writeln!(text, "# seed: {}", meta.seed).unwrap();
        writeln!(text, "# flags: {}", meta.flags).unwrap();
        for (k, v) in extra {
            writeln!(text, "# {k}: {v}").unwrap();
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Self {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[derive(Serialize)]
struct WithMeta<'a, T: Serialize> {
    meta: &'a Meta,
    #[serde(flatten)]
    body: &'a T,
}

pub fn json<T: Serialize>(meta: &Meta, body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&WithMeta { meta, body })?;
    s.push('\n');
    Ok(s)
}

/// Rows of a CSV in this schema: `#` lines skipped, header names returned.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .context("missing header row")?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, l)| {
            let row = l
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .with_context(|| format!("data row {}", i + 1))?;
            anyhow::ensure!(row.len() == header.len(), "data row {} has {} cells, header has {}", i + 1, row.len(), header.len());
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}
