use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

/// Environment variable naming the default artifact directory.
pub const OUT_DIR_VAR: &str = "LLT_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Ndjson,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Ndjson => "ndjson",
        }
    }
}

/// Rendered artifact plus whether every assertion it carries passed.
pub struct Outcome {
    pub body: String,
    pub format: Format,
    pub passed: bool,
}

impl Outcome {
    pub fn json<T: Serialize>(v: &T, passed: bool) -> Result<Self, CliError> {
        let mut body = serde_json::to_string_pretty(v)?;
        body.push('\n');
        Ok(Outcome { body, format: Format::Json, passed })
    }

    pub fn lines(body: String, format: Format, passed: bool) -> Self {
        Outcome { body, format, passed }
    }
}

pub fn ndjson<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(&r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Where the artifact goes: an explicit path (relative paths resolve against the
/// environment directory when it is set), else `<dir>/<command>.<ext>`, else stdout.
pub fn destination(out: Option<&Path>, env_dir: Option<PathBuf>, command: &str, f: Format) -> Option<PathBuf> {
    match (out, env_dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(format!("{command}.{}", f.ext()))),
        (None, None) => None,
    }
}

pub fn emit(o: &Outcome, dest: Option<PathBuf>) -> Result<(), CliError> {
    match dest {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&p, &o.body)?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(o.body.as_bytes())?;
            h.flush()?;
        }
    }
    Ok(())
}
