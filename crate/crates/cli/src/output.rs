use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Everything needed to rerun a command.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &'static str, params: Value, seed: Option<u64>) -> Self {
        Self {
            command,
            params,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

pub struct Report {
    /// File stem used when writing into an output directory.
    pub stem: String,
    pub manifest: Manifest,
    pub format: Format,
    pub result: Value,
    pub csv: String,
}

impl Report {
    fn body(&self) -> String {
        match self.format {
            Format::Json => {
                let doc = serde_json::json!({ "manifest": self.manifest, "result": self.result });
                let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }

    fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Where reports go: an explicit file, a directory, or stdout.
pub struct Sink {
    output: Option<PathBuf>,
    out_dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(output: Option<PathBuf>, out_dir: Option<PathBuf>) -> Self {
        Self { output, out_dir }
    }

    pub fn emit(&self, report: &Report) -> io::Result<()> {
        let path = match (&self.output, &self.out_dir) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => {
                fs::create_dir_all(dir)?;
                Some(dir.join(format!("{}.{}", report.stem, report.format.extension())))
            }
            (None, None) => None,
        };
        match path {
            Some(p) => {
                fs::write(&p, report.body())?;
                // CSV headers stay bare; the manifest travels alongside
                if report.format == Format::Csv {
                    fs::write(sidecar(&p), report.manifest_json())?;
                }
                eprintln!("wrote {}", p.display());
            }
            None => {
                io::stdout().write_all(report.body().as_bytes())?;
                if report.format == Format::Csv {
                    eprint!("# manifest {}", report.manifest_json());
                }
            }
        }
        Ok(())
    }
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

/// Shortest round-trip form, switching to exponent notation for tiny values.
pub fn csv_num(x: f64) -> String {
    format!("{x:?}")
}
