//! Machine-readable output records.
//!
//! Every emitted file carries a schema version, the command and its
//! parameters, a tabular payload, an optional footer of scalars, and
//! (unless suppressed) a provenance block. CSV puts the header row first so
//! the payload is directly loadable, with the metadata as trailing `# key=value`
//! comment lines; JSON is a single object. Floats are printed with 17
//! significant digits so round-tripping is exact.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: &str = "1";

/// Output format of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `{:.16e}` keeps 17 significant digits: enough for exact f64 round trips
/// and comfortably past the 15-digit floor the file contract promises.
pub fn fmt_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(i64),
    UInt(u64),
    Text(String),
    Empty,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Float(v) => fmt_float(*v),
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Text(s) => {
                debug_assert!(
                    !s.contains([',', '"', '\n']),
                    "text cell would need CSV quoting: {s:?}"
                );
                s.clone()
            }
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Float(v) => fmt_float(*v),
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Text(s) => json_string(s),
            Field::Empty => "null".to_string(),
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Run metadata; excluded from byte-identity comparisons via
/// `--no-provenance`.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub timestamp: String,
    pub tool_version: String,
}

impl Provenance {
    pub fn now(seed: Option<u64>) -> Self {
        Self {
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// A complete emitted record.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    pub footer: Vec<(String, Field)>,
    pub provenance: Option<Provenance>,
}

impl OutputRecord {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# schema_version={SCHEMA_VERSION}");
        let _ = writeln!(out, "# command={}", self.command);
        for (key, value) in &self.parameters {
            let _ = writeln!(out, "# param:{key}={value}");
        }
        for (key, value) in &self.footer {
            let _ = writeln!(out, "# footer:{key}={}", value.csv());
        }
        if let Some(p) = &self.provenance {
            let _ = writeln!(out, "# provenance:tool_version={}", p.tool_version);
            let _ = writeln!(out, "# provenance:timestamp={}", p.timestamp);
            if let Some(seed) = p.seed {
                let _ = writeln!(out, "# provenance:seed={seed}");
            }
        }
        out
    }

    fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(
            out,
            "  \"schema_version\": {},",
            json_string(SCHEMA_VERSION)
        );
        let _ = writeln!(out, "  \"command\": {},", json_string(&self.command));

        out.push_str("  \"parameters\": {");
        for (i, (key, value)) in self.parameters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\n    {}: {}", json_string(key), json_string(value));
        }
        if !self.parameters.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("},\n");

        let cols: Vec<String> = self.columns.iter().map(|c| json_string(c)).collect();
        let _ = writeln!(out, "  \"columns\": [{}],", cols.join(", "));

        out.push_str("  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let cells: Vec<String> = row.iter().map(Field::json).collect();
            let _ = write!(out, "\n    [{}]", cells.join(", "));
        }
        if !self.rows.is_empty() {
            out.push_str("\n  ");
        }
        out.push(']');

        if !self.footer.is_empty() {
            out.push_str(",\n  \"footer\": {");
            for (i, (key, value)) in self.footer.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\n    {}: {}", json_string(key), value.json());
            }
            out.push_str("\n  }");
        }

        if let Some(p) = &self.provenance {
            out.push_str(",\n  \"provenance\": {\n");
            let _ = writeln!(
                out,
                "    \"tool_version\": {},",
                json_string(&p.tool_version)
            );
            let _ = write!(out, "    \"timestamp\": {}", json_string(&p.timestamp));
            if let Some(seed) = p.seed {
                let _ = write!(out, ",\n    \"seed\": {seed}");
            }
            out.push_str("\n  }");
        }

        out.push_str("\n}\n");
        out
    }
}

/// Writes to stdout, or atomically to a file: the text lands in a temporary
/// sibling first and is renamed into place, so a failed run never leaves a
/// partial file behind.
pub fn write_output(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => write_atomic(path, text),
    }
}

fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?
        .to_string_lossy()
        .into_owned();
    let mut tmp: PathBuf = path.to_path_buf();
    tmp.set_file_name(format!(".{file_name}.tmp-{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> OutputRecord {
        OutputRecord {
            command: "demo".into(),
            parameters: vec![("alpha".into(), "0.5".into())],
            columns: vec!["x", "label"],
            rows: vec![
                vec![Field::Float(0.5), Field::Text("ok".into())],
                vec![Field::Float(-1.25e-7), Field::Empty],
            ],
            footer: vec![("total".into(), Field::UInt(2))],
            provenance: None,
        }
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.5, -1.0 / 3.0, 1e-300, 2.2250738585072014e-308, 987654.321] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let text = record().to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,label"));
        assert_eq!(lines.next(), Some("5.0000000000000000e-1,ok"));
        assert_eq!(lines.next(), Some("-1.2499999999999999e-7,"));
        assert!(text.contains("# schema_version=1"));
        assert!(text.contains("# param:alpha=0.5"));
        assert!(text.contains("# footer:total=2"));
    }

    #[test]
    fn json_is_escaped() {
        assert_eq!(json_string("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }
}
