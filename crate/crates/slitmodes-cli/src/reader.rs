//! Parser for the tool's own CSV output.

use std::collections::BTreeMap;

/// A parsed CSV record: raw cells plus the flattened metadata block.
#[derive(Debug, Clone)]
pub struct ParsedRecord {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// `schema_version`, `command`, `param:*`, `footer:*`, `provenance:*`.
    pub meta: BTreeMap<String, String>,
}

impl ParsedRecord {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell parsed as f64; `None` for empty cells or non-numeric text.
    pub fn float(&self, row: usize, column: &str) -> Option<f64> {
        let idx = self.column_index(column)?;
        self.rows.get(row)?.get(idx)?.parse().ok()
    }

    pub fn footer_float(&self, key: &str) -> Option<f64> {
        self.meta.get(&format!("footer:{key}"))?.parse().ok()
    }
}

/// Parses a CSV file produced by this tool. Rejects files without the
/// schema marker or with ragged rows.
pub fn parse_csv(text: &str) -> Result<ParsedRecord, String> {
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    let mut meta = BTreeMap::new();

    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| format!("line {}: malformed metadata", lineno + 1))?;
            meta.insert(key.to_string(), value.to_string());
            continue;
        }
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        match &columns {
            None => columns = Some(cells),
            Some(cols) => {
                if cells.len() != cols.len() {
                    return Err(format!(
                        "line {}: {} cells, expected {}",
                        lineno + 1,
                        cells.len(),
                        cols.len()
                    ));
                }
                rows.push(cells);
            }
        }
    }

    let columns = columns.ok_or("missing header row")?;
    if meta.get("schema_version").map(String::as_str) != Some("1") {
        return Err("missing or unsupported schema_version".to_string());
    }
    Ok(ParsedRecord {
        columns,
        rows,
        meta,
    })
}
