//! Table rendering as commented CSV or as a JSON document.

use std::fmt::Write as _;

use crate::config::Format;

/// Numeric table in long format, one row per (s, t) point.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Rows whose `s` column equals `s`.
    pub fn rows_for(&self, s: f64) -> Vec<&[f64]> {
        self.rows.iter().filter(|r| r[0] == s).map(|r| r.as_slice()).collect()
    }
}

pub fn header_lines(command: &str, config: &serde_json::Value) -> Vec<String> {
    vec![
        format!("qbm-ring {}", env!("CARGO_PKG_VERSION")),
        format!("command: {command}"),
        format!("config: {config}"),
    ]
}

fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn render_csv(command: &str, config: &serde_json::Value, table: &Table) -> String {
    let mut out = String::new();
    for line in header_lines(command, config) {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn render_json(command: &str, config: &serde_json::Value, table: &Table) -> String {
    let doc = serde_json::json!({
        "tool": "qbm-ring",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "columns": table.columns,
        "rows": table.rows,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).unwrap_or_default())
}

pub fn render(format: Format, command: &str, config: &serde_json::Value, table: &Table) -> String {
    match format {
        Format::Csv => render_csv(command, config, table),
        Format::Json => render_json(command, config, table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["s", "t"]);
        t.rows.push(vec![1.2, 0.1]);
        let text = render_csv("gfun", &serde_json::json!({"mu": 1e-8}), &t);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# qbm-ring "));
        assert_eq!(lines[3], "s,t");
        assert_eq!(lines[4], "1.2000000000000000e0,1.0000000000000001e-1");
    }
}
