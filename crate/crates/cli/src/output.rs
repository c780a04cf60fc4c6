//! Artifact directory: `config.json`, `result.json` and CSV tables.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use kobalab::point::Point;
use serde::Serialize;

/// A CSV evidence table; complex coordinates take `_re`/`_im` column pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    /// Appends the columns `{prefix}{j}_re, {prefix}{j}_im` for `j = 1..=dim`.
    pub fn point_columns(mut self, prefix: &str, dim: usize) -> Self {
        for j in 1..=dim {
            self.header.push(format!("{prefix}{j}_re"));
            self.header.push(format!("{prefix}{j}_im"));
        }
        self
    }

    pub fn columns(mut self, names: &[&str]) -> Self {
        self.header.extend(names.iter().map(|h| h.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip form, with an exponent for very large or small values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn point_cells(z: &Point) -> Vec<String> {
    z.coords().iter().flat_map(|c| [num(c.re), num(c.im)]).collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes the bundle into `dir`, creating it if needed.
pub fn write_bundle<C: Serialize, R: Serialize>(dir: &Path, config: &C, result: &R, tables: &[Table]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_json(&dir.join("config.json"), config)?;
    write_json(&dir.join("result.json"), result)?;
    for t in tables {
        t.write(dir)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use kobalab::point::c;

    #[test]
    fn tables_quote_and_split_complex_columns() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("demo", &["label"]).point_columns("z", 2);
        let mut row = vec!["a, \"b\"".to_string()];
        row.extend(point_cells(&Point(vec![c(0.5, -1.0), c(0.0, 0.25)])));
        t.push(row);
        write_bundle(dir.path(), &1, &2, &[t]).unwrap();
        let text = fs::read_to_string(dir.path().join("demo.csv")).unwrap();
        assert_eq!(text, "label,z1_re,z1_im,z2_re,z2_im\n\"a, \"\"b\"\"\",0.5,-1.0,0.0,0.25\n");
        assert_eq!(fs::read_to_string(dir.path().join("result.json")).unwrap(), "2\n");
    }
}
