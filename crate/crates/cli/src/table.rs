//! CSV emission and grid re-ingestion.
//!
//! Numbers carry 12 significant digits. Grids are written together with a JSON
//! sidecar holding the axes and provenance, so reading both back reproduces
//! the in-memory grid exactly (cell positions come from indices, not from the
//! rounded coordinates).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use filippov_core::scan::{Axis, CellPayload, GridResult, Provenance};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `v` rounded to 12 significant digits, in plain notation unless very large
/// or very small.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor();
    if (-5.0..15.0).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// In-memory table: a header and rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
    }
}

/// Writes `contents` to `path`, or to stdout when no path is given.
pub fn emit(contents: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn emit_csv(table: &Table, path: Option<&Path>) -> CliResult<()> {
    emit(&table.to_csv(), path)
}

pub fn grid_table<C: CellPayload>(grid: &GridResult<C>) -> Table {
    let mut header = vec![
        "i",
        "j",
        grid.x_axis.name.as_str(),
        grid.y_axis.name.as_str(),
    ];
    header.extend(C::COLUMNS);
    let mut t = Table::new(&header);
    for (i, j, x, y, c) in grid.iter() {
        let mut row = vec![i.to_string(), j.to_string(), fmt_num(x), fmt_num(y)];
        row.extend(c.fields());
        t.push(row);
    }
    t
}

/// Axes and provenance of a grid, stored next to its CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub provenance: Provenance,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn grid_meta_json<C>(grid: &GridResult<C>) -> String {
    let meta = GridMeta {
        x_axis: grid.x_axis.clone(),
        y_axis: grid.y_axis.clone(),
        provenance: grid.provenance.clone(),
    };
    serde_json::to_string_pretty(&meta).expect("grid metadata serializes")
}

/// Writes the grid CSV to `path` (stdout if absent) and, with a path, the sidecar.
pub fn emit_grid<C: CellPayload>(grid: &GridResult<C>, path: Option<&Path>) -> CliResult<()> {
    emit_csv(&grid_table(grid), path)?;
    if let Some(p) = path {
        emit(&grid_meta_json(grid), Some(&sidecar_path(p)))?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Rebuilds a grid from CSV text and its sidecar JSON.
pub fn parse_grid<C: CellPayload>(csv_text: &str, meta_json: &str) -> CliResult<GridResult<C>> {
    let meta: GridMeta =
        serde_json::from_str(meta_json).map_err(|e| bad(format!("grid metadata: {e}")))?;
    let (nx, ny) = (meta.x_axis.count, meta.y_axis.count);
    let mut slots: Vec<Option<C>> = (0..nx * ny).map(|_| None).collect();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let width = 4 + C::COLUMNS.len();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(format!("grid CSV: {e}")))?;
        if record.len() != width {
            return Err(bad(format!(
                "grid CSV row {}: expected {width} fields",
                line + 1
            )));
        }
        let index = |k: usize| -> CliResult<usize> {
            record[k]
                .parse()
                .map_err(|_| bad(format!("grid CSV row {}: bad index", line + 1)))
        };
        let (i, j) = (index(0)?, index(1)?);
        if i >= nx || j >= ny {
            return Err(bad(format!(
                "grid CSV row {}: index out of range",
                line + 1
            )));
        }
        let fields: Vec<&str> = record.iter().skip(4).collect();
        slots[j * nx + i] = Some(C::parse(&fields)?);
    }
    let cells = slots
        .into_iter()
        .collect::<Option<Vec<C>>>()
        .ok_or_else(|| bad("grid CSV does not cover every cell"))?;
    Ok(GridResult {
        x_axis: meta.x_axis,
        y_axis: meta.y_axis,
        cells,
        provenance: meta.provenance,
    })
}

pub fn read_grid<C: CellPayload>(csv_path: &Path) -> CliResult<GridResult<C>> {
    let meta_path = sidecar_path(csv_path);
    let csv_text = fs::read_to_string(csv_path).map_err(|e| CliError::io(csv_path, e))?;
    let meta = fs::read_to_string(&meta_path).map_err(|e| CliError::io(&meta_path, e))?;
    parse_grid(&csv_text, &meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        assert_eq!(fmt_num(0.4005), "0.4005");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.0 / 3.0 * 1e4), "-6666.66666667");
        assert_eq!(fmt_num(1.5e-9), "1.5e-9");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["t", "x", "y", "regime"]);
        assert_eq!(t.to_csv(), "t,x,y,regime\n");
    }
}
