//! Ingestion and validation of occupation-by-item score tables.
//!
//! The on-disk format is UTF-8 CSV with a header row: the first column is
//! the occupation code, the second the occupation title, every further
//! column one score item. Scores live on a 0–100 scale. Rows with missing
//! cells among the selected columns are dropped (listwise) and listed in
//! the [`LoadReport`]; out-of-range or unparseable cells reject the whole
//! file with the offending row and column named.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::statcore;

/// One scored occupation.
#[derive(Debug, Clone, PartialEq)]
pub struct Occupation {
    pub code: String,
    pub title: String,
}

/// Where an item was recorded in the source instrument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemSource {
    WorkContext,
    WorkActivities,
    Other,
}

/// What kind of response scale the item used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemMeasure {
    Frequency,
    Importance,
    Context,
}

/// Metadata for one item column. Inferred from the column name on load;
/// purely descriptive, the numeric pipeline never branches on it.
#[derive(Debug, Clone)]
pub struct ItemDescriptor {
    pub item_id: String,
    pub label: String,
    pub source: ItemSource,
    pub measure: ItemMeasure,
    /// Number of response options behind the 0–100 scoring (>= 2).
    pub option_count: usize,
}

impl ItemDescriptor {
    /// Infer metadata from a column name of the form
    /// `"Work Context - <label>"` or `"Work Activities - <label>"`.
    /// Anything else becomes `Other`/`Context` with the name as label.
    pub fn infer(item_id: &str) -> Self {
        let (source, measure, label) = if let Some(rest) = item_id.strip_prefix("Work Context - ") {
            (ItemSource::WorkContext, ItemMeasure::Context, rest)
        } else if let Some(rest) = item_id.strip_prefix("Work Activities - ") {
            (ItemSource::WorkActivities, ItemMeasure::Importance, rest)
        } else {
            (ItemSource::Other, ItemMeasure::Context, item_id)
        };
        ItemDescriptor {
            item_id: item_id.to_string(),
            label: label.to_string(),
            source,
            measure,
            option_count: 5,
        }
    }
}

/// Map a zero-based response option index onto the 0–100 score scale:
/// `100 * option_index / (option_count - 1)`. With five options this
/// yields 0, 25, 50, 75, 100.
pub fn map_option_scores(option_index: usize, option_count: usize) -> Result<f64> {
    if option_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "option mapping needs at least 2 options, got {option_count}"
        )));
    }
    if option_index >= option_count {
        return Err(Error::InvalidArgument(format!(
            "option index {option_index} out of range for {option_count} options"
        )));
    }
    Ok(100.0 * option_index as f64 / (option_count - 1) as f64)
}

/// Column-major numeric table: occupations as rows, named score columns.
/// Every value is finite and within [0, 100]; occupation codes are unique.
#[derive(Debug, Clone)]
pub struct Table {
    occupations: Vec<Occupation>,
    columns: Vec<String>,
    /// data[j] is column j, data[j][i] the score of occupation i.
    data: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(
        occupations: Vec<Occupation>,
        columns: Vec<String>,
        data: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if columns.len() != data.len() {
            return Err(Error::InvalidArgument(format!(
                "{} column names for {} columns of data",
                columns.len(),
                data.len()
            )));
        }
        let mut seen = HashSet::new();
        for occ in &occupations {
            if !seen.insert(occ.code.as_str()) {
                return Err(Error::DuplicateOccupation(occ.code.clone()));
            }
        }
        let mut names = HashSet::new();
        for name in &columns {
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate column name '{name}'"
                )));
            }
        }
        for (name, col) in columns.iter().zip(&data) {
            if col.len() != occupations.len() {
                return Err(Error::InvalidArgument(format!(
                    "column '{name}' has {} rows, expected {}",
                    col.len(),
                    occupations.len()
                )));
            }
            for (i, &v) in col.iter().enumerate() {
                if !v.is_finite() || !(0.0..=100.0).contains(&v) {
                    return Err(Error::OutOfRange {
                        row: i + 1,
                        code: occupations[i].code.clone(),
                        column: name.clone(),
                        value: v,
                    });
                }
            }
        }
        Ok(Table {
            occupations,
            columns,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.occupations.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn column_names(&self) -> &[String] {
        &self.columns
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|j| self.column(j))
    }

    /// Borrow a set of named columns in the given order, for handing to
    /// the statistics routines. Unknown names are reported as such.
    pub fn view<'a>(&'a self, names: &'a [String]) -> Result<Vec<(&'a str, &'a [f64])>> {
        names
            .iter()
            .map(|name| {
                self.column_by_name(name)
                    .map(|col| (name.as_str(), col))
                    .ok_or_else(|| Error::UnknownItem(name.clone()))
            })
            .collect()
    }

    /// Write the table in canonical CSV form. Floats are rendered with
    /// the shortest representation that parses back to the same bits, so
    /// a write/read cycle reproduces the matrix exactly.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["code".to_string(), "title".to_string()];
        header.extend(self.columns.iter().cloned());
        wtr.write_record(&header)?;
        for (i, occ) in self.occupations.iter().enumerate() {
            let mut record = vec![occ.code.clone(), occ.title.clone()];
            for col in &self.data {
                record.push(format!("{}", col[i]));
            }
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Config(format!("non-UTF-8 output: {e}")))
    }

    /// Read a canonical table back. Missing cells are not tolerated here;
    /// this entry point is for machine-written intermediates.
    pub fn read_csv<R: Read>(r: R, source_name: &str) -> Result<Table> {
        let (table, report) = parse_table(r, source_name, None)?;
        if let Some(dropped) = report.dropped.first() {
            return Err(Error::InvalidArgument(format!(
                "{source_name}: row {} has missing values ({})",
                dropped.row,
                dropped.missing.join(", ")
            )));
        }
        Ok(table)
    }
}

/// A cell considered missing: empty, or a recognised NA marker.
fn is_missing(cell: &str) -> bool {
    let trimmed = cell.trim();
    trimmed.is_empty() || matches!(trimmed.to_ascii_lowercase().as_str(), "na" | "n/a" | "nan")
}

/// One dropped input row and why.
#[derive(Debug, Clone)]
pub struct DroppedRow {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub code: String,
    pub missing: Vec<String>,
}

/// What the loader did: row counts plus an entry per dropped row.
#[derive(Debug, Clone)]
pub struct LoadReport {
    pub source: String,
    pub rows_read: usize,
    pub rows_kept: usize,
    pub item_columns: usize,
    pub dropped: Vec<DroppedRow>,
}

impl LoadReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "loaded {}: kept {} of {} rows, {} item columns\n",
            self.source, self.rows_kept, self.rows_read, self.item_columns
        );
        for d in &self.dropped {
            out.push_str(&format!(
                "dropped row {} ({}): missing {}\n",
                d.row,
                d.code,
                d.missing.join(", ")
            ));
        }
        out
    }
}

/// Which item columns to load. `None` loads every column after code and
/// title; a subset must name existing columns.
#[derive(Debug, Clone, Default)]
pub struct LoadSchema {
    pub item_subset: Option<Vec<String>>,
}

/// The validated table plus per-item metadata.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub table: Table,
    pub items: Vec<ItemDescriptor>,
}

impl Dataset {
    pub fn item_ids(&self) -> Vec<String> {
        self.items.iter().map(|d| d.item_id.clone()).collect()
    }
}

fn parse_table<R: Read>(
    r: R,
    source_name: &str,
    subset: Option<&[String]>,
) -> Result<(Table, LoadReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.len() < 3 {
        return Err(Error::Config(format!(
            "{source_name}: need at least code, title, and one item column"
        )));
    }
    let all_items: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
    let selected: Vec<(usize, String)> = match subset {
        None => all_items
            .iter()
            .enumerate()
            .map(|(k, name)| (k + 2, name.clone()))
            .collect(),
        Some(wanted) => wanted
            .iter()
            .map(|name| {
                all_items
                    .iter()
                    .position(|c| c == name)
                    .map(|k| (k + 2, name.clone()))
                    .ok_or_else(|| Error::MissingColumn(name.clone()))
            })
            .collect::<Result<_>>()?,
    };

    let mut occupations = Vec::new();
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); selected.len()];
    let mut dropped = Vec::new();
    let mut rows_read = 0usize;

    for (row_idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = row_idx + 1;
        rows_read += 1;
        let code = record.get(0).unwrap_or("").trim().to_string();
        if code.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{source_name}: row {row} has an empty occupation code"
            )));
        }
        let title = record.get(1).unwrap_or("").trim().to_string();

        let mut missing = Vec::new();
        let mut values = Vec::with_capacity(selected.len());
        for (field_idx, name) in &selected {
            let cell = record.get(*field_idx).unwrap_or("");
            if is_missing(cell) {
                missing.push(name.clone());
                values.push(f64::NAN);
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: name.clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() || !(0.0..=100.0).contains(&v) {
                return Err(Error::OutOfRange {
                    row,
                    code: code.clone(),
                    column: name.clone(),
                    value: v,
                });
            }
            values.push(v);
        }
        if !missing.is_empty() {
            dropped.push(DroppedRow { row, code, missing });
            continue;
        }
        occupations.push(Occupation { code, title });
        for (j, v) in values.into_iter().enumerate() {
            data[j].push(v);
        }
    }

    if occupations.is_empty() {
        return Err(Error::NotEnoughRows { needed: 1, got: 0 });
    }
    let rows_kept = occupations.len();
    let columns: Vec<String> = selected.into_iter().map(|(_, name)| name).collect();
    let item_columns = columns.len();
    let table = Table::new(occupations, columns, data)?;
    Ok((
        table,
        LoadReport {
            source: source_name.to_string(),
            rows_read,
            rows_kept,
            item_columns,
            dropped,
        },
    ))
}

/// Load a score table from a CSV file.
///
/// Rows with missing cells among the selected columns are dropped and
/// listed in the report; any out-of-range or unparseable cell rejects
/// the file. Item metadata is inferred from the column names.
pub fn load_matrix<P: AsRef<Path>>(path: P, schema: &LoadSchema) -> Result<(Dataset, LoadReport)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let source_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let (table, report) = parse_table(file, &source_name, schema.item_subset.as_deref())?;
    let items = table
        .column_names()
        .iter()
        .map(|id| ItemDescriptor::infer(id))
        .collect();
    Ok((Dataset { table, items }, report))
}

/// Per-column mean and sample standard deviation.
#[derive(Debug, Clone)]
pub struct ColumnSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone)]
pub struct DescriptiveStats {
    /// Number of rows the statistics are based on.
    pub n: usize,
    pub columns: Vec<ColumnSummary>,
}

/// Mean and sample standard deviation for the named columns.
/// Needs at least two rows; the column list must be non-empty.
pub fn descriptive_stats(table: &Table, columns: &[String]) -> Result<DescriptiveStats> {
    if columns.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    if table.n_rows() < 2 {
        return Err(Error::NotEnoughRows {
            needed: 2,
            got: table.n_rows(),
        });
    }
    let view = table.view(columns)?;
    let columns = view
        .into_iter()
        .map(|(name, col)| ColumnSummary {
            name: name.to_string(),
            mean: statcore::mean(col),
            sd: statcore::sample_sd(col),
        })
        .collect();
    Ok(DescriptiveStats {
        n: table.n_rows(),
        columns,
    })
}
