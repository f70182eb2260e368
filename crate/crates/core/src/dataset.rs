//! Dataset ingestion: CSV feature matrices with an integer label column, and
//! per-feature cost files.

use std::path::Path;

use crate::error::{Error, Result};

/// Which column of the CSV holds the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Index(usize),
}

/// CSV layout description.
#[derive(Debug, Clone, Copy)]
pub struct CsvSchema {
    pub header: bool,
    pub label: LabelColumn,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema { header: false, label: LabelColumn::Last }
    }
}

/// An in-memory dataset: N×K feature matrix (row major) and dense labels in
/// `0..M`. `label_map` records the original label value for each dense class
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<usize>,
    n: usize,
    k: usize,
    label_map: Vec<i64>,
}

impl Dataset {
    /// Builds a dataset from raw parts with already-dense labels in `0..m`.
    pub fn from_parts(x: Vec<f64>, k: usize, y: Vec<usize>, m: usize) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::Data("dataset is empty".into()));
        }
        if k == 0 || x.len() != n * k {
            return Err(Error::Data(format!(
                "feature matrix has {} entries, expected {n}x{k}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("feature matrix contains non-finite entries".into()));
        }
        if m == 0 || y.iter().any(|&l| l >= m) {
            return Err(Error::Data(format!("labels must lie in 0..{m}")));
        }
        Ok(Dataset { x, y, n, k, label_map: (0..m as i64).collect() })
    }

    pub fn n_examples(&self) -> usize {
        self.n
    }

    pub fn n_features(&self) -> usize {
        self.k
    }

    pub fn n_classes(&self) -> usize {
        self.label_map.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.k..(i + 1) * self.k]
    }

    pub fn label(&self, i: usize) -> usize {
        self.y[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.y
    }

    /// Original label value for each dense class index.
    pub fn label_map(&self) -> &[i64] {
        &self.label_map
    }

    /// Loads a CSV file. Labels are remapped to a dense `0..M` range by
    /// ascending original value; the mapping is retained on the dataset.
    pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
        Self::load_csv_impl(path.as_ref(), schema, None)
    }

    /// Loads a CSV using an existing label mapping (so train and test files
    /// agree on the class indices). Unseen label values are an error.
    pub fn load_csv_with_labels(
        path: impl AsRef<Path>,
        schema: &CsvSchema,
        label_map: &[i64],
    ) -> Result<Dataset> {
        Self::load_csv_impl(path.as_ref(), schema, Some(label_map))
    }

    fn load_csv_impl(path: &Path, schema: &CsvSchema, fixed_labels: Option<&[i64]>) -> Result<Dataset> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(schema.header)
            .flexible(false)
            .from_path(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;

        let mut raw_labels: Vec<i64> = Vec::new();
        let mut x: Vec<f64> = Vec::new();
        let mut k = 0usize;
        for (row_idx, record) in reader.records().enumerate() {
            // Human-facing row numbers count from 1 and include the header.
            let row_no = row_idx + 1 + schema.header as usize;
            let record = record.map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
            let width = record.len();
            if width < 2 {
                return Err(Error::Data(format!(
                    "{}: row {row_no} has {width} columns; need at least one feature and a label",
                    path.display()
                )));
            }
            let label_col = match schema.label {
                LabelColumn::Last => width - 1,
                LabelColumn::Index(c) => {
                    if c >= width {
                        return Err(Error::Data(format!(
                            "{}: label column {c} out of range (row {row_no} has {width} columns)",
                            path.display()
                        )));
                    }
                    c
                }
            };
            if raw_labels.is_empty() {
                k = width - 1;
            }
            for (col, field) in record.iter().enumerate() {
                if col == label_col {
                    let v: i64 = field.trim().parse().map_err(|_| {
                        Error::Data(format!(
                            "{}: row {row_no}, column {}: label {field:?} is not an integer",
                            path.display(),
                            col + 1
                        ))
                    })?;
                    raw_labels.push(v);
                } else {
                    let v: f64 = field.trim().parse().map_err(|_| {
                        Error::Data(format!(
                            "{}: row {row_no}, column {}: {field:?} is not numeric",
                            path.display(),
                            col + 1
                        ))
                    })?;
                    if !v.is_finite() {
                        return Err(Error::Data(format!(
                            "{}: row {row_no}, column {}: non-finite value",
                            path.display(),
                            col + 1
                        )));
                    }
                    x.push(v);
                }
            }
        }
        if raw_labels.is_empty() {
            return Err(Error::Data(format!("{}: no data rows", path.display())));
        }

        let label_map: Vec<i64> = match fixed_labels {
            Some(map) => map.to_vec(),
            None => {
                let mut values = raw_labels.clone();
                values.sort_unstable();
                values.dedup();
                values
            }
        };
        let y = raw_labels
            .iter()
            .map(|v| {
                label_map.binary_search(v).map_err(|_| {
                    Error::Data(format!("{}: label {v} not present in the label mapping", path.display()))
                })
            })
            .collect::<Result<Vec<usize>>>()?;

        let n = y.len();
        Ok(Dataset { x, y, n, k, label_map })
    }
}

/// Per-feature acquisition costs, `c[k] >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    pub c: Vec<f64>,
}

impl CostVector {
    pub fn uniform(k: usize) -> CostVector {
        CostVector { c: vec![1.0; k] }
    }

    /// Reads a costs file: one nonnegative decimal per line, line k giving
    /// the cost of feature k. Blank lines are ignored.
    pub fn load(path: impl AsRef<Path>) -> Result<CostVector> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut c = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Data(format!("{}: line {}: {line:?} is not a number", path.display(), lineno + 1))
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Data(format!(
                    "{}: line {}: costs must be finite and nonnegative",
                    path.display(),
                    lineno + 1
                )));
            }
            c.push(v);
        }
        if c.is_empty() {
            return Err(Error::Data(format!("{}: no costs found", path.display())));
        }
        Ok(CostVector { c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempdir::TempPath {
        tempdir::write(content)
    }

    // Minimal self-contained temp-file helper so the crate does not need a
    // tempfile dependency just for these tests.
    mod tempdir {
        use std::path::PathBuf;
        use std::sync::atomic::{AtomicU64, Ordering};

        pub struct TempPath(pub PathBuf);
        impl Drop for TempPath {
            fn drop(&mut self) {
                let _ = std::fs::remove_file(&self.0);
            }
        }
        impl AsRef<std::path::Path> for TempPath {
            fn as_ref(&self) -> &std::path::Path {
                &self.0
            }
        }

        static COUNTER: AtomicU64 = AtomicU64::new(0);

        pub fn write(content: &str) -> TempPath {
            let id = COUNTER.fetch_add(1, Ordering::Relaxed);
            let mut path = std::env::temp_dir();
            path.push(format!("ensprune-test-{}-{id}.csv", std::process::id()));
            let mut f = std::fs::File::create(&path).unwrap();
            super::Write::write_all(&mut f, content.as_bytes()).unwrap();
            TempPath(path)
        }
    }

    #[test]
    fn dense_label_remap() {
        let f = write_temp("1.0,2.0,5\n3.0,4.0,5\n5.0,6.0,9\n");
        let d = Dataset::load_csv(&f, &CsvSchema::default()).unwrap();
        assert_eq!((d.n_examples(), d.n_features(), d.n_classes()), (3, 2, 2));
        assert_eq!(d.label_map(), &[5, 9]);
        assert_eq!(d.labels(), &[0, 0, 1]);
        assert_eq!(d.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn missing_cell_names_row_and_column() {
        let f = write_temp("1.0,2.0,0\n1.0,,1\n");
        let err = Dataset::load_csv(&f, &CsvSchema::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains("column 2"), "{msg}");
    }

    #[test]
    fn ragged_rows_rejected() {
        let f = write_temp("1.0,2.0,0\n1.0,1\n");
        assert!(Dataset::load_csv(&f, &CsvSchema::default()).is_err());
    }

    #[test]
    fn header_row_skipped() {
        let f = write_temp("a,b,label\n1.0,2.0,0\n3.0,4.0,1\n");
        let d = Dataset::load_csv(&f, &CsvSchema { header: true, label: LabelColumn::Last }).unwrap();
        assert_eq!(d.n_examples(), 2);
    }

    #[test]
    fn label_column_position_configurable() {
        let f = write_temp("7,1.0,2.0\n8,3.0,4.0\n");
        let d = Dataset::load_csv(&f, &CsvSchema { header: false, label: LabelColumn::Index(0) }).unwrap();
        assert_eq!(d.label_map(), &[7, 8]);
        assert_eq!(d.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn empty_file_rejected() {
        let f = write_temp("");
        assert!(Dataset::load_csv(&f, &CsvSchema::default()).is_err());
    }

    #[test]
    fn shared_label_map_keeps_indices_aligned() {
        let train = write_temp("1.0,3\n2.0,7\n");
        let test = write_temp("0.5,7\n");
        let d_train = Dataset::load_csv(&train, &CsvSchema::default()).unwrap();
        let d_test =
            Dataset::load_csv_with_labels(&test, &CsvSchema::default(), d_train.label_map()).unwrap();
        assert_eq!(d_test.labels(), &[1]);

        let bad = write_temp("0.5,4\n");
        assert!(Dataset::load_csv_with_labels(&bad, &CsvSchema::default(), d_train.label_map()).is_err());
    }

    #[test]
    fn costs_file_round_trip_and_default() {
        let f = write_temp("1.5\n0\n2.25\n");
        let c = CostVector::load(&f).unwrap();
        assert_eq!(c.c, vec![1.5, 0.0, 2.25]);
        assert_eq!(CostVector::uniform(2).c, vec![1.0, 1.0]);

        let bad = write_temp("1.0\n-2.0\n");
        assert!(CostVector::load(&bad).is_err());
    }
}
