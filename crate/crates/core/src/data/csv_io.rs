use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// Column layout of a descriptor CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CsvSchema {
    pub label_column: String,
    /// Optional per-row identifier column (kept as a string).
    pub id_column: Option<String>,
    /// Feature columns in order; `None` takes every other column.
    pub feature_columns: Option<Vec<String>>,
    /// Cell values mapped to +1.
    pub positive_labels: Vec<String>,
    /// Cell values mapped to -1.
    pub negative_labels: Vec<String>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            label_column: "label".into(),
            id_column: None,
            feature_columns: None,
            positive_labels: vec!["1".into()],
            negative_labels: vec!["0".into()],
        }
    }
}

impl CsvSchema {
    fn map_label(&self, cell: &str) -> Option<i8> {
        if self.positive_labels.iter().any(|l| l == cell) {
            Some(1)
        } else if self.negative_labels.iter().any(|l| l == cell) {
            Some(-1)
        } else {
            None
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    load_csv_reader(file, schema)
}

/// Parses UTF-8 comma-separated text with a header row. Lines starting with
/// `#` are comments. Row numbers in errors are 1-based file lines.
pub fn load_csv_reader<R: Read>(input: R, schema: &CsvSchema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(1, "<header>", e))?
        .iter()
        .map(str::to_string)
        .collect();
    let find = |name: &str| -> Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Csv {
            row: 1,
            column: name.to_string(),
            message: "column not found in header".into(),
        })
    };
    let label_idx = find(&schema.label_column)?;
    let id_idx = schema.id_column.as_deref().map(find).transpose()?;
    let feature_idx: Vec<usize> = match &schema.feature_columns {
        Some(cols) => cols.iter().map(|c| find(c)).collect::<Result<_>>()?,
        None => (0..header.len())
            .filter(|&i| i != label_idx && Some(i) != id_idx)
            .collect(),
    };
    if feature_idx.is_empty() {
        return Err(Error::Csv {
            row: 1,
            column: "<header>".into(),
            message: "no feature columns".into(),
        });
    }
    let names: Vec<String> = feature_idx.iter().map(|&i| header[i].clone()).collect();

    let mut samples = Vec::new();
    let mut labels = Vec::new();
    let mut ids = id_idx.map(|_| Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            csv_error(line, "<row>", e)
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let label_cell = &record[label_idx];
        let label = schema.map_label(label_cell).ok_or_else(|| Error::Csv {
            row: line,
            column: header[label_idx].clone(),
            message: format!("unknown label value {label_cell:?}"),
        })?;
        let mut row = Vec::with_capacity(feature_idx.len());
        for &c in &feature_idx {
            let cell = &record[c];
            let v: f64 = cell.parse().map_err(|_| Error::Csv {
                row: line,
                column: header[c].clone(),
                message: format!("cannot parse {cell:?} as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Csv {
                    row: line,
                    column: header[c].clone(),
                    message: format!("non-finite value {cell:?}"),
                });
            }
            row.push(v);
        }
        samples.push(row);
        labels.push(label);
        if let (Some(ids), Some(i)) = (ids.as_mut(), id_idx) {
            ids.push(record[i].to_string());
        }
    }
    Dataset::with_names(samples, labels, names, ids)
}

fn csv_error(row: usize, column: &str, e: csv::Error) -> Error {
    Error::Csv {
        row,
        column: column.to_string(),
        message: e.to_string(),
    }
}

/// Writes a dataset in the layout `load_csv` reads with `schema`
/// (`id` column first when present, features, then the label column).
pub fn write_csv<W: Write>(mut out: W, ds: &Dataset, schema: &CsvSchema, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let pos = schema.positive_labels.first().map_or("1", String::as_str);
    let neg = schema.negative_labels.first().map_or("0", String::as_str);
    let mut header = Vec::new();
    if ds.ids().is_some() {
        header.push(schema.id_column.clone().unwrap_or_else(|| "id".into()));
    }
    header.extend(ds.feature_names().iter().cloned());
    header.push(schema.label_column.clone());
    writeln!(out, "{}", header.join(","))?;
    for i in 0..ds.len() {
        let mut cells = Vec::with_capacity(header.len());
        if let Some(ids) = ds.ids() {
            cells.push(ids[i].clone());
        }
        cells.extend(ds.samples()[i].iter().map(|v| format!("{v:?}")));
        cells.push(if ds.labels()[i] == 1 { pos } else { neg }.to_string());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_rows() {
        let text = "a,b,label\n1,2,1\n3,4,0\n";
        let ds = load_csv_reader(text.as_bytes(), &CsvSchema::default()).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.samples(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(ds.labels(), &[1, -1]);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let text = "a,b,label\n1,2,1\n3,oops,0\n";
        match load_csv_reader(text.as_bytes(), &CsvSchema::default()) {
            Err(Error::Csv { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_columns_unknown_labels_and_ragged_rows() {
        let schema = CsvSchema::default();
        assert!(matches!(
            load_csv_reader("a,b,y\n1,2,1\n".as_bytes(), &schema),
            Err(Error::Csv { row: 1, .. })
        ));
        assert!(matches!(
            load_csv_reader("a,label\n1,2\n".as_bytes(), &schema),
            Err(Error::Csv { row: 2, .. })
        ));
        assert!(matches!(
            load_csv_reader("a,b,label\n1,2,1\n1,0\n".as_bytes(), &schema),
            Err(Error::Csv { .. })
        ));
        assert!(load_csv_reader("a,label\nNaN,1\n".as_bytes(), &schema).is_err());
    }

    #[test]
    fn schema_selects_columns_and_ids() {
        let schema = CsvSchema {
            label_column: "class".into(),
            id_column: Some("name".into()),
            feature_columns: Some(vec!["z".into(), "x".into()]),
            positive_labels: vec!["hemolytic".into()],
            negative_labels: vec!["non-hemolytic".into()],
        };
        let text = "# comment\nname,x,y,z,class\np1,1,2,3,hemolytic\np2,4,5,6,non-hemolytic\n";
        let ds = load_csv_reader(text.as_bytes(), &schema).unwrap();
        assert_eq!(ds.samples(), &[vec![3.0, 1.0], vec![6.0, 4.0]]);
        assert_eq!(ds.ids().unwrap(), &["p1".to_string(), "p2".to_string()]);
        assert_eq!(ds.feature_names(), &["z".to_string(), "x".to_string()]);
    }

    #[test]
    fn forty_descriptor_file() {
        let names: Vec<String> = (1..=40).map(|i| format!("desc{i}")).collect();
        let mut text = format!("{},label\n", names.join(","));
        for r in 0..3 {
            let row: Vec<String> = (0..40).map(|c| format!("{}", r * 40 + c)).collect();
            text.push_str(&format!("{},{}\n", row.join(","), r % 2));
        }
        let ds = load_csv_reader(text.as_bytes(), &CsvSchema::default()).unwrap();
        assert_eq!(ds.dim(), 40);
        assert_eq!(ds.len(), 3);
    }

    #[test]
    fn write_then_read() {
        let ds = Dataset::new(vec![vec![0.1, -2.0], vec![1.0 / 3.0, 5e-7]], vec![-1, 1]).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &ds, &CsvSchema::default(), &["seed 1".into()]).unwrap();
        let back = load_csv_reader(&buf[..], &CsvSchema::default()).unwrap();
        assert_eq!(back, ds);
    }
}
