//! CSV datasets: header row, one numeric column per schema feature, and a
//! label column holding class names.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use slrf_core::{Dataset, FeatureSchema, Sample};

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: missing column {column:?}")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: row {row}, column {column:?}: cannot parse {value:?} as a number")]
    Parse { path: PathBuf, row: usize, column: String, value: String },
    #[error("{path}: row {row}: unknown label {value:?} (expected one of {expected})")]
    Label { path: PathBuf, row: usize, value: String, expected: String },
    #[error("{path}: {source}")]
    Dataset { path: PathBuf, source: slrf_core::Error },
}

/// Reads `path` under `schema`. Extra columns are ignored; rows keep file order.
/// Row numbers in errors count the header as row 1.
pub fn load_dataset(path: &Path, schema: &FeatureSchema) -> Result<Dataset, CsvError> {
    let file = File::open(path).map_err(|source| CsvError::Io { path: path.to_owned(), source })?;
    read_dataset(file, schema, path)
}

pub fn read_dataset<R: Read>(reader: R, schema: &FeatureSchema, path: &Path) -> Result<Dataset, CsvError> {
    let csv_err = |source| CsvError::Csv { path: path.to_owned(), source };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CsvError::MissingColumn { path: path.to_owned(), column: name.to_owned() })
    };
    let feature_cols = schema.feature_names.iter().map(|f| column(f)).collect::<Result<Vec<_>, _>>()?;
    let label_col = column(&schema.label_column)?;

    let mut samples = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = i + 2;
        let features = feature_cols
            .iter()
            .zip(&schema.feature_names)
            .map(|(&c, name)| {
                let cell = record.get(c).unwrap_or("");
                cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CsvError::Parse {
                    path: path.to_owned(),
                    row,
                    column: name.clone(),
                    value: cell.to_owned(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let value = record.get(label_col).unwrap_or("");
        let label = schema.class_index(value).ok_or_else(|| CsvError::Label {
            path: path.to_owned(),
            row,
            value: value.to_owned(),
            expected: schema.class_names.join(" | "),
        })?;
        samples.push(Sample::new(features, label));
    }
    Dataset::new(schema.clone(), samples).map_err(|source| CsvError::Dataset { path: path.to_owned(), source })
}

/// Writes features in schema order followed by the label column.
/// Floats use the shortest representation that parses back exactly.
pub fn write_dataset<W: Write>(writer: W, dataset: &Dataset) -> csv::Result<()> {
    let schema = dataset.schema();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(schema.feature_names.iter().chain(std::iter::once(&schema.label_column)))?;
    for s in dataset.samples() {
        let mut row: Vec<String> = s.features.iter().map(f64::to_string).collect();
        row.push(schema.class_names[s.label].clone());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> FeatureSchema {
        FeatureSchema::new(vec!["a".into(), "b".into()], vec!["x".into(), "y".into()], "class").unwrap()
    }

    fn read(text: &str) -> Result<Dataset, CsvError> {
        read_dataset(text.as_bytes(), &schema(), Path::new("t.csv"))
    }

    #[test]
    fn reads_rows_in_order() {
        let d = read("b,class,a,extra\n2,y,1,q\n4.5,x,-3,q\n").unwrap();
        assert_eq!(d.samples(), &[Sample::new(vec![1.0, 2.0], 1), Sample::new(vec![-3.0, 4.5], 0)]);
    }

    #[test]
    fn header_only_is_empty() {
        assert_eq!(read("a,b,class\n").unwrap().len(), 0);
    }

    #[test]
    fn errors_carry_context() {
        let e = read("a,class\n1,x\n").unwrap_err();
        assert!(matches!(&e, CsvError::MissingColumn { column, .. } if column == "b"), "{e}");
        let e = read("a,b,class\n1,2,x\n1,oops,x\n").unwrap_err();
        assert!(matches!(&e, CsvError::Parse { row: 3, column, .. } if column == "b"), "{e}");
        let e = read("a,b,class\n1,2,porosity\n").unwrap_err();
        assert!(matches!(e, CsvError::Label { row: 2, .. }));
        assert!(e.to_string().contains("porosity"));
        assert!(matches!(read("a,b,class\n1,NaN,x\n"), Err(CsvError::Parse { .. })));
    }

    #[test]
    fn write_then_read_is_exact() {
        let d = read("a,b,class\n0.1,1e-7,x\n3.0000000000000004,-0,y\n").unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &d).unwrap();
        assert_eq!(read(std::str::from_utf8(&buf).unwrap()).unwrap(), d);
    }
}
