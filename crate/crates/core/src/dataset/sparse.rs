//! `label index:value ...` text format, one instance per line, 1-based indices.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use ndarray::{Array1, Array2};

use super::{map_labels, DataSet};
use crate::error::{Result, XrmError};

struct Row {
    label: f64,
    entries: Vec<(usize, f64)>,
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<Row>> {
    let content = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut tokens = content.split_whitespace();
    let Some(label_tok) = tokens.next() else {
        return Ok(None);
    };
    let err = |message: String| XrmError::Parse {
        line: line_no,
        message,
    };
    let label: f64 = label_tok
        .parse()
        .map_err(|_| err(format!("invalid label {label_tok:?}")))?;
    if !label.is_finite() {
        return Err(err(format!("non-finite label {label_tok:?}")));
    }

    let mut entries = Vec::new();
    let mut last = 0usize;
    for tok in tokens {
        let (idx_s, val_s) = tok
            .split_once(':')
            .ok_or_else(|| err(format!("expected index:value, got {tok:?}")))?;
        let idx: usize = idx_s
            .parse()
            .map_err(|_| err(format!("invalid index {idx_s:?}")))?;
        if idx == 0 {
            return Err(err("indices are 1-based".into()));
        }
        if idx <= last {
            return Err(err(format!(
                "index {idx} is not strictly greater than previous index {last}"
            )));
        }
        let val: f64 = val_s
            .parse()
            .map_err(|_| err(format!("invalid value {val_s:?}")))?;
        if !val.is_finite() {
            return Err(err(format!("non-finite value {val_s:?}")));
        }
        last = idx;
        entries.push((idx - 1, val));
    }
    Ok(Some(Row { label, entries }))
}

/// Parses a whole dataset. Missing indices are zero; the feature count is the
/// largest index seen.
pub fn parse_sparse_text<R: BufRead>(reader: R) -> Result<DataSet> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        if let Some(row) = parse_line(&line?, i + 1)? {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(XrmError::EmptyInput);
    }
    let features = rows
        .iter()
        .filter_map(|r| r.entries.last().map(|&(j, _)| j + 1))
        .max()
        .unwrap_or(0);
    if features == 0 {
        return Err(XrmError::InvalidData("no feature indices present".into()));
    }

    let mut x = Array2::zeros((features, rows.len()));
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in &row.entries {
            x[[j, i]] = v;
        }
    }
    let raw: Vec<f64> = rows.iter().map(|r| r.label).collect();
    // Already-signed labels are kept even when only one class is present,
    // so single-class test files remain loadable.
    let labels = if raw.iter().all(|&l| l == 1.0 || l == -1.0) {
        raw
    } else {
        map_labels(&raw)?
    };
    DataSet::new(x, Array1::from(labels))
}

pub fn parse_sparse_str(text: &str) -> Result<DataSet> {
    parse_sparse_text(text.as_bytes())
}

pub fn read_sparse_file(path: impl AsRef<Path>) -> Result<DataSet> {
    let file = File::open(path.as_ref())?;
    parse_sparse_text(BufReader::new(file))
}

/// Writes nonzero entries only. If the last feature is zero everywhere, an
/// explicit `M:0` is written on the first line so the feature count survives
/// a round trip.
pub fn write_sparse_text<W: Write>(data: &DataSet, mut out: W) -> Result<()> {
    let m = data.feature_count();
    let last_feature_used = data.x().row(m - 1).iter().any(|&v| v != 0.0);
    for i in 0..data.instance_count() {
        let label = if data.y()[i] > 0.0 { "+1" } else { "-1" };
        write!(out, "{label}")?;
        for (j, &v) in data.instance(i).iter().enumerate() {
            if v != 0.0 || (i == 0 && j == m - 1 && !last_feature_used) {
                write!(out, " {}:{}", j + 1, v)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn single_line_fills_missing_with_zero() {
        let d = parse_sparse_str("+1 1:0.5 3:-2").unwrap();
        assert_eq!(d.feature_count(), 3);
        assert_eq!(d.x(), &array![[0.5], [0.0], [-2.0]]);
        assert_eq!(d.y(), &array![1.0]);
    }

    #[test]
    fn two_lines_build_columns() {
        let d = parse_sparse_str("-1 2:1\n+1 1:1 2:1\n").unwrap();
        assert_eq!(d.x(), &array![[0.0, 1.0], [1.0, 1.0]]);
        assert_eq!(d.y(), &array![-1.0, 1.0]);
    }

    #[test]
    fn malformed_value_reports_line() {
        match parse_sparse_str("1 1:abc") {
            Err(XrmError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_or_decreasing_index_rejected() {
        let text = "+1 1:1\n-1 2:1 2:3\n";
        assert!(matches!(
            parse_sparse_str(text),
            Err(XrmError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_sparse_str("+1 3:1 1:1"),
            Err(XrmError::Parse { line: 1, .. })
        ));
        assert!(parse_sparse_str("+1 0:1").is_err());
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(parse_sparse_str(""), Err(XrmError::EmptyInput)));
        assert!(matches!(
            parse_sparse_str("\n  \n"),
            Err(XrmError::EmptyInput)
        ));
    }

    #[test]
    fn blank_lines_and_comments_skipped_but_counted() {
        let d = parse_sparse_str("\n+1 1:2 # note\n0 1:1\n").unwrap();
        assert_eq!(d.instance_count(), 2);
        assert_eq!(d.y(), &array![1.0, -1.0]);
        assert!(matches!(
            parse_sparse_str("\n\n+1 1:x"),
            Err(XrmError::Parse { line: 3, .. })
        ));
    }

    fn dataset_strategy() -> impl Strategy<Value = DataSet> {
        (1usize..6, 1usize..8).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(prop_oneof![Just(0.0), -1e3f64..1e3], m * n),
                prop::collection::vec(prop::bool::ANY, n),
            )
                .prop_map(move |(vals, labels)| {
                    let x = Array2::from_shape_vec((m, n), vals).unwrap();
                    let y = labels.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
                    DataSet::new(x, y).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(d in dataset_strategy()) {
            let mut buf = Vec::new();
            write_sparse_text(&d, &mut buf).unwrap();
            let back = parse_sparse_text(buf.as_slice()).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
