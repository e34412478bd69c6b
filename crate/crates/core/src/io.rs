//! File ingestion and emission: datasets, index lists, traces and reports.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::dataset::{Dataset, IndexSet, Label, LabelVector};
use crate::error::{Error, Result};
use crate::evaluation::{ConfigSummary, RunReport};
use crate::format::sig6;
use crate::rapid::RapidTrace;

/// Whether the first CSV record is a header.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeaderMode {
    /// Header iff no cell of the first record parses as a number.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Explicit mapping from raw label-column values to classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMapping {
    pub column: String,
    pub values: Vec<(String, Label)>,
}

impl LabelMapping {
    /// Parses `value=class` pairs such as `yes=out,no=in`.
    pub fn parse(column: &str, spec: &str) -> Result<Self> {
        let values = spec
            .split(',')
            .map(|pair| {
                let (raw, class) = pair.split_once('=').ok_or_else(|| {
                    Error::param("label-map", format!("expected value=in|out, got {pair:?}"))
                })?;
                Ok((raw.trim().to_string(), Label::from_str(class.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::param("label-map", "no mappings given"));
        }
        Ok(LabelMapping {
            column: column.to_string(),
            values,
        })
    }

    fn lookup(&self, raw: &str) -> Option<Label> {
        self.values.iter().find(|(v, _)| v == raw).map(|(_, l)| *l)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CsvOptions {
    pub header: HeaderMode,
    pub labels: Option<LabelMapping>,
}

/// Reads a comma-separated file of reals, optionally splitting off a label column.
pub fn load_csv(path: &Path, options: &CsvOptions) -> Result<(Dataset, Option<LabelVector>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut records = reader.records();
    let first = match records.next() {
        None => {
            return Err(Error::Format {
                path: path.into(),
                reason: "file is empty".into(),
            })
        }
        Some(r) => r.map_err(|e| csv_error(path, e))?,
    };
    let header_present = match options.header {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => first.iter().all(|cell| cell.parse::<f64>().is_err()),
    };

    let label_col = match &options.labels {
        None => None,
        Some(mapping) => {
            if !header_present {
                return Err(Error::Format {
                    path: path.into(),
                    reason: format!(
                        "label column {:?} named but the file has no header",
                        mapping.column
                    ),
                });
            }
            let pos = first
                .iter()
                .position(|h| h == mapping.column)
                .ok_or_else(|| Error::Format {
                    path: path.into(),
                    reason: format!("label column {:?} not found in header", mapping.column),
                })?;
            Some((pos, mapping))
        }
    };

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    let mut n = 0;
    let data_records = (!header_present)
        .then_some(Ok(first))
        .into_iter()
        .chain(records);
    for record in data_records {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(n + 1, |p| p.line() as usize);
        if width.is_some_and(|w| w != record.len()) {
            return Err(Error::Format {
                path: path.into(),
                reason: format!(
                    "row {line} has {} columns, expected {}",
                    record.len(),
                    width.unwrap()
                ),
            });
        }
        width = Some(record.len());
        for (col, cell) in record.iter().enumerate() {
            if let Some((label_pos, mapping)) = label_col {
                if col == label_pos {
                    let label = mapping.lookup(cell).ok_or_else(|| Error::Format {
                        path: path.into(),
                        reason: format!("row {line}: label value {cell:?} has no mapping"),
                    })?;
                    labels.push(label);
                    continue;
                }
            }
            let v: f64 = cell.parse().map_err(|_| Error::ParseCell {
                path: path.into(),
                row: line,
                column: col + 1,
                value: cell.to_string(),
            })?;
            values.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::Format {
            path: path.into(),
            reason: "no data rows".into(),
        });
    }
    let m = values.len() / n;
    let data = Dataset::new(values, n, m).map_err(|e| Error::Format {
        path: path.into(),
        reason: e.to_string(),
    })?;
    Ok((data, label_col.map(|_| LabelVector::new(labels))))
}

/// Column names of `path`, or `None` when the first record is data.
pub fn read_header(path: &Path, mode: HeaderMode) -> Result<Option<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let Some(first) = reader.records().next() else {
        return Ok(None);
    };
    let first = first.map_err(|e| csv_error(path, e))?;
    let present = match mode {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => first.iter().all(|cell| cell.parse::<f64>().is_err()),
    };
    Ok(present.then(|| first.iter().map(str::to_string).collect()))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            path: path.into(),
            reason: format!("{other:?}"),
        },
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// CSV with header `x1,...,xM[,label]`; reals use the shortest exact representation.
pub fn dataset_to_csv(data: &Dataset, labels: Option<&LabelVector>) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=data.m()).map(|k| format!("x{k}")).collect();
    out.push_str(&header.join(","));
    if labels.is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, row) in data.rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        if let Some(labels) = labels {
            write!(out, ",{}", labels[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset_csv(path: &Path, data: &Dataset, labels: Option<&LabelVector>) -> Result<()> {
    write_file(path, &dataset_to_csv(data, labels))
}

/// One-based indices, one per line.
pub fn write_indices(path: &Path, indices: &IndexSet) -> Result<()> {
    let text: String = indices
        .to_one_based()
        .iter()
        .map(|i| format!("{i}\n"))
        .collect();
    write_file(path, &text)
}

pub fn read_indices(path: &Path, n: usize) -> Result<IndexSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            l.trim().parse::<usize>().map_err(|_| Error::Format {
                path: path.into(),
                reason: format!("line {}: {:?} is not a positive integer", k + 1, l.trim()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    IndexSet::from_one_based(&parsed, n)
}

/// Trace as CSV: `iteration,candidate,theta_min,violator` with one-based indices.
pub fn trace_to_csv(trace: &RapidTrace) -> String {
    let mut out = String::from("iteration,candidate,theta_min,violator\n");
    for (k, step) in trace.steps.iter().enumerate() {
        let violator = step
            .violator
            .map(|v| (v + 1).to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            k + 1,
            step.candidate + 1,
            step.theta_min,
            violator
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::param(
                "format",
                format!("expected csv or json, got {other:?}"),
            )),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 11] = [
    "dataset", "method", "t_samp", "t_train", "t_inf", "size", "ratio", "mcc", "gamma", "p_out",
    "seed",
];

fn report_cells(r: &RunReport) -> [String; 11] {
    [
        r.dataset.clone(),
        r.method.clone(),
        sig6(r.t_samp),
        sig6(r.t_train),
        sig6(r.t_inf),
        r.size.to_string(),
        sig6(r.ratio),
        sig6(r.mcc),
        sig6(r.gamma),
        sig6(r.p_out),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
    ]
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn reports_to_csv(reports: &[RunReport]) -> String {
    let mut out = REPORT_COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        let cells: Vec<String> = report_cells(r).iter().map(|c| csv_field(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// A flat JSON object with keys in [`REPORT_COLUMNS`] order.
pub fn report_to_json(r: &RunReport) -> String {
    let cells = report_cells(r);
    let fields: Vec<String> = REPORT_COLUMNS
        .iter()
        .zip(cells)
        .enumerate()
        .map(|(k, (key, cell))| {
            let value = match k {
                0 | 1 => serde_json::to_string(&cell).expect("string serializes"),
                10 if cell.is_empty() => "null".into(),
                _ => cell,
            };
            format!("\"{key}\": {value}")
        })
        .collect();
    format!("{{{}}}", fields.join(", "))
}

pub fn reports_to_json(reports: &[RunReport]) -> String {
    let rows: Vec<String> = reports
        .iter()
        .map(|r| format!("  {}", report_to_json(r)))
        .collect();
    format!("[\n{}\n]\n", rows.join(",\n"))
}

/// Writes one report: a CSV with a header row, or a single flat JSON object.
pub fn write_report(report: &RunReport, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => write_file(path, &reports_to_csv(std::slice::from_ref(report))),
        ReportFormat::Json => write_file(path, &format!("{}\n", report_to_json(report))),
    }
}

/// Writes many reports: CSV rows, or a JSON array of flat objects.
pub fn write_reports(reports: &[RunReport], path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => write_file(path, &reports_to_csv(reports)),
        ReportFormat::Json => write_file(path, &reports_to_json(reports)),
    }
}

/// Per-configuration medians and means as CSV.
pub fn summaries_to_csv(summaries: &[ConfigSummary]) -> String {
    let mut out = String::from("dataset,method,runs");
    for stat in ["median", "mean"] {
        for col in ["t_samp", "t_train", "t_inf", "size", "ratio", "mcc"] {
            write!(out, ",{stat}_{col}").unwrap();
        }
    }
    out.push('\n');
    for s in summaries {
        write!(
            out,
            "{},{},{}",
            csv_field(&s.dataset),
            csv_field(&s.method),
            s.runs
        )
        .unwrap();
        for m in [&s.median, &s.mean] {
            for v in [m.t_samp, m.t_train, m.t_inf, m.size, m.ratio, m.mcc] {
                write!(out, ",{}", sig6(v)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}
