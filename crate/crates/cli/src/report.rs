//! Tabular results: a column table followed by a block of named scalars.
//!
//! CSV layout is the table (header row, one row per offset), one blank line,
//! then a `quantity,value` section. JSON carries the same cells under
//! `columns` and `scalars`. Numbers are written with 12 significant digits in
//! both formats; non-finite values become the strings `inf`, `-inf`, `nan`.

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Count(u64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Count(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Text("none".into()), Cell::Num)
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 {
        // Drop the sign of negative zero.
        format!("{:.11e}", 0.0)
    } else {
        format!("{x:.11e}")
    }
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Count(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = format_number(*x).parse().expect("formatted number parses");
                Value::from(rounded)
            }
            Cell::Num(x) => Value::from(format_number(*x)),
            Cell::Count(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Flag(b) => Value::from(*b),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Count(n) => Some(*n as f64),
            Cell::Text(s) => match s.as_str() {
                "inf" => Some(f64::INFINITY),
                "-inf" => Some(f64::NEG_INFINITY),
                "nan" => Some(f64::NAN),
                _ => None,
            },
            Cell::Flag(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub columns: Vec<Column>,
    pub scalars: Vec<(String, Cell)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    pub fn new(command: &str, scenario: &str) -> Self {
        Report {
            command: command.into(),
            scenario: scenario.into(),
            ..Default::default()
        }
    }

    pub fn column(&mut self, name: &str, cells: impl IntoIterator<Item = impl Into<Cell>>) {
        let cells: Vec<Cell> = cells.into_iter().map(Into::into).collect();
        self.columns.push(Column { name: name.into(), cells });
    }

    pub fn scalar(&mut self, name: &str, value: impl Into<Cell>) {
        self.scalars.push((name.into(), value.into()));
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.cells.len())
    }

    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let col = self.columns.iter().find(|c| c.name == name)?;
        col.cells.iter().map(Cell::as_number).collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv_section(
            self.columns.iter().map(|c| c.name.clone()).collect(),
            (0..self.rows()).map(|r| self.columns.iter().map(|c| c.cells[r].to_text()).collect()),
        );
        out.push('\n');
        let mut scalars = vec![("scenario".to_string(), self.scenario.clone())];
        scalars.extend(self.scalars.iter().map(|(n, v)| (n.clone(), v.to_text())));
        out.push_str(&csv_section(
            vec!["quantity".into(), "value".into()],
            scalars.into_iter().map(|(n, v)| vec![n, v]),
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut columns = Map::new();
        for c in &self.columns {
            columns.insert(c.name.clone(), Value::Array(c.cells.iter().map(Cell::to_json).collect()));
        }
        let mut scalars = Map::new();
        for (n, v) in &self.scalars {
            scalars.insert(n.clone(), v.to_json());
        }
        let mut root = Map::new();
        root.insert("command".into(), Value::from(self.command.as_str()));
        root.insert("scenario".into(), Value::from(self.scenario.as_str()));
        root.insert("columns".into(), Value::Object(columns));
        root.insert("scalars".into(), Value::Object(scalars));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json value serializes");
        s.push('\n');
        s
    }

    /// Reads either format back; used by `plot`.
    pub fn parse(text: &str, origin: &str) -> CliResult<Report> {
        let bad = |message: String| CliError::BadInput {
            path: origin.to_string(),
            message,
        };
        if text.trim_start().starts_with('{') {
            Self::parse_json(text).map_err(bad)
        } else {
            Self::parse_csv(text).map_err(bad)
        }
    }

    fn parse_json(text: &str) -> Result<Report, String> {
        let root: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let field = |key: &str| root.get(key).ok_or_else(|| format!("missing `{key}`"));
        let mut report = Report::new(
            field("command")?.as_str().unwrap_or_default(),
            field("scenario")?.as_str().unwrap_or_default(),
        );
        let columns = field("columns")?.as_object().ok_or("`columns` must be an object")?;
        for (name, values) in columns {
            let values = values.as_array().ok_or_else(|| format!("column `{name}` must be an array"))?;
            report.column(name, values.iter().map(json_cell));
        }
        if let Some(scalars) = root.get("scalars").and_then(Value::as_object) {
            for (name, v) in scalars {
                report.scalar(name, json_cell(v));
            }
        }
        if report.columns.windows(2).any(|w| w[0].cells.len() != w[1].cells.len()) {
            return Err("columns have unequal lengths".into());
        }
        Ok(report)
    }

    fn parse_csv(text: &str) -> Result<Report, String> {
        let (table, scalars) = text.split_once("\n\n").unwrap_or((text, ""));
        let mut reader = csv::ReaderBuilder::new().from_reader(table.as_bytes());
        let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let mut cols: Vec<Vec<Cell>> = vec![Vec::new(); header.len()];
        for record in reader.records() {
            let record = record.map_err(|e| e.to_string())?;
            for (col, field) in cols.iter_mut().zip(record.iter()) {
                col.push(text_cell(field));
            }
        }
        let mut report = Report::new("", "");
        for (name, cells) in header.iter().zip(cols) {
            report.column(name, cells);
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(scalars.as_bytes());
        for record in reader.records() {
            let record = record.map_err(|e| e.to_string())?;
            match (record.get(0), record.get(1)) {
                (Some("scenario"), Some(v)) => report.scenario = v.to_string(),
                (Some(n), Some(v)) => report.scalar(n, text_cell(v)),
                _ => return Err("malformed scalar row".into()),
            }
        }
        Ok(report)
    }
}

fn csv_section(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
}

fn text_cell(s: &str) -> Cell {
    match s {
        "true" => Cell::Flag(true),
        "false" => Cell::Flag(false),
        _ => s.parse::<f64>().map_or_else(|_| Cell::Text(s.to_string()), Cell::Num),
    }
}

fn json_cell(v: &Value) -> Cell {
    match v {
        Value::Number(n) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Bool(b) => Cell::Flag(*b),
        Value::String(s) => match s.as_str() {
            "inf" | "-inf" | "nan" => text_cell(s),
            _ => Cell::Text(s.clone()),
        },
        other => Cell::Text(other.to_string()),
    }
}
