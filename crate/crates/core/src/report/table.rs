use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::interface::{aggregate_interface, InterfaceMetric};
use crate::pipeline::PlatformResult;
use crate::readability::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Readability,
    Clarity,
    Specificity,
    Interface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Fixed(f64, usize),
    /// A count before and after review.
    Revised(u64, u64),
    /// Composite specificity score, trailing zeros trimmed.
    Composite(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Fixed(v, d) => format!("{v:.d$}"),
            Cell::Revised(a, b) if a == b => a.to_string(),
            Cell::Revised(a, b) => format!("{a}→{b}"),
            Cell::Composite(v) => format_composite(*v),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::from(*n),
            Cell::Fixed(..) | Cell::Composite(_) => {
                let rounded: f64 = self.render().parse().expect("rendered number parses");
                Value::from(rounded)
            }
            Cell::Revised(a, b) => {
                let mut m = Map::new();
                m.insert("auto".into(), Value::from(*a));
                m.insert("post_review".into(), Value::from(*b));
                Value::Object(m)
            }
        }
    }
}

/// "1.25", "1.5", "1", "2".
pub fn format_composite(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A rendered table: machine column keys, display titles and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub keys: Vec<&'static str>,
    pub titles: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.keys)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("| {} |\n", self.titles.join(" | "));
        s.push('|');
        for (i, _) in self.titles.iter().enumerate() {
            s.push_str(if i == 0 { "---|" } else { "---:|" });
        }
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .keys
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.to_string(), c.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("table rows serialise");
        s.push('\n');
        s
    }

    pub fn render(&self, format: TableFormat) -> Result<String> {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Markdown => Ok(self.to_markdown()),
            TableFormat::Json => Ok(self.to_json()),
        }
    }
}

fn readability_table(results: &[PlatformResult]) -> Table {
    let mut keys = vec!["platform"];
    keys.extend(Metric::ALL.map(Metric::key));
    let mut titles = vec!["Platform"];
    titles.extend(Metric::ALL.map(Metric::short_name));
    let rows = results
        .iter()
        .map(|r| {
            let mut row = vec![Cell::Text(r.platform.clone())];
            row.extend(Metric::ALL.map(|m| Cell::Fixed(r.readability.scores.get(m), 1)));
            row
        })
        .collect();
    Table { keys, titles, rows }
}

fn clarity_table(results: &[PlatformResult]) -> Table {
    Table {
        keys: vec![
            "platform",
            "word_count",
            "vague_term_count",
            "vague_term_density_pct",
            "unique_vague_terms",
        ],
        titles: vec![
            "Platform",
            "Word Count",
            "Vague Terms",
            "Density (%)",
            "Unique Terms",
        ],
        rows: results
            .iter()
            .map(|r| {
                let c = &r.clarity;
                vec![
                    Cell::Text(r.platform.clone()),
                    Cell::Int(c.word_count as u64),
                    Cell::Int(c.vague_count as u64),
                    Cell::Fixed(c.density_pct, 2),
                    Cell::Int(c.unique_terms as u64),
                ]
            })
            .collect(),
    }
}

fn specificity_table(results: &[PlatformResult]) -> Table {
    Table {
        keys: vec![
            "platform",
            "dt",
            "en",
            "re",
            "sg",
            "ss",
            "dt_s",
            "en_s",
            "r_s",
            "s_s",
            "specificity",
        ],
        titles: vec![
            "Platform",
            "DT",
            "EN",
            "RE",
            "SG",
            "SS",
            "DT_s",
            "EN_s",
            "R_s",
            "S_s",
            "Specificity",
        ],
        rows: results
            .iter()
            .map(|r| {
                let s = &r.specificity;
                let (a, b) = (&s.auto_counts, &s.post_review_counts);
                let rev = |x: usize, y: usize| Cell::Revised(x as u64, y as u64);
                let p = &s.post_review;
                vec![
                    Cell::Text(r.platform.clone()),
                    rev(a.dt, b.dt),
                    rev(a.en, b.en),
                    rev(a.re_explicit, b.re_explicit),
                    rev(a.sg, b.sg),
                    rev(a.ss, b.ss),
                    Cell::Int(p.dt_s.into()),
                    Cell::Int(p.en_s.into()),
                    Cell::Int(p.r_s.into()),
                    Cell::Int(p.s_s.into()),
                    Cell::Composite(p.composite),
                ]
            })
            .collect(),
    }
}

fn interface_table(results: &[PlatformResult]) -> Result<Table> {
    let assessments: Vec<_> = results.iter().filter_map(|r| r.interface.clone()).collect();
    if assessments.is_empty() {
        return Err(Error::NothingToRender);
    }
    let agg = aggregate_interface(&assessments)?;
    let mut keys = vec!["platform"];
    keys.extend(InterfaceMetric::ALL.map(InterfaceMetric::column));
    let mut titles = vec!["Platform"];
    titles.extend(InterfaceMetric::ALL.map(InterfaceMetric::title));
    let rows = agg
        .rows
        .into_iter()
        .map(|row| {
            let mut cells = vec![Cell::Text(row.platform)];
            cells.extend(row.scores.map(|v| Cell::Int(v.into())));
            cells
        })
        .collect();
    Ok(Table { keys, titles, rows })
}

/// Builds one cross-platform table. Rows follow the input order, which the
/// pipeline already sorts.
pub fn build_table(results: &[PlatformResult], kind: TableKind) -> Result<Table> {
    if results.is_empty() {
        return Err(Error::NothingToRender);
    }
    match kind {
        TableKind::Readability => Ok(readability_table(results)),
        TableKind::Clarity => Ok(clarity_table(results)),
        TableKind::Specificity => Ok(specificity_table(results)),
        TableKind::Interface => interface_table(results),
    }
}

pub fn render_table(
    results: &[PlatformResult],
    kind: TableKind,
    format: TableFormat,
) -> Result<String> {
    build_table(results, kind)?.render(format)
}
