use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::svg;
use crate::error::{Error, Result};
use crate::pipeline::PlatformResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureKind {
    WordsVsSentences,
    ReadingTime,
    ClarityBubble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordsSentencesPoint {
    pub platform: String,
    pub words: usize,
    pub sentences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadingTimeRow {
    pub platform: String,
    pub words: usize,
    /// (words per minute, minutes) in ascending speed order.
    pub minutes: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarityBubble {
    pub platform: String,
    pub density_pct: f64,
    pub unique_terms: usize,
}

/// The quantities plotted by one figure, one record per platform.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    WordsVsSentences(Vec<WordsSentencesPoint>),
    ReadingTime(Vec<ReadingTimeRow>),
    ClarityBubble(Vec<ClarityBubble>),
}

fn speeds(results: &[PlatformResult]) -> Vec<f64> {
    // f64 is not Ord; speeds are whole or near-whole numbers, so key on bits.
    let mut seen = BTreeSet::new();
    let mut out: Vec<f64> = Vec::new();
    for g in results.iter().flat_map(|r| &r.fluency) {
        for wpm in [g.wpm_low, g.wpm_high] {
            if seen.insert(wpm.to_bits()) {
                out.push(wpm);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn emit_figure_data(results: &[PlatformResult], kind: FigureKind) -> Result<FigureData> {
    if results.is_empty() {
        return Err(Error::NothingToRender);
    }
    Ok(match kind {
        FigureKind::WordsVsSentences => FigureData::WordsVsSentences(
            results
                .iter()
                .map(|r| WordsSentencesPoint {
                    platform: r.platform.clone(),
                    words: r.doc_stats.word_count,
                    sentences: r.doc_stats.sentence_count,
                })
                .collect(),
        ),
        FigureKind::ReadingTime => {
            let wpms = speeds(results);
            FigureData::ReadingTime(
                results
                    .iter()
                    .map(|r| ReadingTimeRow {
                        platform: r.platform.clone(),
                        words: r.doc_stats.word_count,
                        minutes: wpms
                            .iter()
                            .map(|&w| (w, r.doc_stats.word_count as f64 / w))
                            .collect(),
                    })
                    .collect(),
            )
        }
        FigureKind::ClarityBubble => FigureData::ClarityBubble(
            results
                .iter()
                .map(|r| ClarityBubble {
                    platform: r.platform.clone(),
                    density_pct: r.clarity.density_pct,
                    unique_terms: r.clarity.unique_terms,
                })
                .collect(),
        ),
    })
}

fn wpm_label(w: f64) -> String {
    if w.fract() == 0.0 {
        format!("{w:.0}")
    } else {
        w.to_string()
    }
}

impl FigureData {
    fn columns_and_rows(&self) -> (Vec<String>, Vec<Vec<Value>>) {
        match self {
            FigureData::WordsVsSentences(pts) => (
                vec!["platform".into(), "words".into(), "sentences".into()],
                pts.iter()
                    .map(|p| {
                        vec![
                            p.platform.clone().into(),
                            p.words.into(),
                            p.sentences.into(),
                        ]
                    })
                    .collect(),
            ),
            FigureData::ReadingTime(rows) => {
                let mut cols = vec!["platform".to_string(), "words".to_string()];
                if let Some(first) = rows.first() {
                    cols.extend(
                        first
                            .minutes
                            .iter()
                            .map(|(w, _)| format!("minutes_at_{}_wpm", wpm_label(*w))),
                    );
                }
                let body = rows
                    .iter()
                    .map(|r| {
                        let mut v: Vec<Value> = vec![r.platform.clone().into(), r.words.into()];
                        v.extend(r.minutes.iter().map(|(_, m)| Value::from(*m)));
                        v
                    })
                    .collect();
                (cols, body)
            }
            FigureData::ClarityBubble(b) => (
                vec![
                    "platform".into(),
                    "density_pct".into(),
                    "unique_terms".into(),
                ],
                b.iter()
                    .map(|p| {
                        vec![
                            p.platform.clone().into(),
                            p.density_pct.into(),
                            p.unique_terms.into(),
                        ]
                    })
                    .collect(),
            ),
        }
    }

    pub fn to_json(&self) -> String {
        let (cols, rows) = self.columns_and_rows();
        let records: Vec<Value> = rows
            .into_iter()
            .map(|row| Value::Object(cols.iter().cloned().zip(row).collect::<Map<_, _>>()))
            .collect();
        let mut s = serde_json::to_string_pretty(&records).expect("figure data serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let (cols, rows) = self.columns_and_rows();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols)?;
        for row in rows {
            w.write_record(row.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_svg(&self) -> String {
        match self {
            FigureData::WordsVsSentences(pts) => svg::scatter(
                "Sentence count vs. word count",
                "Words",
                "Sentences",
                &pts.iter()
                    .map(|p| svg::Point {
                        label: p.platform.clone(),
                        x: p.words as f64,
                        y: p.sentences as f64,
                        size: None,
                    })
                    .collect::<Vec<_>>(),
            ),
            FigureData::ReadingTime(rows) => {
                let series: Vec<String> = rows
                    .first()
                    .map(|r| {
                        r.minutes
                            .iter()
                            .map(|(w, _)| format!("{} WPM", wpm_label(*w)))
                            .collect()
                    })
                    .unwrap_or_default();
                svg::grouped_bars(
                    "Estimated reading time",
                    "Minutes",
                    &series,
                    &rows
                        .iter()
                        .map(|r| {
                            (
                                r.platform.clone(),
                                r.minutes.iter().map(|(_, m)| *m).collect(),
                            )
                        })
                        .collect::<Vec<_>>(),
                )
            }
            FigureData::ClarityBubble(b) => svg::scatter(
                "Vague term density and diversity",
                "Platform",
                "Vague term density (%)",
                &b.iter()
                    .enumerate()
                    .map(|(i, p)| svg::Point {
                        label: p.platform.clone(),
                        x: i as f64 + 1.0,
                        y: p.density_pct,
                        size: Some(p.unique_terms as f64),
                    })
                    .collect::<Vec<_>>(),
            ),
        }
    }
}
