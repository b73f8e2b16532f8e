//! Cross-platform tables and figure data derived from pipeline results.

mod figure;
mod svg;
mod table;

pub use figure::{
    emit_figure_data, ClarityBubble, FigureData, FigureKind, ReadingTimeRow, WordsSentencesPoint,
};
pub use table::{build_table, format_composite, render_table, Cell, Table, TableFormat, TableKind};
