//! File formats, reports and the command-line front end.

pub mod cli;
pub mod fold;
pub mod report;
pub mod svg;

pub use fold::{export_fold, import_fold, patterns_isomorphic, FoldDocument};
pub use report::AnalysisReport;
pub use svg::export_svg;
