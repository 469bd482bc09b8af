//! Two-sided Wilcoxon rank-sum and Fisher exact tests, Šidák correction and
//! aggregation of run results into comparison tables.

mod hypothesis;
mod report;

pub use hypothesis::{fisher_exact, sidak_threshold, wilcoxon_rank_sum, EXACT_WILCOXON_MAX_N};
pub use report::{aggregate_report, ComparisonResult, ReportSummary, TestKind};
