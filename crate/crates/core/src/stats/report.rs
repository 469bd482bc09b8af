//! Turns result directories into comparison tables.
//!
//! Each input directory is one group (method); its label is the directory
//! name. Every `run_*.json` below it (one level of problem subdirectories
//! is searched) is one run record. Output, written to the report directory:
//!
//! * `runs.csv`: one row per run
//! * `descriptive.csv`: per group and problem, success count and train-error spread
//! * `tests.csv`: pairwise rank-sum (train error) and Fisher (success) p-values
//! * `curves.csv`: mean best-so-far training error by generation
//! * `summary.txt`

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{fisher_exact, sidak_threshold, wilcoxon_rank_sum};
use crate::error::{Error, Result};
use crate::evolution::RunRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TestKind {
    WilcoxonRankSum,
    FisherExact,
}

impl TestKind {
    pub fn name(self) -> &'static str {
        match self {
            TestKind::WilcoxonRankSum => "wilcoxon_rank_sum",
            TestKind::FisherExact => "fisher_exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub problem: String,
    pub group_a: String,
    pub group_b: String,
    pub test: TestKind,
    /// Final training errors for the rank-sum test; `[successes, failures]`
    /// for Fisher.
    pub data_a: Vec<f64>,
    pub data_b: Vec<f64>,
    pub p_value: f64,
    /// Šidák-corrected per-comparison level.
    pub alpha: f64,
    pub significant: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportSummary {
    pub groups: Vec<String>,
    pub problems: Vec<String>,
    pub comparisons: Vec<ComparisonResult>,
    pub family_confidence: f64,
    pub comparison_count: usize,
    /// Files that could not be read, with the reason.
    pub diagnostics: Vec<String>,
}

struct LoadedRun {
    file: PathBuf,
    record: RunRecord,
}

struct Group {
    label: String,
    /// Problem name to runs, in file order.
    runs: BTreeMap<String, Vec<LoadedRun>>,
}

fn run_files(dir: &Path, depth: usize, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            if depth > 0 {
                run_files(&path, depth - 1, out)?;
            }
        } else if path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("run_") && n.ends_with(".json"))
        {
            out.push(path);
        }
    }
    Ok(())
}

fn load_group(dir: &Path, diagnostics: &mut Vec<String>) -> Result<Group> {
    let label = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    let mut files = Vec::new();
    run_files(dir, 1, &mut files).map_err(|e| Error::io(dir, e))?;
    let mut runs: BTreeMap<String, Vec<LoadedRun>> = BTreeMap::new();
    for file in files {
        let parsed = fs::read_to_string(&file)
            .map_err(|e| e.to_string())
            .and_then(|text| serde_json::from_str::<RunRecord>(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(record) => runs
                .entry(record.problem.clone())
                .or_default()
                .push(LoadedRun { file, record }),
            Err(reason) => diagnostics.push(format!("{}: {reason}", file.display())),
        }
    }
    Ok(Group { label, runs })
}

/// Mean over runs of the best-so-far error per generation; runs that
/// stopped early hold their final value.
fn mean_curve(runs: &[LoadedRun]) -> Vec<f64> {
    let len = runs
        .iter()
        .map(|r| r.record.generations.len())
        .max()
        .unwrap_or(0);
    (0..len)
        .map(|g| {
            let sum: f64 = runs
                .iter()
                .filter_map(|r| {
                    let gens = &r.record.generations;
                    gens.get(g).or(gens.last()).map(|s| s.best_so_far as f64)
                })
                .sum();
            sum / runs.len() as f64
        })
        .collect()
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn write(path: PathBuf, text: String) -> Result<()> {
    fs::write(&path, text).map_err(|e| Error::io(path, e))
}

/// Aggregates `group_dirs` into `out_dir`.
///
/// `comparisons` is the Šidák family size; `None` means every pairwise
/// comparison actually made for one of the two tests (problems × pairs).
/// Unreadable run files are listed in the summary and skipped.
pub fn aggregate_report<P: AsRef<Path>>(
    group_dirs: &[P],
    family_confidence: f64,
    comparisons: Option<usize>,
    out_dir: &Path,
) -> Result<ReportSummary> {
    let mut diagnostics = Vec::new();
    let groups = group_dirs
        .iter()
        .map(|d| load_group(d.as_ref(), &mut diagnostics))
        .collect::<Result<Vec<_>>>()?;

    let mut problems: Vec<String> = Vec::new();
    for g in &groups {
        for p in g.runs.keys() {
            if !problems.contains(p) {
                problems.push(p.clone());
            }
        }
    }

    let mut pairs = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            pairs.push((i, j));
        }
    }
    let comparison_count = comparisons.unwrap_or((problems.len() * pairs.len()).max(1));
    let alpha = sidak_threshold(family_confidence, comparison_count);

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut runs_csv =
        String::from("group,problem,file,seed,train_error,test_error,train_success,test_success\n");
    let mut descriptive = String::from(
        "group,problem,runs,successes,train_error_min,train_error_median,train_error_mean,train_error_max\n",
    );
    let mut curves = String::from("group,problem,generation,mean_best_so_far\n");
    for g in &groups {
        for (problem, runs) in &g.runs {
            for r in runs {
                let rec = &r.record;
                let _ = writeln!(
                    runs_csv,
                    "{},{},{},{},{},{},{},{}",
                    g.label,
                    problem,
                    r.file.display(),
                    rec.seed,
                    rec.train_error,
                    rec.test_error,
                    rec.train_success,
                    rec.test_success
                );
            }
            let mut errors: Vec<f64> = runs.iter().map(|r| r.record.train_error as f64).collect();
            errors.sort_by(f64::total_cmp);
            let successes = runs.iter().filter(|r| r.record.test_success).count();
            let _ = writeln!(
                descriptive,
                "{},{},{},{},{},{},{},{}",
                g.label,
                problem,
                runs.len(),
                successes,
                errors[0],
                median(&errors),
                errors.iter().sum::<f64>() / errors.len() as f64,
                errors[errors.len() - 1]
            );
            for (generation, value) in mean_curve(runs).into_iter().enumerate() {
                let _ = writeln!(curves, "{},{},{},{}", g.label, problem, generation, value);
            }
        }
    }

    let mut results = Vec::new();
    for problem in &problems {
        for &(i, j) in &pairs {
            let (Some(ra), Some(rb)) = (groups[i].runs.get(problem), groups[j].runs.get(problem))
            else {
                continue;
            };
            let errors = |runs: &[LoadedRun]| -> Vec<f64> {
                runs.iter().map(|r| r.record.train_error as f64).collect()
            };
            let counts = |runs: &[LoadedRun]| -> [u64; 2] {
                let s = runs.iter().filter(|r| r.record.test_success).count() as u64;
                [s, runs.len() as u64 - s]
            };
            let (ea, eb) = (errors(ra), errors(rb));
            let p = wilcoxon_rank_sum(&ea, &eb);
            results.push(ComparisonResult {
                problem: problem.clone(),
                group_a: groups[i].label.clone(),
                group_b: groups[j].label.clone(),
                test: TestKind::WilcoxonRankSum,
                data_a: ea,
                data_b: eb,
                p_value: p,
                alpha,
                significant: p < alpha,
            });
            let (ca, cb) = (counts(ra), counts(rb));
            let p = fisher_exact([ca, cb]);
            results.push(ComparisonResult {
                problem: problem.clone(),
                group_a: groups[i].label.clone(),
                group_b: groups[j].label.clone(),
                test: TestKind::FisherExact,
                data_a: ca.iter().map(|&c| c as f64).collect(),
                data_b: cb.iter().map(|&c| c as f64).collect(),
                p_value: p,
                alpha,
                significant: p < alpha,
            });
        }
    }

    let mut tests_csv = String::from("problem,group_a,group_b,test,p_value,alpha,significant\n");
    for c in &results {
        let _ = writeln!(
            tests_csv,
            "{},{},{},{},{},{},{}",
            c.problem,
            c.group_a,
            c.group_b,
            c.test.name(),
            c.p_value,
            c.alpha,
            c.significant
        );
    }

    let summary = ReportSummary {
        groups: groups.iter().map(|g| g.label.clone()).collect(),
        problems,
        comparisons: results,
        family_confidence,
        comparison_count,
        diagnostics,
    };

    write(out_dir.join("runs.csv"), runs_csv)?;
    write(out_dir.join("descriptive.csv"), descriptive)?;
    write(out_dir.join("tests.csv"), tests_csv)?;
    write(out_dir.join("curves.csv"), curves)?;
    write(
        out_dir.join("summary.txt"),
        render_summary(&summary, &groups),
    )?;
    Ok(summary)
}

fn render_summary(summary: &ReportSummary, groups: &[Group]) -> String {
    let mut s = String::new();
    let alpha = sidak_threshold(summary.family_confidence, summary.comparison_count);
    let _ = writeln!(
        s,
        "family confidence {:.3}, {} comparisons, per-comparison confidence {:.2}%",
        summary.family_confidence,
        summary.comparison_count,
        100.0 * (1.0 - alpha)
    );
    for problem in &summary.problems {
        let _ = writeln!(s, "\n{problem}");
        for g in groups {
            if let Some(runs) = g.runs.get(problem) {
                let successes = runs.iter().filter(|r| r.record.test_success).count();
                let mean = runs
                    .iter()
                    .map(|r| r.record.train_error as f64)
                    .sum::<f64>()
                    / runs.len() as f64;
                let _ = writeln!(
                    s,
                    "  {:<16} success {:>3}/{:<3} mean train error {:.2}",
                    g.label,
                    successes,
                    runs.len(),
                    mean
                );
            }
        }
        for c in summary.comparisons.iter().filter(|c| &c.problem == problem) {
            let _ = writeln!(
                s,
                "  {} vs {} {}: p = {:.4}{}",
                c.group_a,
                c.group_b,
                c.test.name(),
                c.p_value,
                if c.significant { " *" } else { "" }
            );
        }
    }
    if !summary.diagnostics.is_empty() {
        let _ = writeln!(s, "\nskipped files:");
        for d in &summary.diagnostics {
            let _ = writeln!(s, "  {d}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::GenerationStats;
    use crate::push::PushProgram;

    fn record(problem: &str, train_error: u64, success: bool, curve: &[u64]) -> RunRecord {
        RunRecord {
            problem: problem.into(),
            seed: 1,
            generations: curve
                .iter()
                .enumerate()
                .map(|(g, &e)| GenerationStats {
                    generation: g,
                    best_error: e,
                    mean_error: e as f64,
                    best_length: 1,
                    best_so_far: e,
                })
                .collect(),
            solution: PushProgram::default(),
            simplified: PushProgram::default(),
            train_error,
            test_error: 0,
            train_success: train_error == 0,
            test_success: success,
        }
    }

    fn write_group(root: &Path, name: &str, runs: &[RunRecord]) -> PathBuf {
        let dir = root.join(name).join("00_MD");
        fs::create_dir_all(&dir).unwrap();
        for (i, r) in runs.iter().enumerate() {
            fs::write(
                dir.join(format!("run_{i:02}.json")),
                serde_json::to_string(r).unwrap(),
            )
            .unwrap();
        }
        root.join(name)
    }

    #[test]
    fn two_groups_are_compared() {
        let tmp = tempfile::tempdir().unwrap();
        let a: Vec<RunRecord> = (0..25).map(|_| record("MD", 0, true, &[4, 0])).collect();
        let b: Vec<RunRecord> = (0..25).map(|i| record("MD", 10 + i, false, &[9])).collect();
        let ga = write_group(tmp.path(), "arm", &a);
        let gb = write_group(tmp.path(), "plain", &b);
        fs::write(ga.join("00_MD").join("run_99.json"), "{ broken").unwrap();

        let out = tmp.path().join("report");
        let summary = aggregate_report(&[ga, gb], 0.95, None, &out).unwrap();
        assert_eq!(summary.problems, vec!["MD"]);
        assert_eq!(summary.comparison_count, 1);
        assert_eq!(summary.diagnostics.len(), 1);
        assert_eq!(summary.comparisons.len(), 2);
        let fisher = &summary.comparisons[1];
        assert_eq!(fisher.test, TestKind::FisherExact);
        assert_eq!(fisher.data_a, vec![25.0, 0.0]);
        assert_eq!(fisher.data_b, vec![0.0, 25.0]);
        assert!(fisher.p_value < 1e-12 && fisher.significant);
        assert!(summary.comparisons[0].significant);

        let curves = fs::read_to_string(out.join("curves.csv")).unwrap();
        assert!(curves.contains("arm,MD,0,4\narm,MD,1,0\n"));
        assert!(curves.contains("plain,MD,0,9\n"));
        for f in ["runs.csv", "descriptive.csv", "tests.csv", "summary.txt"] {
            assert!(out.join(f).exists());
        }
    }

    #[test]
    fn single_group_has_no_tests() {
        let tmp = tempfile::tempdir().unwrap();
        let runs = vec![
            record("SL", 3, false, &[5, 3]),
            record("SL", 1, false, &[2, 1]),
        ];
        let g = write_group(tmp.path(), "only", &runs);
        let summary = aggregate_report(&[g], 0.95, Some(6), &tmp.path().join("r")).unwrap();
        assert!(summary.comparisons.is_empty());
        let desc = fs::read_to_string(tmp.path().join("r/descriptive.csv")).unwrap();
        assert!(desc.contains("only,SL,2,0,1,2,2,3"));
    }

    #[test]
    fn curves_hold_the_last_value() {
        let runs: Vec<LoadedRun> = [
            record("MD", 0, true, &[6, 0]),
            record("MD", 2, false, &[4, 3, 2]),
        ]
        .into_iter()
        .map(|record| LoadedRun {
            file: PathBuf::new(),
            record,
        })
        .collect();
        assert_eq!(mean_curve(&runs), vec![5.0, 1.5, 1.0]);
    }
}
