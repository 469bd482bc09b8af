//! Solving an ordered sequence of problems while accumulating a subprogram
//! archive, plus the one-off composite experiment.
//!
//! Result layout of [`run_sequence`]:
//!
//! ```text
//! out/spec.json
//! out/00_MD/run_00.csv run_00.json ... best.txt step.json
//! out/archive_00.json          archive after step 0
//! out/01_CSL/...
//! ```
//!
//! A step counts as done once its `step.json` exists; rerunning into the
//! same directory skips done steps and continues from the last snapshot.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{
    map_indices, pick_best_and_shortest, run_generation_loop, EvolutionConfig, RunRecord,
    UmadMutator,
};
use crate::knowledge::{even_partition, ArmConfig, ArmMutator, SubprogramArchive};
use crate::problem::{generate_cases, Problem, ProblemName};
use crate::push::PushProgram;
use crate::rng::derive_seed;

/// Sequence experiment settings. Also the JSON config file format; absent
/// fields take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequenceSpec {
    pub problems: Vec<ProblemName>,
    pub runs_per_problem: usize,
    pub n_parts: usize,
    pub evolution: EvolutionConfig,
    pub arm: ArmConfig,
    pub root_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    /// Keep quality counts across problems, and those stored in loaded
    /// archive files, instead of zeroing them.
    pub carry_quality: bool,
    /// `false` gives the plain PushGP baseline: no ARM, nothing archived.
    pub use_archive: bool,
}

impl Default for SequenceSpec {
    fn default() -> Self {
        SequenceSpec {
            problems: order1(),
            runs_per_problem: 25,
            n_parts: 5,
            evolution: EvolutionConfig::default(),
            arm: ArmConfig::default(),
            root_seed: 0,
            n_train: 100,
            n_test: 1000,
            carry_quality: false,
            use_archive: true,
        }
    }
}

impl SequenceSpec {
    /// Population 300, 100 generations, 5 runs per problem.
    pub fn desk_scale() -> Self {
        SequenceSpec {
            runs_per_problem: 5,
            evolution: EvolutionConfig::desk_scale(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() {
            return Err(Error::Config("problem list is empty".into()));
        }
        if self.runs_per_problem == 0 {
            return Err(Error::Config("runs_per_problem must be at least 1".into()));
        }
        if self.n_parts == 0 {
            return Err(Error::Config("n_parts must be at least 1".into()));
        }
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::Config("n_train and n_test must be positive".into()));
        }
        self.evolution.validate()?;
        self.arm.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// The case set for `name`. The same root seed gives the same cases in
    /// every experiment.
    pub fn problem(&self, name: ProblemName) -> Problem {
        generate_cases(name, self.n_train, self.n_test, self.root_seed)
            .with_step_limit(self.evolution.step_limit)
    }

    pub fn run_seed(&self, step: usize, run: usize) -> u64 {
        derive_seed(&[self.root_seed, step as u64, run as u64])
    }
}

/// MD, CSL, SL, MDSLEN, SLMD, SLSTR.
pub fn order1() -> Vec<ProblemName> {
    ProblemName::ALL.to_vec()
}

pub fn order2() -> Vec<ProblemName> {
    let mut order = order1();
    order.reverse();
    order
}

/// Parses a comma-separated problem list such as `MD,CSL,SL`.
pub fn parse_order(text: &str) -> Result<Vec<ProblemName>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvedProblem {
    pub problem: String,
    pub best_run: usize,
    /// Simplified program of the best run; the source of the archived parts.
    pub best: PushProgram,
    pub runs: Vec<RunRecord>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SequenceState {
    pub archive: SubprogramArchive,
    pub solved: Vec<SolvedProblem>,
}

/// Contents of `step.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub problem: String,
    pub runs: usize,
    pub best_run: usize,
    pub best: PushProgram,
    pub best_train_error: u64,
    pub best_test_error: u64,
    pub train_successes: usize,
    pub test_successes: usize,
    /// Archive size while this problem was being solved.
    pub working_archive_size: usize,
    pub archive_size: usize,
}

/// Runs `runs` independent runs against a frozen `archive` (quality as
/// given) and returns each record with the run's final quality counts.
fn run_batch(
    problem: &Problem,
    archive: &SubprogramArchive,
    spec: &SequenceSpec,
    step: usize,
    use_archive: bool,
) -> Vec<(RunRecord, Vec<u64>)> {
    map_indices(spec.runs_per_problem, spec.evolution.parallel, |run| {
        let config = EvolutionConfig {
            seed: spec.run_seed(step, run),
            ..spec.evolution.clone()
        };
        let out = if use_archive {
            let mut mutator = ArmMutator::new(archive.clone(), spec.arm);
            let record = run_generation_loop(problem, &config, &mut mutator);
            (record, mutator.into_archive().qualities())
        } else {
            (
                run_generation_loop(problem, &config, &mut UmadMutator),
                Vec::new(),
            )
        };
        info!(
            "{} run {run}: train error {}, test success {}",
            problem.name, out.0.train_error, out.0.test_success
        );
        out
    })
}

/// Solves `problem` as sequence step `step` and, unless this is the
/// baseline, appends the best solution's parts to the archive.
///
/// With no successful run the lowest-error program is extracted anyway.
pub fn solve_step(
    state: &mut SequenceState,
    step: usize,
    problem: &Problem,
    spec: &SequenceSpec,
) -> StepSummary {
    let working = if spec.carry_quality {
        state.archive.clone()
    } else {
        state.archive.with_reset_quality()
    };
    let results = run_batch(problem, &working, spec, step, spec.use_archive);

    if spec.carry_quality && spec.use_archive {
        for (_, qualities) in &results {
            for (k, (&after, &before)) in qualities.iter().zip(&working.qualities()).enumerate() {
                state.archive.add_quality(k, after - before);
            }
        }
    }

    let runs: Vec<RunRecord> = results.into_iter().map(|(r, _)| r).collect();
    let best_run = pick_best_and_shortest(&runs).expect("at least one run");
    let best = runs[best_run].simplified.clone();
    if spec.use_archive {
        state
            .archive
            .extend(even_partition(&best, spec.n_parts, &problem.name));
    }

    let summary = StepSummary {
        problem: problem.name.clone(),
        runs: runs.len(),
        best_run,
        best: best.clone(),
        best_train_error: runs[best_run].train_error,
        best_test_error: runs[best_run].test_error,
        train_successes: runs.iter().filter(|r| r.train_success).count(),
        test_successes: runs.iter().filter(|r| r.test_success).count(),
        working_archive_size: working.len(),
        archive_size: state.archive.len(),
    };
    state.solved.push(SolvedProblem {
        problem: problem.name.clone(),
        best_run,
        best,
        runs,
    });
    summary
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable value");
    write_text(path, &(text + "\n"))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Writes `run_XX.csv` and `run_XX.json` for every record into `dir`.
pub fn write_runs(dir: &Path, runs: &[RunRecord]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, run) in runs.iter().enumerate() {
        let csv = dir.join(format!("run_{i:02}.csv"));
        let file = fs::File::create(&csv).map_err(|e| Error::io(&csv, e))?;
        run.write_csv(BufWriter::new(file))
            .map_err(|e| Error::io(&csv, e))?;
        write_json(&dir.join(format!("run_{i:02}.json")), run)?;
    }
    Ok(())
}

pub fn read_runs(dir: &Path, count: usize) -> Result<Vec<RunRecord>> {
    (0..count)
        .map(|i| read_json(&dir.join(format!("run_{i:02}.json"))))
        .collect()
}

pub fn step_dir(out: &Path, step: usize, problem: ProblemName) -> PathBuf {
    out.join(format!("{step:02}_{}", problem.code()))
}

pub fn snapshot_path(out: &Path, step: usize) -> PathBuf {
    out.join(format!("archive_{step:02}.json"))
}

/// Solves `spec.problems` in order, writing results under `out`.
///
/// Fails if `out` already holds a different spec.
pub fn run_sequence(spec: &SequenceSpec, out: &Path) -> Result<SequenceState> {
    spec.validate()?;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let spec_path = out.join("spec.json");
    if spec_path.exists() {
        let existing: SequenceSpec = read_json(&spec_path)?;
        if &existing != spec {
            return Err(Error::Config(format!(
                "{} holds results for a different configuration",
                out.display()
            )));
        }
    } else {
        write_json(&spec_path, spec)?;
    }

    let mut state = SequenceState::default();
    for (step, &name) in spec.problems.iter().enumerate() {
        let dir = step_dir(out, step, name);
        let done = dir.join("step.json");
        let snapshot = snapshot_path(out, step);
        if done.exists() {
            let summary: StepSummary = read_json(&done)?;
            state.archive = SubprogramArchive::load(&snapshot, false)?;
            state.solved.push(SolvedProblem {
                problem: summary.problem,
                best_run: summary.best_run,
                best: summary.best,
                runs: read_runs(&dir, summary.runs)?,
            });
            info!(
                "step {step} ({name}) already done, archive size {}",
                state.archive.len()
            );
            continue;
        }

        info!(
            "step {step}: solving {name} with archive size {}",
            state.archive.len()
        );
        let problem = spec.problem(name);
        let summary = solve_step(&mut state, step, &problem, spec);
        let solved = state.solved.last().expect("step just solved");
        write_runs(&dir, &solved.runs)?;
        write_text(&dir.join("best.txt"), &format!("{}\n", solved.best))?;
        state.archive.save(&snapshot)?;
        write_json(&done, &summary)?;
    }
    Ok(state)
}

/// Runs `spec.runs_per_problem` PushGP+ARM runs on `problem` against the
/// union of the archive files (plain PushGP when `archives` is empty).
/// Stored quality counts are zeroed on load unless `spec.carry_quality`.
pub fn composite_experiment<P: AsRef<Path>>(
    archives: &[P],
    problem: &Problem,
    spec: &SequenceSpec,
) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let archive = SubprogramArchive::load_many(archives, !spec.carry_quality)?;
    info!(
        "{}: working archive of {} entries",
        problem.name,
        archive.len()
    );
    Ok(run_batch(problem, &archive, spec, 0, true)
        .into_iter()
        .map(|(r, _)| r)
        .collect())
}
