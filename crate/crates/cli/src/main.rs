use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use kdps::evolution::{pick_best_and_shortest, simplify};
use kdps::knowledge::{even_partition, SubprogramArchive};
use kdps::problem::{evaluate, write_case_file, ProblemName, Split};
use kdps::push::PushProgram;
use kdps::rng;
use kdps::runner::{
    composite_experiment, order1, order2, parse_order, run_sequence, write_runs, SequenceSpec,
};
use kdps::stats::aggregate_report;

#[derive(Parser)]
#[command(name = "kdps", version, about = "PushGP with subprogram archives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by the evolutionary commands.
#[derive(Args)]
struct SpecArgs {
    /// JSON file with sequence, evolution and ARM settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Population 300, 100 generations, 5 runs.
    #[arg(long)]
    desk_scale: bool,
    #[arg(long)]
    runs: Option<usize>,
    /// Root seed for case generation and run seeds.
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate on all cores (results are unchanged).
    #[arg(long)]
    parallel: bool,
}

impl SpecArgs {
    fn spec(&self) -> Result<SequenceSpec> {
        let mut spec = match (&self.config, self.desk_scale) {
            (Some(_), true) => bail!("--config and --desk-scale are mutually exclusive"),
            (Some(path), false) => SequenceSpec::load(path)?,
            (None, true) => SequenceSpec::desk_scale(),
            (None, false) => SequenceSpec::default(),
        };
        if let Some(runs) = self.runs {
            spec.runs_per_problem = runs;
        }
        if let Some(seed) = self.seed {
            spec.root_seed = seed;
        }
        spec.evolution.parallel |= self.parallel;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem, optionally with archives from earlier problems.
    Solve {
        problem: ProblemName,
        /// Archive file; repeat to use the union of several.
        #[arg(long = "archive")]
        archives: Vec<PathBuf>,
        #[arg(long, default_value = "results/solve")]
        out: PathBuf,
        /// Keep the quality counts stored in the archive files.
        #[arg(long)]
        keep_quality: bool,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Solve a problem sequence, accumulating the archive, next to a plain
    /// PushGP baseline, and write a comparison report.
    Kdps {
        /// `1`, `2` or a comma-separated problem list.
        #[arg(long, default_value = "1")]
        order: String,
        #[arg(long, default_value = "results/kdps")]
        out: PathBuf,
        /// Skip the plain PushGP baseline.
        #[arg(long)]
        no_baseline: bool,
        /// Keep quality counts from one problem to the next.
        #[arg(long)]
        carry_quality: bool,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Split a solution into subprograms and print them as an archive.
    Extract {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 5)]
        parts: usize,
        /// Source problem tag for the entries.
        #[arg(long)]
        problem: ProblemName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove atoms from a solution without changing its training errors.
    Simplify {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 5000)]
        steps: usize,
        #[arg(long)]
        problem: ProblemName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare result directories (one per method).
    Report {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
        #[arg(long, default_value = "results/report")]
        out: PathBuf,
        #[arg(long, default_value_t = 0.95)]
        family_confidence: f64,
        /// Number of comparisons for the Šidák correction.
        #[arg(long)]
        comparisons: Option<usize>,
    },
    /// Write a problem's train and test cases as tab-separated files.
    Cases {
        problem: ProblemName,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n_train: usize,
        #[arg(long, default_value_t = 1000)]
        n_test: usize,
    },
}

fn read_program(path: &Path) -> Result<PushProgram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing program in {}", path.display()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn solve(
    problem: ProblemName,
    archives: &[PathBuf],
    out: &Path,
    spec: &SequenceSpec,
) -> Result<()> {
    let problem = spec.problem(problem);
    let runs = composite_experiment(archives, &problem, spec)?;
    write_runs(out, &runs)?;
    let best = &runs[pick_best_and_shortest(&runs).expect("at least one run")];
    fs::write(out.join("best.txt"), format!("{}\n", best.simplified))?;
    let archive: SubprogramArchive = even_partition(&best.simplified, spec.n_parts, &problem.name)
        .into_iter()
        .collect();
    archive.save(&out.join("archive.json"))?;
    let successes = runs.iter().filter(|r| r.test_success).count();
    println!(
        "{}: {successes}/{} runs generalized; best train error {}, test error {}, length {}",
        problem.name,
        runs.len(),
        best.train_error,
        best.test_error,
        best.simplified.len()
    );
    println!("results in {}", out.display());
    Ok(())
}

fn kdps(
    order: &str,
    out: &Path,
    no_baseline: bool,
    carry_quality: bool,
    base: SequenceSpec,
) -> Result<()> {
    let problems = match order {
        "1" => order1(),
        "2" => order2(),
        list => parse_order(list)?,
    };
    let spec = SequenceSpec {
        problems,
        carry_quality,
        ..base
    };
    spec.validate()?;

    let arm_dir = out.join("ep_arm");
    let state = run_sequence(&spec, &arm_dir)?;
    for solved in &state.solved {
        let successes = solved.runs.iter().filter(|r| r.test_success).count();
        println!(
            "{:<7} {successes}/{} runs generalized",
            solved.problem,
            solved.runs.len()
        );
    }
    println!("final archive size {}", state.archive.len());

    let mut groups = vec![arm_dir];
    if !no_baseline {
        let baseline = SequenceSpec {
            use_archive: false,
            ..spec
        };
        let dir = out.join("pushgp");
        run_sequence(&baseline, &dir)?;
        groups.push(dir);
    }
    let report = out.join("report");
    let summary = aggregate_report(&groups, 0.95, None, &report)?;
    for c in &summary.comparisons {
        println!(
            "{:<7} {} p = {:.4}{}",
            c.problem,
            c.test.name(),
            c.p_value,
            if c.significant { " (significant)" } else { "" }
        );
    }
    println!("report in {}", report.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            problem,
            archives,
            out,
            keep_quality,
            spec,
        } => {
            let mut spec = spec.spec()?;
            spec.carry_quality |= keep_quality;
            create_dir(&out)?;
            solve(problem, &archives, &out, &spec)
        }
        Command::Kdps {
            order,
            out,
            no_baseline,
            carry_quality,
            spec,
        } => kdps(&order, &out, no_baseline, carry_quality, spec.spec()?),
        Command::Extract {
            solution,
            parts,
            problem,
            out,
        } => {
            if parts == 0 {
                bail!("--parts must be at least 1");
            }
            let program = read_program(&solution)?;
            let archive: SubprogramArchive = even_partition(&program, parts, problem.code())
                .into_iter()
                .collect();
            match out {
                Some(path) => archive.save(&path)?,
                None => println!("{}", archive.to_json()),
            }
            Ok(())
        }
        Command::Simplify {
            solution,
            steps,
            problem,
            seed,
        } => {
            let program = read_program(&solution)?;
            let spec = SequenceSpec {
                root_seed: seed,
                ..SequenceSpec::default()
            };
            let problem = spec.problem(problem);
            let errors = evaluate(&program, &problem, Split::Train);
            let mut rng = rng::stream(&[seed]);
            let simplified = simplify(&program, &errors, &problem, steps, &mut rng);
            info!(
                "length {} -> {}, train error {}",
                program.len(),
                simplified.len(),
                errors.total()
            );
            println!("{simplified}");
            Ok(())
        }
        Command::Report {
            dirs,
            out,
            family_confidence,
            comparisons,
        } => {
            if !(family_confidence > 0.0 && family_confidence < 1.0) {
                bail!("--family-confidence must lie strictly between 0 and 1");
            }
            let summary = aggregate_report(&dirs, family_confidence, comparisons, &out)?;
            for d in &summary.diagnostics {
                eprintln!("skipped {d}");
            }
            println!("{}", fs::read_to_string(out.join("summary.txt"))?);
            Ok(())
        }
        Command::Cases {
            problem,
            out,
            seed,
            n_train,
            n_test,
        } => {
            create_dir(&out)?;
            let problem = kdps::problem::generate_cases(problem, n_train, n_test, seed);
            for (split, name) in [(Split::Train, "train"), (Split::Test, "test")] {
                let path = out.join(format!("{}_{name}.tsv", problem.name));
                let file = fs::File::create(&path)?;
                write_case_file(BufWriter::new(file), &problem, split)?;
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
