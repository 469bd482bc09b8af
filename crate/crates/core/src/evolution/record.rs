use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::push::PushProgram;

/// Population statistics for one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Lowest total training error in this generation's population.
    pub best_error: u64,
    pub mean_error: f64,
    /// Length of the individual holding `best_error`.
    pub best_length: usize,
    /// Lowest total training error seen so far in the run.
    pub best_so_far: u64,
}

/// Everything one evolutionary run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub seed: u64,
    pub generations: Vec<GenerationStats>,
    /// Best individual of the run (lowest total error, then shortest).
    pub solution: PushProgram,
    pub simplified: PushProgram,
    pub train_error: u64,
    pub test_error: u64,
    pub train_success: bool,
    pub test_success: bool,
}

pub const CSV_HEADER: &str = "generation,best_error,mean_error,best_length,best_so_far";

impl RunRecord {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for g in &self.generations {
            writeln!(
                out,
                "{},{},{},{},{}",
                g.generation, g.best_error, g.mean_error, g.best_length, g.best_so_far
            )?;
        }
        Ok(())
    }
}

/// Index of the best-and-shortest run: lowest training error, then the
/// shortest simplified solution, then the earliest run.
pub fn pick_best_and_shortest(records: &[RunRecord]) -> Option<usize> {
    records
        .iter()
        .enumerate()
        .min_by_key(|(i, r)| (r.train_error, r.simplified.len(), *i))
        .map(|(i, _)| i)
}
