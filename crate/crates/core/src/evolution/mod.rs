//! PushGP: lexicase selection, UMAD and a select-then-mutate generational
//! loop without crossover or elitism.

mod record;
mod run;
mod select;
mod simplify;
mod umad;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{evaluate, ErrorVector, Problem, Split};
use crate::push::{PushProgram, DEFAULT_STEP_LIMIT};
use crate::rng::{self, StreamRng};

pub use record::{pick_best_and_shortest, GenerationStats, RunRecord};
pub use run::run_generation_loop;
pub use select::{lexicase_select, lexicase_survivors};
pub use simplify::simplify;
pub use umad::umad_mutate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub umad_addition_rate: f64,
    pub umad_deletion_rate: f64,
    pub init_length_range: (usize, usize),
    pub step_limit: usize,
    pub simplification_steps: usize,
    pub seed: u64,
    /// Evaluate offspring on the rayon pool. Results are identical to the
    /// single-threaded mode.
    pub parallel: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 1000,
            max_generations: 300,
            umad_addition_rate: 0.09,
            umad_deletion_rate: 0.0826,
            init_length_range: (20, 100),
            step_limit: DEFAULT_STEP_LIMIT,
            simplification_steps: 5000,
            seed: 0,
            parallel: false,
        }
    }
}

impl EvolutionConfig {
    /// Population 300 and 100 generations.
    pub fn desk_scale() -> Self {
        EvolutionConfig {
            population_size: 300,
            max_generations: 100,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        if !rate_ok(self.umad_addition_rate) || !rate_ok(self.umad_deletion_rate) {
            return Err(Error::Config("UMAD rates must lie in [0, 1]".into()));
        }
        if self.population_size < 2 {
            return Err(Error::Config("population_size must be at least 2".into()));
        }
        if self.init_length_range.0 > self.init_length_range.1 {
            return Err(Error::Config(
                "init_length_range must satisfy min <= max".into(),
            ));
        }
        if self.step_limit == 0 {
            return Err(Error::Config("step_limit must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub program: PushProgram,
    pub train_errors: ErrorVector,
    pub total_error: u64,
}

impl Individual {
    pub fn new(program: PushProgram, train_errors: ErrorVector) -> Self {
        let total_error = train_errors.total();
        Individual {
            program,
            train_errors,
            total_error,
        }
    }

    pub fn evaluated(program: PushProgram, problem: &Problem) -> Self {
        let errors = evaluate(&program, problem, Split::Train);
        Self::new(program, errors)
    }
}

/// The product of one mutation.
#[derive(Clone, Debug)]
pub struct Offspring {
    pub program: PushProgram,
    /// Training errors, when the mutator already had to compute them.
    pub train_errors: Option<ErrorVector>,
    /// Archive entry to credit at the end of the generation.
    pub credit: Option<usize>,
}

impl Offspring {
    pub fn plain(program: PushProgram) -> Self {
        Offspring {
            program,
            train_errors: None,
            credit: None,
        }
    }
}

/// How a selected parent becomes a child.
///
/// `mutate` may run concurrently for different children, so any feedback it
/// produces goes through [`Offspring::credit`] and is applied in population
/// order by `end_generation`.
pub trait Mutator: Sync {
    fn mutate(
        &self,
        parent: &Individual,
        problem: &Problem,
        config: &EvolutionConfig,
        rng: &mut StreamRng,
    ) -> Offspring;

    fn end_generation(&mut self, _credits: &[usize]) {}
}

/// Plain UMAD.
#[derive(Clone, Copy, Debug, Default)]
pub struct UmadMutator;

impl Mutator for UmadMutator {
    fn mutate(
        &self,
        parent: &Individual,
        problem: &Problem,
        config: &EvolutionConfig,
        rng: &mut StreamRng,
    ) -> Offspring {
        Offspring::plain(umad_mutate(&parent.program, config, problem, rng))
    }
}

/// Random programs with lengths uniform in `init_length_range`, evaluated
/// on the training cases. Individual `i` draws from its own seeded stream.
pub fn initialize_population(config: &EvolutionConfig, problem: &Problem) -> Vec<Individual> {
    let build = |i: usize| {
        let mut rng = rng::stream(&[config.seed, INIT_STREAM, i as u64]);
        Individual::evaluated(random_program(config, problem, &mut rng), problem)
    };
    map_indices(config.population_size, config.parallel, build)
}

pub(crate) const INIT_STREAM: u64 = u64::MAX;
pub(crate) const SIMPLIFY_STREAM: u64 = u64::MAX - 1;

pub fn random_program<R: rand::Rng>(
    config: &EvolutionConfig,
    problem: &Problem,
    rng: &mut R,
) -> PushProgram {
    let (min, max) = config.init_length_range;
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| problem.random_atom(rng)).collect()
}

pub(crate) fn map_indices<T: Send>(
    n: usize,
    parallel: bool,
    f: impl Fn(usize) -> T + Sync + Send,
) -> Vec<T> {
    if parallel {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_cases, ProblemName};
    use crate::push::Atom;

    #[test]
    fn population_shape_and_determinism() {
        let problem = generate_cases(ProblemName::SmallOrLargeMedian, 20, 20, 1);
        let config = EvolutionConfig {
            population_size: 3,
            init_length_range: (1, 1),
            seed: 5,
            ..EvolutionConfig::default()
        };
        let pop = initialize_population(&config, &problem);
        assert_eq!(pop.len(), 3);
        assert!(pop.iter().all(|i| i.program.len() == 1));

        let config = EvolutionConfig {
            population_size: 50,
            ..config
        };
        let a = initialize_population(&config, &problem);
        let b = initialize_population(&config, &problem);
        assert_eq!(a, b);
        let par = initialize_population(
            &EvolutionConfig {
                parallel: true,
                ..config.clone()
            },
            &problem,
        );
        assert_eq!(a, par);
        for ind in &a {
            for atom in ind.program.iter() {
                if let Atom::Input(i) = atom {
                    assert!(*i < problem.arity());
                }
            }
        }
    }

    #[test]
    fn lengths_span_the_range() {
        let problem = generate_cases(ProblemName::Median, 10, 10, 1);
        let config = EvolutionConfig {
            population_size: 400,
            ..EvolutionConfig::default()
        };
        let pop = initialize_population(&config, &problem);
        let lens: Vec<usize> = pop.iter().map(|i| i.program.len()).collect();
        assert!(lens.iter().all(|&l| (20..=100).contains(&l)));
        assert!(lens.iter().any(|&l| l < 30) && lens.iter().any(|&l| l > 90));
    }

    #[test]
    fn config_validation() {
        assert!(EvolutionConfig::default().validate().is_ok());
        let bad = |c: EvolutionConfig| assert!(c.validate().is_err());
        bad(EvolutionConfig {
            umad_addition_rate: 1.5,
            ..Default::default()
        });
        bad(EvolutionConfig {
            population_size: 1,
            ..Default::default()
        });
        bad(EvolutionConfig {
            init_length_range: (5, 4),
            ..Default::default()
        });
    }
}
