use super::record::{GenerationStats, RunRecord};
use super::{
    initialize_population, lexicase_select, map_indices, simplify, EvolutionConfig, Individual,
    Mutator, SIMPLIFY_STREAM,
};
use crate::problem::{evaluate, is_success, Problem, Split};
use crate::rng;

/// Runs PushGP on `problem` until some individual solves every training
/// case or `max_generations` generations have been bred.
///
/// Each generation is a full replacement: child `i` of generation `g`
/// selects its parent and mutates it using the stream keyed by
/// `(seed, g, i)`. The run's best individual is then simplified and scored
/// on the test cases.
pub fn run_generation_loop<M: Mutator>(
    problem: &Problem,
    config: &EvolutionConfig,
    mutator: &mut M,
) -> RunRecord {
    let mut population = initialize_population(config, problem);
    let mut generations = Vec::with_capacity(config.max_generations + 1);
    let mut best = population_best(&population).clone();
    generations.push(stats(0, &population, best.total_error));

    let mut generation = 0;
    while !best.train_errors.is_solved() && generation < config.max_generations {
        generation += 1;
        let parents = &population;
        let shared: &M = mutator;
        let children = map_indices(config.population_size, config.parallel, |i| {
            let mut rng = rng::stream(&[config.seed, generation as u64, i as u64]);
            let parent = &parents[lexicase_select(parents, &mut rng)];
            let offspring = shared.mutate(parent, problem, config, &mut rng);
            let errors = offspring
                .train_errors
                .unwrap_or_else(|| evaluate(&offspring.program, problem, Split::Train));
            (Individual::new(offspring.program, errors), offspring.credit)
        });
        let credits: Vec<usize> = children.iter().filter_map(|(_, c)| *c).collect();
        mutator.end_generation(&credits);
        population = children.into_iter().map(|(ind, _)| ind).collect();

        let candidate = population_best(&population);
        if better(candidate, &best) {
            best = candidate.clone();
        }
        generations.push(stats(generation, &population, best.total_error));
    }

    let mut rng = rng::stream(&[config.seed, SIMPLIFY_STREAM]);
    let simplified = simplify(
        &best.program,
        &best.train_errors,
        problem,
        config.simplification_steps,
        &mut rng,
    );
    let train_errors = evaluate(&simplified, problem, Split::Train);
    assert_eq!(
        train_errors, best.train_errors,
        "simplification changed the training errors"
    );
    let test_errors = evaluate(&simplified, problem, Split::Test);

    RunRecord {
        problem: problem.name.clone(),
        seed: config.seed,
        generations,
        solution: best.program,
        simplified,
        train_error: train_errors.total(),
        test_error: test_errors.total(),
        train_success: train_errors.is_solved(),
        test_success: is_success(&train_errors, &test_errors),
    }
}

fn better(a: &Individual, b: &Individual) -> bool {
    (a.total_error, a.program.len()) < (b.total_error, b.program.len())
}

fn population_best(population: &[Individual]) -> &Individual {
    population
        .iter()
        .min_by_key(|ind| (ind.total_error, ind.program.len()))
        .expect("population is never empty")
}

fn stats(generation: usize, population: &[Individual], best_so_far: u64) -> GenerationStats {
    let best = population_best(population);
    let total: f64 = population.iter().map(|i| i.total_error as f64).sum();
    GenerationStats {
        generation,
        best_error: best.total_error,
        mean_error: total / population.len() as f64,
        best_length: best.program.len(),
        best_so_far,
    }
}
