use rand::Rng;

use super::EvolutionConfig;
use crate::problem::Problem;
use crate::push::PushProgram;

/// Uniform mutation by addition and deletion.
///
/// Each parent atom gains, with the addition rate, a fresh random atom
/// placed right before or after it (equal odds). Every atom of that
/// intermediate program is then dropped with the deletion rate.
pub fn umad_mutate<R: Rng + ?Sized>(
    parent: &PushProgram,
    config: &EvolutionConfig,
    problem: &Problem,
    rng: &mut R,
) -> PushProgram {
    let mut grown = Vec::with_capacity(parent.len() + parent.len() / 8 + 1);
    for atom in parent.iter() {
        if rng.gen::<f64>() < config.umad_addition_rate {
            let fresh = problem.random_atom(rng);
            if rng.gen::<bool>() {
                grown.push(fresh);
                grown.push(atom.clone());
            } else {
                grown.push(atom.clone());
                grown.push(fresh);
            }
        } else {
            grown.push(atom.clone());
        }
    }
    grown.retain(|_| rng.gen::<f64>() >= config.umad_deletion_rate);
    PushProgram::new(grown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::random_program;
    use crate::problem::{generate_cases, ProblemName};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(add: f64, del: f64) -> (EvolutionConfig, Problem, PushProgram, ChaCha8Rng) {
        let problem = generate_cases(ProblemName::Median, 5, 5, 1);
        let config = EvolutionConfig {
            umad_addition_rate: add,
            umad_deletion_rate: del,
            init_length_range: (100, 100),
            ..EvolutionConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let parent = random_program(&config, &problem, &mut rng);
        (config, problem, parent, rng)
    }

    #[test]
    fn zero_rates_copy_the_parent() {
        let (config, problem, parent, mut rng) = setup(0.0, 0.0);
        assert_eq!(umad_mutate(&parent, &config, &problem, &mut rng), parent);
    }

    #[test]
    fn full_deletion_empties_the_child() {
        let (config, problem, parent, mut rng) = setup(0.0, 1.0);
        assert!(umad_mutate(&parent, &config, &problem, &mut rng).is_empty());
    }

    #[test]
    fn insertions_keep_parent_order() {
        let (config, problem, parent, mut rng) = setup(0.5, 0.0);
        let child = umad_mutate(&parent, &config, &problem, &mut rng);
        assert!(child.len() > parent.len());
        // The parent must be a subsequence of the child.
        let mut it = child.iter();
        assert!(parent.iter().all(|a| it.any(|c| c == a)));
    }

    #[test]
    fn expected_length_is_preserved_at_standard_rates() {
        let (config, problem, parent, mut rng) = setup(0.09, 0.0826);
        let trials = 100_000;
        let total: usize = (0..trials)
            .map(|_| umad_mutate(&parent, &config, &problem, &mut rng).len())
            .sum();
        let mean = total as f64 / trials as f64;
        let expected = 100.0 * 1.09 * (1.0 - 0.0826);
        assert!(
            (mean - expected).abs() < 2.0,
            "mean {mean}, expected {expected}"
        );
    }
}
