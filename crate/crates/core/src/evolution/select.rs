use rand::seq::SliceRandom;
use rand::Rng;

use super::Individual;

/// Lexicase selection. Returns the index of the chosen parent.
///
/// Cases are visited in a fresh random order; at each case only the
/// candidates with the lowest error survive. Filtering stops once a single
/// candidate is left or every case has been used, and a survivor is picked
/// uniformly.
pub fn lexicase_select<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> usize {
    assert!(
        !population.is_empty(),
        "cannot select from an empty population"
    );
    let mut cases: Vec<usize> = (0..population[0].train_errors.len()).collect();
    cases.shuffle(rng);
    let survivors = lexicase_survivors(population, &cases);
    survivors[rng.gen_range(0..survivors.len())]
}

/// Candidates left after filtering by `case_order`.
pub fn lexicase_survivors(population: &[Individual], case_order: &[usize]) -> Vec<usize> {
    let mut candidates: Vec<usize> = (0..population.len()).collect();
    for &case in case_order {
        if candidates.len() == 1 {
            break;
        }
        let best = candidates
            .iter()
            .map(|&i| population[i].train_errors[case])
            .min()
            .expect("candidates never empty");
        candidates.retain(|&i| population[i].train_errors[case] == best);
    }
    candidates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ErrorVector;
    use crate::push::PushProgram;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pop(vectors: &[&[u64]]) -> Vec<Individual> {
        vectors
            .iter()
            .map(|v| Individual::new(PushProgram::default(), ErrorVector(v.to_vec())))
            .collect()
    }

    fn frequencies(population: &[Individual], trials: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = vec![0usize; population.len()];
        for _ in 0..trials {
            counts[lexicase_select(population, &mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / trials as f64).collect()
    }

    #[test]
    fn dominant_individual_always_wins() {
        let population = pop(&[&[3, 3, 3], &[0, 1, 2], &[1, 2, 3], &[2, 2, 2]]);
        assert_eq!(frequencies(&population, 2000)[1], 1.0);
    }

    #[test]
    fn identical_vectors_split_evenly() {
        let f = frequencies(&pop(&[&[1, 2], &[1, 2]]), 10_000);
        assert!((f[0] - 0.5).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn specialists_split_evenly() {
        // Two case orders, each favouring one specialist.
        let f = frequencies(&pop(&[&[0, 5], &[5, 0]]), 10_000);
        assert!((f[0] - 0.5).abs() < 0.02, "{f:?}");
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn dominates(a: &[u64], b: &[u64]) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
    }

    proptest::proptest! {
        #[test]
        fn survivors_are_never_dominated(
            n_cases in 1usize..=5,
            raw in proptest::collection::vec(proptest::collection::vec(0u64..4, 5), 2..8),
        ) {
            let vectors: Vec<Vec<u64>> = raw.iter().map(|v| v[..n_cases].to_vec()).collect();
            let population: Vec<Individual> = vectors
                .iter()
                .map(|v| Individual::new(PushProgram::default(), ErrorVector(v.clone())))
                .collect();
            for order in permutations(n_cases) {
                for s in lexicase_survivors(&population, &order) {
                    for other in &vectors {
                        proptest::prop_assert!(!dominates(other, &vectors[s]));
                    }
                }
            }
        }
    }
}
