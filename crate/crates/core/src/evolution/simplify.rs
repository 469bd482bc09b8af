use rand::Rng;

use crate::problem::{evaluate, ErrorVector, Problem, Split};
use crate::push::PushProgram;

/// Random-deletion simplification.
///
/// Each of `steps` attempts removes a random contiguous chunk of one to
/// three atoms and keeps the shorter program only if its training error
/// vector equals `errors` exactly.
pub fn simplify<R: Rng + ?Sized>(
    program: &PushProgram,
    errors: &ErrorVector,
    problem: &Problem,
    steps: usize,
    rng: &mut R,
) -> PushProgram {
    let mut current = program.atoms().to_vec();
    for _ in 0..steps {
        if current.is_empty() {
            break;
        }
        let chunk = rng.gen_range(1..=3).min(current.len());
        let start = rng.gen_range(0..=current.len() - chunk);
        let mut candidate = Vec::with_capacity(current.len() - chunk);
        candidate.extend_from_slice(&current[..start]);
        candidate.extend_from_slice(&current[start + chunk..]);
        let candidate = PushProgram::new(candidate);
        if evaluate(&candidate, problem, Split::Train) == *errors {
            current = candidate.into_atoms();
        }
    }
    PushProgram::new(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_cases, ProblemName};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(text: &str, problem: &Problem, steps: usize) -> (PushProgram, PushProgram) {
        let program: PushProgram = text.parse().unwrap();
        let errors = evaluate(&program, problem, Split::Train);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = simplify(&program, &errors, problem, steps, &mut rng);
        assert_eq!(evaluate(&out, problem, Split::Train), errors);
        (program, out)
    }

    #[test]
    fn dead_leading_instruction_is_removed() {
        let problem = generate_cases(ProblemName::Median, 30, 10, 4);
        let (before, after) = run(
            "int_add in:0 in:1 int_min in:0 in:1 int_max in:2 int_min int_max print_int",
            &problem,
            500,
        );
        assert!(after.len() < before.len());
        assert_eq!(after.len(), 10);
    }

    #[test]
    fn zero_steps_is_identity() {
        let problem = generate_cases(ProblemName::Median, 10, 10, 4);
        let (before, after) = run("int_add i:3 bool_pop print_int", &problem, 0);
        assert_eq!(before, after);
    }

    #[test]
    fn minimal_program_survives() {
        let mut problem = generate_cases(ProblemName::SmallOrLarge, 30, 10, 4);
        // Every case expects `true` on the boolean stack.
        problem.error_metric = crate::problem::ErrorMetric::BoolTop;
        for case in &mut problem.train_cases {
            case.expected = crate::problem::Expected::Bool(true);
        }
        let (before, after) = run("b:true", &problem, 5000);
        assert_eq!(before, after);
    }
}
