//! Benchmark problems, their I/O cases and error metrics.

mod caseset;
mod generate;
mod levenshtein;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::push::{Atom, InstructionSet, PushProgram, PushState, Value, ValueType};

pub use caseset::{read_case_file, write_case_file, CaseFileHeader};
pub use generate::generate_cases;
pub use levenshtein::levenshtein;

/// The six problems of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemName {
    #[serde(rename = "MD")]
    Median,
    #[serde(rename = "CSL")]
    CompareStringLengths,
    #[serde(rename = "SL")]
    SmallOrLarge,
    #[serde(rename = "MDSLEN")]
    MedianStringLength,
    #[serde(rename = "SLMD")]
    SmallOrLargeMedian,
    #[serde(rename = "SLSTR")]
    SmallOrLargeString,
}

impl ProblemName {
    pub const ALL: [ProblemName; 6] = [
        ProblemName::Median,
        ProblemName::CompareStringLengths,
        ProblemName::SmallOrLarge,
        ProblemName::MedianStringLength,
        ProblemName::SmallOrLargeMedian,
        ProblemName::SmallOrLargeString,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ProblemName::Median => "MD",
            ProblemName::CompareStringLengths => "CSL",
            ProblemName::SmallOrLarge => "SL",
            ProblemName::MedianStringLength => "MDSLEN",
            ProblemName::SmallOrLargeMedian => "SLMD",
            ProblemName::SmallOrLargeString => "SLSTR",
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ProblemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemName::ALL
            .into_iter()
            .find(|p| p.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// What a case expects the program to produce.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expected {
    /// Exact printed output.
    Printed(String),
    /// Top of the boolean stack.
    Bool(bool),
}

impl Expected {
    fn as_value(&self) -> Value {
        match self {
            Expected::Printed(s) => Value::Str(s.clone()),
            Expected::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoCase {
    pub inputs: Vec<Value>,
    pub expected: Expected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorMetric {
    /// Edit distance between printed output and the expected text.
    Levenshtein,
    /// 0 when the top boolean matches, 1 otherwise (or when empty).
    BoolTop,
}

impl ErrorMetric {
    pub fn error(self, state: &PushState, expected: &Expected) -> u64 {
        match (self, expected) {
            (ErrorMetric::Levenshtein, Expected::Printed(text)) => {
                levenshtein(&state.output, text) as u64
            }
            (ErrorMetric::BoolTop, Expected::Bool(want)) => match state.bool_stack.last() {
                Some(got) if got == want => 0,
                _ => 1,
            },
            (metric, expected) => {
                panic!("metric {metric:?} cannot score expected value {expected:?}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub input_signature: Vec<ValueType>,
    pub train_cases: Vec<IoCase>,
    pub test_cases: Vec<IoCase>,
    pub instruction_set: InstructionSet,
    pub error_metric: ErrorMetric,
    pub step_limit: usize,
    pub seed: u64,
}

impl Problem {
    pub fn arity(&self) -> usize {
        self.input_signature.len()
    }

    pub fn cases(&self, split: Split) -> &[IoCase] {
        match split {
            Split::Train => &self.train_cases,
            Split::Test => &self.test_cases,
        }
    }

    pub fn random_atom<R: Rng + ?Sized>(&self, rng: &mut R) -> Atom {
        self.instruction_set.random_atom(self.arity(), rng)
    }

    pub fn with_step_limit(mut self, step_limit: usize) -> Self {
        self.step_limit = step_limit;
        self
    }
}

/// Per-case errors of one program, in case order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorVector(pub Vec<u64>);

impl ErrorVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Number of exactly solved cases.
    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&e| e == 0).count()
    }

    pub fn is_solved(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Deref for ErrorVector {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

/// Scores `program` on every case of one split.
pub fn evaluate(program: &PushProgram, problem: &Problem, split: Split) -> ErrorVector {
    let mut state = PushState::new();
    ErrorVector(
        problem
            .cases(split)
            .iter()
            .map(|case| {
                state.run(
                    program.atoms(),
                    &case.inputs,
                    &problem.instruction_set,
                    problem.step_limit,
                );
                problem.error_metric.error(&state, &case.expected)
            })
            .collect(),
    )
}

/// A run succeeds only if it is exact on every training and test case.
pub fn is_success(train_errors: &ErrorVector, test_errors: &ErrorVector) -> bool {
    train_errors.is_solved() && test_errors.is_solved()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn median_problem() -> Problem {
        generate_cases(ProblemName::Median, 100, 200, 7)
    }

    #[test]
    fn median_program_is_exact() {
        let problem = median_problem();
        let program: PushProgram =
            "in:0 in:1 int_min in:0 in:1 int_max in:2 int_min int_max print_int"
                .parse()
                .unwrap();
        assert!(evaluate(&program, &problem, Split::Train).is_solved());
        assert!(evaluate(&program, &problem, Split::Test).is_solved());

        let mut one = problem.clone();
        one.train_cases = vec![IoCase {
            inputs: vec![Value::Int(1), Value::Int(5), Value::Int(3)],
            expected: Expected::Printed("3".into()),
        }];
        assert_eq!(evaluate(&program, &one, Split::Train).0, vec![0]);
    }

    #[test]
    fn empty_program_on_small_case() {
        let mut problem = generate_cases(ProblemName::SmallOrLarge, 20, 20, 1);
        problem.train_cases = vec![IoCase {
            inputs: vec![Value::Int(5)],
            expected: Expected::Printed("small".into()),
        }];
        let errors = evaluate(&PushProgram::default(), &problem, Split::Train);
        assert_eq!(errors.0, vec![5]);

        let large: PushProgram = r#"s:"large" print_str"#.parse().unwrap();
        assert_eq!(evaluate(&large, &problem, Split::Train).0, vec![5]);
    }

    #[test]
    fn bool_metric_reads_top_of_stack() {
        let mut problem = generate_cases(ProblemName::CompareStringLengths, 20, 20, 1);
        problem.train_cases = vec![IoCase {
            inputs: vec![
                Value::Str("a".into()),
                Value::Str("bb".into()),
                Value::Str("ccc".into()),
            ],
            expected: Expected::Bool(true),
        }];
        let t: PushProgram = "b:false b:true".parse().unwrap();
        let f: PushProgram = "b:true b:false".parse().unwrap();
        assert_eq!(evaluate(&t, &problem, Split::Train).0, vec![0]);
        assert_eq!(evaluate(&f, &problem, Split::Train).0, vec![1]);
        assert_eq!(
            evaluate(&PushProgram::default(), &problem, Split::Train).0,
            vec![1]
        );
    }

    #[test]
    fn success_needs_both_splits() {
        let zero = ErrorVector(vec![0, 0, 0]);
        assert!(is_success(&zero, &zero));
        assert!(!is_success(&zero, &ErrorVector(vec![0, 1, 0])));
        assert!(!is_success(&ErrorVector(vec![2, 0, 0]), &zero));
    }

    #[test]
    fn problem_names_parse() {
        for p in ProblemName::ALL {
            assert_eq!(p.code().parse::<ProblemName>().unwrap(), p);
        }
        assert_eq!(
            "slmd".parse::<ProblemName>().unwrap(),
            ProblemName::SmallOrLargeMedian
        );
        assert!(matches!(
            "FIZZ".parse::<ProblemName>(),
            Err(Error::UnknownProblem(_))
        ));
    }
}
