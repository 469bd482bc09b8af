//! Case generators and reference solvers for the six problems.

use std::collections::HashSet;

use rand::Rng;

use super::{ErrorMetric, Expected, IoCase, Problem, ProblemName};
use crate::push::{Erc, InstructionSet, Value, ValueType, DEFAULT_STEP_LIMIT};
use crate::rng;

use ProblemName::*;

/// Minimum share of cases each outcome class receives, per split.
const MIN_CLASS_SHARE: f64 = 0.1;

const SAMPLE_ATTEMPTS: usize = 10_000;

/// Builds `problem` with freshly sampled train and test cases.
///
/// Deterministic in `seed`. Every outcome class (e.g. "small", "large" and
/// no output) gets at least 10% of each split, training cases include the
/// boundary inputs, and no input tuple appears twice across both splits.
pub fn generate_cases(problem: ProblemName, n_train: usize, n_test: usize, seed: u64) -> Problem {
    let mut rng = rng::stream(&[seed, problem as u64]);
    let mut seen = HashSet::new();
    let train = fill(problem, n_train, &edge_cases(problem), &mut seen, &mut rng);
    let test = fill(problem, n_test, &[], &mut seen, &mut rng);
    let to_cases = |inputs: Vec<Vec<Value>>| {
        inputs
            .into_iter()
            .map(|inputs| IoCase {
                expected: reference_output(problem, &inputs),
                inputs,
            })
            .collect()
    };
    Problem {
        name: problem.code().to_string(),
        input_signature: signature(problem),
        train_cases: to_cases(train),
        test_cases: to_cases(test),
        instruction_set: instruction_set(problem),
        error_metric: match problem {
            CompareStringLengths => ErrorMetric::BoolTop,
            _ => ErrorMetric::Levenshtein,
        },
        step_limit: DEFAULT_STEP_LIMIT,
        seed,
    }
}

fn fill<R: Rng>(
    problem: ProblemName,
    n: usize,
    edges: &[Vec<Value>],
    seen: &mut HashSet<Vec<Value>>,
    rng: &mut R,
) -> Vec<Vec<Value>> {
    let classes = class_count(problem);
    let quota = if classes > 1 {
        (MIN_CLASS_SHARE * n as f64).ceil() as usize
    } else {
        0
    };
    let mut edges = edges.iter();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let target = (i < classes * quota).then_some(i % classes);
        if target.is_none() {
            if let Some(edge) = edges.by_ref().find(|e| !seen.contains(*e)) {
                seen.insert(edge.clone());
                out.push(edge.clone());
                continue;
            }
        }
        let mut inputs = sample(problem, target, rng);
        for _ in 0..SAMPLE_ATTEMPTS {
            if !seen.contains(&inputs) {
                break;
            }
            inputs = sample(problem, target, rng);
        }
        seen.insert(inputs.clone());
        out.push(inputs);
    }
    out
}

fn signature(problem: ProblemName) -> Vec<ValueType> {
    use ValueType::*;
    match problem {
        Median => vec![Int, Int, Int],
        CompareStringLengths | MedianStringLength => vec![Str, Str, Str],
        SmallOrLarge => vec![Int],
        SmallOrLargeMedian => vec![Int, Int, Int, Int],
        SmallOrLargeString => vec![Str],
    }
}

fn instruction_set(problem: ProblemName) -> InstructionSet {
    use ValueType::*;
    let words = || [Value::Str("small".into()), Value::Str("large".into())];
    match problem {
        Median => InstructionSet::for_types(&[Int, Bool], &[Int]).with_erc(Erc::Int {
            min: -100,
            max: 100,
        }),
        CompareStringLengths => InstructionSet::for_types(&[Str, Int, Bool], &[])
            .with_erc(Erc::Int { min: 0, max: 49 })
            .with_erc(Erc::Bool),
        SmallOrLarge => InstructionSet::for_types(&[Int, Bool, Str], &[Str])
            .with_literals(words())
            .with_literals([Value::Int(1000), Value::Int(2000)])
            .with_erc(Erc::Int {
                min: 0,
                max: 10_000,
            }),
        MedianStringLength => InstructionSet::for_types(&[Str, Int, Bool], &[Int])
            .with_erc(Erc::Int { min: 0, max: 100 }),
        SmallOrLargeMedian => InstructionSet::for_types(&[Int, Bool, Str], &[Str])
            .with_literals(words())
            .with_erc(Erc::Int {
                min: -100,
                max: 100,
            }),
        SmallOrLargeString => InstructionSet::for_types(&[Str, Int, Bool], &[Str])
            .with_literals(words())
            .with_literals([Value::Int(100), Value::Int(200)])
            .with_erc(Erc::Int { min: 0, max: 300 }),
    }
}

/// Number of distinct outcome classes the stratifier balances.
fn class_count(problem: ProblemName) -> usize {
    match problem {
        Median | MedianStringLength => 1,
        CompareStringLengths => 2,
        SmallOrLarge | SmallOrLargeMedian | SmallOrLargeString => 3,
    }
}

/// Outcome class of an input tuple: 0 small / 1 nothing / 2 large for the
/// threshold problems, false/true for CSL.
pub(crate) fn class_of(problem: ProblemName, inputs: &[Value]) -> usize {
    match reference_output(problem, inputs) {
        Expected::Bool(b) => usize::from(b),
        Expected::Printed(text) => match (problem, text.as_str()) {
            (Median | MedianStringLength, _) => 0,
            (_, "small") => 0,
            (_, "") => 1,
            _ => 2,
        },
    }
}

fn int(v: &Value) -> i64 {
    match v {
        Value::Int(i) => *i,
        other => panic!("expected an int input, got {other:?}"),
    }
}

fn str_len(v: &Value) -> i64 {
    match v {
        Value::Str(s) => s.chars().count() as i64,
        other => panic!("expected a string input, got {other:?}"),
    }
}

fn median3(a: i64, b: i64, c: i64) -> i64 {
    a.min(b).max(a.max(b).min(c))
}

fn small_or_large(value: i64, small_below: i64, large_from: i64) -> Expected {
    Expected::Printed(
        if value < small_below {
            "small"
        } else if value >= large_from {
            "large"
        } else {
            ""
        }
        .to_string(),
    )
}

/// Expected observable for any generatable input tuple.
pub(crate) fn reference_output(problem: ProblemName, inputs: &[Value]) -> Expected {
    match problem {
        Median => Expected::Printed(
            median3(int(&inputs[0]), int(&inputs[1]), int(&inputs[2])).to_string(),
        ),
        CompareStringLengths => {
            let (a, b, c) = (
                str_len(&inputs[0]),
                str_len(&inputs[1]),
                str_len(&inputs[2]),
            );
            Expected::Bool(a < b && b < c)
        }
        SmallOrLarge => small_or_large(int(&inputs[0]), 1000, 2000),
        MedianStringLength => Expected::Printed(
            median3(
                str_len(&inputs[0]),
                str_len(&inputs[1]),
                str_len(&inputs[2]),
            )
            .to_string(),
        ),
        SmallOrLargeMedian => {
            let m = median3(int(&inputs[0]), int(&inputs[1]), int(&inputs[2]));
            let d = int(&inputs[3]);
            Expected::Printed(
                match m.cmp(&d) {
                    std::cmp::Ordering::Less => "small",
                    std::cmp::Ordering::Greater => "large",
                    std::cmp::Ordering::Equal => "",
                }
                .to_string(),
            )
        }
        SmallOrLargeString => small_or_large(str_len(&inputs[0]), 100, 200),
    }
}

fn printable<R: Rng>(len: usize, rng: &mut R) -> Value {
    Value::Str(
        (0..len)
            .map(|_| rng.gen_range(b' '..=b'~') as char)
            .collect(),
    )
}

fn ints<R: Rng>(n: usize, rng: &mut R) -> Vec<Value> {
    (0..n)
        .map(|_| Value::Int(rng.gen_range(-100..=100)))
        .collect()
}

/// Samples one input tuple, optionally forced into an outcome class.
fn sample<R: Rng>(problem: ProblemName, class: Option<usize>, rng: &mut R) -> Vec<Value> {
    match problem {
        Median => ints(3, rng),
        MedianStringLength => (0..3)
            .map(|_| {
                let len = rng.gen_range(0..=100);
                printable(len, rng)
            })
            .collect(),
        CompareStringLengths => match class {
            Some(1) => {
                let mut lens = rand::seq::index::sample(rng, 50, 3).into_vec();
                lens.sort_unstable();
                lens.into_iter().map(|l| printable(l, rng)).collect()
            }
            _ => loop {
                let inputs: Vec<Value> = (0..3)
                    .map(|_| {
                        let len = rng.gen_range(0..50);
                        printable(len, rng)
                    })
                    .collect();
                if class.is_none() || class_of(problem, &inputs) == 0 {
                    break inputs;
                }
            },
        },
        SmallOrLarge => {
            let n = match class {
                Some(0) => rng.gen_range(0..1000),
                Some(1) => rng.gen_range(1000..2000),
                Some(_) => rng.gen_range(2000..=10_000),
                None => rng.gen_range(0..=10_000),
            };
            vec![Value::Int(n)]
        }
        SmallOrLargeMedian => loop {
            let mut inputs = ints(3, rng);
            let m = median3(int(&inputs[0]), int(&inputs[1]), int(&inputs[2]));
            let d = match class {
                None => rng.gen_range(-100..=100),
                Some(0) if m < 100 => rng.gen_range(m + 1..=100),
                Some(1) => m,
                Some(2) if m > -100 => rng.gen_range(-100..m),
                Some(_) => continue,
            };
            inputs.push(Value::Int(d));
            break inputs;
        },
        SmallOrLargeString => {
            let len = match class {
                Some(0) => rng.gen_range(0..100),
                Some(1) => rng.gen_range(100..200),
                Some(_) => rng.gen_range(200..=300),
                None => rng.gen_range(0..=300),
            };
            vec![printable(len, rng)]
        }
    }
}

/// Boundary inputs always placed in the training split.
fn edge_cases(problem: ProblemName) -> Vec<Vec<Value>> {
    let i = |xs: &[i64]| xs.iter().map(|&x| Value::Int(x)).collect::<Vec<_>>();
    let s = |xs: &[&str]| {
        xs.iter()
            .map(|&x| Value::Str(x.to_string()))
            .collect::<Vec<_>>()
    };
    let run = |n: usize| Value::Str("a".repeat(n));
    match problem {
        Median => vec![
            i(&[0, 0, 0]),
            i(&[1, 2, 3]),
            i(&[3, 2, 1]),
            i(&[2, 2, 1]),
            i(&[-100, 0, 100]),
            i(&[100, 100, -100]),
        ],
        CompareStringLengths => vec![
            s(&["", "", ""]),
            s(&["a", "bb", "ccc"]),
            s(&["ccc", "bb", "a"]),
            s(&["", "a", "a"]),
            s(&["a", "a", "aa"]),
        ],
        SmallOrLarge => [0, 999, 1000, 1999, 2000, 10_000]
            .iter()
            .map(|&n| vec![Value::Int(n)])
            .collect(),
        MedianStringLength => vec![
            s(&["", "", ""]),
            s(&["a", "abc", "ab"]),
            vec![run(100), run(0), run(50)],
        ],
        SmallOrLargeMedian => vec![
            i(&[1, 5, 3, 7]),
            i(&[1, 5, 3, 3]),
            i(&[1, 5, 3, 2]),
            i(&[0, 0, 0, 0]),
            i(&[-100, -100, -100, 100]),
            i(&[100, 100, 100, -100]),
        ],
        SmallOrLargeString => [0, 99, 100, 199, 200, 300]
            .iter()
            .map(|&n| vec![run(n)])
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn printed(text: &str) -> Expected {
        Expected::Printed(text.into())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            reference_output(SmallOrLargeMedian, &[1, 5, 3, 7].map(Value::Int)),
            printed("small")
        );
        assert_eq!(
            reference_output(SmallOrLargeString, &[Value::Str("x".repeat(150))]),
            printed("")
        );
        assert_eq!(
            reference_output(
                MedianStringLength,
                &["a", "abc", "ab"].map(|s| Value::Str(s.into()))
            ),
            printed("2")
        );
        assert_eq!(
            reference_output(Median, &[1, 5, 3].map(Value::Int)),
            printed("3")
        );
    }

    #[test]
    fn thresholds() {
        for (n, want) in [(999, "small"), (1000, ""), (1999, ""), (2000, "large")] {
            assert_eq!(
                reference_output(SmallOrLarge, &[Value::Int(n)]),
                printed(want)
            );
        }
        for (n, want) in [(99, "small"), (100, ""), (199, ""), (200, "large")] {
            assert_eq!(
                reference_output(SmallOrLargeString, &[Value::Str("z".repeat(n))]),
                printed(want)
            );
        }
        assert_eq!(
            reference_output(SmallOrLargeMedian, &[1, 5, 3, 2].map(Value::Int)),
            printed("large")
        );
        assert_eq!(
            reference_output(SmallOrLargeMedian, &[1, 5, 3, 3].map(Value::Int)),
            printed("")
        );
    }

    #[test]
    fn deterministic_in_seed() {
        for p in ProblemName::ALL {
            let a = generate_cases(p, 50, 50, 11);
            let b = generate_cases(p, 50, 50, 11);
            let c = generate_cases(p, 50, 50, 12);
            assert_eq!(a.train_cases, b.train_cases);
            assert_eq!(a.test_cases, b.test_cases);
            assert_ne!(a.train_cases, c.train_cases);
        }
    }

    #[test]
    fn sizes_signatures_and_disjointness() {
        for p in ProblemName::ALL {
            let problem = generate_cases(p, 100, 1000, 3);
            assert_eq!(problem.train_cases.len(), 100);
            assert_eq!(problem.test_cases.len(), 1000);
            let train: HashSet<_> = problem.train_cases.iter().map(|c| &c.inputs).collect();
            assert_eq!(train.len(), 100, "{p}: duplicate training inputs");
            for case in problem.train_cases.iter().chain(&problem.test_cases) {
                let types: Vec<_> = case.inputs.iter().map(Value::value_type).collect();
                assert_eq!(types, problem.input_signature);
            }
            assert!(
                problem
                    .test_cases
                    .iter()
                    .all(|c| !train.contains(&c.inputs)),
                "{p}: test overlaps train"
            );
        }
    }

    #[test]
    fn every_class_meets_its_quota() {
        for p in ProblemName::ALL {
            let k = class_count(p);
            if k == 1 {
                continue;
            }
            let problem = generate_cases(p, 100, 1000, 5);
            for (cases, n) in [
                (&problem.train_cases, 100usize),
                (&problem.test_cases, 1000),
            ] {
                let mut counts = vec![0usize; k];
                for case in cases {
                    counts[class_of(p, &case.inputs)] += 1;
                }
                let need = (0.1 * n as f64).ceil() as usize;
                assert!(counts.iter().all(|&c| c >= need), "{p}: {counts:?}");
            }
        }
    }

    #[test]
    fn input_ranges() {
        let problem = generate_cases(SmallOrLargeString, 100, 500, 9);
        for case in problem.train_cases.iter().chain(&problem.test_cases) {
            assert!(str_len(&case.inputs[0]) <= 300);
        }
        let problem = generate_cases(SmallOrLargeMedian, 100, 500, 9);
        for case in &problem.test_cases {
            assert!(case.inputs.iter().all(|v| (-100..=100).contains(&int(v))));
        }
        let problem = generate_cases(CompareStringLengths, 100, 500, 9);
        for case in &problem.test_cases {
            assert!(case.inputs.iter().all(|v| str_len(v) < 50));
        }
    }
}
