//! Line-oriented case-set files.
//!
//! ```text
//! #problem=SLMD<TAB>signature=int,int,int,int<TAB>seed=42<TAB>split=train
//! i:1<TAB>i:5<TAB>i:3<TAB>i:7<TAB>s:"small"
//! ```
//!
//! Inputs and the expected observable use the program literal syntax and
//! are separated by tabs.

use std::io::{BufRead, Write};

use super::{Expected, IoCase, Problem, Split};
use crate::error::{Error, Result};
use crate::push::{Value, ValueType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFileHeader {
    pub problem: String,
    pub signature: Vec<ValueType>,
    pub seed: u64,
    pub split: Split,
}

pub fn write_case_file<W: Write>(
    mut out: W,
    problem: &Problem,
    split: Split,
) -> std::io::Result<()> {
    let signature: Vec<&str> = problem.input_signature.iter().map(|t| t.name()).collect();
    writeln!(
        out,
        "#problem={}\tsignature={}\tseed={}\tsplit={}",
        problem.name,
        signature.join(","),
        problem.seed,
        match split {
            Split::Train => "train",
            Split::Test => "test",
        }
    )?;
    for case in problem.cases(split) {
        for input in &case.inputs {
            write!(out, "{input}\t")?;
        }
        writeln!(out, "{}", case.expected.as_value())?;
    }
    Ok(())
}

fn malformed(line: usize, message: impl std::fmt::Display) -> Error {
    Error::CaseFile(format!("line {line}: {message}"))
}

pub fn read_case_file<R: BufRead>(input: R) -> Result<(CaseFileHeader, Vec<IoCase>)> {
    let mut lines = input.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
    let first = first.map_err(|e| malformed(1, e))?;
    let header = parse_header(&first)?;

    let mut cases = Vec::new();
    for (index, line) in lines {
        let n = index + 1;
        let line = line.map_err(|e| malformed(n, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut values = line
            .split('\t')
            .map(|field| field.parse::<Value>().map_err(|e| malformed(n, e)))
            .collect::<Result<Vec<_>>>()?;
        let expected = match values.pop() {
            Some(Value::Str(s)) => Expected::Printed(s),
            Some(Value::Bool(b)) => Expected::Bool(b),
            _ => {
                return Err(malformed(
                    n,
                    "expected observable must be a string or boolean",
                ))
            }
        };
        let types: Vec<ValueType> = values.iter().map(Value::value_type).collect();
        if types != header.signature {
            return Err(malformed(n, "inputs do not match the header signature"));
        }
        cases.push(IoCase {
            inputs: values,
            expected,
        });
    }
    Ok((header, cases))
}

fn parse_header(line: &str) -> Result<CaseFileHeader> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| malformed(1, "header must start with `#`"))?;
    let (mut problem, mut signature, mut seed, mut split) = (None, None, None, None);
    for field in body.split('\t') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| malformed(1, format!("bad header field `{field}`")))?;
        match key {
            "problem" => problem = Some(value.to_string()),
            "signature" => {
                signature = Some(
                    value
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|t| t.parse::<ValueType>().map_err(|e| malformed(1, e)))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "seed" => seed = Some(value.parse().map_err(|e| malformed(1, e))?),
            "split" => {
                split = Some(match value {
                    "train" => Split::Train,
                    "test" => Split::Test,
                    other => return Err(malformed(1, format!("unknown split `{other}`"))),
                })
            }
            other => return Err(malformed(1, format!("unknown header key `{other}`"))),
        }
    }
    Ok(CaseFileHeader {
        problem: problem.ok_or_else(|| malformed(1, "header lacks problem"))?,
        signature: signature.ok_or_else(|| malformed(1, "header lacks signature"))?,
        seed: seed.ok_or_else(|| malformed(1, "header lacks seed"))?,
        split: split.ok_or_else(|| malformed(1, "header lacks split"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{generate_cases, ProblemName};

    #[test]
    fn round_trips_every_problem() {
        for p in ProblemName::ALL {
            let problem = generate_cases(p, 30, 40, 21);
            for split in [Split::Train, Split::Test] {
                let mut buf = Vec::new();
                write_case_file(&mut buf, &problem, split).unwrap();
                let (header, cases) = read_case_file(buf.as_slice()).unwrap();
                assert_eq!(header.problem, p.code());
                assert_eq!(header.seed, 21);
                assert_eq!(header.split, split);
                assert_eq!(header.signature, problem.input_signature);
                assert_eq!(cases, problem.cases(split));
            }
        }
    }

    #[test]
    fn header_line_format() {
        let problem = generate_cases(ProblemName::SmallOrLargeMedian, 1, 1, 42);
        let mut buf = Vec::new();
        write_case_file(&mut buf, &problem, Split::Train).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(
            text.starts_with("#problem=SLMD\tsignature=int,int,int,int\tseed=42\tsplit=train\n")
        );
    }

    #[test]
    fn rejects_signature_mismatch() {
        let text = "#problem=MD\tsignature=int,int,int\tseed=1\tsplit=test\ni:1\ti:2\ts:\"2\"\n";
        assert!(matches!(
            read_case_file(text.as_bytes()),
            Err(Error::CaseFile(_))
        ));
        assert!(read_case_file("".as_bytes()).is_err());
    }
}
