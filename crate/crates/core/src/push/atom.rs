//! Atoms, programs and their whitespace-separated text form.
//!
//! One token per atom: `i:5`, `b:true`, `s:"small"` (backslash-escaped),
//! `in:0`, or a bare instruction name.

use std::fmt::{self, Write as _};
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::instruction::Instruction;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueType {
    Int,
    Bool,
    Str,
}

impl ValueType {
    pub const ALL: [ValueType; 3] = [ValueType::Int, ValueType::Bool, ValueType::Str];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueType::Int => "int",
            ValueType::Bool => "bool",
            ValueType::Str => "str",
        }
    }
}

impl FromStr for ValueType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "int" => Ok(ValueType::Int),
            "bool" => Ok(ValueType::Bool),
            "str" => Ok(ValueType::Str),
            other => Err(format!("unknown type `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
}

impl Value {
    pub fn value_type(&self) -> ValueType {
        match self {
            Value::Int(_) => ValueType::Int,
            Value::Bool(_) => ValueType::Bool,
            Value::Str(_) => ValueType::Str,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "i:{v}"),
            Value::Bool(v) => write!(f, "b:{v}"),
            Value::Str(s) => {
                f.write_str("s:\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        '\r' => f.write_str("\\r")?,
                        c => f.write_char(c)?,
                    }
                }
                f.write_char('"')
            }
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Tokenizer::new(s);
        let atom = tokens.next_atom_opt()?;
        if tokens.next_atom_opt()?.is_some() {
            return Err(parse_error(0, "expected a single literal"));
        }
        match atom {
            Some(Atom::Literal(v)) => Ok(v),
            _ => Err(parse_error(0, format!("`{s}` is not a literal"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Instruction(Instruction),
    Literal(Value),
    Input(usize),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Instruction(i) => f.write_str(i.name()),
            Atom::Literal(v) => v.fmt(f),
            Atom::Input(i) => write!(f, "in:{i}"),
        }
    }
}

impl From<Instruction> for Atom {
    fn from(i: Instruction) -> Self {
        Atom::Instruction(i)
    }
}

impl From<Value> for Atom {
    fn from(v: Value) -> Self {
        Atom::Literal(v)
    }
}

/// A flat Push program. The genome and the executable are the same sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PushProgram {
    atoms: Vec<Atom>,
}

impl PushProgram {
    pub fn new(atoms: Vec<Atom>) -> Self {
        PushProgram { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.atoms
    }

    /// Largest input index referenced, if any.
    pub fn max_input(&self) -> Option<usize> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Input(i) => Some(*i),
                _ => None,
            })
            .max()
    }
}

impl Deref for PushProgram {
    type Target = [Atom];

    fn deref(&self) -> &[Atom] {
        &self.atoms
    }
}

impl From<Vec<Atom>> for PushProgram {
    fn from(atoms: Vec<Atom>) -> Self {
        PushProgram { atoms }
    }
}

impl FromIterator<Atom> for PushProgram {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        PushProgram {
            atoms: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for PushProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_char(' ')?;
            }
            atom.fmt(f)?;
        }
        Ok(())
    }
}

impl FromStr for PushProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Tokenizer::new(s);
        let mut atoms = Vec::new();
        while let Some(atom) = tokens.next_atom_opt()? {
            atoms.push(atom);
        }
        Ok(PushProgram { atoms })
    }
}

impl Serialize for PushProgram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PushProgram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

struct Tokenizer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Tokenizer<'a> {
    fn new(src: &'a str) -> Self {
        Tokenizer { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn next_atom_opt(&mut self) -> Result<Option<Atom>, Error> {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
        if trimmed.is_empty() {
            return Ok(None);
        }
        let start = self.pos;
        if let Some(body) = trimmed.strip_prefix("s:\"") {
            let mut text = String::new();
            let mut chars = body.char_indices();
            let end = loop {
                match chars.next() {
                    None => return Err(parse_error(start, "unterminated string literal")),
                    Some((i, '"')) => break i,
                    Some((_, '\\')) => match chars.next() {
                        Some((_, '"')) => text.push('"'),
                        Some((_, '\\')) => text.push('\\'),
                        Some((_, 'n')) => text.push('\n'),
                        Some((_, 't')) => text.push('\t'),
                        Some((_, 'r')) => text.push('\r'),
                        Some((_, c)) => {
                            return Err(parse_error(start, format!("unknown escape `\\{c}`")))
                        }
                        None => return Err(parse_error(start, "unterminated string literal")),
                    },
                    Some((_, c)) => text.push(c),
                }
            };
            self.pos = start + 3 + end + 1;
            if let Some(c) = self.rest().chars().next() {
                if !c.is_whitespace() {
                    return Err(parse_error(
                        self.pos,
                        "expected whitespace after string literal",
                    ));
                }
            }
            return Ok(Some(Atom::Literal(Value::Str(text))));
        }
        let len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..len];
        self.pos += len;
        parse_token(token)
            .map(Some)
            .map_err(|message| parse_error(start, message))
    }
}

fn parse_token(token: &str) -> Result<Atom, String> {
    if let Some(v) = token.strip_prefix("i:") {
        return v
            .parse()
            .map(|v| Atom::Literal(Value::Int(v)))
            .map_err(|_| format!("bad integer literal `{token}`"));
    }
    if let Some(v) = token.strip_prefix("b:") {
        return match v {
            "true" => Ok(Atom::Literal(Value::Bool(true))),
            "false" => Ok(Atom::Literal(Value::Bool(false))),
            _ => Err(format!("bad boolean literal `{token}`")),
        };
    }
    if let Some(v) = token.strip_prefix("in:") {
        return v
            .parse()
            .map(Atom::Input)
            .map_err(|_| format!("bad input reference `{token}`"));
    }
    Instruction::from_name(token)
        .map(Atom::Instruction)
        .ok_or_else(|| format!("unknown instruction `{token}`"))
}
