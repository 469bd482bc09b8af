//! The instruction vocabulary and per-problem instruction sets.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::atom::{Atom, Value, ValueType};

macro_rules! instructions {
    ($($variant:ident => $name:literal,)*) => {
        /// Every instruction the interpreter knows how to run.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Instruction {
            $($variant,)*
        }

        impl Instruction {
            pub const ALL: &'static [Instruction] = &[$(Instruction::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Instruction::$variant => $name,)*
                }
            }

            pub fn from_name(name: &str) -> Option<Instruction> {
                match name {
                    $($name => Some(Instruction::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

instructions! {
    IntAdd => "int_add",
    IntSub => "int_sub",
    IntMult => "int_mult",
    IntDiv => "int_div",
    IntMod => "int_mod",
    IntMin => "int_min",
    IntMax => "int_max",
    IntLt => "int_lt",
    IntGt => "int_gt",
    IntEq => "int_eq",
    IntDup => "int_dup",
    IntSwap => "int_swap",
    IntPop => "int_pop",
    StrLength => "str_length",
    StrConcat => "str_concat",
    StrDup => "str_dup",
    StrPop => "str_pop",
    StrEq => "str_eq",
    BoolAnd => "bool_and",
    BoolOr => "bool_or",
    BoolNot => "bool_not",
    BoolEq => "bool_eq",
    BoolDup => "bool_dup",
    BoolPop => "bool_pop",
    ExecIf => "exec_if",
    ExecDup => "exec_dup",
    ExecPop => "exec_pop",
    PrintInt => "print_int",
    PrintBool => "print_bool",
    PrintStr => "print_str",
}

/// Declared arity of an instruction on each data stack, indexed by
/// [`ValueType::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StackEffect {
    pub pops: [usize; 3],
    pub pushes: [usize; 3],
}

impl StackEffect {
    const fn new(pops: [usize; 3], pushes: [usize; 3]) -> Self {
        StackEffect { pops, pushes }
    }

    /// Net change of one stack's depth when the instruction runs.
    pub fn delta(&self, ty: ValueType) -> isize {
        self.pushes[ty.index()] as isize - self.pops[ty.index()] as isize
    }
}

impl Instruction {
    /// Argument and result counts per data stack (int, bool, str).
    pub fn effect(self) -> StackEffect {
        use Instruction::*;
        match self {
            IntAdd | IntSub | IntMult | IntDiv | IntMod | IntMin | IntMax => {
                StackEffect::new([2, 0, 0], [1, 0, 0])
            }
            IntLt | IntGt | IntEq => StackEffect::new([2, 0, 0], [0, 1, 0]),
            IntDup => StackEffect::new([1, 0, 0], [2, 0, 0]),
            IntSwap => StackEffect::new([2, 0, 0], [2, 0, 0]),
            IntPop => StackEffect::new([1, 0, 0], [0, 0, 0]),
            StrLength => StackEffect::new([0, 0, 1], [1, 0, 0]),
            StrConcat => StackEffect::new([0, 0, 2], [0, 0, 1]),
            StrDup => StackEffect::new([0, 0, 1], [0, 0, 2]),
            StrPop => StackEffect::new([0, 0, 1], [0, 0, 0]),
            StrEq => StackEffect::new([0, 0, 2], [0, 1, 0]),
            BoolAnd | BoolOr | BoolEq => StackEffect::new([0, 2, 0], [0, 1, 0]),
            BoolNot => StackEffect::new([0, 1, 0], [0, 1, 0]),
            BoolDup => StackEffect::new([0, 1, 0], [0, 2, 0]),
            BoolPop => StackEffect::new([0, 1, 0], [0, 0, 0]),
            ExecIf => StackEffect::new([0, 1, 0], [0, 0, 0]),
            ExecDup | ExecPop => StackEffect::new([0, 0, 0], [0, 0, 0]),
            PrintInt => StackEffect::new([1, 0, 0], [0, 0, 0]),
            PrintBool => StackEffect::new([0, 1, 0], [0, 0, 0]),
            PrintStr => StackEffect::new([0, 0, 1], [0, 0, 0]),
        }
    }

    /// Whether the instruction manipulates the execution queue.
    pub fn needs_exec(self) -> bool {
        matches!(self, Instruction::ExecDup | Instruction::ExecPop)
    }

    fn bit(self) -> u64 {
        1 << (self as u64)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Instruction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Instruction::from_name(s).ok_or_else(|| format!("unknown instruction `{s}`"))
    }
}

/// Ephemeral random constant generator; each draw yields a fresh literal.
#[derive(Clone, Debug, PartialEq)]
pub enum Erc {
    Int { min: i64, max: i64 },
    Bool,
}

impl Erc {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Value {
        match *self {
            Erc::Int { min, max } => Value::Int(rng.gen_range(min..=max)),
            Erc::Bool => Value::Bool(rng.gen()),
        }
    }
}

/// The atoms evolution may draw from for one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct InstructionSet {
    instructions: Vec<Instruction>,
    enabled: u64,
    pub literal_pool: Vec<Value>,
    pub ercs: Vec<Erc>,
}

impl InstructionSet {
    pub fn new(instructions: impl IntoIterator<Item = Instruction>) -> Self {
        let mut instructions: Vec<Instruction> = instructions.into_iter().collect();
        instructions.sort();
        instructions.dedup();
        let enabled = instructions.iter().fold(0, |mask, i| mask | i.bit());
        InstructionSet {
            instructions,
            enabled,
            literal_pool: Vec::new(),
            ercs: Vec::new(),
        }
    }

    /// The complete core vocabulary.
    pub fn full() -> Self {
        Self::new(Instruction::ALL.iter().copied())
    }

    /// All instructions that read or write the given stacks, plus the
    /// exec-queue instructions and the requested print instructions.
    pub fn for_types(types: &[ValueType], prints: &[ValueType]) -> Self {
        use Instruction::*;
        let mut picked = vec![ExecIf, ExecDup, ExecPop];
        for &ty in types {
            picked.extend(match ty {
                ValueType::Int => &[
                    IntAdd, IntSub, IntMult, IntDiv, IntMod, IntMin, IntMax, IntLt, IntGt, IntEq,
                    IntDup, IntSwap, IntPop,
                ][..],
                ValueType::Bool => &[BoolAnd, BoolOr, BoolNot, BoolEq, BoolDup, BoolPop][..],
                ValueType::Str => &[StrLength, StrConcat, StrDup, StrPop, StrEq][..],
            });
        }
        for &ty in prints {
            picked.push(match ty {
                ValueType::Int => PrintInt,
                ValueType::Bool => PrintBool,
                ValueType::Str => PrintStr,
            });
        }
        Self::new(picked)
    }

    pub fn with_literals(mut self, literals: impl IntoIterator<Item = Value>) -> Self {
        self.literal_pool.extend(literals);
        self
    }

    pub fn with_erc(mut self, erc: Erc) -> Self {
        self.ercs.push(erc);
        self
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    #[inline]
    pub fn contains(&self, instruction: Instruction) -> bool {
        self.enabled & instruction.bit() != 0
    }

    /// Draws one atom uniformly from instructions, pooled literals, ERC
    /// generators and the `arity` input references.
    pub fn random_atom<R: Rng + ?Sized>(&self, arity: usize, rng: &mut R) -> Atom {
        let n_instr = self.instructions.len();
        let n_lit = self.literal_pool.len();
        let n_erc = self.ercs.len();
        let total = n_instr + n_lit + n_erc + arity;
        assert!(total > 0, "cannot draw atoms from an empty instruction set");
        let mut pick = rng.gen_range(0..total);
        if pick < n_instr {
            return Atom::Instruction(self.instructions[pick]);
        }
        pick -= n_instr;
        if pick < n_lit {
            return Atom::Literal(self.literal_pool[pick].clone());
        }
        pick -= n_lit;
        if pick < n_erc {
            return Atom::Literal(self.ercs[pick].sample(rng));
        }
        Atom::Input(pick - n_erc)
    }
}
