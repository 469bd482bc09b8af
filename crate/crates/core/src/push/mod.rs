//! A small, total Push dialect: flat programs over int, bool and string
//! stacks plus an execution queue.

mod atom;
mod instruction;
mod interpreter;

pub use atom::{Atom, PushProgram, Value, ValueType};
pub use instruction::{Erc, Instruction, InstructionSet, StackEffect};
pub use interpreter::{execute, render_output, PushState, DEFAULT_STEP_LIMIT, MAX_STRING_CHARS};
