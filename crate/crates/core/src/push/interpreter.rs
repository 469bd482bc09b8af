//! Execution of flat Push programs.
//!
//! Every instruction declares how many values it consumes from each data
//! stack. When any of those stacks is too shallow the instruction is a
//! no-op and execution moves on, so every atom sequence runs to completion.

use std::fmt::Write as _;

use super::atom::{Atom, PushProgram, Value};
use super::instruction::{Instruction, InstructionSet};

pub const DEFAULT_STEP_LIMIT: usize = 500;

/// Longest string a stack may hold; longer concatenations are truncated.
pub const MAX_STRING_CHARS: usize = 10_000;

/// Interpreter state after (or during) a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushState {
    pub int_stack: Vec<i64>,
    pub bool_stack: Vec<bool>,
    pub str_stack: Vec<String>,
    /// Atoms left unexecuted when the step limit cut the run short, next
    /// atom first.
    pub exec_queue: Vec<Atom>,
    pub output: String,
    pub steps_taken: usize,
}

impl PushState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.int_stack.clear();
        self.bool_stack.clear();
        self.str_stack.clear();
        self.exec_queue.clear();
        self.output.clear();
        self.steps_taken = 0;
    }

    /// Runs `program` from a cleared state, reusing this state's buffers.
    pub fn run(
        &mut self,
        program: &[Atom],
        inputs: &[Value],
        instruction_set: &InstructionSet,
        step_limit: usize,
    ) {
        self.clear();
        // Indices into `program`, next atom on top.
        let mut queue: Vec<u32> = (0..program.len() as u32).rev().collect();
        while self.steps_taken < step_limit {
            let Some(index) = queue.pop() else { break };
            self.steps_taken += 1;
            match &program[index as usize] {
                Atom::Literal(value) => self.push_value(value),
                Atom::Input(i) => {
                    if let Some(value) = inputs.get(*i) {
                        self.push_value(value);
                    }
                }
                Atom::Instruction(instruction) => {
                    if instruction_set.contains(*instruction) {
                        self.step(*instruction, &mut queue);
                    }
                }
            }
        }
        self.exec_queue
            .extend(queue.iter().rev().map(|&i| program[i as usize].clone()));
    }

    fn push_value(&mut self, value: &Value) {
        match value {
            Value::Int(v) => self.int_stack.push(*v),
            Value::Bool(v) => self.bool_stack.push(*v),
            Value::Str(s) => self.str_stack.push(s.clone()),
        }
    }

    fn pop_int2(&mut self) -> Option<(i64, i64)> {
        if self.int_stack.len() < 2 {
            return None;
        }
        let top = self.int_stack.pop()?;
        let below = self.int_stack.pop()?;
        Some((below, top))
    }

    fn pop_bool2(&mut self) -> Option<(bool, bool)> {
        if self.bool_stack.len() < 2 {
            return None;
        }
        let top = self.bool_stack.pop()?;
        let below = self.bool_stack.pop()?;
        Some((below, top))
    }

    fn pop_str2(&mut self) -> Option<(String, String)> {
        if self.str_stack.len() < 2 {
            return None;
        }
        let top = self.str_stack.pop()?;
        let below = self.str_stack.pop()?;
        Some((below, top))
    }

    fn int_binary(&mut self, f: impl FnOnce(i64, i64) -> i64) {
        if let Some((a, b)) = self.pop_int2() {
            self.int_stack.push(f(a, b));
        }
    }

    fn int_compare(&mut self, f: impl FnOnce(i64, i64) -> bool) {
        if let Some((a, b)) = self.pop_int2() {
            self.bool_stack.push(f(a, b));
        }
    }

    fn bool_binary(&mut self, f: impl FnOnce(bool, bool) -> bool) {
        if let Some((a, b)) = self.pop_bool2() {
            self.bool_stack.push(f(a, b));
        }
    }

    /// Divisor on top of the int stack is zero: protected ops skip.
    fn zero_divisor(&self) -> bool {
        self.int_stack.last() == Some(&0)
    }

    fn step(&mut self, instruction: Instruction, queue: &mut Vec<u32>) {
        use Instruction::*;
        match instruction {
            IntAdd => self.int_binary(i64::wrapping_add),
            IntSub => self.int_binary(i64::wrapping_sub),
            IntMult => self.int_binary(i64::wrapping_mul),
            IntDiv => {
                if !self.zero_divisor() {
                    self.int_binary(floor_div);
                }
            }
            IntMod => {
                if !self.zero_divisor() {
                    self.int_binary(floor_mod);
                }
            }
            IntMin => self.int_binary(i64::min),
            IntMax => self.int_binary(i64::max),
            IntLt => self.int_compare(|a, b| a < b),
            IntGt => self.int_compare(|a, b| a > b),
            IntEq => self.int_compare(|a, b| a == b),
            IntDup => {
                if let Some(&top) = self.int_stack.last() {
                    self.int_stack.push(top);
                }
            }
            IntSwap => {
                let n = self.int_stack.len();
                if n >= 2 {
                    self.int_stack.swap(n - 1, n - 2);
                }
            }
            IntPop => {
                self.int_stack.pop();
            }
            StrLength => {
                if let Some(s) = self.str_stack.pop() {
                    self.int_stack.push(char_len(&s) as i64);
                }
            }
            StrConcat => {
                if let Some((mut a, b)) = self.pop_str2() {
                    a.push_str(&b);
                    truncate_chars(&mut a, MAX_STRING_CHARS);
                    self.str_stack.push(a);
                }
            }
            StrDup => {
                if let Some(top) = self.str_stack.last() {
                    let copy = top.clone();
                    self.str_stack.push(copy);
                }
            }
            StrPop => {
                self.str_stack.pop();
            }
            StrEq => {
                if let Some((a, b)) = self.pop_str2() {
                    self.bool_stack.push(a == b);
                }
            }
            BoolAnd => self.bool_binary(|a, b| a && b),
            BoolOr => self.bool_binary(|a, b| a || b),
            BoolEq => self.bool_binary(|a, b| a == b),
            BoolNot => {
                if let Some(top) = self.bool_stack.last_mut() {
                    *top = !*top;
                }
            }
            BoolDup => {
                if let Some(&top) = self.bool_stack.last() {
                    self.bool_stack.push(top);
                }
            }
            BoolPop => {
                self.bool_stack.pop();
            }
            ExecIf => {
                if let Some(condition) = self.bool_stack.pop() {
                    if !condition {
                        queue.pop();
                    }
                }
            }
            ExecDup => {
                if let Some(&next) = queue.last() {
                    queue.push(next);
                }
            }
            ExecPop => {
                queue.pop();
            }
            PrintInt => {
                if let Some(v) = self.int_stack.pop() {
                    let _ = write!(self.output, "{v}");
                }
            }
            PrintBool => {
                if let Some(v) = self.bool_stack.pop() {
                    let _ = write!(self.output, "{v}");
                }
            }
            PrintStr => {
                if let Some(s) = self.str_stack.pop() {
                    self.output.push_str(&s);
                }
            }
        }
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a.wrapping_div(b);
    if a.wrapping_rem(b) != 0 && ((a < 0) != (b < 0)) {
        q.wrapping_sub(1)
    } else {
        q
    }
}

fn floor_mod(a: i64, b: i64) -> i64 {
    let r = a.wrapping_rem(b);
    if r != 0 && ((r < 0) != (b < 0)) {
        r.wrapping_add(b)
    } else {
        r
    }
}

fn char_len(s: &str) -> usize {
    if s.is_ascii() {
        s.len()
    } else {
        s.chars().count()
    }
}

fn truncate_chars(s: &mut String, max: usize) {
    if s.len() <= max {
        return;
    }
    if let Some((cut, _)) = s.char_indices().nth(max) {
        s.truncate(cut);
    }
}

/// Runs `program` on `inputs` and returns the final state.
pub fn execute(
    program: &PushProgram,
    inputs: &[Value],
    instruction_set: &InstructionSet,
    step_limit: usize,
) -> PushState {
    let mut state = PushState::new();
    state.run(program.atoms(), inputs, instruction_set, step_limit);
    state
}

/// The printed output of a finished run.
pub fn render_output(state: &PushState) -> &str {
    &state.output
}

#[cfg(test)]
mod tests {
    use super::*;
    use Instruction::*;

    fn prog(text: &str) -> PushProgram {
        text.parse().unwrap()
    }

    fn run(text: &str, inputs: &[Value]) -> PushState {
        execute(
            &prog(text),
            inputs,
            &InstructionSet::full(),
            DEFAULT_STEP_LIMIT,
        )
    }

    #[test]
    fn adds_literals() {
        let s = run("i:1 i:2 int_add", &[]);
        assert_eq!(s.int_stack, vec![3]);
        assert_eq!(s.output, "");
    }

    #[test]
    fn missing_arguments_skip() {
        let s = run("int_add", &[]);
        assert_eq!(
            s,
            PushState {
                steps_taken: 1,
                ..PushState::new()
            }
        );
        let s = run("i:4 int_add", &[]);
        assert_eq!(s.int_stack, vec![4]);
    }

    #[test]
    fn adds_inputs_and_prints() {
        let s = run(
            "in:0 in:1 int_add print_int",
            &[Value::Int(1), Value::Int(1)],
        );
        assert_eq!(render_output(&s), "2");
    }

    #[test]
    fn render_output_is_verbatim() {
        assert_eq!(render_output(&run(r#"s:"small" print_str"#, &[])), "small");
        assert_eq!(render_output(&run("", &[])), "");
        assert_eq!(render_output(&run("i:-7 print_int", &[])), "-7");
    }

    #[test]
    fn operand_order_is_below_then_top() {
        assert_eq!(run("i:7 i:2 int_sub", &[]).int_stack, vec![5]);
        assert_eq!(run("i:1 i:2 int_lt", &[]).bool_stack, vec![true]);
        assert_eq!(
            run(r#"s:"ab" s:"cd" str_concat"#, &[]).str_stack,
            vec!["abcd"]
        );
    }

    #[test]
    fn protected_division_skips_on_zero() {
        let s = run("i:5 i:0 int_div", &[]);
        assert_eq!(s.int_stack, vec![5, 0]);
        let s = run("i:5 i:0 int_mod", &[]);
        assert_eq!(s.int_stack, vec![5, 0]);
        assert_eq!(run("i:-7 i:2 int_div", &[]).int_stack, vec![-4]);
        assert_eq!(run("i:-7 i:2 int_mod", &[]).int_stack, vec![1]);
        assert_eq!(
            run(&format!("i:{} i:-1 int_div", i64::MIN), &[]).int_stack,
            vec![i64::MIN]
        );
    }

    #[test]
    fn integer_overflow_wraps() {
        let s = run(&format!("i:{} i:1 int_add", i64::MAX), &[]);
        assert_eq!(s.int_stack, vec![i64::MIN]);
    }

    #[test]
    fn exec_if_skips_next_atom_on_false() {
        let s = run("b:false exec_if i:1 i:2", &[]);
        assert_eq!(s.int_stack, vec![2]);
        let s = run("b:true exec_if i:1 i:2", &[]);
        assert_eq!(s.int_stack, vec![1, 2]);
    }

    #[test]
    fn exec_dup_and_pop() {
        assert_eq!(run("exec_dup i:3", &[]).int_stack, vec![3, 3]);
        assert_eq!(run("exec_pop i:3 i:4", &[]).int_stack, vec![4]);
        assert_eq!(run("i:1 exec_dup", &[]).int_stack, vec![1]);
    }

    #[test]
    fn step_limit_stops_runaway_duplication() {
        let p = prog("exec_dup exec_dup exec_dup exec_dup exec_dup exec_dup exec_dup exec_dup exec_dup exec_dup i:1");
        let s = execute(&p, &[], &InstructionSet::full(), 50);
        assert_eq!(s.steps_taken, 50);
        assert!(!s.exec_queue.is_empty());
    }

    #[test]
    fn string_concat_is_capped() {
        let mut text = String::from(r#"s:"abcdefghij""#);
        for _ in 0..12 {
            text.push_str(" str_dup str_concat");
        }
        let s = run(&text, &[]);
        assert_eq!(s.str_stack.len(), 1);
        assert_eq!(s.str_stack[0].len(), MAX_STRING_CHARS);
    }

    #[test]
    fn disabled_instructions_are_no_ops() {
        let set = InstructionSet::new([IntAdd]);
        let s = execute(&prog("i:1 i:2 int_sub"), &[], &set, 100);
        assert_eq!(s.int_stack, vec![1, 2]);
    }

    #[test]
    fn out_of_range_input_is_no_op() {
        let s = run("in:5", &[Value::Int(1)]);
        assert!(s.int_stack.is_empty());
    }
}
