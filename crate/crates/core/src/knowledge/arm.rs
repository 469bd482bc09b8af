//! Adaptive replacement mutation (ARM).
//!
//! With probability `r_arm` a parent has a random window overwritten by an
//! archived subprogram; otherwise it goes through UMAD. Subprograms are
//! picked in proportion to their quality counts with probability `r_prop`
//! and uniformly otherwise. A subprogram earns one quality point whenever
//! its child solves strictly more training cases than the parent.

use log::warn;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SubprogramArchive;
use crate::error::{Error, Result};
use crate::evolution::{umad_mutate, EvolutionConfig, Individual, Mutator, Offspring};
use crate::problem::{evaluate, Problem, Split};
use crate::push::{Atom, PushProgram};
use crate::rng::StreamRng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArmConfig {
    pub r_arm: f64,
    pub r_prop: f64,
}

impl Default for ArmConfig {
    fn default() -> Self {
        ArmConfig {
            r_arm: 0.1,
            r_prop: 0.5,
        }
    }
}

impl ArmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r_arm) || !(0.0..=1.0).contains(&self.r_prop) {
            return Err(Error::Config("r_arm and r_prop must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Rewrites input references the target problem cannot supply.
///
/// Each `in:k` with `k >= target_arity` becomes an input drawn uniformly
/// from `0..target_arity`. With `target_arity == 0` such references are
/// dropped instead.
pub fn remap_inputs<R: Rng + ?Sized>(
    atoms: &[Atom],
    target_arity: usize,
    rng: &mut R,
) -> Vec<Atom> {
    if target_arity == 0 {
        let kept: Vec<Atom> = atoms
            .iter()
            .filter(|a| !matches!(a, Atom::Input(_)))
            .cloned()
            .collect();
        if kept.len() != atoms.len() {
            warn!(
                "dropped {} input reference(s) from a subprogram: target problem takes no inputs",
                atoms.len() - kept.len()
            );
        }
        return kept;
    }
    atoms
        .iter()
        .map(|atom| match atom {
            Atom::Input(i) if *i >= target_arity => Atom::Input(rng.gen_range(0..target_arity)),
            other => other.clone(),
        })
        .collect()
}

/// Overwrites `parent[start..start + sub.len()]` with `sub`.
pub fn replace_window(parent: &[Atom], sub: &[Atom], start: usize) -> PushProgram {
    let mut child = parent.to_vec();
    child[start..start + sub.len()].clone_from_slice(sub);
    PushProgram::new(child)
}

/// Replacement mutation: a uniformly placed window of the parent, as long
/// as the (input-remapped) subprogram, is overwritten by it. A parent
/// shorter than the subprogram is replaced outright.
pub fn replacement_mutation<R: Rng + ?Sized>(
    parent: &PushProgram,
    subprogram: &PushProgram,
    target_arity: usize,
    rng: &mut R,
) -> PushProgram {
    let sub = remap_inputs(subprogram, target_arity, rng);
    if parent.len() < sub.len() {
        return PushProgram::new(sub);
    }
    let start = rng.gen_range(0..=parent.len() - sub.len());
    replace_window(parent, &sub, start)
}

/// Picks an archive index: quality-proportional with probability `r_prop`
/// (uniform when every quality is 0), uniform otherwise.
///
/// Returns `None` for an empty archive.
pub fn select_subprogram<R: Rng + ?Sized>(
    archive: &SubprogramArchive,
    config: &ArmConfig,
    rng: &mut R,
) -> Option<usize> {
    if archive.is_empty() {
        return None;
    }
    let n = archive.len();
    if rng.gen::<f64>() < config.r_prop {
        let total: u64 = archive.entries().iter().map(|e| e.quality).sum();
        if total == 0 {
            return Some(rng.gen_range(0..n));
        }
        let mut ticket = rng.gen_range(0..total);
        for (i, entry) in archive.entries().iter().enumerate() {
            if ticket < entry.quality {
                return Some(i);
            }
            ticket -= entry.quality;
        }
        unreachable!("ticket below total quality");
    }
    Some(rng.gen_range(0..n))
}

/// One ARM step for `parent`.
///
/// The replacement child is evaluated here so the improvement test can run;
/// its errors travel with the offspring and the entry to credit is
/// reported in [`Offspring::credit`] rather than applied.
pub fn arm_mutate<R: Rng + ?Sized>(
    parent: &Individual,
    archive: &SubprogramArchive,
    arm: &ArmConfig,
    problem: &Problem,
    config: &EvolutionConfig,
    rng: &mut R,
) -> Offspring {
    // An empty archive must not consume randomness, so the run stays
    // identical to plain UMAD.
    if !archive.is_empty() && rng.gen::<f64>() < arm.r_arm {
        let k = select_subprogram(archive, arm, rng).expect("archive is not empty");
        let program = replacement_mutation(
            &parent.program,
            &archive.entries()[k].atoms,
            problem.arity(),
            rng,
        );
        let errors = evaluate(&program, problem, Split::Train);
        let credit = (errors.zeros() > parent.train_errors.zeros()).then_some(k);
        return Offspring {
            program,
            train_errors: Some(errors),
            credit,
        };
    }
    Offspring::plain(umad_mutate(&parent.program, config, problem, rng))
}

/// ARM over an owned archive. Quality counts are frozen during a generation
/// and credits are added at its end, in population order.
#[derive(Clone, Debug)]
pub struct ArmMutator {
    archive: SubprogramArchive,
    config: ArmConfig,
}

impl ArmMutator {
    pub fn new(archive: SubprogramArchive, config: ArmConfig) -> Self {
        ArmMutator { archive, config }
    }

    pub fn archive(&self) -> &SubprogramArchive {
        &self.archive
    }

    pub fn into_archive(self) -> SubprogramArchive {
        self.archive
    }
}

impl Mutator for ArmMutator {
    fn mutate(
        &self,
        parent: &Individual,
        problem: &Problem,
        config: &EvolutionConfig,
        rng: &mut StreamRng,
    ) -> Offspring {
        arm_mutate(parent, &self.archive, &self.config, problem, config, rng)
    }

    fn end_generation(&mut self, credits: &[usize]) {
        for &k in credits {
            self.archive.credit(k);
        }
    }
}
