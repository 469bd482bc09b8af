//! Subprogram archives: extraction by even partitioning, and reuse through
//! adaptive replacement mutation.

mod archive;
mod arm;
mod partition;

pub use archive::{SubprogramArchive, SubprogramEntry};
pub use arm::{
    arm_mutate, remap_inputs, replace_window, replacement_mutation, select_subprogram, ArmConfig,
    ArmMutator,
};
pub use partition::{even_partition, partition_lengths};
