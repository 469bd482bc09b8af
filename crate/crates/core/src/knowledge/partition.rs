use super::SubprogramEntry;
use crate::push::PushProgram;

/// Part lengths for splitting `len` atoms into `n_parts` near-equal pieces,
/// longer pieces first. Programs shorter than `n_parts` give `len` pieces
/// of one atom.
pub fn partition_lengths(len: usize, n_parts: usize) -> Vec<usize> {
    assert!(n_parts >= 1, "n_parts must be at least 1");
    if len < n_parts {
        return vec![1; len];
    }
    let base = len / n_parts;
    let extra = len % n_parts;
    (0..n_parts)
        .map(|i| base + usize::from(i < extra))
        .collect()
}

/// Cuts a (simplified) solution into contiguous subprograms of near-equal
/// length. Every entry starts with quality 0.
pub fn even_partition(
    solution: &PushProgram,
    n_parts: usize,
    source_problem: &str,
) -> Vec<SubprogramEntry> {
    let mut start = 0;
    partition_lengths(solution.len(), n_parts)
        .into_iter()
        .map(|len| {
            let atoms = PushProgram::new(solution[start..start + len].to_vec());
            start += len;
            SubprogramEntry::new(atoms, source_problem)
        })
        .collect()
}
