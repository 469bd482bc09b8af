use statrs::distribution::{ContinuousCDF, Normal};

/// Largest pooled sample size for which the rank-sum null distribution is
/// enumerated exactly.
pub const EXACT_WILCOXON_MAX_N: usize = 20;

/// Doubled midranks of the pooled sample, so tied ranks stay integral.
fn doubled_midranks(pooled: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        // Ranks i+1 ..= j+1 share their mean; doubled that is i + j + 2.
        for &k in &order[i..=j] {
            ranks[k] = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided Wilcoxon rank-sum test.
///
/// Ties receive midranks. For pooled sizes up to
/// [`EXACT_WILCOXON_MAX_N`] the p-value is the exact share of all
/// `C(n_a + n_b, n_a)` label assignments whose rank sum lies at least as
/// far from its mean as the observed one; larger samples use the normal
/// approximation with tie and continuity corrections.
pub fn wilcoxon_rank_sum(sample_a: &[f64], sample_b: &[f64]) -> f64 {
    assert!(
        !sample_a.is_empty() && !sample_b.is_empty(),
        "both samples must be non-empty"
    );
    let na = sample_a.len();
    let n = na + sample_b.len();
    let pooled: Vec<f64> = sample_a.iter().chain(sample_b).copied().collect();
    let ranks = doubled_midranks(&pooled);
    if ranks.iter().all(|&r| r == ranks[0]) {
        return 1.0;
    }
    // Doubled statistic and its doubled null mean na * (n + 1).
    let observed: u64 = ranks[..na].iter().sum();
    let mean2 = (na * (n + 1)) as u64;
    let deviation = observed.abs_diff(mean2);

    if n <= EXACT_WILCOXON_MAX_N {
        let (mut extreme, mut total) = (0u64, 0u64);
        for_each_subset_sum(&ranks, na, &mut |sum| {
            total += 1;
            if sum.abs_diff(mean2) >= deviation {
                extreme += 1;
            }
        });
        return extreme as f64 / total as f64;
    }

    let (na_f, nb_f, n_f) = (na as f64, (n - na) as f64, n as f64);
    let mut tie_term = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let variance = na_f * nb_f / 12.0 * ((n_f + 1.0) - tie_term / (n_f * (n_f - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let z = ((deviation as f64 / 2.0) - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.sf(z)).min(1.0)
}

/// Calls `f` with the sum of every `k`-element subset of `values`.
fn for_each_subset_sum(values: &[u64], k: usize, f: &mut impl FnMut(u64)) {
    fn go(values: &[u64], k: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if k == 0 {
            f(acc);
            return;
        }
        if values.len() < k {
            return;
        }
        go(&values[1..], k - 1, acc + values[0], f);
        go(&values[1..], k, acc, f);
    }
    go(values, k, 0, f);
}

fn ln_factorials(n: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Two-sided Fisher exact test on `[[a, b], [c, d]]`.
///
/// Sums the hypergeometric probabilities of every table with the observed
/// margins that is no more likely than the observed one (relative
/// tolerance 1e-9).
pub fn fisher_exact(table: [[u64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = table;
    let n = a + b + c + d;
    if n == 0 {
        return 1.0;
    }
    let row1 = a + b;
    let col1 = a + c;
    let lf = ln_factorials(n);
    let fact = |k: u64| lf[k as usize];
    let fixed = fact(row1) + fact(n - row1) + fact(col1) + fact(n - col1) - fact(n);
    let ln_p =
        |x: u64| fixed - fact(x) - fact(row1 - x) - fact(col1 - x) - fact(n + x - row1 - col1);
    let lo = (row1 + col1).saturating_sub(n);
    let hi = row1.min(col1);
    let observed = ln_p(a);
    let threshold = observed + (1.0f64 + 1e-9).ln();
    let p: f64 = (lo..=hi)
        .map(ln_p)
        .filter(|&lp| lp <= threshold)
        .map(f64::exp)
        .sum();
    p.min(1.0)
}

/// Per-comparison significance level that keeps the family-wise
/// confidence at `family_confidence` over `m` independent comparisons.
pub fn sidak_threshold(family_confidence: f64, m: usize) -> f64 {
    assert!(m >= 1, "need at least one comparison");
    assert!(
        family_confidence > 0.0 && family_confidence < 1.0,
        "family confidence must lie in (0, 1)"
    );
    1.0 - family_confidence.powf(1.0 / m as f64)
}
