use std::collections::HashMap;

use super::Partition;
use crate::error::{Error, Result};

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalised mutual information with max-entropy normalisation,
/// `I(P;Q) / max(H(P), H(Q))`. Two single-community partitions score 1.
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { expected: p.len(), actual: q.len() });
    }
    let n = p.len();
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut size_p = vec![0usize; p.community_count()];
    let mut size_q = vec![0usize; q.community_count()];
    for (&a, &b) in p.labels().iter().zip(q.labels()) {
        *joint.entry((a, b)).or_default() += 1;
        size_p[a] += 1;
        size_q[b] += 1;
    }
    let h_p = entropy(size_p.iter().copied(), nf);
    let h_q = entropy(size_q.iter().copied(), nf);
    let h_max = h_p.max(h_q);
    if h_max == 0.0 {
        return Ok(1.0);
    }
    // swapping p and q yields the same multiset of terms; summing them in
    // sorted order makes nmi(p, q) and nmi(q, p) bit-identical
    let mut terms: Vec<f64> = joint
        .into_iter()
        .map(|((a, b), c)| {
            let pab = c as f64 / nf;
            pab * (c as f64 * nf / (size_p[a] as f64 * size_q[b] as f64)).ln()
        })
        .collect();
    terms.sort_unstable_by(f64::total_cmp);
    let mutual: f64 = terms.iter().sum();
    Ok((mutual / h_max).clamp(0.0, 1.0))
}
