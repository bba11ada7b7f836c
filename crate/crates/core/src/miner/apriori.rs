use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{check_min_support, is_sorted_subset, FrequentItemset, Itemset, MineError};
use crate::ids::ProductId;

/// Number and fraction of `transactions` that contain every item of `itemset`.
pub fn support(itemset: &Itemset, transactions: &[Itemset]) -> Result<(usize, f64), MineError> {
    if transactions.is_empty() {
        return Err(MineError::NoTransactions);
    }
    let count = transactions.iter().filter(|t| itemset.is_subset_of(t)).count();
    Ok((count, count as f64 / transactions.len() as f64))
}

fn is_frequent(count: usize, n: usize, min_support: f64) -> bool {
    count as f64 / n as f64 >= min_support
}

/// All itemsets with `support >= min_support`, ordered by size then
/// lexicographically.
///
/// Level `k` candidates join two frequent `(k-1)`-itemsets that share their
/// first `k-2` items, are dropped if any `(k-1)`-subset is infrequent, and
/// are then counted in a single pass over the transactions.
pub fn mine_frequent(transactions: &[Itemset], min_support: f64) -> Result<Vec<FrequentItemset>, MineError> {
    check_min_support(min_support)?;
    if transactions.is_empty() {
        return Err(MineError::NoTransactions);
    }
    let n = transactions.len();
    let frequent_entry = |items: Vec<ProductId>, count: usize| FrequentItemset {
        itemset: Itemset::from_sorted(items),
        support_count: count,
        support: count as f64 / n as f64,
    };

    let mut singles: BTreeMap<ProductId, usize> = BTreeMap::new();
    for t in transactions {
        for &item in t.items() {
            *singles.entry(item).or_default() += 1;
        }
    }
    let mut level: Vec<(Vec<ProductId>, usize)> = singles
        .into_iter()
        .filter(|&(_, c)| is_frequent(c, n, min_support))
        .map(|(item, c)| (alloc::vec![item], c))
        .collect();

    let mut out = Vec::new();
    while !level.is_empty() {
        let candidates = join_and_prune(&level);
        out.extend(level.drain(..).map(|(items, c)| frequent_entry(items, c)));
        if candidates.is_empty() {
            break;
        }
        let mut counts = alloc::vec![0usize; candidates.len()];
        for t in transactions {
            if t.len() < candidates[0].len() {
                continue;
            }
            for (cand, count) in candidates.iter().zip(counts.iter_mut()) {
                if is_sorted_subset(cand, t.items()) {
                    *count += 1;
                }
            }
        }
        level = candidates.into_iter().zip(counts).filter(|&(_, c)| is_frequent(c, n, min_support)).collect();
    }
    Ok(out)
}

/// `level` must be sorted lexicographically, which keeps itemsets with a
/// common prefix adjacent and makes the emitted candidates sorted as well.
fn join_and_prune(level: &[(Vec<ProductId>, usize)]) -> Vec<Vec<ProductId>> {
    let known: BTreeSet<&[ProductId]> = level.iter().map(|(items, _)| items.as_slice()).collect();
    let mut candidates = Vec::new();
    for (i, (a, _)) in level.iter().enumerate() {
        let prefix = &a[..a.len() - 1];
        for (b, _) in &level[i + 1..] {
            if &b[..b.len() - 1] != prefix {
                break;
            }
            let mut cand = a.clone();
            cand.push(b[b.len() - 1]);
            if all_subsets_known(&cand, &known) {
                candidates.push(cand);
            }
        }
    }
    candidates
}

fn all_subsets_known(cand: &[ProductId], known: &BTreeSet<&[ProductId]>) -> bool {
    // The two subsets that drop one of the last two items are the join parents.
    let mut scratch = Vec::with_capacity(cand.len() - 1);
    (0..cand.len().saturating_sub(2)).all(|skip| {
        scratch.clear();
        scratch.extend(cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &p)| p));
        known.contains(scratch.as_slice())
    })
}
