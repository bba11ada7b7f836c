use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{AssociationRule, FrequentItemset, Itemset, RankKey};
use crate::ids::ProductId;

/// Strong rules `A => F \ A` for every frequent `F` with at least two items
/// and every non-empty proper subset `A`, kept when confidence is strictly
/// greater than `min_confidence`.
///
/// `frequent` must be downward closed, as returned by
/// [`mine_frequent`](super::mine_frequent). Output is sorted by
/// (antecedent, consequent).
pub fn generate_rules(frequent: &[FrequentItemset], min_confidence: f64) -> Vec<AssociationRule> {
    let counts: BTreeMap<&[ProductId], usize> = frequent.iter().map(|f| (f.itemset.items(), f.support_count)).collect();

    let mut rules = Vec::new();
    for whole in frequent.iter().filter(|f| f.itemset.len() >= 2) {
        let items = whole.itemset.items();
        let width = items.len();
        assert!(width < 64, "itemset of {width} items is too wide for rule generation");
        let full: u64 = (1 << width) - 1;
        for mask in 1..full {
            let (lhs, rhs): (Vec<_>, Vec<_>) = items.iter().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
            let antecedent: Vec<ProductId> = lhs.into_iter().map(|(_, &p)| p).collect();
            let consequent: Vec<ProductId> = rhs.into_iter().map(|(_, &p)| p).collect();
            let Some(&lhs_count) = counts.get(antecedent.as_slice()) else {
                // Not downward closed; nothing sound to say about this split.
                continue;
            };
            let confidence = whole.support_count as f64 / lhs_count as f64;
            if confidence > min_confidence {
                rules.push(AssociationRule {
                    antecedent: Itemset::from_sorted(antecedent),
                    consequent: Itemset::from_sorted(consequent),
                    support: whole.support,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(canonical);
    rules
}

fn canonical(a: &AssociationRule, b: &AssociationRule) -> Ordering {
    a.antecedent.cmp(&b.antecedent).then_with(|| a.consequent.cmp(&b.consequent))
}

fn by_rank(key: RankKey) -> impl Fn(&AssociationRule, &AssociationRule) -> Ordering {
    move |a, b| {
        let support = b.support.total_cmp(&a.support);
        let confidence = b.confidence.total_cmp(&a.confidence);
        let primary = match key {
            RankKey::Support => support.then(confidence),
            RankKey::Confidence => confidence.then(support),
        };
        primary.then_with(|| canonical(a, b))
    }
}

/// The `k` best rules: highest support first, then highest confidence, then
/// canonical (antecedent, consequent) order.
pub fn top_rules(rules: Vec<AssociationRule>, k: usize) -> Vec<AssociationRule> {
    rank(rules, k, RankKey::Support)
}

pub(crate) fn rank(mut rules: Vec<AssociationRule>, k: usize, key: RankKey) -> Vec<AssociationRule> {
    rules.sort_by(by_rank(key));
    rules.truncate(k);
    rules
}
