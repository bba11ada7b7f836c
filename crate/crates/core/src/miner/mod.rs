//! Market basket mining.
//!
//! Two phases: [`mine_frequent`] finds every itemset whose support reaches the
//! support floor (level-wise Apriori), then [`generate_rules`] derives the
//! strong rules from them. [`top_rules`] applies the ranking and cut-off that
//! the recommendation surface uses, and [`mine_shop`] chains all three.
//!
//! Support is relative: `support_count / N`. Confidence is computed from
//! counts, `support_count(A ∪ B) / support_count(A)`, so it does not pick up
//! rounding from the two divisions by `N`.

mod apriori;
mod rules;

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::ids::ProductId;

pub use apriori::{mine_frequent, support};
pub use rules::{generate_rules, top_rules};

#[derive(Clone, Debug, PartialEq)]
pub enum MineError {
    EmptyItemset,
    NoTransactions,
    InvalidMinSupport(f64),
    InvalidMinConfidence(f64),
    InvalidTopK,
}

impl fmt::Display for MineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MineError::EmptyItemset => f.write_str("itemset must contain at least one item"),
            MineError::NoTransactions => f.write_str("support is undefined over zero transactions"),
            MineError::InvalidMinSupport(v) => write!(f, "min_support must be in (0, 1], got {v}"),
            MineError::InvalidMinConfidence(v) => write!(f, "min_confidence must be in [0, 1), got {v}"),
            MineError::InvalidTopK => f.write_str("top_k must be at least 1"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MineError {}

/// A non-empty set of products kept sorted ascending with no duplicates, so
/// equal sets compare equal and order lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<ProductId>", into = "Vec<ProductId>"))]
pub struct Itemset(Vec<ProductId>);

impl Itemset {
    pub fn new<I: IntoIterator<Item = ProductId>>(items: I) -> Result<Self, MineError> {
        let mut items: Vec<ProductId> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            return Err(MineError::EmptyItemset);
        }
        Ok(Itemset(items))
    }

    /// Caller guarantees `items` is non-empty, strictly ascending.
    pub(crate) fn from_sorted(items: Vec<ProductId>) -> Self {
        debug_assert!(!items.is_empty() && items.windows(2).all(|w| w[0] < w[1]));
        Itemset(items)
    }

    pub fn items(&self) -> &[ProductId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, item: ProductId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// `true` when every item of `self` is in `other`.
    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }
}

impl TryFrom<Vec<ProductId>> for Itemset {
    type Error = MineError;

    fn try_from(items: Vec<ProductId>) -> Result<Self, Self::Error> {
        Itemset::new(items)
    }
}

impl From<Itemset> for Vec<ProductId> {
    fn from(set: Itemset) -> Self {
        set.0
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

/// Merge-walk subset test over two ascending slices.
pub(crate) fn is_sorted_subset(needle: &[ProductId], hay: &[ProductId]) -> bool {
    let mut hay = hay.iter();
    'outer: for want in needle {
        for have in hay.by_ref() {
            match have.cmp(want) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequentItemset {
    pub itemset: Itemset,
    pub support_count: usize,
    pub support: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssociationRule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support: f64,
    pub confidence: f64,
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} (support {:.4}, confidence {:.4})",
            self.antecedent, self.consequent, self.support, self.confidence
        )
    }
}

/// Primary ordering key used by [`top_rules`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RankKey {
    /// Support, then confidence.
    #[default]
    Support,
    /// Confidence, then support.
    Confidence,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct MiningConfig {
    /// Inclusive floor on relative support, in (0, 1].
    pub min_support: f64,
    /// Strict floor on confidence, in [0, 1).
    pub min_confidence: f64,
    pub top_k: usize,
    pub rank_by: RankKey,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig { min_support: 0.3, min_confidence: 0.6, top_k: 5, rank_by: RankKey::Support }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), MineError> {
        check_min_support(self.min_support)?;
        if !(self.min_confidence.is_finite() && (0.0..1.0).contains(&self.min_confidence)) {
            return Err(MineError::InvalidMinConfidence(self.min_confidence));
        }
        if self.top_k == 0 {
            return Err(MineError::InvalidTopK);
        }
        Ok(())
    }
}

pub(crate) fn check_min_support(min_support: f64) -> Result<(), MineError> {
    if min_support.is_finite() && min_support > 0.0 && min_support <= 1.0 {
        Ok(())
    } else {
        Err(MineError::InvalidMinSupport(min_support))
    }
}

/// Full output of one mining run: all frequent itemsets plus the ranked rules.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MiningReport {
    pub transactions: usize,
    pub frequent: Vec<FrequentItemset>,
    pub rules: Vec<AssociationRule>,
}

/// Recommendation pipeline for one shop's history.
///
/// An empty history is a new shop and yields no rules rather than an error.
pub fn mine_shop(transactions: &[Itemset], config: &MiningConfig) -> Result<Vec<AssociationRule>, MineError> {
    Ok(mine_report(transactions, config)?.rules)
}

pub fn mine_report(transactions: &[Itemset], config: &MiningConfig) -> Result<MiningReport, MineError> {
    config.validate()?;
    if transactions.is_empty() {
        return Ok(MiningReport::default());
    }
    let frequent = mine_frequent(transactions, config.min_support)?;
    let rules = generate_rules(&frequent, config.min_confidence);
    let rules = rules::rank(rules, config.top_k, config.rank_by);
    Ok(MiningReport { transactions: transactions.len(), frequent, rules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(ids: &[u64]) -> Itemset {
        Itemset::new(ids.iter().copied().map(ProductId)).unwrap()
    }

    #[test]
    fn itemset_is_canonical() {
        assert_eq!(set(&[3, 1, 3, 2]), set(&[1, 2, 3]));
        assert_eq!(Itemset::new(vec![]), Err(MineError::EmptyItemset));
        assert!(set(&[1, 3]).is_subset_of(&set(&[1, 2, 3])));
        assert!(!set(&[1, 4]).is_subset_of(&set(&[1, 2, 3])));
        assert!(!set(&[0]).is_subset_of(&set(&[1])));
        assert_eq!(alloc::format!("{}", set(&[2, 1])), "{1,2}");
    }

    #[test]
    fn config_defaults_and_bounds() {
        let c = MiningConfig::default();
        assert_eq!((c.min_support, c.min_confidence, c.top_k), (0.3, 0.6, 5));
        assert!(c.validate().is_ok());
        for bad in [0.0, -0.1, 1.01, f64::NAN] {
            let cfg = MiningConfig { min_support: bad, ..c };
            assert!(matches!(cfg.validate(), Err(MineError::InvalidMinSupport(_))));
        }
        assert!(MiningConfig { min_support: 1.0, ..c }.validate().is_ok());
        for bad in [1.0, -0.01, f64::INFINITY] {
            let cfg = MiningConfig { min_confidence: bad, ..c };
            assert!(matches!(cfg.validate(), Err(MineError::InvalidMinConfidence(_))));
        }
        assert!(MiningConfig { min_confidence: 0.0, ..c }.validate().is_ok());
        assert_eq!(MiningConfig { top_k: 0, ..c }.validate(), Err(MineError::InvalidTopK));
    }

    #[test]
    fn new_shop_has_no_rules() {
        assert_eq!(mine_shop(&[], &MiningConfig::default()), Ok(vec![]));
        let bad = MiningConfig { top_k: 0, ..MiningConfig::default() };
        assert_eq!(mine_shop(&[], &bad), Err(MineError::InvalidTopK));
    }
}
