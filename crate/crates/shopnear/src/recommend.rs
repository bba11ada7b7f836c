//! Mining a shop's history into wire-ready recommendations. The HTTP
//! endpoint and the `mine` command both go through here, so they always agree.

use shopnear_core::{mine_report, Itemset, MiningConfig, ShopId};

use crate::api::wire::{FrequentView, ItemRef, MineOutput, RuleView};
use crate::error::Result;
use crate::store::StoreState;

fn refs(state: &StoreState, set: &Itemset) -> Result<Vec<ItemRef>> {
    set.items().iter().map(|&id| Ok(ItemRef { id, name: state.product(id)?.name.clone() })).collect()
}

pub fn mine_shop_output(state: &StoreState, shop: ShopId, config: &MiningConfig) -> Result<MineOutput> {
    let transactions = state.shop_transactions(shop)?;
    let report = mine_report(&transactions, config)?;
    let frequent_itemsets = report
        .frequent
        .iter()
        .map(|f| {
            Ok(FrequentView { items: refs(state, &f.itemset)?, support_count: f.support_count, support: f.support })
        })
        .collect::<Result<_>>()?;
    let rules = report
        .rules
        .iter()
        .map(|r| {
            Ok(RuleView {
                antecedent: refs(state, &r.antecedent)?,
                consequent: refs(state, &r.consequent)?,
                support: r.support,
                confidence: r.confidence,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MineOutput { shop_id: shop, transactions: transactions.len(), frequent_itemsets, rules })
}

/// Aligned plain-text rendering of a mining run.
pub fn render_table(out: &MineOutput) -> String {
    let names = |items: &[ItemRef]| items.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(", ");
    let mut text = format!("shop {}: {} transactions\n\nfrequent itemsets\n", out.shop_id, out.transactions);
    let rows: Vec<(String, String, String)> = out
        .frequent_itemsets
        .iter()
        .map(|f| (format!("{{{}}}", names(&f.items)), f.support_count.to_string(), format!("{:.4}", f.support)))
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).chain([7]).max().unwrap_or(0);
    text.push_str(&format!("  {:<w0$}  {:>5}  {:>7}\n", "itemset", "count", "support"));
    for (set, count, support) in &rows {
        text.push_str(&format!("  {set:<w0$}  {count:>5}  {support:>7}\n"));
    }

    text.push_str("\ntop rules\n");
    let rows: Vec<(String, String, String, String)> = out
        .rules
        .iter()
        .map(|r| {
            (names(&r.antecedent), names(&r.consequent), format!("{:.4}", r.support), format!("{:.4}", r.confidence))
        })
        .collect();
    let wa = rows.iter().map(|r| r.0.len()).chain([2]).max().unwrap_or(0);
    let wc = rows.iter().map(|r| r.1.len()).chain([4]).max().unwrap_or(0);
    text.push_str(&format!("  {:<wa$}     {:<wc$}  {:>7}  {:>10}\n", "if", "then", "support", "confidence"));
    for (a, c, s, k) in &rows {
        text.push_str(&format!("  {a:<wa$}  => {c:<wc$}  {s:>7}  {k:>10}\n"));
    }
    if rows.is_empty() {
        text.push_str("  (none)\n");
    }
    text
}
