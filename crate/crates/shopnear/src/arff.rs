//! ARFF export of a shop's transactions for external mining tools.
//!
//! Layout (byte-exact):
//!
//! ```text
//! @relation basket_<shop_id>
//!
//! @attribute <product name> {t,f}      one line per catalog product, by id
//!
//! @data
//! t,f,t                               one row per transaction, in log order
//! ```
//!
//! Names that are not plain identifiers are single-quoted with `\` escapes.

use std::fmt::Write as _;

use shopnear_core::ShopId;

use crate::error::Result;
use crate::store::StoreState;

pub fn export_arff(state: &StoreState, shop: ShopId) -> Result<String> {
    let transactions = state.shop_transactions(shop)?;
    let catalog: Vec<_> = state.catalog().collect();

    let mut out = String::new();
    let _ = writeln!(out, "@relation basket_{shop}");
    out.push('\n');
    for product in &catalog {
        let _ = writeln!(out, "@attribute {} {{t,f}}", quote_name(&product.name));
    }
    out.push('\n');
    out.push_str("@data\n");
    for tx in &transactions {
        let row: Vec<&str> = catalog.iter().map(|p| if tx.contains(p.id) { "t" } else { "f" }).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn quote_name(name: &str) -> String {
    let plain = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if plain {
        return name.to_owned();
    }
    let mut quoted = String::with_capacity(name.len() + 2);
    quoted.push('\'');
    for c in name.chars() {
        if matches!(c, '\'' | '\\') {
            quoted.push('\\');
        }
        quoted.push(c);
    }
    quoted.push('\'');
    quoted
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote_name("bread"), "bread");
        assert_eq!(quote_name("plum cake"), "'plum cake'");
        assert_eq!(quote_name("baker's"), "'baker\\'s'");
        assert_eq!(quote_name("7up"), "'7up'");
    }
}
