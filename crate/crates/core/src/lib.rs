//! Core algorithms for the shopnear service.
//!
//! Everything in this crate is pure computation over caller-owned data and
//! builds without `std` (only `alloc` is required). IO, persistence and the
//! network surface live in the `shopnear` crate.
//!
//! * [`geo`]: coordinates, haversine distance, radius search.
//! * [`miner`]: Apriori frequent itemsets and strong association rules.
//! * [`money`]: fixed-point two-decimal currency.
//! * [`order`]: the order decision state machine and billing.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod geo;
pub mod ids;
pub mod miner;
pub mod money;
pub mod order;

pub use geo::{distance_km, shops_within, GeoError, GeoPoint, DEFAULT_RADIUS_KM, EARTH_RADIUS_KM};
pub use ids::{NotificationId, OrderId, ProductId, ShopId, TransactionId, UserId};
pub use miner::{
    generate_rules, mine_frequent, mine_report, mine_shop, support, top_rules, AssociationRule, FrequentItemset,
    Itemset, MineError, MiningConfig, MiningReport, RankKey,
};
pub use money::{Money, MoneyError};
pub use order::{Bill, BillLine, Decision, OrderError, OrderLine, OrderState};
