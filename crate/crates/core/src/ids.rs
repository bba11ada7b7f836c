//! Identifier newtypes shared by the catalog, the miner and the order flow.

use core::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
        #[cfg_attr(feature = "serde", serde(transparent))]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<u64> for $name {
            fn from(raw: u64) -> Self {
                Self(raw)
            }
        }
    };
}

id_type!(
    /// Catalog product. The miner orders items by this id.
    ProductId
);
id_type!(ShopId);
id_type!(UserId);
id_type!(OrderId);
id_type!(TransactionId);
id_type!(
    /// Monotonic across the whole service, so per-recipient order follows id order.
    NotificationId
);
