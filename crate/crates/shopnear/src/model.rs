//! Persistent records. Everything here is serialized into snapshots.

use serde::{Deserialize, Serialize};
use shopnear_core::{
    Bill, GeoPoint, Itemset, Money, NotificationId, OrderId, OrderLine, OrderState, ProductId, ShopId, TransactionId,
    UserId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Customer,
    Shopkeeper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct User {
    pub id: UserId,
    pub role: Role,
    pub display_name: String,
    /// Hex salt and hex SHA-256 digest, `salt$digest`.
    pub credential_digest: String,
    /// Where outbox messages for this user are addressed.
    pub contact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shop {
    pub id: ShopId,
    pub name: String,
    pub owner_user_id: UserId,
    pub location: GeoPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub id: ProductId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShopProduct {
    pub shop_id: ShopId,
    pub product_id: ProductId,
    pub price: Money,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub id: TransactionId,
    pub shop_id: ShopId,
    pub itemset: Itemset,
    pub source_order_id: OrderId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    pub id: OrderId,
    pub shop_id: ShopId,
    pub customer_id: UserId,
    pub lines: Vec<OrderLine>,
    pub state: OrderState,
    /// Unix milliseconds.
    pub created_at: u64,
    pub decided_at: Option<u64>,
}

impl Order {
    pub fn basket(&self) -> Itemset {
        Itemset::new(self.lines.iter().map(|l| l.product_id)).expect("orders always have lines")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotificationKind {
    OrderPlaced,
    OrderConfirmed,
    OrderDeclined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Notification {
    pub id: NotificationId,
    pub recipient_user_id: UserId,
    pub kind: NotificationKind,
    pub order_id: OrderId,
    pub created_at: u64,
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bill: Option<Bill>,
}
