//! JSON bodies exchanged over HTTP. Every response is wrapped in an
//! [`Envelope`]; money travels as two-decimal strings, ratios as numbers.

use serde::{Deserialize, Serialize};
use shopnear_core::{Bill, Money, OrderId, OrderLine, OrderState, ProductId, ShopId, UserId};

use crate::model::{Order, Role};

pub use crate::model::Notification;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireError {
    pub code: String,
    pub message: String,
}

/// `{"ok": true, "data": ...}` or `{"ok": false, "error": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<WireError>,
}

impl<T> Envelope<T> {
    pub fn success(data: T) -> Self {
        Envelope { ok: true, data: Some(data), error: None }
    }

    pub fn failure(code: &str, message: impl Into<String>) -> Self {
        Envelope { ok: false, data: None, error: Some(WireError { code: code.to_owned(), message: message.into() }) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewShop {
    pub name: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegisterRequest {
    pub role: Role,
    pub display_name: String,
    pub contact: String,
    pub password: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shop: Option<NewShop>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoginRequest {
    pub user_id: UserId,
    pub password: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthResponse {
    pub user_id: UserId,
    pub role: Role,
    pub display_name: String,
    pub token: String,
    pub shop_ids: Vec<ShopId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShopHit {
    pub id: ShopId,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub distance_km: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShopView {
    pub id: ShopId,
    pub name: String,
    pub owner_user_id: UserId,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemRef {
    pub id: ProductId,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleView {
    pub antecedent: Vec<ItemRef>,
    pub consequent: Vec<ItemRef>,
    pub support: f64,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequentView {
    pub items: Vec<ItemRef>,
    pub support_count: usize,
    pub support: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MineOutput {
    pub shop_id: ShopId,
    pub transactions: usize,
    pub frequent_itemsets: Vec<FrequentView>,
    pub rules: Vec<RuleView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductView {
    pub product_id: ProductId,
    pub name: String,
    pub price: Money,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: ProductId,
    pub name: String,
}

/// Set a price by product id, or by catalog name (added to the catalog when new).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPriceRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_id: Option<ProductId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub price: Money,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRequest {
    pub product_id: ProductId,
    pub quantity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceOrderRequest {
    pub shop_id: ShopId,
    pub lines: Vec<LineRequest>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderView {
    pub id: OrderId,
    pub shop_id: ShopId,
    pub customer_id: UserId,
    pub state: OrderState,
    pub lines: Vec<OrderLine>,
    pub total: Money,
    pub created_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decided_at: Option<u64>,
}

impl From<&Order> for OrderView {
    fn from(o: &Order) -> Self {
        let total = Bill::for_order(o.id, &o.lines).map(|b| b.total).unwrap_or(Money::ZERO);
        OrderView {
            id: o.id,
            shop_id: o.shop_id,
            customer_id: o.customer_id,
            state: o.state,
            lines: o.lines.clone(),
            total,
            created_at: o.created_at,
            decided_at: o.decided_at,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionView {
    pub order: OrderView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bill: Option<Bill>,
}
