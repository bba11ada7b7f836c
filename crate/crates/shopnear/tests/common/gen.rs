//! Strategies for random wire values, shared by the property tests and the
//! acceptance run.

use std::fmt::Debug;

use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use shopnear::api::wire::*;
use shopnear::model::{NotificationKind, Role};
use shopnear_core::{Bill, Money, NotificationId, OrderId, OrderLine, OrderState, ProductId, ShopId, UserId};

pub fn roundtrip<T: Serialize + DeserializeOwned + PartialEq + Debug>(value: &T) -> serde_json::Value {
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(value, &back, "round trip through {text}");
    serde_json::from_str(&text).unwrap()
}

pub fn money() -> impl Strategy<Value = Money> {
    (-10_000_000i64..10_000_000).prop_map(Money::from_cents)
}

pub fn name() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9 '\\-é]{0,15}"
}

pub fn item() -> impl Strategy<Value = ItemRef> {
    (1u64..1000, name()).prop_map(|(id, name)| ItemRef { id: ProductId(id), name })
}

pub fn unit() -> impl Strategy<Value = f64> {
    (0u32..=1_000_000).prop_map(|n| n as f64 / 1_000_000.0)
}

pub fn rule() -> impl Strategy<Value = RuleView> {
    (prop::collection::vec(item(), 1..4), prop::collection::vec(item(), 1..4), unit(), unit()).prop_map(
        |(antecedent, consequent, support, confidence)| RuleView { antecedent, consequent, support, confidence },
    )
}

pub fn order_state() -> impl Strategy<Value = OrderState> {
    prop_oneof![Just(OrderState::Pending), Just(OrderState::Confirmed), Just(OrderState::Declined)]
}

pub fn line() -> impl Strategy<Value = OrderLine> {
    (1u64..100, 1u32..50, (0i64..100_000).prop_map(Money::from_cents)).prop_map(|(p, quantity, unit_price)| OrderLine {
        product_id: ProductId(p),
        quantity,
        unit_price,
    })
}

pub fn order_view() -> impl Strategy<Value = OrderView> {
    (
        1u64..1000,
        1u64..50,
        1u64..50,
        order_state(),
        prop::collection::vec(line(), 1..5),
        0u64..u32::MAX as u64,
        any::<bool>(),
    )
        .prop_map(|(id, shop, customer, state, lines, created_at, decided)| {
            let total = lines
                .iter()
                .fold(Money::ZERO, |acc, l| acc.checked_add(l.unit_price.checked_mul(l.quantity).unwrap()).unwrap());
            OrderView {
                id: OrderId(id),
                shop_id: ShopId(shop),
                customer_id: UserId(customer),
                state,
                lines,
                total,
                created_at,
                decided_at: (decided && state != OrderState::Pending).then_some(created_at + 1),
            }
        })
}

pub fn bill() -> impl Strategy<Value = Bill> {
    (1u64..1000, prop::collection::vec(line(), 1..5))
        .prop_map(|(id, lines)| Bill::for_order(OrderId(id), &lines).unwrap())
}

pub fn notification() -> impl Strategy<Value = Notification> {
    (
        1u64..10_000,
        1u64..100,
        prop_oneof![
            Just(NotificationKind::OrderPlaced),
            Just(NotificationKind::OrderConfirmed),
            Just(NotificationKind::OrderDeclined)
        ],
        1u64..1000,
        any::<u32>(),
        name(),
        proptest::option::of(bill()),
    )
        .prop_map(|(id, user, kind, order, at, body, bill)| Notification {
            id: NotificationId(id),
            recipient_user_id: UserId(user),
            kind,
            order_id: OrderId(order),
            created_at: at as u64,
            body,
            bill,
        })
}

pub fn role() -> impl Strategy<Value = Role> {
    prop_oneof![Just(Role::Customer), Just(Role::Shopkeeper)]
}

pub fn decision_view() -> impl Strategy<Value = DecisionView> {
    (order_view(), proptest::option::of(bill())).prop_map(|(order, bill)| DecisionView { order, bill })
}

pub fn shop_hit() -> impl Strategy<Value = ShopHit> {
    (1u64..99, name(), -90.0f64..=90.0, -180.0f64..=180.0, 0.0f64..5.0)
        .prop_map(|(id, name, lat, lon, distance_km)| ShopHit { id: ShopId(id), name, lat, lon, distance_km })
}

pub fn shop_view() -> impl Strategy<Value = ShopView> {
    (1u64..99, name(), 1u64..99, -90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(id, name, owner, lat, lon)| ShopView {
        id: ShopId(id),
        name,
        owner_user_id: UserId(owner),
        lat,
        lon,
    })
}

pub fn product_view() -> impl Strategy<Value = ProductView> {
    (1u64..99, name(), (0i64..1_000_000).prop_map(Money::from_cents)).prop_map(|(id, name, price)| ProductView {
        product_id: ProductId(id),
        name,
        price,
    })
}

pub fn catalog_entry() -> impl Strategy<Value = CatalogEntry> {
    (1u64..99, name()).prop_map(|(id, name)| CatalogEntry { id: ProductId(id), name })
}

pub fn auth_response() -> impl Strategy<Value = AuthResponse> {
    (1u64..1000, role(), name(), "[0-9a-f]{32}", prop::collection::vec(1u64..50, 0..3)).prop_map(
        |(user, role, display_name, token, shops)| AuthResponse {
            user_id: UserId(user),
            role,
            display_name,
            token,
            shop_ids: shops.into_iter().map(ShopId).collect(),
        },
    )
}

pub fn error_code() -> impl Strategy<Value = &'static str> {
    prop_oneof![
        Just("validation"),
        Just("not_found"),
        Just("conflict"),
        Just("invalid_state"),
        Just("forbidden"),
        Just("unauthenticated"),
        Just("internal"),
    ]
}

pub fn register_request() -> impl Strategy<Value = RegisterRequest> {
    (role(), name(), name(), proptest::option::of((name(), -90.0f64..=90.0, -180.0f64..=180.0))).prop_map(
        |(role, display_name, password, shop)| RegisterRequest {
            role,
            contact: format!("{display_name}@x.test"),
            display_name,
            password,
            shop: shop.map(|(name, lat, lon)| NewShop { name, lat, lon }),
        },
    )
}

pub fn login_request() -> impl Strategy<Value = LoginRequest> {
    (1u64..1000, name()).prop_map(|(id, password)| LoginRequest { user_id: UserId(id), password })
}

pub fn set_price_request() -> impl Strategy<Value = SetPriceRequest> {
    (money(), any::<bool>(), name()).prop_map(|(price, by_id, name)| SetPriceRequest {
        product_id: by_id.then_some(ProductId(3)),
        name: (!by_id).then_some(name),
        price,
    })
}

pub fn place_order_request() -> impl Strategy<Value = PlaceOrderRequest> {
    (1u64..50, prop::collection::vec((1u64..99, 1u32..20), 1..4)).prop_map(|(shop, lines)| PlaceOrderRequest {
        shop_id: ShopId(shop),
        lines: lines.into_iter().map(|(p, quantity)| LineRequest { product_id: ProductId(p), quantity }).collect(),
    })
}

pub fn mine_output() -> impl Strategy<Value = MineOutput> {
    (
        prop::collection::vec(rule(), 0..4),
        prop::collection::vec((prop::collection::vec(item(), 1..3), 1usize..40), 0..4),
    )
        .prop_map(|(rules, sets)| {
            let transactions = 40;
            MineOutput {
                shop_id: ShopId(1),
                transactions,
                frequent_itemsets: sets
                    .into_iter()
                    .map(|(items, support_count)| FrequentView {
                        items,
                        support_count,
                        support: support_count as f64 / transactions as f64,
                    })
                    .collect(),
                rules,
            }
        })
}
