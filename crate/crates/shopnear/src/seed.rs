//! Reproducible demo and load data.
//!
//! Everything random is drawn from one ChaCha stream and all timestamps
//! come from a [`StepClock`], so the same [`SeedSpec`] always produces a
//! byte-identical snapshot.

use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use shopnear_core::{GeoPoint, Money, ProductId, ShopId, UserId};

use crate::auth::Salt;
use crate::clock::StepClock;
use crate::error::Result;
use crate::model::Role;
use crate::orders::Orders;
use crate::outbox::MemoryOutbox;
use crate::store::Store;

/// 2024-01-01T00:00:00Z in unix milliseconds.
const SEED_EPOCH_MS: u64 = 1_704_067_200_000;

pub const SEED_PASSWORD: &str = "shopnear";
pub const DEMO_PASSWORD: &str = "demo";

const BAKERY_ITEMS: &[&str] = &[
    "bread",
    "cake",
    "milk",
    "croissant",
    "muffin",
    "cookies",
    "doughnut",
    "baguette",
    "bun",
    "brownie",
    "pastry",
    "rusk",
    "cupcake",
    "pie",
    "tart",
    "eggs",
    "butter",
    "cheese",
    "jam",
    "cream",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeedSpec {
    pub seed: u64,
    pub shops: usize,
    pub products: usize,
    pub customers: usize,
    pub orders: usize,
    /// Share of generated orders that end confirmed; the rest are declined.
    pub confirm_ratio: f64,
    pub center_lat: f64,
    pub center_lon: f64,
    /// Shops are scattered within this many degrees of the center.
    pub spread_deg: f64,
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec {
            seed: 42,
            shops: 4,
            products: 12,
            customers: 10,
            orders: 200,
            confirm_ratio: 0.85,
            center_lat: 28.6139,
            center_lon: 77.2090,
            spread_deg: 0.05,
        }
    }
}

fn product_name(i: usize) -> String {
    match BAKERY_ITEMS.get(i) {
        Some(name) => (*name).to_owned(),
        None => format!("{} {}", BAKERY_ITEMS[i % BAKERY_ITEMS.len()], i / BAKERY_ITEMS.len() + 1),
    }
}

fn seeded_orders(store: Arc<Store>) -> Orders {
    Orders::new(store, Arc::new(MemoryOutbox::default()), Arc::new(StepClock::starting_at(SEED_EPOCH_MS)))
}

pub fn seed(spec: &SeedSpec) -> Result<Store> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let store = Arc::new(Store::in_memory());
    let center = GeoPoint::new(spec.center_lat, spec.center_lon)?;

    let products: Vec<ProductId> =
        store.write(|s| (0..spec.products.max(1)).map(|i| s.add_product(&product_name(i)).map(|p| p.id)).collect())?;

    let mut shops: Vec<(ShopId, UserId, Vec<ProductId>)> = Vec::new();
    for i in 0..spec.shops {
        let salt: Salt = rng.random();
        let lat = (center.lat_deg() + rng.random_range(-1.0..=1.0) * spec.spread_deg).clamp(-90.0, 90.0);
        let lon = (center.lon_deg() + rng.random_range(-1.0..=1.0) * spec.spread_deg).clamp(-180.0, 180.0);
        let mut stocked = products.clone();
        stocked.shuffle(&mut rng);
        stocked.truncate(rng.random_range(products.len().min(2)..=products.len()));
        stocked.sort();
        let prices: Vec<Money> =
            stocked.iter().map(|_| Money::from_cents(rng.random_range(5..=200) * 100 / 5 * 5)).collect();
        let (shop, owner) = store.write(|s| {
            let n = i + 1;
            let owner = s.register_user(
                Role::Shopkeeper,
                &format!("Baker {n}"),
                &format!("baker{n}@shops.test"),
                SEED_PASSWORD,
                &salt,
            )?;
            let shop = s.register_shop(owner.id, &format!("Bakery {n}"), GeoPoint::new(lat, lon)?)?;
            for (&p, &price) in stocked.iter().zip(&prices) {
                s.set_price(shop.id, p, price)?;
            }
            Ok((shop.id, owner.id))
        })?;
        shops.push((shop, owner, stocked));
    }

    let mut customers = Vec::new();
    for i in 0..spec.customers {
        let salt: Salt = rng.random();
        let n = i + 1;
        let id = store.write(|s| {
            s.register_user(
                Role::Customer,
                &format!("Customer {n}"),
                &format!("customer{n}@mail.test"),
                SEED_PASSWORD,
                &salt,
            )
        })?;
        customers.push(id.id);
    }

    if shops.is_empty() || customers.is_empty() {
        return Ok(Arc::into_inner(store).expect("no other handles"));
    }
    let orders = seeded_orders(store.clone());
    for _ in 0..spec.orders {
        let (shop, owner, stocked) = shops.choose(&mut rng).expect("non-empty");
        let customer = *customers.choose(&mut rng).expect("non-empty");
        let basket = pick_basket(&mut rng, stocked);
        let lines: Vec<(ProductId, u32)> = basket.into_iter().map(|p| (p, rng.random_range(1..=3))).collect();
        let order = orders.place_order(customer, *shop, &lines)?;
        if rng.random_bool(spec.confirm_ratio.clamp(0.0, 1.0)) {
            orders.confirm(order.id, *owner)?;
        } else {
            orders.decline(order.id, *owner)?;
        }
    }
    drop(orders);
    settle_feeds(&store)?;
    Ok(Arc::into_inner(store).expect("no other handles"))
}

/// Seeding is not a live session: mark every generated notification as
/// already handed out so subscribers start with an empty feed.
fn settle_feeds(store: &Store) -> Result<()> {
    store.write(|s| {
        let users: Vec<UserId> = s.users().map(|u| u.id).collect();
        for user in users {
            if let Some(last) = s.notifications_after(user, None).last() {
                s.mark_delivered(user, last.id);
            }
        }
        Ok(())
    })
}

/// Baskets lean towards neighbouring products in the shop's list so the
/// generated history has associations worth mining.
fn pick_basket(rng: &mut ChaCha8Rng, stocked: &[ProductId]) -> Vec<ProductId> {
    let size = rng.random_range(1..=stocked.len().min(4));
    let anchor = rng.random_range(0..stocked.len());
    let mut basket = vec![stocked[anchor]];
    while basket.len() < size {
        let next = if rng.random_bool(0.6) {
            stocked[(anchor + basket.len()) % stocked.len()]
        } else {
            *stocked.choose(rng).expect("non-empty")
        };
        if !basket.contains(&next) {
            basket.push(next);
        } else if rng.random_bool(0.5) {
            break;
        }
    }
    basket
}

/// Identifiers of the fixed demo dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoInfo {
    pub shop_id: ShopId,
    pub shopkeeper_id: UserId,
    pub customer_id: UserId,
    pub second_shop_id: ShopId,
    pub second_shopkeeper_id: UserId,
    pub password: String,
}

/// Fixed demo data. "Demo Bakery" carries the four-basket history
/// {bread, milk}, {bread}, {bread, milk, cake}, {milk}; a second shop about
/// 2 km away has a small history of its own.
pub fn demo() -> Result<(Store, DemoInfo)> {
    let store = Arc::new(Store::in_memory());
    let salt = |n: u8| -> Salt { [n; 16] };
    let info = store.write(|s| {
        let catalog: Vec<ProductId> =
            BAKERY_ITEMS[..8].iter().map(|name| s.add_product(name).map(|p| p.id)).collect::<Result<_>>()?;
        let (bread, cake, milk, croissant, muffin, cookies) =
            (catalog[0], catalog[1], catalog[2], catalog[3], catalog[4], catalog[5]);

        let baker = s.register_user(Role::Shopkeeper, "Demo Baker", "baker@demo.test", DEMO_PASSWORD, &salt(1))?;
        let shop = s.register_shop(baker.id, "Demo Bakery", GeoPoint::new(28.6139, 77.2090)?)?;
        for (p, cents) in [(bread, 1000), (cake, 5000), (milk, 1200), (croissant, 1500)] {
            s.set_price(shop.id, p, Money::from_cents(cents))?;
        }

        let other = s.register_user(Role::Shopkeeper, "Corner Baker", "corner@demo.test", DEMO_PASSWORD, &salt(2))?;
        let second = s.register_shop(other.id, "Corner Cakes", GeoPoint::new(28.6300, 77.2200)?)?;
        for (p, cents) in [(bread, 1100), (cake, 4500), (muffin, 2500), (cookies, 3000)] {
            s.set_price(second.id, p, Money::from_cents(cents))?;
        }

        let customer =
            s.register_user(Role::Customer, "Demo Customer", "customer@demo.test", DEMO_PASSWORD, &salt(3))?;
        Ok(DemoInfo {
            shop_id: shop.id,
            shopkeeper_id: baker.id,
            customer_id: customer.id,
            second_shop_id: second.id,
            second_shopkeeper_id: other.id,
            password: DEMO_PASSWORD.to_owned(),
        })
    })?;

    let ids = |names: &[&str]| -> Vec<(ProductId, u32)> {
        store.read(|s| names.iter().map(|n| (s.product_by_name(n).expect("demo product").id, 1)).collect())
    };
    let orders = seeded_orders(store.clone());
    let history: [(ShopId, UserId, &[&str]); 7] = [
        (info.shop_id, info.shopkeeper_id, &["bread", "milk"]),
        (info.shop_id, info.shopkeeper_id, &["bread"]),
        (info.shop_id, info.shopkeeper_id, &["bread", "milk", "cake"]),
        (info.shop_id, info.shopkeeper_id, &["milk"]),
        (info.second_shop_id, info.second_shopkeeper_id, &["cake", "cookies"]),
        (info.second_shop_id, info.second_shopkeeper_id, &["cake", "cookies", "muffin"]),
        (info.second_shop_id, info.second_shopkeeper_id, &["bread", "muffin"]),
    ];
    for (shop, owner, basket) in history {
        let order = orders.place_order(info.customer_id, shop, &ids(basket))?;
        orders.confirm(order.id, owner)?;
    }
    drop(orders);
    settle_feeds(&store)?;
    let store = Arc::into_inner(store).expect("no other handles");
    Ok((store, info))
}
