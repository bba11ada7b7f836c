//! In-process catalog, order book and transaction log.
//!
//! [`StoreState`] holds every record and implements the domain writes with
//! their integrity checks. [`Store`] wraps it for concurrent use: readers
//! share a lock, and each write runs against a copy that replaces the live
//! state only after the closure succeeded and, for file-backed stores, the
//! new snapshot reached disk. A failed write leaves nothing behind.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use shopnear_core::{
    Bill, Decision, GeoPoint, Itemset, Money, NotificationId, OrderId, OrderLine, OrderState, ProductId, ShopId,
    TransactionId, UserId,
};

use crate::auth::{self, Salt};
use crate::error::{Error, Result};
use crate::model::{Notification, NotificationKind, Order, Product, Role, Shop, ShopProduct, Transaction, User};
use crate::snapshot;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct NextIds {
    user: u64,
    shop: u64,
    product: u64,
    order: u64,
    transaction: u64,
    notification: u64,
}

fn bump(counter: &mut u64) -> u64 {
    *counter += 1;
    *counter
}

/// Product with its price at one shop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricedProduct {
    pub product_id: ProductId,
    pub name: String,
    pub price: Money,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StoreState {
    next: NextIds,
    users: BTreeMap<UserId, User>,
    shops: BTreeMap<ShopId, Shop>,
    products: BTreeMap<ProductId, Product>,
    prices: BTreeMap<ShopId, BTreeMap<ProductId, Money>>,
    orders: BTreeMap<OrderId, Order>,
    transactions: BTreeMap<TransactionId, Transaction>,
    notifications: BTreeMap<NotificationId, Notification>,
    delivered: BTreeMap<UserId, NotificationId>,
}

fn non_blank(field: &str, value: &str) -> Result<String> {
    let trimmed = value.trim();
    if trimmed.is_empty() {
        return Err(Error::Validation(format!("{field} must not be empty")));
    }
    Ok(trimmed.to_owned())
}

impl StoreState {
    // --- reads ---------------------------------------------------------

    pub fn user(&self, id: UserId) -> Result<&User> {
        self.users.get(&id).ok_or(Error::not_found("user", id.0))
    }

    pub fn users(&self) -> impl Iterator<Item = &User> {
        self.users.values()
    }

    pub fn shop(&self, id: ShopId) -> Result<&Shop> {
        self.shops.get(&id).ok_or(Error::not_found("shop", id.0))
    }

    pub fn shops(&self) -> impl Iterator<Item = &Shop> {
        self.shops.values()
    }

    pub fn product(&self, id: ProductId) -> Result<&Product> {
        self.products.get(&id).ok_or(Error::not_found("product", id.0))
    }

    /// The shared catalog in product-id order.
    pub fn catalog(&self) -> impl Iterator<Item = &Product> {
        self.products.values()
    }

    pub fn product_by_name(&self, name: &str) -> Option<&Product> {
        let name = name.trim();
        self.products.values().find(|p| p.name == name)
    }

    pub fn price(&self, shop: ShopId, product: ProductId) -> Option<Money> {
        self.prices.get(&shop).and_then(|m| m.get(&product)).copied()
    }

    pub fn list_products(&self, shop: ShopId) -> Result<Vec<PricedProduct>> {
        self.shop(shop)?;
        let Some(prices) = self.prices.get(&shop) else {
            return Ok(Vec::new());
        };
        prices
            .iter()
            .map(|(&product_id, &price)| {
                Ok(PricedProduct { product_id, name: self.product(product_id)?.name.clone(), price })
            })
            .collect()
    }

    pub fn order(&self, id: OrderId) -> Result<&Order> {
        self.orders.get(&id).ok_or(Error::not_found("order", id.0))
    }

    pub fn orders(&self) -> impl Iterator<Item = &Order> {
        self.orders.values()
    }

    /// Undecided orders of one shop, oldest first, ties by order id.
    pub fn pending_queue(&self, shop: ShopId) -> Result<Vec<Order>> {
        self.shop(shop)?;
        let mut queue: Vec<Order> =
            self.orders.values().filter(|o| o.shop_id == shop && o.state == OrderState::Pending).cloned().collect();
        queue.sort_by_key(|o| (o.created_at, o.id));
        Ok(queue)
    }

    pub fn transactions(&self) -> impl Iterator<Item = &Transaction> {
        self.transactions.values()
    }

    /// Mining input for one shop, in append order.
    pub fn shop_transactions(&self, shop: ShopId) -> Result<Vec<Itemset>> {
        self.shop(shop)?;
        Ok(self.transactions.values().filter(|t| t.shop_id == shop).map(|t| t.itemset.clone()).collect())
    }

    pub fn transaction_for_order(&self, order: OrderId) -> Option<&Transaction> {
        self.transactions.values().find(|t| t.source_order_id == order)
    }

    /// Notifications for `user` with id greater than `after`, in id order.
    pub fn notifications_after(&self, user: UserId, after: Option<NotificationId>) -> Vec<Notification> {
        let start = after.map_or(0, |id| id.0 + 1);
        self.notifications
            .range(NotificationId(start)..)
            .map(|(_, n)| n)
            .filter(|n| n.recipient_user_id == user)
            .cloned()
            .collect()
    }

    pub fn delivered_cursor(&self, user: UserId) -> Option<NotificationId> {
        self.delivered.get(&user).copied()
    }

    // --- writes --------------------------------------------------------

    pub fn register_user(
        &mut self,
        role: Role,
        display_name: &str,
        contact: &str,
        password: &str,
        salt: &Salt,
    ) -> Result<User> {
        let display_name = non_blank("display_name", display_name)?;
        let contact = non_blank("contact", contact)?;
        if password.is_empty() {
            return Err(Error::Validation("password must not be empty".into()));
        }
        let id = UserId(bump(&mut self.next.user));
        let user = User { id, role, display_name, credential_digest: auth::digest(password, salt), contact };
        self.users.insert(id, user.clone());
        Ok(user)
    }

    pub fn authenticate(&self, id: UserId, password: &str) -> Result<&User> {
        match self.users.get(&id) {
            Some(user) if auth::verify(password, &user.credential_digest) => Ok(user),
            _ => Err(Error::Unauthenticated("unknown user or wrong password".into())),
        }
    }

    pub fn register_shop(&mut self, owner: UserId, name: &str, location: GeoPoint) -> Result<Shop> {
        let name = non_blank("shop name", name)?;
        if self.user(owner)?.role != Role::Shopkeeper {
            return Err(Error::Validation(format!("user {owner} is not a shopkeeper")));
        }
        let id = ShopId(bump(&mut self.next.shop));
        let shop = Shop { id, name, owner_user_id: owner, location };
        self.shops.insert(id, shop.clone());
        Ok(shop)
    }

    pub fn add_product(&mut self, name: &str) -> Result<Product> {
        let name = non_blank("product name", name)?;
        if self.product_by_name(&name).is_some() {
            return Err(Error::Conflict(format!("product {name:?} already exists")));
        }
        let id = ProductId(bump(&mut self.next.product));
        let product = Product { id, name };
        self.products.insert(id, product.clone());
        Ok(product)
    }

    pub fn set_price(&mut self, shop: ShopId, product: ProductId, price: Money) -> Result<ShopProduct> {
        self.shop(shop)?;
        self.product(product)?;
        if price.is_negative() {
            return Err(Error::Validation(format!("price {price} is negative")));
        }
        self.prices.entry(shop).or_default().insert(product, price);
        Ok(ShopProduct { shop_id: shop, product_id: product, price })
    }

    /// Records a pending order with unit prices quoted from the shop's list.
    pub fn place_order(
        &mut self,
        customer: UserId,
        shop: ShopId,
        lines: &[(ProductId, u32)],
        now: u64,
    ) -> Result<Order> {
        if self.user(customer)?.role != Role::Customer {
            return Err(Error::Forbidden(format!("user {customer} is not a customer")));
        }
        self.shop(shop)?;
        let lines = lines
            .iter()
            .map(|&(product_id, quantity)| {
                let unit_price = self
                    .price(shop, product_id)
                    .ok_or_else(|| Error::Validation(format!("product {product_id} is not sold by shop {shop}")))?;
                Ok(OrderLine { product_id, quantity, unit_price })
            })
            .collect::<Result<Vec<_>>>()?;
        shopnear_core::order::validate_lines(&lines)?;
        let id = OrderId(bump(&mut self.next.order));
        let order = Order {
            id,
            shop_id: shop,
            customer_id: customer,
            lines,
            state: OrderState::Pending,
            created_at: now,
            decided_at: None,
        };
        self.orders.insert(id, order.clone());
        Ok(order)
    }

    /// Moves a pending order to its terminal state. On confirmation the
    /// basket is appended to the transaction log in the same write, and the
    /// bill is returned.
    pub fn decide_order(
        &mut self,
        order_id: OrderId,
        shopkeeper: UserId,
        decision: Decision,
        now: u64,
    ) -> Result<(Order, Option<Bill>)> {
        let order = self.order(order_id)?;
        let owner = self.shop(order.shop_id)?.owner_user_id;
        if owner != shopkeeper {
            return Err(Error::Forbidden(format!("user {shopkeeper} does not own shop {}", order.shop_id)));
        }
        let next_state = order.state.decide(decision)?;
        let bill = match decision {
            Decision::Confirm => Some(Bill::for_order(order_id, &order.lines)?),
            Decision::Decline => None,
        };
        let order = self.orders.get_mut(&order_id).expect("checked above");
        order.state = next_state;
        order.decided_at = Some(now);
        let order = order.clone();
        if next_state == OrderState::Confirmed {
            self.append_transaction(order.shop_id, order.basket(), order_id)?;
        }
        Ok((order, bill))
    }

    pub fn append_transaction(&mut self, shop: ShopId, itemset: Itemset, source: OrderId) -> Result<Transaction> {
        let order = self.order(source)?;
        if order.state != OrderState::Confirmed {
            return Err(Error::InvalidState(format!("order {source} is {}, not confirmed", order.state)));
        }
        if order.shop_id != shop {
            return Err(Error::Validation(format!("order {source} belongs to shop {}", order.shop_id)));
        }
        if let Some(item) = itemset.items().iter().find(|&&p| self.price(shop, p).is_none()) {
            return Err(Error::Validation(format!("product {item} is not listed at shop {shop}")));
        }
        if self.transaction_for_order(source).is_some() {
            return Err(Error::Conflict(format!("order {source} already has a transaction")));
        }
        let id = TransactionId(bump(&mut self.next.transaction));
        let tx = Transaction { id, shop_id: shop, itemset, source_order_id: source };
        self.transactions.insert(id, tx.clone());
        Ok(tx)
    }

    pub fn push_notification(
        &mut self,
        recipient: UserId,
        kind: NotificationKind,
        order_id: OrderId,
        body: String,
        bill: Option<Bill>,
        now: u64,
    ) -> Result<Notification> {
        self.user(recipient)?;
        let id = NotificationId(bump(&mut self.next.notification));
        let n = Notification { id, recipient_user_id: recipient, kind, order_id, created_at: now, body, bill };
        self.notifications.insert(id, n.clone());
        Ok(n)
    }

    pub fn mark_delivered(&mut self, user: UserId, upto: NotificationId) {
        let cursor = self.delivered.entry(user).or_insert(upto);
        if *cursor < upto {
            *cursor = upto;
        }
    }
}

/// Thread-safe handle over a [`StoreState`], optionally backed by a
/// snapshot file rewritten after every successful write.
#[derive(Debug)]
pub struct Store {
    state: RwLock<StoreState>,
    path: Option<PathBuf>,
    // Serialises writers so the copy-then-swap in `write` never loses an update.
    writer: Mutex<()>,
}

impl Store {
    pub fn in_memory() -> Self {
        Store::from_state(StoreState::default(), None)
    }

    fn from_state(state: StoreState, path: Option<PathBuf>) -> Self {
        Store { state: RwLock::new(state), path, writer: Mutex::new(()) }
    }

    /// Opens the snapshot at `path`, or starts empty (and creates the file)
    /// when it does not exist yet.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let state = if path.exists() { snapshot::load(&path)? } else { StoreState::default() };
        let store = Store::from_state(state, Some(path));
        store.persist(&store.state.read())?;
        Ok(store)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn read<R>(&self, f: impl FnOnce(&StoreState) -> R) -> R {
        f(&self.state.read())
    }

    pub fn write<R>(&self, f: impl FnOnce(&mut StoreState) -> Result<R>) -> Result<R> {
        let _writer = self.writer.lock();
        let mut draft = self.state.read().clone();
        let out = f(&mut draft)?;
        self.persist(&draft)?;
        *self.state.write() = draft;
        Ok(out)
    }

    fn persist(&self, state: &StoreState) -> Result<()> {
        match &self.path {
            Some(path) => snapshot::save(state, path),
            None => Ok(()),
        }
    }

    /// Writes the current state to `path`.
    pub fn snapshot_to(&self, path: &Path) -> Result<()> {
        snapshot::save(&self.state.read(), path)
    }

    pub fn snapshot_bytes(&self) -> Result<Vec<u8>> {
        snapshot::encode(&self.state.read())
    }

    /// Replaces the whole state with the snapshot at `path`. On any load
    /// error the current state is kept.
    pub fn restore(&self, path: &Path) -> Result<()> {
        let loaded = snapshot::load(path)?;
        let _writer = self.writer.lock();
        self.persist(&loaded)?;
        *self.state.write() = loaded;
        Ok(())
    }

    // Convenience wrappers for single-step writes.

    pub fn register_user(&self, role: Role, display_name: &str, contact: &str, password: &str) -> Result<User> {
        let salt = auth::random_salt();
        self.write(|s| s.register_user(role, display_name, contact, password, &salt))
    }

    pub fn register_shop(&self, owner: UserId, name: &str, location: GeoPoint) -> Result<Shop> {
        self.write(|s| s.register_shop(owner, name, location))
    }

    pub fn add_product(&self, name: &str) -> Result<Product> {
        self.write(|s| s.add_product(name))
    }

    pub fn set_price(&self, shop: ShopId, product: ProductId, price: Money) -> Result<ShopProduct> {
        self.write(|s| s.set_price(shop, product, price))
    }

    pub fn list_products(&self, shop: ShopId) -> Result<Vec<PricedProduct>> {
        self.read(|s| s.list_products(shop))
    }

    pub fn append_transaction(&self, shop: ShopId, itemset: Itemset, source: OrderId) -> Result<Transaction> {
        self.write(|s| s.append_transaction(shop, itemset, source))
    }

    pub fn shop_transactions(&self, shop: ShopId) -> Result<Vec<Itemset>> {
        self.read(|s| s.shop_transactions(shop))
    }
}
