//! Order lifecycle and the per-recipient notification stream.
//!
//! Notifications are stored with the order change that caused them, inside
//! the same store write, so they survive restarts and are replayed to
//! subscribers that were offline. A broadcast channel only carries wake-ups;
//! subscribers always re-read the store after their cursor, which keeps
//! per-recipient delivery in id order even if wake-ups race or are dropped.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use shopnear_core::{Bill, Decision, NotificationId, OrderId, ProductId, ShopId, UserId};
use tokio::sync::broadcast;

use crate::clock::Clock;
use crate::error::Result;
use crate::model::{Notification, NotificationKind, Order};
use crate::outbox::{MessageKind, OutboxMessage, OutboxSink};
use crate::store::{Store, StoreState};

pub struct Orders {
    store: Arc<Store>,
    outbox: Arc<dyn OutboxSink>,
    clock: Arc<dyn Clock>,
    wake: broadcast::Sender<UserId>,
}

impl std::fmt::Debug for Orders {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Orders").field("store", &self.store).finish_non_exhaustive()
    }
}

fn bill_text(state: &StoreState, bill: &Bill) -> String {
    let mut text = String::new();
    for line in &bill.lines {
        let name = state.product(line.product_id).map(|p| p.name.as_str()).unwrap_or("?");
        let _ = writeln!(text, "  {name} x{} @ {} = {}", line.quantity, line.unit_price, line.line_total);
    }
    let _ = write!(text, "  total {}", bill.total);
    text
}

impl Orders {
    pub fn new(store: Arc<Store>, outbox: Arc<dyn OutboxSink>, clock: Arc<dyn Clock>) -> Self {
        let (wake, _) = broadcast::channel(256);
        Orders { store, outbox, clock, wake }
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    fn wake(&self, user: UserId) {
        // No receivers is fine: the notification is stored for replay.
        let _ = self.wake.send(user);
    }

    /// Places a pending order and notifies the shop owner.
    pub fn place_order(&self, customer: UserId, shop: ShopId, lines: &[(ProductId, u32)]) -> Result<Order> {
        let now = self.clock.now_ms();
        let (order, note) = self.store.write(|s| {
            let order = s.place_order(customer, shop, lines, now)?;
            let shop = s.shop(shop)?.clone();
            let customer_name = s.user(customer)?.display_name.clone();
            let body = format!("New order #{} from {} at {}", order.id, customer_name, shop.name);
            let note =
                s.push_notification(shop.owner_user_id, NotificationKind::OrderPlaced, order.id, body, None, now)?;
            Ok((order, note))
        })?;
        self.wake(note.recipient_user_id);
        Ok(order)
    }

    pub fn pending_queue(&self, shop: ShopId) -> Result<Vec<Order>> {
        self.store.read(|s| s.pending_queue(shop))
    }

    pub fn confirm(&self, order: OrderId, shopkeeper: UserId) -> Result<(Order, Bill)> {
        let (order, bill) = self.decide(order, shopkeeper, Decision::Confirm)?;
        Ok((order, bill.expect("confirmation always bills")))
    }

    pub fn decline(&self, order: OrderId, shopkeeper: UserId) -> Result<Order> {
        Ok(self.decide(order, shopkeeper, Decision::Decline)?.0)
    }

    fn decide(&self, order_id: OrderId, shopkeeper: UserId, decision: Decision) -> Result<(Order, Option<Bill>)> {
        let now = self.clock.now_ms();
        let (order, bill, note, message) = self.store.write(|s| {
            let (order, bill) = s.decide_order(order_id, shopkeeper, decision, now)?;
            let shop_name = s.shop(order.shop_id)?.name.clone();
            let contact = s.user(order.customer_id)?.contact.clone();
            let (kind, msg_kind, body) = match &bill {
                Some(bill) => (
                    NotificationKind::OrderConfirmed,
                    MessageKind::Confirmation,
                    format!("{shop_name} confirmed order #{order_id}.\n{}", bill_text(s, bill)),
                ),
                None => (
                    NotificationKind::OrderDeclined,
                    MessageKind::Apology,
                    format!("Sorry, {shop_name} could not accept order #{order_id}."),
                ),
            };
            let note = s.push_notification(order.customer_id, kind, order_id, body.clone(), bill.clone(), now)?;
            let message = OutboxMessage {
                recipient_contact: contact,
                recipient_user_id: order.customer_id,
                kind: msg_kind,
                order_id,
                body,
                bill: bill.clone(),
            };
            Ok((order, bill, note, message))
        })?;
        self.wake(note.recipient_user_id);
        if let Err(e) = self.outbox.deliver(&message) {
            // The decision is committed; the in-app notification still carries the outcome.
            tracing::warn!(order = %order_id, error = %e, "outbox delivery failed");
        }
        Ok((order, bill))
    }

    /// Stores a notification and wakes the recipient's streams.
    pub fn publish(
        &self,
        recipient: UserId,
        kind: NotificationKind,
        order: OrderId,
        body: String,
    ) -> Result<Notification> {
        let now = self.clock.now_ms();
        let note = self.store.write(|s| s.push_notification(recipient, kind, order, body, None, now))?;
        self.wake(recipient);
        Ok(note)
    }

    /// Opens `user`'s stream. Replays everything after `after`, or after the
    /// last notification already handed out when `after` is `None`.
    pub fn subscribe(&self, user: UserId, after: Option<NotificationId>) -> Result<Subscription> {
        let wake = self.wake.subscribe();
        let cursor = self.store.read(|s| -> Result<_> {
            s.user(user)?;
            Ok(after.or_else(|| s.delivered_cursor(user)))
        })?;
        Ok(Subscription { store: self.store.clone(), user, cursor, buffer: VecDeque::new(), wake })
    }
}

#[derive(Debug)]
pub struct Subscription {
    store: Arc<Store>,
    user: UserId,
    cursor: Option<NotificationId>,
    buffer: VecDeque<Notification>,
    wake: broadcast::Receiver<UserId>,
}

impl Subscription {
    pub fn user(&self) -> UserId {
        self.user
    }

    fn refill(&mut self) {
        if self.buffer.is_empty() {
            let fresh = self.store.read(|s| s.notifications_after(self.user, self.cursor));
            self.buffer.extend(fresh);
        }
    }

    fn hand_out(&mut self) -> Option<Notification> {
        let note = self.buffer.pop_front()?;
        self.cursor = Some(note.id);
        let (user, id) = (self.user, note.id);
        if let Err(e) = self.store.write(|s| {
            s.mark_delivered(user, id);
            Ok(())
        }) {
            tracing::warn!(%user, error = %e, "could not record delivery cursor");
        }
        Some(note)
    }

    /// Next notification if one is already stored, without waiting.
    pub fn try_next(&mut self) -> Option<Notification> {
        self.refill();
        self.hand_out()
    }

    /// Waits for the next notification. Returns `None` once the service
    /// that issued the subscription is gone.
    pub async fn next(&mut self) -> Option<Notification> {
        loop {
            if let Some(note) = self.try_next() {
                return Some(note);
            }
            match self.wake.recv().await {
                Ok(_) | Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return self.try_next(),
            }
        }
    }
}
