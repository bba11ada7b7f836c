//! Order decisions and billing.
//!
//! An order starts `Pending` and is decided exactly once, either way.
//! `Confirmed` and `Declined` are terminal.

use alloc::vec::Vec;
use core::fmt;

use crate::ids::{OrderId, ProductId};
use crate::money::Money;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OrderState {
    Pending,
    Confirmed,
    Declined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Confirm,
    Decline,
}

impl OrderState {
    pub fn is_terminal(self) -> bool {
        !matches!(self, OrderState::Pending)
    }

    pub fn decide(self, decision: Decision) -> Result<OrderState, OrderError> {
        match self {
            OrderState::Pending => Ok(match decision {
                Decision::Confirm => OrderState::Confirmed,
                Decision::Decline => OrderState::Declined,
            }),
            terminal => Err(OrderError::AlreadyDecided(terminal)),
        }
    }
}

impl fmt::Display for OrderState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderState::Pending => "pending",
            OrderState::Confirmed => "confirmed",
            OrderState::Declined => "declined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    AlreadyDecided(OrderState),
    NoLines,
    ZeroQuantity(ProductId),
    DuplicateLine(ProductId),
    Overflow,
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::AlreadyDecided(s) => write!(f, "order is already {s}"),
            OrderError::NoLines => f.write_str("order has no lines"),
            OrderError::ZeroQuantity(p) => write!(f, "quantity for product {p} must be at least 1"),
            OrderError::DuplicateLine(p) => write!(f, "product {p} appears on more than one line"),
            OrderError::Overflow => f.write_str("bill total overflow"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OrderError {}

/// One basket line with the unit price quoted when the order was placed.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderLine {
    pub product_id: ProductId,
    pub quantity: u32,
    pub unit_price: Money,
}

/// Checks the basket shape: non-empty, every quantity at least one, no product twice.
pub fn validate_lines(lines: &[OrderLine]) -> Result<(), OrderError> {
    if lines.is_empty() {
        return Err(OrderError::NoLines);
    }
    let mut seen: Vec<ProductId> = Vec::with_capacity(lines.len());
    for line in lines {
        if line.quantity == 0 {
            return Err(OrderError::ZeroQuantity(line.product_id));
        }
        if seen.contains(&line.product_id) {
            return Err(OrderError::DuplicateLine(line.product_id));
        }
        seen.push(line.product_id);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BillLine {
    pub product_id: ProductId,
    pub quantity: u32,
    pub unit_price: Money,
    pub line_total: Money,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bill {
    pub order_id: OrderId,
    pub lines: Vec<BillLine>,
    pub total: Money,
}

impl Bill {
    pub fn for_order(order_id: OrderId, lines: &[OrderLine]) -> Result<Bill, OrderError> {
        let mut total = Money::ZERO;
        let mut bill_lines = Vec::with_capacity(lines.len());
        for line in lines {
            let line_total = line.unit_price.checked_mul(line.quantity).ok_or(OrderError::Overflow)?;
            total = total.checked_add(line_total).ok_or(OrderError::Overflow)?;
            bill_lines.push(BillLine {
                product_id: line.product_id,
                quantity: line.quantity,
                unit_price: line.unit_price,
                line_total,
            });
        }
        Ok(Bill { order_id, lines: bill_lines, total })
    }
}
