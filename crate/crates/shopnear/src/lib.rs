//! Location-aware shop service: nearby-shop search, basket-mined product
//! recommendations and a confirm/decline order queue with live
//! notifications, exposed as a JSON HTTP API and an operator CLI.
//!
//! The algorithms live in [`shopnear_core`]; this crate adds persistence,
//! messaging and the network surface.

pub mod api;
pub mod arff;
pub mod auth;
pub mod clock;
pub mod config;
pub mod error;
pub mod model;
pub mod orders;
pub mod outbox;
pub mod recommend;
pub mod seed;
pub mod snapshot;
pub mod store;

pub use error::{Error, Result};
pub use shopnear_core as core;
