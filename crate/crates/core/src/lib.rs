//! Collective debugging telemetry: capture what developers do while debugging,
//! keep it in an embedded store, and mine it for graphs, search and metrics.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ingestion;
pub mod metrics;
pub mod model;
pub mod search;
pub mod service;
pub mod store;

pub use error::{Error, Result};
pub use store::{QueryFilter, Store, StoreSnapshot};
