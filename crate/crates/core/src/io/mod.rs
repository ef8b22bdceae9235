//! File formats, the event/slot registry, and the node RPC client.

pub mod csv;
pub mod fetch;
pub mod registry;
