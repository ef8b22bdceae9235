//! Built-in registry of event signatures (topic hashes), contract storage
//! slots and well-known contract addresses, overridable so other rebasing
//! tokens can be analyzed with the same pipeline.

use std::collections::BTreeMap;

/// keccak256("Transfer(address,address,uint256)").
pub const TRANSFER_TOPIC: &str =
    "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef";

/// keccak256("TransferShares(address,address,uint256)").
pub const TRANSFER_SHARES_TOPIC: &str =
    "0x9d9c909296d9c674451c0c24f02cb64981eb3b727f99865939192f880a755dcb";

/// Rebasing token (staked-ether pool) proxy address.
pub const STETH_CONTRACT: &str = "0xae7ab96520de3a18e5e111b5eaab095312d7fe84";

/// Non-rebasing wrapper token address.
pub const WSTETH_CONTRACT: &str = "0x7f39c581f595b53c5cb19bd0b3f8da6c935e2ca0";

/// keccak256("lido.Lido.depositedValidators").
pub const SLOT_DEPOSITED_VALIDATORS: &str =
    "0xe6e35175eb53fc006520a2a9c3e9711a7c00de6ff2c32dd31df8c5a24cac1b5c";

/// keccak256("lido.Lido.beaconValidators").
pub const SLOT_BEACON_VALIDATORS: &str =
    "0x9f70001d82b6ef54e9d3725b46581c3eb9ee3aa02b941b6aa54d678a9ca35b10";

/// keccak256("lido.Lido.beaconBalance").
pub const SLOT_BEACON_BALANCE: &str =
    "0xa66d35f054e68143c18f32c990ed5cb972bb68a68f500cd2dd3a16bbf3686483";

/// keccak256("lido.Lido.bufferedEther").
pub const SLOT_BUFFERED_ETHER: &str =
    "0xed310af23f61f96daefbcd140b306c0bdbf8c178398299741687b90e794772b0";

/// keccak256("lido.StETH.totalShares").
pub const SLOT_TOTAL_SHARES: &str =
    "0xe3b4b636e601189b5f4c6742edf2538ac12bb61ed03e6da26949d69838fa447e";

/// The five state slots a snapshot needs, in canonical column order.
pub fn state_slots() -> [(&'static str, &'static str); 5] {
    [
        ("deposited_validators", SLOT_DEPOSITED_VALIDATORS),
        ("beacon_validators", SLOT_BEACON_VALIDATORS),
        ("beacon_balance", SLOT_BEACON_BALANCE),
        ("buffered_ether", SLOT_BUFFERED_ETHER),
        ("total_shares", SLOT_TOTAL_SHARES),
    ]
}

/// Named event signatures, seeded with the two built-ins and extendable
/// from configuration.
#[derive(Clone, Debug)]
pub struct EventRegistry {
    topics: BTreeMap<String, String>,
}

impl Default for EventRegistry {
    fn default() -> Self {
        let mut topics = BTreeMap::new();
        topics.insert("transfer".to_string(), TRANSFER_TOPIC.to_string());
        topics.insert(
            "transfer-shares".to_string(),
            TRANSFER_SHARES_TOPIC.to_string(),
        );
        EventRegistry { topics }
    }
}

impl EventRegistry {
    pub fn topic(&self, name: &str) -> Option<&str> {
        self.topics.get(name).map(String::as_str)
    }

    /// Adds or replaces a named topic.
    pub fn insert(&mut self, name: impl Into<String>, topic: impl Into<String>) {
        self.topics.insert(name.into(), topic.into());
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_topics_resolve() {
        let reg = EventRegistry::default();
        assert_eq!(reg.topic("transfer"), Some(TRANSFER_TOPIC));
        assert_eq!(reg.topic("transfer-shares"), Some(TRANSFER_SHARES_TOPIC));
        assert_eq!(reg.topic("nope"), None);
    }

    #[test]
    fn overrides_replace_builtins() {
        let mut reg = EventRegistry::default();
        reg.insert("transfer", "0xabc");
        assert_eq!(reg.topic("transfer"), Some("0xabc"));
        reg.insert("custom", "0xdef");
        assert_eq!(reg.names().count(), 3);
    }

    #[test]
    fn constants_are_wellformed() {
        for t in [
            TRANSFER_TOPIC,
            TRANSFER_SHARES_TOPIC,
            SLOT_DEPOSITED_VALIDATORS,
            SLOT_BEACON_VALIDATORS,
            SLOT_BEACON_BALANCE,
            SLOT_BUFFERED_ETHER,
            SLOT_TOTAL_SHARES,
        ] {
            assert!(t.starts_with("0x") && t.len() == 66);
            assert!(t[2..].bytes().all(|b| b.is_ascii_hexdigit()));
        }
        for c in [STETH_CONTRACT, WSTETH_CONTRACT] {
            assert!(c.starts_with("0x") && c.len() == 42);
        }
    }
}
