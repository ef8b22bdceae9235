//! 20-byte account identifiers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// An Ethereum-style address. Stored as raw bytes; rendered lowercase with
/// the 0x prefix. Checksummed input is accepted but not preserved.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AccountId([u8; 20]);

/// The mint source: transfers from this address create tokens.
pub const ZERO_ADDRESS: AccountId = AccountId([0u8; 20]);

/// Lido's burning address (introduced with the withdrawal upgrade). It only
/// ever receives; it is excluded from velocity aggregation.
pub const BURNING_ADDRESS: AccountId = AccountId([
    0xd1, 0x5a, 0x67, 0x23, 0x19, 0xcf, 0x03, 0x52, 0x56, 0x0e, 0xe7, 0x6d, 0x9e, 0x89, 0xea,
    0xb0, 0x88, 0x90, 0x46, 0xd3,
]);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a valid 0x-prefixed 20-byte address: {0:?}")]
pub struct BadAddress(pub String);

impl AccountId {
    pub const fn from_bytes(bytes: [u8; 20]) -> Self {
        AccountId(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        *self == ZERO_ADDRESS
    }

    pub fn is_burning(&self) -> bool {
        *self == BURNING_ADDRESS
    }

    /// Tiny deterministic address space for synthetic ledgers: the index is
    /// written big-endian into the low bytes, offset by one so index 0 does
    /// not collide with the zero address.
    pub fn synthetic(index: u64) -> Self {
        let mut bytes = [0u8; 20];
        bytes[12..20].copy_from_slice(&(index + 1).to_be_bytes());
        AccountId(bytes)
    }
}

impl fmt::Display for AccountId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(42);
        s.push_str("0x");
        for b in &self.0 {
            s.push(char::from_digit((b >> 4) as u32, 16).unwrap());
            s.push(char::from_digit((b & 0xf) as u32, 16).unwrap());
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for AccountId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for AccountId {
    type Err = BadAddress;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let hex = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .ok_or_else(|| BadAddress(s.to_string()))?;
        if hex.len() != 40 {
            return Err(BadAddress(s.to_string()));
        }
        let mut bytes = [0u8; 20];
        for (i, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let hi = (chunk[0] as char)
                .to_digit(16)
                .ok_or_else(|| BadAddress(s.to_string()))?;
            let lo = (chunk[1] as char)
                .to_digit(16)
                .ok_or_else(|| BadAddress(s.to_string()))?;
            bytes[i] = ((hi << 4) | lo) as u8;
        }
        Ok(AccountId(bytes))
    }
}
