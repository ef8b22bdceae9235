//! Exact 256-bit token arithmetic.
//!
//! Every balance, share count and wei quantity in the ledger is a
//! [`TokenAmount`]: an unsigned 256-bit integer in base units (1e-18 of a
//! token). All ledger arithmetic stays in integers; floating point only
//! appears at the output boundary, and then only through the deterministic
//! conversions in this module.

use std::fmt;
use std::str::FromStr;

use primitive_types::{U256, U512};

use crate::error::LedgerError;

/// Unsigned 256-bit quantity in base units (1e-18 token, share or wei).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TokenAmount(pub(crate) U256);

/// Base units per whole token (1e18).
pub const BASE_UNITS_PER_TOKEN: u64 = 1_000_000_000_000_000_000;

impl TokenAmount {
    pub const ZERO: TokenAmount = TokenAmount(U256::zero());

    pub fn from_u64(v: u64) -> Self {
        TokenAmount(U256::from(v))
    }

    pub fn from_u128(v: u128) -> Self {
        TokenAmount(U256::from(v))
    }

    /// `tokens` whole tokens expressed in base units.
    pub fn from_whole_tokens(tokens: u64) -> Self {
        TokenAmount(U256::from(tokens) * U256::from(BASE_UNITS_PER_TOKEN))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn checked_add(&self, rhs: TokenAmount) -> Option<TokenAmount> {
        self.0.checked_add(rhs.0).map(TokenAmount)
    }

    pub fn checked_sub(&self, rhs: TokenAmount) -> Option<TokenAmount> {
        self.0.checked_sub(rhs.0).map(TokenAmount)
    }

    pub fn checked_mul_u64(&self, rhs: u64) -> Option<TokenAmount> {
        self.0.checked_mul(U256::from(rhs)).map(TokenAmount)
    }

    /// floor(self * mul / div) with a 512-bit intermediate product, so the
    /// multiplication cannot overflow. Returns `None` when `div` is zero or
    /// the quotient does not fit in 256 bits.
    pub fn mul_div_floor(&self, mul: TokenAmount, div: TokenAmount) -> Option<TokenAmount> {
        if div.0.is_zero() {
            return None;
        }
        let prod: U512 = self.0.full_mul(mul.0);
        let q = prod / U512::from(div.0);
        // quotient fits iff the upper 256 bits are zero
        let limbs = q.0;
        if limbs[4] | limbs[5] | limbs[6] | limbs[7] != 0 {
            return None;
        }
        let mut lo = [0u64; 4];
        lo.copy_from_slice(&limbs[..4]);
        Some(TokenAmount(U256(lo)))
    }

    /// Nearest-enough f64 of the value. Deterministic limb accumulation;
    /// error is a few ulp, used only for output-boundary statistics.
    pub fn to_f64(&self) -> f64 {
        u256_to_f64(self.0)
    }

    /// Big-endian 32-byte encoding, for callers that need the raw value
    /// without sharing this crate's arithmetic.
    pub fn to_be_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        self.0.to_big_endian(&mut out);
        out
    }

    pub fn from_be_bytes(bytes: [u8; 32]) -> Self {
        TokenAmount(U256::from_big_endian(&bytes))
    }

}

impl fmt::Display for TokenAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // U256 Display is plain decimal, never scientific
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for TokenAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TokenAmount({})", self.0)
    }
}

impl FromStr for TokenAmount {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        // from_dec_str maps "" to zero; treat that as malformed instead.
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LedgerError::BadAmount(s.to_string()));
        }
        U256::from_dec_str(t)
            .map(TokenAmount)
            .map_err(|_| LedgerError::BadAmount(s.to_string()))
    }
}

/// Parses a decimal token count ("123", "0.5", "10000.25") into base units.
/// At most 18 fractional digits; anything finer is rejected rather than
/// silently truncated.
pub fn parse_token_decimal(s: &str) -> Result<TokenAmount, LedgerError> {
    let s = s.trim();
    let bad = || LedgerError::BadAmount(s.to_string());
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if frac_part.len() > 18 {
        return Err(bad());
    }
    let int_units = if int_part.is_empty() {
        U256::zero()
    } else {
        U256::from_dec_str(int_part).map_err(|_| bad())?
    };
    let mut frac_units = U256::zero();
    if !frac_part.is_empty() {
        let padded = format!("{:0<18}", frac_part);
        frac_units = U256::from_dec_str(&padded).map_err(|_| bad())?;
    }
    int_units
        .checked_mul(U256::from(BASE_UNITS_PER_TOKEN))
        .and_then(|v| v.checked_add(frac_units))
        .map(TokenAmount)
        .ok_or_else(bad)
}

const TWO_POW_64: f64 = 18446744073709551616.0;
const INV_TWO_POW_96: f64 = 1.0 / 79228162514264337593543950336.0;

pub(crate) fn u256_to_f64(x: U256) -> f64 {
    let limbs = x.0;
    let mut acc = 0f64;
    for i in (0..4).rev() {
        acc = acc * TWO_POW_64 + limbs[i] as f64;
    }
    acc
}

/// Exact floor(w * 2^96 / m) for w <= m, m > 0. The result is a pure
/// function of the rational w/m, which makes every float derived from it
/// invariant under common scaling of w and m.
pub(crate) fn ratio_q96(w: U256, m: U256) -> u128 {
    debug_assert!(!m.is_zero());
    debug_assert!(w <= m);
    if w.is_zero() {
        return 0;
    }
    if m.bits() <= 64 {
        // two-step 128-bit schoolbook division
        let w = w.low_u64() as u128;
        let m = m.low_u64() as u128;
        let hi = w << 64;
        let q1 = hi / m;
        let r1 = hi % m;
        return (q1 << 32) + ((r1 << 32) / m);
    }
    if w.bits() <= 160 {
        let n = (w << 96) / m;
        return n.low_u128();
    }
    let n = (U512::from(w) << 96) / U512::from(m);
    n.low_u128()
}

/// w/m as f64 via the q96 fixed-point value. Accurate to ~2^-53 relative
/// and bit-stable under common scaling of numerator and denominator.
pub fn ratio_to_f64(w: TokenAmount, m: TokenAmount) -> f64 {
    ratio_q96(w.0, m.0) as f64 * INV_TWO_POW_96
}

/// Renders num/den as a decimal string with `sig` significant digits
/// (floor-truncated, no trailing-zero trimming). den must be nonzero.
pub fn decimal_ratio_string(num: TokenAmount, den: TokenAmount, sig: usize) -> String {
    debug_assert!(!den.0.is_zero());
    if num.0.is_zero() {
        return "0".to_string();
    }
    let int_part = num.0 / den.0;
    let mut rem = U512::from(num.0 % den.0);
    let den = U512::from(den.0);
    let ten = U512::from(10u64);

    let mut out = String::new();
    let mut significant = 0usize;
    if !int_part.is_zero() {
        out = int_part.to_string();
        significant = out.len();
        if significant >= sig || rem.is_zero() {
            return out;
        }
    } else {
        out.push('0');
    }
    out.push('.');
    let mut frac_digits = 0usize;
    // hard cap keeps pathological tiny ratios from looping forever
    while significant < sig && frac_digits < sig + 160 {
        rem = rem * ten;
        let digit = rem / den;
        rem = rem % den;
        let d = digit.low_u64() as u8;
        out.push((b'0' + d) as char);
        frac_digits += 1;
        if significant > 0 || d != 0 {
            significant += 1;
        }
        if rem.is_zero() && significant >= 1 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_plain_decimal() {
        let a: TokenAmount = "115792089237316195423570985008687907853269984665640564039457584007913129639935"
            .parse()
            .unwrap();
        assert_eq!(a, TokenAmount(U256::MAX));
        assert_eq!(
            a.to_string(),
            "115792089237316195423570985008687907853269984665640564039457584007913129639935"
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<TokenAmount>().is_err());
        assert!("12x".parse::<TokenAmount>().is_err());
        assert!("-5".parse::<TokenAmount>().is_err());
    }

    #[test]
    fn mul_div_floor_basics() {
        let a = TokenAmount::from_u64(7);
        let q = a
            .mul_div_floor(TokenAmount::from_u64(3), TokenAmount::from_u64(2))
            .unwrap();
        assert_eq!(q, TokenAmount::from_u64(10)); // floor(21/2)
        assert!(a
            .mul_div_floor(TokenAmount::from_u64(1), TokenAmount::ZERO)
            .is_none());
    }

    #[test]
    fn mul_div_floor_wide_intermediate() {
        // (2^255) * 4 / 8 = 2^254: intermediate exceeds 256 bits
        let big = TokenAmount(U256::one() << 255);
        let q = big
            .mul_div_floor(TokenAmount::from_u64(4), TokenAmount::from_u64(8))
            .unwrap();
        assert_eq!(q, TokenAmount(U256::one() << 254));
        // overflowing quotient is rejected
        assert!(big
            .mul_div_floor(TokenAmount::from_u64(4), TokenAmount::from_u64(1))
            .is_none());
    }

    #[test]
    fn parse_token_decimal_exact() {
        assert_eq!(
            parse_token_decimal("1").unwrap(),
            TokenAmount::from_whole_tokens(1)
        );
        assert_eq!(
            parse_token_decimal("0.5").unwrap(),
            TokenAmount::from_u64(500_000_000_000_000_000)
        );
        assert_eq!(
            parse_token_decimal("10000").unwrap(),
            TokenAmount::from_whole_tokens(10000)
        );
        assert_eq!(
            parse_token_decimal("0.000000000000000001").unwrap(),
            TokenAmount::from_u64(1)
        );
        assert!(parse_token_decimal("0.0000000000000000001").is_err());
        assert!(parse_token_decimal("abc").is_err());
    }

    #[test]
    fn ratio_q96_matches_tiers() {
        // small tier: 1/3
        let q = ratio_q96(U256::from(1u64), U256::from(3u64));
        let expect = ((U512::one() << 96) / U512::from(3u64)).low_u128();
        assert_eq!(q, expect);
        // mid tier
        let w = U256::from(123456789u64) << 70;
        let m = (U256::from(987654321u64) << 70) + U256::from(17u64);
        let q = ratio_q96(w, m);
        let expect = ((U512::from(w) << 96) / U512::from(m)).low_u128();
        assert_eq!(q, expect);
        // full ratio is exactly one
        let m = U256::MAX;
        assert_eq!(ratio_q96(m, m), 1u128 << 96);
    }

    #[test]
    fn ratio_to_f64_half() {
        let half = ratio_to_f64(TokenAmount::from_u64(5), TokenAmount::from_u64(10));
        assert_eq!(half, 0.5);
        let one = ratio_to_f64(TokenAmount::from_u64(10), TokenAmount::from_u64(10));
        assert_eq!(one, 1.0);
    }

    #[test]
    fn decimal_ratio_rendering() {
        let r = decimal_ratio_string(TokenAmount::from_u64(1), TokenAmount::from_u64(3), 18);
        assert_eq!(r, "0.333333333333333333");
        let r = decimal_ratio_string(TokenAmount::from_u64(1000), TokenAmount::from_u64(500), 18);
        assert_eq!(r, "2");
        let r = decimal_ratio_string(TokenAmount::from_u64(5), TokenAmount::from_u64(4), 18);
        assert_eq!(r, "1.25");
        let r = decimal_ratio_string(TokenAmount::ZERO, TokenAmount::from_u64(7), 18);
        assert_eq!(r, "0");
    }
}
