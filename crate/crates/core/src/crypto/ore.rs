//! Order-revealing encryption over a 64-bit domain.
//!
//! Comparison-digit construction: for each bit position of the plaintext,
//! the ciphertext stores `(F(key, prefix) + bit) mod 3`, where `F` is a
//! keyed PRF of the more-significant prefix. Two ciphertexts under one key
//! compare by scanning for the first differing digit; its offset relative
//! to the other ciphertext's digit reveals the order. Equal plaintexts
//! yield identical ciphertexts, and the construction leaks at most the
//! index of the most significant differing bit.
//!
//! Ciphertexts pack 64 ternary digits at 2 bits each: k = 128 bits.

use sha2::{Digest, Sha256};

use crate::crypto::prf::{prf_h, PrfKey, LAMBDA_BYTES};

/// Fixed ciphertext width (k = 128 bits).
pub const ORE_CIPHERTEXT_BYTES: usize = 16;

/// Plaintext domain: unsigned 64-bit integers.
pub const ORE_DOMAIN_BITS: u32 = 64;

/// Dedicated comparison key, derived from the index root key via a
/// reserved domain-separation tag so that index records and query-token
/// trees agree.
#[derive(Clone, PartialEq, Eq)]
pub struct OreKey([u8; LAMBDA_BYTES]);

impl OreKey {
    pub fn from_bytes(bytes: [u8; LAMBDA_BYTES]) -> Self {
        OreKey(bytes)
    }

    /// Domain-separated derivation from the root index key.
    pub fn derive(root: &PrfKey) -> Self {
        OreKey(prf_h(root.as_bytes(), &[crate::index::TAG_ORE_KEY]))
    }
}

impl std::fmt::Debug for OreKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("OreKey(..)")
    }
}

/// A 16-byte comparison ciphertext.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OreCiphertext(pub [u8; ORE_CIPHERTEXT_BYTES]);

impl OreCiphertext {
    pub fn as_bytes(&self) -> &[u8; ORE_CIPHERTEXT_BYTES] {
        &self.0
    }

    pub fn from_bytes(bytes: [u8; ORE_CIPHERTEXT_BYTES]) -> Self {
        OreCiphertext(bytes)
    }

    #[inline]
    fn digit(&self, i: u32) -> u8 {
        (self.0[(i / 4) as usize] >> ((i % 4) * 2)) & 0b11
    }
}

impl std::fmt::Debug for OreCiphertext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OreCiphertext({:02x?})", &self.0[..4])
    }
}

/// Keyed PRF over a bit prefix, reduced mod 3.
#[inline]
fn prefix_digit(key: &OreKey, position: u8, prefix: u64) -> u8 {
    let mut h = Sha256::new();
    h.update(key.0);
    h.update([position]);
    h.update(prefix.to_be_bytes());
    h.finalize()[0] % 3
}

/// Deterministically encrypt `m` under `key`.
pub fn encrypt(key: &OreKey, m: u64) -> OreCiphertext {
    let mut out = [0u8; ORE_CIPHERTEXT_BYTES];
    for i in 0..ORE_DOMAIN_BITS {
        // Most significant bit first.
        let prefix = if i == 0 { 0 } else { m >> (64 - i) };
        let bit = ((m >> (63 - i)) & 1) as u8;
        let digit = (prefix_digit(key, i as u8, prefix) + bit) % 3;
        out[(i / 4) as usize] |= digit << ((i % 4) * 2);
    }
    OreCiphertext(out)
}

/// Compare the plaintexts behind two ciphertexts produced under the same
/// key.
pub fn compare(a: &OreCiphertext, b: &OreCiphertext) -> std::cmp::Ordering {
    for i in 0..ORE_DOMAIN_BITS {
        let da = a.digit(i);
        let db = b.digit(i);
        if da != db {
            // Digits at the first differing bit differ by the bit values,
            // mod 3.
            return if (da + 1) % 3 == db {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            };
        }
    }
    std::cmp::Ordering::Equal
}
