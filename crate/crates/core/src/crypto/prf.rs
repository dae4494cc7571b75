//! Keyed pseudo-random functions.
//!
//! `prf_h` is the 128-bit label PRF (HMAC-SHA-256 truncated); `prf_g`
//! stretches a 128-bit key into a mask of arbitrary width by running the
//! same MAC in counter mode. Both are deterministic in all inputs.

use hmac::{Hmac, KeyInit, Mac};
use sha2::Sha256;

use crate::error::{Error, Result};

/// Security parameter λ = 128 bits.
pub const LAMBDA_BYTES: usize = 16;

type HmacSha256 = Hmac<Sha256>;

/// Root secret key for the structured index.
#[derive(Clone, PartialEq, Eq)]
pub struct PrfKey(pub [u8; LAMBDA_BYTES]);

impl PrfKey {
    /// Draw a fresh key from the operating system entropy source.
    pub fn generate() -> Result<Self> {
        use rand::TryRngCore;
        let mut bytes = [0u8; LAMBDA_BYTES];
        rand::rngs::OsRng
            .try_fill_bytes(&mut bytes)
            .map_err(|e| Error::Randomness(e.to_string()))?;
        Ok(PrfKey(bytes))
    }

    pub fn from_bytes(bytes: [u8; LAMBDA_BYTES]) -> Self {
        PrfKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; LAMBDA_BYTES] {
        &self.0
    }
}

impl std::fmt::Debug for PrfKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Never print key material.
        f.write_str("PrfKey(..)")
    }
}

/// 128-bit keyed PRF: HMAC-SHA-256 truncated to 16 bytes.
pub fn prf_h(key: &[u8; LAMBDA_BYTES], msg: &[u8]) -> [u8; LAMBDA_BYTES] {
    let mut mac = HmacSha256::new_from_slice(key).expect("HMAC accepts 16-byte keys");
    mac.update(msg);
    let tag = mac.finalize().into_bytes();
    let mut out = [0u8; LAMBDA_BYTES];
    out.copy_from_slice(&tag[..LAMBDA_BYTES]);
    out
}

/// Variable-output keyed PRF: concatenated HMAC blocks over
/// `msg || counter`, truncated to `out_len` bytes.
pub fn prf_g(key: &[u8; LAMBDA_BYTES], msg: &[u8], out_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(out_len);
    let mut ctr: u32 = 0;
    while out.len() < out_len {
        let mut mac = HmacSha256::new_from_slice(key).expect("HMAC accepts 16-byte keys");
        mac.update(msg);
        mac.update(&ctr.to_be_bytes());
        out.extend_from_slice(&mac.finalize().into_bytes());
        ctr += 1;
    }
    out.truncate(out_len);
    out
}
