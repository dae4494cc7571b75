//! Somewhat-homomorphic encryption contract.
//!
//! The pipeline needs exactly this from a backend: unlimited additions,
//! one multiplication level, non-negative integer plaintexts, and
//! fixed-width ciphertexts (z = 2048 bits) so records can be masked and
//! framed byte-exactly. The backend is a seam: any scheme satisfying
//! [`SwheBackend`] slots in.
//!
//! The bundled [`TransparentSwhe`] backend is arithmetic-faithful and
//! EXPLICITLY INSECURE: ciphertexts carry the plaintext alongside a random
//! nonce and a level tag. It exists so that desk-scale runs can verify the
//! arithmetic of the protocol exactly; it provides no confidentiality
//! whatsoever and must never leave a test bench.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Fixed ciphertext width: z = 2048 bits.
pub const SWHE_CIPHERTEXT_BYTES: usize = 256;

/// Message field width inside a transparent ciphertext (1920 bits).
pub const MSG_BYTES: usize = 240;

const NONCE_BYTES: usize = 15;

const LEVEL_FRESH: u8 = 0;
const LEVEL_PRODUCT: u8 = 1;

/// Byte-level contract all backends implement. `Dec(add(Enc a, Enc b)) =
/// a + b` and `Dec(mul(Enc a, Enc b)) = a * b`; `mul` accepts only
/// fresh-level operands, `add` any same-level operands.
pub trait SwheBackend: Send + Sync {
    /// Generate a public/secret key pair.
    fn keygen(&self) -> Result<(Vec<u8>, Vec<u8>)>;
    fn encrypt(&self, pk: &[u8], m: &BigUint) -> Result<Vec<u8>>;
    fn add(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>>;
    fn mul(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>>;
    fn decrypt(&self, sk: &[u8], c: &[u8]) -> Result<BigUint>;

    /// Serialized ciphertext width in bytes.
    fn ciphertext_len(&self) -> usize {
        SWHE_CIPHERTEXT_BYTES
    }

    /// Largest representable plaintext bit length.
    fn message_bits(&self) -> u64 {
        (MSG_BYTES as u64) * 8
    }
}

/// The arithmetic-faithful, insecure reference backend.
///
/// Layout of a ciphertext: 1 level byte, 15 nonce bytes, 240 big-endian
/// message bytes. Re-encrypting the same message yields byte-distinct
/// ciphertexts thanks to the nonce, but anyone can read the message field.
#[derive(Debug, Default, Clone, Copy)]
pub struct TransparentSwhe;

impl TransparentSwhe {
    fn parse(c: &[u8]) -> Result<(u8, BigUint)> {
        if c.len() != SWHE_CIPHERTEXT_BYTES {
            return Err(Error::WidthMismatch {
                expected: SWHE_CIPHERTEXT_BYTES,
                got: c.len(),
            });
        }
        let level = c[0];
        if level != LEVEL_FRESH && level != LEVEL_PRODUCT {
            return Err(Error::WidthMismatch {
                expected: SWHE_CIPHERTEXT_BYTES,
                got: c.len(),
            });
        }
        Ok((level, BigUint::from_bytes_be(&c[1 + NONCE_BYTES..])))
    }

    fn assemble(level: u8, m: &BigUint) -> Result<Vec<u8>> {
        use rand::TryRngCore;
        let msg = m.to_bytes_be();
        if msg.len() > MSG_BYTES {
            return Err(Error::MessageSpace);
        }
        let mut out = vec![0u8; SWHE_CIPHERTEXT_BYTES];
        out[0] = level;
        rand::rngs::OsRng
            .try_fill_bytes(&mut out[1..1 + NONCE_BYTES])
            .map_err(|e| Error::Randomness(e.to_string()))?;
        out[SWHE_CIPHERTEXT_BYTES - msg.len()..].copy_from_slice(&msg);
        Ok(out)
    }
}

impl SwheBackend for TransparentSwhe {
    fn keygen(&self) -> Result<(Vec<u8>, Vec<u8>)> {
        use rand::TryRngCore;
        // Opaque pairing tag; the transparent scheme needs no real key
        // material.
        let mut id = vec![0u8; 16];
        rand::rngs::OsRng
            .try_fill_bytes(&mut id)
            .map_err(|e| Error::Randomness(e.to_string()))?;
        Ok((id.clone(), id))
    }

    fn encrypt(&self, _pk: &[u8], m: &BigUint) -> Result<Vec<u8>> {
        Self::assemble(LEVEL_FRESH, m)
    }

    fn add(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        let (la, ma) = Self::parse(a)?;
        let (lb, mb) = Self::parse(b)?;
        if la != lb {
            return Err(Error::LevelMismatch);
        }
        Self::assemble(la, &(ma + mb))
    }

    fn mul(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        let (la, ma) = Self::parse(a)?;
        let (lb, mb) = Self::parse(b)?;
        if la != LEVEL_FRESH || lb != LEVEL_FRESH {
            return Err(Error::LevelViolation);
        }
        Self::assemble(LEVEL_PRODUCT, &(ma * mb))
    }

    fn decrypt(&self, _sk: &[u8], c: &[u8]) -> Result<BigUint> {
        let (_, m) = Self::parse(c)?;
        Ok(m)
    }
}

/// `Dec(sum(mul(Enc a_i, Enc b_i)))` convenience used by tests.
pub fn eval_product_sum(
    backend: &dyn SwheBackend,
    pk: &[u8],
    sk: &[u8],
    pairs: &[(BigUint, BigUint)],
) -> Result<BigUint> {
    let mut acc: Option<Vec<u8>> = None;
    for (a, b) in pairs {
        let p = backend.mul(&backend.encrypt(pk, a)?, &backend.encrypt(pk, b)?)?;
        acc = Some(match acc {
            None => p,
            Some(s) => backend.add(&s, &p)?,
        });
    }
    match acc {
        None => Ok(BigUint::zero()),
        Some(c) => backend.decrypt(sk, &c),
    }
}
