//! Client-side key material: the root PRF key, the homomorphic key pair,
//! and the secret amplification factor. None of this ever reaches the
//! server.

use std::io::{Read, Write};

use crate::crypto::prf::{PrfKey, LAMBDA_BYTES};
use crate::crypto::swhe::SwheBackend;
use crate::error::{Error, Result};
use crate::index::SwheKeyPair;

/// Sampling range for the default amplification factor.
pub const PHI_MIN_BITS: u32 = 20;
pub const PHI_MAX_BITS: u32 = 24;

#[derive(Clone)]
pub struct Keystore {
    pub key: PrfKey,
    pub pair: SwheKeyPair,
    pub phi: u64,
}

impl std::fmt::Debug for Keystore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Keystore(phi = {}, ..)", self.phi)
    }
}

/// Uniform draw from `[2^20, 2^24]`.
pub fn random_phi() -> Result<u64> {
    use rand::TryRngCore;
    let lo = 1u64 << PHI_MIN_BITS;
    let hi = 1u64 << PHI_MAX_BITS;
    let span = hi - lo + 1;
    let mut buf = [0u8; 8];
    rand::rngs::OsRng
        .try_fill_bytes(&mut buf)
        .map_err(|e| Error::Randomness(e.to_string()))?;
    Ok(lo + u64::from_le_bytes(buf) % span)
}

impl Keystore {
    /// Fresh key material with the given amplification factor.
    pub fn generate(backend: &dyn SwheBackend, phi: u64) -> Result<Self> {
        let (key, pair) = crate::index::keygen(backend)?;
        Ok(Keystore { key, pair, phi })
    }

    /// Keystore file: magic `CNK1`, u16 version, the 16-byte root key,
    /// length-prefixed pk and sk blobs, u64 φ. Little-endian integers.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"CNK1")?;
        w.write_all(&1u16.to_le_bytes())?;
        w.write_all(self.key.as_bytes())?;
        w.write_all(&(self.pair.pk.len() as u32).to_le_bytes())?;
        w.write_all(&self.pair.pk)?;
        w.write_all(&(self.pair.sk.len() as u32).to_le_bytes())?;
        w.write_all(&self.pair.sk)?;
        w.write_all(&self.phi.to_le_bytes())?;
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| Error::Truncated)?;
        if &magic != b"CNK1" {
            return Err(Error::BadMagic { expected: "CNK1" });
        }
        let mut ver = [0u8; 2];
        r.read_exact(&mut ver).map_err(|_| Error::Truncated)?;
        let ver = u16::from_le_bytes(ver);
        if ver != 1 {
            return Err(Error::BadVersion(ver));
        }
        let mut key = [0u8; LAMBDA_BYTES];
        r.read_exact(&mut key).map_err(|_| Error::Truncated)?;
        let blob = |r: &mut R| -> Result<Vec<u8>> {
            let mut len = [0u8; 4];
            r.read_exact(&mut len).map_err(|_| Error::Truncated)?;
            let mut data = vec![0u8; u32::from_le_bytes(len) as usize];
            r.read_exact(&mut data).map_err(|_| Error::Truncated)?;
            Ok(data)
        };
        let pk = blob(&mut r)?;
        let sk = blob(&mut r)?;
        let mut phi = [0u8; 8];
        r.read_exact(&mut phi).map_err(|_| Error::Truncated)?;
        let mut tail = [0u8; 1];
        if r.read(&mut tail)? != 0 {
            return Err(Error::Truncated);
        }
        Ok(Keystore {
            key: PrfKey::from_bytes(key),
            pair: SwheKeyPair { pk, sk },
            phi: u64::from_le_bytes(phi),
        })
    }
}
