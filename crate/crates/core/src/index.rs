//! The searchable encrypted index.
//!
//! Each sketch entry of the plaintext labeling becomes one record in a flat
//! dictionary. For a vertex `u` with label bytes `u`, four per-vertex keys
//! are derived from the root key `K`:
//!
//! ```text
//! S_out,u = h(K, u||1)   T_out,u = h(K, u||2)
//! S_in,u  = h(K, u||3)   T_in,u  = h(K, u||4)
//! ```
//!
//! The ω-th out-entry `(v, d, c)` of `u` is stored at dictionary position
//! `h(T_out,u, ω)` as `g(S_out,u, ω) XOR (V || D || C)` with
//! `V = h(K, v||0)`, `D = SWHE.Enc(pk, 2^(N-d))`, and
//! `C = ORE.Enc(phi * c)`; in-entries mirror this with the in keys. Every
//! record therefore occupies its own dictionary slot of identical width,
//! so the static index reveals only the leakage profile
//! `(n, B, Omega_out, Omega_in)`.

use std::collections::HashMap;
use std::io::{Read, Write};

use num_bigint::BigUint;
use num_traits::One;

use crate::crypto::ore::{self, OreKey};
use crate::crypto::prf::{prf_g, prf_h, PrfKey, LAMBDA_BYTES};
use crate::crypto::swhe::{SwheBackend, SWHE_CIPHERTEXT_BYTES};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::labeling::LabelIndex;

pub(crate) const TAG_VERTEX: u8 = 0;
pub(crate) const TAG_OUT_S: u8 = 1;
pub(crate) const TAG_OUT_T: u8 = 2;
pub(crate) const TAG_IN_S: u8 = 3;
pub(crate) const TAG_IN_T: u8 = 4;
/// Reserved tag for deriving the ORE comparison key; never collides with
/// vertex inputs, which always carry at least one label byte before the
/// tag.
pub(crate) const TAG_ORE_KEY: u8 = 5;

/// Deployment-wide ciphertext widths in bits. The reference deployment
/// pins λ = 128, z = 2048, k = 128.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Widths {
    pub lambda_bits: u32,
    pub z_bits: u32,
    pub k_bits: u32,
}

impl Default for Widths {
    fn default() -> Self {
        Widths { lambda_bits: 128, z_bits: 2048, k_bits: 128 }
    }
}

impl Widths {
    /// Masked record width `(λ + z + k) / 8`.
    pub fn record_bytes(&self) -> usize {
        ((self.lambda_bits + self.z_bits + self.k_bits) / 8) as usize
    }

    pub fn ensure_supported(&self) -> Result<()> {
        if *self == Widths::default() {
            Ok(())
        } else {
            Err(Error::UnsupportedWidths {
                lambda: self.lambda_bits,
                z: self.z_bits,
                k: self.k_bits,
            })
        }
    }
}

/// Public/secret key material of the homomorphic backend.
#[derive(Clone)]
pub struct SwheKeyPair {
    pub pk: Vec<u8>,
    pub sk: Vec<u8>,
}

impl std::fmt::Debug for SwheKeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SwheKeyPair(..)")
    }
}

/// Everything `setup` needs besides the keys and the plaintext index.
#[derive(Debug, Clone)]
pub struct SetupParams {
    pub alpha: crate::labeling::Alpha,
    pub phi: u64,
    pub widths: Widths,
    pub max_dist_b: u64,
}

impl SetupParams {
    pub fn new(alpha: crate::labeling::Alpha, phi: u64, max_dist_b: u64) -> Result<Self> {
        let p = SetupParams { alpha, phi, widths: Widths::default(), max_dist_b };
        p.validate()?;
        Ok(p)
    }

    /// N = 2B + 1.
    pub fn n_exp(&self) -> u64 {
        2 * self.max_dist_b + 1
    }

    fn validate(&self) -> Result<()> {
        self.widths.ensure_supported()?;
        // Boundary spacing of the deepest supported tree requires
        // phi >= 2^MAX_DEPTH.
        let min_phi = 1u64 << crate::tree::MAX_DEPTH;
        if self.phi < min_phi {
            return Err(Error::PhiTooSmall {
                phi: self.phi,
                d_theta: crate::tree::MAX_DEPTH,
            });
        }
        Ok(())
    }
}

/// Generate the root PRF key and a homomorphic key pair.
pub fn keygen(backend: &dyn SwheBackend) -> Result<(PrfKey, SwheKeyPair)> {
    let key = PrfKey::generate()?;
    let (pk, sk) = backend.keygen()?;
    Ok((key, SwheKeyPair { pk, sk }))
}

/// The two flat dictionaries plus the public header.
#[derive(Debug, Clone)]
pub struct EncryptedIndex {
    widths: Widths,
    /// N = 2B + 1, fixed at setup.
    n_exp: u64,
    i_out: HashMap<[u8; LAMBDA_BYTES], Vec<u8>>,
    i_in: HashMap<[u8; LAMBDA_BYTES], Vec<u8>>,
}

/// What the static encrypted index reveals by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LeakageProfile {
    pub n: u64,
    pub max_dist_b: u64,
    pub omega_out: u64,
    pub omega_in: u64,
}

impl EncryptedIndex {
    pub fn widths(&self) -> Widths {
        self.widths
    }

    pub fn n_exp(&self) -> u64 {
        self.n_exp
    }

    pub fn omega_out(&self) -> u64 {
        self.i_out.len() as u64
    }

    pub fn omega_in(&self) -> u64 {
        self.i_in.len() as u64
    }

    pub fn lookup_out(&self, key: &[u8; LAMBDA_BYTES]) -> Option<&[u8]> {
        self.i_out.get(key).map(Vec::as_slice)
    }

    pub fn lookup_in(&self, key: &[u8; LAMBDA_BYTES]) -> Option<&[u8]> {
        self.i_in.get(key).map(Vec::as_slice)
    }

    /// Records sorted by dictionary key; the canonical on-disk order.
    fn sorted(dict: &HashMap<[u8; LAMBDA_BYTES], Vec<u8>>) -> Vec<(&[u8; LAMBDA_BYTES], &Vec<u8>)> {
        let mut v: Vec<_> = dict.iter().collect();
        v.sort_by_key(|(k, _)| **k);
        v
    }

    /// Index file: magic `CNE1`, u16 version, u32 λ bits, u32 z bits,
    /// u32 k bits, u32 N, u64 Ω_out, u64 Ω_in, then the out records and
    /// the in records, each a 16-byte key followed by the masked payload.
    /// Integers are little-endian; records are sorted by key.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"CNE1")?;
        w.write_all(&1u16.to_le_bytes())?;
        w.write_all(&self.widths.lambda_bits.to_le_bytes())?;
        w.write_all(&self.widths.z_bits.to_le_bytes())?;
        w.write_all(&self.widths.k_bits.to_le_bytes())?;
        w.write_all(&u32::try_from(self.n_exp).map_err(|_| Error::FieldOverflow(self.n_exp))?.to_le_bytes())?;
        w.write_all(&self.omega_out().to_le_bytes())?;
        w.write_all(&self.omega_in().to_le_bytes())?;
        for dict in [&self.i_out, &self.i_in] {
            for (k, v) in Self::sorted(dict) {
                w.write_all(k)?;
                w.write_all(v)?;
            }
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| Error::Truncated)?;
        if &magic != b"CNE1" {
            return Err(Error::BadMagic { expected: "CNE1" });
        }
        let mut ver = [0u8; 2];
        r.read_exact(&mut ver).map_err(|_| Error::Truncated)?;
        let ver = u16::from_le_bytes(ver);
        if ver != 1 {
            return Err(Error::BadVersion(ver));
        }
        let widths = Widths {
            lambda_bits: read_u32(&mut r)?,
            z_bits: read_u32(&mut r)?,
            k_bits: read_u32(&mut r)?,
        };
        widths.ensure_supported()?;
        let n_exp = read_u32(&mut r)? as u64;
        let omega_out = read_u64(&mut r)?;
        let omega_in = read_u64(&mut r)?;
        let record = widths.record_bytes();
        let mut read_dict = |count: u64| -> Result<HashMap<[u8; 16], Vec<u8>>> {
            let mut dict = HashMap::with_capacity(count as usize);
            for _ in 0..count {
                let mut key = [0u8; LAMBDA_BYTES];
                r.read_exact(&mut key).map_err(|_| Error::Truncated)?;
                let mut payload = vec![0u8; record];
                r.read_exact(&mut payload).map_err(|_| Error::Truncated)?;
                if dict.insert(key, payload).is_some() {
                    return Err(Error::KeyCollision);
                }
            }
            Ok(dict)
        };
        let i_out = read_dict(omega_out)?;
        let i_in = read_dict(omega_in)?;
        let mut tail = [0u8; 1];
        if r.read(&mut tail)? != 0 {
            return Err(Error::Truncated);
        }
        Ok(EncryptedIndex { widths, n_exp, i_out, i_in })
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| Error::Truncated)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(|_| Error::Truncated)?;
    Ok(u64::from_le_bytes(buf))
}

/// `h(K, label || tag)` for the per-vertex key family.
pub fn vertex_key(key: &PrfKey, label: &str, tag: u8) -> [u8; LAMBDA_BYTES] {
    let mut msg = Vec::with_capacity(label.len() + 1);
    msg.extend_from_slice(label.as_bytes());
    msg.push(tag);
    prf_h(key.as_bytes(), &msg)
}

/// Dictionary position of the ω-th entry under a per-vertex parent key.
pub fn entry_key(parent: &[u8; LAMBDA_BYTES], omega: u64) -> [u8; LAMBDA_BYTES] {
    prf_h(parent, &omega.to_be_bytes())
}

/// Mask pad for the ω-th entry.
pub fn entry_pad(parent: &[u8; LAMBDA_BYTES], omega: u64, len: usize) -> Vec<u8> {
    prf_g(parent, &omega.to_be_bytes(), len)
}

/// Distance payload `2^(N - d)`.
fn encode_distance(n_exp: u64, dist: u64) -> BigUint {
    BigUint::one() << (n_exp - dist) as usize
}

fn xor_in_place(buf: &mut [u8], pad: &[u8]) {
    for (b, p) in buf.iter_mut().zip(pad) {
        *b ^= p;
    }
}

/// Encrypt a plaintext labeling into the dictionary index.
pub fn setup(
    key: &PrfKey,
    pair: &SwheKeyPair,
    params: &SetupParams,
    idx: &LabelIndex,
    backend: &dyn SwheBackend,
) -> Result<EncryptedIndex> {
    params.validate()?;
    if params.max_dist_b != idx.max_dist_b() {
        return Err(Error::Setup(format!(
            "params.B = {} but the index has B = {}",
            params.max_dist_b,
            idx.max_dist_b()
        )));
    }
    let n_exp = params.n_exp();
    // Result aggregation must fit the backend: sums of up to 2^20
    // candidate products of magnitude 2^(2N).
    if 2 * n_exp + 20 >= backend.message_bits() {
        return Err(Error::Setup(format!(
            "2N + 20 = {} exceeds the backend message space of {} bits; \
             shrink the graph or its weights",
            2 * n_exp + 20,
            backend.message_bits()
        )));
    }
    let max_cost = (0..idx.n() as u32)
        .flat_map(|v| {
            idx.out_sketch(VertexId(v))
                .iter()
                .chain(idx.in_sketch(VertexId(v)))
        })
        .map(|e| e.cost)
        .max()
        .unwrap_or(0);
    params.phi.checked_mul(max_cost).ok_or(Error::DomainOverflow)?;

    let ore_key = OreKey::derive(key);
    let record_len = params.widths.record_bytes();
    let mut i_out = HashMap::new();
    let mut i_in = HashMap::new();

    for u in 0..idx.n() as u32 {
        let u = VertexId(u);
        let label = idx.label(u);
        let sides = [
            (TAG_OUT_S, TAG_OUT_T, idx.out_sketch(u), &mut i_out),
            (TAG_IN_S, TAG_IN_T, idx.in_sketch(u), &mut i_in),
        ];
        for (s_tag, t_tag, sketch, dict) in sides {
            let s_parent = vertex_key(key, label, s_tag);
            let t_parent = vertex_key(key, label, t_tag);
            for (omega, entry) in sketch.iter().enumerate() {
                let omega = omega as u64;
                let mut record = Vec::with_capacity(record_len);
                record.extend_from_slice(&vertex_key(key, idx.label(entry.hub), TAG_VERTEX));
                let d = backend.encrypt(&pair.pk, &encode_distance(n_exp, entry.dist))?;
                debug_assert_eq!(d.len(), SWHE_CIPHERTEXT_BYTES);
                record.extend_from_slice(&d);
                let amp = params.phi.checked_mul(entry.cost).ok_or(Error::DomainOverflow)?;
                record.extend_from_slice(ore::encrypt(&ore_key, amp).as_bytes());
                debug_assert_eq!(record.len(), record_len);
                xor_in_place(&mut record, &entry_pad(&s_parent, omega, record_len));
                if dict.insert(entry_key(&t_parent, omega), record).is_some() {
                    return Err(Error::KeyCollision);
                }
            }
        }
    }
    Ok(EncryptedIndex { widths: params.widths, n_exp, i_out, i_in })
}

/// Setup leakage `(n, B, Omega_out, Omega_in)`, cross-checked against the
/// plaintext index.
pub fn leakage_profile(idx: &LabelIndex, enc: &EncryptedIndex) -> Result<LeakageProfile> {
    let omega_out = idx.total_out_entries() as u64;
    let omega_in = idx.total_in_entries() as u64;
    if omega_out != enc.omega_out() {
        return Err(Error::CountMismatch(format!(
            "plaintext out entries {omega_out} != encrypted {}",
            enc.omega_out()
        )));
    }
    if omega_in != enc.omega_in() {
        return Err(Error::CountMismatch(format!(
            "plaintext in entries {omega_in} != encrypted {}",
            enc.omega_in()
        )));
    }
    Ok(LeakageProfile {
        n: idx.n() as u64,
        max_dist_b: idx.max_dist_b(),
        omega_out,
        omega_in,
    })
}

/// Full client-side decode: re-derive every pad with the root key, unmask
/// every record, and require that the decrypted fields reproduce the
/// plaintext index exactly (distances through the power-of-two encoding,
/// costs through deterministic re-encryption).
pub fn verify_decode(
    enc: &EncryptedIndex,
    idx: &LabelIndex,
    key: &PrfKey,
    pair: &SwheKeyPair,
    phi: u64,
    backend: &dyn SwheBackend,
) -> Result<()> {
    let ore_key = OreKey::derive(key);
    let record_len = enc.widths().record_bytes();
    let n_exp = enc.n_exp();
    for u in 0..idx.n() as u32 {
        let u = VertexId(u);
        let label = idx.label(u);
        let sides = [
            (TAG_OUT_S, TAG_OUT_T, idx.out_sketch(u), &enc.i_out),
            (TAG_IN_S, TAG_IN_T, idx.in_sketch(u), &enc.i_in),
        ];
        for (s_tag, t_tag, sketch, dict) in sides {
            let s_parent = vertex_key(key, label, s_tag);
            let t_parent = vertex_key(key, label, t_tag);
            for (omega, entry) in sketch.iter().enumerate() {
                let omega = omega as u64;
                let mut record = dict
                    .get(&entry_key(&t_parent, omega))
                    .ok_or_else(|| {
                        Error::CountMismatch(format!(
                            "missing record for vertex {u} entry {omega}"
                        ))
                    })?
                    .clone();
                xor_in_place(&mut record, &entry_pad(&s_parent, omega, record_len));
                let (v_part, rest) = record.split_at(LAMBDA_BYTES);
                let (d_part, c_part) = rest.split_at(SWHE_CIPHERTEXT_BYTES);
                if v_part != vertex_key(key, idx.label(entry.hub), TAG_VERTEX) {
                    return Err(Error::CountMismatch(format!(
                        "vertex tag mismatch at {u}/{omega}"
                    )));
                }
                let m = backend.decrypt(&pair.sk, d_part)?;
                if m != encode_distance(n_exp, entry.dist) {
                    return Err(Error::CountMismatch(format!(
                        "distance payload mismatch at {u}/{omega}"
                    )));
                }
                let amp = phi.checked_mul(entry.cost).ok_or(Error::DomainOverflow)?;
                if c_part != ore::encrypt(&ore_key, amp).as_bytes() {
                    return Err(Error::CountMismatch(format!(
                        "cost payload mismatch at {u}/{omega}"
                    )));
                }
            }
        }
    }
    Ok(())
}
