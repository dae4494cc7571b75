//! The two-party query protocol.
//!
//! The client derives the four per-vertex keys for its origin and
//! destination, builds a cost constraint tree over the amplified budget,
//! and ships the five-tuple to the server. The server unrolls both
//! sketches by probing consecutive counter positions, pairs entries with a
//! common encrypted hub identifier, filters each pair through the tree
//! (keeping uncertain pairs), and aggregates the surviving distance
//! ciphertexts into a single homomorphic sum the client decrypts.

use crate::crypto::ore::{OreCiphertext, OreKey, ORE_CIPHERTEXT_BYTES};
use crate::crypto::prf::{PrfKey, LAMBDA_BYTES};
use crate::crypto::swhe::{SwheBackend, SWHE_CIPHERTEXT_BYTES};
use crate::error::{Error, Result};
use crate::index::{entry_key, entry_pad, vertex_key, EncryptedIndex};
use crate::index::{TAG_IN_S, TAG_IN_T, TAG_OUT_S, TAG_OUT_T};
use crate::tree::{build_tree, CompareOutcome, CostTree, MAX_DEPTH};

/// The wire token `(S_out,s, T_out,s, S_in,t, T_in,t, T_theta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryToken {
    pub s_out: [u8; LAMBDA_BYTES],
    pub t_out: [u8; LAMBDA_BYTES],
    pub s_in: [u8; LAMBDA_BYTES],
    pub t_in: [u8; LAMBDA_BYTES],
    pub tree: CostTree,
}

impl QueryToken {
    /// Byte layout: the four 16-byte labels, one depth byte, then the
    /// level-order tree nodes; `16 * (2^d + 3) + 1` bytes in total.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * LAMBDA_BYTES + 1 + self.tree.node_count() * 16);
        out.extend_from_slice(&self.s_out);
        out.extend_from_slice(&self.t_out);
        out.extend_from_slice(&self.s_in);
        out.extend_from_slice(&self.t_in);
        out.extend_from_slice(&self.tree.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 * LAMBDA_BYTES + 1 {
            return Err(Error::Truncated);
        }
        let field = |i: usize| -> [u8; LAMBDA_BYTES] {
            bytes[i * LAMBDA_BYTES..(i + 1) * LAMBDA_BYTES].try_into().unwrap()
        };
        let tree = CostTree::from_bytes(&bytes[4 * LAMBDA_BYTES..])?;
        Ok(QueryToken {
            s_out: field(0),
            t_out: field(1),
            s_in: field(2),
            t_in: field(3),
            tree,
        })
    }
}

/// Build the token for a query against vertices named by their external
/// labels.
pub fn gen_token(
    key: &PrfKey,
    phi: u64,
    s_label: &str,
    t_label: &str,
    theta: u64,
    d_theta: u8,
) -> Result<QueryToken> {
    if d_theta < 1 || d_theta > MAX_DEPTH {
        return Err(Error::DepthOutOfRange(d_theta));
    }
    // Boundary spacing: at least one phi step per tree cell.
    if phi < (1u64 << d_theta) {
        return Err(Error::PhiTooSmall { phi, d_theta });
    }
    let theta_amp = phi.checked_mul(theta).ok_or(Error::DomainOverflow)?;
    let tree = build_tree(&OreKey::derive(key), theta_amp, d_theta)?;
    Ok(QueryToken {
        s_out: vertex_key(key, s_label, TAG_OUT_S),
        t_out: vertex_key(key, s_label, TAG_OUT_T),
        s_in: vertex_key(key, t_label, TAG_IN_S),
        t_in: vertex_key(key, t_label, TAG_IN_T),
        tree,
    })
}

/// Which dictionary a sketch unroll walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Out,
    In,
}

/// One unmasked sketch record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SketchItem {
    /// Encrypted hub identifier `h(K, v||0)`.
    pub v: [u8; LAMBDA_BYTES],
    /// Homomorphic distance ciphertext.
    pub d: Vec<u8>,
    /// Order-revealing cost ciphertext.
    pub c: OreCiphertext,
}

/// Probe counter positions `0, 1, 2, ...` until the first absent key,
/// unmasking each hit. An absent first key simply yields an empty list.
pub fn unroll_sketch(
    enc: &EncryptedIndex,
    t_label: &[u8; LAMBDA_BYTES],
    s_label: &[u8; LAMBDA_BYTES],
    side: Side,
) -> Vec<SketchItem> {
    let record_len = enc.widths().record_bytes();
    let mut items = Vec::new();
    for omega in 0u64.. {
        let key = entry_key(t_label, omega);
        let record = match side {
            Side::Out => enc.lookup_out(&key),
            Side::In => enc.lookup_in(&key),
        };
        let Some(record) = record else {
            break;
        };
        let pad = entry_pad(s_label, omega, record_len);
        let mut plain = record.to_vec();
        for (b, p) in plain.iter_mut().zip(&pad) {
            *b ^= p;
        }
        let v: [u8; LAMBDA_BYTES] = plain[..LAMBDA_BYTES].try_into().unwrap();
        let d = plain[LAMBDA_BYTES..LAMBDA_BYTES + SWHE_CIPHERTEXT_BYTES].to_vec();
        let c: [u8; ORE_CIPHERTEXT_BYTES] =
            plain[LAMBDA_BYTES + SWHE_CIPHERTEXT_BYTES..].try_into().unwrap();
        items.push(SketchItem { v, d, c: OreCiphertext::from_bytes(c) });
    }
    items
}

/// Server reply: the number of admitted candidate pairs and their summed
/// product ciphertext. `cipher` is absent exactly when no pair survived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptedResult {
    pub y_size: u32,
    pub cipher: Option<Vec<u8>>,
}

impl EncryptedResult {
    pub fn is_empty(&self) -> bool {
        self.cipher.is_none()
    }

    /// Wire form: 1 flags byte (bit 0 = empty), big-endian u32 candidate
    /// count (zero when hidden), then the ciphertext unless empty.
    pub fn to_bytes(&self, hide_y_size: bool) -> Vec<u8> {
        let mut out = Vec::with_capacity(5 + SWHE_CIPHERTEXT_BYTES);
        out.push(self.cipher.is_none() as u8);
        let y = if hide_y_size { 0 } else { self.y_size };
        out.extend_from_slice(&y.to_be_bytes());
        if let Some(c) = &self.cipher {
            out.extend_from_slice(c);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], z_bytes: usize) -> Result<Self> {
        if bytes.len() < 5 {
            return Err(Error::Truncated);
        }
        let empty = bytes[0] & 1 == 1;
        let y_size = u32::from_be_bytes(bytes[1..5].try_into().unwrap());
        if empty {
            if bytes.len() != 5 {
                return Err(Error::WidthMismatch { expected: 5, got: bytes.len() });
            }
            return Ok(EncryptedResult { y_size, cipher: None });
        }
        if bytes.len() != 5 + z_bytes {
            return Err(Error::WidthMismatch { expected: 5 + z_bytes, got: bytes.len() });
        }
        Ok(EncryptedResult { y_size, cipher: Some(bytes[5..].to_vec()) })
    }
}

/// Filter decision for one hub pair, kept for test-bench decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracedPair {
    pub v: [u8; LAMBDA_BYTES],
    pub out_pos: usize,
    pub in_pos: usize,
    pub verdict: CompareOutcome,
}

/// Execute the query on the server: unroll both sketches, pair entries on
/// the encrypted hub identifier, drop pairs the tree certifies as over
/// budget, and homomorphically sum the products of the rest. Pairs the
/// tree cannot decide stay in.
pub fn server_query(
    enc: &EncryptedIndex,
    token: &QueryToken,
    backend: &dyn SwheBackend,
) -> Result<EncryptedResult> {
    Ok(server_query_traced(enc, token, backend)?.0)
}

pub fn server_query_traced(
    enc: &EncryptedIndex,
    token: &QueryToken,
    backend: &dyn SwheBackend,
) -> Result<(EncryptedResult, Vec<TracedPair>)> {
    let l_s = unroll_sketch(enc, &token.t_out, &token.s_out, Side::Out);
    let l_t = unroll_sketch(enc, &token.t_in, &token.s_in, Side::In);

    let mut by_hub: std::collections::HashMap<[u8; LAMBDA_BYTES], Vec<usize>> =
        std::collections::HashMap::new();
    for (j, item) in l_t.iter().enumerate() {
        by_hub.entry(item.v).or_default().push(j);
    }

    let mut acc: Option<Vec<u8>> = None;
    let mut trace = Vec::new();
    for (i, s_item) in l_s.iter().enumerate() {
        let Some(matches) = by_hub.get(&s_item.v) else {
            continue;
        };
        for &j in matches {
            let t_item = &l_t[j];
            let verdict = token.tree.compare_sum(&s_item.c, &t_item.c);
            if verdict == CompareOutcome::Greater {
                continue;
            }
            let product = backend.mul(&s_item.d, &t_item.d)?;
            acc = Some(match acc {
                None => product,
                Some(sum) => backend.add(&sum, &product)?,
            });
            trace.push(TracedPair { v: s_item.v, out_pos: i, in_pos: j, verdict });
        }
    }
    let result = EncryptedResult { y_size: trace.len() as u32, cipher: acc };
    Ok((result, trace))
}

/// Client-side recovery: `2N - floor(log2(Dec(d)))`.
///
/// With candidate pair sums `d_i`, the decrypted aggregate is
/// `sum(2^(2N - d_i))`, so the recovered value sits in
/// `[min(d_i) - floor(log2 |Y|), min(d_i)]` and equals `min(d_i)` whenever
/// one pair dominates. The value is signed because enough tied candidates
/// can push the floor below zero.
pub fn recover_distance(
    sk: &[u8],
    result: &EncryptedResult,
    n_exp: u64,
    backend: &dyn SwheBackend,
) -> Result<Option<i64>> {
    let Some(cipher) = &result.cipher else {
        return Ok(None);
    };
    let m = backend.decrypt(sk, cipher)?;
    if m == num_bigint::BigUint::ZERO {
        return Ok(None);
    }
    let floor_log2 = m.bits() - 1;
    // Candidate counts are bounded by 2^20 in the message-space sizing, so
    // anything above 2N + 20 bits is corruption.
    if floor_log2 > 2 * n_exp + 20 {
        return Err(Error::CorruptResult);
    }
    Ok(Some(2 * n_exp as i64 - floor_log2 as i64))
}
