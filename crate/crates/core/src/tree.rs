//! Cost constraint tree: compare `x + y` against a budget θ from
//! order-revealing ciphertexts alone.
//!
//! The tree's in-order positions hold encryptions of `floor(j * θ / 2^d)`
//! for `j = 1 .. 2^d - 1`. Traversing it with a ciphertext (left on
//! less-or-equal, right on greater) yields a β-bit path code, β equal to
//! the depth. Two codes decide the sum: `c_x + c_y >= 2^β` certifies
//! `x + y > θ`, `c_x + c_y <= 2^β - 2` certifies `x + y <= θ`, and the
//! single remaining diagonal `c_x + c_y = 2^β - 1` stays uncertain, which
//! for uniform codes happens with probability `2^-β`.

use std::cmp::Ordering;

use crate::crypto::ore::{self, OreCiphertext, OreKey, ORE_CIPHERTEXT_BYTES};
use crate::error::{Error, Result};

/// Maximum supported depth; token size grows as `2^d`.
pub const MAX_DEPTH: u8 = 8;

/// Complete binary tree of ORE ciphertexts in level order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTree {
    depth: u8,
    nodes: Vec<OreCiphertext>,
}

/// Result of traversing the tree with one ciphertext.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCode {
    pub value: u32,
    pub beta: u8,
}

/// Three-valued comparison verdict for `x + y` versus θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOutcome {
    Greater,
    LessEq,
    Uncertain,
}

/// Plaintext boundary at in-order position `j` (1-based).
pub fn boundary(theta_amp: u64, depth: u8, j: u64) -> u64 {
    ((j as u128 * theta_amp as u128) >> depth) as u64
}

/// Encrypt the boundary tree for an amplified budget.
pub fn build_tree(key: &OreKey, theta_amp: u64, d_theta: u8) -> Result<CostTree> {
    if d_theta < 1 || d_theta > MAX_DEPTH {
        return Err(Error::DepthOutOfRange(d_theta));
    }
    let node_count = (1usize << d_theta) - 1;
    let mut nodes = Vec::with_capacity(node_count);
    // Heap order: node i (1-based) at level l covers in-order position
    // (2 * (i - 2^(l-1)) + 1) * 2^(d-l).
    for i in 1..=node_count {
        let level = (i as u32).ilog2() + 1; // 1-based
        let offset = i - (1 << (level - 1));
        let j = ((2 * offset + 1) as u64) << (d_theta as u32 - level);
        nodes.push(ore::encrypt(key, boundary(theta_amp, d_theta, j)));
    }
    Ok(CostTree { depth: d_theta, nodes })
}

impl CostTree {
    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Traverse from the root: not-greater goes left (bit 0), greater goes
    /// right (bit 1). The resulting code c satisfies
    /// `boundary(c) < x <= boundary(c + 1)` with the outer boundaries at
    /// minus and plus infinity.
    pub fn path_code(&self, ex: &OreCiphertext) -> PathCode {
        let mut node = 1usize;
        let mut code = 0u32;
        for _ in 0..self.depth {
            let go_right = ore::compare(ex, &self.nodes[node - 1]) == Ordering::Greater;
            code = (code << 1) | go_right as u32;
            node = 2 * node + go_right as usize;
        }
        PathCode { value: code, beta: self.depth }
    }

    /// Decide the relation of `x + y` to θ from the two path codes.
    pub fn compare_sum(&self, ex: &OreCiphertext, ey: &OreCiphertext) -> CompareOutcome {
        let cx = self.path_code(ex).value;
        let cy = self.path_code(ey).value;
        verdict_from_codes(cx, cy, self.depth)
    }

    /// Serialization used inside query tokens: 1 depth byte, then the
    /// level-order nodes at 16 bytes each.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + self.nodes.len() * ORE_CIPHERTEXT_BYTES);
        out.push(self.depth);
        for node in &self.nodes {
            out.extend_from_slice(node.as_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let depth = *bytes.first().ok_or(Error::Truncated)?;
        if depth < 1 || depth > MAX_DEPTH {
            return Err(Error::DepthOutOfRange(depth));
        }
        let node_count = (1usize << depth) - 1;
        let expected = 1 + node_count * ORE_CIPHERTEXT_BYTES;
        if bytes.len() != expected {
            return Err(Error::WidthMismatch { expected, got: bytes.len() });
        }
        let nodes = bytes[1..]
            .chunks_exact(ORE_CIPHERTEXT_BYTES)
            .map(|c| OreCiphertext::from_bytes(c.try_into().unwrap()))
            .collect();
        Ok(CostTree { depth, nodes })
    }
}

/// The code-sum rule, shared with tests that sweep codes directly.
pub fn verdict_from_codes(cx: u32, cy: u32, beta: u8) -> CompareOutcome {
    let sum = cx as u64 + cy as u64;
    let full = 1u64 << beta;
    if sum >= full {
        CompareOutcome::Greater
    } else if sum <= full - 2 {
        CompareOutcome::LessEq
    } else {
        CompareOutcome::Uncertain
    }
}
