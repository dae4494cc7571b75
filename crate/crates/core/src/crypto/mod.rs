//! Cryptographic building blocks: the two keyed PRFs used for dictionary
//! labels and record masks, order-revealing encryption for costs, and the
//! pluggable somewhat-homomorphic backend for distances.

pub mod ore;
pub mod prf;
pub mod swhe;

pub use ore::{OreCiphertext, OreKey, ORE_CIPHERTEXT_BYTES};
pub use prf::{prf_g, prf_h, PrfKey, LAMBDA_BYTES};
pub use swhe::{SwheBackend, TransparentSwhe, SWHE_CIPHERTEXT_BYTES};
