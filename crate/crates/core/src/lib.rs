//! Connor: approximate constrained shortest distance queries over an
//! encrypted graph index.
//!
//! The pipeline: ingest a directed graph with per-edge distances and costs
//! ([`graph`]), build a constrained 2-hop cover labeling thinned by
//! α-domination ([`labeling`]), encrypt it into a flat searchable
//! dictionary ([`index`]), and answer queries through a client/server
//! protocol that filters hub pairs with a tree of order-revealing
//! ciphertexts and aggregates distances homomorphically ([`query`]).
//! [`oracle`] supplies exact answers for verification, and [`bench`],
//! [`net`], and [`report`] make up the measurement harness.

pub mod bench;
pub mod crypto;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod index;
pub mod keystore;
pub mod labeling;
pub mod net;
pub mod oracle;
pub mod query;
pub mod report;
pub mod samples;
pub mod tree;

pub use error::{Error, Result};
