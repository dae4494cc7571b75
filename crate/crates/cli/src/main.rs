//! `connor` — build, encrypt, serve, and query constrained shortest
//! distance indexes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use connor_core::bench::{self, BenchConfig};
use connor_core::crypto::swhe::{TransparentSwhe, SWHE_CIPHERTEXT_BYTES};
use connor_core::graph::{Graph, VertexId, WeightSpec};
use connor_core::index::{setup, EncryptedIndex, SetupParams};
use connor_core::keystore::{random_phi, Keystore};
use connor_core::labeling::{Alpha, LabelIndex};
use connor_core::net::{query_remote, serve, ServeOpts};
use connor_core::oracle::{exact_csd, CsdQuery};
use connor_core::query::{gen_token, recover_distance, server_query, EncryptedResult};
use connor_core::report::{render, ReportFormat};

#[derive(Parser)]
#[command(name = "connor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an edge list into the binary graph format.
    Ingest {
        /// Edge-list file (`u v` or `u v d c` per line, `#` comments).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Input lines carry `dist cost` columns.
        #[arg(long)]
        has_weights: bool,
        /// Model each line as two opposite arcs.
        #[arg(long)]
        undirected: bool,
    },
    /// Draw uniform synthetic weights over a graph.
    Weights {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        lo: u32,
        #[arg(long, default_value_t = 100)]
        hi: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the plaintext 2-hop labeling index.
    BuildLabel {
        /// Approximation ratio, e.g. `3/2`.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional per-sketch entry cap (safety valve for dense graphs).
        #[arg(long)]
        entry_cap: Option<usize>,
    },
    /// Encrypt a labeling index into the searchable dictionary form.
    Encrypt {
        /// Amplification factor, or `auto` for a random draw.
        #[arg(long, default_value = "auto")]
        phi: String,
        #[arg(long)]
        index: PathBuf,
        /// Keystore file; created (with fresh keys) when missing.
        #[arg(long)]
        keystore: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a query token.
    Token {
        #[arg(long)]
        keystore: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        theta: u64,
        #[arg(long, default_value_t = 6)]
        depth: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a token against a local or remote encrypted index.
    Query {
        /// Local encrypted index file.
        #[arg(long, conflicts_with = "addr")]
        index: Option<PathBuf>,
        /// Remote server address (host:port).
        #[arg(long)]
        addr: Option<String>,
        #[arg(long)]
        token: PathBuf,
        /// Keystore for recovering the distance from the reply.
        #[arg(long)]
        keystore: Option<PathBuf>,
        /// Distance-encoding exponent N for remote recovery (local
        /// queries read it from the index header).
        #[arg(long)]
        n: Option<u64>,
        /// Write the raw result bytes here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact constrained shortest distance on the plaintext graph.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        theta: u64,
    },
    /// Serve an encrypted index over TCP.
    Serve {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        #[arg(long, default_value_t = 0)]
        port: u16,
        /// Zero out the candidate count in replies.
        #[arg(long)]
        hide_ysize: bool,
    },
    /// Run the benchmark suite and write a report.
    Bench {
        /// JSON benchmark config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Correctness-only mode: parallel query execution, no timings.
        #[arg(long)]
        parallel: bool,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Ingest { input, output, has_weights, undirected } => {
            let file = File::open(&input).with_context(|| format!("open {input:?}"))?;
            let g = Graph::parse_edge_list_opts(BufReader::new(file), has_weights, undirected)?;
            write_graph(&g, &output)?;
            println!(
                "ingested {} vertices, {} edges -> {}",
                g.n(),
                g.m(),
                output.display()
            );
            Ok(())
        }
        Command::Weights { graph, seed, lo, hi, out } => {
            let g = read_graph(&graph)?;
            let spec = WeightSpec::new(seed, lo, hi)?;
            let g = g.synthesize_weights(&spec);
            write_graph(&g, &out)?;
            println!("weighted {} edges uniformly on [{lo}, {hi}] (seed {seed})", g.m());
            Ok(())
        }
        Command::BuildLabel { alpha, graph, out, entry_cap } => {
            let alpha: Alpha = alpha.parse()?;
            let g = read_graph(&graph)?;
            let opts = connor_core::labeling::BuildOpts { entry_cap };
            let idx = connor_core::labeling::build_index_opts(&g, alpha, opts)?;
            idx.write(BufWriter::new(File::create(&out)?))?;
            println!(
                "labeled {} vertices: {} out entries, {} in entries, B = {}",
                idx.n(),
                idx.total_out_entries(),
                idx.total_in_entries(),
                idx.max_dist_b()
            );
            Ok(())
        }
        Command::Encrypt { phi, index, keystore, out } => {
            let idx = LabelIndex::read(BufReader::new(File::open(&index)?))?;
            let backend = TransparentSwhe;
            let ks = if keystore.exists() {
                Keystore::read(BufReader::new(File::open(&keystore)?))?
            } else {
                let phi = match phi.as_str() {
                    "auto" => random_phi()?,
                    v => v.parse().context("bad --phi")?,
                };
                let ks = Keystore::generate(&backend, phi)?;
                ks.write(BufWriter::new(File::create(&keystore)?))?;
                println!("created keystore {} (phi = {})", keystore.display(), ks.phi);
                ks
            };
            let params = SetupParams::new(idx.alpha(), ks.phi, idx.max_dist_b())?;
            let enc = setup(&ks.key, &ks.pair, &params, &idx, &backend)?;
            enc.write(BufWriter::new(File::create(&out)?))?;
            println!(
                "encrypted index: {} + {} records, N = {} -> {}",
                enc.omega_out(),
                enc.omega_in(),
                enc.n_exp(),
                out.display()
            );
            Ok(())
        }
        Command::Token { keystore, s, t, theta, depth, out } => {
            let ks = Keystore::read(BufReader::new(File::open(&keystore)?))?;
            let token = gen_token(&ks.key, ks.phi, &s, &t, theta, depth)?;
            let bytes = token.to_bytes();
            File::create(&out)?.write_all(&bytes)?;
            println!("token for ({s} -> {t}, theta {theta}, depth {depth}): {} bytes", bytes.len());
            Ok(())
        }
        Command::Query { index, addr, token, keystore, n, out } => {
            let mut token_bytes = Vec::new();
            File::open(&token)?.read_to_end(&mut token_bytes)?;
            let backend = TransparentSwhe;
            let (result_bytes, n_exp) = match (&index, &addr) {
                (Some(path), None) => {
                    let enc = EncryptedIndex::read(BufReader::new(File::open(path)?))?;
                    let tok = connor_core::query::QueryToken::from_bytes(&token_bytes)?;
                    let res = server_query(&enc, &tok, &backend)?;
                    (res.to_bytes(false), Some(enc.n_exp()))
                }
                (None, Some(addr)) => (query_remote(addr.as_str(), &token_bytes)?, n),
                _ => bail!("pass exactly one of --index or --addr"),
            };
            if let Some(path) = &out {
                File::create(path)?.write_all(&result_bytes)?;
            }
            let res = EncryptedResult::from_bytes(&result_bytes, SWHE_CIPHERTEXT_BYTES)?;
            match keystore {
                Some(path) => {
                    let ks = Keystore::read(BufReader::new(File::open(&path)?))?;
                    let Some(n_exp) = n_exp else {
                        bail!("remote recovery needs --n (the index's distance exponent)")
                    };
                    match recover_distance(&ks.pair.sk, &res, n_exp, &backend)? {
                        Some(d) => println!("{d}"),
                        None => println!("INFEASIBLE"),
                    }
                }
                None => {
                    println!(
                        "result: empty = {}, |Y| = {} ({} bytes)",
                        res.is_empty(),
                        res.y_size,
                        result_bytes.len()
                    );
                }
            }
            Ok(())
        }
        Command::Oracle { graph, s, t, theta } => {
            let g = read_graph(&graph)?;
            let q = CsdQuery::new(lookup(&g, &s)?, lookup(&g, &t)?, theta)?;
            match exact_csd(&g, &q)? {
                Some(d) => println!("{d}"),
                None => println!("INFEASIBLE"),
            }
            Ok(())
        }
        Command::Serve { index, bind, port, hide_ysize } => {
            let enc = EncryptedIndex::read(BufReader::new(File::open(&index)?))?;
            let server = serve(
                Arc::new(enc),
                (bind.as_str(), port),
                ServeOpts { hide_y_size: hide_ysize },
            )?;
            println!("listening on {}", server.addr());
            // Serve until interrupted.
            loop {
                std::thread::park();
            }
        }
        Command::Bench { config, out, format, parallel } => {
            let mut cfg: BenchConfig = match config {
                Some(path) => serde_json::from_reader(BufReader::new(File::open(&path)?))
                    .context("parse bench config")?,
                None => BenchConfig::default(),
            };
            if let Ok(seed) = std::env::var("CONNOR_SEED") {
                cfg.seed = seed.parse().context("CONNOR_SEED must be an integer")?;
            }
            cfg.parallel = cfg.parallel || parallel;
            let format: ReportFormat = format.parse()?;
            let metrics = bench::run(&cfg)?;
            let bytes = render(&metrics, format)?;
            File::create(&out)?.write_all(&bytes)?;
            println!("report written to {}", out.display());
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(Graph::read_binary(BufReader::new(
        File::open(path).with_context(|| format!("open {path:?}"))?,
    ))?)
}

fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    Ok(g.write_binary(BufWriter::new(File::create(path)?))?)
}

fn lookup(g: &Graph, label: &str) -> Result<VertexId> {
    g.vertex_by_label(label)
        .ok_or_else(|| connor_core::Error::UnknownVertex(label.to_string()).into())
}
