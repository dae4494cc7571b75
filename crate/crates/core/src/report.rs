//! Benchmark metrics and their text/CSV/JSON renderings.

use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Metrics {
    pub datasets: Vec<DatasetMetrics>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetMetrics {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub index_build_s: f64,
    pub index_bytes: u64,
    pub omega_out: u64,
    pub omega_in: u64,
    pub per_depth: Vec<DepthMetrics>,
    pub deviation: Option<DeviationSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthMetrics {
    pub d_theta: u8,
    pub token_bytes: usize,
    pub token_gen_ms_mean: f64,
    pub enc_query_ms_mean: f64,
    pub enc_query_ms_sd: f64,
    pub plain_query_ms_mean: f64,
    pub precision_mean: f64,
    pub queries: usize,
}

/// Deviation-rate distribution at one depth; `cdf` is the sorted list of
/// observed ratios.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationSummary {
    pub d_theta: u8,
    pub count: usize,
    pub excluded_infeasible: usize,
    pub min_xi: f64,
    pub median_xi: f64,
    pub frac_ge_090: f64,
    pub cdf: Vec<f64>,
}

impl DeviationSummary {
    pub fn from_sorted(d_theta: u8, cdf: Vec<f64>, excluded: usize) -> Self {
        let count = cdf.len();
        let min_xi = cdf.first().copied().unwrap_or(f64::NAN);
        let median_xi = if count == 0 { f64::NAN } else { cdf[count / 2] };
        let ge = cdf.iter().filter(|&&x| x >= 0.90).count();
        let frac_ge_090 = if count == 0 { f64::NAN } else { ge as f64 / count as f64 };
        DeviationSummary {
            d_theta,
            count,
            excluded_infeasible: excluded,
            min_xi,
            median_xi,
            frac_ge_090,
            cdf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(crate::error::Error::Malformed {
                line: 0,
                msg: format!("unknown report format {other:?}"),
            }),
        }
    }
}

const CSV_HEADER: &str = "dataset,n,m,d_theta,token_bytes,token_gen_ms,\
enc_query_ms_mean,enc_query_ms_sd,plain_query_ms_mean,precision,queries,\
index_build_s,index_bytes,omega_out,omega_in,dev_count,dev_min_xi,\
dev_median_xi,dev_frac_ge_090";

/// Render metrics with a stable column order.
pub fn render(metrics: &Metrics, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_vec_pretty(metrics).expect("serializable")),
        ReportFormat::Csv => Ok(render_csv(metrics).into_bytes()),
        ReportFormat::Text => Ok(render_text(metrics).into_bytes()),
    }
}

fn render_csv(metrics: &Metrics) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for ds in &metrics.datasets {
        for depth in &ds.per_depth {
            let dev = ds
                .deviation
                .as_ref()
                .filter(|d| d.d_theta == depth.d_theta);
            let dev_cols = match dev {
                Some(d) => format!(
                    "{},{:.4},{:.4},{:.4}",
                    d.count, d.min_xi, d.median_xi, d.frac_ge_090
                ),
                None => ",,,".to_string(),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{},{:.3},{},{},{},{}\n",
                ds.name,
                ds.n,
                ds.m,
                depth.d_theta,
                depth.token_bytes,
                depth.token_gen_ms_mean,
                depth.enc_query_ms_mean,
                depth.enc_query_ms_sd,
                depth.plain_query_ms_mean,
                depth.precision_mean,
                depth.queries,
                ds.index_build_s,
                ds.index_bytes,
                ds.omega_out,
                ds.omega_in,
                dev_cols,
            ));
        }
    }
    out
}

fn render_text(metrics: &Metrics) -> String {
    let mut out = String::new();
    for ds in &metrics.datasets {
        out.push_str(&format!(
            "{}: n={} m={} | index {:.2}s, {} bytes, entries {}/{}\n",
            ds.name, ds.n, ds.m, ds.index_build_s, ds.index_bytes, ds.omega_out, ds.omega_in
        ));
        for d in &ds.per_depth {
            out.push_str(&format!(
                "  depth {}: token {} B, gen {:.3} ms, enc query {:.3} ms (sd {:.3}), \
                 plain {:.4} ms, precision {:.4} ({} queries)\n",
                d.d_theta,
                d.token_bytes,
                d.token_gen_ms_mean,
                d.enc_query_ms_mean,
                d.enc_query_ms_sd,
                d.plain_query_ms_mean,
                d.precision_mean,
                d.queries
            ));
        }
        if let Some(dev) = &ds.deviation {
            out.push_str(&format!(
                "  deviation @ depth {}: {} queries ({} excluded), min {:.3}, \
                 median {:.3}, {:.1}% >= 0.90\n",
                dev.d_theta,
                dev.count,
                dev.excluded_infeasible,
                dev.min_xi,
                dev.median_xi,
                100.0 * dev.frac_ge_090
            ));
        }
    }
    out
}
