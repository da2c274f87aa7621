//! Versioned CSV tables for scans and sweeps.
//!
//! Each file opens with a `#` line naming the schema, then one header row.

use std::io::{self, Write};

use crate::experiments::{AttentionEffect, ScanResult, SweepResult};
use crate::output::fmt_num;

pub const SCAN_SCHEMA: &str = "# schema: attnet-scan v1";
pub const SWEEP_SCHEMA: &str = "# schema: attnet-sweep v1";

pub const SCAN_COLUMNS: [&str; 13] = [
    "imitator_id",
    "target_id",
    "imitator_rank",
    "target_rank",
    "imitator_centrality",
    "target_centrality",
    "lambda_before",
    "lambda_after",
    "delta_exact",
    "delta_predicted",
    "condition",
    "A_before",
    "A_after",
];

pub const SWEEP_COLUMNS: [&str; 6] = ["kind", "sigma", "instances", "pairs", "successes", "success_rate"];

/// One row per ordered pair, in (imitator rank, target rank) order.
///
/// `attention` must come from [`crate::experiments::summarize_attention_effect`]
/// on the same scan.
pub fn write_scan_csv<W: Write>(mut out: W, scan: &ScanResult, attention: &[AttentionEffect]) -> io::Result<()> {
    writeln!(out, "{SCAN_SCHEMA}")?;
    writeln!(out, "{}", SCAN_COLUMNS.join(","))?;
    for ((a, b, o), eff) in scan.pairs().zip(attention) {
        debug_assert_eq!((eff.imitator_id, eff.target_id), (o.spec.imitator, o.spec.target));
        let fields = [
            o.spec.imitator.to_string(),
            o.spec.target.to_string(),
            a.to_string(),
            b.to_string(),
            fmt_num(o.centrality_imitator),
            fmt_num(o.centrality_target),
            fmt_num(o.lambda_before),
            fmt_num(o.lambda_after),
            fmt_num(o.delta_exact),
            fmt_num(o.delta_predicted),
            o.condition.to_string(),
            fmt_num(eff.a_before),
            fmt_num(eff.a_after),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut out: W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(out, "{SWEEP_SCHEMA}")?;
    writeln!(out, "{}", SWEEP_COLUMNS.join(","))?;
    for r in &sweep.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.kind,
            fmt_num(r.sigma),
            r.instances,
            r.pairs,
            r.successes,
            fmt_num(r.success_rate)
        )?;
    }
    Ok(())
}
