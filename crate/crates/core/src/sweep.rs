//! Point evaluation and parameter sweeps over scenario files, with CSV
//! output. Sweep points are evaluated in parallel; rows are emitted in
//! axis order regardless of completion order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::e2e::TermDiagnostics;
use crate::error::Result;
use crate::montecarlo::{mc_pnz, mc_sop_exact, mc_sop_lower, McEstimate};
use crate::scenario::{ResolvedScenario, SweepVariable};
use crate::secrecy::{self, SecrecyMetrics};
use crate::EvalOptions;

/// CSV schema version emitted in the header comment.
pub const CSV_SCHEMA: &str = "uwsec-sweep-csv v1";

/// Monte Carlo columns of one sweep row.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McColumns {
    pub sop_lower: McEstimate,
    pub sop_exact: McEstimate,
    pub pnz: McEstimate,
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_db: f64,
    pub metrics: SecrecyMetrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McColumns>,
}

/// Full sweep result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: Option<SweepVariable>,
    pub rows: Vec<SweepRow>,
    pub master_seed: Option<u64>,
}

/// Analytic metrics plus diagnostics at one operating point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointReport {
    pub metrics: SecrecyMetrics,
    pub fixed_gain_constant: f64,
    pub diagnostics: TermDiagnostics,
    pub rel_tol_univariate: f64,
    pub rel_tol_bivariate: f64,
}

/// Evaluate all six analytic metrics at the scenario's own point.
pub fn eval_point(s: &ResolvedScenario, opts: &EvalOptions) -> Result<PointReport> {
    let (metrics, diagnostics) =
        secrecy::metrics(&s.links, &s.eve, &s.relay, &s.secrecy, opts)?;
    Ok(PointReport {
        metrics,
        fixed_gain_constant: s.relay.fixed_gain_constant(&s.links.rf)?,
        diagnostics,
        rel_tol_univariate: opts.rel_tol_univariate,
        rel_tol_bivariate: opts.rel_tol_bivariate,
    })
}

fn eval_row(s: &ResolvedScenario, axis_db: f64, opts: &EvalOptions) -> Result<SweepRow> {
    let (metrics, _) = secrecy::metrics(&s.links, &s.eve, &s.relay, &s.secrecy, opts)?;
    let mc = match &s.mc {
        Some(cfg) => Some(McColumns {
            sop_lower: mc_sop_lower(&s.links, &s.eve, &s.relay, &s.secrecy, cfg)?,
            sop_exact: mc_sop_exact(&s.links, &s.eve, &s.relay, &s.secrecy, cfg)?,
            pnz: mc_pnz(&s.links, &s.eve, &s.relay, cfg)?,
        }),
        None => None,
    };
    Ok(SweepRow { axis_db, metrics, mc })
}

/// Run the scenario's sweep (or a single-point "sweep" when no axis is
/// configured, which reproduces [`eval_point`]'s metrics as one row).
pub fn run_sweep(s: &ResolvedScenario, opts: &EvalOptions) -> Result<SweepTable> {
    let master_seed = s.mc.as_ref().map(|m| m.master_seed);
    match &s.sweep {
        None => {
            let axis_db = crate::linear_to_db(s.links.rf.mean_snr);
            Ok(SweepTable {
                axis: None,
                rows: vec![eval_row(s, axis_db, opts)?],
                master_seed,
            })
        }
        Some(axis) => {
            axis.validate()?;
            let values = axis.values();
            let rows: Result<Vec<SweepRow>> = values
                .par_iter()
                .map(|&v| eval_row(&s.at_axis(axis.variable, v), v, opts))
                .collect();
            Ok(SweepTable {
                axis: Some(axis.variable),
                rows: rows?,
                master_seed,
            })
        }
    }
}

impl SweepTable {
    /// Write the table as CSV: `#`-prefixed metadata lines, a header row,
    /// then one row per axis point. Deterministic for a given scenario and
    /// seed.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "# {CSV_SCHEMA}")?;
        let axis_name = self
            .axis
            .map(|a| a.column_name())
            .unwrap_or("gamma1_db");
        writeln!(out, "# axis: {axis_name}")?;
        if let Some(seed) = self.master_seed {
            writeln!(out, "# master_seed: {seed}")?;
        }
        let mc_cols = self.rows.first().is_some_and(|r| r.mc.is_some());
        write!(
            out,
            "axis_db,sop_lower,sop_asym_main,sop_asym_eve,pnz,pnz_asym_main,pnz_asym_eve"
        )?;
        if mc_cols {
            write!(
                out,
                ",mc_sop_lower,mc_sop_lower_se,mc_sop_exact,mc_sop_exact_se,mc_pnz,mc_pnz_se"
            )?;
        }
        writeln!(out)?;
        for row in &self.rows {
            let m = &row.metrics;
            write!(
                out,
                "{:.6},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                row.axis_db,
                m.sop_lower,
                m.sop_asym_main,
                m.sop_asym_eve,
                m.pnz,
                m.pnz_asym_main,
                m.pnz_asym_eve
            )?;
            if let Some(mc) = &row.mc {
                write!(
                    out,
                    ",{:.9e},{:.3e},{:.9e},{:.3e},{:.9e},{:.3e}",
                    mc.sop_lower.value,
                    mc.sop_lower.std_error,
                    mc.sop_exact.value,
                    mc.sop_exact.std_error,
                    mc.pnz.value,
                    mc.pnz.std_error
                )?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
