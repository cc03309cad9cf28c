//! `reproduce-table`: recompute a published stability table from the
//! configured interaction function and report every difference.

use serde::Serialize;

use phaseclust::catalog::twist_solution;
use phaseclust::reference::{self, HomogeneousCase, ReferenceCase};
use phaseclust::stability::{sweep_homogeneous, sweep_twist, SweepResult};
use phaseclust::topology::CouplingTopology;

use crate::artifacts::{interval_cell, ArtifactSet, Csv};
use crate::commands::sweep::sweep_options;
use crate::config::{ExperimentConfig, TableId};
use crate::context::{fan_out, resolve_interaction};
use crate::error::{schema, Result};

/// Agreement tolerance on interval endpoints: published values carry at
/// most two digits past the decimal point.
pub const TABLE_TOL: f64 = 0.05;

/// One table row to recompute: a twist state under distance-weighted
/// coupling, or an n-cluster state under homogeneous coupling.
#[derive(Clone, Copy)]
enum TableRow {
    Twist(ReferenceCase),
    Homogeneous(HomogeneousCase),
}

impl TableRow {
    fn n_osc(&self) -> u32 {
        match self {
            TableRow::Twist(c) => c.n_osc,
            TableRow::Homogeneous(c) => c.n_osc,
        }
    }

    fn clusters(&self) -> u32 {
        match self {
            TableRow::Twist(c) => c.clusters,
            TableRow::Homogeneous(c) => c.clusters,
        }
    }

    fn q(&self) -> Option<u32> {
        match self {
            TableRow::Twist(c) => Some(c.q),
            TableRow::Homogeneous(_) => None,
        }
    }

    fn published(&self) -> &'static [(f64, f64)] {
        match self {
            TableRow::Twist(c) => c.intervals,
            TableRow::Homogeneous(c) => c.intervals,
        }
    }
}

fn table_rows(id: TableId) -> Vec<TableRow> {
    match id {
        TableId::W1 => reference::DISTANCE_WEIGHTED_INTERVALS
            .iter()
            .copied()
            .map(TableRow::Twist)
            .collect(),
        TableId::W2 => reference::HOMOGENEOUS_INTERVALS
            .iter()
            .copied()
            .map(TableRow::Homogeneous)
            .collect(),
        TableId::N140W1 => reference::N140_DISTANCE_WEIGHTED
            .iter()
            .copied()
            .map(TableRow::Twist)
            .collect(),
        TableId::N140W2 => reference::N140_HOMOGENEOUS
            .iter()
            .copied()
            .map(TableRow::Homogeneous)
            .collect(),
    }
}

#[derive(Serialize)]
struct RowReport {
    n_osc: u32,
    clusters: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_endpoint_error: Option<f64>,
    computed: Vec<(f64, f64)>,
    published: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct TableReport {
    seed: u64,
    table: &'static str,
    period: f64,
    omega: f64,
    tau_min: f64,
    tau_max: f64,
    grid: usize,
    tolerance: f64,
    rows: Vec<RowReport>,
    matched: usize,
    endpoint_deviations: usize,
    count_mismatches: usize,
}

/// Largest endpoint difference between two interval lists of equal length,
/// paired in ascending order.
fn max_endpoint_error(computed: &[(f64, f64)], published: &[(f64, f64)]) -> f64 {
    computed
        .iter()
        .zip(published)
        .map(|(c, p)| (c.0 - p.0).abs().max((c.1 - p.1).abs()))
        .fold(0.0, f64::max)
}

fn interval_rows(csv: &mut Csv, prefix: &str, intervals: &[(f64, f64)]) {
    if intervals.is_empty() {
        csv.row(format_args!("{prefix},,,"));
        return;
    }
    for (k, (a, b)) in intervals.iter().enumerate() {
        csv.row(format_args!("{prefix},{k},{a:.4},{b:.4}"));
    }
}

pub fn run(cfg: &ExperimentConfig, jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    let table_cfg = cfg
        .table
        .as_ref()
        .ok_or_else(|| schema("reproduce-table requires a table id (argument or [table])"))?;
    let id = table_cfg.id;
    let n_min = table_cfg.n_min.unwrap_or(0);
    let n_max = table_cfg.n_max.unwrap_or(u32::MAX);

    let interaction = resolve_interaction(cfg, artifacts)?;
    let sign = cfg.coupling.sign.to_sign();
    let tau_min = cfg.delays.tau_min;
    let tau_max = cfg.delays.tau_max.unwrap_or(interaction.period);
    // Narrow stability windows (a few tenths of a time unit) need a finer
    // default grid than the interactive sweep command.
    let grid = cfg.delays.grid.unwrap_or(4096);
    let opts = sweep_options(tau_min, tau_max, grid);

    let rows: Vec<TableRow> = table_rows(id)
        .into_iter()
        .filter(|row| row.n_osc() >= n_min && row.n_osc() <= n_max)
        .collect();
    if rows.is_empty() {
        return Err(schema(format!(
            "table {} has no rows with {n_min} <= N <= {n_max}",
            id.name()
        )));
    }

    let results: Vec<Result<SweepResult>> = fan_out(jobs, rows.clone(), |_, row| {
        let res = match row {
            TableRow::Twist(c) => {
                let top = CouplingTopology::distance_weighted(c.n_osc as usize)?;
                let sol = twist_solution(c.n_osc as usize, c.q as usize)?;
                sweep_twist(&top, &interaction.series, &sol, interaction.omega, sign, &opts)
            }
            TableRow::Homogeneous(c) => sweep_homogeneous(
                c.n_osc as usize,
                c.clusters as usize,
                &interaction.series,
                interaction.omega,
                sign,
                &opts,
            ),
        };
        res.map_err(Into::into)
    });

    let name = id.name();
    let has_q = matches!(id, TableId::W1 | TableId::N140W1);
    let header = if has_q {
        "n_osc,clusters,q,interval_index,tau_start,tau_end"
    } else {
        "n_osc,clusters,interval_index,tau_start,tau_end"
    };
    let mut computed_csv = Csv::new(cfg.seed, header);
    let mut published_csv = Csv::new(cfg.seed, header);
    let diff_header = if has_q {
        "n_osc,clusters,q,status,max_endpoint_error,computed,published"
    } else {
        "n_osc,clusters,status,max_endpoint_error,computed,published"
    };
    let mut diff_csv = Csv::new(cfg.seed, diff_header);

    let mut reports = Vec::new();
    let (mut matched, mut deviations, mut mismatches) = (0usize, 0usize, 0usize);
    for (row, result) in rows.iter().zip(results) {
        let result = result?;
        let computed: Vec<(f64, f64)> =
            result.intervals.iter().map(|iv| (iv.start, iv.end)).collect();
        let published = row.published();

        let prefix = match row.q() {
            Some(q) => format!("{},{},{q}", row.n_osc(), row.clusters()),
            None => format!("{},{}", row.n_osc(), row.clusters()),
        };
        interval_rows(&mut computed_csv, &prefix, &computed);
        interval_rows(&mut published_csv, &prefix, published);

        let (status, error) = if computed.len() != published.len() {
            mismatches += 1;
            ("count-mismatch", None)
        } else {
            let e = max_endpoint_error(&computed, published);
            if e <= TABLE_TOL {
                matched += 1;
                ("match", Some(e))
            } else {
                deviations += 1;
                ("endpoint-deviation", Some(e))
            }
        };
        let error_cell = error.map_or(String::new(), |e| format!("{e:.4}"));
        diff_csv.row(format_args!(
            "{prefix},{status},{error_cell},{},{}",
            interval_cell(&computed),
            interval_cell(published)
        ));
        println!(
            "N = {} {}C{}: {status} | computed {} | published {}",
            row.n_osc(),
            row.clusters(),
            row.q().map_or(String::new(), |q| format!(" (q = {q})")),
            interval_cell(&computed),
            interval_cell(published)
        );

        reports.push(RowReport {
            n_osc: row.n_osc(),
            clusters: row.clusters(),
            q: row.q(),
            status,
            max_endpoint_error: error,
            computed,
            published: published.to_vec(),
        });
    }

    println!(
        "{name}: {matched}/{} rows match the published intervals within +-{TABLE_TOL}",
        reports.len()
    );

    artifacts.write(&format!("computed_{name}.csv"), &computed_csv.into_bytes())?;
    artifacts.write(&format!("published_{name}.csv"), &published_csv.into_bytes())?;
    artifacts.write(&format!("diff_{name}.csv"), &diff_csv.into_bytes())?;
    let report = TableReport {
        seed: cfg.seed,
        table: name,
        period: interaction.period,
        omega: interaction.omega,
        tau_min,
        tau_max,
        grid,
        tolerance: TABLE_TOL,
        rows: reports,
        matched,
        endpoint_deviations: deviations,
        count_mismatches: mismatches,
    };
    artifacts.write_json(&format!("table_{name}.json"), &report)?;
    Ok(())
}
