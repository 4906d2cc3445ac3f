//! Batch runner and result tables.

use std::fmt::Write as _;
use std::io;

use clex::{solve, Outcome};
use rayon::prelude::*;

use crate::instance::NspInstance;
use crate::model::{build_model, ModelConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Solution,
    Unsat,
    Limit,
    /// The configuration does not fit the instance.
    Error(String),
}

impl RunOutcome {
    pub fn label(&self) -> &str {
        match self {
            RunOutcome::Solution => "solution",
            RunOutcome::Unsat => "unsat",
            RunOutcome::Limit => "limit",
            RunOutcome::Error(_) => "error",
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, RunOutcome::Solution | RunOutcome::Unsat)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub config: String,
    pub instance: String,
    pub outcome: RunOutcome,
    pub nodes: u64,
    pub backtracks: u64,
    pub ms: f64,
}

impl RunRecord {
    /// The record with its wall time zeroed, for determinism checks.
    pub fn without_time(&self) -> RunRecord {
        RunRecord { ms: 0.0, ..self.clone() }
    }
}

pub fn run_one(name: &str, inst: &NspInstance, config: &ModelConfig) -> RunRecord {
    let mut record = RunRecord {
        config: config.name(),
        instance: name.to_string(),
        outcome: RunOutcome::Limit,
        nodes: 0,
        backtracks: 0,
        ms: 0.0,
    };
    let mut built = match build_model(inst, config) {
        Ok(b) => b,
        Err(e) => {
            record.outcome = RunOutcome::Error(e.to_string());
            return record;
        }
    };
    match solve(&mut built.model, &built.order, config.limits) {
        Ok(stats) => {
            record.outcome = match stats.outcome {
                Outcome::Solution => RunOutcome::Solution,
                Outcome::Unsat => RunOutcome::Unsat,
                Outcome::LimitReached => RunOutcome::Limit,
            };
            record.nodes = stats.nodes;
            record.backtracks = stats.backtracks;
            record.ms = stats.wall_time.as_secs_f64() * 1000.0;
        }
        Err(e) => record.outcome = RunOutcome::Error(e.to_string()),
    }
    record
}

/// Runs every configuration on every instance. Jobs run in parallel; the
/// result order is config-major and does not depend on scheduling.
pub fn run_benchmark(instances: &[(String, NspInstance)], configs: &[ModelConfig]) -> Vec<RunRecord> {
    let jobs: Vec<(&ModelConfig, &(String, NspInstance))> =
        configs.iter().flat_map(|c| instances.iter().map(move |i| (c, i))).collect();
    jobs.par_iter()
        .map(|(config, (name, inst))| run_one(name, inst, config))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub config: String,
    pub runs: usize,
    pub solved: usize,
    /// Averages over solved runs; zero when nothing was solved.
    pub avg_ms: f64,
    pub avg_backtracks: f64,
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    for r in records {
        if !rows.iter().any(|s| s.config == r.config) {
            rows.push(SummaryRow {
                config: r.config.clone(),
                runs: 0,
                solved: 0,
                avg_ms: 0.0,
                avg_backtracks: 0.0,
            });
        }
    }
    for row in &mut rows {
        let mine: Vec<&RunRecord> = records.iter().filter(|r| r.config == row.config).collect();
        let solved: Vec<&&RunRecord> = mine.iter().filter(|r| r.outcome.is_solved()).collect();
        row.runs = mine.len();
        row.solved = solved.len();
        if !solved.is_empty() {
            let k = solved.len() as f64;
            row.avg_ms = solved.iter().map(|r| r.ms).sum::<f64>() / k;
            row.avg_backtracks = solved.iter().map(|r| r.backtracks as f64).sum::<f64>() / k;
        }
    }
    rows
}

pub fn write_records_csv<W: io::Write>(out: W, records: &[RunRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["config", "instance", "outcome", "nodes", "backtracks", "ms"])?;
    for r in records {
        w.write_record([
            r.config.clone(),
            r.instance.clone(),
            r.outcome.label().to_string(),
            r.nodes.to_string(),
            r.backtracks.to_string(),
            format!("{:.3}", r.ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: io::Write>(out: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["config", "runs", "solved", "avg_ms", "avg_backtracks"])?;
    for r in rows {
        w.write_record([
            r.config.clone(),
            r.runs.to_string(),
            r.solved.to_string(),
            format!("{:.3}", r.avg_ms),
            format!("{:.1}", r.avg_backtracks),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_summary(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|r| r.config.len()).max().unwrap_or(0).max("config".len());
    let mut s = String::new();
    writeln!(s, "{:<width$}  {:>6}  {:>10}  {:>14}", "config", "solved", "avg ms", "avg backtracks").unwrap();
    for r in rows {
        writeln!(
            s,
            "{:<width$}  {:>6}  {:>10.1}  {:>14.1}",
            r.config,
            format!("{}/{}", r.solved, r.runs),
            r.avg_ms,
            r.avg_backtracks
        )
        .unwrap();
    }
    s
}
