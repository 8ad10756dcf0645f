//! Timing and storage comparison of the engines over a set of contexts.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bits::WordWidth;
use crate::context::FormalContext;
use crate::engine::{Enumeration, IncludeBottom};
use crate::error::{FcaError, Result};
use crate::horizontal::{enumerate_horizontal, HorizontalEngineConfig, DEFAULT_QUEUE_BUDGET};
use crate::vertical::{enumerate_vertical, VerticalEngineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Horizontal,
    Vertical,
}

impl FromStr for EngineKind {
    type Err = FcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horizontal" => Ok(EngineKind::Horizontal),
            "vertical" => Ok(EngineKind::Vertical),
            other => Err(FcaError::InvalidArgument(format!("unknown engine {other:?}"))),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Horizontal => "horizontal",
            EngineKind::Vertical => "vertical",
        })
    }
}

/// Engine settings shared by every row of a bench run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub empty_skip: bool,
    pub include_bottom: IncludeBottom,
    pub budget_bytes: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings { empty_skip: true, include_bottom: IncludeBottom::Auto, budget_bytes: DEFAULT_QUEUE_BUDGET }
    }
}

/// Runs one engine once.
pub fn run_engine(ctx: &FormalContext, engine: EngineKind, width: WordWidth, settings: &RunSettings) -> Result<Enumeration> {
    match engine {
        EngineKind::Horizontal => enumerate_horizontal(
            ctx,
            &HorizontalEngineConfig {
                width,
                empty_skip: settings.empty_skip,
                local_queue_budget: settings.budget_bytes,
                include_bottom: settings.include_bottom,
            },
        ),
        EngineKind::Vertical => enumerate_vertical(
            ctx,
            &VerticalEngineConfig { include_bottom: settings.include_bottom, ..VerticalEngineConfig::with_width(width) },
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    pub objects: usize,
    pub attributes: usize,
    pub engine: EngineKind,
    pub width: u32,
    pub outcome: Outcome,
    pub concepts: Option<usize>,
    pub median_seconds: f64,
    pub min_seconds: f64,
    pub extent_storage_bytes: Option<u64>,
    pub peak_queue_bytes: Option<u64>,
    pub total_queue_bytes: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub struct BenchPlan<'a> {
    pub datasets: Vec<(String, &'a FormalContext)>,
    pub engines: Vec<EngineKind>,
    pub widths: Vec<WordWidth>,
    pub repeats: usize,
    pub settings: RunSettings,
}

fn median(sorted: &[Duration]) -> Duration {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        (sorted[k / 2 - 1] + sorted[k / 2]) / 2
    }
}

/// Runs every (dataset, engine, width) combination `repeats` times.
/// A horizontal run that exceeds the queue budget is recorded, not raised;
/// any other error aborts the bench.
pub fn run_bench(plan: &BenchPlan<'_>) -> Result<BenchReport> {
    if plan.repeats == 0 {
        return Err(FcaError::InvalidArgument("repeats must be at least 1".into()));
    }
    let mut report = BenchReport::default();
    for (name, ctx) in &plan.datasets {
        for &engine in &plan.engines {
            for &width in &plan.widths {
                report.rows.push(bench_one(name, ctx, engine, width, plan)?);
            }
        }
    }
    Ok(report)
}

fn bench_one(name: &str, ctx: &FormalContext, engine: EngineKind, width: WordWidth, plan: &BenchPlan<'_>) -> Result<BenchRow> {
    let mut times = Vec::with_capacity(plan.repeats);
    let mut last = None;
    let mut outcome = Outcome::Ok;
    for _ in 0..plan.repeats {
        let started = Instant::now();
        match run_engine(ctx, engine, width, &plan.settings) {
            Ok(run) => {
                times.push(run.stats.elapsed);
                last = Some(run);
            }
            Err(FcaError::BudgetExhausted { .. }) => {
                times.push(started.elapsed());
                outcome = Outcome::BudgetExhausted;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    times.sort();
    let stats = last.filter(|_| outcome == Outcome::Ok).map(|r| r.stats);
    Ok(BenchRow {
        dataset: name.to_string(),
        objects: ctx.object_count(),
        attributes: ctx.attribute_count(),
        engine,
        width: width.bits(),
        outcome,
        concepts: stats.as_ref().map(|s| s.concept_count),
        median_seconds: median(&times).as_secs_f64(),
        min_seconds: times[0].as_secs_f64(),
        extent_storage_bytes: stats.as_ref().map(|s| s.extent_storage_bytes),
        peak_queue_bytes: stats.as_ref().map(|s| s.peak_queue_bytes),
        total_queue_bytes: stats.as_ref().map(|s| s.total_queue_bytes),
    })
}

impl BenchReport {
    /// One JSON object per row.
    pub fn json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("row serializes") + "\n")
            .collect()
    }

    /// Datasets whose completed rows disagree on the concept count.
    pub fn count_mismatches(&self) -> Vec<String> {
        let mut bad: Vec<String> = Vec::new();
        for r in &self.rows {
            let Some(c) = r.concepts else { continue };
            let disagree = self
                .rows
                .iter()
                .filter(|o| o.dataset == r.dataset)
                .any(|o| o.concepts.is_some_and(|oc| oc != c));
            if disagree && !bad.contains(&r.dataset) {
                bad.push(r.dataset.clone());
            }
        }
        bad
    }

    pub fn row(&self, dataset: &str, engine: EngineKind, width: u32) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.engine == engine && r.width == width)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "{:<24} {:>13} {:<10} {:>5} {:>10} {:>10} {:>10} {:>14} {:>12}  outcome",
            "dataset", "size", "engine", "width", "concepts", "median s", "min s", "extent bytes", "peak queue"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<24} {:>13} {:<10} {:>5} {:>10} {:>10.4} {:>10.4} {:>14} {:>12}  {}",
                r.dataset,
                format!("{}x{}", r.objects, r.attributes),
                r.engine,
                r.width,
                r.concepts.map_or_else(|| "-".to_string(), |c| c.to_string()),
                r.median_seconds,
                r.min_seconds,
                opt(r.extent_storage_bytes),
                opt(r.peak_queue_bytes),
                match r.outcome {
                    Outcome::Ok => "ok",
                    Outcome::BudgetExhausted => "budget-exhausted",
                }
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::table1;

    fn plan(ctx: &FormalContext, budget: u64) -> BenchPlan<'_> {
        BenchPlan {
            datasets: vec![("t1".into(), ctx)],
            engines: vec![EngineKind::Horizontal, EngineKind::Vertical],
            widths: vec![WordWidth::W32, WordWidth::W64],
            repeats: 3,
            settings: RunSettings { budget_bytes: budget, ..RunSettings::default() },
        }
    }

    #[test]
    fn rows_per_combination() {
        let ctx = table1();
        let report = run_bench(&plan(&ctx, DEFAULT_QUEUE_BUDGET)).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows.iter().all(|r| r.concepts == Some(10) && r.outcome == Outcome::Ok));
        assert!(report.count_mismatches().is_empty());
        assert!(report.rows.iter().all(|r| r.min_seconds <= r.median_seconds));
        let v = report.row("t1", EngineKind::Vertical, 32).unwrap();
        assert_eq!(v.extent_storage_bytes, Some(9 * 8));
        assert_eq!(report.json_lines().lines().count(), 4);
        assert!(report.table().lines().count() == 5);
    }

    #[test]
    fn budget_exhaustion_is_an_outcome() {
        let ctx = table1();
        let report = run_bench(&plan(&ctx, 16)).unwrap();
        let h = report.row("t1", EngineKind::Horizontal, 64).unwrap();
        assert_eq!(h.outcome, Outcome::BudgetExhausted);
        assert_eq!(h.concepts, None);
        assert!(report.json_lines().contains("\"budget-exhausted\""));
        assert_eq!(report.row("t1", EngineKind::Vertical, 64).unwrap().concepts, Some(10));
    }

    #[test]
    fn zero_repeats_rejected() {
        let ctx = table1();
        let mut p = plan(&ctx, DEFAULT_QUEUE_BUDGET);
        p.repeats = 0;
        assert!(run_bench(&p).is_err());
    }

    #[test]
    fn median_even_and_odd() {
        let d = Duration::from_millis;
        assert_eq!(median(&[d(1), d(2), d(9)]), d(2));
        assert_eq!(median(&[d(1), d(3)]), d(2));
    }
}
