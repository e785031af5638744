use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::stats::{mean, median, standard_error};
use super::{io, ExperimentKind, ExperimentSpec, SweepParam};
use crate::adpar::{adpar_brute, adpar_exact, baseline_mbb, baseline_one_dim};
use crate::batchstrat::{brute_force_plan, plan_greedy_baseline, BatchStrat, Objective};
use crate::error::{Error, Result};
use crate::synthgen::{gen_instance, trial_seed, GenConfig, Instance};

/// One sweep point. `samples[i]` holds metric `i` per trial; `NaN` marks a
/// trial where the metric is undefined (a failed baseline, a skipped oracle).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub value: f64,
    pub trials: usize,
    pub seed: u64,
    pub samples: Vec<Vec<f64>>,
    pub warning: String,
}

impl Row {
    /// Mean and standard error of metric `i` over the trials where it is
    /// defined.
    pub fn summary(&self, i: usize) -> Option<(f64, f64)> {
        let xs: Vec<f64> = self.samples[i]
            .iter()
            .copied()
            .filter(|x| !x.is_nan())
            .collect();
        (!xs.is_empty()).then(|| (mean(&xs), standard_error(&xs)))
    }
}

/// Median wall-clock seconds per solver at one sweep point, averaged over
/// trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub value: f64,
    pub seconds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: ExperimentKind,
    pub sweep: SweepParam,
    pub metrics: Vec<&'static str>,
    pub rows: Vec<Row>,
    pub timing_columns: Vec<&'static str>,
    pub timings: Vec<TimingRow>,
}

impl Table {
    pub fn metric_index(&self, name: &str) -> Option<usize> {
        self.metrics.iter().position(|m| *m == name)
    }

    /// `series[t][i]`: metric value of trial `t` at sweep point `i`.
    pub fn series(&self, metric: &str) -> Option<Vec<Vec<f64>>> {
        let m = self.metric_index(metric)?;
        let trials = self.rows.iter().map(|r| r.trials).min()?;
        Some(
            (0..trials)
                .map(|t| self.rows.iter().map(|r| r.samples[m][t]).collect())
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![
            "sweep".to_string(),
            "value".into(),
            "trials".into(),
            "seed".into(),
        ];
        for m in &self.metrics {
            header.push(format!("{m}_mean"));
            header.push(format!("{m}_se"));
        }
        header.push("warning".into());
        out.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![
                self.sweep.name().to_string(),
                row.value.to_string(),
                row.trials.to_string(),
                row.seed.to_string(),
            ];
            for i in 0..self.metrics.len() {
                match row.summary(i) {
                    Some((m, se)) => {
                        rec.push(m.to_string());
                        rec.push(se.to_string());
                    }
                    None => rec.extend([String::new(), String::new()]),
                }
            }
            rec.push(row.warning.clone());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_timing_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["sweep".to_string(), "value".into()];
        header.extend(self.timing_columns.iter().map(|c| format!("{c}_seconds")));
        out.write_record(&header)?;
        for row in &self.timings {
            let mut rec = vec![self.sweep.name().to_string(), row.value.to_string()];
            rec.extend(row.seconds.iter().map(f64::to_string));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes the table to `path` and, for timing experiments, the wall-clock
    /// figures to `<stem>.timing.csv` next to it. Timings live apart so the
    /// main table stays identical across reruns.
    pub fn write_files(&self, path: &Path) -> Result<Option<PathBuf>> {
        let mut f = io::create(path)?;
        self.write_csv(&mut f)?;
        f.flush()?;
        if self.timings.is_empty() {
            return Ok(None);
        }
        let stem = path
            .file_stem()
            .map_or_else(|| "experiment".into(), |s| s.to_string_lossy().into_owned());
        let timing = path.with_file_name(format!("{stem}.timing.csv"));
        let mut f = io::create(&timing)?;
        self.write_timing_csv(&mut f)?;
        f.flush()?;
        Ok(Some(timing))
    }
}

fn metrics_of(kind: ExperimentKind) -> (Vec<&'static str>, Vec<&'static str>) {
    match kind {
        ExperimentKind::SatisfiedPct => (vec!["satisfied_pct"], vec![]),
        ExperimentKind::Throughput => (vec!["batchstrat", "baseline_g", "brute_force"], vec![]),
        ExperimentKind::Payoff => (
            vec![
                "batchstrat",
                "baseline_g",
                "brute_force",
                "batchstrat_ratio",
                "baseline_g_ratio",
            ],
            vec![],
        ),
        ExperimentKind::AdparQuality => (
            vec![
                "exact",
                "brute_force",
                "one_dim",
                "one_dim_failure_pct",
                "mbb",
            ],
            vec![],
        ),
        ExperimentKind::ScalingBatch => (
            vec!["batchstrat", "brute_force"],
            vec!["batchstrat", "brute_force"],
        ),
        ExperimentKind::ScalingAdpar => (vec!["exact"], vec!["exact_per_request"]),
    }
}

struct TrialOutput {
    metrics: Vec<f64>,
    timings: Vec<f64>,
    warning: Option<String>,
}

/// Runs every sweep point of `spec`. Trial `t` at point `i` is generated
/// from a seed derived from (`spec.base.seed`, `i`, `t`).
pub fn run(spec: &ExperimentSpec) -> Result<Table> {
    spec.validate()?;
    let (metrics, timing_columns) = metrics_of(spec.kind);
    let mut rows = Vec::with_capacity(spec.values.len());
    let mut timings = Vec::new();
    for (i, &value) in spec.values.iter().enumerate() {
        let cfg = spec.sweep.apply(&spec.base, value)?;
        let mut samples = vec![Vec::with_capacity(cfg.trials); metrics.len()];
        let mut times = vec![Vec::with_capacity(cfg.trials); timing_columns.len()];
        let mut warning = None;
        for t in 0..cfg.trials {
            let trial_cfg = GenConfig {
                seed: trial_seed(spec.base.seed, i, t),
                ..cfg.clone()
            };
            let out = run_trial(spec, &trial_cfg)?;
            for (m, v) in out.metrics.into_iter().enumerate() {
                samples[m].push(v);
            }
            for (c, v) in out.timings.into_iter().enumerate() {
                times[c].push(v);
            }
            warning = warning.or(out.warning);
        }
        if !timing_columns.is_empty() {
            timings.push(TimingRow {
                value,
                seconds: times.iter().map(|ts| mean(ts)).collect(),
            });
        }
        rows.push(Row {
            value,
            trials: cfg.trials,
            seed: spec.base.seed,
            samples,
            warning: warning.unwrap_or_default(),
        });
    }
    Ok(Table {
        kind: spec.kind,
        sweep: spec.sweep,
        metrics,
        rows,
        timing_columns,
        timings,
    })
}

fn time_median(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    f()?;
    let mut ts = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        ts.push(start.elapsed().as_secs_f64());
    }
    Ok(median(&ts))
}

fn brute_skip(spec: &ExperimentSpec, m: usize) -> Option<String> {
    (m > spec.brute_cap).then(|| {
        format!(
            "brute force skipped: batch of {m} exceeds cap {}",
            spec.brute_cap
        )
    })
}

fn run_trial(spec: &ExperimentSpec, cfg: &GenConfig) -> Result<TrialOutput> {
    let inst = gen_instance(cfg)?;
    let Instance {
        catalog,
        models,
        batch,
    } = &inst;
    let w = cfg.availability;
    let planner = |objective| BatchStrat::new(spec.semantics, spec.mode, objective);
    let m = batch.len() as f64;
    let mut warning = None;
    let mut timings = Vec::new();
    let metrics = match spec.kind {
        ExperimentKind::SatisfiedPct => {
            let out = planner(Objective::Throughput).run(batch, catalog, models, w)?;
            vec![100.0 * out.plan.len() as f64 / m]
        }
        ExperimentKind::Throughput | ExperimentKind::Payoff => {
            let objective = if spec.kind == ExperimentKind::Throughput {
                Objective::Throughput
            } else {
                Objective::Payoff
            };
            let out = planner(objective).run(batch, catalog, models, w)?;
            let baseline = plan_greedy_baseline(batch, &out.vector, w, objective)?.objective;
            warning = brute_skip(spec, batch.len());
            let brute = match warning {
                None => {
                    brute_force_plan(batch, &out.vector, w, objective, spec.brute_cap)?.objective
                }
                Some(_) => f64::NAN,
            };
            let mut v = vec![out.plan.objective, baseline, brute];
            if objective == Objective::Payoff {
                // An optimum of zero forces every plan to zero; count it as exact.
                let ratio = |x: f64| {
                    if brute > 0.0 {
                        x / brute
                    } else if brute == 0.0 {
                        1.0
                    } else {
                        f64::NAN
                    }
                };
                v.push(ratio(out.plan.objective));
                v.push(ratio(baseline));
            }
            v
        }
        ExperimentKind::AdparQuality => {
            let (mut exact, mut brute, mut one, mut mbb) =
                (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            let mut failures = 0usize;
            for d in batch {
                exact.push(adpar_exact(catalog, d, cfg.k)?.distance);
                match adpar_brute(catalog, d, cfg.k, spec.subset_cap) {
                    Ok(r) => brute.push(r.distance),
                    Err(Error::SizeCap { needed, cap, .. }) => {
                        warning =
                            Some(format!("oracle skipped: {needed} subsets exceed cap {cap}"));
                    }
                    Err(e) => return Err(e),
                }
                match baseline_one_dim(catalog, d, cfg.k)? {
                    Some(r) => one.push(r.distance),
                    None => failures += 1,
                }
                mbb.push(baseline_mbb(catalog, d, cfg.k, cfg.seed ^ u64::from(d.id().0))?.distance);
            }
            let avg = |xs: &[f64]| if xs.is_empty() { f64::NAN } else { mean(xs) };
            vec![
                avg(&exact),
                avg(&brute),
                avg(&one),
                100.0 * failures as f64 / m,
                avg(&mbb),
            ]
        }
        ExperimentKind::ScalingBatch => {
            let p = planner(Objective::Throughput);
            let out = p.run(batch, catalog, models, w)?;
            let greedy_t = time_median(spec.timing_reps, || {
                p.run(batch, catalog, models, w).map(drop)
            })?;
            warning = brute_skip(spec, batch.len());
            let (brute, brute_t) = match warning {
                None => {
                    let run_brute = || -> Result<f64> {
                        let o = p.run(batch, catalog, models, w)?;
                        Ok(brute_force_plan(
                            batch,
                            &o.vector,
                            w,
                            Objective::Throughput,
                            spec.brute_cap,
                        )?
                        .objective)
                    };
                    (
                        run_brute()?,
                        time_median(spec.timing_reps, || run_brute().map(drop))?,
                    )
                }
                Some(_) => (f64::NAN, f64::NAN),
            };
            timings = vec![greedy_t, brute_t];
            vec![out.plan.objective, brute]
        }
        ExperimentKind::ScalingAdpar => {
            let mut total = 0.0;
            for d in batch {
                total += adpar_exact(catalog, d, cfg.k)?.distance;
            }
            let t = time_median(spec.timing_reps, || {
                for d in batch {
                    adpar_exact(catalog, d, cfg.k)?;
                }
                Ok(())
            })?;
            timings = vec![t / m];
            vec![total / m]
        }
    };
    Ok(TrialOutput {
        metrics,
        timings,
        warning,
    })
}
