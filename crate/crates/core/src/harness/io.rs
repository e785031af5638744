//! Text formats.
//!
//! All files are comma-separated with a header row; blank lines and lines
//! starting with `#` are ignored. Numbers are written in shortest
//! round-trip form, so writing then reading gives back the same values.
//!
//! | file       | columns                                              |
//! |------------|------------------------------------------------------|
//! | strategies | `id,quality,cost,latency[,label]`                    |
//! | requests   | `id,quality,cost,latency,k[,payoff]`                 |
//! | models     | `strategy,parameter,alpha,beta[,request]`            |
//! | plan       | `request,selected,requirement,strategies`            |
//! | adpar      | `request,quality,cost,latency,alt_quality,alt_cost,alt_latency,distance,strategies` |
//!
//! In the models file `parameter` is `quality`, `cost` or `latency`, and a
//! non-empty `request` column makes the row an override for that request
//! only. Strategy lists are space-separated ids. A plan file ends with a
//! `# objective=...` comment line carrying the totals.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::adpar::AdparResult;
use crate::batchstrat::{BatchOutcome, Objective};
use crate::error::{Error, Result};
use crate::model::{Axis, DeploymentRequest, RequestId, Strategy, StrategyId};
use crate::workforce::{LinearModel, ModelSet, ParamModels};

fn records<R: Read>(reader: R, source: &str) -> Result<Vec<(String, StringRecord)>> {
    let mut rdr = ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .has_headers(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(format!("{source}:{line}"), e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((format!("{source}:{line}"), rec));
    }
    Ok(out)
}

fn field<T: FromStr>(rec: &StringRecord, at: &str, index: usize, name: &str) -> Result<T> {
    let raw = rec
        .get(index)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::parse(at, format!("missing {name}")))?;
    raw.parse()
        .map_err(|_| Error::parse(at, format!("{name}: cannot parse {raw:?}")))
}

fn optional(rec: &StringRecord, index: usize) -> Option<&str> {
    rec.get(index).filter(|s| !s.is_empty())
}

fn relocate(at: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Validation { what, reason } => Error::parse(at, format!("invalid {what}: {reason}")),
        other => other,
    }
}

pub fn read_strategies<R: Read>(reader: R, source: &str) -> Result<Vec<Strategy>> {
    let mut catalog = Vec::new();
    for (at, rec) in records(reader, source)? {
        let s = Strategy::new(
            field(&rec, &at, 0, "id")?,
            field(&rec, &at, 1, "quality")?,
            field(&rec, &at, 2, "cost")?,
            field(&rec, &at, 3, "latency")?,
        )
        .map_err(relocate(&at))?;
        catalog.push(match optional(&rec, 4) {
            Some(label) => s.with_label(label),
            None => s,
        });
    }
    crate::model::validate_catalog(&catalog)?;
    Ok(catalog)
}

pub fn read_requests<R: Read>(reader: R, source: &str) -> Result<Vec<DeploymentRequest>> {
    let mut batch = Vec::new();
    for (at, rec) in records(reader, source)? {
        let (id, q, c, l, k) = (
            field(&rec, &at, 0, "id")?,
            field(&rec, &at, 1, "quality")?,
            field(&rec, &at, 2, "cost")?,
            field(&rec, &at, 3, "latency")?,
            field(&rec, &at, 4, "k")?,
        );
        let d = match optional(&rec, 5) {
            Some(_) => {
                DeploymentRequest::with_payoff(id, q, c, l, k, field(&rec, &at, 5, "payoff")?)
            }
            None => DeploymentRequest::new(id, q, c, l, k),
        };
        batch.push(d.map_err(relocate(&at))?);
    }
    crate::model::validate_batch(&batch)?;
    Ok(batch)
}

/// Reads a models file. Every strategy needs all three parameters, either
/// as base rows or as a complete override.
pub fn read_models<R: Read>(reader: R, source: &str) -> Result<ModelSet> {
    use std::collections::BTreeMap;
    type Partial = [Option<LinearModel>; 3];
    let mut base: BTreeMap<u32, (String, Partial)> = BTreeMap::new();
    let mut overrides: BTreeMap<(u32, u32), (String, Partial)> = BTreeMap::new();
    for (at, rec) in records(reader, source)? {
        let strategy: u32 = field(&rec, &at, 0, "strategy")?;
        let raw_axis: String = field(&rec, &at, 1, "parameter")?;
        let axis = Axis::parse(&raw_axis)
            .ok_or_else(|| Error::parse(&at, format!("unknown parameter {raw_axis:?}")))?;
        let alpha: f64 = field(&rec, &at, 2, "alpha")?;
        let beta: f64 = field(&rec, &at, 3, "beta")?;
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::parse(&at, "alpha and beta must be finite"));
        }
        let slot = match optional(&rec, 4) {
            Some(_) => {
                let request: u32 = field(&rec, &at, 4, "request")?;
                &mut overrides
                    .entry((request, strategy))
                    .or_insert_with(|| (at.clone(), [None; 3]))
                    .1
            }
            None => {
                &mut base
                    .entry(strategy)
                    .or_insert_with(|| (at.clone(), [None; 3]))
                    .1
            }
        };
        if slot[axis.index()]
            .replace(LinearModel::new(alpha, beta))
            .is_some()
        {
            return Err(Error::parse(
                &at,
                format!("duplicate {} model for strategy {strategy}", axis.name()),
            ));
        }
    }
    let complete = |at: &str, p: Partial| -> Result<ParamModels> {
        match p {
            [Some(q), Some(c), Some(l)] => Ok(ParamModels::new(q, c, l)),
            _ => Err(Error::parse(
                at,
                "strategy is missing at least one of quality, cost, latency",
            )),
        }
    };
    let mut set = ModelSet::new();
    for (id, (at, p)) in base {
        set.insert(StrategyId(id), complete(&at, p)?);
    }
    for ((request, strategy), (at, p)) in overrides {
        set.insert_override(RequestId(request), StrategyId(strategy), complete(&at, p)?);
    }
    Ok(set)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_strategies(path: &Path) -> Result<Vec<Strategy>> {
    read_strategies(open(path)?, &path.display().to_string())
}

pub fn load_requests(path: &Path) -> Result<Vec<DeploymentRequest>> {
    read_requests(open(path)?, &path.display().to_string())
}

pub fn load_models(path: &Path) -> Result<ModelSet> {
    read_models(open(path)?, &path.display().to_string())
}

fn ids<T: std::fmt::Display>(ids: &[T]) -> String {
    ids.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().from_writer(w)
}

pub fn write_strategies<W: Write>(w: W, catalog: &[Strategy]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["id", "quality", "cost", "latency", "label"])?;
    for s in catalog {
        out.write_record([
            s.id().to_string(),
            s.quality().to_string(),
            s.cost().to_string(),
            s.latency().to_string(),
            s.label().unwrap_or("").to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_requests<W: Write>(w: W, batch: &[DeploymentRequest]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["id", "quality", "cost", "latency", "k", "payoff"])?;
    for d in batch {
        out.write_record([
            d.id().to_string(),
            d.quality().to_string(),
            d.cost().to_string(),
            d.latency().to_string(),
            d.k().to_string(),
            d.payoff().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes base models by strategy id, then overrides by (request, strategy).
pub fn write_models<W: Write>(w: W, models: &ModelSet) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["strategy", "parameter", "alpha", "beta", "request"])?;
    let mut base: Vec<_> = models.strategy_models().collect();
    base.sort_by_key(|(id, _)| *id);
    let mut over: Vec<_> = models.overrides().collect();
    over.sort_by_key(|(r, s, _)| (*r, *s));
    let rows = base
        .into_iter()
        .map(|(s, m)| (s, m, String::new()))
        .chain(over.into_iter().map(|(r, s, m)| (s, m, r.to_string())));
    for (s, m, request) in rows {
        for axis in Axis::ALL {
            let lm = m.get(axis);
            out.write_record([
                s.to_string(),
                axis.name().to_string(),
                lm.alpha.to_string(),
                lm.beta.to_string(),
                request.clone(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row per request in batch order, then the totals as a comment line.
pub fn write_plan<W: Write>(
    mut w: W,
    batch: &[DeploymentRequest],
    outcome: &BatchOutcome,
    objective: Objective,
) -> Result<()> {
    {
        let mut out = writer(&mut w);
        out.write_record(["request", "selected", "requirement", "strategies"])?;
        for (d, entry) in batch.iter().zip(&outcome.vector.entries) {
            let selected = outcome.plan.selected.contains(&d.id());
            let requirement = match entry.workforce.value() {
                Some(v) => v.to_string(),
                None => "infeasible".to_string(),
            };
            out.write_record([
                d.id().to_string(),
                u8::from(selected).to_string(),
                requirement,
                ids(&entry.strategies),
            ])?;
        }
        out.flush()?;
    }
    let plan = &outcome.plan;
    writeln!(
        w,
        "# objective={} value={} workforce_used={} selected={} unsatisfied={}",
        objective.name(),
        plan.objective,
        plan.workforce_used,
        ids(&plan.selected),
        ids(&outcome.unsatisfied)
    )?;
    Ok(())
}

pub fn write_adpar<W: Write>(w: W, rows: &[(DeploymentRequest, AdparResult)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "request",
        "quality",
        "cost",
        "latency",
        "alt_quality",
        "alt_cost",
        "alt_latency",
        "distance",
        "strategies",
    ])?;
    for (d, r) in rows {
        let a = &r.alternative;
        out.write_record([
            d.id().to_string(),
            d.quality().to_string(),
            d.cost().to_string(),
            d.latency().to_string(),
            a.quality().to_string(),
            a.cost().to_string(),
            a.latency().to_string(),
            r.distance.to_string(),
            ids(&r.chosen),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Creates `path` (and its parent directory) for buffered writing.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example;

    #[test]
    fn strategies_round_trip() {
        let catalog = example::catalog();
        let mut buf = Vec::new();
        write_strategies(&mut buf, &catalog).unwrap();
        let back = read_strategies(buf.as_slice(), "mem").unwrap();
        assert_eq!(back, catalog);
    }

    #[test]
    fn requests_round_trip_with_payoff() {
        let mut batch = example::requests(3);
        batch.push(DeploymentRequest::with_payoff(9, 0.1, 0.2, 0.3, 2, 7.5).unwrap());
        let mut buf = Vec::new();
        write_requests(&mut buf, &batch).unwrap();
        assert_eq!(read_requests(buf.as_slice(), "mem").unwrap(), batch);
    }

    #[test]
    fn comments_and_optional_columns() {
        let text = "id,quality,cost,latency,k,payoff\n# first batch\n1, 0.4, 0.17, 0.28, 3\n\n2,0.8,0.2,0.28,3,5\n";
        let batch = read_requests(text.as_bytes(), "mem").unwrap();
        assert_eq!(batch.len(), 2);
        assert_eq!(batch[0].payoff(), 0.17);
        assert_eq!(batch[1].payoff(), 5.0);
    }

    #[test]
    fn errors_name_the_line() {
        let text = "id,quality,cost,latency\n1,0.5,0.5,0.5\n2,1.5,0.5,0.5\n";
        match read_strategies(text.as_bytes(), "cat.csv") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "cat.csv:3"),
            other => panic!("unexpected {other:?}"),
        }
        let text = "id,quality,cost,latency\n1,0.5,abc,0.5\n";
        assert!(matches!(
            read_strategies(text.as_bytes(), "x"),
            Err(Error::Parse { .. })
        ));
        let text = "id,quality,cost,latency\n1,0.5,0.5,0.5\n1,0.5,0.5,0.5\n";
        assert!(matches!(
            read_strategies(text.as_bytes(), "x"),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn models_round_trip_and_completeness() {
        let mut set = ModelSet::new();
        let m = ParamModels::new(
            LinearModel::new(0.33, 0.5),
            LinearModel::new(0.5, 0.1),
            LinearModel::new(-0.2, 0.6),
        );
        set.insert(StrategyId(2), m);
        set.insert(StrategyId(1), m);
        set.insert_override(
            RequestId(4),
            StrategyId(1),
            ParamModels::constant(&example::catalog()[0]),
        );
        let mut buf = Vec::new();
        write_models(&mut buf, &set).unwrap();
        let back = read_models(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.get(RequestId(1), StrategyId(2)), Some(&m));
        assert_eq!(
            back.get(RequestId(4), StrategyId(1)),
            set.get(RequestId(4), StrategyId(1))
        );
        let mut again = Vec::new();
        write_models(&mut again, &back).unwrap();
        assert_eq!(buf, again);

        let partial = "strategy,parameter,alpha,beta\n1,quality,0.5,0.5\n1,cost,0.5,0.5\n";
        assert!(matches!(
            read_models(partial.as_bytes(), "m"),
            Err(Error::Parse { .. })
        ));
        let dup = "strategy,parameter,alpha,beta\n1,quality,0.5,0.5\n1,quality,0.5,0.5\n";
        assert!(matches!(
            read_models(dup.as_bytes(), "m"),
            Err(Error::Parse { .. })
        ));
    }
}
