//! Requirement matrix for a small batch, and how the two aggregation modes
//! collapse each row.

use stratrec::model::example;
use stratrec::workforce::{
    aggregate_matrix, build_matrix, AggregationMode, LinearModel, ModelSet, ParamModels,
    RequirementSemantics,
};

fn main() -> stratrec::Result<()> {
    let catalog = example::catalog();
    let batch = example::requests(2);

    // Quality and cost rise with the workforce, latency falls.
    let coefficients = [
        ((0.30, 0.40), (0.40, 0.10), (-0.30, 0.60)),
        ((0.09, 0.85), (0.35, 0.05), (-0.40, 0.55)),
        ((0.20, 0.70), (0.50, 0.10), (-0.20, 0.40)),
        ((0.10, 0.85), (0.60, 0.10), (-0.25, 0.35)),
    ];
    let mut models = ModelSet::new();
    for (s, (q, c, l)) in catalog.iter().zip(coefficients) {
        models.insert(
            s.id(),
            ParamModels::new(
                LinearModel::new(q.0, q.1),
                LinearModel::new(c.0, c.1),
                LinearModel::new(l.0, l.1),
            ),
        );
    }

    let matrix = build_matrix(&batch, &catalog, &models, RequirementSemantics::MaxOfThree)?;
    print!("{:>8}", "");
    for s in matrix.strategies() {
        print!("{:>12}", format!("s{s}"));
    }
    println!();
    for (i, r) in matrix.requests().iter().enumerate() {
        print!("{:>8}", format!("d{r}"));
        for w in matrix.row(i) {
            print!(
                "{:>12}",
                w.value()
                    .map_or_else(|| "infeasible".to_string(), |v| format!("{v:.4}"))
            );
        }
        println!();
    }

    for mode in [AggregationMode::Sum, AggregationMode::Max] {
        let vector = aggregate_matrix(&matrix, &batch, mode)?;
        println!("\n{} of the {} cheapest:", mode.name(), batch[0].k());
        for e in &vector.entries {
            match e.workforce.value() {
                Some(w) => println!(
                    "  d{} needs {w:.4} using [{}]",
                    e.request,
                    ids(&e.strategies)
                ),
                None => println!("  d{} cannot be served", e.request),
            }
        }
    }
    Ok(())
}

fn ids<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
