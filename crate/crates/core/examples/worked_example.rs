//! The four-strategy translation catalog: who satisfies what, and the
//! cheapest relaxation for a request nobody can serve.

use stratrec::adpar::adpar_exact;
use stratrec::model::{example, expected_availability, feasible_strategies};

fn main() -> stratrec::Result<()> {
    let catalog = example::catalog();
    println!("catalog:");
    for s in &catalog {
        println!(
            "  {} {:<12} quality {:.2} cost {:.2} latency {:.2}",
            s.id(),
            s.label().unwrap_or(""),
            s.quality(),
            s.cost(),
            s.latency()
        );
    }
    println!(
        "expected availability: {}",
        expected_availability(&example::availability())
    );

    for d in example::requests(3) {
        let feasible = feasible_strategies(&catalog, &d);
        println!(
            "\nrequest {} (quality >= {}, cost <= {}, latency <= {}), k = {}",
            d.id(),
            d.quality(),
            d.cost(),
            d.latency(),
            d.k()
        );
        println!("  satisfied by [{}]", ids(&feasible));
        if feasible.len() < d.k() {
            let r = adpar_exact(&catalog, &d, d.k())?;
            let a = &r.alternative;
            println!(
                "  relax to ({}, {}, {}) at distance {:.4}, strategies [{}]",
                a.quality(),
                a.cost(),
                a.latency(),
                r.distance,
                ids(&r.chosen)
            );
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
