//! Top-k expected nearest neighbors of a three-location uncertain query.

use l1_enn::{EnnIndex, Point, UncertainQuery};

fn main() -> l1_enn::Result<()> {
    let points = vec![
        Point::new(1, 0.5, 0.2),
        Point::new(2, 1.2, 1.1),
        Point::new(3, 3.4, 0.9),
        Point::new(4, -1.0, 2.5),
        Point::new(5, 2.1, 2.2),
        Point::new(6, 0.9, -1.3),
    ];
    let query = UncertainQuery::from_triples(&[(0.0, 0.0, 0.25), (1.0, 2.0, 0.5), (3.0, 1.0, 0.25)])?;

    let mut index = EnnIndex::build(points)?;
    let result = index.query_topk(&query, 3)?;
    for (rank, n) in result.items.iter().enumerate() {
        println!(
            "{}. point {} at ({}, {}): Ed = {:.4}",
            rank + 1,
            n.id,
            n.x,
            n.y,
            n.expected_distance
        );
    }
    println!(
        "cells visited: {}, heap pops: {}",
        result.stats.cells_visited, result.stats.heap_pops
    );
    Ok(())
}
