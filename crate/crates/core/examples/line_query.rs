//! The one-dimensional case: points and query locations on a line.

use l1_enn::{build_1d, query_1d, PointId};

fn main() -> l1_enn::Result<()> {
    let points: Vec<(f64, PointId)> = [1.0, 3.0, 5.0, 7.0]
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, PointId(i as u64)))
        .collect();
    let index = build_1d(&points)?;

    let single = query_1d(&index, &[(3.9, 1.0)], 2, false)?;
    println!("Q = {{3.9}}: {:?}", single.items);

    // Locations already sorted by coordinate can skip the internal sort.
    let spread = [(0.0, 0.2), (4.0, 0.5), (10.0, 0.3)];
    let r = query_1d(&index, &spread, 4, true)?;
    for (id, d) in &r.items {
        println!("point {id}: Ed = {d}");
    }
    Ok(())
}
