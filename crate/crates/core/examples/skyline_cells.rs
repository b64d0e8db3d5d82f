//! Skyline cell sets of one quadrant, maintained while skyline points are removed.

use l1_enn::{build_profile, compute_c1, DragIndex, Point, QuadrantFrame, UncertainQuery};

fn main() -> l1_enn::Result<()> {
    let points: Vec<Point> = (0..12)
        .map(|i| Point::new(i, 0.5 + i as f64, 11.7 - i as f64 * 0.97))
        .collect();
    let query = UncertainQuery::from_triples(&[(0.0, 0.0, 1.0), (4.0, 3.0, 1.0), (8.0, 6.0, 1.0)])?;
    let profile = build_profile(&query);
    let frame = QuadrantFrame::new(profile.global_minimum(), 1.0, 1.0);

    let mut drag = DragIndex::build(points)?;
    let mut cells = compute_c1(&drag, &profile, frame)?;
    print_cells("initial", &cells);

    for _ in 0..3 {
        let first = cells.cursors().next().map(|c| c.skyline_left.point);
        let Some(p) = first else { break };
        drag.delete(p.id)?;
        let step = cells.advance(&drag, p.id)?;
        println!(
            "removed point {}: {} fresh cells, removed cell {:?}",
            p.id,
            step.fresh.len(),
            step.removed_cell
        );
        print_cells("now", &cells);
    }
    Ok(())
}

fn print_cells(label: &str, cells: &l1_enn::SkylineCellSet) {
    println!("{label}: {} cells", cells.len());
    for c in cells.cursors() {
        println!(
            "  col {} row {}: left {} via {:?}, bottom {} via {:?}",
            c.address.col,
            c.address.row,
            c.skyline_left.point.id,
            c.skyline_left.segment.kind,
            c.skyline_bottom.point.id,
            c.skyline_bottom.segment.kind
        );
    }
}
