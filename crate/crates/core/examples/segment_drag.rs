//! Segment-dragging queries with deletions and reinsertions.

use l1_enn::{DragDirection, DragIndex, DragQuery, Point, Span};

fn main() -> l1_enn::Result<()> {
    let points = vec![
        Point::new(0, 1.0, 5.0),
        Point::new(1, 2.0, 3.0),
        Point::new(2, 4.0, 4.0),
        Point::new(3, 6.0, 1.0),
    ];
    let mut index = DragIndex::build(points)?;

    // Horizontal segment y = 0, x in [0, 5], moving up.
    let up = DragQuery::horizontal(0.0, Span::closed(0.0, 5.0), DragDirection::Positive);
    println!("dragging up hits {:?}", index.drag(&up).map(|p| p.id));

    index.delete(l1_enn::PointId(1))?;
    println!("after deleting 1: {:?}", index.drag(&up).map(|p| p.id));

    // Vertical segment x = 7, y in [0, 10], moving left.
    let left = DragQuery::vertical(7.0, Span::closed(0.0, 10.0), DragDirection::Negative);
    println!("dragging left hits {:?}", index.drag(&left).map(|p| p.id));

    index.insert(l1_enn::PointId(1))?;
    println!("alive again: {} of {}", index.alive_count(), index.len());
    Ok(())
}
