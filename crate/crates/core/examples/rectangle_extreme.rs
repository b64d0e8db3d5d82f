//! Minimizing a linear function over the points inside a rectangle.

use l1_enn::hull::rect;
use l1_enn::{HullIndex, Point, Span};

fn main() -> l1_enn::Result<()> {
    let points: Vec<Point> = (0..200)
        .map(|i| {
            let t = i as f64 * 0.37;
            Point::new(i, t.cos() * 50.0 + i as f64 * 1e-3, t.sin() * 50.0 - i as f64 * 1e-3)
        })
        .collect();
    let index = HullIndex::build(points)?;
    println!(
        "{} stored hull vertices, leaf size {}",
        index.stored_vertices(),
        index.leaf_size()
    );

    let window = rect(Span::closed(-20.0, 40.0), Span::closed(-60.0, 10.0));
    for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (-2.0, 0.5)] {
        match index.min_linear(&window, a, b) {
            Some((p, v)) => println!("min {a}x + {b}y = {v:.3} at point {}", p.id),
            None => println!("window is empty"),
        }
    }
    Ok(())
}
