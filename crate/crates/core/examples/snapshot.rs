//! Saving an index and loading it back without re-sorting.

use l1_enn::instance::{generate, random_query};
use l1_enn::snapshot::{load_snapshot, save_snapshot};
use l1_enn::EnnIndex;
use std::time::Instant;

fn main() -> l1_enn::Result<()> {
    let points = generate(50_000, 1, 1, 3, 2)?.points;
    let start = Instant::now();
    let mut built = EnnIndex::build(points)?;
    println!("built in {:?}", start.elapsed());

    let path = std::env::temp_dir().join("l1_enn_example.enns");
    save_snapshot(&built, &path)?;
    let start = Instant::now();
    let mut loaded = load_snapshot(&path)?;
    println!(
        "loaded {} bytes in {:?}",
        std::fs::metadata(&path)?.len(),
        start.elapsed()
    );

    let q = random_query(8, 10, 1, 2).to_query()?;
    assert_eq!(built.query_topk(&q, 10)?.items, loaded.query_topk(&q, 10)?.items);
    println!("answers agree");
    std::fs::remove_file(path)?;
    Ok(())
}
