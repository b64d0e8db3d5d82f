//! Answering a batch of queries on several threads, one index replica per thread.

use l1_enn::instance::{generate, random_query};
use l1_enn::{EnnIndex, PointId, Result};

fn main() -> Result<()> {
    let index = EnnIndex::build(generate(100_000, 1, 1, 5, 2)?.points)?;
    let queries: Vec<_> = (0..64)
        .map(|i| random_query(16, 10, i, 2).to_query())
        .collect::<Result<_>>()?;

    let per_worker: Vec<Result<Vec<PointId>>> = std::thread::scope(|s| {
        let workers: Vec<_> = queries
            .chunks(16)
            .map(|batch| {
                let mut replica = index.clone();
                s.spawn(move || {
                    batch
                        .iter()
                        .map(|q| replica.query_topk(q, 10).map(|r| r.items[0].id))
                        .collect()
                })
            })
            .collect();
        workers
            .into_iter()
            .map(|w| w.join().expect("worker panicked"))
            .collect()
    });

    for (i, best) in per_worker.into_iter().enumerate() {
        println!("worker {i}: best ids {:?}", best?);
    }
    Ok(())
}
