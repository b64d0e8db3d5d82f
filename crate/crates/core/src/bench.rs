//! Timing sweeps over generated instances.

use crate::engine::EnnIndex;
use crate::error::Result;
use crate::instance::{generate, random_query};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub m: Vec<usize>,
    pub k: Vec<usize>,
    pub queries: usize,
    pub seed: u64,
    /// Queries of one configuration are split over this many workers, each with its own index replica.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (10..=17).map(|e| 1 << e).collect(),
            m: vec![16],
            k: vec![16],
            queries: 20,
            seed: 1,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub build_ms: f64,
    pub query_us_mean: f64,
    pub cells_visited_mean: f64,
}

pub const BENCH_HEADER: &str = "n,m,k,build_ms,query_us_mean,cells_visited_mean";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{:.2}",
            self.n, self.m, self.k, self.build_ms, self.query_us_mean, self.cells_visited_mean
        )
    }
}

/// Builds once per size and runs `queries` random queries for every `(m, k)` pair.
/// `on_row` sees each row as soon as it is measured.
pub fn run_bench(cfg: &BenchConfig, mut on_row: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let points = generate(n, 1, 1, cfg.seed ^ n as u64, 2)?.points;
        let start = Instant::now();
        let index = EnnIndex::build(points)?;
        let build_ms = start.elapsed().as_secs_f64() * 1e3;
        for &m in &cfg.m {
            for &k in &cfg.k {
                let (query_us_mean, cells_visited_mean) = time_queries(&index, m, k, cfg)?;
                let row = BenchRow {
                    n,
                    m,
                    k,
                    build_ms,
                    query_us_mean,
                    cells_visited_mean,
                };
                on_row(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Mean wall time per query in microseconds and mean cells visited.
pub fn time_queries(index: &EnnIndex, m: usize, k: usize, cfg: &BenchConfig) -> Result<(f64, f64)> {
    let queries: Vec<_> = (0..cfg.queries.max(1))
        .map(|i| random_query(m, k, cfg.seed.wrapping_mul(31).wrapping_add(i as u64), 2).to_query())
        .collect::<Result<_>>()?;
    let threads = cfg.threads.clamp(1, queries.len());
    let chunk = queries.len().div_ceil(threads);
    let parts: Vec<Result<(f64, usize)>> = std::thread::scope(|s| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|qs| {
                let mut replica = index.clone();
                s.spawn(move || {
                    let mut micros = 0.0;
                    let mut cells = 0;
                    for q in qs {
                        let start = Instant::now();
                        let r = replica.query_topk(q, k)?;
                        micros += start.elapsed().as_secs_f64() * 1e6;
                        cells += r.stats.cells_visited;
                    }
                    Ok((micros, cells))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });
    let (mut micros, mut cells) = (0.0, 0usize);
    for p in parts {
        let (t, c) = p?;
        micros += t;
        cells += c;
    }
    let count = queries.len() as f64;
    Ok((micros / count, cells as f64 / count))
}
