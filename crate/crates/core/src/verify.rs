//! Engine-versus-oracle comparison and golden files.

use crate::engine::EnnIndex;
use crate::enn1d::Index1D;
use crate::error::{EnnError, Result};
use crate::geometry::{Point, PointId};
use crate::instance::{generate, QueryFile};
use crate::oracle::oracle_topk;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Relative tolerance for expected distances.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

pub fn distances_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= DISTANCE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// First disagreement between an answer and the reference, if any.
pub fn compare_ranked(got: &[(PointId, f64)], want: &[(PointId, f64)]) -> Option<String> {
    if got.len() != want.len() {
        return Some(format!("length {} != {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if g.0 != w.0 {
            return Some(format!("rank {i}: id {} != {}", g.0, w.0));
        }
        if !distances_agree(g.1, w.1) {
            return Some(format!("rank {i}: distance {} != {}", g.1, w.1));
        }
    }
    None
}

/// Answers the query with the planar engine, or the line index when `dim == 1`.
pub fn answer(points: &[Point], query: &QueryFile) -> Result<(Vec<(PointId, f64)>, bool)> {
    if query.dim == 1 {
        let line: Vec<(f64, PointId)> = points.iter().map(|p| (p.x, p.id)).collect();
        let r = Index1D::build(&line)?.query(&query.to_line(), query.k, false)?;
        return Ok((r.items, r.truncated));
    }
    let mut index = EnnIndex::build(points.to_vec())?;
    let r = index.query_topk(&query.to_query()?, query.k)?;
    Ok((
        r.items.iter().map(|n| (n.id, n.expected_distance)).collect(),
        r.truncated,
    ))
}

/// `None` when the answer matches brute force.
pub fn check_against_oracle(points: &[Point], query: &QueryFile) -> Result<Option<String>> {
    let (got, _) = answer(points, query)?;
    let want = oracle_topk(points, &query.to_query()?, query.k);
    Ok(compare_ranked(&got, &want.items))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchOutcome {
    pub instances: usize,
    pub mismatches: Vec<(u64, String)>,
}

/// Generates `count` instances with seeds `seed, seed + 1, ...` and checks each one.
pub fn verify_batch(count: usize, n: usize, m: usize, k: usize, seed: u64, dim: u8) -> Result<BatchOutcome> {
    let mut mismatches = Vec::new();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let inst = generate(n, m, k, s, dim)?;
        if let Some(msg) = check_against_oracle(&inst.points, &inst.query)? {
            mismatches.push((s, msg));
        }
    }
    Ok(BatchOutcome {
        instances: count,
        mismatches,
    })
}

/// Oracle answer for one generated instance, stored as JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub dim: u8,
    pub results: Vec<GoldenEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub id: PointId,
    pub x: f64,
    pub y: f64,
    pub expected_distance: f64,
}

impl GoldenCase {
    pub fn compute(n: usize, m: usize, k: usize, seed: u64, dim: u8) -> Result<Self> {
        let inst = generate(n, m, k, seed, dim)?;
        let top = oracle_topk(&inst.points, &inst.query.to_query()?, k);
        let results = top
            .items
            .iter()
            .map(|&(id, d)| {
                let p = inst
                    .points
                    .iter()
                    .find(|p| p.id == id)
                    .expect("oracle id comes from the instance");
                GoldenEntry {
                    id,
                    x: p.x,
                    y: p.y,
                    expected_distance: d,
                }
            })
            .collect();
        Ok(GoldenCase {
            seed,
            n,
            m,
            k,
            dim,
            results,
        })
    }

    pub fn file_name(&self) -> String {
        format!("d{}_n{}_m{}_k{}_s{}.json", self.dim, self.n, self.m, self.k, self.seed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| EnnError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(self).map_err(|e| EnnError::Parse(e.to_string()))?;
        std::fs::write(dir.join(self.file_name()), text + "\n")?;
        Ok(())
    }

    /// Regenerates the instance, answers it and compares with the stored results.
    pub fn check(&self) -> Result<Option<String>> {
        let inst = generate(self.n, self.m, self.k, self.seed, self.dim)?;
        for e in &self.results {
            match inst.points.iter().find(|p| p.id == e.id) {
                Some(p) if p.x == e.x && p.y == e.y => {}
                _ => return Ok(Some(format!("point {} differs from the generated instance", e.id))),
            }
        }
        let (got, _) = answer(&inst.points, &inst.query)?;
        let want: Vec<(PointId, f64)> = self.results.iter().map(|e| (e.id, e.expected_distance)).collect();
        Ok(compare_ranked(&got, &want))
    }
}

/// Checks every `*.json` golden file in `dir`; returns `(files checked, mismatches)`.
pub fn verify_golden_dir(dir: &Path) -> Result<(usize, Vec<(String, String)>)> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    let mut bad = Vec::new();
    for p in &paths {
        if let Some(msg) = GoldenCase::load(p)?.check()? {
            bad.push((p.display().to_string(), msg));
        }
    }
    Ok((paths.len(), bad))
}
