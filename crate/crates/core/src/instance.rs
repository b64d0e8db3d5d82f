//! Text formats for instances and results, the instance generator, and coordinate jitter.

use crate::error::{EnnError, Result};
use crate::geometry::{Point, PointId, UncertainQuery, WeightedLocation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::io::{Read, Write};

/// Query document: `{"dim": 2, "k": 5, "locations": [{"x": 1.0, "y": 2.0, "w": 0.5}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryFile {
    pub dim: u8,
    pub k: usize,
    pub locations: Vec<LocationRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocationRecord {
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    pub w: f64,
}

impl QueryFile {
    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            return Err(EnnError::Parse(format!("dim must be 1 or 2, got {}", self.dim)));
        }
        if self.k == 0 {
            return Err(EnnError::InvalidQuery("k must be positive".into()));
        }
        if self.dim == 2 && self.locations.iter().any(|l| l.y.is_none()) {
            return Err(EnnError::Parse("2-D query location without y".into()));
        }
        Ok(())
    }

    /// The locations as a planar query; 1-D locations get `y = 0`.
    pub fn to_query(&self) -> Result<UncertainQuery> {
        UncertainQuery::new(
            self.locations
                .iter()
                .map(|l| WeightedLocation::new(l.x, l.y.unwrap_or(0.0), l.w))
                .collect(),
        )
    }

    /// `(coordinate, weight)` pairs along x.
    pub fn to_line(&self) -> Vec<(f64, f64)> {
        self.locations.iter().map(|l| (l.x, l.w)).collect()
    }

    pub fn from_reader(r: impl Read) -> Result<Self> {
        let q: QueryFile = serde_json::from_reader(r).map_err(|e| EnnError::Parse(e.to_string()))?;
        q.validate()?;
        Ok(q)
    }

    pub fn to_writer(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| EnnError::Parse(e.to_string()))
    }
}

/// Reads `id,x[,y]` records. A header line starting with `id` and `#` comments are skipped;
/// a missing y reads as 0.
pub fn read_points(r: impl Read) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| EnnError::Parse(e.to_string()))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if line == 0 && rec.get(0).is_some_and(|f| f.eq_ignore_ascii_case("id")) {
            continue;
        }
        if rec.len() < 2 || rec.len() > 3 {
            return Err(EnnError::Parse(format!("record {}: expected id,x[,y]", line + 1)));
        }
        let field = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|_| EnnError::Parse(format!("record {}: bad number {:?}", line + 1, &rec[i])))
        };
        let id = rec[0]
            .parse::<u64>()
            .map_err(|_| EnnError::Parse(format!("record {}: bad id {:?}", line + 1, &rec[0])))?;
        let x = field(1)?;
        let y = if rec.len() == 3 { field(2)? } else { 0.0 };
        out.push(Point { id: PointId(id), x, y });
    }
    Ok(out)
}

/// Writes `id,x,y` records (or `id,x` when `dim == 1`) with a header.
pub fn write_points(w: impl Write, points: &[Point], dim: u8) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io = |e: csv::Error| EnnError::Parse(e.to_string());
    if dim == 1 {
        writer.write_record(["id", "x"]).map_err(io)?;
        for p in points {
            writer
                .write_record([p.id.0.to_string(), format!("{:?}", p.x)])
                .map_err(io)?;
        }
    } else {
        writer.write_record(["id", "x", "y"]).map_err(io)?;
        for p in points {
            writer
                .write_record([p.id.0.to_string(), format!("{:?}", p.x), format!("{:?}", p.y)])
                .map_err(io)?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub id: PointId,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    pub expected_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultMeta {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub elapsed_micros: u64,
    pub cells_visited: usize,
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<crate::engine::QueryStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub results: Vec<ResultRecord>,
    pub meta: ResultMeta,
}

/// A generated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub query: QueryFile,
}

/// Minimum relative gap between any two expected distances of a generated instance.
pub const SEPARATION: f64 = 1e-6;

const COORD_RANGE: f64 = 1.0e4;
const MAX_ROUNDS: usize = 200;

/// Deterministic random instance: distinct x and distinct y over all points and locations
/// together, and expected distances pairwise separated by [`SEPARATION`] (relative).
pub fn generate(n: usize, m: usize, k: usize, seed: u64, dim: u8) -> Result<Instance> {
    if n == 0 || m == 0 || k == 0 {
        return Err(EnnError::Generation("n, m and k must be positive".into()));
    }
    if dim != 1 && dim != 2 {
        return Err(EnnError::Generation(format!("dim must be 1 or 2, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used_x = HashSet::new();
    let mut used_y = HashSet::new();
    let draw = |rng: &mut ChaCha8Rng, used: &mut HashSet<u64>| loop {
        let v: f64 = rng.gen_range(0.0..COORD_RANGE);
        if used.insert(v.to_bits()) {
            return v;
        }
    };

    let locations: Vec<LocationRecord> = (0..m)
        .map(|_| {
            let x = draw(&mut rng, &mut used_x);
            let y = (dim == 2).then(|| draw(&mut rng, &mut used_y));
            LocationRecord {
                x,
                y,
                w: rng.gen_range(0.05..1.0),
            }
        })
        .collect();
    let query = QueryFile { dim, k, locations };
    let q = query.to_query()?;

    let mut points: Vec<Point> = (0..n)
        .map(|i| {
            let x = draw(&mut rng, &mut used_x);
            let y = if dim == 2 { draw(&mut rng, &mut used_y) } else { 0.0 };
            Point::new(i as u64, x, y)
        })
        .collect();

    for _ in 0..MAX_ROUNDS {
        let mut ed: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (q.expected_distance_direct(p.xy()), i))
            .collect();
        ed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut redraw: Vec<usize> = ed
            .windows(2)
            .filter(|w| w[1].0 - w[0].0 < SEPARATION * w[1].0.abs().max(1.0))
            .map(|w| w[1].1)
            .collect();
        if redraw.is_empty() {
            return Ok(Instance { points, query });
        }
        redraw.sort_unstable();
        redraw.dedup();
        for i in redraw {
            let p = &mut points[i];
            used_x.remove(&p.x.to_bits());
            p.x = draw(&mut rng, &mut used_x);
            if dim == 2 {
                used_y.remove(&p.y.to_bits());
                p.y = draw(&mut rng, &mut used_y);
            }
        }
    }
    Err(EnnError::Generation(format!(
        "could not separate expected distances after {MAX_ROUNDS} rounds"
    )))
}

/// Query with `m` locations drawn from the generator's coordinate range; no distinctness guarantees.
pub fn random_query(m: usize, k: usize, seed: u64, dim: u8) -> QueryFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locations = (0..m)
        .map(|_| LocationRecord {
            x: rng.gen_range(0.0..COORD_RANGE),
            y: (dim == 2).then(|| rng.gen_range(0.0..COORD_RANGE)),
            w: rng.gen_range(0.05..1.0),
        })
        .collect();
    QueryFile { dim, k, locations }
}

/// Moves every coordinate by a seed-derived amount of at most `1e-9` relative to its magnitude.
/// The y-coordinates of 1-D data (all zero) are left alone when `dim == 1`.
pub fn perturb(points: &mut [Point], seed: u64, dim: u8) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for p in points {
        p.x += p.x.abs().max(1.0) * 1e-9 * rng.gen_range(-1.0..1.0);
        let dy = p.y.abs().max(1.0) * 1e-9 * rng.gen_range(-1.0..1.0);
        if dim == 2 {
            p.y += dy;
        }
    }
}
