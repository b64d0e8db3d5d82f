//! Binary index snapshots.
//!
//! Layout, little-endian:
//!
//! ```text
//! "ENNS" | version u8 | n u64 | n x (id u64, x f64, y f64) | x_order n x u32 | y_order n x u32 | sha256 (32 bytes)
//! ```
//!
//! The digest covers everything before it. Loading skips the sort and only verifies the stored orders.

use crate::engine::EnnIndex;
use crate::error::{EnnError, Result};
use crate::geometry::{Point, PointId};
use crate::pointset::PointSet;
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use std::path::Path;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"ENNS";
pub const SNAPSHOT_VERSION: u8 = 1;
const DIGEST_LEN: usize = 32;
const HEADER_LEN: usize = 4 + 1 + 8;
const RECORD_LEN: usize = 24;

pub fn encode_snapshot(set: &PointSet) -> Vec<u8> {
    let n = set.len();
    let mut buf = Vec::with_capacity(HEADER_LEN + n * (RECORD_LEN + 8) + DIGEST_LEN);
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.push(SNAPSHOT_VERSION);
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    for p in set.points() {
        buf.extend_from_slice(&p.id.0.to_le_bytes());
        buf.extend_from_slice(&p.x.to_le_bytes());
        buf.extend_from_slice(&p.y.to_le_bytes());
    }
    for &i in set.x_order().iter().chain(set.y_order()) {
        buf.extend_from_slice(&i.to_le_bytes());
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

/// Checks magic, version and digest, in that order, then rebuilds the point set from the stored orders.
pub fn decode_snapshot(bytes: &[u8]) -> Result<PointSet> {
    if bytes.len() < 5 || &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(EnnError::SnapshotFormat("missing magic".into()));
    }
    if bytes[4] != SNAPSHOT_VERSION {
        return Err(EnnError::SnapshotVersion {
            found: bytes[4],
            expected: SNAPSHOT_VERSION,
        });
    }
    if bytes.len() < HEADER_LEN + DIGEST_LEN {
        return Err(EnnError::SnapshotChecksum);
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(EnnError::SnapshotChecksum);
    }

    let n = u64::from_le_bytes(body[5..13].try_into().unwrap());
    let expected = (n as u128) * (RECORD_LEN as u128 + 8) + HEADER_LEN as u128;
    if expected != body.len() as u128 {
        return Err(EnnError::SnapshotFormat(format!("length does not match {n} points")));
    }
    let n = n as usize;
    let u64_at = |off: usize| u64::from_le_bytes(body[off..off + 8].try_into().unwrap());
    let u32_at = |off: usize| u32::from_le_bytes(body[off..off + 4].try_into().unwrap());

    let points: Vec<Point> = (0..n)
        .map(|i| {
            let off = HEADER_LEN + i * RECORD_LEN;
            Point {
                id: PointId(u64_at(off)),
                x: f64::from_bits(u64_at(off + 8)),
                y: f64::from_bits(u64_at(off + 16)),
            }
        })
        .collect();
    let orders = HEADER_LEN + n * RECORD_LEN;
    let x_order: Vec<u32> = (0..n).map(|i| u32_at(orders + 4 * i)).collect();
    let y_order: Vec<u32> = (0..n).map(|i| u32_at(orders + 4 * (n + i))).collect();
    PointSet::from_orders(points, x_order, y_order)
}

pub fn write_snapshot(index: &EnnIndex, w: &mut impl Write) -> Result<()> {
    w.write_all(&encode_snapshot(index.point_set()))?;
    Ok(())
}

pub fn read_snapshot(r: &mut impl Read) -> Result<EnnIndex> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    EnnIndex::from_point_set(decode_snapshot(&bytes)?)
}

pub fn save_snapshot(index: &EnnIndex, path: &Path) -> Result<()> {
    std::fs::write(path, encode_snapshot(index.point_set()))?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<EnnIndex> {
    EnnIndex::from_point_set(decode_snapshot(&std::fs::read(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate;

    fn sample() -> PointSet {
        PointSet::new(generate(40, 3, 1, 11, 2).unwrap().points).unwrap()
    }

    #[test]
    fn roundtrip() {
        let set = sample();
        let back = decode_snapshot(&encode_snapshot(&set)).unwrap();
        assert_eq!(back.points(), set.points());
        assert_eq!(back.x_order(), set.x_order());
        assert_eq!(back.y_order(), set.y_order());
    }

    #[test]
    fn truncated_is_checksum_error() {
        let bytes = encode_snapshot(&sample());
        for cut in [bytes.len() - 1, bytes.len() / 2, 20, 6] {
            assert!(
                matches!(decode_snapshot(&bytes[..cut]), Err(EnnError::SnapshotChecksum)),
                "cut {cut}"
            );
        }
    }

    #[test]
    fn version_and_corruption() {
        let mut bytes = encode_snapshot(&sample());
        bytes[4] += 1;
        assert!(matches!(
            decode_snapshot(&bytes),
            Err(EnnError::SnapshotVersion { found: 2, expected: 1 })
        ));
        bytes[4] -= 1;
        bytes[30] ^= 1;
        assert!(matches!(decode_snapshot(&bytes), Err(EnnError::SnapshotChecksum)));
        assert!(matches!(decode_snapshot(b"NOPE\x01"), Err(EnnError::SnapshotFormat(_))));
    }

    #[test]
    fn tampered_order_rejected() {
        let set = sample();
        let mut body = encode_snapshot(&set);
        body.truncate(body.len() - DIGEST_LEN);
        let off = HEADER_LEN + set.len() * RECORD_LEN;
        body.swap(off, off + 4);
        body.swap(off + 1, off + 5);
        body.swap(off + 2, off + 6);
        body.swap(off + 3, off + 7);
        let digest = Sha256::digest(&body);
        body.extend_from_slice(&digest);
        assert!(matches!(decode_snapshot(&body), Err(EnnError::SnapshotFormat(_))));
    }
}
