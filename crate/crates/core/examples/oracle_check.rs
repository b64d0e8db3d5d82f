//! Cross-checking the engine against brute force on generated instances.

use l1_enn::instance::generate;
use l1_enn::oracle::{oracle_global_min_check, oracle_topk};
use l1_enn::verify::compare_ranked;
use l1_enn::{build_profile, EnnIndex};

fn main() -> l1_enn::Result<()> {
    for seed in 0..20 {
        let inst = generate(1000, 12, 25, seed, 2)?;
        let q = inst.query.to_query()?;
        let mut index = EnnIndex::build(inst.points.clone())?;
        let got: Vec<_> = index
            .query_topk(&q, 25)?
            .items
            .iter()
            .map(|n| (n.id, n.expected_distance))
            .collect();
        let want = oracle_topk(&inst.points, &q, 25);
        let star = build_profile(&q).global_minimum();
        match compare_ranked(&got, &want.items) {
            None => println!(
                "seed {seed}: agree, q* minimal = {}",
                oracle_global_min_check(&inst.points, &q, star)
            ),
            Some(msg) => println!("seed {seed}: MISMATCH {msg}"),
        }
    }
    Ok(())
}
