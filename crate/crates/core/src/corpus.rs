//! The committed test corpus: seeded random trees plus the structured
//! families (stars, paths, brooms).

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::tree::{make_broom, make_path, make_random, make_star, RootedTree};

/// Table of `(id, n, seed)` rows; tree `id` is `make_random(n, seed)`.
pub const SEED_TABLE: &str = include_str!("../data/corpus_seeds.csv");

/// Master seed the table was generated from.
pub const MASTER_SEED: u64 = 0x5EED_C0FF_EE00_0001;
pub const RANDOM_TREES: usize = 1000;
pub const MAX_ORDER: usize = 150;

#[derive(Debug, Clone)]
pub struct CorpusTree {
    pub id: String,
    pub tree: RootedTree,
}

/// Regenerates the seed table: `n = 1 + below(MAX_ORDER)` then a raw
/// 64-bit seed, per row.
pub fn generate_seed_table(master: u64, count: usize) -> String {
    let mut rng = SplitMix64::new(master);
    let mut out = String::from("id,n,seed\n");
    for id in 0..count {
        let n = 1 + rng.below(MAX_ORDER as u64);
        let seed = rng.next_u64();
        out.push_str(&format!("{id},{n},{seed}\n"));
    }
    out
}

#[derive(Debug, serde::Deserialize)]
struct SeedRow {
    id: usize,
    n: usize,
    seed: u64,
}

/// `(id, n, seed)` rows of the committed table.
pub fn seed_rows() -> Result<Vec<(usize, usize, u64)>> {
    csv::Reader::from_reader(SEED_TABLE.as_bytes())
        .deserialize::<SeedRow>()
        .map(|row| {
            row.map(|r| (r.id, r.n, r.seed))
                .map_err(|e| Error::Parse(format!("seed table: {e}")))
        })
        .collect()
}

pub fn random_corpus() -> Result<Vec<CorpusTree>> {
    seed_rows()?
        .into_iter()
        .map(|(id, n, seed)| {
            Ok(CorpusTree {
                id: format!("random-{id:04}"),
                tree: make_random(n, seed)?,
            })
        })
        .collect()
}

/// Stars and paths of order 1..=30 and brooms B(x, y) with x + y ≤ 20.
pub fn structured_corpus() -> Result<Vec<CorpusTree>> {
    let mut out = Vec::new();
    for n in 1..=30 {
        out.push(CorpusTree {
            id: format!("star-{n}"),
            tree: make_star(n)?,
        });
        out.push(CorpusTree {
            id: format!("path-{n}"),
            tree: make_path(n)?,
        });
    }
    for x in 1..20 {
        for y in 0..=20 - x {
            out.push(CorpusTree {
                id: format!("broom-{x}-{y}"),
                tree: make_broom(x, y)?,
            });
        }
    }
    Ok(out)
}

pub fn full_corpus() -> Result<Vec<CorpusTree>> {
    let mut out = random_corpus()?;
    out.extend(structured_corpus()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn committed_table_matches_generator() {
        assert_eq!(SEED_TABLE, generate_seed_table(MASTER_SEED, RANDOM_TREES));
    }

    #[test]
    fn random_corpus_shape() {
        let c = random_corpus().unwrap();
        assert_eq!(c.len(), RANDOM_TREES);
        assert!(c.iter().all(|t| (1..=MAX_ORDER).contains(&t.tree.order())));
        assert!(c.iter().any(|t| t.tree.order() == MAX_ORDER));
    }
}
