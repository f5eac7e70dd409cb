//! Shared inputs for the benchmarks.

use patchfold::search::{random_prismatoid, GeneratorConfig, ShapeBias};
use patchfold::Prismatoid;

/// A fixed set of random prismatoids with `n` vertices on top and bottom.
pub fn instances(n: usize, count: u64) -> Vec<Prismatoid> {
    let cfg = GeneratorConfig { seed: 17, bias: ShapeBias::Generic, n_top: (n, n), n_base: (n, n), max_retries: 20_000, ..Default::default() };
    (0..count).map(|k| random_prismatoid(&cfg, k).expect("generator succeeds")).collect()
}
