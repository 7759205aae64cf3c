//! Benchmark fixtures: the corpus environments the criterion benches run over.

use deepind_core::{corpus, Env};

/// The full corpus, parsed and classified.
pub fn corpus_env() -> Env {
    Env::from_source(corpus::ALL).expect("corpus parses")
}
