//! Verification harness: the group corpus, the check suites and report output.

pub mod analyze;
pub mod corpus;
pub mod report;
pub mod specfile;
pub mod suites;

pub use corpus::{build_default_corpus, Corpus, CorpusConfig};
pub use report::{Format, SuiteReport};
pub use suites::{resolve_suites, run_suite, CORPUS_FREE, SUITES};

use crate::error::Result;

/// Runs the named suites (or `all`) and assembles one report per suite.
pub fn verify(suite: &str, corpus: &Corpus) -> Result<Vec<SuiteReport>> {
    let ids = resolve_suites(suite)?;
    // Facts are computed lazily anyway; warming them up front only pays off
    // when a suite reads the corpus.
    if ids.iter().any(|id| !CORPUS_FREE.contains(id)) {
        corpus.prepare();
    }
    ids.into_iter().map(|id| Ok(SuiteReport::new(id, corpus, run_suite(id, corpus)?))).collect()
}
