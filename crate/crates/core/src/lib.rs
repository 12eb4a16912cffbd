//! Session-based grocery recommendation.
//!
//! A shopper's basket is matched against a recipe corpus in three stages:
//! items from a category's identifier set activate the category, items
//! ranked as strong subcategory differentiators push that subcategory's
//! score past a threshold, and recipes of active subcategories are ranked
//! by Jaccard similarity to the basket. The missing ingredients of the
//! best recipes are what gets recommended.

pub mod corpus;
pub mod exec;
pub mod replay;
pub mod report;
pub mod session;
pub mod stats;
pub mod synth;
pub mod view;

use std::path::Path;
use std::sync::Arc;

pub use corpus::{load_corpus, normalize_item_name, CategoryId, Corpus, CorpusError, ItemId, RecipeLoc, SubcategoryId};
pub use exec::Execution;
pub use session::{
    jaccard, min_items_to_activate, score_increment, EventReport, Recommendation, Recommendations, Session,
    SessionConfig, SessionError,
};
pub use stats::{Stats, StatsError};

/// The bundled demonstration corpus (rice and chicken dishes).
pub const BUNDLED_CORPUS: &str = include_str!("../data/bundled_corpus.json");

/// A loaded corpus with its precomputed statistics. Shared read-only by
/// every session.
#[derive(Debug)]
pub struct Engine {
    corpus: Corpus,
    stats: Stats,
}

impl Engine {
    pub fn new(corpus: Corpus) -> Result<Self, StatsError> {
        let stats = Stats::build(&corpus)?;
        Ok(Engine { corpus, stats })
    }

    pub fn with_execution(corpus: Corpus, execution: Execution) -> Result<Self, StatsError> {
        let stats = Stats::build_with(&corpus, execution)?;
        Ok(Engine { corpus, stats })
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        Ok(Engine::new(Corpus::open(path)?)?)
    }

    pub fn bundled() -> Arc<Self> {
        let corpus = Corpus::from_slice(BUNDLED_CORPUS.as_bytes()).expect("bundled corpus is valid");
        Arc::new(Engine::new(corpus).expect("bundled corpus has statistics"))
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}
