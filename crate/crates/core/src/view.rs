//! Name-resolved, serializable snapshots of sessions and events. These are
//! the bodies of the HTTP API and of replay transcripts.

use serde::Serialize;

use crate::corpus::{CategoryId, Corpus, ItemId, SubcategoryId};
use crate::session::{EventReport, Recommendations, Session, SessionConfig};
use crate::Engine;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcategoryRef {
    pub category: String,
    pub subcategory: String,
}

impl SubcategoryRef {
    pub fn of(corpus: &Corpus, id: SubcategoryId) -> Self {
        let cat = &corpus.categories()[id.category.0];
        SubcategoryRef { category: cat.name.clone(), subcategory: cat.subcategories[id.index].name.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreView {
    pub category: String,
    pub subcategory: String,
    pub score: f64,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryCountView {
    pub category: String,
    pub identifiers_in_basket: usize,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateView {
    pub basket: Vec<String>,
    pub categories: Vec<CategoryCountView>,
    pub active_categories: Vec<String>,
    pub active_subcategories: Vec<SubcategoryRef>,
    pub scores: Vec<ScoreView>,
}

impl StateView {
    pub fn of(session: &Session) -> Self {
        let corpus = session.engine().corpus();
        let state = session.state();
        let mut scores = Vec::new();
        for (c, cat) in corpus.categories().iter().enumerate() {
            if let Some(values) = state.scores(CategoryId(c)) {
                for (s, &score) in values.iter().enumerate() {
                    scores.push(ScoreView {
                        category: cat.name.clone(),
                        subcategory: cat.subcategories[s].name.clone(),
                        score,
                        active: state.is_subcategory_active(SubcategoryId { category: CategoryId(c), index: s }),
                    });
                }
            }
        }
        StateView {
            basket: names(corpus, state.basket()),
            categories: corpus
                .categories()
                .iter()
                .enumerate()
                .map(|(c, cat)| CategoryCountView {
                    category: cat.name.clone(),
                    identifiers_in_basket: state.activation_count(CategoryId(c)),
                    active: state.is_category_active(CategoryId(c)),
                })
                .collect(),
            active_categories: state.active_categories().iter().map(|c| category_name(corpus, *c)).collect(),
            active_subcategories: state
                .active_subcategories()
                .into_iter()
                .map(|s| SubcategoryRef::of(corpus, s))
                .collect(),
            scores,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventView {
    pub changed: bool,
    pub items: Vec<String>,
    pub activated_categories: Vec<String>,
    pub activated_subcategories: Vec<SubcategoryRef>,
    pub deactivated_categories: Vec<String>,
    pub deactivated_subcategories: Vec<SubcategoryRef>,
}

impl EventView {
    pub fn of(corpus: &Corpus, report: &EventReport) -> Self {
        EventView {
            changed: report.changed,
            items: names(corpus, &report.items),
            activated_categories: report.activated_categories.iter().map(|c| category_name(corpus, *c)).collect(),
            activated_subcategories: report
                .activated_subcategories
                .iter()
                .map(|s| SubcategoryRef::of(corpus, *s))
                .collect(),
            deactivated_categories: report.deactivated_categories.iter().map(|c| category_name(corpus, *c)).collect(),
            deactivated_subcategories: report
                .deactivated_subcategories
                .iter()
                .map(|s| SubcategoryRef::of(corpus, *s))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecommendationView {
    pub dish: String,
    pub recipe_id: String,
    pub category: String,
    pub subcategory: String,
    pub similarity: f64,
    pub matched_items: usize,
    pub missing_items: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecommendationsView {
    pub recommendations: Vec<RecommendationView>,
    pub recipes_scored: usize,
}

impl RecommendationsView {
    pub fn of(corpus: &Corpus, recs: &Recommendations) -> Self {
        RecommendationsView {
            recommendations: recs
                .dishes
                .iter()
                .map(|r| {
                    let sub = SubcategoryRef::of(corpus, r.subcategory());
                    RecommendationView {
                        dish: r.dish.clone(),
                        recipe_id: r.recipe_id.clone(),
                        category: sub.category,
                        subcategory: sub.subcategory,
                        similarity: r.similarity,
                        matched_items: r.overlap.intersection,
                        missing_items: names(corpus, &r.missing_items),
                    }
                })
                .collect(),
            recipes_scored: recs.recipes_scored,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcategorySummary {
    pub name: String,
    pub dish_count: usize,
    pub recipe_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorySummary {
    pub name: String,
    pub subcategories: Vec<SubcategorySummary>,
    pub identifiers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub categories: Vec<CategorySummary>,
    pub recipe_count: usize,
    pub vocabulary_size: usize,
    pub vocabulary: Vec<String>,
    pub defaults: SessionConfig,
}

impl CorpusSummary {
    /// Identifier sets are reported for the given configuration's `k` and `h`.
    pub fn of(engine: &Engine, config: &SessionConfig) -> Self {
        let corpus = engine.corpus();
        CorpusSummary {
            categories: corpus
                .categories()
                .iter()
                .enumerate()
                .map(|(c, cat)| CategorySummary {
                    name: cat.name.clone(),
                    subcategories: cat
                        .subcategories
                        .iter()
                        .map(|s| SubcategorySummary {
                            name: s.name.clone(),
                            dish_count: s.dishes.len(),
                            recipe_count: s.recipe_count(),
                        })
                        .collect(),
                    identifiers: names(
                        corpus,
                        &engine.stats().identifiers(CategoryId(c), config.k, config.h).identifiers,
                    ),
                })
                .collect(),
            recipe_count: corpus.recipe_count(),
            vocabulary_size: corpus.vocabulary().len(),
            vocabulary: corpus.vocabulary().names().to_vec(),
            defaults: *config,
        }
    }
}

pub fn names(corpus: &Corpus, items: &[ItemId]) -> Vec<String> {
    items.iter().map(|&i| corpus.vocabulary().name(i).to_owned()).collect()
}

fn category_name(corpus: &Corpus, id: CategoryId) -> String {
    corpus.categories()[id.0].name.clone()
}

/// Human-readable message for a session error, with item names resolved.
pub fn describe_error(corpus: &Corpus, err: &crate::session::SessionError) -> String {
    use crate::session::SessionError as E;
    let name = |i: &ItemId| corpus.vocabulary().get(*i).map(str::to_owned).unwrap_or_else(|| format!("#{}", i.0));
    match err {
        E::UnknownItem(i) => format!("unknown item {}", name(i)),
        E::NotInBasket(i) => format!("{:?} is not in the basket", name(i)),
        E::AlreadyInBasket(i) => format!("{:?} is already in the basket", name(i)),
        E::NotInRecipe(i) => format!("{:?} is not a missing ingredient of the selected recipe", name(i)),
        E::DuplicateAccepted(i) => format!("{:?} accepted more than once", name(i)),
        E::InactiveCategory(c) => {
            format!("category {:?} is not active", corpus.categories().get(c.0).map(|c| c.name.as_str()).unwrap_or("?"))
        }
        other => other.to_string(),
    }
}
