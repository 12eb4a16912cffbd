//! Online session engine: basket state, category and subcategory
//! activation, and dish recommendation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CategoryId, ItemId, RecipeLoc, SubcategoryId};
use crate::exec::{self, Execution};
use crate::stats::IdentifierSet;
use crate::Engine;

/// Tunables of one session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Identifiers per category.
    pub k: usize,
    /// Globally most common items excluded from identifier sets.
    pub h: usize,
    /// Identifiers needed in the basket to activate a category.
    pub q: usize,
    /// Root of the rank in the score increment `rank^(-1/n)`.
    pub n: f64,
    /// Subcategory activation threshold.
    pub theta: f64,
    /// Dishes returned by `recommend`.
    pub top_n: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig { k: 5, h: 1, q: 1, n: 3.0, theta: 4.0, top_n: 5 }
    }
}

/// Partial configuration; unset fields keep their base value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub k: Option<usize>,
    pub h: Option<usize>,
    pub q: Option<usize>,
    pub n: Option<f64>,
    pub theta: Option<f64>,
    pub top_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub fields: Vec<FieldError>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid session config: ")?;
        for (i, e) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} {}", e.field, e.message)?;
        }
        Ok(())
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut fields = Vec::new();
        let mut check = |ok: bool, field: &'static str, message: &str| {
            if !ok {
                fields.push(FieldError { field, message: message.to_owned() });
            }
        };
        check(self.k >= 1, "k", "must be at least 1");
        check(self.q >= 1, "q", "must be at least 1");
        check(self.n.is_finite() && self.n >= 1.0, "n", "must be a finite number of at least 1");
        check(self.theta.is_finite() && self.theta > 0.0, "theta", "must be a finite number greater than 0");
        check(self.top_n >= 1, "top_n", "must be at least 1");
        if fields.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { fields })
        }
    }

    pub fn with_overrides(self, o: &ConfigOverrides) -> Result<Self, ConfigError> {
        let cfg = SessionConfig {
            k: o.k.unwrap_or(self.k),
            h: o.h.unwrap_or(self.h),
            q: o.q.unwrap_or(self.q),
            n: o.n.unwrap_or(self.n),
            theta: o.theta.unwrap_or(self.theta),
            top_n: o.top_n.unwrap_or(self.top_n),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown item id {0:?}")]
    UnknownItem(ItemId),
    #[error("item {0:?} is not in the basket")]
    NotInBasket(ItemId),
    #[error("item {0:?} is already in the basket")]
    AlreadyInBasket(ItemId),
    #[error("item {0:?} is not an ingredient of the selected recipe")]
    NotInRecipe(ItemId),
    #[error("item {0:?} accepted more than once")]
    DuplicateAccepted(ItemId),
    #[error("unknown recipe {0:?}")]
    UnknownRecipe(String),
    #[error("recipe {recipe:?} does not belong to dish {dish:?}")]
    DishMismatch { dish: String, recipe: String },
    #[error("unknown subcategory {0:?}")]
    UnknownSubcategory(SubcategoryId),
    #[error("category {0:?} is not active")]
    InactiveCategory(CategoryId),
}

/// Score contribution of an item ranked `rank` for a subcategory: `rank^(-1/n)`.
#[inline]
pub fn score_increment(rank: u32, n: f64) -> f64 {
    if rank == 1 {
        1.0
    } else {
        f64::from(rank).powf(-1.0 / n)
    }
}

/// Smallest basket of top-ranked items (ranks 1, 2, …) whose score reaches `theta`.
///
/// Grows like `e^theta` for `n = 1`; see [`min_items_within`] for a bounded search.
pub fn min_items_to_activate(n: f64, theta: f64) -> u64 {
    min_items_within(n, theta, u64::MAX).expect("unbounded search terminates")
}

/// As [`min_items_to_activate`], giving up after `limit` items.
pub fn min_items_within(n: f64, theta: f64, limit: u64) -> Option<u64> {
    let mut score = 0.0;
    let mut m = 0u64;
    while score < theta {
        if m == limit {
            return None;
        }
        m += 1;
        score += score_increment(u32::try_from(m).unwrap_or(u32::MAX), n);
    }
    Some(m)
}

/// Intersection and union sizes of two sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub intersection: usize,
    pub union: usize,
}

impl Overlap {
    /// `|A ∩ B| / |A ∪ B|`, zero when both sets are empty.
    pub fn similarity(&self) -> f64 {
        if self.union == 0 {
            0.0
        } else {
            self.intersection as f64 / self.union as f64
        }
    }

    /// Exact comparison of the two similarities as rationals.
    pub fn cmp_similarity(&self, other: &Overlap) -> Ordering {
        let lhs = self.intersection as u128 * other.union.max(1) as u128;
        let rhs = other.intersection as u128 * self.union.max(1) as u128;
        lhs.cmp(&rhs)
    }
}

/// Overlap of two ascending, duplicate-free slices.
pub fn overlap<T: Ord>(a: &[T], b: &[T]) -> Overlap {
    let (mut i, mut j, mut both) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                both += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Overlap { intersection: both, union: a.len() + b.len() - both }
}

/// Jaccard similarity of two ascending, duplicate-free slices.
pub fn jaccard<T: Ord>(a: &[T], b: &[T]) -> f64 {
    overlap(a, b).similarity()
}

/// What a mutation changed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventReport {
    /// False for a duplicate add or an empty selection.
    pub changed: bool,
    /// Items actually added or removed.
    pub items: Vec<ItemId>,
    pub activated_categories: Vec<CategoryId>,
    pub activated_subcategories: Vec<SubcategoryId>,
    pub deactivated_categories: Vec<CategoryId>,
    pub deactivated_subcategories: Vec<SubcategoryId>,
}

impl EventReport {
    fn merge(&mut self, other: EventReport) {
        self.changed |= other.changed;
        self.items.extend(other.items);
        self.activated_categories.extend(other.activated_categories);
        self.activated_subcategories.extend(other.activated_subcategories);
        self.deactivated_categories.extend(other.deactivated_categories);
        self.deactivated_subcategories.extend(other.deactivated_subcategories);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub dish: String,
    pub recipe_id: String,
    pub recipe: RecipeLoc,
    pub overlap: Overlap,
    pub similarity: f64,
    /// Recipe items not yet in the basket, ascending.
    pub missing_items: Vec<ItemId>,
}

impl Recommendation {
    pub fn subcategory(&self) -> SubcategoryId {
        self.recipe.subcategory_id()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Recommendations {
    pub dishes: Vec<Recommendation>,
    /// Recipes whose similarity was computed (the restricted search space).
    pub recipes_scored: usize,
}

/// Basket and activation state. Everything here is a function of the basket
/// contents and the session configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    basket: Vec<ItemId>,
    in_basket: Vec<bool>,
    activation_counts: Vec<usize>,
    active_categories: Vec<bool>,
    scores: Vec<Option<Vec<f64>>>,
    active_subcategories: Vec<Vec<bool>>,
}

impl SessionState {
    fn empty(engine: &Engine) -> Self {
        let cats = engine.corpus().categories();
        SessionState {
            basket: Vec::new(),
            in_basket: vec![false; engine.corpus().vocabulary().len()],
            activation_counts: vec![0; cats.len()],
            active_categories: vec![false; cats.len()],
            scores: vec![None; cats.len()],
            active_subcategories: cats.iter().map(|c| vec![false; c.subcategories.len()]).collect(),
        }
    }

    /// Insertion-ordered basket.
    pub fn basket(&self) -> &[ItemId] {
        &self.basket
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.in_basket.get(item.index()).copied().unwrap_or(false)
    }

    pub fn activation_count(&self, category: CategoryId) -> usize {
        self.activation_counts[category.0]
    }

    pub fn activation_counts(&self) -> &[usize] {
        &self.activation_counts
    }

    pub fn is_category_active(&self, category: CategoryId) -> bool {
        self.active_categories[category.0]
    }

    pub fn active_categories(&self) -> Vec<CategoryId> {
        (0..self.active_categories.len()).filter(|&c| self.active_categories[c]).map(CategoryId).collect()
    }

    /// Subcategory scores of an active category, in subcategory order.
    pub fn scores(&self, category: CategoryId) -> Option<&[f64]> {
        self.scores[category.0].as_deref()
    }

    pub fn is_subcategory_active(&self, sub: SubcategoryId) -> bool {
        self.active_subcategories[sub.category.0][sub.index]
    }

    pub fn active_subcategories(&self) -> Vec<SubcategoryId> {
        let mut out = Vec::new();
        for (c, subs) in self.active_subcategories.iter().enumerate() {
            for (s, &on) in subs.iter().enumerate() {
                if on {
                    out.push(SubcategoryId { category: CategoryId(c), index: s });
                }
            }
        }
        out
    }
}

/// One shopper's session. Single writer; share the [`Engine`] instead of
/// the session.
#[derive(Debug, Clone)]
pub struct Session {
    engine: Arc<Engine>,
    config: SessionConfig,
    execution: Execution,
    identifiers: Vec<IdentifierSet>,
    identifier_of: HashMap<ItemId, Vec<CategoryId>>,
    state: SessionState,
}

impl Session {
    pub fn new(engine: Arc<Engine>, config: SessionConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let identifiers = engine.stats().all_identifiers(config.k, config.h);
        let mut identifier_of: HashMap<ItemId, Vec<CategoryId>> = HashMap::new();
        for set in &identifiers {
            for &item in &set.identifiers {
                identifier_of.entry(item).or_default().push(set.category);
            }
        }
        let state = SessionState::empty(&engine);
        Ok(Session { engine, config, execution: Execution::Sequential, identifiers, identifier_of, state })
    }

    /// Scheduling of `recommend`'s recipe scan.
    pub fn set_execution(&mut self, execution: Execution) {
        self.execution = execution;
    }

    pub fn engine(&self) -> &Arc<Engine> {
        &self.engine
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    /// The identifier set `F_c` used by this session.
    pub fn identifiers(&self, category: CategoryId) -> &IdentifierSet {
        &self.identifiers[category.0]
    }

    pub fn add_item(&mut self, item: ItemId) -> Result<EventReport, SessionError> {
        if item.index() >= self.engine.corpus().vocabulary().len() {
            return Err(SessionError::UnknownItem(item));
        }
        Ok(self.push(item))
    }

    fn push(&mut self, item: ItemId) -> EventReport {
        let mut report = EventReport::default();
        if self.state.in_basket[item.index()] {
            return report;
        }
        report.changed = true;
        report.items.push(item);
        self.state.basket.push(item);
        self.state.in_basket[item.index()] = true;

        let mut newly_active = Vec::new();
        if let Some(cats) = self.identifier_of.get(&item) {
            for &c in cats {
                self.state.activation_counts[c.0] += 1;
                if !self.state.active_categories[c.0] && self.state.activation_counts[c.0] >= self.config.q {
                    newly_active.push(c);
                }
            }
        }
        newly_active.sort_unstable();

        let stats = self.engine.stats();
        for c in 0..self.state.active_categories.len() {
            let cat = CategoryId(c);
            if newly_active.contains(&cat) {
                self.state.active_categories[c] = true;
                report.activated_categories.push(cat);
                self.state.scores[c] = Some(self.basket_scores(cat));
            } else if self.state.active_categories[c] {
                let cs = stats.category(cat);
                if !cs.is_relevant(item) {
                    continue;
                }
                let scores = self.state.scores[c].as_mut().expect("active category has scores");
                for (s, score) in scores.iter_mut().enumerate() {
                    *score += score_increment(cs.ranks.rank(s, item), self.config.n);
                }
            } else {
                continue;
            }
            let scores = self.state.scores[c].as_ref().expect("active category has scores");
            for (s, &score) in scores.iter().enumerate() {
                if !self.state.active_subcategories[c][s] && score >= self.config.theta {
                    self.state.active_subcategories[c][s] = true;
                    report.activated_subcategories.push(SubcategoryId { category: cat, index: s });
                }
            }
        }
        report
    }

    /// Subcategory scores of `category` over the whole basket, in basket order.
    fn basket_scores(&self, category: CategoryId) -> Vec<f64> {
        let cs = self.engine.stats().category(category);
        let mut scores = vec![0.0; cs.ranks.subcategory_count()];
        for &item in &self.state.basket {
            if cs.is_relevant(item) {
                for (s, score) in scores.iter_mut().enumerate() {
                    *score += score_increment(cs.ranks.rank(s, item), self.config.n);
                }
            }
        }
        scores
    }

    /// Removes an item and rebuilds all activation state from the remaining
    /// basket in its current order.
    pub fn remove_item(&mut self, item: ItemId) -> Result<EventReport, SessionError> {
        if item.index() >= self.engine.corpus().vocabulary().len() {
            return Err(SessionError::UnknownItem(item));
        }
        if !self.state.in_basket[item.index()] {
            return Err(SessionError::NotInBasket(item));
        }
        let before = std::mem::replace(&mut self.state, SessionState::empty(&self.engine));
        for &kept in before.basket.iter().filter(|&&b| b != item) {
            self.push(kept);
        }

        let mut report = EventReport { changed: true, items: vec![item], ..Default::default() };
        for c in 0..before.active_categories.len() {
            match (before.active_categories[c], self.state.active_categories[c]) {
                (true, false) => report.deactivated_categories.push(CategoryId(c)),
                (false, true) => report.activated_categories.push(CategoryId(c)),
                _ => {}
            }
            for s in 0..before.active_subcategories[c].len() {
                let sub = SubcategoryId { category: CategoryId(c), index: s };
                match (before.active_subcategories[c][s], self.state.active_subcategories[c][s]) {
                    (true, false) => report.deactivated_subcategories.push(sub),
                    (false, true) => report.activated_subcategories.push(sub),
                    _ => {}
                }
            }
        }
        Ok(report)
    }

    /// Adds the accepted missing ingredients of a chosen recipe, in the given
    /// order. Validates the whole selection before changing anything.
    pub fn select_dish(
        &mut self,
        dish: &str,
        recipe_id: &str,
        accepted: &[ItemId],
    ) -> Result<EventReport, SessionError> {
        let corpus = self.engine.corpus();
        let loc = corpus.locate_recipe(recipe_id).ok_or_else(|| SessionError::UnknownRecipe(recipe_id.to_owned()))?;
        if corpus.dish_at(loc).name != dish {
            return Err(SessionError::DishMismatch { dish: dish.to_owned(), recipe: recipe_id.to_owned() });
        }
        let recipe = corpus.recipe_at(loc);
        for (i, &item) in accepted.iter().enumerate() {
            if item.index() >= corpus.vocabulary().len() {
                return Err(SessionError::UnknownItem(item));
            }
            if accepted[..i].contains(&item) {
                return Err(SessionError::DuplicateAccepted(item));
            }
            if self.state.contains(item) {
                return Err(SessionError::AlreadyInBasket(item));
            }
            if !recipe.contains(item) {
                return Err(SessionError::NotInRecipe(item));
            }
        }
        let mut report = EventReport::default();
        for &item in accepted {
            let r = self.push(item);
            report.merge(r);
        }
        Ok(report)
    }

    /// Current score of a subcategory of an active category.
    pub fn subcategory_score(&self, sub: SubcategoryId) -> Result<f64, SessionError> {
        let scores = self
            .state
            .scores
            .get(sub.category.0)
            .ok_or(SessionError::UnknownSubcategory(sub))?
            .as_ref()
            .ok_or(SessionError::InactiveCategory(sub.category))?;
        scores.get(sub.index).copied().ok_or(SessionError::UnknownSubcategory(sub))
    }

    /// Best-matching dishes of the active subcategories, most similar first.
    pub fn recommend(&self) -> Recommendations {
        let corpus = self.engine.corpus();
        let mut dish_locs = Vec::new();
        let mut recipes_scored = 0;
        for sub in self.state.active_subcategories() {
            let subcategory = corpus.subcategory(sub).expect("active subcategory exists");
            for (d, dish) in subcategory.dishes.iter().enumerate() {
                recipes_scored += dish.recipes.len();
                dish_locs.push(RecipeLoc { category: sub.category.0, subcategory: sub.index, dish: d, recipe: 0 });
            }
        }

        let basket = &self.state;
        let best = exec::map(self.execution, &dish_locs, |&loc| {
            let dish = corpus.dish_at(loc);
            let mut best: Option<(usize, Overlap)> = None;
            for (r, recipe) in dish.recipes.iter().enumerate() {
                let both = recipe.items.iter().filter(|&&i| basket.contains(i)).count();
                let ov = Overlap { intersection: both, union: recipe.items.len() + basket.basket.len() - both };
                let better = match best {
                    None => true,
                    Some((_, b)) => {
                        ov.cmp_similarity(&b).then(ov.intersection.cmp(&b.intersection)) == Ordering::Greater
                    }
                };
                if better {
                    best = Some((r, ov));
                }
            }
            let (r, ov) = best.expect("dish has recipes");
            (RecipeLoc { recipe: r, ..loc }, ov)
        });

        let mut ranked = best;
        ranked.sort_by(|(la, a), (lb, b)| {
            b.cmp_similarity(a)
                .then(b.intersection.cmp(&a.intersection))
                .then_with(|| corpus.dish_at(*la).name.cmp(&corpus.dish_at(*lb).name))
                .then(la.cmp(lb))
        });
        ranked.truncate(self.config.top_n);

        let dishes = ranked
            .into_iter()
            .map(|(loc, ov)| {
                let recipe = corpus.recipe_at(loc);
                Recommendation {
                    dish: corpus.dish_at(loc).name.clone(),
                    recipe_id: recipe.id.clone(),
                    recipe: loc,
                    overlap: ov,
                    similarity: ov.similarity(),
                    missing_items: recipe.items.iter().copied().filter(|&i| !basket.contains(i)).collect(),
                }
            })
            .collect();
        Recommendations { dishes, recipes_scored }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;

    fn engine(src: &str) -> Arc<Engine> {
        Arc::new(Engine::new(Corpus::from_slice(src.as_bytes()).unwrap()).unwrap())
    }

    fn item(e: &Engine, name: &str) -> ItemId {
        e.corpus().vocabulary().id(name).unwrap()
    }

    /// One category with subcategories s1 (items a..) and s2.
    const SMALL: &str = r#"{"categories":[{"name":"c","subcategories":[
        {"name":"s1","dishes":[{"name":"d1","recipes":[{"id":"1","items":["base","a","b"]}]},
                               {"name":"d2","recipes":[{"id":"2","items":["base","a","c"]}]}]},
        {"name":"s2","dishes":[{"name":"d3","recipes":[{"id":"3","items":["base","x","y"]}]}]}]},
        {"name":"o","subcategories":[{"name":"t","dishes":[{"name":"d4","recipes":[{"id":"4","items":["z"]}]}]}]}]}"#;

    #[test]
    fn increments() {
        assert_eq!(score_increment(1, 1.0), 1.0);
        assert_eq!(score_increment(1, 7.0), 1.0);
        assert_eq!(score_increment(4, 2.0), 0.5);
        let s: f64 = [1, 4, 9].iter().map(|&r| score_increment(r, 2.0)).sum();
        assert!((s - 11.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_counts() {
        assert_eq!(min_items_to_activate(1.0, 5.0), 83);
        assert_eq!(min_items_to_activate(2.0, 5.0), 10);
        assert_eq!(min_items_to_activate(3.0, 4.0), 6);
        for n in 1..=10 {
            assert_eq!(min_items_to_activate(n as f64, 1.0), 1);
        }
        assert_eq!(min_items_within(1.0, 7.0, 100), None);
        assert_eq!(min_items_within(1.0, 7.0, 616), Some(616));
    }

    #[test]
    fn jaccard_basics() {
        assert_eq!(jaccard(&['a', 'b', 'c'], &['b', 'c', 'd']), 0.5);
        assert_eq!(jaccard(&[1, 2], &[1, 2]), 1.0);
        assert_eq!(jaccard(&[1, 2], &[3]), 0.0);
        assert_eq!(jaccard::<u8>(&[], &[]), 0.0);
        assert_eq!(overlap(&[1, 2, 3], &[2, 3, 4]), Overlap { intersection: 2, union: 4 });
    }

    #[test]
    fn config_validation() {
        assert!(SessionConfig::default().validate().is_ok());
        let err = SessionConfig::default()
            .with_overrides(&ConfigOverrides { theta: Some(0.0), q: Some(0), ..Default::default() })
            .unwrap_err();
        let fields: Vec<_> = err.fields.iter().map(|f| f.field).collect();
        assert_eq!(fields, vec!["q", "theta"]);
        let cfg = SessionConfig::default()
            .with_overrides(&ConfigOverrides { n: Some(2.0), theta: Some(5.0), ..Default::default() })
            .unwrap();
        assert_eq!((cfg.n, cfg.theta, cfg.k), (2.0, 5.0, 5));
    }

    #[test]
    fn identifier_activates_category_and_backscores() {
        let e = engine(SMALL);
        let cfg = SessionConfig { k: 1, h: 0, theta: 100.0, ..Default::default() };
        let mut s = Session::new(e.clone(), cfg).unwrap();
        // 'a' is not the identifier of c (base is), so nothing activates yet
        let r = s.add_item(item(&e, "a")).unwrap();
        assert!(r.changed && r.activated_categories.is_empty());
        assert!(s.subcategory_score(SubcategoryId { category: CategoryId(0), index: 0 }).is_err());
        let r = s.add_item(item(&e, "base")).unwrap();
        assert_eq!(r.activated_categories, vec![CategoryId(0)]);
        let scores = s.state().scores(CategoryId(0)).unwrap();
        // back-scoring counted 'a' as well as 'base'
        let ranks = &e.stats().category(CategoryId(0)).ranks;
        let expect: f64 =
            score_increment(ranks.rank(0, item(&e, "a")), 3.0) + score_increment(ranks.rank(0, item(&e, "base")), 3.0);
        assert_eq!(scores[0], expect);
        // duplicate add is a no-op
        let r = s.add_item(item(&e, "a")).unwrap();
        assert!(!r.changed);
        assert_eq!(s.state().basket().len(), 2);
    }

    #[test]
    fn irrelevant_items_never_score() {
        let e = engine(SMALL);
        let mut s = Session::new(e.clone(), SessionConfig { k: 1, h: 0, ..Default::default() }).unwrap();
        s.add_item(item(&e, "base")).unwrap();
        let before = s.state().scores(CategoryId(0)).unwrap().to_vec();
        s.add_item(item(&e, "z")).unwrap();
        assert_eq!(s.state().scores(CategoryId(0)).unwrap(), &before[..]);
        // z identifies category o
        assert!(s.state().is_category_active(CategoryId(1)));
    }

    #[test]
    fn remove_recomputes() {
        let e = engine(SMALL);
        let cfg = SessionConfig { k: 1, h: 0, theta: 1.5, ..Default::default() };
        let mut s = Session::new(e.clone(), cfg).unwrap();
        let fresh = s.state().clone();
        s.add_item(item(&e, "base")).unwrap();
        s.add_item(item(&e, "a")).unwrap();
        assert!(s.state().is_subcategory_active(SubcategoryId { category: CategoryId(0), index: 0 }));
        let r = s.remove_item(item(&e, "base")).unwrap();
        assert_eq!(r.deactivated_categories, vec![CategoryId(0)]);
        assert_eq!(r.deactivated_subcategories.len(), 1);
        let mut only_a = Session::new(e.clone(), cfg).unwrap();
        only_a.add_item(item(&e, "a")).unwrap();
        assert_eq!(s.state(), only_a.state());
        s.remove_item(item(&e, "a")).unwrap();
        assert_eq!(s.state(), &fresh);
        assert_eq!(s.remove_item(item(&e, "a")), Err(SessionError::NotInBasket(item(&e, "a"))));
        assert_eq!(s.add_item(ItemId(999)), Err(SessionError::UnknownItem(ItemId(999))));
    }

    #[test]
    fn recommend_and_select() {
        let e = engine(SMALL);
        let cfg = SessionConfig { k: 1, h: 0, theta: 1.0, ..Default::default() };
        let mut s = Session::new(e.clone(), cfg).unwrap();
        assert!(s.recommend().dishes.is_empty());
        s.add_item(item(&e, "base")).unwrap();
        s.add_item(item(&e, "a")).unwrap();
        s.add_item(item(&e, "b")).unwrap();
        let recs = s.recommend();
        assert_eq!(recs.dishes[0].dish, "d1");
        assert_eq!(recs.dishes[0].similarity, 1.0);
        assert!(recs.dishes[0].missing_items.is_empty());
        for r in &recs.dishes {
            assert!(s.state().is_subcategory_active(r.subcategory()));
        }

        let c = item(&e, "c");
        assert_eq!(
            s.select_dish("d1", "2", &[c]),
            Err(SessionError::DishMismatch { dish: "d1".into(), recipe: "2".into() })
        );
        assert_eq!(s.select_dish("d2", "2", &[item(&e, "a")]), Err(SessionError::AlreadyInBasket(item(&e, "a"))));
        assert_eq!(s.select_dish("d2", "2", &[item(&e, "x")]), Err(SessionError::NotInRecipe(item(&e, "x"))));
        assert_eq!(s.select_dish("d2", "2", &[c, c]), Err(SessionError::DuplicateAccepted(c)));
        assert_eq!(s.select_dish("d2", "nope", &[]), Err(SessionError::UnknownRecipe("nope".into())));
        let before = s.state().clone();
        assert!(!s.select_dish("d2", "2", &[]).unwrap().changed);
        assert_eq!(s.state(), &before);
        let r = s.select_dish("d2", "2", &[c]).unwrap();
        assert_eq!(r.items, vec![c]);
        assert!(s.state().contains(c));
    }
}
