//! Corpus statistics: per-category occurrence matrices, supports, category
//! identifiers, conditional probabilities, differentiator scores and ranks.
//!
//! Everything here is computed once per corpus and is read-only afterwards.

use std::cmp::Ordering;

use thiserror::Error;

use crate::corpus::{CategoryId, Corpus, ItemId};
use crate::exec::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("unknown category {0:?}")]
    UnknownCategory(CategoryId),
    #[error("category {0:?} has no recipes")]
    EmptyCategory(CategoryId),
    #[error("subcategory {subcategory} of category {category:?} has no recipes")]
    EmptySubcategory { category: CategoryId, subcategory: usize },
    #[error("identifier count k must be at least 1")]
    ZeroIdentifiers,
}

/// Metadata of one matrix row. Rows are recipes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMeta {
    pub recipe_id: String,
    pub subcategory: usize,
    pub dish: usize,
}

/// Sparse binary recipe × item matrix of one category, stored row-compressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceMatrix {
    category: CategoryId,
    subcategory_count: usize,
    column_count: usize,
    rows: Vec<RowMeta>,
    offsets: Vec<usize>,
    indices: Vec<ItemId>,
}

impl OccurrenceMatrix {
    pub fn category(&self) -> CategoryId {
        self.category
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    pub fn subcategory_count(&self) -> usize {
        self.subcategory_count
    }

    pub fn rows(&self) -> &[RowMeta] {
        &self.rows
    }

    /// Items present in row `i`, ascending.
    pub fn row(&self, i: usize) -> &[ItemId] {
        &self.indices[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn entry(&self, i: usize, item: ItemId) -> bool {
        self.row(i).binary_search(&item).is_ok()
    }

    pub fn column_sum(&self, item: ItemId) -> usize {
        (0..self.row_count()).filter(|&i| self.entry(i, item)).count()
    }

    /// Column sums for every vocabulary item in a single pass.
    pub fn column_sums(&self) -> Vec<u32> {
        let mut sums = vec![0u32; self.column_count];
        for item in &self.indices {
            sums[item.index()] += 1;
        }
        sums
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

/// Builds `M_c` for one category; rows follow file order.
pub fn build_matrix(corpus: &Corpus, category: CategoryId) -> Result<OccurrenceMatrix, StatsError> {
    let cat = corpus.category(category).ok_or(StatsError::UnknownCategory(category))?;
    let mut rows = Vec::with_capacity(cat.recipe_count());
    let mut offsets = vec![0];
    let mut indices = Vec::new();
    for (si, sub) in cat.subcategories.iter().enumerate() {
        for (di, dish) in sub.dishes.iter().enumerate() {
            for recipe in &dish.recipes {
                rows.push(RowMeta { recipe_id: recipe.id.clone(), subcategory: si, dish: di });
                indices.extend_from_slice(&recipe.items);
                offsets.push(indices.len());
            }
        }
    }
    Ok(OccurrenceMatrix {
        category,
        subcategory_count: cat.subcategories.len(),
        column_count: corpus.vocabulary().len(),
        rows,
        offsets,
        indices,
    })
}

/// Fraction of the matrix rows containing `item`. Zero for an empty matrix.
pub fn support(matrix: &OccurrenceMatrix, item: ItemId) -> f64 {
    if matrix.row_count() == 0 {
        return 0.0;
    }
    matrix.column_sum(item) as f64 / matrix.row_count() as f64
}

/// Support of every item over all recipes of all categories stacked.
pub fn global_support(corpus: &Corpus) -> Vec<f64> {
    let mut counts = vec![0u32; corpus.vocabulary().len()];
    let mut rows = 0usize;
    for (_, recipe) in corpus.recipes() {
        rows += 1;
        for item in &recipe.items {
            counts[item.index()] += 1;
        }
    }
    ratios(&counts, rows)
}

fn ratios(counts: &[u32], rows: usize) -> Vec<f64> {
    if rows == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / rows as f64).collect()
}

/// Item ids ordered by descending value, ties by vocabulary order.
fn descending_order(values: &[f64]) -> Vec<ItemId> {
    let mut order: Vec<ItemId> = (0..values.len() as u32).map(ItemId).collect();
    order.sort_by(|a, b| desc_then_index(values[a.index()], values[b.index()], *a, *b));
    order
}

fn desc_then_index(x: f64, y: f64, a: ItemId, b: ItemId) -> Ordering {
    y.total_cmp(&x).then(a.cmp(&b))
}

/// The `h` items with the highest global support.
pub fn global_exclusion(global_support: &[f64], h: usize) -> Vec<ItemId> {
    descending_order(global_support).into_iter().take(h).collect()
}

/// The identifier set `F_c` of a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentifierSet {
    pub category: CategoryId,
    /// Descending support.
    pub identifiers: Vec<ItemId>,
    pub requested: usize,
}

impl IdentifierSet {
    /// Fewer eligible items than requested.
    pub fn is_short(&self) -> bool {
        self.identifiers.len() < self.requested
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.identifiers.contains(&item)
    }
}

fn select_identifiers(
    category: CategoryId,
    order: &[ItemId],
    support: &[f64],
    excluded: &[ItemId],
    k: usize,
) -> IdentifierSet {
    let identifiers =
        order.iter().copied().filter(|item| support[item.index()] > 0.0 && !excluded.contains(item)).take(k).collect();
    IdentifierSet { category, identifiers, requested: k }
}

/// Top-`k` support items of `category` after dropping the `h` globally most
/// common items. Items absent from the category are never identifiers.
pub fn category_identifiers(
    corpus: &Corpus,
    category: CategoryId,
    k: usize,
    h: usize,
) -> Result<IdentifierSet, StatsError> {
    if k == 0 {
        return Err(StatsError::ZeroIdentifiers);
    }
    let matrix = build_matrix(corpus, category)?;
    if matrix.row_count() == 0 {
        return Err(StatsError::EmptyCategory(category));
    }
    let support = ratios(&matrix.column_sums(), matrix.row_count());
    let excluded = global_exclusion(&global_support(corpus), h);
    Ok(select_identifiers(category, &descending_order(&support), &support, &excluded, k))
}

/// Dense subcategory × item table of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ProbTable {
    pub fn subcategory_count(&self) -> usize {
        self.rows
    }

    pub fn item_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, subcategory: usize, item: ItemId) -> f64 {
        self.values[subcategory * self.cols + item.index()]
    }

    pub fn row(&self, subcategory: usize) -> &[f64] {
        &self.values[subcategory * self.cols..(subcategory + 1) * self.cols]
    }
}

/// `P(r | s)` for every subcategory and item, with the counts behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    probs: ProbTable,
    counts: Vec<u32>,
    row_counts: Vec<usize>,
}

impl ConditionalTable {
    /// `counts` is subcategory-major; `row_counts[s]` is the number of recipes of `s`.
    pub fn from_counts(counts: Vec<u32>, row_counts: Vec<usize>, category: CategoryId) -> Result<Self, StatsError> {
        let rows = row_counts.len();
        let cols = counts.len().checked_div(rows).unwrap_or(0);
        assert_eq!(rows * cols, counts.len(), "counts must be subcategory-major");
        if let Some(empty) = row_counts.iter().position(|&n| n == 0) {
            return Err(StatsError::EmptySubcategory { category, subcategory: empty });
        }
        let values = counts.iter().enumerate().map(|(idx, &c)| c as f64 / row_counts[idx / cols] as f64).collect();
        Ok(ConditionalTable { probs: ProbTable { rows, cols, values }, counts, row_counts })
    }

    pub fn get(&self, subcategory: usize, item: ItemId) -> f64 {
        self.probs.get(subcategory, item)
    }

    pub fn probs(&self) -> &ProbTable {
        &self.probs
    }

    /// Recipes of `subcategory` containing `item`.
    pub fn count(&self, subcategory: usize, item: ItemId) -> u32 {
        self.counts[subcategory * self.probs.cols + item.index()]
    }

    pub fn rows_in(&self, subcategory: usize) -> usize {
        self.row_counts[subcategory]
    }
}

/// `P(r | s)`: the fraction of subcategory `s`'s recipes that contain `r`.
pub fn conditional_probabilities(matrix: &OccurrenceMatrix) -> Result<ConditionalTable, StatsError> {
    let (rows, cols) = (matrix.subcategory_count(), matrix.column_count());
    let mut counts = vec![0u32; rows * cols];
    let mut row_counts = vec![0usize; rows];
    for (i, meta) in matrix.rows().iter().enumerate() {
        row_counts[meta.subcategory] += 1;
        for item in matrix.row(i) {
            counts[meta.subcategory * cols + item.index()] += 1;
        }
    }
    ConditionalTable::from_counts(counts, row_counts, matrix.category())
}

/// Largest common denominator for which `numerator / denominator` stays exact in f64.
const EXACT_DENOMINATOR_LIMIT: i128 = 1 << 53;

fn common_denominator(row_counts: &[usize]) -> Option<i128> {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut l: i128 = 1;
    for &n in row_counts {
        let n = n as i128;
        l = (l / gcd(l, n)).checked_mul(n)?;
        if l > EXACT_DENOMINATOR_LIMIT {
            return None;
        }
    }
    Some(l)
}

/// `p_rs = P(r|s) − Σ_{s'≠s} P(r|s')`.
///
/// Evaluated over the common denominator of the subcategory sizes, so equal
/// differences always produce identical floats and rank ties are real ties.
pub fn differentiator_scores(cond: &ConditionalTable) -> ProbTable {
    let (rows, cols) = (cond.probs.rows, cond.probs.cols);
    let mut values = vec![0.0; rows * cols];
    match common_denominator(&cond.row_counts) {
        Some(l) => {
            let scale: Vec<i128> = cond.row_counts.iter().map(|&n| l / n as i128).collect();
            for r in 0..cols {
                let total: i128 = (0..rows).map(|t| cond.counts[t * cols + r] as i128 * scale[t]).sum();
                for s in 0..rows {
                    let own = cond.counts[s * cols + r] as i128 * scale[s];
                    values[s * cols + r] = (2 * own - total) as f64 / l as f64;
                }
            }
        }
        None => {
            let p = &cond.probs.values;
            for s in 0..rows {
                for r in 0..cols {
                    let others: f64 = (0..rows).filter(|&t| t != s).map(|t| p[t * cols + r]).sum();
                    values[s * cols + r] = p[s * cols + r] - others;
                }
            }
        }
    }
    ProbTable { rows, cols, values }
}

/// Per-subcategory ranking of every item by descending `p_rs` (1 = best).
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    cols: usize,
    ranks: Vec<u32>,
    /// Items of each row in rank order.
    order: Vec<ItemId>,
    scores: ProbTable,
}

impl RankTable {
    pub fn subcategory_count(&self) -> usize {
        self.scores.rows
    }

    pub fn rank(&self, subcategory: usize, item: ItemId) -> u32 {
        self.ranks[subcategory * self.cols + item.index()]
    }

    pub fn ranks(&self, subcategory: usize) -> &[u32] {
        &self.ranks[subcategory * self.cols..(subcategory + 1) * self.cols]
    }

    /// Items of a subcategory from rank 1 downwards.
    pub fn ranked_items(&self, subcategory: usize) -> &[ItemId] {
        &self.order[subcategory * self.cols..(subcategory + 1) * self.cols]
    }

    /// The raw `p_rs` values the ranks were derived from.
    pub fn scores(&self) -> &ProbTable {
        &self.scores
    }
}

/// Ranks each row of `scores`; ties go to the lower vocabulary index.
pub fn rank_table(scores: &ProbTable) -> RankTable {
    let cols = scores.cols;
    let mut ranks = vec![0u32; scores.rows * cols];
    let mut order = Vec::with_capacity(scores.rows * cols);
    for s in 0..scores.rows {
        let row_order = descending_order(scores.row(s));
        for (pos, item) in row_order.iter().enumerate() {
            ranks[s * cols + item.index()] = pos as u32 + 1;
        }
        order.extend(row_order);
    }
    RankTable { cols, ranks, order, scores: scores.clone() }
}

/// Everything precomputed for one category.
#[derive(Debug, Clone)]
pub struct CategoryStats {
    pub matrix: OccurrenceMatrix,
    pub support: Vec<f64>,
    pub conditional: ConditionalTable,
    pub ranks: RankTable,
    support_order: Vec<ItemId>,
    relevant: Vec<bool>,
}

impl CategoryStats {
    fn compute(corpus: &Corpus, category: CategoryId) -> Result<Self, StatsError> {
        let matrix = build_matrix(corpus, category)?;
        if matrix.row_count() == 0 {
            return Err(StatsError::EmptyCategory(category));
        }
        let sums = matrix.column_sums();
        let support = ratios(&sums, matrix.row_count());
        let conditional = conditional_probabilities(&matrix)?;
        let ranks = rank_table(&differentiator_scores(&conditional));
        Ok(CategoryStats {
            support_order: descending_order(&support),
            relevant: sums.iter().map(|&c| c > 0).collect(),
            matrix,
            support,
            conditional,
            ranks,
        })
    }

    pub fn differentiators(&self) -> &ProbTable {
        self.ranks.scores()
    }

    /// Items in descending support order.
    pub fn support_order(&self) -> &[ItemId] {
        &self.support_order
    }

    /// The item occurs in at least one recipe of this category.
    #[inline]
    pub fn is_relevant(&self, item: ItemId) -> bool {
        self.relevant[item.index()]
    }
}

/// Statistics for a whole corpus.
#[derive(Debug, Clone)]
pub struct Stats {
    categories: Vec<CategoryStats>,
    global_support: Vec<f64>,
    global_order: Vec<ItemId>,
}

impl Stats {
    pub fn build(corpus: &Corpus) -> Result<Self, StatsError> {
        Self::build_with(corpus, Execution::default())
    }

    /// Builds with an explicit execution strategy; results do not depend on it.
    pub fn build_with(corpus: &Corpus, execution: Execution) -> Result<Self, StatsError> {
        let ids: Vec<CategoryId> = (0..corpus.categories().len()).map(CategoryId).collect();
        let categories = exec::map(execution, &ids, |&c| CategoryStats::compute(corpus, c))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let global_support = global_support(corpus);
        Ok(Stats { global_order: descending_order(&global_support), categories, global_support })
    }

    pub fn categories(&self) -> &[CategoryStats] {
        &self.categories
    }

    pub fn category(&self, id: CategoryId) -> &CategoryStats {
        &self.categories[id.0]
    }

    pub fn global_support(&self) -> &[f64] {
        &self.global_support
    }

    /// The `h` most common items across the whole corpus.
    pub fn exclusion(&self, h: usize) -> &[ItemId] {
        &self.global_order[..h.min(self.global_order.len())]
    }

    pub fn identifiers(&self, category: CategoryId, k: usize, h: usize) -> IdentifierSet {
        let cat = &self.categories[category.0];
        select_identifiers(category, &cat.support_order, &cat.support, self.exclusion(h), k)
    }

    pub fn all_identifiers(&self, k: usize, h: usize) -> Vec<IdentifierSet> {
        (0..self.categories.len()).map(|c| self.identifiers(CategoryId(c), k, h)).collect()
    }
}
