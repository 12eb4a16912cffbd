//! CSV analysis reports: identifier tables, differentiator tables, the
//! threshold grid and score-increment curves.

use std::io::Write;

use csv::{QuoteStyle, WriterBuilder};

use crate::corpus::CategoryId;
use crate::exec::{self, Execution};
use crate::session::{min_items_within, score_increment};
use crate::Engine;

/// Cells of the threshold grid give up past this basket size.
pub const THRESHOLD_SEARCH_LIMIT: u64 = 100_000_000;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().quote_style(QuoteStyle::NonNumeric).from_writer(w)
}

/// One row per (category, rank, identifier, support).
pub fn write_identifiers<W: Write>(engine: &Engine, k: usize, h: usize, out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(["category", "rank", "item", "score"])?;
    let corpus = engine.corpus();
    for (c, cat) in corpus.categories().iter().enumerate() {
        let set = engine.stats().identifiers(CategoryId(c), k, h);
        let support = &engine.stats().category(CategoryId(c)).support;
        for (rank, &item) in set.identifiers.iter().enumerate() {
            w.write_record([
                cat.name.clone(),
                (rank + 1).to_string(),
                corpus.vocabulary().name(item).to_owned(),
                support[item.index()].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The `top` best differentiators of every subcategory of `category`, with their `p_rs`.
pub fn write_differentiators<W: Write>(engine: &Engine, category: CategoryId, top: usize, out: W) -> csv::Result<()> {
    let mut w = writer(out);
    w.write_record(["category", "subcategory", "rank", "item", "score"])?;
    let corpus = engine.corpus();
    let cat = &corpus.categories()[category.0];
    let ranks = &engine.stats().category(category).ranks;
    for (s, sub) in cat.subcategories.iter().enumerate() {
        for (pos, &item) in ranks.ranked_items(s).iter().take(top).enumerate() {
            w.write_record([
                cat.name.clone(),
                sub.name.clone(),
                (pos + 1).to_string(),
                corpus.vocabulary().name(item).to_owned(),
                ranks.scores().get(s, item).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `grid[t][j]` = minimum top-ranked basket reaching `thetas[t]` with root `ns[j]`.
pub fn threshold_grid(ns: &[f64], thetas: &[f64], execution: Execution) -> Vec<Vec<Option<u64>>> {
    exec::map(execution, thetas, |&theta| {
        ns.iter().map(|&n| min_items_within(n, theta, THRESHOLD_SEARCH_LIMIT)).collect()
    })
}

/// Rows are thresholds, columns are values of `n`.
pub fn write_threshold_table<W: Write>(ns: &[f64], thetas: &[f64], out: W) -> csv::Result<()> {
    let mut w = writer(out);
    let mut header = vec!["theta".to_owned()];
    header.extend(ns.iter().map(|n| format!("n={n}")));
    w.write_record(&header)?;
    for (theta, row) in thetas.iter().zip(threshold_grid(ns, thetas, Execution::default())) {
        let mut record = vec![theta.to_string()];
        record.extend(row.into_iter().map(|cell| cell.map_or_else(|| "NA".to_owned(), |m| m.to_string())));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Score increment `rank^(-1/n)` for ranks `1..=max_rank`, one column per `n`.
pub fn write_score_curve<W: Write>(ns: &[f64], max_rank: u32, out: W) -> csv::Result<()> {
    let mut w = writer(out);
    let mut header = vec!["rank".to_owned()];
    header.extend(ns.iter().map(|n| format!("n={n}")));
    w.write_record(&header)?;
    for rank in 1..=max_rank {
        let mut record = vec![rank.to_string()];
        record.extend(ns.iter().map(|&n| score_increment(rank, n).to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
