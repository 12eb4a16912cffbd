//! Line-oriented session scripts and their deterministic JSON transcripts.
//!
//! ```text
//! # comment
//! add <item>
//! remove <item>
//! select <dish> <recipe-id> <item,item,...>
//! recommend
//! ```
//!
//! Item and dish names may contain spaces. In a `select` line the recipe id
//! is the first word that names a recipe of the preceding dish.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{normalize_item_name, Corpus, ItemId};
use crate::session::{ConfigError, Session, SessionConfig};
use crate::view::{describe_error, EventView, RecommendationsView, StateView};
use crate::Engine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ReplayError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionEvent {
    Add(ItemId),
    Remove(ItemId),
    Select { dish: String, recipe_id: String, items: Vec<ItemId> },
    Recommend,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub text: String,
    pub event: SessionEvent,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayScript {
    pub lines: Vec<ScriptLine>,
}

impl ReplayScript {
    /// Parses a script, resolving every name against `corpus`.
    pub fn parse(text: &str, corpus: &Corpus) -> Result<Self, ReplayError> {
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| ReplayError { line, message };
            let (verb, rest) = match trimmed.split_once(char::is_whitespace) {
                Some((v, r)) => (v, r.trim()),
                None => (trimmed, ""),
            };
            let event = match verb {
                "add" => SessionEvent::Add(resolve_item(corpus, rest).map_err(err)?),
                "remove" => SessionEvent::Remove(resolve_item(corpus, rest).map_err(err)?),
                "recommend" if rest.is_empty() => SessionEvent::Recommend,
                "recommend" => return Err(err("recommend takes no arguments".into())),
                "select" => parse_select(corpus, rest).map_err(err)?,
                other => return Err(err(format!("unknown command {other:?}"))),
            };
            lines.push(ScriptLine { line, text: trimmed.to_owned(), event });
        }
        Ok(ReplayScript { lines })
    }
}

fn resolve_item(corpus: &Corpus, raw: &str) -> Result<ItemId, String> {
    let name = normalize_item_name(raw).map_err(|_| "missing item name".to_owned())?;
    corpus.vocabulary().id(&name).ok_or_else(|| unknown_item_message(corpus, &name))
}

/// Error text for an unresolvable item, with exact-prefix suggestions.
pub fn unknown_item_message(corpus: &Corpus, name: &str) -> String {
    let suggestions = corpus.vocabulary().prefix_matches(name);
    if suggestions.is_empty() {
        format!("unknown item {name:?}")
    } else {
        format!("unknown item {name:?}; did you mean {}", suggestions.join(", "))
    }
}

fn parse_select(corpus: &Corpus, rest: &str) -> Result<SessionEvent, String> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    for i in 1..words.len() {
        let Some(loc) = corpus.locate_recipe(words[i]) else { continue };
        let dish = words[..i].join(" ");
        if corpus.dish_at(loc).name != dish {
            continue;
        }
        let list = words[i + 1..].join(" ");
        let items = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| resolve_item(corpus, s))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(SessionEvent::Select { dish, recipe_id: words[i].to_owned(), items });
    }
    Err("select expects <dish> <recipe-id> <item,item,...> naming a recipe of that dish".into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub line: usize,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<EventView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recommendations: Option<RecommendationsView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub state: StateView,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub config: SessionConfig,
    pub initial: StateView,
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("transcript serializes");
        out.push('\n');
        out
    }
}

/// Runs a script against a fresh session. Session errors (for example
/// removing an item that is not in the basket) are recorded in the step
/// and the replay continues.
pub fn replay(engine: Arc<Engine>, config: SessionConfig, script: &ReplayScript) -> Result<Transcript, ConfigError> {
    let mut session = Session::new(engine.clone(), config)?;
    let corpus = engine.corpus();
    let initial = StateView::of(&session);
    let mut steps = Vec::with_capacity(script.lines.len());
    for line in &script.lines {
        let mut step = Step {
            line: line.line,
            command: line.text.clone(),
            event: None,
            recommendations: None,
            error: None,
            state: initial.clone(),
        };
        let outcome = match &line.event {
            SessionEvent::Add(item) => session.add_item(*item).map(Some),
            SessionEvent::Remove(item) => session.remove_item(*item).map(Some),
            SessionEvent::Select { dish, recipe_id, items } => session.select_dish(dish, recipe_id, items).map(Some),
            SessionEvent::Recommend => {
                step.recommendations = Some(RecommendationsView::of(corpus, &session.recommend()));
                Ok(None)
            }
        };
        match outcome {
            Ok(report) => step.event = report.map(|r| EventView::of(corpus, &r)),
            Err(e) => step.error = Some(describe_error(corpus, &e)),
        }
        step.state = StateView::of(&session);
        steps.push(step);
    }
    Ok(Transcript { config, initial, steps })
}
