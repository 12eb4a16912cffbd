//! Recipe corpus: the category → subcategory → dish → recipe hierarchy and
//! the interned item vocabulary shared by every recipe.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense index of an item in the corpus vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a category in corpus order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CategoryId(pub usize);

/// A subcategory, addressed by its category and its position inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubcategoryId {
    pub category: CategoryId,
    pub index: usize,
}

/// Position of a recipe inside the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecipeLoc {
    pub category: usize,
    pub subcategory: usize,
    pub dish: usize,
    pub recipe: usize,
}

impl RecipeLoc {
    pub fn subcategory_id(&self) -> SubcategoryId {
        SubcategoryId { category: CategoryId(self.category), index: self.subcategory }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Category,
    Subcategory,
    Dish,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Category => "category",
            Level::Subcategory => "subcategory",
            Level::Dish => "dish",
        })
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed corpus file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("{path}: duplicate {level} name {name:?}")]
    DuplicateName { level: Level, path: String, name: String },
    #[error("{path}: recipe id {id:?} already used by {first}")]
    DuplicateRecipeId { path: String, id: String, first: String },
    #[error("{path}: recipe has no items")]
    EmptyRecipe { path: String },
    #[error("{path}: empty item name")]
    EmptyItemName { path: String },
    #[error("{path}: no {what}")]
    Empty { path: String, what: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("item name is empty after normalization")]
pub struct EmptyItemName;

/// Lowercases, trims and collapses internal whitespace runs to one space.
pub fn normalize_item_name(raw: &str) -> Result<String, EmptyItemName> {
    let mut out = String::with_capacity(raw.len());
    for word in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    if out.is_empty() {
        Err(EmptyItemName)
    } else {
        Ok(out)
    }
}

/// The global item vocabulary, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, ItemId>,
}

impl Vocabulary {
    fn intern(&mut self, name: String) -> ItemId {
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = ItemId(self.names.len() as u32);
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ItemId) -> &str {
        &self.names[id.index()]
    }

    pub fn get(&self, id: ItemId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    /// Looks up an already normalized name.
    pub fn id(&self, name: &str) -> Option<ItemId> {
        self.index.get(name).copied()
    }

    /// Normalizes `raw` before looking it up.
    pub fn resolve(&self, raw: &str) -> Option<ItemId> {
        normalize_item_name(raw).ok().and_then(|n| self.id(&n))
    }

    /// Vocabulary entries starting with the normalized `prefix`, in vocabulary order.
    pub fn prefix_matches(&self, prefix: &str) -> Vec<&str> {
        let prefix = match normalize_item_name(prefix) {
            Ok(p) => p,
            Err(_) => return Vec::new(),
        };
        self.names.iter().filter(|n| n.starts_with(&prefix)).map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (ItemId(i as u32), n.as_str()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub id: String,
    /// Sorted ascending, no duplicates.
    pub items: Vec<ItemId>,
}

impl Recipe {
    pub fn contains(&self, item: ItemId) -> bool {
        self.items.binary_search(&item).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dish {
    pub name: String,
    pub recipes: Vec<Recipe>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcategory {
    pub name: String,
    pub dishes: Vec<Dish>,
}

impl Subcategory {
    pub fn recipes(&self) -> impl Iterator<Item = &Recipe> {
        self.dishes.iter().flat_map(|d| d.recipes.iter())
    }

    pub fn recipe_count(&self) -> usize {
        self.dishes.iter().map(|d| d.recipes.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub subcategories: Vec<Subcategory>,
}

impl Category {
    pub fn recipe_count(&self) -> usize {
        self.subcategories.iter().map(Subcategory::recipe_count).sum()
    }
}

/// A validated corpus. Immutable after load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    categories: Vec<Category>,
    vocabulary: Vocabulary,
    recipes_by_id: HashMap<String, RecipeLoc>,
}

impl Corpus {
    pub fn from_reader(source: impl Read) -> Result<Self, CorpusError> {
        let file: CorpusFile = serde_json::from_reader(source)?;
        Self::from_file_model(file)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, CorpusError> {
        let file: CorpusFile = serde_json::from_slice(bytes)?;
        Self::from_file_model(file)
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let file = File::open(path)?;
        Self::from_reader(BufReader::new(file))
    }

    /// Validates a parsed file and interns its items.
    pub fn from_file_model(file: CorpusFile) -> Result<Self, CorpusError> {
        let mut vocabulary = Vocabulary::default();
        let mut recipes_by_id: HashMap<String, RecipeLoc> = HashMap::new();
        let mut first_paths: HashMap<String, String> = HashMap::new();
        let mut categories = Vec::with_capacity(file.categories.len());

        check_unique(file.categories.iter().map(|c| c.name.as_str()), Level::Category, "")?;
        for (ci, cat) in file.categories.into_iter().enumerate() {
            let cat_path = cat.name.clone();
            if cat.subcategories.is_empty() {
                return Err(CorpusError::Empty { path: cat_path, what: "subcategories" });
            }
            check_unique(cat.subcategories.iter().map(|s| s.name.as_str()), Level::Subcategory, &cat_path)?;
            let mut subcategories = Vec::with_capacity(cat.subcategories.len());
            for (si, sub) in cat.subcategories.into_iter().enumerate() {
                let sub_path = format!("{cat_path}/{}", sub.name);
                if sub.dishes.is_empty() {
                    return Err(CorpusError::Empty { path: sub_path, what: "dishes" });
                }
                check_unique(sub.dishes.iter().map(|d| d.name.as_str()), Level::Dish, &sub_path)?;
                let mut dishes = Vec::with_capacity(sub.dishes.len());
                for (di, dish) in sub.dishes.into_iter().enumerate() {
                    let dish_path = format!("{sub_path}/{}", dish.name);
                    if dish.recipes.is_empty() {
                        return Err(CorpusError::Empty { path: dish_path, what: "recipes" });
                    }
                    let mut recipes = Vec::with_capacity(dish.recipes.len());
                    for (ri, recipe) in dish.recipes.into_iter().enumerate() {
                        let recipe_path = format!("{dish_path}/{}", recipe.id);
                        if recipe.items.is_empty() {
                            return Err(CorpusError::EmptyRecipe { path: recipe_path });
                        }
                        let loc = RecipeLoc { category: ci, subcategory: si, dish: di, recipe: ri };
                        if let Some(first) = first_paths.get(&recipe.id) {
                            let first = first.clone();
                            return Err(CorpusError::DuplicateRecipeId { path: recipe_path, id: recipe.id, first });
                        }
                        let mut items = Vec::with_capacity(recipe.items.len());
                        for raw in &recipe.items {
                            let name = normalize_item_name(raw)
                                .map_err(|_| CorpusError::EmptyItemName { path: recipe_path.clone() })?;
                            items.push(vocabulary.intern(name));
                        }
                        items.sort_unstable();
                        items.dedup();
                        recipes_by_id.insert(recipe.id.clone(), loc);
                        first_paths.insert(recipe.id.clone(), recipe_path);
                        recipes.push(Recipe { id: recipe.id, items });
                    }
                    dishes.push(Dish { name: dish.name, recipes });
                }
                subcategories.push(Subcategory { name: sub.name, dishes });
            }
            categories.push(Category { name: cat.name, subcategories });
        }
        Ok(Corpus { categories, vocabulary, recipes_by_id })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, id: CategoryId) -> Option<&Category> {
        self.categories.get(id.0)
    }

    pub fn category_id(&self, name: &str) -> Option<CategoryId> {
        self.categories.iter().position(|c| c.name == name).map(CategoryId)
    }

    pub fn subcategory(&self, id: SubcategoryId) -> Option<&Subcategory> {
        self.category(id.category).and_then(|c| c.subcategories.get(id.index))
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn recipe_count(&self) -> usize {
        self.categories.iter().map(Category::recipe_count).sum()
    }

    pub fn locate_recipe(&self, id: &str) -> Option<RecipeLoc> {
        self.recipes_by_id.get(id).copied()
    }

    pub fn recipe_at(&self, loc: RecipeLoc) -> &Recipe {
        &self.categories[loc.category].subcategories[loc.subcategory].dishes[loc.dish].recipes[loc.recipe]
    }

    pub fn dish_at(&self, loc: RecipeLoc) -> &Dish {
        &self.categories[loc.category].subcategories[loc.subcategory].dishes[loc.dish]
    }

    /// Every recipe in depth-first file order, with its location.
    pub fn recipes(&self) -> impl Iterator<Item = (RecipeLoc, &Recipe)> {
        self.categories.iter().enumerate().flat_map(|(ci, c)| {
            c.subcategories.iter().enumerate().flat_map(move |(si, s)| {
                s.dishes.iter().enumerate().flat_map(move |(di, d)| {
                    d.recipes
                        .iter()
                        .enumerate()
                        .map(move |(ri, r)| (RecipeLoc { category: ci, subcategory: si, dish: di, recipe: ri }, r))
                })
            })
        })
    }

    /// Non-fatal authoring problems.
    pub fn warnings(&self) -> Vec<String> {
        self.categories
            .iter()
            .filter(|c| c.subcategories.len() < 2)
            .map(|c| format!("{}: only one subcategory, nothing to differentiate", c.name))
            .collect()
    }

    /// The file model this corpus serializes to. Items are written as names.
    pub fn to_file_model(&self) -> CorpusFile {
        CorpusFile {
            categories: self
                .categories
                .iter()
                .map(|c| CategoryFile {
                    name: c.name.clone(),
                    subcategories: c
                        .subcategories
                        .iter()
                        .map(|s| SubcategoryFile {
                            name: s.name.clone(),
                            dishes: s
                                .dishes
                                .iter()
                                .map(|d| DishFile {
                                    name: d.name.clone(),
                                    recipes: d
                                        .recipes
                                        .iter()
                                        .map(|r| RecipeFile {
                                            id: r.id.clone(),
                                            items: r
                                                .items
                                                .iter()
                                                .map(|&i| self.vocabulary.name(i).to_owned())
                                                .collect(),
                                        })
                                        .collect(),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_model()).expect("corpus model serializes")
    }
}

/// Parses and validates a corpus file.
pub fn load_corpus(source: impl Read) -> Result<Corpus, CorpusError> {
    Corpus::from_reader(source)
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>, level: Level, parent: &str) -> Result<(), CorpusError> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(CorpusError::DuplicateName { level, path: parent.to_owned(), name: name.to_owned() });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    pub categories: Vec<CategoryFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub name: String,
    pub subcategories: Vec<SubcategoryFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubcategoryFile {
    pub name: String,
    pub dishes: Vec<DishFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DishFile {
    pub name: String,
    pub recipes: Vec<RecipeFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeFile {
    pub id: String,
    pub items: Vec<String>,
}
