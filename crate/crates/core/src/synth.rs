//! Seeded synthetic corpora for tests and benchmarks.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::corpus::{CategoryFile, Corpus, CorpusFile, DishFile, RecipeFile, SubcategoryFile};

/// Shape of a structured synthetic corpus. Every subcategory gets its own
/// signature items (strong differentiators), every category its staples
/// (identifier candidates) and a pool of filler items; `salt` is in every
/// recipe.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticShape {
    pub categories: usize,
    pub subcategories: usize,
    pub dishes: usize,
    pub recipes_per_dish: usize,
    pub signature_items: usize,
    pub staples: usize,
    pub filler_pool: usize,
    pub filler_per_recipe: usize,
    pub seed: u64,
}

impl SyntheticShape {
    /// 20 categories × 5 subcategories × 20 dishes × 5 recipes = 10,000 recipes.
    pub fn large() -> Self {
        SyntheticShape {
            categories: 20,
            subcategories: 5,
            dishes: 20,
            recipes_per_dish: 5,
            signature_items: 8,
            staples: 4,
            filler_pool: 30,
            filler_per_recipe: 3,
            seed: 7,
        }
    }

    pub fn recipe_count(&self) -> usize {
        self.categories * self.subcategories * self.dishes * self.recipes_per_dish
    }

    pub fn generate(&self) -> CorpusFile {
        let mut rng = StdRng::seed_from_u64(self.seed);
        let categories = (0..self.categories)
            .map(|c| CategoryFile {
                name: format!("category-{c}"),
                subcategories: (0..self.subcategories)
                    .map(|s| SubcategoryFile {
                        name: format!("c{c}-sub-{s}"),
                        dishes: (0..self.dishes)
                            .map(|d| DishFile {
                                name: format!("c{c}-s{s}-dish-{d}"),
                                recipes: (0..self.recipes_per_dish)
                                    .map(|r| RecipeFile {
                                        id: format!("c{c}-s{s}-d{d}-r{r}"),
                                        items: self.recipe_items(&mut rng, c, s),
                                    })
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        CorpusFile { categories }
    }

    fn recipe_items(&self, rng: &mut StdRng, c: usize, s: usize) -> Vec<String> {
        let mut items = vec!["salt".to_owned()];
        for i in 0..self.staples {
            if rng.gen_bool(0.85 - 0.1 * i as f64 / self.staples.max(1) as f64) {
                items.push(format!("c{c}-staple-{i}"));
            }
        }
        for j in 0..self.signature_items {
            let p = (1.0 - 0.08 * j as f64).max(0.05);
            if rng.gen_bool(p) {
                items.push(format!("c{c}-s{s}-sig-{j}"));
            }
        }
        let pool: Vec<usize> = (0..self.filler_pool).collect();
        for &f in pool.choose_multiple(rng, self.filler_per_recipe.min(self.filler_pool)) {
            items.push(format!("c{c}-filler-{f}"));
        }
        if rng.gen_bool(0.5) {
            items.push("oil".to_owned());
        }
        items
    }

    pub fn corpus(&self) -> Corpus {
        Corpus::from_file_model(self.generate()).expect("synthetic corpus is valid")
    }
}

/// Bounds for [`random_corpus`].
#[derive(Debug, Clone, Copy)]
pub struct RandomLimits {
    pub max_categories: usize,
    pub max_subcategories: usize,
    pub max_dishes: usize,
    pub max_recipes_per_dish: usize,
    pub max_items: usize,
}

impl Default for RandomLimits {
    fn default() -> Self {
        RandomLimits { max_categories: 5, max_subcategories: 4, max_dishes: 3, max_recipes_per_dish: 6, max_items: 30 }
    }
}

/// Small unstructured corpus: recipes are random nonempty subsets of a
/// vocabulary of at most `max_items` names.
pub fn random_corpus(rng: &mut impl Rng, limits: &RandomLimits) -> CorpusFile {
    let vocab_size = rng.gen_range(1..=limits.max_items);
    let mut next_id = 0usize;
    let categories = (0..rng.gen_range(1..=limits.max_categories))
        .map(|c| CategoryFile {
            name: format!("cat{c}"),
            subcategories: (0..rng.gen_range(1..=limits.max_subcategories))
                .map(|s| SubcategoryFile {
                    name: format!("sub{s}"),
                    dishes: (0..rng.gen_range(1..=limits.max_dishes))
                        .map(|d| DishFile {
                            name: format!("dish{d}"),
                            recipes: (0..rng.gen_range(1..=limits.max_recipes_per_dish))
                                .map(|_| {
                                    next_id += 1;
                                    let len = rng.gen_range(1..=vocab_size.min(8));
                                    let mut pool: Vec<usize> = (0..vocab_size).collect();
                                    pool.shuffle(rng);
                                    RecipeFile {
                                        id: format!("r{next_id}"),
                                        items: pool[..len].iter().map(|i| format!("item {i}")).collect(),
                                    }
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    CorpusFile { categories }
}
