use std::collections::BTreeSet;

use basketchef_core::{CategoryId, Engine};

fn value() -> serde_json::Value {
    serde_json::from_str(basketchef_core::BUNDLED_CORPUS).unwrap()
}

fn top(engine: &Engine, category: &str, subcategory: &str, count: usize) -> Vec<(String, f64)> {
    let c = engine.corpus().category_id(category).unwrap();
    let s = engine.corpus().categories()[c.0].subcategories.iter().position(|s| s.name == subcategory).unwrap();
    let ranks = &engine.stats().category(c).ranks;
    ranks
        .ranked_items(s)
        .iter()
        .take(count)
        .map(|&i| (engine.corpus().vocabulary().name(i).to_owned(), ranks.scores().get(s, i)))
        .collect()
}

#[test]
fn vocabulary_is_the_union_of_recipe_items() {
    let mut names = BTreeSet::new();
    let mut recipes = 0;
    for cat in value()["categories"].as_array().unwrap() {
        for sub in cat["subcategories"].as_array().unwrap() {
            for dish in sub["dishes"].as_array().unwrap() {
                for recipe in dish["recipes"].as_array().unwrap() {
                    recipes += 1;
                    for item in recipe["items"].as_array().unwrap() {
                        names.insert(item.as_str().unwrap().trim().to_lowercase());
                    }
                }
            }
        }
    }
    let engine = Engine::bundled();
    assert_eq!(engine.corpus().vocabulary().len(), names.len());
    assert_eq!(engine.corpus().recipe_count(), recipes);
    let rows: usize = engine.stats().categories().iter().map(|cs| cs.matrix.row_count()).sum();
    assert_eq!(rows, recipes);
    assert!(engine.corpus().warnings().is_empty());
}

#[test]
fn rice_and_chicken_identifiers() {
    let engine = Engine::bundled();
    let names = |c: usize| -> Vec<String> {
        let ids = engine.stats().identifiers(CategoryId(c), 5, 1).identifiers;
        ids.iter().map(|&i| engine.corpus().vocabulary().name(i).to_owned()).collect()
    };
    assert_eq!(engine.corpus().categories()[0].name, "rice");
    assert_eq!(names(0), ["long-grain rice", "clove", "cinnamon", "cardamom", "ghee"]);
    assert_eq!(names(1), ["chicken", "chicken breast", "chicken thigh", "chicken boneless", "chicken leg"]);
    let excluded = engine.stats().exclusion(1);
    assert_eq!(engine.corpus().vocabulary().name(excluded[0]), "salt");
}

#[test]
fn top_differentiators_per_subcategory() {
    let engine = Engine::bundled();
    let expect: [(&str, &str, [&str; 5], f64, f64); 5] = [
        ("rice", "biryani", ["kewra water", "mace", "curd", "black peppercorn", "ginger garlic paste"], 1.0, 2.0 / 3.0),
        ("rice", "fried rice", ["dark soya sauce", "garlic", "cabbage", "egg", "carrot"], 1.0, f64::NAN),
        ("rice", "pulao", ["cumin seed", "almond", "cashew nut", "green pea", "coconut"], 1.0, f64::NAN),
        ("chicken", "indian", ["cumin", "coriander powder", "coriander", "cilantro", "chicken"], 0.75, 5.0 / 12.0),
        (
            "chicken",
            "chinese",
            ["dark soya sauce", "corn starch", "chicken breast", "chicken broth", "capsicum"],
            0.75,
            f64::NAN,
        ),
    ];
    for (cat, sub, items, first, fifth) in expect {
        let got = top(&engine, cat, sub, 5);
        let names: Vec<&str> = got.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, items, "{cat}/{sub}");
        assert!((got[0].1 - first).abs() < 1e-12, "{cat}/{sub} top score {}", got[0].1);
        if !fifth.is_nan() {
            assert!((got[4].1 - fifth).abs() < 1e-12, "{cat}/{sub} fifth score {}", got[4].1);
        }
        assert!(got.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}

#[test]
fn dark_soya_sauce_differentiates_in_both_categories() {
    let engine = Engine::bundled();
    let fried = top(&engine, "rice", "fried rice", 1);
    let chinese = top(&engine, "chicken", "chinese", 1);
    assert_eq!(fried[0].0, "dark soya sauce");
    assert_eq!(chinese[0].0, "dark soya sauce");
}
