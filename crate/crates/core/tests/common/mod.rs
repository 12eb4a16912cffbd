//! Brute-force reference computations over the raw corpus file model.
//! Nothing here calls into the library's statistics or session code.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;

use basketchef_core::corpus::CorpusFile;

/// Exact non-normalized fraction with a positive denominator.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den > 0);
        Frac { num, den }
    }

    pub fn zero() -> Self {
        Frac { num: 0, den: 1 }
    }

    pub fn sub(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den - o.num * self.den, self.den * o.den).reduced()
    }

    fn reduced(self) -> Frac {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(self.num, self.den).max(1);
        Frac { num: self.num / g, den: self.den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn cmp(&self, o: &Frac) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

pub fn normalize(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub struct OracleRow {
    pub category: usize,
    pub subcategory: usize,
    pub items: Vec<usize>,
}

/// Statistics recomputed by direct counting.
pub struct Oracle {
    pub vocab: Vec<String>,
    pub rows: Vec<OracleRow>,
    pub subcategory_counts: Vec<usize>,
}

impl Oracle {
    pub fn new(file: &CorpusFile) -> Self {
        let mut vocab: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut rows = Vec::new();
        let mut subcategory_counts = Vec::new();
        for (c, cat) in file.categories.iter().enumerate() {
            subcategory_counts.push(cat.subcategories.len());
            for (s, sub) in cat.subcategories.iter().enumerate() {
                for dish in &sub.dishes {
                    for recipe in &dish.recipes {
                        let mut items = Vec::new();
                        for raw in &recipe.items {
                            let name = normalize(raw);
                            let id = *index.entry(name.clone()).or_insert_with(|| {
                                vocab.push(name);
                                vocab.len() - 1
                            });
                            if !items.contains(&id) {
                                items.push(id);
                            }
                        }
                        rows.push(OracleRow { category: c, subcategory: s, items });
                    }
                }
            }
        }
        Oracle { vocab, rows, subcategory_counts }
    }

    pub fn v(&self) -> usize {
        self.vocab.len()
    }

    pub fn category_count(&self) -> usize {
        self.subcategory_counts.len()
    }

    pub fn support(&self, c: usize, item: usize) -> Frac {
        let rows: Vec<_> = self.rows.iter().filter(|r| r.category == c).collect();
        let hits = rows.iter().filter(|r| r.items.contains(&item)).count();
        Frac::new(hits as i128, rows.len() as i128)
    }

    pub fn global_support(&self, item: usize) -> Frac {
        let hits = self.rows.iter().filter(|r| r.items.contains(&item)).count();
        Frac::new(hits as i128, self.rows.len() as i128)
    }

    fn sorted_desc(&self, value: impl Fn(usize) -> Frac) -> Vec<usize> {
        let mut pairs: Vec<(Frac, usize)> = (0..self.v()).map(|i| (value(i), i)).collect();
        // stable: equal values keep vocabulary order
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        pairs.into_iter().map(|(_, i)| i).collect()
    }

    pub fn exclusion(&self, h: usize) -> Vec<usize> {
        self.sorted_desc(|i| self.global_support(i)).into_iter().take(h).collect()
    }

    pub fn identifiers(&self, c: usize, k: usize, h: usize) -> Vec<usize> {
        let excluded = self.exclusion(h);
        self.sorted_desc(|i| self.support(c, i))
            .into_iter()
            .filter(|i| !excluded.contains(i) && self.support(c, *i).num > 0)
            .take(k)
            .collect()
    }

    pub fn conditional(&self, c: usize, s: usize, item: usize) -> Frac {
        let rows: Vec<_> = self.rows.iter().filter(|r| r.category == c && r.subcategory == s).collect();
        let hits = rows.iter().filter(|r| r.items.contains(&item)).count();
        Frac::new(hits as i128, rows.len() as i128)
    }

    pub fn p_rs(&self, c: usize, s: usize, item: usize) -> Frac {
        let mut p = self.conditional(c, s, item);
        for t in 0..self.subcategory_counts[c] {
            if t != s {
                p = p.sub(self.conditional(c, t, item));
            }
        }
        p
    }

    /// `ranks[item]` for subcategory `s` of category `c`.
    pub fn ranks(&self, c: usize, s: usize) -> Vec<u32> {
        let order = self.sorted_desc(|i| self.p_rs(c, s, i));
        let mut ranks = vec![0; self.v()];
        for (pos, i) in order.into_iter().enumerate() {
            ranks[i] = pos as u32 + 1;
        }
        ranks
    }

    pub fn in_category(&self, c: usize, item: usize) -> bool {
        self.rows.iter().any(|r| r.category == c && r.items.contains(&item))
    }
}

/// Activation state recomputed from a basket of vocabulary indices.
pub struct OracleSession {
    pub active_categories: Vec<bool>,
    /// `None` for inactive categories.
    pub scores: Vec<Option<Vec<f64>>>,
    pub active_subcategories: Vec<Vec<bool>>,
}

pub fn oracle_session(o: &Oracle, basket: &[usize], k: usize, h: usize, q: usize, n: f64, theta: f64) -> OracleSession {
    let mut active_categories = Vec::new();
    let mut scores = Vec::new();
    let mut active_subcategories = Vec::new();
    for c in 0..o.category_count() {
        let ids = o.identifiers(c, k, h);
        let count = basket.iter().filter(|i| ids.contains(i)).count();
        let active = count >= q;
        active_categories.push(active);
        if active {
            let per_sub: Vec<f64> = (0..o.subcategory_counts[c])
                .map(|s| {
                    let ranks = o.ranks(c, s);
                    basket
                        .iter()
                        .filter(|&&i| o.in_category(c, i))
                        .map(|&i| 1.0 / (ranks[i] as f64).powf(1.0 / n))
                        .sum()
                })
                .collect();
            active_subcategories.push(per_sub.iter().map(|&x| x >= theta).collect());
            scores.push(Some(per_sub));
        } else {
            active_subcategories.push(vec![false; o.subcategory_counts[c]]);
            scores.push(None);
        }
    }
    OracleSession { active_categories, scores, active_subcategories }
}
