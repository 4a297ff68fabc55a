//! Brute-force reference miner and random instances.
//!
//! Everything here is deliberately naive: candidates grow one item at a
//! time and every support is recomputed from scratch with
//! [`support`](crate::seqdb::support). Regular expressions are checked by
//! simulating the syntax tree directly, without any automaton.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::ItemBound;
use crate::engine::Pattern;
use crate::regex::RegexAst;
use crate::seqdb::{support, ItemId, SequenceDatabase};

#[derive(Debug, Clone, Default)]
pub struct OracleConfig {
    /// Longest pattern to consider; `None` means the longest sequence.
    pub max_pattern_length: Option<usize>,
    pub minsup: u32,
    pub min_size: Option<usize>,
    pub items: Vec<ItemBound>,
    pub regex: Option<RegexAst>,
}

/// Parameters of [`random_db`]. Item names are `1..=num_items`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomDbParams {
    pub seed: u64,
    pub num_sequences: usize,
    pub max_len: usize,
    pub num_items: usize,
}

/// All frequent patterns satisfying the declarative predicates of `cfg`,
/// with their supports.
pub fn enumerate_frequent(db: &SequenceDatabase, cfg: &OracleConfig) -> BTreeMap<Pattern, u32> {
    let max_len = cfg.max_pattern_length.unwrap_or(db.max_len());
    let items: Vec<ItemId> = db.dictionary().ids().collect();
    let mut found = BTreeMap::new();
    let mut level: Vec<Vec<ItemId>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &level {
            for &item in &items {
                let mut cand = p.clone();
                cand.push(item);
                let sup = support(db, &cand) as u32;
                if sup >= cfg.minsup {
                    found.insert(Pattern(cand.clone()), sup);
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    found.retain(|p, _| check_pattern(p.items(), cfg, db.num_items()));
    found
}

/// Evaluates the size, item and regex predicates of `cfg` on `pattern`.
pub fn check_pattern(pattern: &[ItemId], cfg: &OracleConfig, num_items: usize) -> bool {
    if cfg.min_size.is_some_and(|n| pattern.len() < n) {
        return false;
    }
    for b in &cfg.items {
        let n = pattern.iter().filter(|&&it| it == b.item).count();
        if n < b.min || b.max.is_some_and(|max| n > max) {
            return false;
        }
    }
    match &cfg.regex {
        Some(ast) => regex_matches(ast, pattern, num_items),
        None => true,
    }
}

/// Whether `word` is in the language of `ast`, by tracking the set of
/// positions reachable after each sub-expression.
pub fn regex_matches(ast: &RegexAst, word: &[ItemId], num_items: usize) -> bool {
    ends(ast, word, num_items, &BTreeSet::from([0])).contains(&word.len())
}

fn ends(
    ast: &RegexAst,
    word: &[ItemId],
    num_items: usize,
    starts: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    match ast {
        RegexAst::Item(t) => starts
            .iter()
            .filter(|&&s| s < word.len() && word[s] == *t)
            .map(|s| s + 1)
            .collect(),
        RegexAst::Any => starts
            .iter()
            .filter(|&&s| s < word.len() && word[s].index() < num_items)
            .map(|s| s + 1)
            .collect(),
        RegexAst::Concat(parts) => parts
            .iter()
            .fold(starts.clone(), |cur, p| ends(p, word, num_items, &cur)),
        RegexAst::Alt(branches) => branches
            .iter()
            .flat_map(|b| ends(b, word, num_items, starts))
            .collect(),
        RegexAst::Optional(inner) => {
            let mut out = starts.clone();
            out.extend(ends(inner, word, num_items, starts));
            out
        }
        RegexAst::Star(inner) => {
            let mut out = starts.clone();
            let mut frontier = starts.clone();
            while !frontier.is_empty() {
                let reached = ends(inner, word, num_items, &frontier);
                frontier = reached.difference(&out).copied().collect();
                out.extend(frontier.iter().copied());
            }
            out
        }
        RegexAst::Plus(inner) => {
            let once = ends(inner, word, num_items, starts);
            ends(&RegexAst::Star(inner.clone()), word, num_items, &once)
        }
    }
}

/// Deterministic random database; sequence lengths are uniform in
/// `1..=max_len` and items uniform over `1..=num_items`.
pub fn random_db(params: RandomDbParams) -> SequenceDatabase {
    assert!(params.num_sequences >= 1 && params.max_len >= 1 && params.num_items >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let seqs: Vec<Vec<String>> = (0..params.num_sequences)
        .map(|_| {
            let len = rng.gen_range(1..=params.max_len);
            (0..len)
                .map(|_| rng.gen_range(1..=params.num_items).to_string())
                .collect()
        })
        .collect();
    SequenceDatabase::from_names(seqs).expect("generated sequences are non-empty")
}

/// A random expression in surface syntax over the items of `db`, nested at
/// most `depth` levels.
pub fn random_regex<R: Rng>(rng: &mut R, db: &SequenceDatabase, depth: u32) -> String {
    let names: Vec<&str> = db
        .dictionary()
        .ids()
        .map(|id| db.dictionary().name(id))
        .collect();
    gen_regex(rng, &names, depth)
}

fn gen_regex<R: Rng>(rng: &mut R, names: &[&str], depth: u32) -> String {
    let leaf = |rng: &mut R| {
        if rng.gen_bool(0.2) {
            ".".to_string()
        } else {
            names.choose(rng).unwrap().to_string()
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..7) {
        0 | 1 => leaf(rng),
        2 | 3 => {
            let n = rng.gen_range(2..=3);
            let parts: Vec<String> = (0..n).map(|_| gen_regex(rng, names, depth - 1)).collect();
            parts.join(" ")
        }
        4 => {
            let n = rng.gen_range(2..=3);
            let parts: Vec<String> = (0..n).map(|_| gen_regex(rng, names, depth - 1)).collect();
            format!("( {} )", parts.join(" | "))
        }
        _ => {
            let op = ["*", "+", "?"].choose(rng).unwrap();
            format!("( {} ) {op}", gen_regex(rng, names, depth - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::is_subsequence;
    use crate::seqdb::tests::{ids, sdb1};

    fn names(db: &SequenceDatabase, found: &BTreeMap<Pattern, u32>) -> BTreeSet<String> {
        found.keys().map(|p| db.format_items(p.items())).collect()
    }

    /// Every distinct subsequence of every database sequence, with support.
    fn full_enumeration(db: &SequenceDatabase, minsup: u32) -> BTreeMap<Pattern, u32> {
        let mut all = BTreeSet::new();
        for (_, s) in db.iter() {
            for mask in 1u32..(1 << s.len()) {
                let sub: Vec<ItemId> = (0..s.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| s[k])
                    .collect();
                all.insert(sub);
            }
        }
        all.into_iter()
            .filter_map(|p| {
                let n = db.iter().filter(|(_, s)| is_subsequence(&p, s)).count() as u32;
                (n >= minsup).then_some((Pattern(p), n))
            })
            .collect()
    }

    #[test]
    fn sdb1_frequent_patterns() {
        let db = sdb1();
        let cfg = OracleConfig {
            minsup: 2,
            ..Default::default()
        };
        let found = enumerate_frequent(&db, &cfg);
        let expected: BTreeSet<String> =
            ["A", "B", "C", "A B", "A C", "B B", "B C", "A B C", "B B C"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        assert_eq!(names(&db, &found), expected);
        assert_eq!(found, full_enumeration(&db, 2));
    }

    #[test]
    fn minsup_above_m_is_empty() {
        let db = sdb1();
        let cfg = OracleConfig {
            minsup: 5,
            ..Default::default()
        };
        assert!(enumerate_frequent(&db, &cfg).is_empty());
    }

    #[test]
    fn item_predicate() {
        let db = sdb1();
        let cfg = OracleConfig {
            minsup: 2,
            items: vec![ItemBound::require(ids(&db, "C")[0])],
            ..Default::default()
        };
        let got = names(&db, &enumerate_frequent(&db, &cfg));
        let want: BTreeSet<String> = ["C", "A C", "B C", "A B C", "B B C"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn check_pattern_examples() {
        let db = sdb1();
        let abc = ids(&db, "A B C");
        let size3 = OracleConfig {
            min_size: Some(3),
            ..Default::default()
        };
        assert!(check_pattern(&abc, &size3, db.num_items()));

        let mut dict = db.dictionary().clone();
        let gene = dict.intern("GENE");
        let needs_gene = OracleConfig {
            items: vec![ItemBound::require(gene)],
            ..Default::default()
        };
        assert!(!check_pattern(&ids(&db, "A C"), &needs_gene, dict.len()));

        let protein = SequenceDatabase::from_names([["S", "A", "R", "T", "K"]]).unwrap();
        let ast = RegexAst::parse("(S|T) . (R|K)", protein.dictionary()).unwrap();
        let re = OracleConfig {
            regex: Some(ast),
            ..Default::default()
        };
        assert!(check_pattern(
            &protein.parse_items("S A R").unwrap(),
            &re,
            protein.num_items()
        ));
        assert!(!check_pattern(
            &protein.parse_items("S R").unwrap(),
            &re,
            protein.num_items()
        ));
    }

    #[test]
    fn ast_matcher_edge_cases() {
        let db = SequenceDatabase::from_names([["A", "B"]]).unwrap();
        let d = db.dictionary();
        let w = |s: &str| db.parse_items(s).unwrap();
        let star = RegexAst::parse("(A?)*", d).unwrap();
        assert!(regex_matches(&star, &[], 2));
        assert!(regex_matches(&star, &w("A A A"), 2));
        let plus = RegexAst::parse("(A B)+", d).unwrap();
        assert!(!regex_matches(&plus, &[], 2));
        assert!(regex_matches(&plus, &w("A B A B"), 2));
        assert!(!regex_matches(&plus, &w("A B A"), 2));
    }

    #[test]
    fn random_db_is_deterministic() {
        let p = RandomDbParams {
            seed: 7,
            num_sequences: 15,
            max_len: 8,
            num_items: 5,
        };
        assert_eq!(random_db(p), random_db(p));
        assert_ne!(random_db(p), random_db(RandomDbParams { seed: 8, ..p }));
        let one = random_db(RandomDbParams {
            num_sequences: 1,
            ..p
        });
        assert_eq!(one.len(), 1);
        let db = random_db(p);
        assert!(db.max_len() <= 8 && db.num_items() <= 5);
    }

    #[test]
    fn oracle_agrees_with_full_enumeration_on_random_dbs() {
        for seed in 0..20 {
            let db = random_db(RandomDbParams {
                seed,
                num_sequences: 6,
                max_len: 6,
                num_items: 3,
            });
            for minsup in 1..=3 {
                let cfg = OracleConfig {
                    minsup,
                    ..Default::default()
                };
                let found = enumerate_frequent(&db, &cfg);
                assert_eq!(
                    found,
                    full_enumeration(&db, minsup),
                    "seed {seed} minsup {minsup}"
                );
                // Closed under prefixes.
                for p in found.keys() {
                    if p.len() > 1 {
                        assert!(found.contains_key(&Pattern(p.items()[..p.len() - 1].to_vec())));
                    }
                }
            }
        }
    }

    #[test]
    fn random_regex_parses() {
        let db = random_db(RandomDbParams {
            seed: 1,
            num_sequences: 5,
            max_len: 5,
            num_items: 4,
        });
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let expr = random_regex(&mut rng, &db, 3);
            RegexAst::parse(&expr, db.dictionary()).unwrap_or_else(|e| panic!("{expr}: {e}"));
        }
    }
}
