//! A declarative mining request that can be run by the engine or by the
//! oracle.

use std::collections::BTreeMap;

use crate::constraints::{Constraints, ItemBound};
use crate::engine::{MiningStats, Pattern, SearchConfig, SearchState};
use crate::error::Result;
use crate::oracle::{check_pattern, enumerate_frequent, OracleConfig};
use crate::regex::{compile_regex, RegexAst};
use crate::seqdb::SequenceDatabase;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    /// Absolute minimum support.
    pub minsup: u32,
    pub ell: Option<usize>,
    pub min_size: Option<usize>,
    /// Items that must occur at least once.
    pub require: Vec<String>,
    /// Items that must not occur.
    pub exclude: Vec<String>,
    pub regex: Option<String>,
}

impl Query {
    pub fn new(minsup: u32) -> Self {
        Self {
            minsup,
            ..Default::default()
        }
    }

    fn item_bounds(&self, db: &SequenceDatabase) -> Result<Vec<ItemBound>> {
        let dict = db.dictionary();
        let mut out = Vec::new();
        for name in &self.require {
            out.push(ItemBound::require(dict.resolve(name)?));
        }
        for name in &self.exclude {
            out.push(ItemBound::exclude(dict.resolve(name)?));
        }
        Ok(out)
    }

    pub fn search_config(&self, db: &SequenceDatabase) -> Result<SearchConfig> {
        let constraints = Constraints {
            min_size: self.min_size,
            items: self.item_bounds(db)?,
            regex: match &self.regex {
                Some(expr) => Some(compile_regex(expr, db.dictionary())?),
                None => None,
            },
        };
        Ok(SearchConfig {
            ell: self.ell,
            minsup: self.minsup,
            constraints,
        })
    }

    pub fn oracle_config(&self, db: &SequenceDatabase) -> Result<OracleConfig> {
        Ok(OracleConfig {
            max_pattern_length: self.ell,
            minsup: self.minsup,
            min_size: self.min_size,
            items: self.item_bounds(db)?,
            regex: match &self.regex {
                Some(expr) => Some(RegexAst::parse(expr, db.dictionary())?),
                None => None,
            },
        })
    }

    /// Runs the engine and returns the patterns in emission order.
    pub fn mine(&self, db: &SequenceDatabase) -> Result<(Vec<(Pattern, u32)>, MiningStats)> {
        let mut state = SearchState::new(db, self.search_config(db)?)?;
        let mut out = Vec::new();
        let stats = state.solve_all(|p, s| out.push((p.clone(), s)));
        Ok((out, stats))
    }

    /// Runs both the engine and the oracle.
    pub fn compare(&self, db: &SequenceDatabase) -> Result<Comparison> {
        let oracle = enumerate_frequent(db, &self.oracle_config(db)?);
        self.compare_with(db, oracle)
    }

    /// Like [`compare`](Self::compare), reusing an unconstrained oracle run
    /// at a support threshold no higher than this query's.
    pub fn compare_against(
        &self,
        db: &SequenceDatabase,
        unconstrained: &BTreeMap<Pattern, u32>,
    ) -> Result<Comparison> {
        let cfg = self.oracle_config(db)?;
        let max_len = self.ell.unwrap_or(db.max_len());
        let oracle = unconstrained
            .iter()
            .filter(|(p, s)| {
                **s >= self.minsup
                    && p.len() <= max_len
                    && check_pattern(p.items(), &cfg, db.num_items())
            })
            .map(|(p, s)| (p.clone(), *s))
            .collect();
        self.compare_with(db, oracle)
    }

    fn compare_with(
        &self,
        db: &SequenceDatabase,
        oracle: BTreeMap<Pattern, u32>,
    ) -> Result<Comparison> {
        let (mined, stats) = self.mine(db)?;
        let emitted: Vec<Pattern> = mined.iter().map(|(p, _)| p.clone()).collect();
        let engine: BTreeMap<Pattern, u32> = mined.into_iter().collect();
        let duplicates = emitted.len() - engine.len();
        let missing = oracle
            .iter()
            .filter(|(p, _)| !engine.contains_key(*p))
            .map(|(p, _)| p.clone())
            .collect();
        let extra = engine
            .iter()
            .filter(|(p, _)| !oracle.contains_key(*p))
            .map(|(p, _)| p.clone())
            .collect();
        let wrong_support = engine
            .iter()
            .filter(|(p, s)| oracle.get(*p).is_some_and(|o| o != *s))
            .map(|(p, _)| p.clone())
            .collect();
        Ok(Comparison {
            emitted,
            engine,
            oracle,
            missing,
            extra,
            wrong_support,
            duplicates,
            stats,
        })
    }
}

/// Engine output against oracle output.
#[derive(Debug, Clone)]
pub struct Comparison {
    /// Engine patterns in emission order.
    pub emitted: Vec<Pattern>,
    pub engine: BTreeMap<Pattern, u32>,
    pub oracle: BTreeMap<Pattern, u32>,
    /// In the oracle set only.
    pub missing: Vec<Pattern>,
    /// In the engine set only.
    pub extra: Vec<Pattern>,
    /// In both, with different supports.
    pub wrong_support: Vec<Pattern>,
    /// Patterns the engine emitted more than once.
    pub duplicates: usize,
    pub stats: MiningStats,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.wrong_support.is_empty()
            && self.duplicates == 0
    }
}

/// The constraint combinations used for randomized oracle checks: frequency
/// alone, minimum sizes 2 to 4, a required item, an excluded item, a random
/// regex, and all of them together. Items and the regex are drawn from
/// `seed`. Every query has `minsup` 1.
pub fn constraint_combos(db: &SequenceDatabase, seed: u64) -> Vec<(&'static str, Query)> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    let names: Vec<String> = db
        .dictionary()
        .ids()
        .map(|id| db.dictionary().name(id).to_owned())
        .collect();
    let mut picks = names.clone();
    picks.shuffle(&mut rng);
    let required = picks[0].clone();
    let excluded = picks.get(1).unwrap_or(&picks[0]).clone();
    let regex = crate::oracle::random_regex(&mut rng, db, 2);

    let base = Query::new(1);
    let mut out = vec![("freq", base.clone())];
    for (label, n) in [("size2", 2), ("size3", 3), ("size4", 4)] {
        out.push((
            label,
            Query {
                min_size: Some(n),
                ..base.clone()
            },
        ));
    }
    out.push((
        "require",
        Query {
            require: vec![required.clone()],
            ..base.clone()
        },
    ));
    out.push((
        "exclude",
        Query {
            exclude: vec![excluded.clone()],
            ..base.clone()
        },
    ));
    out.push((
        "regex",
        Query {
            regex: Some(regex.clone()),
            ..base.clone()
        },
    ));
    out.push((
        "all",
        Query {
            min_size: Some(2),
            require: vec![required],
            exclude: vec![excluded],
            regex: Some(regex),
            ..base
        },
    ));
    out
}
