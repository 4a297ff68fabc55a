//! The prefix-projection global constraint.
//!
//! It encodes both the subsequence relation and the minimum-frequency
//! constraint on the pattern variables. Variables are assigned left to
//! right; after `P1..Pi` are fixed to the prefix σ, the filter projects the
//! previous pseudo-projected database on `σ(Pi)`, fails when fewer than
//! `minsup` suffixes remain, and otherwise prunes every locally infrequent
//! item from all future domains. Pruning the items at `P(i+2)..` too is sound
//! because an item infrequent in `SDB|σ` stays infrequent in the projection
//! of any extension of σ.

use crate::engine::{Outcome, PatternVars, Value};
use crate::projection::{initial_projection, project_into, ItemCounter, PseudoProjection};
use crate::seqdb::{ItemId, SequenceDatabase};

/// Elementary work done by one filter call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterWork {
    /// Sequence positions scanned while projecting.
    pub project_steps: usize,
    /// Sequence positions scanned while counting local supports.
    pub count_steps: usize,
    /// Domain words intersected while pruning.
    pub prune_words: usize,
    /// Items of the projection the call started from.
    pub input_items: usize,
}

impl FilterWork {
    pub fn total(&self) -> usize {
        self.project_steps + self.count_steps + self.prune_words
    }
}

#[derive(Debug)]
pub struct PrefixProjection<'db> {
    db: &'db SequenceDatabase,
    minsup: u32,
    // levels[k] is the projection on the k-item prefix.
    levels: Vec<PseudoProjection>,
    spare: Vec<PseudoProjection>,
    counter: ItemCounter,
    frequent: Vec<ItemId>,
    mask: Vec<u64>,
    last_work: FilterWork,
}

impl<'db> PrefixProjection<'db> {
    pub fn new(db: &'db SequenceDatabase, minsup: u32, words_per_domain: usize) -> Self {
        Self {
            db,
            minsup,
            levels: vec![initial_projection(db)],
            spare: Vec::new(),
            counter: ItemCounter::new(db.num_items()),
            frequent: Vec::new(),
            mask: vec![0; words_per_domain],
            last_work: FilterWork::default(),
        }
    }

    pub fn minsup(&self) -> u32 {
        self.minsup
    }

    /// The stack of projections; level `k` belongs to the `k`-item prefix.
    pub fn levels(&self) -> &[PseudoProjection] {
        &self.levels
    }

    /// Projection of the longest item prefix assigned so far.
    pub fn current(&self) -> &PseudoProjection {
        self.levels.last().expect("level 0 is never popped")
    }

    pub fn last_work(&self) -> FilterWork {
        self.last_work
    }

    /// Filters after `P1..Pi` are assigned (`i == 0` prunes the root).
    pub fn filter(&mut self, vars: &mut PatternVars, i: usize) -> Outcome {
        self.last_work = FilterWork::default();
        let ell = vars.ell();
        if i >= 1 {
            let value = vars.value(i - 1).expect("P1..Pi must be assigned");
            let item = match value {
                Value::Empty => {
                    debug_assert!(i >= 2, "□ is never in D(P1)");
                    // End of pattern: the prefix is already known to be frequent.
                    for j in i..ell {
                        if !vars.assign(j, Value::Empty) {
                            return Outcome::Fail;
                        }
                    }
                    return Outcome::Continue;
                }
                Value::Item(item) => item,
            };
            debug_assert_eq!(self.levels.len(), i, "projection stack out of sync");
            let mut next = self.spare.pop().unwrap_or_default();
            let prev = &self.levels[i - 1];
            self.last_work.input_items = prev.suffix_items(self.db);
            self.last_work.project_steps = project_into(self.db, prev, &[item], &mut next);
            let size = next.len();
            self.levels.push(next);
            if size < self.minsup as usize {
                return Outcome::Fail;
            }
        } else {
            self.last_work.input_items = self.levels[0].suffix_items(self.db);
        }
        if i == ell {
            return Outcome::Continue;
        }

        self.frequent.clear();
        let proj = self.levels.last().unwrap();
        self.last_work.count_steps =
            self.counter
                .count(self.db, proj, self.minsup, &mut self.frequent);

        self.mask.iter_mut().for_each(|w| *w = 0);
        for &item in &self.frequent {
            self.mask[item.index() / 64] |= 1u64 << (item.index() % 64);
        }
        let e = vars.bit_of(Value::Empty);
        self.mask[e / 64] |= 1u64 << (e % 64);

        for j in i..ell {
            self.last_work.prune_words += self.mask.len();
            if !vars.retain(j, &self.mask) {
                return Outcome::Fail;
            }
        }
        Outcome::Continue
    }

    /// Drops the projections of prefixes longer than `depth` items.
    pub fn truncate(&mut self, depth: usize) {
        while self.levels.len() > depth + 1 {
            let mut level = self.levels.pop().unwrap();
            level.clear();
            self.spare.push(level);
        }
    }
}
