//! Pseudo-projected databases.
//!
//! A projected database keeps, for every sequence that contains the current
//! prefix, only the position right after the leftmost embedding of that
//! prefix. Suffixes are never copied.

use crate::seqdb::{ItemId, SequenceDatabase};

/// One projected suffix: sequence `sid` from 1-based position `start` on.
///
/// `start == len + 1` encodes the empty suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub sid: u32,
    pub start: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PseudoProjection {
    entries: Vec<Entry>,
}

impl PseudoProjection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        Self {
            entries: pairs
                .iter()
                .map(|&(sid, start)| Entry { sid, start })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.entries.iter().map(|e| (e.sid, e.start)).collect()
    }

    /// Number of projected suffixes, i.e. the support of the prefix.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Total number of items over all projected suffixes.
    pub fn suffix_items(&self, db: &SequenceDatabase) -> usize {
        self.entries
            .iter()
            .map(|e| db.sequence(e.sid).len() + 1 - e.start as usize)
            .sum()
    }

    /// The suffix that `entry` stands for.
    pub fn suffix(db: &SequenceDatabase, entry: Entry) -> &[ItemId] {
        &db.sequence(entry.sid)[entry.start as usize - 1..]
    }
}

/// `(sid, 1)` for every sequence, in sid order.
pub fn initial_projection(db: &SequenceDatabase) -> PseudoProjection {
    PseudoProjection {
        entries: (1..=db.len() as u32)
            .map(|sid| Entry { sid, start: 1 })
            .collect(),
    }
}

/// Projects `proj` on `alpha`: keeps the entries whose suffix contains
/// `alpha`, moving `start` just past its leftmost embedding.
pub fn project(
    db: &SequenceDatabase,
    proj: &PseudoProjection,
    alpha: &[ItemId],
) -> PseudoProjection {
    let mut out = PseudoProjection::new();
    project_into(db, proj, alpha, &mut out);
    out
}

/// Like [`project`] but writes into `out` (cleared first) and returns the
/// number of sequence positions inspected.
pub fn project_into(
    db: &SequenceDatabase,
    proj: &PseudoProjection,
    alpha: &[ItemId],
    out: &mut PseudoProjection,
) -> usize {
    debug_assert!(!alpha.is_empty());
    out.entries.clear();
    let mut steps = 0;
    for &Entry { sid, start } in &proj.entries {
        let s = db.sequence(sid);
        debug_assert!(
            start >= 1 && start as usize <= s.len() + 1,
            "invalid entry ({sid}, {start})"
        );
        let mut matched = 0;
        let mut pos = start as usize - 1;
        while matched < alpha.len() && pos < s.len() {
            if alpha[matched] == s[pos] {
                matched += 1;
            }
            pos += 1;
        }
        steps += pos + 1 - start as usize;
        if matched == alpha.len() {
            // pos is 0-based past the match, i.e. the 1-based start of the suffix.
            out.entries.push(Entry {
                sid,
                start: pos as u32 + 1,
            });
        }
    }
    steps
}

/// Items that are frequent in a projected database, with their local supports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequentItemSet {
    /// Sorted by item id.
    counts: Vec<(ItemId, u32)>,
}

impl FrequentItemSet {
    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.counts.iter().map(|&(it, _)| it)
    }

    pub fn counts(&self) -> &[(ItemId, u32)] {
        &self.counts
    }

    pub fn count(&self, item: ItemId) -> Option<u32> {
        self.counts
            .binary_search_by_key(&item, |&(it, _)| it)
            .ok()
            .map(|k| self.counts[k].1)
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.count(item).is_some()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Reusable per-item support counter.
///
/// Counts and "already seen in this suffix" flags are validated by stamps,
/// so a call never has to clear `d`-sized arrays.
#[derive(Debug, Clone)]
pub struct ItemCounter {
    counts: Vec<u32>,
    count_stamp: Vec<u64>,
    seen_stamp: Vec<u64>,
    call: u64,
    entry: u64,
}

impl ItemCounter {
    pub fn new(num_items: usize) -> Self {
        Self {
            counts: vec![0; num_items],
            count_stamp: vec![0; num_items],
            seen_stamp: vec![0; num_items],
            call: 0,
            entry: 0,
        }
    }

    /// Counts, for every item, the number of suffixes of `proj` containing
    /// it. Items reaching `minsup` are appended to `frequent` in the order
    /// they reach it. Returns the number of sequence positions inspected.
    pub fn count(
        &mut self,
        db: &SequenceDatabase,
        proj: &PseudoProjection,
        minsup: u32,
        frequent: &mut Vec<ItemId>,
    ) -> usize {
        debug_assert!(minsup >= 1);
        self.call += 1;
        let mut steps = 0;
        for &entry in &proj.entries {
            self.entry += 1;
            let suffix = PseudoProjection::suffix(db, entry);
            steps += suffix.len();
            for &item in suffix {
                let a = item.index();
                if self.seen_stamp[a] == self.entry {
                    continue;
                }
                self.seen_stamp[a] = self.entry;
                if self.count_stamp[a] != self.call {
                    self.count_stamp[a] = self.call;
                    self.counts[a] = 0;
                }
                self.counts[a] += 1;
                if self.counts[a] == minsup {
                    frequent.push(item);
                }
            }
        }
        steps
    }

    /// Local support of `item` as of the last [`count`](Self::count) call.
    pub fn last_count(&self, item: ItemId) -> u32 {
        let a = item.index();
        if self.count_stamp[a] == self.call {
            self.counts[a]
        } else {
            0
        }
    }
}

/// Locally frequent items of `proj`: each suffix contributes at most one to
/// each item it contains.
pub fn frequent_items(
    db: &SequenceDatabase,
    proj: &PseudoProjection,
    minsup: u32,
) -> FrequentItemSet {
    let mut counter = ItemCounter::new(db.num_items());
    let mut items = Vec::new();
    counter.count(db, proj, minsup, &mut items);
    items.sort_unstable();
    FrequentItemSet {
        counts: items
            .into_iter()
            .map(|it| (it, counter.last_count(it)))
            .collect(),
    }
}
