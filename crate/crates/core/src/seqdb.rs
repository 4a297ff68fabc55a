//! Sequence databases over single items.
//!
//! A database is an immutable list of non-empty item sequences identified by
//! dense sids `1..=m`, together with a dictionary that interns external item
//! names to dense [`ItemId`]s in first-seen order. Positions inside a sequence
//! are 1-based wherever they show up in an API (see [`crate::projection`]).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense index into the item dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bidirectional map between external item names and [`ItemId`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemDictionary {
    names: Vec<String>,
    ids: HashMap<String, ItemId>,
    // SPMF `@ITEM=id=name` annotations; lookup falls back to these.
    aliases: HashMap<String, ItemId>,
}

impl ItemDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> ItemId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = ItemId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    /// Resolves a name, trying aliases when the primary name is unknown.
    pub fn get(&self, name: &str) -> Option<ItemId> {
        self.ids
            .get(name)
            .or_else(|| self.aliases.get(name))
            .copied()
    }

    pub fn resolve(&self, name: &str) -> Result<ItemId> {
        self.get(name)
            .ok_or_else(|| Error::UnknownItem(name.to_owned()))
    }

    pub fn name(&self, id: ItemId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.names.len() as u32).map(ItemId)
    }

    fn add_alias(&mut self, alias: &str, id: ItemId) {
        self.aliases.insert(alias.to_owned(), id);
    }
}

/// Dataset characteristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbStats {
    pub num_sequences: usize,
    pub num_items: usize,
    pub avg_length: f64,
    pub max_length: usize,
}

/// Immutable store of identified item sequences.
///
/// Sequences are kept in one flat buffer; `offsets[k]..offsets[k + 1]` is the
/// sequence with sid `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDatabase {
    items: Vec<ItemId>,
    offsets: Vec<usize>,
    dict: ItemDictionary,
    max_len: usize,
}

impl SequenceDatabase {
    /// Builds a database from already interned sequences.
    ///
    /// Every sequence must be non-empty and use only ids known to `dict`.
    pub fn from_sequences(dict: ItemDictionary, sequences: Vec<Vec<ItemId>>) -> Result<Self> {
        let mut items = Vec::with_capacity(sequences.iter().map(Vec::len).sum());
        let mut offsets = Vec::with_capacity(sequences.len() + 1);
        offsets.push(0);
        let mut max_len = 0;
        for (k, seq) in sequences.into_iter().enumerate() {
            if seq.is_empty() {
                return Err(Error::EmptySequence { sequence: k + 1 });
            }
            if let Some(bad) = seq.iter().find(|it| it.index() >= dict.len()) {
                return Err(Error::UnknownItem(format!("#{}", bad.0)));
            }
            max_len = max_len.max(seq.len());
            items.extend(seq);
            offsets.push(items.len());
        }
        Ok(Self {
            items,
            offsets,
            dict,
            max_len,
        })
    }

    /// Builds a database from sequences of item names, interning in
    /// first-seen order.
    pub fn from_names<S, I>(sequences: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut dict = ItemDictionary::new();
        let seqs = sequences
            .into_iter()
            .map(|seq| seq.into_iter().map(|n| dict.intern(n.as_ref())).collect())
            .collect();
        Self::from_sequences(dict, seqs)
    }

    /// Reads the SPMF sequence format restricted to single-item itemsets.
    ///
    /// Tokens are whitespace-separated integers: `-1` closes an itemset and
    /// `-2` closes a sequence. Lines starting with `#` or `%` are comments;
    /// lines starting with `@` are metadata, of which `@ITEM=<id>=<name>` is
    /// kept as an alias for lookups.
    pub fn load_spmf<R: BufRead>(reader: R) -> Result<Self> {
        let mut dict = ItemDictionary::new();
        let mut aliases = Vec::new();
        let mut sequences: Vec<Vec<ItemId>> = Vec::new();
        let mut current: Vec<ItemId> = Vec::new();
        let mut itemset: Vec<ItemId> = Vec::new();
        let mut open = false;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim_start();
            if trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            if let Some(meta) = trimmed.strip_prefix('@') {
                if let Some(rest) = meta.strip_prefix("ITEM=") {
                    if let Some((id, name)) = rest.split_once('=') {
                        aliases.push((id.trim().to_owned(), name.trim().to_owned()));
                    }
                }
                continue;
            }
            for token in trimmed.split_whitespace() {
                let value: i64 = token.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    token: token.to_owned(),
                })?;
                open = true;
                match value {
                    -1 => close_itemset(&mut itemset, &mut current, sequences.len() + 1)?,
                    -2 => {
                        if !itemset.is_empty() {
                            close_itemset(&mut itemset, &mut current, sequences.len() + 1)?;
                        }
                        if current.is_empty() {
                            return Err(Error::EmptySequence {
                                sequence: sequences.len() + 1,
                            });
                        }
                        sequences.push(std::mem::take(&mut current));
                        open = false;
                    }
                    v if v >= 0 => itemset.push(dict.intern(&v.to_string())),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            token: token.to_owned(),
                        })
                    }
                }
            }
        }
        if open {
            return Err(Error::Unterminated);
        }
        if sequences.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        for (id, name) in aliases {
            if let Some(item) = dict.get(&id) {
                dict.add_alias(&name, item);
            }
        }
        Self::from_sequences(dict, sequences)
    }

    /// Reads one sequence per line, whitespace-separated item names.
    /// Blank lines are ignored.
    pub fn load_symbolic<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if !line.trim().is_empty() {
                lines.push(line);
            }
        }
        if lines.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        Self::from_names(lines.iter().map(|l| l.split_whitespace()))
    }

    /// Serializes to SPMF using the dictionary names as item tokens.
    pub fn to_spmf(&self) -> String {
        let mut out = String::new();
        for (_, seq) in self.iter() {
            for &item in seq {
                let _ = write!(out, "{} -1 ", self.dict.name(item));
            }
            out.push_str("-2\n");
        }
        out
    }

    /// Number of sequences `m`.
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The sequence with the given 1-based sid.
    #[inline]
    pub fn sequence(&self, sid: u32) -> &[ItemId] {
        let k = sid as usize - 1;
        &self.items[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &[ItemId])> + '_ {
        self.offsets
            .windows(2)
            .enumerate()
            .map(move |(k, w)| (k as u32 + 1, &self.items[w[0]..w[1]]))
    }

    pub fn dictionary(&self) -> &ItemDictionary {
        &self.dict
    }

    /// Number of distinct items `#I`.
    pub fn num_items(&self) -> usize {
        self.dict.len()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Total number of items over all sequences.
    pub fn total_items(&self) -> usize {
        self.items.len()
    }

    pub fn stats(&self) -> Result<DbStats> {
        if self.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        Ok(DbStats {
            num_sequences: self.len(),
            num_items: self.num_items(),
            avg_length: self.items.len() as f64 / self.len() as f64,
            max_length: self.max_len,
        })
    }

    /// Renders item ids as their names, space separated.
    pub fn format_items(&self, items: &[ItemId]) -> String {
        let mut out = String::new();
        for (k, &it) in items.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(self.dict.name(it));
        }
        out
    }

    /// Resolves whitespace-separated item names.
    pub fn parse_items(&self, text: &str) -> Result<Vec<ItemId>> {
        text.split_whitespace()
            .map(|n| self.dict.resolve(n))
            .collect()
    }
}

fn close_itemset(
    itemset: &mut Vec<ItemId>,
    current: &mut Vec<ItemId>,
    sequence: usize,
) -> Result<()> {
    match itemset.len() {
        1 => {
            current.push(itemset[0]);
            itemset.clear();
            Ok(())
        }
        size => Err(Error::MultiItemItemset { sequence, size }),
    }
}

/// Whether `alpha` embeds into `s` at strictly increasing positions.
///
/// Greedy leftmost matching is exact for subsequence containment.
pub fn is_subsequence(alpha: &[ItemId], s: &[ItemId]) -> bool {
    let mut rest = alpha.iter().peekable();
    for item in s {
        match rest.peek() {
            None => return true,
            Some(&&next) if next == *item => {
                rest.next();
            }
            Some(_) => {}
        }
    }
    rest.peek().is_none()
}

/// Number of sequences of `db` that contain `pattern`.
pub fn support(db: &SequenceDatabase, pattern: &[ItemId]) -> usize {
    db.iter()
        .filter(|(_, s)| is_subsequence(pattern, s))
        .count()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The four-sequence running example: ABCBC, BABC, AB, BCD.
    pub(crate) fn sdb1() -> SequenceDatabase {
        SequenceDatabase::load_symbolic("A B C B C\nB A B C\nA B\nB C D\n".as_bytes()).unwrap()
    }

    pub(crate) fn ids(db: &SequenceDatabase, names: &str) -> Vec<ItemId> {
        db.parse_items(names).unwrap()
    }

    #[test]
    fn spmf_single_sequence() {
        let db = SequenceDatabase::load_spmf("1 -1 2 -1 -2".as_bytes()).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(db.num_items(), 2);
        assert_eq!(db.format_items(db.sequence(1)), "1 2");
    }

    #[test]
    fn spmf_repeated_item() {
        let db = SequenceDatabase::load_spmf("3 -1 3 -1 -2 3 -1 -2".as_bytes()).unwrap();
        assert_eq!(db.len(), 2);
        assert_eq!(db.num_items(), 1);
        assert_eq!(db.sequence(1).len(), 2);
        assert_eq!(db.sequence(2).len(), 1);
    }

    #[test]
    fn spmf_rejects_multi_item_itemset() {
        let err = SequenceDatabase::load_spmf("1 -1 -2\n1 2 -1 -2".as_bytes()).unwrap_err();
        assert!(
            matches!(
                err,
                Error::MultiItemItemset {
                    sequence: 2,
                    size: 2
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn spmf_errors() {
        assert!(matches!(
            SequenceDatabase::load_spmf("1 -1 x -1 -2".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SequenceDatabase::load_spmf("".as_bytes()),
            Err(Error::EmptyDatabase)
        ));
        assert!(matches!(
            SequenceDatabase::load_spmf("1 -1".as_bytes()),
            Err(Error::Unterminated)
        ));
        assert!(matches!(
            SequenceDatabase::load_spmf("-2".as_bytes()),
            Err(Error::EmptySequence { sequence: 1 })
        ));
        assert!(matches!(
            SequenceDatabase::load_spmf("1 -3 -2".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            SequenceDatabase::load_symbolic("\n  \n".as_bytes()),
            Err(Error::EmptyDatabase)
        ));
    }

    #[test]
    fn spmf_metadata_and_aliases() {
        let text = "@CONVERTED_FROM_TEXT\n@ITEM=7=GENE\n# comment\n7 -1 8 -1 -2\n";
        let db = SequenceDatabase::load_spmf(text.as_bytes()).unwrap();
        assert_eq!(db.dictionary().get("GENE"), db.dictionary().get("7"));
        assert!(db.dictionary().get("7").is_some());
        assert_eq!(
            db.dictionary().name(db.dictionary().get("GENE").unwrap()),
            "7"
        );
    }

    #[test]
    fn subsequence_examples() {
        let db = sdb1();
        assert!(is_subsequence(&ids(&db, "A C"), db.sequence(2)));
        assert!(is_subsequence(&[], db.sequence(3)));
        assert!(!is_subsequence(&ids(&db, "C A"), db.sequence(2)));
        assert!(!is_subsequence(&ids(&db, "A"), &[]));
    }

    #[test]
    fn support_examples() {
        let db = sdb1();
        assert_eq!(support(&db, &ids(&db, "A C")), 2);
        assert_eq!(support(&db, &[]), 4);
        assert_eq!(support(&db, &ids(&db, "B")), 4);
    }

    #[test]
    fn stats_examples() {
        let s = sdb1().stats().unwrap();
        assert_eq!((s.num_sequences, s.num_items, s.max_length), (4, 4, 5));
        assert_eq!(s.avg_length, 3.5);

        let one = SequenceDatabase::from_names([["A"]])
            .unwrap()
            .stats()
            .unwrap();
        assert_eq!(
            (
                one.num_sequences,
                one.num_items,
                one.avg_length,
                one.max_length
            ),
            (1, 1, 1.0, 1)
        );

        let empty = SequenceDatabase::from_sequences(ItemDictionary::new(), vec![]).unwrap();
        assert!(matches!(empty.stats(), Err(Error::EmptyDatabase)));
    }

    fn arb_db() -> impl Strategy<Value = SequenceDatabase> {
        prop::collection::vec(prop::collection::vec(0u32..4, 1..7), 1..6).prop_map(|seqs| {
            SequenceDatabase::from_names(
                seqs.iter()
                    .map(|s| s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>()),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn spmf_round_trip(db in arb_db()) {
            let again = SequenceDatabase::load_spmf(db.to_spmf().as_bytes()).unwrap();
            prop_assert_eq!(again, db);
        }

        #[test]
        fn support_is_anti_monotone(
            db in arb_db(),
            p in prop::collection::vec(0u32..4, 0..4),
            extra in prop::collection::vec((0u32..4, 0usize..5), 0..3),
        ) {
            let d = db.num_items() as u32;
            let p: Vec<ItemId> = p.into_iter().map(|i| ItemId(i % d)).collect();
            // q is p with extra items spliced in, so p ⪯ q.
            let mut q = p.clone();
            for (item, at) in extra {
                q.insert(at.min(q.len()), ItemId(item % d));
            }
            prop_assert!(is_subsequence(&p, &q));
            prop_assert!(support(&db, &q) <= support(&db, &p));
        }

        #[test]
        fn subsequence_reflexive_transitive(
            a in prop::collection::vec(0u32..3, 0..6),
            b in prop::collection::vec(0u32..3, 0..6),
            c in prop::collection::vec(0u32..3, 0..6),
        ) {
            let [a, b, c] = [a, b, c].map(|v| v.into_iter().map(ItemId).collect::<Vec<_>>());
            prop_assert!(is_subsequence(&a, &a));
            if is_subsequence(&a, &b) && is_subsequence(&b, &c) {
                prop_assert!(is_subsequence(&a, &c));
            }
        }
    }
}
