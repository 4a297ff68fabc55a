use std::fmt;

use crate::seqdb::ItemId;

/// A domain value: an item or the end-of-pattern marker `□`.
///
/// `Empty` orders before every item, which is also the branching order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Empty,
    Item(ItemId),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Empty => f.write_str("□"),
            Value::Item(it) => write!(f, "#{}", it.0),
        }
    }
}

/// The pattern variables `P1..Pℓ`, indexed from 0.
///
/// Each domain is a bitset over `I ∪ {□}`: bit `a` for item `a`, bit `d`
/// for `□`. Domains only shrink; every changed word is logged on a trail so
/// that [`undo_to`](Self::undo_to) restores earlier states exactly.
#[derive(Debug, Clone)]
pub struct PatternVars {
    ell: usize,
    num_items: usize,
    words: usize,
    bits: Vec<u64>,
    trail: Vec<(u32, u64)>,
    removals: u64,
}

impl PatternVars {
    /// `D(P1) = I`, `D(Pi) = I ∪ {□}` for `i ≥ 2`.
    pub fn new(ell: usize, num_items: usize) -> Self {
        let words = (num_items + 1).div_ceil(64);
        let mut full = vec![u64::MAX; words];
        let tail = (num_items + 1) % 64;
        if tail != 0 {
            full[words - 1] = (1u64 << tail) - 1;
        }
        let mut bits = Vec::with_capacity(ell * words);
        for _ in 0..ell {
            bits.extend_from_slice(&full);
        }
        let mut vars = Self {
            ell,
            num_items,
            words,
            bits,
            trail: Vec::new(),
            removals: 0,
        };
        if ell > 0 {
            let e = vars.empty_bit();
            vars.bits[e / 64] &= !(1u64 << (e % 64));
        }
        vars
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    /// Words per domain.
    pub fn words_per_domain(&self) -> usize {
        self.words
    }

    /// Bit position of a value inside a domain.
    #[inline]
    pub fn bit_of(&self, value: Value) -> usize {
        match value {
            Value::Empty => self.num_items,
            Value::Item(it) => it.index(),
        }
    }

    #[inline]
    fn empty_bit(&self) -> usize {
        self.num_items
    }

    #[inline]
    fn value_of_bit(&self, bit: usize) -> Value {
        if bit == self.num_items {
            Value::Empty
        } else {
            Value::Item(ItemId(bit as u32))
        }
    }

    /// Raw words of a domain.
    #[inline]
    pub fn domain_words(&self, var: usize) -> &[u64] {
        &self.bits[var * self.words..(var + 1) * self.words]
    }

    #[inline]
    pub fn contains(&self, var: usize, value: Value) -> bool {
        let b = self.bit_of(value);
        self.bits[var * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn size(&self, var: usize) -> usize {
        self.domain_words(var)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_empty(&self, var: usize) -> bool {
        self.domain_words(var).iter().all(|&w| w == 0)
    }

    /// The value of `var` when its domain is a singleton.
    pub fn value(&self, var: usize) -> Option<Value> {
        let mut found = None;
        for (k, &w) in self.domain_words(var).iter().enumerate() {
            if w == 0 {
                continue;
            }
            if found.is_some() || w.count_ones() != 1 {
                return None;
            }
            found = Some(self.value_of_bit(k * 64 + w.trailing_zeros() as usize));
        }
        found
    }

    /// Domain values in branching order: `□` first, then items ascending.
    pub fn values(&self, var: usize) -> Vec<Value> {
        let mut out = Vec::new();
        if self.contains(var, Value::Empty) {
            out.push(Value::Empty);
        }
        out.extend(self.items(var).map(Value::Item));
        out
    }

    /// Items (not `□`) in the domain, ascending.
    pub fn items(&self, var: usize) -> impl Iterator<Item = ItemId> + '_ {
        let n = self.num_items;
        self.domain_words(var)
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| BitIter(w).map(move |b| k * 64 + b))
            .filter(move |&b| b < n)
            .map(|b| ItemId(b as u32))
    }

    #[inline]
    fn write(&mut self, idx: usize, new: u64) {
        let old = self.bits[idx];
        debug_assert_eq!(new & !old, 0, "domains may only shrink");
        if new != old {
            self.trail.push((idx as u32, old));
            self.removals += (old & !new).count_ones() as u64;
            self.bits[idx] = new;
        }
    }

    /// Removes `value`; returns whether it was present.
    pub fn remove(&mut self, var: usize, value: Value) -> bool {
        let b = self.bit_of(value);
        let idx = var * self.words + b / 64;
        let mask = 1u64 << (b % 64);
        let present = self.bits[idx] & mask != 0;
        if present {
            self.write(idx, self.bits[idx] & !mask);
        }
        present
    }

    /// Reduces the domain to `{value}`, or to nothing when `value` is absent.
    pub fn assign(&mut self, var: usize, value: Value) -> bool {
        let present = self.contains(var, value);
        let b = self.bit_of(value);
        for k in 0..self.words {
            let idx = var * self.words + k;
            let keep = if present && k == b / 64 {
                1u64 << (b % 64)
            } else {
                0
            };
            self.write(idx, self.bits[idx] & keep);
        }
        present
    }

    /// Intersects the domain with `mask`; returns whether it is still non-empty.
    pub fn retain(&mut self, var: usize, mask: &[u64]) -> bool {
        debug_assert_eq!(mask.len(), self.words);
        let mut any = false;
        for (k, &m) in mask.iter().enumerate() {
            let idx = var * self.words + k;
            let new = self.bits[idx] & m;
            self.write(idx, new);
            any |= new != 0;
        }
        any
    }

    /// Current trail position.
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Undoes every change made since `mark`.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (idx, old) = self.trail.pop().unwrap();
            let idx = idx as usize;
            self.removals -= (old & !self.bits[idx]).count_ones() as u64;
            self.bits[idx] = old;
        }
    }

    /// Values removed and not yet restored.
    pub fn removals(&self) -> u64 {
        self.removals
    }

    pub fn all_words(&self) -> &[u64] {
        &self.bits
    }
}

/// Iterates over set bit positions of a word.
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}
