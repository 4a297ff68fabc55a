use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::nfa::Nfa;
use crate::engine::Value;
use crate::seqdb::{ItemDictionary, ItemId};

/// Total deterministic automaton over the items, optionally extended with
/// the `□` symbol.
///
/// Symbol `a < num_items` is item `a`; symbol `num_items` is `□` once the
/// automaton has been [augmented](Self::augment). After augmentation every
/// accepting state goes to `end` on `□`, `end` loops on `□`, and everything
/// else on `□` (and `end` on any item) goes to `dead`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    num_items: usize,
    symbols: usize,
    start: u32,
    accepting: Vec<bool>,
    table: Vec<u32>,
    dead: Option<u32>,
    end: Option<u32>,
}

impl Dfa {
    /// Subset construction. Items that the expression never names behave
    /// identically, so they share one transition computation.
    pub fn from_nfa(nfa: &Nfa, num_items: usize) -> Self {
        let n = nfa.num_states();
        let literals: Vec<ItemId> = nfa
            .literals()
            .into_iter()
            .filter(|it| it.index() < num_items)
            .collect();
        // One representative per symbol class: each literal, plus any other item.
        let mut reps = literals.clone();
        let other = (0..num_items as u32)
            .map(ItemId)
            .find(|it| literals.binary_search(it).is_err());
        reps.extend(other);

        let mut stack = Vec::new();
        let mut init = vec![false; n];
        init[nfa.start] = true;
        nfa.close(&mut init, &mut stack);

        let mut ids: HashMap<Vec<bool>, u32> = HashMap::new();
        let mut sets: Vec<Vec<bool>> = Vec::new();
        let mut class_table: Vec<u32> = Vec::new();
        ids.insert(init.clone(), 0);
        sets.push(init);
        let mut next = vec![false; n];
        let mut k = 0;
        while k < sets.len() {
            for &rep in &reps {
                nfa.step(&sets[k], rep, num_items, &mut next);
                nfa.close(&mut next, &mut stack);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(next.clone(), id);
                        sets.push(next.clone());
                        id
                    }
                };
                class_table.push(id);
            }
            k += 1;
        }

        let classes = reps.len();
        let class_of: Vec<usize> = (0..num_items as u32)
            .map(|a| literals.binary_search(&ItemId(a)).unwrap_or(classes - 1))
            .collect();
        let mut table = Vec::with_capacity(sets.len() * num_items);
        for q in 0..sets.len() {
            table.extend(class_of.iter().map(|&c| class_table[q * classes + c]));
        }
        Self {
            num_items,
            symbols: num_items,
            start: 0,
            accepting: sets.iter().map(|s| s[nfa.accept]).collect(),
            table,
            dead: None,
            end: None,
        }
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn is_augmented(&self) -> bool {
        self.end.is_some()
    }

    #[inline]
    pub fn step(&self, state: u32, symbol: usize) -> u32 {
        self.table[state as usize * self.symbols + symbol]
    }

    fn symbol(&self, value: Value) -> usize {
        match value {
            Value::Item(it) => it.index(),
            Value::Empty => {
                assert!(self.is_augmented(), "□ needs an augmented automaton");
                self.num_items
            }
        }
    }

    /// Runs a padded word through the augmented automaton.
    pub fn accepts(&self, word: &[Value]) -> bool {
        let q = word
            .iter()
            .fold(self.start, |q, &v| self.step(q, self.symbol(v)));
        self.is_accepting(q)
    }

    /// Whether the item sequence belongs to the expression's language.
    pub fn accepts_items(&self, word: &[ItemId]) -> bool {
        let q = word
            .iter()
            .fold(self.start, |q, it| self.step(q, it.index()));
        self.is_accepting(q)
    }

    /// Moore partition refinement, keeping only reachable states and
    /// numbering them breadth-first from the start in symbol order.
    pub fn minimize(&self) -> Self {
        let n = self.num_states();
        let mut block: Vec<u32> = self.accepting.iter().map(|&a| a as u32).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(self.symbols + 1);
                sig.push(block[q]);
                sig.extend((0..self.symbols).map(|a| block[self.step(q as u32, a) as usize]));
                let fresh = ids.len() as u32;
                next.push(*ids.entry(sig).or_insert(fresh));
            }
            let new_count = ids.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Renumber blocks by BFS from the start block.
        let mut order: Vec<Option<u32>> = vec![None; count];
        let mut rep: Vec<u32> = Vec::new();
        let mut queue = VecDeque::new();
        let first = block[self.start as usize] as usize;
        order[first] = Some(0);
        rep.push(self.start);
        queue.push_back(self.start);
        while let Some(q) = queue.pop_front() {
            for a in 0..self.symbols {
                let r = self.step(q, a);
                let b = block[r as usize] as usize;
                if order[b].is_none() {
                    order[b] = Some(rep.len() as u32);
                    rep.push(r);
                    queue.push_back(r);
                }
            }
        }
        let mut table = Vec::with_capacity(rep.len() * self.symbols);
        for &q in &rep {
            for a in 0..self.symbols {
                let r = self.step(q, a);
                table.push(order[block[r as usize] as usize].unwrap());
            }
        }
        let remap = |s: Option<u32>| s.map(|s| order[block[s as usize] as usize].unwrap());
        Self {
            num_items: self.num_items,
            symbols: self.symbols,
            start: 0,
            accepting: rep.iter().map(|&q| self.accepting[q as usize]).collect(),
            table,
            dead: remap(self.dead),
            end: remap(self.end),
        }
    }

    /// Extends the alphabet with `□` (see the type-level docs).
    pub fn augment(&self) -> Self {
        assert!(!self.is_augmented(), "already augmented");
        let d = self.num_items;
        let n = self.num_states() as u32;
        let existing_dead =
            (0..n).find(|&q| !self.is_accepting(q) && (0..d).all(|a| self.step(q, a) == q));
        let dead = existing_dead.unwrap_or(n);
        let end = if existing_dead.is_some() { n } else { n + 1 };
        let total = end as usize + 1;
        let symbols = d + 1;
        let mut table = Vec::with_capacity(total * symbols);
        let mut accepting = Vec::with_capacity(total);
        for q in 0..total as u32 {
            if q < n {
                table.extend((0..d).map(|a| self.step(q, a)));
                table.push(if self.is_accepting(q) { end } else { dead });
                accepting.push(self.is_accepting(q));
            } else if q == end {
                table.extend(std::iter::repeat_n(dead, d));
                table.push(end);
                accepting.push(true);
            } else {
                table.extend(std::iter::repeat_n(dead, symbols));
                accepting.push(false);
            }
        }
        Self {
            num_items: d,
            symbols,
            start: self.start,
            accepting,
            table,
            dead: Some(dead),
            end: Some(end),
        }
    }

    /// Text table: a header line, then one `state symbol target` line per
    /// transition, states ascending, items by id, `□` last.
    pub fn dump(&self, dict: &ItemDictionary) -> String {
        let opt = |s: Option<u32>| s.map_or("-".to_string(), |s| s.to_string());
        let acc: Vec<String> = (0..self.num_states() as u32)
            .filter(|&q| self.is_accepting(q))
            .map(|q| q.to_string())
            .collect();
        let mut out = format!(
            "states={} start={} accepting=[{}] dead={} end={}\n",
            self.num_states(),
            self.start,
            acc.join(","),
            opt(self.dead),
            opt(self.end)
        );
        for q in 0..self.num_states() as u32 {
            for a in 0..self.symbols {
                let name = if a == self.num_items {
                    "□"
                } else {
                    dict.name(ItemId(a as u32))
                };
                let _ = writeln!(out, "{q} {name} {}", self.step(q, a));
            }
        }
        out
    }
}
