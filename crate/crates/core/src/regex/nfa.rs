use super::RegexAst;
use crate::seqdb::ItemId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Item(ItemId),
    Any,
}

/// Thompson automaton: one start, one accept, ε-edges and labelled edges.
#[derive(Debug, Clone, Default)]
pub struct Nfa {
    pub(crate) start: usize,
    pub(crate) accept: usize,
    pub(crate) eps: Vec<Vec<usize>>,
    pub(crate) edges: Vec<Vec<(Label, usize)>>,
}

impl Nfa {
    pub fn from_ast(ast: &RegexAst) -> Self {
        let mut nfa = Nfa::default();
        let (s, a) = nfa.build(ast);
        nfa.start = s;
        nfa.accept = a;
        nfa
    }

    pub fn num_states(&self) -> usize {
        self.eps.len()
    }

    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, ast: &RegexAst) -> (usize, usize) {
        match ast {
            RegexAst::Item(_) | RegexAst::Any => {
                let (s, a) = (self.state(), self.state());
                let label = match ast {
                    RegexAst::Item(it) => Label::Item(*it),
                    _ => Label::Any,
                };
                self.edges[s].push((label, a));
                (s, a)
            }
            RegexAst::Concat(parts) => {
                let (s, mut a) = self.build(&parts[0]);
                for p in &parts[1..] {
                    let (ps, pa) = self.build(p);
                    self.eps[a].push(ps);
                    a = pa;
                }
                (s, a)
            }
            RegexAst::Alt(branches) => {
                let (s, a) = (self.state(), self.state());
                for b in branches {
                    let (bs, ba) = self.build(b);
                    self.eps[s].push(bs);
                    self.eps[ba].push(a);
                }
                (s, a)
            }
            RegexAst::Star(inner) | RegexAst::Plus(inner) | RegexAst::Optional(inner) => {
                let (s, a) = (self.state(), self.state());
                let (is, ia) = self.build(inner);
                self.eps[s].push(is);
                self.eps[ia].push(a);
                if !matches!(ast, RegexAst::Plus(_)) {
                    self.eps[s].push(a);
                }
                if !matches!(ast, RegexAst::Optional(_)) {
                    self.eps[ia].push(is);
                }
                (s, a)
            }
        }
    }

    /// Adds the ε-closure of `set` to itself. `set` is a membership vector.
    pub(crate) fn close(&self, set: &mut [bool], stack: &mut Vec<usize>) {
        stack.clear();
        stack.extend((0..set.len()).filter(|&q| set[q]));
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if !set[r] {
                    set[r] = true;
                    stack.push(r);
                }
            }
        }
    }

    /// States reachable from `set` on `item`, before ε-closure.
    pub(crate) fn step(&self, set: &[bool], item: ItemId, num_items: usize, out: &mut [bool]) {
        out.iter_mut().for_each(|b| *b = false);
        for q in (0..set.len()).filter(|&q| set[q]) {
            for &(label, r) in &self.edges[q] {
                let hit = match label {
                    Label::Item(it) => it == item,
                    Label::Any => item.index() < num_items,
                };
                if hit {
                    out[r] = true;
                }
            }
        }
    }

    /// Direct simulation over an alphabet of `num_items` items.
    pub fn accepts(&self, word: &[ItemId], num_items: usize) -> bool {
        let n = self.num_states();
        let mut cur = vec![false; n];
        let mut next = vec![false; n];
        let mut stack = Vec::new();
        cur[self.start] = true;
        self.close(&mut cur, &mut stack);
        for &item in word {
            self.step(&cur, item, num_items, &mut next);
            self.close(&mut next, &mut stack);
            std::mem::swap(&mut cur, &mut next);
        }
        cur[self.accept]
    }

    /// Items carried by labelled edges, sorted and deduplicated.
    pub(crate) fn literals(&self) -> Vec<ItemId> {
        let mut out: Vec<ItemId> = self
            .edges
            .iter()
            .flatten()
            .filter_map(|(l, _)| match l {
                Label::Item(it) => Some(*it),
                Label::Any => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
