use super::SideFilter;
use crate::engine::{Outcome, PatternVars};
use crate::regex::Dfa;

/// `Regular(P, A)` over the `□`-augmented automaton.
///
/// Layered filtering: states reachable from the start through the current
/// domains are computed left to right, then states that still reach an
/// accepting state at layer ℓ are computed right to left. A value survives
/// at position `k` iff it labels an edge between two such states. The
/// automaton's symbol index coincides with the domain bit index.
#[derive(Debug, Clone)]
pub struct RegularFilter {
    dfa: Dfa,
    ell: usize,
    forward: Vec<bool>,
    backward: Vec<bool>,
    mask: Vec<u64>,
}

impl RegularFilter {
    pub fn new(dfa: Dfa, ell: usize) -> Self {
        let layers = (ell + 1) * dfa.num_states();
        Self {
            dfa,
            ell,
            forward: vec![false; layers],
            backward: vec![false; layers],
            mask: Vec::new(),
        }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (k, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            f(k * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

impl SideFilter for RegularFilter {
    fn name(&self) -> &'static str {
        "regular"
    }

    fn propagate(&mut self, vars: &mut PatternVars) -> Outcome {
        debug_assert_eq!(vars.ell(), self.ell);
        let s = self.dfa.num_states();
        let ell = self.ell;
        self.forward.iter_mut().for_each(|b| *b = false);
        self.backward.iter_mut().for_each(|b| *b = false);
        self.forward[self.dfa.start() as usize] = true;

        for k in 0..ell {
            let (done, next) = self.forward.split_at_mut((k + 1) * s);
            let here = &done[k * s..];
            let dom = vars.domain_words(k);
            for q in 0..s {
                if here[q] {
                    for_each_bit(dom, |sym| {
                        next[self.dfa.step(q as u32, sym) as usize] = true
                    });
                }
            }
        }

        for q in 0..s {
            self.backward[ell * s + q] =
                self.forward[ell * s + q] && self.dfa.is_accepting(q as u32);
        }
        self.mask.resize(vars.words_per_domain(), 0);
        for k in (0..ell).rev() {
            self.mask.iter_mut().for_each(|w| *w = 0);
            let (head, tail) = self.backward.split_at_mut((k + 1) * s);
            let here = &mut head[k * s..];
            let next = &tail[..s];
            let dom = vars.domain_words(k);
            let mask = &mut self.mask;
            for q in 0..s {
                if !self.forward[k * s + q] {
                    continue;
                }
                for_each_bit(dom, |sym| {
                    if next[self.dfa.step(q as u32, sym) as usize] {
                        here[q] = true;
                        mask[sym / 64] |= 1u64 << (sym % 64);
                    }
                });
            }
            if !vars.retain(k, &self.mask) {
                return Outcome::Fail;
            }
        }
        Outcome::Continue
    }
}
