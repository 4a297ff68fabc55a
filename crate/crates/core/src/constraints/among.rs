use super::SideFilter;
use crate::engine::{Outcome, PatternVars, Value};
use crate::seqdb::ItemId;

/// `Among(P, {item}, min, max)` with bounds reasoning; `□` is never counted.
#[derive(Debug, Clone)]
pub struct AmongFilter {
    item: ItemId,
    min: usize,
    max: usize,
}

impl AmongFilter {
    pub fn new(item: ItemId, min: usize, max: usize) -> Self {
        debug_assert!(min <= max);
        Self { item, min, max }
    }
}

impl SideFilter for AmongFilter {
    fn name(&self) -> &'static str {
        "among"
    }

    fn propagate(&mut self, vars: &mut PatternVars) -> Outcome {
        let t = Value::Item(self.item);
        let mut assigned = 0;
        let mut open = Vec::new();
        for j in 0..vars.ell() {
            match vars.value(j) {
                Some(v) if v == t => assigned += 1,
                Some(_) => {}
                None if vars.contains(j, t) => open.push(j),
                None => {}
            }
        }
        if assigned > self.max || assigned + open.len() < self.min {
            return Outcome::Fail;
        }
        if assigned == self.max {
            for &j in &open {
                vars.remove(j, t);
            }
        } else if self.min > assigned && self.min - assigned == open.len() {
            // Every open position must take the item; the cheap part of that
            // is dropping □ where it is the only alternative.
            for &j in &open {
                if vars.size(j) == 2 && vars.contains(j, Value::Empty) {
                    vars.remove(j, Value::Empty);
                }
            }
        }
        Outcome::Continue
    }
}
