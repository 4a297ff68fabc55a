//! Side constraints on the pattern: minimum size, item occurrence bounds
//! and regular expressions, all expressed over the padded variables.

mod among;
mod regular;
mod size;

use std::fmt;

pub use among::AmongFilter;
pub use regular::RegularFilter;
pub use size::min_size_post;

use crate::engine::{Outcome, PatternVars};
use crate::error::{Error, Result};
use crate::regex::Dfa;
use crate::seqdb::{ItemId, SequenceDatabase};

/// A filter run inside the propagation fixpoint.
pub trait SideFilter: fmt::Debug {
    fn name(&self) -> &'static str;

    /// Prunes the domains; `Fail` when no solution is left.
    fn propagate(&mut self, vars: &mut PatternVars) -> Outcome;
}

/// `item` must occur between `min` and `max` times in the pattern.
/// `max == None` means ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ItemBound {
    pub item: ItemId,
    pub min: usize,
    pub max: Option<usize>,
}

impl ItemBound {
    pub fn require(item: ItemId) -> Self {
        Self {
            item,
            min: 1,
            max: None,
        }
    }

    pub fn exclude(item: ItemId) -> Self {
        Self {
            item,
            min: 0,
            max: Some(0),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub min_size: Option<usize>,
    pub items: Vec<ItemBound>,
    pub regex: Option<Dfa>,
}

impl Constraints {
    /// Adds `Among(P, {t}, min, max)` for every `t` in `items`.
    pub fn among(&mut self, items: &[ItemId], min: usize, max: Option<usize>) -> &mut Self {
        self.items
            .extend(items.iter().map(|&item| ItemBound { item, min, max }));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.min_size.is_none() && self.items.is_empty() && self.regex.is_none()
    }
}

/// Posts `constraints` on `vars`: applies root-only reformulations and
/// returns the filters that must run during search.
pub(crate) fn post(
    constraints: &Constraints,
    vars: &mut PatternVars,
    db: &SequenceDatabase,
) -> Result<(Outcome, Vec<Box<dyn SideFilter>>)> {
    let ell = vars.ell();
    let mut outcome = Outcome::Continue;
    if let Some(n) = constraints.min_size {
        if n == 0 {
            return Err(Error::Parameter("min-size must be at least 1".into()));
        }
        if min_size_post(vars, n).is_fail() {
            outcome = Outcome::Fail;
        }
    }

    let mut filters: Vec<Box<dyn SideFilter>> = Vec::new();
    for b in &constraints.items {
        if b.item.index() >= db.num_items() {
            return Err(Error::UnknownItem(format!("#{}", b.item.0)));
        }
        let max = b.max.unwrap_or(ell).min(ell);
        if b.min > b.max.unwrap_or(ell) {
            return Err(Error::Parameter(format!(
                "item bounds {}..{} are empty",
                b.min,
                b.max.unwrap_or(ell)
            )));
        }
        filters.push(Box::new(AmongFilter::new(b.item, b.min, max)));
    }
    if let Some(dfa) = &constraints.regex {
        if dfa.num_items() != db.num_items() {
            return Err(Error::Parameter(
                "regular expression was compiled for a different item dictionary".into(),
            ));
        }
        filters.push(Box::new(RegularFilter::new(dfa.clone(), ell)));
    }
    Ok((outcome, filters))
}
