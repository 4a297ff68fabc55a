use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::time::{Duration, Instant};

use super::{Outcome, PatternVars, Value};
use crate::constraints::{self, Constraints, SideFilter};
use crate::error::{Error, Result};
use crate::pp::PrefixProjection;
use crate::seqdb::{ItemId, SequenceDatabase};

/// A mined pattern: a non-empty item sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(pub Vec<ItemId>);

impl Pattern {
    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Search counters. They are specific to this engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MiningStats {
    /// Values tried during branching.
    pub nodes: u64,
    /// Individual filter invocations (prefix-projection and side filters).
    pub filter_calls: u64,
    /// Domain values removed by propagation.
    pub value_removals: u64,
    /// Branches where propagation failed.
    pub failures: u64,
    /// Patterns emitted.
    pub solutions: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Pattern capacity ℓ; `None` uses the longest sequence length.
    pub ell: Option<usize>,
    /// Absolute minimum support.
    pub minsup: u32,
    pub constraints: Constraints,
}

impl SearchConfig {
    pub fn new(minsup: u32) -> Self {
        Self {
            ell: None,
            minsup,
            constraints: Constraints::default(),
        }
    }

    pub fn with_constraints(mut self, constraints: Constraints) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_ell(mut self, ell: usize) -> Self {
        self.ell = Some(ell);
        self
    }
}

/// State of a depth-first search over the pattern variables.
pub struct SearchState<'db> {
    db: &'db SequenceDatabase,
    vars: PatternVars,
    pp: PrefixProjection<'db>,
    filters: Vec<Box<dyn SideFilter>>,
    // Values assigned by branching, P1..Pdepth.
    assigned: Vec<Value>,
    // Trail mark taken before each assignment.
    frames: Vec<usize>,
    root_failed: bool,
    stats: MiningStats,
}

impl std::fmt::Debug for SearchState<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SearchState")
            .field("ell", &self.vars.ell())
            .field("depth", &self.depth())
            .field("minsup", &self.pp.minsup())
            .field("filters", &self.filters)
            .field("root_failed", &self.root_failed)
            .finish()
    }
}

impl<'db> SearchState<'db> {
    /// Sets up the variables, posts the constraints and propagates at the root.
    pub fn new(db: &'db SequenceDatabase, config: SearchConfig) -> Result<Self> {
        if config.minsup < 1 {
            return Err(Error::Parameter("minsup must be at least 1".into()));
        }
        let ell = config.ell.unwrap_or_else(|| db.max_len());
        if ell < 1 {
            return Err(Error::Parameter(
                "pattern capacity ℓ must be at least 1".into(),
            ));
        }
        let vars = PatternVars::new(ell, db.num_items());
        let pp = PrefixProjection::new(db, config.minsup, vars.words_per_domain());
        let mut state = Self {
            db,
            vars,
            pp,
            filters: Vec::new(),
            assigned: Vec::new(),
            frames: Vec::new(),
            root_failed: false,
            stats: MiningStats::default(),
        };
        let (posted, filters) = constraints::post(&config.constraints, &mut state.vars, db)?;
        state.filters = filters;
        state.root_failed = posted.is_fail() || state.propagate(0).is_fail();
        Ok(state)
    }

    pub fn db(&self) -> &'db SequenceDatabase {
        self.db
    }

    pub fn vars(&self) -> &PatternVars {
        &self.vars
    }

    pub fn ell(&self) -> usize {
        self.vars.ell()
    }

    pub fn minsup(&self) -> u32 {
        self.pp.minsup()
    }

    /// Number of variables assigned by branching.
    pub fn depth(&self) -> usize {
        self.assigned.len()
    }

    pub fn assigned(&self) -> &[Value] {
        &self.assigned
    }

    pub fn prefix_projection(&self) -> &PrefixProjection<'db> {
        &self.pp
    }

    pub fn root_failed(&self) -> bool {
        self.root_failed
    }

    pub fn stats(&self) -> MiningStats {
        self.stats
    }

    /// Runs the filters after `P1..Pi` have been assigned: prefix-projection
    /// once, then side filters until nothing changes.
    pub fn propagate(&mut self, i: usize) -> Outcome {
        let before = self.vars.removals();
        let outcome = self.fixpoint(i);
        self.stats.value_removals += self.vars.removals().saturating_sub(before);
        outcome
    }

    fn fixpoint(&mut self, i: usize) -> Outcome {
        self.stats.filter_calls += 1;
        if self.pp.filter(&mut self.vars, i).is_fail() {
            return Outcome::Fail;
        }
        loop {
            let before = self.vars.removals();
            for f in &mut self.filters {
                self.stats.filter_calls += 1;
                if f.propagate(&mut self.vars).is_fail() {
                    return Outcome::Fail;
                }
            }
            if self.vars.removals() == before {
                return Outcome::Continue;
            }
        }
    }

    /// Assigns the next variable to `value` and propagates.
    ///
    /// On `Fail` the state must be restored with [`restore`](Self::restore).
    pub fn push(&mut self, value: Value) -> Outcome {
        let i = self.depth();
        assert!(i < self.ell(), "all variables are assigned");
        self.frames.push(self.vars.mark());
        self.assigned.push(value);
        if !self.vars.assign(i, value) {
            return Outcome::Fail;
        }
        self.propagate(i + 1)
    }

    /// Backtracks to the state right after the first `depth` assignments.
    pub fn restore(&mut self, depth: usize) {
        if depth >= self.depth() {
            return;
        }
        self.vars.undo_to(self.frames[depth]);
        self.frames.truncate(depth);
        self.assigned.truncate(depth);
        // Item assignments are always a prefix of `assigned`; a □ ends it.
        let items = self
            .assigned
            .iter()
            .take_while(|v| **v != Value::Empty)
            .count();
        self.pp.truncate(items);
    }

    /// Hash of the domains, the projection stack and the assignment.
    pub fn checksum(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.vars.all_words().hash(&mut h);
        self.pp.levels().hash(&mut h);
        self.assigned.hash(&mut h);
        h.finish()
    }

    /// Enumerates every solution depth-first, calling `emit` with each
    /// pattern and its support. Values are tried `□` first, then items in
    /// ascending id order, so patterns come out in prefix preorder.
    pub fn solve_all<F>(&mut self, mut emit: F) -> MiningStats
    where
        F: FnMut(&Pattern, u32),
    {
        let start = Instant::now();
        if !self.root_failed {
            self.dfs(&mut emit);
        }
        self.stats.elapsed += start.elapsed();
        self.stats
    }

    fn dfs<F>(&mut self, emit: &mut F)
    where
        F: FnMut(&Pattern, u32),
    {
        let i = self.depth();
        if i == self.ell() {
            self.emit(emit);
            return;
        }
        for value in self.vars.values(i) {
            self.stats.nodes += 1;
            match self.push(value) {
                Outcome::Fail => self.stats.failures += 1,
                Outcome::Continue if value == Value::Empty => self.emit(emit),
                Outcome::Continue => self.dfs(emit),
            }
            self.restore(i);
        }
    }

    fn emit<F>(&mut self, emit: &mut F)
    where
        F: FnMut(&Pattern, u32),
    {
        let pattern = decode_solution(&self.assigned).expect("rule 1 forbids an empty pattern");
        let support = self.pp.current().len() as u32;
        self.stats.solutions += 1;
        emit(&pattern, support);
    }

    /// Collects all solutions with their supports.
    pub fn collect(&mut self) -> Vec<(Pattern, u32)> {
        let mut out = Vec::new();
        self.solve_all(|p, s| out.push((p.clone(), s)));
        out
    }
}

/// Strips the `□` padding from a complete assignment.
///
/// Returns `None` for an assignment that starts with `□` or has an item
/// after a `□`.
pub fn decode_solution(assignment: &[Value]) -> Option<Pattern> {
    let items: Vec<ItemId> = assignment
        .iter()
        .map_while(|v| match v {
            Value::Item(it) => Some(*it),
            Value::Empty => None,
        })
        .collect();
    if items.is_empty() || assignment[items.len()..].iter().any(|v| *v != Value::Empty) {
        return None;
    }
    Some(Pattern(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::tests::{ids, sdb1};
    use std::collections::BTreeSet;

    fn names(db: &SequenceDatabase, sols: &[(Pattern, u32)]) -> BTreeSet<String> {
        sols.iter()
            .map(|(p, _)| db.format_items(p.items()))
            .collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn item(db: &SequenceDatabase, name: &str) -> Value {
        Value::Item(ids(db, name)[0])
    }

    #[test]
    fn root_domains() {
        let db = sdb1();
        let st = SearchState::new(&db, SearchConfig::new(2).with_ell(5)).unwrap();
        // D has support 1 and is pruned at the root; A, B, C stay.
        assert_eq!(st.vars().values(0), ["A", "B", "C"].map(|n| item(&db, n)));
        for j in 1..5 {
            assert_eq!(st.vars().values(j)[0], Value::Empty);
            assert_eq!(st.vars().size(j), 4);
        }
        assert_eq!(
            SearchState::new(&db, SearchConfig::new(2)).unwrap().ell(),
            5
        );
    }

    #[test]
    fn root_domains_without_pruning() {
        let db = sdb1();
        let st = SearchState::new(&db, SearchConfig::new(1).with_ell(5)).unwrap();
        assert_eq!(st.vars().size(0), 4);
        assert!(!st.vars().contains(0, Value::Empty));
        for j in 1..5 {
            assert_eq!(st.vars().size(j), 5);
        }
    }

    #[test]
    fn parameter_errors() {
        let db = sdb1();
        assert!(matches!(
            SearchState::new(&db, SearchConfig::new(0)),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            SearchState::new(&db, SearchConfig::new(1).with_ell(0)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn propagate_after_a() {
        let db = sdb1();
        let mut st = SearchState::new(&db, SearchConfig::new(2).with_ell(5)).unwrap();
        assert_eq!(st.push(item(&db, "A")), Outcome::Continue);
        for j in 1..5 {
            assert!(!st.vars().contains(j, item(&db, "A")));
            assert!(!st.vars().contains(j, item(&db, "D")));
            assert!(st.vars().contains(j, item(&db, "B")));
            assert!(st.vars().contains(j, item(&db, "C")));
            assert!(st.vars().contains(j, Value::Empty));
        }
    }

    #[test]
    fn propagate_after_d_fails() {
        let db = sdb1();
        let mut st = SearchState::new(&db, SearchConfig::new(1).with_ell(5)).unwrap();
        // With minsup 2 D is gone at the root, so assign through a minsup-1
        // state and check the projection size directly.
        assert_eq!(st.push(item(&db, "D")), Outcome::Continue);
        assert_eq!(st.prefix_projection().current().len(), 1);

        let mut st = SearchState::new(&db, SearchConfig::new(2).with_ell(5)).unwrap();
        let mut vars = PatternVars::new(5, db.num_items());
        vars.assign(0, item(&db, "D"));
        let mut pp = PrefixProjection::new(&db, 2, vars.words_per_domain());
        assert_eq!(pp.filter(&mut vars, 1), Outcome::Fail);
        // The state API refuses D because it is no longer in D(P1).
        assert_eq!(st.push(item(&db, "D")), Outcome::Fail);
    }

    #[test]
    fn root_pruning_at_high_minsup() {
        let db = sdb1();
        let st = SearchState::new(&db, SearchConfig::new(4).with_ell(5)).unwrap();
        assert_eq!(st.vars().values(0), vec![item(&db, "B")]);
        assert_eq!(st.vars().values(1), vec![Value::Empty, item(&db, "B")]);
    }

    #[test]
    fn empty_then_padding() {
        let db = sdb1();
        let mut st = SearchState::new(&db, SearchConfig::new(2).with_ell(5)).unwrap();
        st.push(item(&db, "A"));
        assert_eq!(st.push(Value::Empty), Outcome::Continue);
        for j in 2..5 {
            assert_eq!(st.vars().value(j), Some(Value::Empty));
        }
    }

    #[test]
    fn solve_frequency_only() {
        let db = sdb1();
        let sols = SearchState::new(&db, SearchConfig::new(2))
            .unwrap()
            .collect();
        assert_eq!(
            names(&db, &sols),
            set(&["A", "B", "C", "A B", "A C", "B B", "B C", "A B C", "B B C"])
        );
        assert_eq!(sols.len(), 9);
        // Preorder: each prefix comes right before its extensions.
        let order: Vec<String> = sols
            .iter()
            .map(|(p, _)| db.format_items(p.items()))
            .collect();
        assert_eq!(
            order,
            ["A", "A B", "A B C", "A C", "B", "B B", "B B C", "B C", "C"]
        );
        let sup: Vec<u32> = sols.iter().map(|(_, s)| *s).collect();
        assert_eq!(sup, [3, 3, 2, 2, 4, 2, 2, 3, 3]);
    }

    #[test]
    fn solve_minsup_above_m() {
        let db = sdb1();
        let mut st = SearchState::new(&db, SearchConfig::new(5)).unwrap();
        assert!(st.root_failed());
        assert!(st.collect().is_empty());
    }

    #[test]
    fn solve_with_min_size() {
        let db = sdb1();
        let c = Constraints {
            min_size: Some(3),
            ..Default::default()
        };
        let sols = SearchState::new(&db, SearchConfig::new(2).with_constraints(c))
            .unwrap()
            .collect();
        assert_eq!(names(&db, &sols), set(&["A B C", "B B C"]));
    }

    #[test]
    fn decode_examples() {
        let db = sdb1();
        let [a, b, c] = ["A", "B", "C"].map(|n| item(&db, n));
        let e = Value::Empty;
        assert_eq!(
            decode_solution(&[a, c, e, e, e]).unwrap().items(),
            &ids(&db, "A C")[..]
        );
        assert_eq!(
            decode_solution(&[a, b, c, e, e]).unwrap().items(),
            &ids(&db, "A B C")[..]
        );
        assert_eq!(
            decode_solution(&[b, b, c, e, e]).unwrap().items(),
            &ids(&db, "B B C")[..]
        );
        assert_eq!(decode_solution(&[e, e]), None);
        assert_eq!(decode_solution(&[a, e, b]), None);
    }

    #[test]
    fn restore_returns_to_checkpoint() {
        let db = sdb1();
        let mut st = SearchState::new(&db, SearchConfig::new(2).with_ell(5)).unwrap();
        let root = st.checksum();
        st.push(item(&db, "A"));
        let after_a = st.checksum();
        assert_eq!(
            st.prefix_projection().levels()[1].pairs(),
            vec![(1, 2), (2, 3), (3, 2)]
        );
        st.push(item(&db, "C"));
        st.restore(1);
        assert_eq!(st.checksum(), after_a);
        assert_eq!(
            st.prefix_projection().levels()[1].pairs(),
            vec![(1, 2), (2, 3), (3, 2)]
        );
        st.restore(0);
        assert_eq!(st.checksum(), root);
        assert_eq!(st.prefix_projection().levels().len(), 1);
    }
}
