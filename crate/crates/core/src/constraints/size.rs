use crate::engine::{Outcome, PatternVars, Value};

/// `size(P, n)`: the first `n` variables cannot be `□`.
///
/// A root-only reformulation; nothing needs to run during search.
pub fn min_size_post(vars: &mut PatternVars, n: usize) -> Outcome {
    if n > vars.ell() {
        return Outcome::Fail;
    }
    for j in 0..n {
        vars.remove(j, Value::Empty);
        if vars.is_empty(j) {
            return Outcome::Fail;
        }
    }
    Outcome::Continue
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_empty_from_prefix() {
        let mut v = PatternVars::new(5, 4);
        assert_eq!(min_size_post(&mut v, 3), Outcome::Continue);
        for j in 0..3 {
            assert!(!v.contains(j, Value::Empty));
        }
        assert!(v.contains(3, Value::Empty));
        // P1 never had □, so only P2 and P3 changed.
        assert_eq!(v.removals(), 2);
    }

    #[test]
    fn size_one_is_a_no_op() {
        let mut v = PatternVars::new(5, 4);
        assert_eq!(min_size_post(&mut v, 1), Outcome::Continue);
        assert_eq!(v.removals(), 0);
    }

    #[test]
    fn size_above_capacity_fails() {
        let mut v = PatternVars::new(5, 4);
        assert_eq!(min_size_post(&mut v, 6), Outcome::Fail);
    }
}
