use std::collections::BTreeSet;

use thiserror::Error;

use super::StepId;

/// A strict partial order over steps, maintained as its transitive closure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderingConstraints {
    closure: BTreeSet<(StepId, StepId)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("ordering {before} < {after} would create a cycle")]
pub struct CycleError {
    pub before: StepId,
    pub after: StepId,
}

impl OrderingConstraints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn precedes(&self, before: StepId, after: StepId) -> bool {
        self.closure.contains(&(before, after))
    }

    /// Adds `before < after` and restores transitivity. Adding an already
    /// implied constraint leaves the closure unchanged.
    pub fn add(&mut self, before: StepId, after: StepId) -> Result<(), CycleError> {
        if before == after || self.precedes(after, before) {
            return Err(CycleError { before, after });
        }
        if self.precedes(before, after) {
            return Ok(());
        }
        let mut befores: Vec<StepId> = vec![before];
        let mut afters: Vec<StepId> = vec![after];
        for &(a, b) in &self.closure {
            if b == before {
                befores.push(a);
            }
            if a == after {
                afters.push(b);
            }
        }
        for &a in &befores {
            for &b in &afters {
                self.closure.insert((a, b));
            }
        }
        Ok(())
    }

    /// All (before, after) pairs of the closure, in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (StepId, StepId)> + '_ {
        self.closure.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// Steps strictly before `id`.
    pub fn predecessors(&self, id: StepId) -> impl Iterator<Item = StepId> + '_ {
        self.closure
            .iter()
            .filter(move |(_, b)| *b == id)
            .map(|(a, _)| *a)
    }

    /// Sanity check: irreflexive and transitive.
    pub fn is_strict_partial_order(&self) -> bool {
        for &(a, b) in &self.closure {
            if a == b || self.precedes(b, a) {
                return false;
            }
            for &(c, d) in &self.closure {
                if c == b && !self.precedes(a, d) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> StepId {
        StepId(n)
    }

    #[test]
    fn add_records_the_pair() {
        let mut o = OrderingConstraints::new();
        o.add(s(0), s(1)).unwrap();
        assert!(o.precedes(s(0), s(1)));
        assert!(!o.precedes(s(1), s(0)));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let mut o = OrderingConstraints::new();
        o.add(s(0), s(1)).unwrap();
        assert_eq!(
            o.add(s(1), s(0)),
            Err(CycleError {
                before: s(1),
                after: s(0)
            })
        );
        assert_eq!(
            o.add(s(0), s(0)),
            Err(CycleError {
                before: s(0),
                after: s(0)
            })
        );
    }

    #[test]
    fn implied_constraints_leave_the_closure_unchanged() {
        let mut o = OrderingConstraints::new();
        o.add(s(0), s(1)).unwrap();
        o.add(s(1), s(2)).unwrap();
        let before = o.clone();
        o.add(s(0), s(2)).unwrap();
        assert_eq!(o, before);
    }

    #[test]
    fn transitive_cycle_is_rejected() {
        let mut o = OrderingConstraints::new();
        o.add(s(0), s(1)).unwrap();
        o.add(s(1), s(2)).unwrap();
        assert!(o.add(s(2), s(0)).is_err());
    }

    #[test]
    fn closure_stays_a_strict_partial_order() {
        let mut o = OrderingConstraints::new();
        for (a, b) in [(0, 2), (2, 3), (1, 3), (0, 4), (4, 5), (5, 3)] {
            o.add(s(a), s(b)).unwrap();
        }
        assert!(o.is_strict_partial_order());
    }
}
