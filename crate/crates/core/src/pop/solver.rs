//! Backtracking plan-space search with causal-link protection.

use thiserror::Error;

use super::{CausalLink, OpenGoal, OrderingConstraints, PartialPlan, StepId, START};
use crate::catalog::{achievers, FunctionCatalog};
use crate::model::{Atom, GroundAction, ObjectRef, Problem, Semantics};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Hard cap on visited search nodes; exceeding it aborts the search.
    pub max_iterations: usize,
    pub semantics: Semantics,
    /// Offer existing steps as achievers before instantiating fresh ones.
    pub reuse_existing_steps: bool,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            semantics: Semantics::default(),
            reuse_existing_steps: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("unsolvable: the choice tree was exhausted after {iterations} iterations")]
    Unsolvable { iterations: usize },
    #[error("resource exhausted: iteration cap reached after {iterations} iterations")]
    ResourceExhausted { iterations: usize },
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub plan: PartialPlan,
    pub iterations: usize,
}

/// Deterministic agenda selection: lowest consumer id, then literal order.
/// Selection is not a backtracking point.
pub fn select_open_goal(agenda: &super::Agenda) -> Option<&OpenGoal> {
    agenda.first()
}

/// A way to close an open goal: reuse a step already in the plan or add a
/// fresh instantiation from the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Achiever {
    Existing(StepId),
    Fresh(GroundAction),
}

/// Candidates that achieve `goal`, existing steps (ascending id) before fresh
/// instances in catalog order. This is the solver's backtracking choice point.
pub fn achiever_candidates(
    goal: &Atom,
    plan: &PartialPlan,
    catalog: &FunctionCatalog,
    objects: &[ObjectRef],
    reuse: bool,
) -> Vec<Achiever> {
    let mut out = Vec::new();
    for step in &plan.steps {
        if (reuse || step.id == START) && plan.step_adds(step.id).contains(goal) {
            out.push(Achiever::Existing(step.id));
        }
    }
    out.extend(
        achievers(goal, catalog, objects)
            .into_iter()
            .map(Achiever::Fresh),
    );
    out
}

fn threatens(
    plan: &PartialPlan,
    ordering: &OrderingConstraints,
    link: &CausalLink,
    step: StepId,
    semantics: Semantics,
) -> bool {
    if step == link.producer || step == link.consumer {
        return false;
    }
    let harmful = if link.condition.positive {
        plan.step_deletes(step, semantics)
            .contains(&link.condition.atom)
    } else {
        plan.step_adds(step).contains(&link.condition.atom)
    };
    harmful && !ordering.precedes(step, link.producer) && !ordering.precedes(link.consumer, step)
}

/// First unresolved threat, scanning links in creation order and steps in id
/// order.
pub(super) fn find_threat(plan: &PartialPlan, semantics: Semantics) -> Option<(usize, StepId)> {
    for (idx, link) in plan.links.iter().enumerate() {
        for step in &plan.steps {
            if threatens(plan, &plan.ordering, link, step.id, semantics) {
                return Some((idx, step.id));
            }
        }
    }
    None
}

/// Resolves a potential threat of `step` against `link`. Returns the
/// consistent orderings to try: promotion (step before the producer), then
/// demotion (step after the consumer). A non-threat returns the ordering
/// unchanged; an empty result means the branch is dead.
pub fn protect(
    link: &CausalLink,
    step: StepId,
    plan: &PartialPlan,
    ordering: &OrderingConstraints,
    semantics: Semantics,
) -> Vec<OrderingConstraints> {
    if !threatens(plan, ordering, link, step, semantics) {
        return vec![ordering.clone()];
    }
    let mut alternatives = Vec::new();
    let mut promoted = ordering.clone();
    if promoted.add(step, link.producer).is_ok() {
        alternatives.push(promoted);
    }
    let mut demoted = ordering.clone();
    if demoted.add(link.consumer, step).is_ok() {
        alternatives.push(demoted);
    }
    alternatives
}

struct Search<'a> {
    problem: &'a Problem,
    catalog: &'a FunctionCatalog,
    config: &'a SolverConfig,
    iterations: usize,
    /// Untried alternatives, depth-first: the preferred child sits on top.
    stack: Vec<PartialPlan>,
}

impl Search<'_> {
    /// Skipping fresh duplicates of an action already in the plan keeps the
    /// choice tree finite. Sound only when nothing is ever deleted and the
    /// existing step can be reused instead.
    fn prune_duplicates(&self) -> bool {
        self.config.semantics == Semantics::Monotone && self.config.reuse_existing_steps
    }

    fn push_children(&mut self, plan: PartialPlan) {
        let semantics = self.config.semantics;
        if let Some((link_idx, threat)) = find_threat(&plan, semantics) {
            let link = plan.links[link_idx].clone();
            let alternatives = protect(&link, threat, &plan, &plan.ordering, semantics);
            for ordering in alternatives.into_iter().rev() {
                let mut child = plan.clone();
                child.ordering = ordering;
                self.stack.push(child);
            }
            return;
        }

        let open = plan
            .agenda
            .first()
            .cloned()
            .expect("caller checked the agenda");
        let mut base = plan;
        base.agenda.remove(&open);

        if !open.goal.positive {
            // Closed world: a negative goal holds when the atom is absent from
            // the initial state; adders are ordered away via the start link.
            if self.problem.init.contains(&open.goal.atom) {
                return;
            }
            let mut child = base;
            child.links.push(CausalLink {
                producer: START,
                condition: open.goal.clone(),
                consumer: open.consumer,
            });
            self.stack.push(child);
            return;
        }

        let candidates = achiever_candidates(
            &open.goal.atom,
            &base,
            self.catalog,
            &self.problem.objects,
            self.config.reuse_existing_steps,
        );
        let mut children = Vec::new();
        for candidate in candidates {
            match candidate {
                Achiever::Existing(producer) => {
                    if producer == open.consumer {
                        continue;
                    }
                    let mut child = base.clone();
                    if child.ordering.add(producer, open.consumer).is_err() {
                        continue;
                    }
                    child.links.push(CausalLink {
                        producer,
                        condition: open.goal.clone(),
                        consumer: open.consumer,
                    });
                    children.push(child);
                }
                Achiever::Fresh(action) => {
                    if self.prune_duplicates()
                        && base
                            .non_dummy_steps()
                            .any(|s| s.action().is_some_and(|a| a.same_instance(&action)))
                    {
                        continue;
                    }
                    let mut child = base.clone();
                    let id = child.push_action(action);
                    if child.ordering.add(id, open.consumer).is_err() {
                        continue;
                    }
                    child.links.push(CausalLink {
                        producer: id,
                        condition: open.goal.clone(),
                        consumer: open.consumer,
                    });
                    for goal in child.step_pre(id).to_vec() {
                        child.agenda.insert(OpenGoal { consumer: id, goal });
                    }
                    children.push(child);
                }
            }
        }
        self.stack.extend(children.into_iter().rev());
    }

    fn run(&mut self) -> Result<Solution, SolveError> {
        while let Some(plan) = self.stack.pop() {
            if self.iterations >= self.config.max_iterations {
                return Err(SolveError::ResourceExhausted {
                    iterations: self.iterations,
                });
            }
            self.iterations += 1;
            if plan.agenda.is_empty() && find_threat(&plan, self.config.semantics).is_none() {
                return Ok(Solution {
                    plan,
                    iterations: self.iterations,
                });
            }
            self.push_children(plan);
        }
        Err(SolveError::Unsolvable {
            iterations: self.iterations,
        })
    }
}

/// Runs the decomposition solver on a validated problem. The result is
/// deterministic for identical inputs.
pub fn solve(
    problem: &Problem,
    catalog: &FunctionCatalog,
    config: &SolverConfig,
) -> Result<Solution, SolveError> {
    let mut search = Search {
        problem,
        catalog,
        config,
        iterations: 0,
        stack: vec![PartialPlan::initial(problem)],
    };
    search.run()
}
