//! Partial-order causal-link planner: plan structure, backtracking solver,
//! and the JSON plan document.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Atom, GroundAction, Literal, Problem, Semantics};

mod ordering;
mod plan_doc;
mod solver;

pub use ordering::{CycleError, OrderingConstraints};
pub use plan_doc::{PlanDoc, PlanDocError, StepDoc};
pub use solver::{
    achiever_candidates, protect, select_open_goal, solve, Achiever, Solution, SolveError,
    SolverConfig, DEFAULT_MAX_ITERATIONS,
};

/// Index of a step within its plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepId(pub usize);

impl fmt::Display for StepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// Dummy producer of the initial state.
    Start,
    /// Dummy consumer of the goal.
    Finish,
    Action(GroundAction),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: StepId,
    pub kind: StepKind,
}

impl Step {
    pub fn is_dummy(&self) -> bool {
        !matches!(self.kind, StepKind::Action(_))
    }

    pub fn action(&self) -> Option<&GroundAction> {
        match &self.kind {
            StepKind::Action(a) => Some(a),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            StepKind::Start => "start".to_string(),
            StepKind::Finish => "finish".to_string(),
            StepKind::Action(a) => a.to_string(),
        }
    }
}

/// Producer supplies `condition` to consumer; the span between them must stay
/// protected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CausalLink {
    pub producer: StepId,
    pub condition: Literal,
    pub consumer: StepId,
}

impl fmt::Display for CausalLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} --{}--> {})",
            self.producer, self.condition, self.consumer
        )
    }
}

/// An unsupported precondition of a step. The derived order (consumer id,
/// then literal) is the deterministic selection order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenGoal {
    pub consumer: StepId,
    pub goal: Literal,
}

/// Open goals awaiting support, ordered by the selection rule.
pub type Agenda = BTreeSet<OpenGoal>;

/// The state of the plan-space search: steps, ordering constraints, causal
/// links and the agenda of open goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPlan {
    pub steps: Vec<Step>,
    pub ordering: OrderingConstraints,
    pub links: Vec<CausalLink>,
    pub agenda: Agenda,
    init: Vec<Atom>,
    goal: Vec<Literal>,
}

pub const START: StepId = StepId(0);
pub const FINISH: StepId = StepId(1);

impl PartialPlan {
    /// The empty plan: start before finish, every goal conjunct on the agenda.
    pub fn initial(problem: &Problem) -> Self {
        let mut ordering = OrderingConstraints::new();
        ordering.add(START, FINISH).expect("start < finish");
        let agenda = problem
            .goal
            .iter()
            .map(|g| OpenGoal {
                consumer: FINISH,
                goal: g.clone(),
            })
            .collect();
        PartialPlan {
            steps: vec![
                Step {
                    id: START,
                    kind: StepKind::Start,
                },
                Step {
                    id: FINISH,
                    kind: StepKind::Finish,
                },
            ],
            ordering,
            links: Vec::new(),
            agenda,
            init: problem.init.atoms().cloned().collect(),
            goal: problem.goal.clone(),
        }
    }

    pub fn step(&self, id: StepId) -> &Step {
        &self.steps[id.0]
    }

    /// Atoms the step establishes. Start establishes the initial state.
    pub fn step_adds(&self, id: StepId) -> &[Atom] {
        match &self.step(id).kind {
            StepKind::Start => &self.init,
            StepKind::Finish => &[],
            StepKind::Action(a) => &a.add,
        }
    }

    /// Preconditions the step requires. Finish requires the goal.
    pub fn step_pre(&self, id: StepId) -> &[Literal] {
        match &self.step(id).kind {
            StepKind::Start => &[],
            StepKind::Finish => &self.goal,
            StepKind::Action(a) => &a.pre,
        }
    }

    /// Effective delete list of the step under `semantics`. The dummies are
    /// never executed and delete nothing.
    pub fn step_deletes(&self, id: StepId, semantics: Semantics) -> Vec<Atom> {
        match &self.step(id).kind {
            StepKind::Action(a) => a.deletes(semantics),
            _ => Vec::new(),
        }
    }

    pub fn non_dummy_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| !s.is_dummy())
    }

    /// Ids of all steps that are real actions, ascending.
    pub fn action_ids(&self) -> Vec<StepId> {
        self.non_dummy_steps().map(|s| s.id).collect()
    }

    /// Appends a fresh action step (unordered except for the universal
    /// start/finish constraints) and returns its id.
    pub fn push_action(&mut self, action: GroundAction) -> StepId {
        let id = StepId(self.steps.len());
        self.steps.push(Step {
            id,
            kind: StepKind::Action(action),
        });
        self.ordering
            .add(START, id)
            .expect("fresh step after start");
        self.ordering
            .add(id, FINISH)
            .expect("fresh step before finish");
        id
    }

    /// A total order of all steps consistent with the ordering constraints,
    /// deterministic by taking the lowest ready id first.
    pub fn linearize(&self) -> Vec<StepId> {
        let mut placed: BTreeSet<StepId> = BTreeSet::new();
        let mut order = Vec::with_capacity(self.steps.len());
        while order.len() < self.steps.len() {
            let next = self
                .steps
                .iter()
                .map(|s| s.id)
                .find(|id| {
                    !placed.contains(id)
                        && self.ordering.predecessors(*id).all(|p| placed.contains(&p))
                })
                .expect("acyclic ordering always has a ready step");
            placed.insert(next);
            order.push(next);
        }
        order
    }

    /// Groups the non-dummy steps by the length of the longest ordering chain
    /// from start: steps in the same layer are mutually unordered.
    pub fn layering(&self) -> Vec<Vec<StepId>> {
        let order = self.linearize();
        let mut depth = vec![0usize; self.steps.len()];
        for &id in &order {
            let best = self
                .ordering
                .predecessors(id)
                .map(|p| depth[p.0] + 1)
                .max()
                .unwrap_or(0);
            depth[id.0] = best;
        }
        let max_depth = self
            .non_dummy_steps()
            .map(|s| depth[s.id.0])
            .max()
            .unwrap_or(0);
        let mut layers: Vec<Vec<StepId>> = vec![Vec::new(); max_depth];
        for step in self.non_dummy_steps() {
            layers[depth[step.id.0] - 1].push(step.id);
        }
        layers.retain(|l| !l.is_empty());
        layers
    }

    /// Solution shape check: nothing open, a valid strict partial order, and
    /// no unprotected causal link.
    pub fn is_solution(&self, semantics: Semantics) -> bool {
        self.agenda.is_empty()
            && self.ordering.is_strict_partial_order()
            && solver::find_threat(self, semantics).is_none()
    }
}
