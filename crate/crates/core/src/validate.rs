//! Independent oracles: a sequential executor, an exhaustive linear-extension
//! checker, a brute-force breadth-first planner for small instances, and a
//! seeded problem generator for property suites.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::FunctionCatalog;
use crate::model::{
    applicable, apply, ground, Atom, EntityClass, GroundAction, Literal, ObjectRef, Problem,
    Semantics, State,
};
use crate::pop::{PartialPlan, StepId};

/// Where a sequential execution failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailurePoint {
    /// Zero-based index of the inapplicable action.
    Step(usize),
    /// Every action applied but the goal does not hold in the final state.
    Goal,
}

impl fmt::Display for FailurePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailurePoint::Step(i) => write!(f, "step {}", i + 1),
            FailurePoint::Goal => f.write_str("goal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    GoalSatisfied,
    Failed { at: FailurePoint, missing: Literal },
}

impl Verdict {
    pub fn is_goal_satisfied(&self) -> bool {
        matches!(self, Verdict::GoalSatisfied)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::GoalSatisfied => f.write_str("goal-satisfied"),
            Verdict::Failed { at, missing } => write!(f, "failed-at({at}, {missing})"),
        }
    }
}

/// States visited while executing a sequence, one entry per applied action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub initial: State,
    pub entries: Vec<(GroundAction, State)>,
    pub verdict: Verdict,
}

impl ExecutionTrace {
    pub fn final_state(&self) -> &State {
        self.entries.last().map(|(_, s)| s).unwrap_or(&self.initial)
    }
}

/// Applies the actions left to right, stopping at the first inapplicable one.
pub fn execute(
    problem: &Problem,
    sequence: &[GroundAction],
    semantics: Semantics,
) -> ExecutionTrace {
    let mut entries = Vec::with_capacity(sequence.len());
    let mut state = problem.init.clone();
    for (index, action) in sequence.iter().enumerate() {
        match apply(&state, action, semantics) {
            Ok(next) => {
                entries.push((action.clone(), next.clone()));
                state = next;
            }
            Err(failure) => {
                return ExecutionTrace {
                    initial: problem.init.clone(),
                    entries,
                    verdict: Verdict::Failed {
                        at: FailurePoint::Step(index),
                        missing: failure.missing,
                    },
                };
            }
        }
    }
    let verdict = match state.first_unsatisfied(&problem.goal) {
        None => Verdict::GoalSatisfied,
        Some(missing) => Verdict::Failed {
            at: FailurePoint::Goal,
            missing: missing.clone(),
        },
    };
    ExecutionTrace {
        initial: problem.init.clone(),
        entries,
        verdict,
    }
}

/// Exhaustive checking is bounded to this many non-dummy steps; larger plans
/// fall back to the structural causal-link check.
pub const EXHAUSTIVE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialVerdict {
    /// Every linear extension reaches the goal.
    AllExtensionsValid {
        extensions: usize,
    },
    /// Some extension fails; the counterexample is reported.
    ExtensionFails {
        extension: Vec<StepId>,
        verdict: Verdict,
    },
    /// Too many steps to enumerate; causal-link structure checks out.
    StructurallyValid,
    StructurallyInvalid {
        reason: String,
    },
}

impl PartialVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(
            self,
            PartialVerdict::AllExtensionsValid { .. } | PartialVerdict::StructurallyValid
        )
    }
}

/// Enumerates every linear extension of the plan's non-dummy steps,
/// lowest-id-first at each choice.
pub fn linear_extensions(plan: &PartialPlan) -> Vec<Vec<StepId>> {
    let ids = plan.action_ids();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(ids.len());
    let mut used = BTreeSet::new();
    extend_all(plan, &ids, &mut prefix, &mut used, &mut out);
    out
}

fn extend_all(
    plan: &PartialPlan,
    ids: &[StepId],
    prefix: &mut Vec<StepId>,
    used: &mut BTreeSet<StepId>,
    out: &mut Vec<Vec<StepId>>,
) {
    if prefix.len() == ids.len() {
        out.push(prefix.clone());
        return;
    }
    for &id in ids {
        if used.contains(&id) {
            continue;
        }
        let ready = plan
            .ordering
            .predecessors(id)
            .all(|p| used.contains(&p) || !ids.contains(&p));
        if !ready {
            continue;
        }
        used.insert(id);
        prefix.push(id);
        extend_all(plan, ids, prefix, used, out);
        prefix.pop();
        used.remove(&id);
    }
}

fn actions_for(plan: &PartialPlan, order: &[StepId]) -> Vec<GroundAction> {
    order
        .iter()
        .filter_map(|id| plan.step(*id).action().cloned())
        .collect()
}

/// Validates a partial plan. Small plans are checked by executing every
/// linear extension; larger ones by causal-link structure.
pub fn validate_partial(
    plan: &PartialPlan,
    problem: &Problem,
    semantics: Semantics,
) -> PartialVerdict {
    if plan.action_ids().len() <= EXHAUSTIVE_LIMIT {
        let extensions = linear_extensions(plan);
        let total = extensions.len();
        for extension in extensions {
            let trace = execute(problem, &actions_for(plan, &extension), semantics);
            if !trace.verdict.is_goal_satisfied() {
                return PartialVerdict::ExtensionFails {
                    extension,
                    verdict: trace.verdict,
                };
            }
        }
        PartialVerdict::AllExtensionsValid { extensions: total }
    } else {
        match structural_check(plan, problem, semantics) {
            Ok(()) => PartialVerdict::StructurallyValid,
            Err(reason) => PartialVerdict::StructurallyInvalid { reason },
        }
    }
}

/// Causal-link validity: acyclic ordering, every precondition supported by
/// exactly one well-formed link, and no unresolved threats.
pub fn structural_check(
    plan: &PartialPlan,
    problem: &Problem,
    semantics: Semantics,
) -> Result<(), String> {
    if !plan.ordering.is_strict_partial_order() {
        return Err("ordering is not a strict partial order".to_string());
    }
    for link in &plan.links {
        if !plan.ordering.precedes(link.producer, link.consumer) {
            return Err(format!("link {link} is not ordered"));
        }
        if link.condition.positive {
            if !plan.step_adds(link.producer).contains(&link.condition.atom) {
                return Err(format!("link {link}: producer does not add the condition"));
            }
        } else if plan.step(link.producer).id != crate::pop::START
            || problem.init.contains(&link.condition.atom)
        {
            return Err(format!(
                "link {link}: negative condition is not supported by start"
            ));
        }
        if !plan.step_pre(link.consumer).contains(&link.condition) {
            return Err(format!(
                "link {link}: consumer does not require the condition"
            ));
        }
    }
    for step in &plan.steps {
        let preconditions: BTreeSet<&Literal> = plan.step_pre(step.id).iter().collect();
        for pre in preconditions {
            let supports = plan
                .links
                .iter()
                .filter(|l| l.consumer == step.id && l.condition == *pre)
                .count();
            if supports != 1 {
                return Err(format!(
                    "precondition {pre} of {} has {supports} supporting links",
                    step.label()
                ));
            }
        }
    }
    for (idx, link) in plan.links.iter().enumerate() {
        for step in &plan.steps {
            if step.id == link.producer || step.id == link.consumer {
                continue;
            }
            let harmful = if link.condition.positive {
                plan.step_deletes(step.id, semantics)
                    .contains(&link.condition.atom)
            } else {
                plan.step_adds(step.id).contains(&link.condition.atom)
            };
            if harmful
                && !plan.ordering.precedes(step.id, link.producer)
                && !plan.ordering.precedes(link.consumer, step.id)
            {
                return Err(format!(
                    "link #{idx} {link} is threatened by {}",
                    step.label()
                ));
            }
        }
    }
    Ok(())
}

/// Result of the breadth-first oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// A shortest goal-reaching sequence, or None if none exists within the
    /// depth bound.
    pub plan: Option<Vec<GroundAction>>,
    pub explored: usize,
    pub depth_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("state cap exceeded after exploring {explored} states")]
pub struct OracleExhausted {
    pub explored: usize,
}

pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Breadth-first search over ground actions from the initial state; returns a
/// shortest plan within `depth_bound`, with ties broken by action order.
pub fn bfs_shortest_plan(
    problem: &Problem,
    catalog: &FunctionCatalog,
    depth_bound: usize,
    semantics: Semantics,
) -> Result<OracleResult, OracleExhausted> {
    bfs_shortest_plan_capped(problem, catalog, depth_bound, semantics, DEFAULT_STATE_CAP)
}

pub fn bfs_shortest_plan_capped(
    problem: &Problem,
    catalog: &FunctionCatalog,
    depth_bound: usize,
    semantics: Semantics,
    state_cap: usize,
) -> Result<OracleResult, OracleExhausted> {
    let actions: Vec<GroundAction> = catalog
        .schemas
        .iter()
        .flat_map(|schema| ground(schema, &problem.objects))
        .collect();
    let mut visited: BTreeSet<State> = BTreeSet::new();
    visited.insert(problem.init.clone());
    let mut queue: VecDeque<(State, Vec<usize>)> = VecDeque::new();
    queue.push_back((problem.init.clone(), Vec::new()));
    while let Some((state, path)) = queue.pop_front() {
        if state.satisfies_all(&problem.goal) {
            return Ok(OracleResult {
                plan: Some(path.iter().map(|&i| actions[i].clone()).collect()),
                explored: visited.len(),
                depth_bound,
            });
        }
        if path.len() == depth_bound {
            continue;
        }
        for (index, action) in actions.iter().enumerate() {
            if !applicable(&state, action) {
                continue;
            }
            let next = apply(&state, action, semantics).expect("checked applicable");
            if visited.contains(&next) {
                continue;
            }
            if visited.len() >= state_cap {
                return Err(OracleExhausted {
                    explored: visited.len(),
                });
            }
            visited.insert(next.clone());
            let mut next_path = path.clone();
            next_path.push(index);
            queue.push_back((next, next_path));
        }
    }
    Ok(OracleResult {
        plan: None,
        explored: visited.len(),
        depth_bound,
    })
}

/// Generates a problem that is solvable by construction in monotone mode: a
/// random initial state is rolled forward by a short random walk and the goal
/// is sampled from the reached state.
pub fn random_walk_problem(
    catalog: &FunctionCatalog,
    seed: u64,
    max_objects: usize,
    max_walk: usize,
) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["alpha", "beta", "gamma", "delta", "epsilon"];
    let count = rng.gen_range(1..=max_objects.min(names.len()));
    let objects: Vec<ObjectRef> = names[..count]
        .iter()
        .map(|name| {
            let class = EntityClass::ALL[rng.gen_range(0..EntityClass::ALL.len())];
            ObjectRef::new(*name, class)
        })
        .collect();
    let stored = |o: &ObjectRef| Atom::new(crate::model::Predicate::new("stored"), o.clone());
    let mut init = State::new();
    for object in &objects {
        if rng.gen_bool(0.75) {
            init.insert(stored(object));
        }
    }
    if init.is_empty() {
        init.insert(stored(&objects[0]));
    }

    let mut state = init.clone();
    let walk = rng.gen_range(0..=max_walk);
    for _ in 0..walk {
        let applicable_now: Vec<GroundAction> = catalog
            .schemas
            .iter()
            .flat_map(|schema| ground(schema, &objects))
            .filter(|a| applicable(&state, a))
            .collect();
        if applicable_now.is_empty() {
            break;
        }
        let action = &applicable_now[rng.gen_range(0..applicable_now.len())];
        state = apply(&state, action, Semantics::Monotone).expect("filtered applicable");
    }

    let atoms: Vec<Atom> = state.atoms().cloned().collect();
    let goal_size = rng.gen_range(1..=3.min(atoms.len()));
    let goal = atoms
        .choose_multiple(&mut rng, goal_size)
        .cloned()
        .map(Literal::positive)
        .collect();
    Problem::new(format!("random-{seed}"), objects, init, goal)
}
