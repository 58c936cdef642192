//! JSON plan document: the on-disk form of a solved plan.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CausalLink, PartialPlan, StepId};
use crate::catalog::FunctionCatalog;
use crate::model::{parse_literal, BindError, LiteralParseError, ObjectRef, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub id: usize,
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkDoc {
    pub producer_id: usize,
    pub atom: String,
    pub consumer_id: usize,
}

/// Serialized plan: all steps, the full ordering closure, causal links, the
/// layering and one canonical linearization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub steps: Vec<StepDoc>,
    pub ordering: Vec<(usize, usize)>,
    pub links: Vec<LinkDoc>,
    pub layers: Vec<Vec<usize>>,
    pub linear: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum PlanDocError {
    #[error("invalid plan JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("plan steps must be numbered 0..n with start and finish first")]
    BadStepNumbering,
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Literal(#[from] LiteralParseError),
    #[error("ordering pair ({0}, {1}) is out of range or cyclic")]
    BadOrdering(usize, usize),
    #[error("link references step {0} which does not exist")]
    BadLink(usize),
}

impl PlanDoc {
    pub fn from_plan(plan: &PartialPlan) -> PlanDoc {
        let steps = plan
            .steps
            .iter()
            .map(|s| StepDoc {
                id: s.id.0,
                name: match s.action() {
                    Some(a) => a.name.clone(),
                    None => s.label(),
                },
                args: s
                    .action()
                    .map(|a| a.args.iter().map(|o| o.name.clone()).collect())
                    .unwrap_or_default(),
            })
            .collect();
        let mut links: Vec<LinkDoc> = plan
            .links
            .iter()
            .map(|l| LinkDoc {
                producer_id: l.producer.0,
                atom: l.condition.to_string(),
                consumer_id: l.consumer.0,
            })
            .collect();
        links.sort();
        PlanDoc {
            steps,
            ordering: plan.ordering.pairs().map(|(a, b)| (a.0, b.0)).collect(),
            links,
            layers: plan
                .layering()
                .into_iter()
                .map(|layer| layer.into_iter().map(|id| id.0).collect())
                .collect(),
            linear: plan.linearize().into_iter().map(|id| id.0).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plan serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<PlanDoc, PlanDocError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds an executable plan structure against a problem and catalog.
    pub fn reconstruct(
        &self,
        problem: &Problem,
        catalog: &FunctionCatalog,
    ) -> Result<PartialPlan, PlanDocError> {
        let ok_dummies = self.steps.len() >= 2
            && self.steps[0].id == 0
            && self.steps[0].name == "start"
            && self.steps[1].id == 1
            && self.steps[1].name == "finish"
            && self.steps.iter().enumerate().all(|(i, s)| s.id == i);
        if !ok_dummies {
            return Err(PlanDocError::BadStepNumbering);
        }
        let mut plan = PartialPlan::initial(problem);
        for step in &self.steps[2..] {
            let schema = catalog
                .schema(&step.name)
                .ok_or_else(|| PlanDocError::UnknownAction(step.name.clone()))?;
            let args = step
                .args
                .iter()
                .map(|name| {
                    problem
                        .object(name)
                        .cloned()
                        .ok_or_else(|| PlanDocError::UnknownObject(name.clone()))
                })
                .collect::<Result<Vec<ObjectRef>, _>>()?;
            plan.push_action(schema.bind(&args)?);
        }
        let in_range = |id: usize| id < self.steps.len();
        for &(before, after) in &self.ordering {
            if !in_range(before) || !in_range(after) {
                return Err(PlanDocError::BadOrdering(before, after));
            }
            plan.ordering
                .add(StepId(before), StepId(after))
                .map_err(|_| PlanDocError::BadOrdering(before, after))?;
        }
        for link in &self.links {
            if !in_range(link.producer_id) || !in_range(link.consumer_id) {
                return Err(PlanDocError::BadLink(
                    link.producer_id.max(link.consumer_id),
                ));
            }
            let condition = parse_literal(&link.atom, &problem.objects)?;
            plan.links.push(CausalLink {
                producer: StepId(link.producer_id),
                condition,
                consumer: StepId(link.consumer_id),
            });
        }
        plan.agenda.clear();
        Ok(plan)
    }
}
