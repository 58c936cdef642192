//! Shared fixtures and generators for the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;

use fdplan::catalog::{builtin_vocabulary, CatalogSource, FunctionCatalog};
use fdplan::model::{
    ActionSchema, EntityClass, Parameter, Predicate, Problem, SchemaAtom, SchemaLiteral,
};
use fdplan::pddl::{self, has_errors};
use fdplan::pop::PartialPlan;

pub const COFFEE_PDDL: &str = include_str!("../fixtures/coffee.pddl");
pub const SIEGE_PDDL: &str = include_str!("../fixtures/siege.pddl");
pub const UNSAT_PDDL: &str = include_str!("../fixtures/unsat.pddl");

/// Parses a fixture problem against the built-in vocabulary.
pub fn fixture_problem(text: &str) -> Problem {
    let (ast, diags) = pddl::parse_problem(text);
    assert!(!has_errors(&diags), "fixture problem has errors: {diags:?}");
    let (problem, diags) = pddl::problem_to_model(&ast.unwrap(), &builtin_vocabulary());
    assert!(
        !has_errors(&diags),
        "fixture problem conversion failed: {diags:?}"
    );
    problem.unwrap()
}

pub fn coffee_problem() -> Problem {
    fixture_problem(COFFEE_PDDL)
}

pub fn siege_problem() -> Problem {
    fixture_problem(SIEGE_PDDL)
}

pub fn unsat_problem() -> Problem {
    fixture_problem(UNSAT_PDDL)
}

/// Sorted display labels of a plan's non-dummy steps.
pub fn action_labels(plan: &PartialPlan) -> Vec<String> {
    let mut labels: Vec<String> = plan.non_dummy_steps().map(|s| s.label()).collect();
    labels.sort();
    labels
}

const RESERVED: [&str; 5] = ["and", "not", "define", "domain", "problem"];

/// A lower-case identifier that cannot collide with grammar keywords.
pub fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9-]{0,6}".prop_filter("reserved word", |s| !RESERVED.contains(&s.as_str()))
}

pub fn entity_class() -> impl Strategy<Value = EntityClass> {
    prop::sample::select(EntityClass::ALL.to_vec())
}

/// A structurally valid catalog: distinct schema names, declared variables,
/// vocabulary-checked literals, disjoint add/delete lists.
pub fn catalog_strategy() -> impl Strategy<Value = FunctionCatalog> {
    let vocab = prop::collection::btree_set(ident(), 2..6);
    let names = prop::collection::btree_set(ident(), 1..8);
    (vocab, names)
        .prop_flat_map(|(vocab, names)| {
            let vocab: Vec<String> = vocab.into_iter().collect();
            let names: Vec<String> = names.into_iter().collect();
            let per_schema_vocab = vocab.clone();
            let schemas = names
                .into_iter()
                .map(move |name| schema_strategy(name, per_schema_vocab.clone()))
                .collect::<Vec<_>>();
            (Just(vocab), schemas)
        })
        .prop_map(|(vocab, schemas)| {
            let catalog = FunctionCatalog {
                predicates: vocab.into_iter().map(Predicate::new).collect(),
                schemas,
                source: CatalogSource::BuiltIn,
            };
            catalog.validate().expect("generated catalog is valid");
            catalog
        })
}

fn schema_strategy(name: String, vocab: Vec<String>) -> impl Strategy<Value = ActionSchema> {
    let vars = ["?a", "?b", "?c"];
    (1..=3usize, prop::collection::vec(entity_class(), 3)).prop_flat_map(
        move |(param_count, classes)| {
            let params: Vec<Parameter> = vars[..param_count]
                .iter()
                .zip(classes)
                .map(|(var, class)| Parameter::new(*var, class))
                .collect();
            let atom = {
                let vocab = vocab.clone();
                (0..vocab.len(), 0..param_count)
                    .prop_map(move |(p, v)| SchemaAtom::new(vocab[p].clone(), vars[v]))
            };
            let pre = prop::collection::vec(
                (atom.clone(), any::<bool>())
                    .prop_map(|(atom, positive)| SchemaLiteral { atom, positive }),
                0..3,
            );
            let add = prop::collection::vec(atom.clone(), 1..3);
            let del = prop::collection::vec(atom, 0..3);
            let name = name.clone();
            (pre, add, del).prop_map(move |(pre, mut add, mut del)| {
                add.dedup();
                del.retain(|d| !add.contains(d));
                del.dedup();
                ActionSchema::new(name.clone(), params.clone(), pre, add, del)
            })
        },
    )
}

/// A consistent problem document: all init/goal atoms reference declared
/// objects and known predicates.
pub fn problem_text_strategy() -> impl Strategy<Value = String> {
    let vocab = prop::collection::btree_set(ident(), 1..5);
    let objects = prop::collection::btree_map(ident(), entity_class(), 1..5);
    (ident(), ident(), vocab, objects).prop_flat_map(|(name, domain, vocab, objects)| {
        let vocab: Vec<String> = vocab.into_iter().collect();
        let names: Vec<String> = objects.keys().cloned().collect();
        let atom = {
            let (vocab, names) = (vocab.clone(), names.clone());
            (0..vocab.len(), 0..names.len())
                .prop_map(move |(p, o)| format!("({} {})", vocab[p], names[o]))
        };
        let init = prop::collection::vec(atom.clone(), 0..5);
        let goal = prop::collection::vec(
            (atom, any::<bool>()).prop_map(|(a, positive)| {
                if positive {
                    a
                } else {
                    format!("(not {a})")
                }
            }),
            1..4,
        );
        (Just(name), Just(domain), Just(objects), init, goal).prop_map(
            |(name, domain, objects, init, goal)| {
                let object_decls: Vec<String> = objects
                    .iter()
                    .map(|(n, c)| format!("{n} - {c}"))
                    .collect();
                format!(
                    "(define (problem {name})\n  (:domain {domain})\n  (:objects {})\n  (:init {})\n  (:goal (and {})))\n",
                    object_decls.join(" "),
                    init.join(" "),
                    goal.join(" ")
                )
            },
        )
    })
}
