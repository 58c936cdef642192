//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured numbers. Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use fdplan::catalog::{achievers, built_in_catalog, emit_domain, CatalogSource};
use fdplan::model::{ground, Atom, GroundAction, ObjectRef, Semantics};
use fdplan::pddl;
use fdplan::pop::{solve, PartialPlan, SolverConfig, DEFAULT_MAX_ITERATIONS};
use fdplan::validate::{
    bfs_shortest_plan, random_walk_problem, structural_check, validate_partial, PartialVerdict,
};

const COFFEE_ACTIONS: [&str; 6] = [
    "add-energy-to-material(electric, water)",
    "convert-energy(electric)",
    "guide-energy(electric)",
    "guide-material(powder)",
    "guide-material(water)",
    "sum-link-equal-material(water, powder)",
];

const SIEGE_ACTIONS: [&str; 4] = [
    "add-energy-to-material(kinetic, timber)",
    "guide-energy(kinetic)",
    "guide-material(timber)",
    "transform-energy(kinetic)",
];

fn step_id(plan: &PartialPlan, label: &str) -> fdplan::pop::StepId {
    plan.non_dummy_steps()
        .find(|s| s.label() == label)
        .map(|s| s.id)
        .unwrap_or_else(|| panic!("plan is missing {label}"))
}

#[test]
fn criterion_1_coffee_maker_reproduction() {
    let catalog = built_in_catalog();
    let problem = coffee_problem();
    let started = Instant::now();
    let solution = solve(&problem, &catalog, &SolverConfig::default()).expect("coffee solves");
    let elapsed = started.elapsed();

    assert_eq!(action_labels(&solution.plan), COFFEE_ACTIONS.to_vec());
    let guide = step_id(&solution.plan, "guide-energy(electric)");
    let convert = step_id(&solution.plan, "convert-energy(electric)");
    assert!(
        solution.plan.ordering.precedes(guide, convert),
        "electricity must be guided before it is converted"
    );
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    assert!(solution.iterations < DEFAULT_MAX_ITERATIONS);
    println!(
        "criterion 1 (coffee-maker reproduction): PASS — 6/6 actions, guide<convert, \
         {} iterations, {elapsed:?}",
        solution.iterations
    );
}

#[test]
fn criterion_2_siege_engine_reproduction() {
    let catalog = built_in_catalog();
    let problem = siege_problem();
    let started = Instant::now();
    let solution = solve(&problem, &catalog, &SolverConfig::default()).expect("siege solves");
    let elapsed = started.elapsed();

    assert_eq!(action_labels(&solution.plan), SIEGE_ACTIONS.to_vec());
    let layers = solution.plan.layering();
    let guide_energy = step_id(&solution.plan, "guide-energy(kinetic)");
    let guide_material = step_id(&solution.plan, "guide-material(timber)");
    let first = &layers[0];
    assert!(
        first.contains(&guide_energy) && first.contains(&guide_material),
        "both guide steps must land in the first layer, got {layers:?}"
    );
    assert!(
        !solution
            .plan
            .ordering
            .precedes(guide_energy, guide_material)
            && !solution
                .plan
                .ordering
                .precedes(guide_material, guide_energy),
        "the two guide steps must stay mutually unordered"
    );
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 2 (siege-engine reproduction): PASS — 4/4 actions, \
         guides unordered in layer 1, {elapsed:?}"
    );
}

#[test]
fn criterion_3_oracle_agreement() {
    let catalog = built_in_catalog();
    let coffee = coffee_problem();
    let siege = siege_problem();

    let coffee_oracle = bfs_shortest_plan(&coffee, &catalog, 8, Semantics::Monotone)
        .expect("state space within cap");
    let siege_oracle = bfs_shortest_plan(&siege, &catalog, 8, Semantics::Monotone)
        .expect("state space within cap");
    let coffee_len = coffee_oracle.plan.expect("coffee reachable").len();
    let siege_len = siege_oracle.plan.expect("siege reachable").len();
    assert_eq!(coffee_len, 6);
    assert_eq!(siege_len, 4);

    let coffee_steps = solve(&coffee, &catalog, &SolverConfig::default())
        .unwrap()
        .plan
        .action_ids()
        .len();
    let siege_steps = solve(&siege, &catalog, &SolverConfig::default())
        .unwrap()
        .plan
        .action_ids()
        .len();
    assert_eq!(coffee_steps, coffee_len);
    assert_eq!(siege_steps, siege_len);
    println!(
        "criterion 3 (oracle agreement): PASS — BFS shortest 6 and 4, solver plans match \
         ({} and {} states explored)",
        coffee_oracle.explored, siege_oracle.explored
    );
}

#[test]
fn criterion_4_exhaustive_linear_extension_validity() {
    let catalog = built_in_catalog();
    let mut counts = Vec::new();
    for (name, problem) in [("coffee", coffee_problem()), ("siege", siege_problem())] {
        let solution = solve(&problem, &catalog, &SolverConfig::default()).unwrap();
        match validate_partial(&solution.plan, &problem, Semantics::Monotone) {
            PartialVerdict::AllExtensionsValid { extensions } => counts.push((name, extensions)),
            other => panic!("{name}: expected exhaustive validation, got {other:?}"),
        }
    }
    println!(
        "criterion 4 (exhaustive extension validity): PASS — {}",
        counts
            .iter()
            .map(|(name, n)| format!("{name}: {n}/{n} extensions reach the goal"))
            .collect::<Vec<_>>()
            .join(", ")
    );
}

#[test]
fn criterion_5_property_suite_on_seeded_random_problems() {
    let catalog = built_in_catalog();
    let started = Instant::now();
    let mut solved = 0;
    for seed in 0..100u64 {
        let problem = random_walk_problem(&catalog, seed, 5, 5);
        problem
            .validate()
            .unwrap_or_else(|e| panic!("seed {seed}: invalid problem: {e}"));
        let solution = solve(&problem, &catalog, &SolverConfig::default())
            .unwrap_or_else(|e| panic!("seed {seed}: solver failed: {e}"));
        let plan = &solution.plan;
        assert!(
            plan.ordering.is_strict_partial_order(),
            "seed {seed}: ordering not a strict po"
        );
        for link in &plan.links {
            assert!(
                plan.ordering.precedes(link.producer, link.consumer),
                "seed {seed}: link {link} unordered"
            );
            if link.condition.positive {
                assert!(
                    plan.step_adds(link.producer).contains(&link.condition.atom),
                    "seed {seed}: link {link} has a non-producing producer"
                );
            }
            assert!(
                plan.step_pre(link.consumer).contains(&link.condition),
                "seed {seed}: link {link} has a non-consuming consumer"
            );
        }
        structural_check(plan, &problem, Semantics::Monotone)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(
            validate_partial(plan, &problem, Semantics::Monotone).is_valid(),
            "seed {seed}: validation failed"
        );
        solved += 1;
    }
    let elapsed = started.elapsed();
    assert_eq!(solved, 100);
    assert!(elapsed < Duration::from_secs(30), "suite took {elapsed:?}");
    println!(
        "criterion 5 (property suite): PASS — 100/100 random problems solved and validated \
         in {elapsed:?}"
    );
}

#[test]
fn criterion_6_parser_robustness() {
    // 200 randomized valid documents survive print -> parse unchanged
    let mut runner = TestRunner::new(PropConfig {
        cases: 200,
        failure_persistence: None,
        ..PropConfig::default()
    });
    let result = runner.run(&problem_text_strategy(), |text| {
        let (ast, diags) = pddl::parse_problem(&text);
        prop_assert!(
            !pddl::has_errors(&diags),
            "diagnostics on valid document: {diags:?}"
        );
        let ast = ast.unwrap();
        let printed = pddl::print_problem(&ast);
        let (reparsed, diags) = pddl::parse_problem(&printed);
        prop_assert!(!pddl::has_errors(&diags));
        prop_assert_eq!(ast, reparsed.unwrap());
        Ok(())
    });
    if let Err(TestError::Fail(reason, value)) = result {
        panic!("round-trip failed: {reason} on {value}");
    }

    // 1000 random byte strings: no panic, silent failures are not allowed
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0CC);
    for case in 0..1000 {
        let len = rng.gen_range(0..300);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let text = String::from_utf8_lossy(&bytes);
        let (domain, diags) = pddl::parse_domain(&text);
        assert!(
            domain.is_some() || !diags.is_empty(),
            "case {case}: silent domain failure"
        );
        let (problem, diags) = pddl::parse_problem(&text);
        assert!(
            problem.is_some() || !diags.is_empty(),
            "case {case}: silent problem failure"
        );
    }
    println!(
        "criterion 6 (parser robustness): PASS — 200/200 round trips, 1000/1000 fuzz inputs \
         handled"
    );
}

#[test]
fn criterion_7_catalog_integrity() {
    let catalog = built_in_catalog();
    assert_eq!(
        catalog.len(),
        30,
        "the built-in catalog must have exactly 30 schemas"
    );

    let text = emit_domain(&catalog);
    let (ast, diags) = pddl::parse_domain(&text);
    assert!(
        !pddl::has_errors(&diags),
        "emitted domain has diagnostics: {diags:?}"
    );
    let (reloaded, diags) = pddl::domain_to_catalog(&ast.unwrap(), CatalogSource::BuiltIn);
    assert!(!pddl::has_errors(&diags));
    assert_eq!(
        reloaded.unwrap(),
        catalog,
        "emit -> parse must be structurally identical"
    );

    use fdplan::model::EntityClass::*;
    let universe = [
        ObjectRef::new("water", Material),
        ObjectRef::new("powder", Material),
        ObjectRef::new("electric", Energy),
        ObjectRef::new("kinetic", Energy),
        ObjectRef::new("signal", Information),
    ];
    let mut goals_checked = 0;
    for predicate in &catalog.predicates {
        for object in &universe {
            let goal = Atom::new(predicate.clone(), object.clone());
            let direct = achievers(&goal, &catalog, &universe);
            let brute: Vec<GroundAction> = catalog
                .schemas
                .iter()
                .flat_map(|s| ground(s, &universe))
                .filter(|a| a.add.contains(&goal))
                .collect();
            assert_eq!(direct, brute, "achiever mismatch for {goal}");
            goals_checked += 1;
        }
    }
    println!(
        "criterion 7 (catalog integrity): PASS — 30 schemas, clean emit/parse round trip, \
         achievers equal the ground scan on {goals_checked} goals"
    );
}
