//! Conversions between the surface ASTs and the core model / catalog types.
//! These run the semantic checks the grammar cannot express.

use std::str::FromStr;

use super::ast::*;
use super::{Diagnostic, Severity};
use crate::catalog::{CatalogSource, FunctionCatalog, DOMAIN_NAME};
use crate::model::{
    ActionSchema, Atom, EntityClass, Literal, ObjectRef, Parameter, Predicate, Problem, SchemaAtom,
    SchemaLiteral, State,
};

fn error(message: String, line: u32, column: u32) -> Diagnostic {
    Diagnostic {
        severity: Severity::Error,
        message,
        line,
        column,
    }
}

/// Builds a validated catalog from a parsed domain.
pub fn domain_to_catalog(
    ast: &DomainAst,
    source: CatalogSource,
) -> (Option<FunctionCatalog>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    for ty in &ast.types {
        if EntityClass::from_str(&ty.node).is_err() {
            diags.push(error(
                format!("unknown type `{}`", ty.node),
                ty.line,
                ty.column,
            ));
        }
    }
    let mut predicates: Vec<Predicate> = Vec::new();
    for decl in &ast.predicates {
        if decl.params.len() != 1 {
            diags.push(error(
                format!(
                    "predicate `{}` must take exactly one argument",
                    decl.name.node
                ),
                decl.name.line,
                decl.name.column,
            ));
            continue;
        }
        let pred = Predicate::new(decl.name.node.clone());
        if predicates.contains(&pred) {
            diags.push(error(
                format!("duplicate predicate `{}`", decl.name.node),
                decl.name.line,
                decl.name.column,
            ));
        } else {
            predicates.push(pred);
        }
    }
    let mut schemas: Vec<ActionSchema> = Vec::new();
    for action in &ast.actions {
        if let Some(schema) = convert_action(action, &predicates, &mut diags) {
            if schemas.iter().any(|s| s.name == schema.name) {
                diags.push(error(
                    format!("duplicate action `{}`", schema.name),
                    action.name.line,
                    action.name.column,
                ));
            } else {
                schemas.push(schema);
            }
        }
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return (None, diags);
    }
    (
        Some(FunctionCatalog {
            predicates,
            schemas,
            source,
        }),
        diags,
    )
}

fn convert_action(
    action: &AstAction,
    vocabulary: &[Predicate],
    diags: &mut Vec<Diagnostic>,
) -> Option<ActionSchema> {
    let before = diags.len();
    let mut params = Vec::new();
    for p in &action.params {
        match EntityClass::from_str(&p.ty.node) {
            Ok(class) => params.push(Parameter::new(p.name.node.clone(), class)),
            Err(e) => diags.push(error(e.to_string(), p.ty.line, p.ty.column)),
        }
    }
    let schema_atom = |lit: &AstLiteral, diags: &mut Vec<Diagnostic>| -> Option<SchemaAtom> {
        let atom = &lit.atom;
        if !vocabulary.iter().any(|p| p.name() == atom.predicate) {
            diags.push(error(
                format!("undeclared predicate `{}`", atom.predicate),
                atom.line,
                atom.column,
            ));
            return None;
        }
        match atom.args.as_slice() {
            [Term::Variable(v)] => Some(SchemaAtom::new(atom.predicate.clone(), v.clone())),
            _ => {
                diags.push(error(
                    format!(
                        "`{}` must apply to exactly one parameter variable",
                        atom.predicate
                    ),
                    atom.line,
                    atom.column,
                ));
                None
            }
        }
    };
    let mut pre = Vec::new();
    for lit in &action.precondition {
        if let Some(atom) = schema_atom(lit, diags) {
            pre.push(SchemaLiteral {
                atom,
                positive: lit.positive,
            });
        }
    }
    let mut add = Vec::new();
    let mut del = Vec::new();
    for lit in &action.effect {
        if let Some(atom) = schema_atom(lit, diags) {
            if lit.positive {
                add.push(atom);
            } else {
                del.push(atom);
            }
        }
    }
    if diags.len() > before {
        return None;
    }
    let schema = ActionSchema::new(action.name.node.clone(), params, pre, add, del);
    if let Err(e) = schema.validate() {
        diags.push(error(e.to_string(), action.name.line, action.name.column));
        return None;
    }
    Some(schema)
}

/// Builds a validated problem from a parsed problem document.
pub fn problem_to_model(
    ast: &ProblemAst,
    vocabulary: &[Predicate],
) -> (Option<Problem>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut objects: Vec<ObjectRef> = Vec::new();
    for decl in &ast.objects {
        match EntityClass::from_str(&decl.ty.node) {
            Ok(class) => {
                if objects.iter().any(|o| o.name == decl.name.node) {
                    diags.push(error(
                        format!("duplicate object `{}`", decl.name.node),
                        decl.name.line,
                        decl.name.column,
                    ));
                } else {
                    objects.push(ObjectRef::new(decl.name.node.clone(), class));
                }
            }
            Err(e) => diags.push(error(e.to_string(), decl.ty.line, decl.ty.column)),
        }
    }
    let ground_atom = |atom: &Spanned<AstAtom>,
                       objects: &[ObjectRef],
                       diags: &mut Vec<Diagnostic>|
     -> Option<Atom> {
        if !vocabulary.iter().any(|p| p.name() == atom.predicate) {
            diags.push(error(
                format!("undeclared predicate `{}`", atom.predicate),
                atom.line,
                atom.column,
            ));
            return None;
        }
        match atom.args.as_slice() {
            [Term::Constant(name)] => match objects.iter().find(|o| o.name == *name) {
                Some(obj) => Some(Atom::new(
                    Predicate::new(atom.predicate.clone()),
                    obj.clone(),
                )),
                None => {
                    diags.push(error(
                        format!("undeclared object `{name}`"),
                        atom.line,
                        atom.column,
                    ));
                    None
                }
            },
            _ => {
                diags.push(error(
                    format!("`{}` must apply to exactly one object", atom.predicate),
                    atom.line,
                    atom.column,
                ));
                None
            }
        }
    };
    let mut init = State::new();
    for atom in &ast.init {
        if let Some(a) = ground_atom(atom, &objects, &mut diags) {
            init.insert(a);
        }
    }
    let mut goal = Vec::new();
    for lit in &ast.goal {
        if let Some(atom) = ground_atom(&lit.atom, &objects, &mut diags) {
            goal.push(Literal {
                atom,
                positive: lit.positive,
            });
        }
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return (None, diags);
    }
    let problem = Problem::new(ast.name.clone(), objects, init, goal);
    if let Err(e) = problem.validate() {
        diags.push(error(e.to_string(), 1, 1));
        return (None, diags);
    }
    (Some(problem), diags)
}

/// Renders a catalog as a domain AST (inverse of [`domain_to_catalog`]).
pub fn catalog_to_domain(catalog: &FunctionCatalog) -> DomainAst {
    fn at<T>(node: T) -> Spanned<T> {
        Spanned::new(node, 0, 0)
    }
    DomainAst {
        name: DOMAIN_NAME.to_string(),
        requirements: vec![":strips".to_string(), ":typing".to_string()],
        types: EntityClass::ALL
            .iter()
            .map(|c| at(c.name().to_string()))
            .collect(),
        predicates: catalog
            .predicates
            .iter()
            .map(|p| PredicateDecl {
                name: at(p.name().to_string()),
                params: vec!["?x".to_string()],
            })
            .collect(),
        actions: catalog
            .schemas
            .iter()
            .map(|s| AstAction {
                name: at(s.name.clone()),
                params: s
                    .params
                    .iter()
                    .map(|p| TypedName {
                        name: at(p.var.clone()),
                        ty: at(p.class.name().to_string()),
                    })
                    .collect(),
                precondition: s
                    .pre
                    .iter()
                    .map(|l| AstLiteral {
                        atom: at(AstAtom {
                            predicate: l.atom.predicate.name().to_string(),
                            args: vec![Term::Variable(l.atom.var.clone())],
                        }),
                        positive: l.positive,
                    })
                    .collect(),
                effect: s
                    .add
                    .iter()
                    .map(|a| (a, true))
                    .chain(s.del.iter().map(|a| (a, false)))
                    .map(|(a, positive)| AstLiteral {
                        atom: at(AstAtom {
                            predicate: a.predicate.name().to_string(),
                            args: vec![Term::Variable(a.var.clone())],
                        }),
                        positive,
                    })
                    .collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_domain, parse_problem};
    use super::*;
    use crate::catalog::{built_in_catalog, emit_domain};

    #[test]
    fn emitted_builtin_domain_parses_cleanly_and_round_trips() {
        let catalog = built_in_catalog();
        let text = emit_domain(&catalog);
        let (ast, diags) = parse_domain(&text);
        assert!(diags.is_empty(), "{diags:?}");
        let ast = ast.unwrap();
        assert_eq!(ast.actions.len(), 30);
        assert_eq!(ast.types.len(), 3);
        assert_eq!(ast.predicates.len(), 11);
        let (reloaded, diags) = domain_to_catalog(&ast, CatalogSource::BuiltIn);
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(reloaded.unwrap(), catalog);
    }

    #[test]
    fn problem_conversion_resolves_classes() {
        let text = "\
(define (problem p)
  (:domain roth)
  (:objects water - material electric - energy)
  (:init (stored water))
  (:goal (and (guided water) (not (guided electric)))))
";
        let (ast, diags) = parse_problem(text);
        assert!(diags.is_empty());
        let vocab = built_in_catalog().predicates;
        let (problem, diags) = problem_to_model(&ast.unwrap(), &vocab);
        assert!(diags.is_empty(), "{diags:?}");
        let problem = problem.unwrap();
        assert_eq!(problem.objects[0].class, EntityClass::Material);
        assert_eq!(problem.objects[1].class, EntityClass::Energy);
        assert_eq!(problem.init.len(), 1);
        assert_eq!(problem.goal.len(), 2);
        assert!(!problem.goal[1].positive);
    }

    #[test]
    fn unknown_predicate_in_goal_is_an_error() {
        let text = "\
(define (problem p)
  (:domain roth)
  (:objects water - material)
  (:init)
  (:goal (brewed water)))
";
        let (ast, _) = parse_problem(text);
        let vocab = built_in_catalog().predicates;
        let (problem, diags) = problem_to_model(&ast.unwrap(), &vocab);
        assert!(problem.is_none());
        assert!(diags.iter().any(|d| d.message.contains("brewed")));
    }

    #[test]
    fn unknown_object_type_is_an_error() {
        let text = "\
(define (problem p)
  (:domain roth)
  (:objects water - fluid)
  (:init)
  (:goal (stored water)))
";
        let (ast, _) = parse_problem(text);
        let vocab = built_in_catalog().predicates;
        let (problem, diags) = problem_to_model(&ast.unwrap(), &vocab);
        assert!(problem.is_none());
        assert!(diags.iter().any(|d| d.message.contains("fluid")));
    }
}
