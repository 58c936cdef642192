//! Canonical formatter. The output is byte-stable for a given AST and parses
//! back to a structurally identical AST.

use std::fmt::Write;

use super::ast::*;

fn write_literal(out: &mut String, lit: &AstLiteral) {
    if lit.positive {
        write_atom(out, &lit.atom.node);
    } else {
        out.push_str("(not ");
        write_atom(out, &lit.atom.node);
        out.push(')');
    }
}

fn write_atom(out: &mut String, atom: &AstAtom) {
    out.push('(');
    out.push_str(&atom.predicate);
    for arg in &atom.args {
        let _ = write!(out, " {arg}");
    }
    out.push(')');
}

fn write_conjunction(out: &mut String, literals: &[AstLiteral]) {
    match literals {
        [single] => write_literal(out, single),
        _ => {
            out.push_str("(and");
            for lit in literals {
                out.push(' ');
                write_literal(out, lit);
            }
            out.push(')');
        }
    }
}

/// Writes `a b - t c - u`, grouping consecutive names of equal type.
fn write_typed_list(out: &mut String, items: &[TypedName]) {
    let mut i = 0;
    while i < items.len() {
        let ty = &items[i].ty.node;
        let mut j = i;
        while j < items.len() && items[j].ty.node == *ty {
            if j > i || i > 0 {
                out.push(' ');
            }
            out.push_str(&items[j].name.node);
            j += 1;
        }
        let _ = write!(out, " - {ty}");
        i = j;
    }
}

pub fn print_domain(domain: &DomainAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", domain.name);
    if !domain.requirements.is_empty() {
        let _ = writeln!(out, "  (:requirements {})", domain.requirements.join(" "));
    }
    if !domain.types.is_empty() {
        let types: Vec<&str> = domain.types.iter().map(|t| t.node.as_str()).collect();
        let _ = writeln!(out, "  (:types {})", types.join(" "));
    }
    if !domain.predicates.is_empty() {
        out.push_str("  (:predicates\n");
        for (i, pred) in domain.predicates.iter().enumerate() {
            let _ = write!(out, "    ({}", pred.name.node);
            for var in &pred.params {
                let _ = write!(out, " {var}");
            }
            out.push(')');
            if i + 1 == domain.predicates.len() {
                out.push(')');
            }
            out.push('\n');
        }
    }
    for action in &domain.actions {
        let _ = writeln!(out, "  (:action {}", action.name.node);
        out.push_str("    :parameters (");
        write_typed_list(&mut out, &action.params);
        out.push_str(")\n");
        out.push_str("    :precondition ");
        write_conjunction(&mut out, &action.precondition);
        out.push('\n');
        out.push_str("    :effect ");
        write_conjunction(&mut out, &action.effect);
        out.push_str(")\n");
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(problem: &ProblemAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    let _ = writeln!(out, "  (:domain {})", problem.domain);
    out.push_str("  (:objects");
    let mut objects = String::new();
    write_typed_list(&mut objects, &problem.objects);
    if !objects.is_empty() {
        out.push(' ');
        out.push_str(&objects);
    }
    out.push_str(")\n");
    out.push_str("  (:init");
    for atom in &problem.init {
        out.push(' ');
        write_atom(&mut out, &atom.node);
    }
    out.push_str(")\n");
    out.push_str("  (:goal ");
    write_conjunction(&mut out, &problem.goal);
    out.push_str("))\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_domain, parse_problem};
    use super::*;

    const COFFEE: &str = "\
(define (problem coffee)
  (:domain roth)
  (:objects water powder - material electric - energy)
  (:init (stored water) (stored electric) (stored powder))
  (:goal (and (converted electric) (added-energy water) (added-material powder))))
";

    #[test]
    fn printing_is_a_parse_fixpoint() {
        let (ast, diags) = parse_problem(COFFEE);
        assert!(diags.is_empty());
        let ast = ast.unwrap();
        let printed = print_problem(&ast);
        let (reparsed, diags) = parse_problem(&printed);
        assert!(diags.is_empty(), "{diags:?}");
        let reparsed = reparsed.unwrap();
        assert_eq!(ast, reparsed);
        assert_eq!(printed, print_problem(&reparsed));
    }

    #[test]
    fn printed_coffee_goal_contains_converted_electric() {
        let (ast, _) = parse_problem(COFFEE);
        let printed = print_problem(&ast.unwrap());
        assert!(printed.contains("(converted electric)"));
    }

    #[test]
    fn printing_is_byte_stable() {
        let (ast, _) = parse_problem(COFFEE);
        let ast = ast.unwrap();
        assert_eq!(print_problem(&ast), print_problem(&ast));
    }

    #[test]
    fn domain_print_round_trips() {
        let text = "\
(define (domain mini)
  (:requirements :strips :typing)
  (:types material energy)
  (:predicates
    (stored ?x)
    (guided ?x))
  (:action guide-material
    :parameters (?m - material)
    :precondition (stored ?m)
    :effect (and (guided ?m) (not (stored ?m)))))
";
        let (ast, diags) = parse_domain(text);
        assert!(diags.is_empty(), "{diags:?}");
        let ast = ast.unwrap();
        let printed = print_domain(&ast);
        let (reparsed, diags) = parse_domain(&printed);
        assert!(diags.is_empty(), "diagnostics on {printed}: {diags:?}");
        assert_eq!(ast, reparsed.unwrap());
    }
}
