//! Human- and tool-facing renderings of a solved plan.

use std::fmt::Write;

use fdplan::pop::PartialPlan;

/// Bracketed layer listing: one set of mutually unordered functions per line,
/// start to finish.
pub fn to_text(plan: &PartialPlan) -> String {
    let mut out = String::new();
    out.push_str("[{start},\n");
    for layer in plan.layering() {
        let labels: Vec<String> = layer.iter().map(|id| plan.step(*id).label()).collect();
        let _ = writeln!(out, " {{{}}},", labels.join(", "));
    }
    out.push_str(" {finish}]\n");
    out
}

/// DOT digraph: one node per function, one labeled edge per causal link.
/// Dummy endpoints are dropped unless `show_dummies` is set.
pub fn to_dot(plan: &PartialPlan, show_dummies: bool) -> String {
    let mut out = String::new();
    out.push_str("digraph functional_structure {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box];\n");
    let visible = |id| show_dummies || !plan.step(id).is_dummy();
    for step in &plan.steps {
        if !visible(step.id) {
            continue;
        }
        let shape = if step.is_dummy() { " shape=oval" } else { "" };
        let _ = writeln!(out, "  {} [label=\"{}\"{shape}];", step.id, step.label());
    }
    for link in &plan.links {
        if !visible(link.producer) || !visible(link.consumer) {
            continue;
        }
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            link.producer, link.consumer, link.condition
        );
    }
    out.push_str("}\n");
    out
}
