//! Planning-domain data model: entity classes, objects, literals, states,
//! action schemas, grounding, and the two transition semantics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three entity classes every carrier object belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityClass {
    Material,
    Energy,
    Information,
}

impl EntityClass {
    pub const ALL: [EntityClass; 3] = [
        EntityClass::Material,
        EntityClass::Energy,
        EntityClass::Information,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntityClass::Material => "material",
            EntityClass::Energy => "energy",
            EntityClass::Information => "information",
        }
    }

    /// One-letter tag used when naming schema parameters (?m, ?e, ?i).
    pub fn initial(self) -> char {
        match self {
            EntityClass::Material => 'm',
            EntityClass::Energy => 'e',
            EntityClass::Information => 'i',
        }
    }
}

impl fmt::Display for EntityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown entity class `{0}` (expected material, energy or information)")]
pub struct UnknownClass(pub String);

impl FromStr for EntityClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "material" => Ok(EntityClass::Material),
            "energy" => Ok(EntityClass::Energy),
            "information" => Ok(EntityClass::Information),
            other => Err(UnknownClass(other.to_string())),
        }
    }
}

/// A named carrier object together with its entity class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectRef {
    pub name: String,
    pub class: EntityClass,
}

impl ObjectRef {
    pub fn new(name: impl Into<String>, class: EntityClass) -> Self {
        ObjectRef {
            name: name.into(),
            class,
        }
    }
}

impl fmt::Display for ObjectRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A unary predicate name from the allocated-entity vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate(String);

impl Predicate {
    pub fn new(name: impl Into<String>) -> Self {
        Predicate(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier shape shared by object, predicate and action names.
pub fn is_valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-' || c == '_')
}

/// A ground atom: predicate applied to an object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Predicate,
    pub object: ObjectRef,
}

impl Atom {
    pub fn new(predicate: Predicate, object: ObjectRef) -> Self {
        Atom { predicate, object }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.object)
    }
}

/// A ground atom with polarity. Negative literals are only meaningful in
/// preconditions and goals; states hold positive atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "not {}", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse literal `{text}`: {reason}")]
pub struct LiteralParseError {
    pub text: String,
    pub reason: String,
}

/// Parses the display form `pred(obj)` / `not pred(obj)` back into a literal,
/// resolving the object against a declaration list.
pub fn parse_literal(text: &str, objects: &[ObjectRef]) -> Result<Literal, LiteralParseError> {
    let err = |reason: &str| LiteralParseError {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    let (positive, rest) = match trimmed.strip_prefix("not ") {
        Some(rest) => (false, rest.trim()),
        None => (true, trimmed),
    };
    let open = rest.find('(').ok_or_else(|| err("missing `(`"))?;
    if !rest.ends_with(')') {
        return Err(err("missing `)`"));
    }
    let pred = &rest[..open];
    let arg = &rest[open + 1..rest.len() - 1];
    if !is_valid_identifier(pred) {
        return Err(err("bad predicate name"));
    }
    let object = objects
        .iter()
        .find(|o| o.name == arg)
        .ok_or_else(|| err("undeclared object"))?;
    Ok(Literal {
        atom: Atom::new(Predicate::new(pred), object.clone()),
        positive,
    })
}

/// A finite set of positive atoms, interpreted under the closed-world
/// assumption: an atom not in the set is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct State(BTreeSet<Atom>);

impl State {
    pub fn new() -> Self {
        State(BTreeSet::new())
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: Atom) {
        self.0.insert(atom);
    }

    pub fn remove(&mut self, atom: &Atom) {
        self.0.remove(atom);
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn satisfies(&self, literal: &Literal) -> bool {
        literal.positive == self.0.contains(&literal.atom)
    }

    pub fn satisfies_all<'a>(&self, literals: impl IntoIterator<Item = &'a Literal>) -> bool {
        literals.into_iter().all(|l| self.satisfies(l))
    }

    /// First literal (in the given order) this state does not satisfy.
    pub fn first_unsatisfied<'a>(
        &self,
        literals: impl IntoIterator<Item = &'a Literal>,
    ) -> Option<&'a Literal> {
        literals.into_iter().find(|l| !self.satisfies(l))
    }
}

impl FromIterator<Atom> for State {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl Extend<Atom> for State {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        self.0.extend(iter);
    }
}

impl<'a> IntoIterator for &'a State {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, "}}")
    }
}

/// Transition semantics. Monotone keeps every established atom; consume
/// removes the positive precondition atoms when an action fires.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    #[default]
    Monotone,
    Consume,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Monotone => "monotone",
            Semantics::Consume => "consume",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown semantics `{0}` (expected monotone or consume)")]
pub struct UnknownSemantics(pub String);

impl FromStr for Semantics {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monotone" => Ok(Semantics::Monotone),
            "consume" => Ok(Semantics::Consume),
            other => Err(UnknownSemantics(other.to_string())),
        }
    }
}

/// A typed schema parameter. Variables carry their leading `?`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub var: String,
    pub class: EntityClass,
}

impl Parameter {
    pub fn new(var: impl Into<String>, class: EntityClass) -> Self {
        Parameter {
            var: var.into(),
            class,
        }
    }
}

/// An atom over a schema variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaAtom {
    pub predicate: Predicate,
    pub var: String,
}

impl SchemaAtom {
    pub fn new(predicate: impl Into<String>, var: impl Into<String>) -> Self {
        SchemaAtom {
            predicate: Predicate::new(predicate),
            var: var.into(),
        }
    }
}

impl fmt::Display for SchemaAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaLiteral {
    pub atom: SchemaAtom,
    pub positive: bool,
}

impl SchemaLiteral {
    pub fn positive(atom: SchemaAtom) -> Self {
        SchemaLiteral {
            atom,
            positive: true,
        }
    }

    pub fn negative(atom: SchemaAtom) -> Self {
        SchemaLiteral {
            atom,
            positive: false,
        }
    }
}

impl fmt::Display for SchemaLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "not {}", self.atom)
        }
    }
}

/// A lifted function/action: typed parameters, precondition conjunction, and
/// an effect split into add and delete lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Parameter>,
    pub pre: Vec<SchemaLiteral>,
    pub add: Vec<SchemaAtom>,
    pub del: Vec<SchemaAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("action `{action}`: invalid name")]
    BadName { action: String },
    #[error("action `{action}`: parameter `{var}` is not a `?`-variable")]
    BadParameter { action: String, var: String },
    #[error("action `{action}`: duplicate parameter `{var}`")]
    DuplicateParameter { action: String, var: String },
    #[error("action `{action}`: variable `{var}` is not declared in the parameter list")]
    UndeclaredVariable { action: String, var: String },
    #[error("action `{action}`: atom `{atom}` appears in both the add and delete list")]
    OverlappingEffect { action: String, atom: String },
}

impl ActionSchema {
    pub fn new(
        name: impl Into<String>,
        params: Vec<Parameter>,
        pre: Vec<SchemaLiteral>,
        add: Vec<SchemaAtom>,
        del: Vec<SchemaAtom>,
    ) -> Self {
        ActionSchema {
            name: name.into(),
            params,
            pre,
            add,
            del,
        }
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if !is_valid_identifier(&self.name) {
            return Err(SchemaError::BadName {
                action: self.name.clone(),
            });
        }
        let mut seen = BTreeSet::new();
        for p in &self.params {
            if !p.var.starts_with('?') || p.var.len() < 2 {
                return Err(SchemaError::BadParameter {
                    action: self.name.clone(),
                    var: p.var.clone(),
                });
            }
            if !seen.insert(p.var.as_str()) {
                return Err(SchemaError::DuplicateParameter {
                    action: self.name.clone(),
                    var: p.var.clone(),
                });
            }
        }
        let declared = |var: &str| self.params.iter().any(|p| p.var == var);
        let vars = self
            .pre
            .iter()
            .map(|l| &l.atom.var)
            .chain(self.add.iter().map(|a| &a.var))
            .chain(self.del.iter().map(|a| &a.var));
        for var in vars {
            if !declared(var) {
                return Err(SchemaError::UndeclaredVariable {
                    action: self.name.clone(),
                    var: var.clone(),
                });
            }
        }
        for a in &self.add {
            if self.del.iter().any(|d| d == a) {
                return Err(SchemaError::OverlappingEffect {
                    action: self.name.clone(),
                    atom: a.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Instantiates the schema with one object per parameter, in order.
    pub fn bind(&self, args: &[ObjectRef]) -> Result<GroundAction, BindError> {
        if args.len() != self.params.len() {
            return Err(BindError::Arity {
                action: self.name.clone(),
                expected: self.params.len(),
                got: args.len(),
            });
        }
        for (p, a) in self.params.iter().zip(args) {
            if p.class != a.class {
                return Err(BindError::ClassMismatch {
                    action: self.name.clone(),
                    var: p.var.clone(),
                    expected: p.class,
                    object: a.name.clone(),
                });
            }
        }
        for (i, a) in args.iter().enumerate() {
            if args[..i].iter().any(|b| b == a) {
                return Err(BindError::RepeatedObject {
                    action: self.name.clone(),
                    object: a.name.clone(),
                });
            }
        }
        let resolve = |var: &str| -> &ObjectRef {
            let idx = self
                .params
                .iter()
                .position(|p| p.var == var)
                .expect("validated schema");
            &args[idx]
        };
        let ground_atom = |a: &SchemaAtom| Atom::new(a.predicate.clone(), resolve(&a.var).clone());
        Ok(GroundAction {
            name: self.name.clone(),
            args: args.to_vec(),
            pre: self
                .pre
                .iter()
                .map(|l| Literal {
                    atom: ground_atom(&l.atom),
                    positive: l.positive,
                })
                .collect(),
            add: self.add.iter().map(ground_atom).collect(),
            del: self.del.iter().map(ground_atom).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindError {
    #[error("action `{action}` takes {expected} arguments, got {got}")]
    Arity {
        action: String,
        expected: usize,
        got: usize,
    },
    #[error("action `{action}`: parameter `{var}` expects a {expected}, got `{object}`")]
    ClassMismatch {
        action: String,
        var: String,
        expected: EntityClass,
        object: String,
    },
    #[error("action `{action}`: object `{object}` bound to more than one parameter")]
    RepeatedObject { action: String, object: String },
}

/// A fully instantiated action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<ObjectRef>,
    pub pre: Vec<Literal>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

impl GroundAction {
    /// Effective delete list under the given semantics. Monotone treats all
    /// delete lists as empty; consume deletes the positive precondition atoms.
    pub fn deletes(&self, semantics: Semantics) -> Vec<Atom> {
        match semantics {
            Semantics::Monotone => Vec::new(),
            Semantics::Consume => self
                .pre
                .iter()
                .filter(|l| l.positive)
                .map(|l| l.atom.clone())
                .collect(),
        }
    }

    /// True when this action and `other` are the same instantiation.
    pub fn same_instance(&self, other: &GroundAction) -> bool {
        self.name == other.name && self.args == other.args
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            return f.write_str(&self.name);
        }
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Enumerates every class-respecting, injective instantiation of `schema`
/// over the given objects, in parameter-major declaration order.
pub fn ground(schema: &ActionSchema, objects: &[ObjectRef]) -> Vec<GroundAction> {
    let mut out = Vec::new();
    let mut chosen: Vec<&ObjectRef> = Vec::with_capacity(schema.params.len());
    fill(schema, objects, &mut chosen, &mut out);
    out
}

fn fill<'a>(
    schema: &ActionSchema,
    objects: &'a [ObjectRef],
    chosen: &mut Vec<&'a ObjectRef>,
    out: &mut Vec<GroundAction>,
) {
    if chosen.len() == schema.params.len() {
        let args: Vec<ObjectRef> = chosen.iter().map(|o| (*o).clone()).collect();
        out.push(schema.bind(&args).expect("enumeration respects classes"));
        return;
    }
    let param = &schema.params[chosen.len()];
    for obj in objects {
        if obj.class == param.class && !chosen.contains(&obj) {
            chosen.push(obj);
            fill(schema, objects, chosen, out);
            chosen.pop();
        }
    }
}

/// True iff the state satisfies the action's precondition.
pub fn applicable(state: &State, action: &GroundAction) -> bool {
    state.satisfies_all(&action.pre)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("action `{action}` is not applicable: missing {missing}")]
pub struct NotApplicable {
    pub action: String,
    pub missing: Literal,
}

/// Successor state of firing `action` in `state` under the given semantics.
pub fn apply(
    state: &State,
    action: &GroundAction,
    semantics: Semantics,
) -> Result<State, NotApplicable> {
    if let Some(missing) = state.first_unsatisfied(&action.pre) {
        return Err(NotApplicable {
            action: action.to_string(),
            missing: missing.clone(),
        });
    }
    let mut next = state.clone();
    for atom in action.deletes(semantics) {
        next.remove(&atom);
    }
    next.extend(action.add.iter().cloned());
    Ok(next)
}

/// A decomposition problem: typed objects, initial state and goal conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub objects: Vec<ObjectRef>,
    pub init: State,
    pub goal: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("invalid object name `{0}`")]
    BadObjectName(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("literal `{literal}` references an undeclared object")]
    UndeclaredObject { literal: String },
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        objects: Vec<ObjectRef>,
        init: State,
        goal: Vec<Literal>,
    ) -> Self {
        Problem {
            name: name.into(),
            objects,
            init,
            goal,
        }
    }

    pub fn object(&self, name: &str) -> Option<&ObjectRef> {
        self.objects.iter().find(|o| o.name == name)
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        for (i, obj) in self.objects.iter().enumerate() {
            if !is_valid_identifier(&obj.name) {
                return Err(ProblemError::BadObjectName(obj.name.clone()));
            }
            if self.objects[..i].iter().any(|o| o.name == obj.name) {
                return Err(ProblemError::DuplicateObject(obj.name.clone()));
            }
        }
        let declared = |o: &ObjectRef| self.objects.iter().any(|d| d == o);
        for atom in self.init.atoms() {
            if !declared(&atom.object) {
                return Err(ProblemError::UndeclaredObject {
                    literal: atom.to_string(),
                });
            }
        }
        for lit in &self.goal {
            if !declared(&lit.atom.object) {
                return Err(ProblemError::UndeclaredObject {
                    literal: lit.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water() -> ObjectRef {
        ObjectRef::new("water", EntityClass::Material)
    }

    fn electric() -> ObjectRef {
        ObjectRef::new("electric", EntityClass::Energy)
    }

    fn powder() -> ObjectRef {
        ObjectRef::new("powder", EntityClass::Material)
    }

    fn atom(pred: &str, obj: &ObjectRef) -> Atom {
        Atom::new(Predicate::new(pred), obj.clone())
    }

    fn guide_material() -> ActionSchema {
        ActionSchema::new(
            "guide-material",
            vec![Parameter::new("?x", EntityClass::Material)],
            vec![SchemaLiteral::positive(SchemaAtom::new("stored", "?x"))],
            vec![SchemaAtom::new("guided", "?x")],
            vec![],
        )
    }

    fn convert_energy() -> ActionSchema {
        ActionSchema::new(
            "convert-energy",
            vec![Parameter::new("?x", EntityClass::Energy)],
            vec![SchemaLiteral::positive(SchemaAtom::new("guided", "?x"))],
            vec![SchemaAtom::new("converted", "?x")],
            vec![],
        )
    }

    fn add_energy_to_material() -> ActionSchema {
        ActionSchema::new(
            "add-energy-to-material",
            vec![
                Parameter::new("?e", EntityClass::Energy),
                Parameter::new("?m", EntityClass::Material),
            ],
            vec![
                SchemaLiteral::positive(SchemaAtom::new("guided", "?e")),
                SchemaLiteral::positive(SchemaAtom::new("guided", "?m")),
            ],
            vec![SchemaAtom::new("added-energy", "?m")],
            vec![],
        )
    }

    #[test]
    fn ground_single_material() {
        let actions = ground(&guide_material(), &[water(), electric()]);
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].to_string(), "guide-material(water)");
    }

    #[test]
    fn ground_enumerates_bindings_in_declaration_order() {
        let actions = ground(&add_energy_to_material(), &[electric(), water(), powder()]);
        let shown: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "add-energy-to-material(electric, water)",
                "add-energy-to-material(electric, powder)",
            ]
        );
    }

    #[test]
    fn ground_over_no_objects_is_empty() {
        assert!(ground(&guide_material(), &[]).is_empty());
    }

    #[test]
    fn ground_bindings_are_injective() {
        let two_materials = ActionSchema::new(
            "pair",
            vec![
                Parameter::new("?x", EntityClass::Material),
                Parameter::new("?y", EntityClass::Material),
            ],
            vec![SchemaLiteral::positive(SchemaAtom::new("guided", "?x"))],
            vec![SchemaAtom::new("added-material", "?y")],
            vec![],
        );
        let actions = ground(&two_materials, &[water(), powder()]);
        let shown: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, vec!["pair(water, powder)", "pair(powder, water)"]);
    }

    #[test]
    fn applicable_checks_precondition() {
        let state: State = [atom("stored", &water())].into_iter().collect();
        let guide = guide_material().bind(&[water()]).unwrap();
        assert!(applicable(&state, &guide));
        assert!(!applicable(&State::new(), &guide));

        let state: State = [atom("guided", &electric())].into_iter().collect();
        let convert = convert_energy().bind(&[electric()]).unwrap();
        assert!(applicable(&state, &convert));
    }

    #[test]
    fn apply_monotone_is_add_only() {
        let state: State = [atom("stored", &water())].into_iter().collect();
        let guide = guide_material().bind(&[water()]).unwrap();
        let next = apply(&state, &guide, Semantics::Monotone).unwrap();
        let expected: State = [atom("stored", &water()), atom("guided", &water())]
            .into_iter()
            .collect();
        assert_eq!(next, expected);
    }

    #[test]
    fn apply_consume_removes_the_input() {
        let state: State = [atom("stored", &water())].into_iter().collect();
        let guide = guide_material().bind(&[water()]).unwrap();
        let next = apply(&state, &guide, Semantics::Consume).unwrap();
        let expected: State = [atom("guided", &water())].into_iter().collect();
        assert_eq!(next, expected);
    }

    #[test]
    fn apply_monotone_convert() {
        let state: State = [atom("guided", &electric())].into_iter().collect();
        let convert = convert_energy().bind(&[electric()]).unwrap();
        let next = apply(&state, &convert, Semantics::Monotone).unwrap();
        let expected: State = [atom("guided", &electric()), atom("converted", &electric())]
            .into_iter()
            .collect();
        assert_eq!(next, expected);
    }

    #[test]
    fn apply_fails_when_not_applicable() {
        let guide = guide_material().bind(&[water()]).unwrap();
        let err = apply(&State::new(), &guide, Semantics::Monotone).unwrap_err();
        assert_eq!(err.missing.atom, atom("stored", &water()));
    }

    #[test]
    fn consume_frame_property_keeps_unrelated_atoms() {
        let state: State = [atom("stored", &water()), atom("guided", &electric())]
            .into_iter()
            .collect();
        let guide = guide_material().bind(&[water()]).unwrap();
        let next = apply(&state, &guide, Semantics::Consume).unwrap();
        assert!(next.contains(&atom("guided", &electric())));
        assert!(!next.contains(&atom("stored", &water())));
    }

    #[test]
    fn bind_rejects_class_mismatch_and_repeats() {
        let schema = add_energy_to_material();
        assert!(matches!(
            schema.bind(&[water(), powder()]),
            Err(BindError::ClassMismatch { .. })
        ));
        assert!(matches!(
            schema.bind(&[electric()]),
            Err(BindError::Arity { .. })
        ));
        let pair = ActionSchema::new(
            "pair",
            vec![
                Parameter::new("?x", EntityClass::Material),
                Parameter::new("?y", EntityClass::Material),
            ],
            vec![],
            vec![SchemaAtom::new("guided", "?y")],
            vec![],
        );
        assert!(matches!(
            pair.bind(&[water(), water()]),
            Err(BindError::RepeatedObject { .. })
        ));
    }

    #[test]
    fn schema_validation_catches_undeclared_variables() {
        let mut schema = guide_material();
        schema.add.push(SchemaAtom::new("guided", "?zz"));
        assert!(matches!(
            schema.validate(),
            Err(SchemaError::UndeclaredVariable { .. })
        ));
    }

    #[test]
    fn schema_validation_catches_overlapping_effects() {
        let mut schema = guide_material();
        schema.del.push(SchemaAtom::new("guided", "?x"));
        assert!(matches!(
            schema.validate(),
            Err(SchemaError::OverlappingEffect { .. })
        ));
    }

    #[test]
    fn state_satisfaction_is_closed_world() {
        let state: State = [atom("stored", &water())].into_iter().collect();
        assert!(state.satisfies(&Literal::positive(atom("stored", &water()))));
        assert!(state.satisfies(&Literal::negative(atom("guided", &water()))));
        assert!(!state.satisfies(&Literal::negative(atom("stored", &water()))));
    }

    #[test]
    fn problem_validation() {
        let p = Problem::new(
            "p",
            vec![water()],
            [atom("stored", &water())].into_iter().collect(),
            vec![Literal::positive(atom("guided", &water()))],
        );
        assert!(p.validate().is_ok());

        let bad = Problem::new(
            "p",
            vec![water()],
            [atom("stored", &electric())].into_iter().collect(),
            vec![],
        );
        assert!(matches!(
            bad.validate(),
            Err(ProblemError::UndeclaredObject { .. })
        ));

        let dup = Problem::new("p", vec![water(), water()], State::new(), vec![]);
        assert!(matches!(
            dup.validate(),
            Err(ProblemError::DuplicateObject(_))
        ));
    }

    #[test]
    fn literal_display_round_trips() {
        let objs = [water(), electric()];
        let lit = Literal::negative(atom("stored", &water()));
        assert_eq!(parse_literal(&lit.to_string(), &objs).unwrap(), lit);
        let lit = Literal::positive(atom("guided", &electric()));
        assert_eq!(parse_literal(&lit.to_string(), &objs).unwrap(), lit);
        assert!(parse_literal("guided(nobody)", &objs).is_err());
        assert!(parse_literal("guided", &objs).is_err());
    }
}
