//! The function catalog: thirty built-in engineering function schemas over
//! the three entity classes, plus a JSON file format for user catalogs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ground, is_valid_identifier, ActionSchema, Atom, EntityClass, GroundAction, ObjectRef,
    Parameter, Predicate, SchemaAtom, SchemaLiteral,
};

/// Domain name used when the catalog is emitted as a planning-domain file.
pub const DOMAIN_NAME: &str = "roth";

/// Where a catalog came from. Not part of catalog identity.
#[derive(Debug, Clone)]
pub enum CatalogSource {
    BuiltIn,
    File(PathBuf),
}

impl fmt::Display for CatalogSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSource::BuiltIn => f.write_str("built-in"),
            CatalogSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// An ordered collection of function schemas with its predicate vocabulary.
#[derive(Debug, Clone)]
pub struct FunctionCatalog {
    pub predicates: Vec<Predicate>,
    pub schemas: Vec<ActionSchema>,
    pub source: CatalogSource,
}

impl PartialEq for FunctionCatalog {
    fn eq(&self, other: &Self) -> bool {
        // source is provenance metadata, not identity
        self.predicates == other.predicates && self.schemas == other.schemas
    }
}

impl Eq for FunctionCatalog {}

impl FunctionCatalog {
    pub fn schema(&self, name: &str) -> Option<&ActionSchema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        for pred in &self.predicates {
            if !is_valid_identifier(pred.name()) {
                return Err(CatalogError::Validation {
                    schema: "<predicates>".to_string(),
                    message: format!("invalid predicate name `{}`", pred.name()),
                });
            }
        }
        for (i, pred) in self.predicates.iter().enumerate() {
            if self.predicates[..i].contains(pred) {
                return Err(CatalogError::Validation {
                    schema: "<predicates>".to_string(),
                    message: format!("duplicate predicate `{}`", pred.name()),
                });
            }
        }
        for (i, schema) in self.schemas.iter().enumerate() {
            if self.schemas[..i].iter().any(|s| s.name == schema.name) {
                return Err(CatalogError::Validation {
                    schema: schema.name.clone(),
                    message: "duplicate schema name".to_string(),
                });
            }
            schema.validate().map_err(|e| CatalogError::Validation {
                schema: schema.name.clone(),
                message: e.to_string(),
            })?;
            let atoms = schema
                .pre
                .iter()
                .map(|l| &l.atom)
                .chain(schema.add.iter())
                .chain(schema.del.iter());
            for atom in atoms {
                if !self.predicates.contains(&atom.predicate) {
                    return Err(CatalogError::Validation {
                        schema: schema.name.clone(),
                        message: format!("undeclared predicate `{}`", atom.predicate),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The allocated-entity predicate vocabulary of the built-in catalog.
pub fn builtin_vocabulary() -> Vec<Predicate> {
    [
        "stored",
        "guided",
        "transformed",
        "converted",
        "added-energy",
        "added-material",
        "added-information",
        "separated-energy",
        "separated-material",
        "separated-information",
        "distributed",
    ]
    .into_iter()
    .map(Predicate::new)
    .collect()
}

fn unary(name: String, class: EntityClass, pre: &str, add: &str) -> ActionSchema {
    ActionSchema::new(
        name,
        vec![Parameter::new("?x", class)],
        vec![SchemaLiteral::positive(SchemaAtom::new(pre, "?x"))],
        vec![SchemaAtom::new(add, "?x")],
        vec![],
    )
}

/// The thirty built-in function schemas.
///
/// Per entity class: store, guide, transform, convert (12). Summative and
/// distributive linking of equal entities (3 + 3). Summative linking of
/// unequal entities, one per ordered class pair (6), and distributive
/// separation of unequal entities likewise (6).
pub fn built_in_catalog() -> FunctionCatalog {
    let mut schemas = Vec::with_capacity(30);
    for class in EntityClass::ALL {
        schemas.push(unary(format!("store-{class}"), class, "guided", "stored"));
        schemas.push(unary(format!("guide-{class}"), class, "stored", "guided"));
        schemas.push(unary(
            format!("transform-{class}"),
            class,
            "guided",
            "transformed",
        ));
        schemas.push(unary(
            format!("convert-{class}"),
            class,
            "guided",
            "converted",
        ));
    }
    for class in EntityClass::ALL {
        schemas.push(ActionSchema::new(
            format!("sum-link-equal-{class}"),
            vec![Parameter::new("?x", class), Parameter::new("?y", class)],
            vec![
                SchemaLiteral::positive(SchemaAtom::new("guided", "?x")),
                SchemaLiteral::positive(SchemaAtom::new("guided", "?y")),
            ],
            vec![SchemaAtom::new(format!("added-{class}"), "?y")],
            vec![],
        ));
    }
    for class in EntityClass::ALL {
        schemas.push(ActionSchema::new(
            format!("dist-link-equal-{class}"),
            vec![Parameter::new("?x", class), Parameter::new("?y", class)],
            vec![SchemaLiteral::positive(SchemaAtom::new("guided", "?x"))],
            vec![
                SchemaAtom::new("guided", "?y"),
                SchemaAtom::new("distributed", "?x"),
            ],
            vec![],
        ));
    }
    for from in EntityClass::ALL {
        for into in EntityClass::ALL {
            if from == into {
                continue;
            }
            let (fv, iv) = (
                format!("?{}", from.initial()),
                format!("?{}", into.initial()),
            );
            schemas.push(ActionSchema::new(
                format!("add-{from}-to-{into}"),
                vec![Parameter::new(&fv, from), Parameter::new(&iv, into)],
                vec![
                    SchemaLiteral::positive(SchemaAtom::new("guided", &fv)),
                    SchemaLiteral::positive(SchemaAtom::new("guided", &iv)),
                ],
                vec![SchemaAtom::new(format!("added-{from}"), &iv)],
                vec![],
            ));
        }
    }
    for sep in EntityClass::ALL {
        for from in EntityClass::ALL {
            if sep == from {
                continue;
            }
            schemas.push(ActionSchema::new(
                format!("separate-{sep}-from-{from}"),
                vec![Parameter::new("?x", from)],
                vec![SchemaLiteral::positive(SchemaAtom::new(
                    format!("added-{sep}"),
                    "?x",
                ))],
                vec![SchemaAtom::new(format!("separated-{sep}"), "?x")],
                vec![],
            ));
        }
    }
    FunctionCatalog {
        predicates: builtin_vocabulary(),
        schemas,
        source: CatalogSource::BuiltIn,
    }
}

/// Ground actions from the catalog whose add list contains `goal`, in catalog
/// order then binding order.
pub fn achievers(
    goal: &Atom,
    catalog: &FunctionCatalog,
    objects: &[ObjectRef],
) -> Vec<GroundAction> {
    catalog
        .schemas
        .iter()
        .flat_map(|schema| ground(schema, objects))
        .filter(|action| action.add.contains(goal))
        .collect()
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid catalog, schema `{schema}`: {message}")]
    Validation { schema: String, message: String },
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    types: Vec<String>,
    predicates: Vec<String>,
    actions: Vec<ActionFile>,
}

#[derive(Serialize, Deserialize)]
struct ActionFile {
    name: String,
    params: Vec<ParamFile>,
    pre: Vec<String>,
    add: Vec<String>,
    #[serde(default)]
    del: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ParamFile {
    var: String,
    #[serde(rename = "type")]
    class: String,
}

fn parse_schema_literal(text: &str, schema: &str) -> Result<SchemaLiteral, CatalogError> {
    let invalid = |message: String| CatalogError::Validation {
        schema: schema.to_string(),
        message,
    };
    let trimmed = text.trim();
    let (positive, rest) = match trimmed.strip_prefix("not ") {
        Some(rest) => (false, rest.trim()),
        None => (true, trimmed),
    };
    let open = rest
        .find('(')
        .ok_or_else(|| invalid(format!("malformed literal `{text}`")))?;
    if !rest.ends_with(')') {
        return Err(invalid(format!("malformed literal `{text}`")));
    }
    let pred = &rest[..open];
    let var = &rest[open + 1..rest.len() - 1];
    if !is_valid_identifier(pred) {
        return Err(invalid(format!("bad predicate in literal `{text}`")));
    }
    if !var.starts_with('?') {
        return Err(invalid(format!(
            "literal `{text}` must apply to a `?`-variable"
        )));
    }
    Ok(SchemaLiteral {
        atom: SchemaAtom::new(pred, var),
        positive,
    })
}

fn format_schema_literal(lit: &SchemaLiteral) -> String {
    lit.to_string()
}

/// Parses catalog JSON. `source` is recorded as provenance only.
pub fn parse_catalog_json(
    text: &str,
    source: CatalogSource,
) -> Result<FunctionCatalog, CatalogError> {
    let file: CatalogFile = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for ty in &file.types {
        EntityClass::from_str(ty).map_err(|e| CatalogError::Validation {
            schema: "<types>".to_string(),
            message: e.to_string(),
        })?;
    }
    let mut schemas = Vec::with_capacity(file.actions.len());
    for action in &file.actions {
        let mut params = Vec::with_capacity(action.params.len());
        for p in &action.params {
            let class = EntityClass::from_str(&p.class).map_err(|e| CatalogError::Validation {
                schema: action.name.clone(),
                message: e.to_string(),
            })?;
            params.push(Parameter::new(&p.var, class));
        }
        let mut pre = Vec::with_capacity(action.pre.len());
        for text in &action.pre {
            pre.push(parse_schema_literal(text, &action.name)?);
        }
        let effect_atom = |text: &String| -> Result<SchemaAtom, CatalogError> {
            let lit = parse_schema_literal(text, &action.name)?;
            if !lit.positive {
                return Err(CatalogError::Validation {
                    schema: action.name.clone(),
                    message: format!("effect literal `{text}` must be a plain atom"),
                });
            }
            Ok(lit.atom)
        };
        let add = action
            .add
            .iter()
            .map(effect_atom)
            .collect::<Result<Vec<_>, _>>()?;
        let del = action
            .del
            .iter()
            .map(effect_atom)
            .collect::<Result<Vec<_>, _>>()?;
        schemas.push(ActionSchema::new(&action.name, params, pre, add, del));
    }
    let catalog = FunctionCatalog {
        predicates: file.predicates.into_iter().map(Predicate::new).collect(),
        schemas,
        source,
    };
    catalog.validate()?;
    Ok(catalog)
}

pub fn catalog_to_json(catalog: &FunctionCatalog) -> String {
    let file = CatalogFile {
        types: EntityClass::ALL
            .iter()
            .map(|c| c.name().to_string())
            .collect(),
        predicates: catalog
            .predicates
            .iter()
            .map(|p| p.name().to_string())
            .collect(),
        actions: catalog
            .schemas
            .iter()
            .map(|s| ActionFile {
                name: s.name.clone(),
                params: s
                    .params
                    .iter()
                    .map(|p| ParamFile {
                        var: p.var.clone(),
                        class: p.class.name().to_string(),
                    })
                    .collect(),
                pre: s.pre.iter().map(format_schema_literal).collect(),
                add: s.add.iter().map(|a| a.to_string()).collect(),
                del: s.del.iter().map(|a| a.to_string()).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("catalog serializes");
    text.push('\n');
    text
}

pub fn load_catalog(path: &Path) -> Result<FunctionCatalog, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_catalog_json(&text, CatalogSource::File(path.to_path_buf()))
}

pub fn save_catalog(catalog: &FunctionCatalog, path: &Path) -> Result<(), CatalogError> {
    std::fs::write(path, catalog_to_json(catalog)).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Renders the catalog as a planning-domain document in the grammar the
/// parser accepts; `parse_domain` + `domain_to_catalog` invert it.
pub fn emit_domain(catalog: &FunctionCatalog) -> String {
    crate::pddl::print_domain(&crate::pddl::catalog_to_domain(catalog))
}
