//! Point-free Monocl terms.
//!
//! Grammar:
//!
//! ```text
//! term  ::= ident
//!         | "compose" "(" term ("," term)+ ")"
//!         | "product" "(" term ("," term)+ ")"
//!         | "id" "[" type "]"     | "copy" "[" type "]"   | "delete" "[" type "]"
//!         | "braid" "[" type "," type "]"
//!         | "coerce" "[" type "," type "]"
//! type  ::= ident | "(" ")" | "(" type ("*" type)* ")"
//! ident ::= [a-z][a-z0-9-]*   (not a keyword)
//! ```
//!
//! Nested product types are flattened on parse. `compose` and `product`
//! keep their argument lists as written.

mod elaborate;
mod parse;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ontology::MonoclType;

pub use elaborate::{elaborate, infer_type};
pub use parse::parse_term;

pub const KEYWORDS: [&str; 7] = ["compose", "product", "id", "braid", "copy", "delete", "coerce"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonoclTerm {
    Generator(String),
    Compose(Vec<MonoclTerm>),
    Product(Vec<MonoclTerm>),
    Id(MonoclType),
    Braid(MonoclType, MonoclType),
    Copy(MonoclType),
    Delete(MonoclType),
    Coerce(MonoclType, MonoclType),
}

impl MonoclTerm {
    pub fn generator(id: impl Into<String>) -> Self {
        MonoclTerm::Generator(id.into())
    }

    /// Generator ids referenced anywhere in the term, in order of appearance.
    pub fn generators(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let MonoclTerm::Generator(id) = t {
                out.push(id.as_str());
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a MonoclTerm)) {
        f(self);
        if let MonoclTerm::Compose(ts) | MonoclTerm::Product(ts) = self {
            for t in ts {
                t.walk(f);
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("`{construct}` at line {line}, column {column} needs at least two arguments, got {count}")]
    Arity {
        construct: &'static str,
        offset: usize,
        line: usize,
        column: usize,
        count: usize,
    },
    #[error("undeclared function `{0}`")]
    UnresolvedGenerator(String),
    #[error("undeclared type `{0}`")]
    UndeclaredType(String),
    #[error("cannot compose step {position} with step {}: {detail}", position + 1)]
    Composition { position: usize, detail: String },
    #[error("coercion from {source_type} to {target_type} is not a subtype relation")]
    Coercion {
        source_type: String,
        target_type: String,
    },
}

impl TermError {
    /// Character offset for syntax and arity errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            TermError::Syntax { offset, .. } | TermError::Arity { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, ts: &[MonoclTerm]) -> fmt::Result {
    write!(f, "{head}(")?;
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(")")
}

impl fmt::Display for MonoclTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoclTerm::Generator(id) => f.write_str(id),
            MonoclTerm::Compose(ts) => write_list(f, "compose", ts),
            MonoclTerm::Product(ts) => write_list(f, "product", ts),
            MonoclTerm::Id(t) => write!(f, "id[{t}]"),
            MonoclTerm::Braid(a, b) => write!(f, "braid[{a}, {b}]"),
            MonoclTerm::Copy(t) => write!(f, "copy[{t}]"),
            MonoclTerm::Delete(t) => write!(f, "delete[{t}]"),
            MonoclTerm::Coerce(a, b) => write!(f, "coerce[{a}, {b}]"),
        }
    }
}

impl FromStr for MonoclTerm {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
