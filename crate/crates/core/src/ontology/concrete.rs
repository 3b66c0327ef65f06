//! References to concrete code entities in a host language.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Python,
    R,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Python => "python",
            Language::R => "r",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallKind {
    #[default]
    Function,
    Method,
    Getter,
    Setter,
    Constructor,
}

/// A `(package, qualified_name)` pair, serialized as a two-element array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QualifiedName(pub String, pub String);

impl QualifiedName {
    pub fn new(package: impl Into<String>, name: impl Into<String>) -> Self {
        Self(package.into(), name.into())
    }

    pub fn package(&self) -> &str {
        &self.0
    }

    pub fn name(&self) -> &str {
        &self.1
    }
}

/// A concrete function, method, accessor or class.
///
/// `resolution_list` always starts with the entity itself; further entries
/// are the superclass candidates the producer of the reference (tracer or
/// fixture author) wants annotation lookup to fall back on, in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConcreteRefRepr", into = "ConcreteRefRepr")]
pub struct ConcreteRef {
    pub language: Language,
    pub package: String,
    pub qualified_name: String,
    pub kind: CallKind,
    resolution_list: Vec<QualifiedName>,
}

impl ConcreteRef {
    pub fn new(
        language: Language,
        package: impl Into<String>,
        qualified_name: impl Into<String>,
        kind: CallKind,
    ) -> Self {
        let package = package.into();
        let qualified_name = qualified_name.into();
        let resolution_list = vec![QualifiedName(package.clone(), qualified_name.clone())];
        Self {
            language,
            package,
            qualified_name,
            kind,
            resolution_list,
        }
    }

    /// A class or type name; the kind is irrelevant for types.
    pub fn class(language: Language, package: impl Into<String>, name: impl Into<String>) -> Self {
        Self::new(language, package, name, CallKind::Function)
    }

    /// Appends a fallback candidate to the resolution list.
    pub fn with_fallback(mut self, package: impl Into<String>, name: impl Into<String>) -> Self {
        self.resolution_list.push(QualifiedName::new(package, name));
        self
    }

    pub fn resolution_list(&self) -> &[QualifiedName] {
        &self.resolution_list
    }

    pub fn own_name(&self) -> QualifiedName {
        QualifiedName(self.package.clone(), self.qualified_name.clone())
    }

    /// The class owning a method, getter or setter, with a resolution list
    /// derived from this reference's own. `None` for other kinds or when the
    /// name has no owner segment.
    pub fn receiver_class(&self) -> Option<ConcreteRef> {
        if !matches!(
            self.kind,
            CallKind::Method | CallKind::Getter | CallKind::Setter
        ) {
            return None;
        }
        let owners: Vec<QualifiedName> = self
            .resolution_list
            .iter()
            .filter_map(|q| owner_of(q.name()).map(|o| QualifiedName::new(q.package(), o)))
            .collect();
        let first = owners.first()?.clone();
        if first.name() != owner_of(&self.qualified_name)? {
            return None;
        }
        Some(ConcreteRef {
            language: self.language,
            package: first.0,
            qualified_name: first.1,
            kind: CallKind::Function,
            resolution_list: owners,
        })
    }

    /// The class a constructor builds.
    pub fn constructed_class(&self) -> Option<ConcreteRef> {
        (self.kind == CallKind::Constructor).then(|| ConcreteRef {
            kind: CallKind::Function,
            ..self.clone()
        })
    }
}

fn owner_of(name: &str) -> Option<&str> {
    name.rfind(['.', '$']).map(|i| &name[..i]).filter(|o| !o.is_empty())
}

impl fmt::Display for ConcreteRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.language, self.package, self.qualified_name)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConcreteRefRepr {
    language: Language,
    package: String,
    qualified_name: String,
    #[serde(default, skip_serializing_if = "is_default_kind")]
    kind: CallKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resolution_list: Option<Vec<QualifiedName>>,
}

fn is_default_kind(kind: &CallKind) -> bool {
    *kind == CallKind::Function
}

impl TryFrom<ConcreteRefRepr> for ConcreteRef {
    type Error = String;

    fn try_from(repr: ConcreteRefRepr) -> Result<Self, Self::Error> {
        let own = QualifiedName(repr.package.clone(), repr.qualified_name.clone());
        let resolution_list = match repr.resolution_list {
            None => vec![own],
            Some(list) if list.is_empty() => vec![own],
            Some(list) => {
                if list[0] != own {
                    return Err(format!(
                        "resolution_list of `{}` must begin with [\"{}\", \"{}\"]",
                        repr.qualified_name, own.0, own.1
                    ));
                }
                list
            }
        };
        Ok(ConcreteRef {
            language: repr.language,
            package: repr.package,
            qualified_name: repr.qualified_name,
            kind: repr.kind,
            resolution_list,
        })
    }
}

impl From<ConcreteRef> for ConcreteRefRepr {
    fn from(c: ConcreteRef) -> Self {
        let trivial = c.resolution_list.len() == 1;
        ConcreteRefRepr {
            language: c.language,
            package: c.package,
            qualified_name: c.qualified_name,
            kind: c.kind,
            resolution_list: (!trivial).then_some(c.resolution_list),
        }
    }
}
