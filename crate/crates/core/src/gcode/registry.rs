use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::GCodeError;

/// The six pragmatic control dimensions.
///
/// Variant order is the fixed directive order; `Ord` follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Tone,
    Position,
    Closure,
    ContextAlignment,
    LogicalFlow,
    AffectiveTension,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Tone,
        Dimension::Position,
        Dimension::Closure,
        Dimension::ContextAlignment,
        Dimension::LogicalFlow,
        Dimension::AffectiveTension,
    ];

    /// Tag prefix used in the `#<PREFIX>_<VALUE>` surface form.
    pub fn prefix(self) -> &'static str {
        match self {
            Dimension::Tone => "T",
            Dimension::Position => "P",
            Dimension::Closure => "C",
            Dimension::ContextAlignment => "CTX",
            Dimension::LogicalFlow => "L",
            Dimension::AffectiveTension => "E",
        }
    }

    /// Key used in the keyed-object JSON form.
    pub fn key(self) -> &'static str {
        match self {
            Dimension::Tone => "tone",
            Dimension::Position => "position",
            Dimension::Closure => "closure",
            Dimension::ContextAlignment => "context_alignment",
            Dimension::LogicalFlow => "logical_flow",
            Dimension::AffectiveTension => "affective_tension",
        }
    }

    /// Key used inside `[KEY=VALUE]` directive segments.
    pub fn directive_key(self) -> &'static str {
        match self {
            Dimension::Tone => "TONE",
            Dimension::Position => "POSITION",
            Dimension::Closure => "CLOSURE",
            Dimension::ContextAlignment => "CONTEXT_ALIGNMENT",
            Dimension::LogicalFlow => "LOGICAL_FLOW",
            Dimension::AffectiveTension => "AFFECTIVE_TENSION",
        }
    }

    /// Case-insensitive prefix lookup.
    pub fn from_prefix(prefix: &str) -> Option<Dimension> {
        Self::ALL
            .into_iter()
            .find(|d| d.prefix().eq_ignore_ascii_case(prefix))
    }

    pub fn from_key(key: &str) -> Option<Dimension> {
        Self::ALL.into_iter().find(|d| d.key() == key)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.directive_key())
    }
}

#[derive(Deserialize)]
struct RegistryFile {
    version: u32,
    dimensions: Vec<RegistryEntry>,
}

#[derive(Deserialize)]
struct RegistryEntry {
    dimension: Dimension,
    values: Vec<String>,
}

/// Closed, versioned vocabulary of permitted values per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    version: u32,
    values: BTreeMap<Dimension, Vec<String>>,
}

const BUILTIN_REGISTRY: &str = include_str!("../../data/registry.json");

static BUILTIN: LazyLock<Registry> = LazyLock::new(|| {
    Registry::from_json(BUILTIN_REGISTRY).expect("bundled registry is well-formed")
});

impl Registry {
    /// The bundled registry.
    pub fn builtin() -> &'static Registry {
        &BUILTIN
    }

    /// Parses a registry file. Every dimension must appear exactly once with
    /// at least one value; values are non-empty uppercase ASCII letters.
    pub fn from_json(text: &str) -> Result<Registry, GCodeError> {
        let file: RegistryFile =
            serde_json::from_str(text).map_err(|e| GCodeError::InvalidRegistry(e.to_string()))?;
        let mut values = BTreeMap::new();
        for entry in file.dimensions {
            if entry.values.is_empty() {
                return Err(GCodeError::InvalidRegistry(format!(
                    "dimension {} lists no values",
                    entry.dimension.key()
                )));
            }
            let mut seen = Vec::with_capacity(entry.values.len());
            for v in entry.values {
                if v.is_empty() || !v.bytes().all(|b| b.is_ascii_uppercase()) {
                    return Err(GCodeError::InvalidRegistry(format!(
                        "value {v:?} is not an uppercase letter token"
                    )));
                }
                if seen.contains(&v) {
                    return Err(GCodeError::InvalidRegistry(format!("duplicate value {v}")));
                }
                seen.push(v);
            }
            if values.insert(entry.dimension, seen).is_some() {
                return Err(GCodeError::InvalidRegistry(format!(
                    "dimension {} listed twice",
                    entry.dimension.key()
                )));
            }
        }
        if let Some(missing) = Dimension::ALL.iter().find(|d| !values.contains_key(d)) {
            return Err(GCodeError::InvalidRegistry(format!(
                "dimension {} missing",
                missing.key()
            )));
        }
        Ok(Registry {
            version: file.version,
            values,
        })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn values(&self, dimension: Dimension) -> &[String] {
        self.values
            .get(&dimension)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Returns the canonical (uppercase) spelling if `value` is registered.
    pub fn canonical_value(&self, dimension: Dimension, value: &str) -> Option<&str> {
        self.values(dimension)
            .iter()
            .find(|v| v.eq_ignore_ascii_case(value))
            .map(String::as_str)
    }

    /// Total number of registered values across all dimensions.
    pub fn len(&self) -> usize {
        self.values.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every (dimension, value) pair in dimension order.
    pub fn entries(&self) -> impl Iterator<Item = (Dimension, &str)> {
        self.values
            .iter()
            .flat_map(|(d, vs)| vs.iter().map(move |v| (*d, v.as_str())))
    }
}
