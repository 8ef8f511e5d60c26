use std::fmt;

use super::{Dimension, GCodeError, Registry};

/// A validated `(dimension, value)` pair, e.g. `#T_SOFTASSERT`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GCodeTag {
    dimension: Dimension,
    value: String,
}

impl GCodeTag {
    /// Validates `value` (case-insensitively) against the registry.
    pub fn new(dimension: Dimension, value: &str, registry: &Registry) -> Result<Self, GCodeError> {
        let canonical = registry
            .canonical_value(dimension, value.trim())
            .ok_or_else(|| GCodeError::UnknownValue {
                dimension,
                value: value.to_string(),
            })?;
        Ok(GCodeTag {
            dimension,
            value: canonical.to_string(),
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    /// `#<PREFIX>_<VALUE>`
    pub fn canonical_surface(&self) -> String {
        format!("#{}_{}", self.dimension.prefix(), self.value)
    }
}

impl fmt::Display for GCodeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}_{}", self.dimension.prefix(), self.value)
    }
}

/// Parses one tag surface against the bundled registry.
pub fn parse_tag(surface: &str) -> Result<GCodeTag, GCodeError> {
    parse_tag_with(surface, Registry::builtin())
}

pub fn parse_tag_with(surface: &str, registry: &Registry) -> Result<GCodeTag, GCodeError> {
    let token = surface.trim();
    if token.is_empty() || token.chars().any(char::is_whitespace) {
        return Err(GCodeError::MalformedToken(surface.to_string()));
    }
    let body = token
        .strip_prefix('#')
        .ok_or_else(|| GCodeError::MalformedToken(surface.to_string()))?;
    let (prefix, value) = body
        .split_once('_')
        .ok_or_else(|| GCodeError::MalformedToken(surface.to_string()))?;
    if prefix.is_empty() || value.is_empty() {
        return Err(GCodeError::MalformedToken(surface.to_string()));
    }
    let dimension = Dimension::from_prefix(prefix)
        .ok_or_else(|| GCodeError::UnknownPrefix(prefix.to_string()))?;
    GCodeTag::new(dimension, value, registry)
}
