//! Speaker module configurations and their two JSON shapes.
//!
//! Tag-list form:
//!
//! ```json
//! ["#T_SOFTASSERT", "#P_SELFREF", "#C_LOOP", "#CTX_MERGE", "#L_CASCADE", "#E_TIGHT"]
//! ```
//!
//! Keyed-object form (values case-insensitive, no `#` prefix):
//!
//! ```json
//! {"tone": "SOFTASSERT", "position": "SELFREF", "closure": "LOOP"}
//! ```

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use super::{parse_tag_with, Dimension, GCodeError, GCodeTag, Registry};

const SPEAKER_ID_KEY: &str = "speaker_id";

/// At most one tag per dimension, plus an optional speaker identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SpeakerModuleConfig {
    tags: BTreeMap<Dimension, GCodeTag>,
    pub speaker_id: Option<String>,
}

impl SpeakerModuleConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a tag; fails if its dimension is already configured.
    pub fn insert(&mut self, tag: GCodeTag) -> Result<(), GCodeError> {
        let dim = tag.dimension();
        if self.tags.contains_key(&dim) {
            return Err(GCodeError::DuplicateDimension(dim));
        }
        self.tags.insert(dim, tag);
        Ok(())
    }

    /// Sets a tag, replacing any existing tag for the same dimension.
    pub fn set(&mut self, tag: GCodeTag) -> Option<GCodeTag> {
        self.tags.insert(tag.dimension(), tag)
    }

    pub fn get(&self, dimension: Dimension) -> Option<&GCodeTag> {
        self.tags.get(&dimension)
    }

    pub fn contains(&self, dimension: Dimension) -> bool {
        self.tags.contains_key(&dimension)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Tags in fixed dimension order.
    pub fn tags(&self) -> impl Iterator<Item = &GCodeTag> {
        self.tags.values()
    }

    pub fn to_tag_list(&self) -> Vec<String> {
        self.tags().map(GCodeTag::canonical_surface).collect()
    }

    pub fn to_object(&self) -> Map<String, Value> {
        let mut map = Map::new();
        if let Some(id) = &self.speaker_id {
            map.insert(SPEAKER_ID_KEY.into(), Value::String(id.clone()));
        }
        for tag in self.tags() {
            map.insert(
                tag.dimension().key().into(),
                Value::String(tag.value().to_string()),
            );
        }
        map
    }

    /// Parses the keyed-object form from a `serde_json` object.
    pub fn from_object(map: &Map<String, Value>, registry: &Registry) -> Result<Self, GCodeError> {
        let mut config = SpeakerModuleConfig::new();
        for (key, value) in map {
            if key == SPEAKER_ID_KEY {
                let id = value.as_str().ok_or_else(|| {
                    GCodeError::MalformedJson(format!("{SPEAKER_ID_KEY} must be a string"))
                })?;
                config.speaker_id = Some(id.to_string());
                continue;
            }
            let dim =
                Dimension::from_key(key).ok_or_else(|| GCodeError::UnknownKey(key.clone()))?;
            let raw = value.as_str().ok_or_else(|| {
                GCodeError::MalformedJson(format!("value for {key} must be a string"))
            })?;
            config.insert(GCodeTag::new(dim, raw, registry)?)?;
        }
        Ok(config)
    }

    /// Accepts either JSON shape, optionally wrapped as `{"speaker_module": ...}`.
    pub fn from_json_value(value: &Value, registry: &Registry) -> Result<Self, GCodeError> {
        match value {
            Value::Array(items) => {
                let surfaces = items
                    .iter()
                    .map(|v| {
                        v.as_str().ok_or_else(|| {
                            GCodeError::MalformedJson("tag list entries must be strings".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                parse_tag_list_with(surfaces, registry)
            }
            Value::Object(map) => match map.get("speaker_module") {
                Some(inner) if map.len() == 1 => Self::from_json_value(inner, registry),
                _ => Self::from_object(map, registry),
            },
            _ => Err(GCodeError::MalformedJson(
                "speaker module must be a tag list or an object".into(),
            )),
        }
    }
}

pub fn parse_tag_list<I, S>(surfaces: I) -> Result<SpeakerModuleConfig, GCodeError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    parse_tag_list_with(surfaces, Registry::builtin())
}

pub fn parse_tag_list_with<I, S>(
    surfaces: I,
    registry: &Registry,
) -> Result<SpeakerModuleConfig, GCodeError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut config = SpeakerModuleConfig::new();
    for s in surfaces {
        config.insert(parse_tag_with(s.as_ref(), registry)?)?;
    }
    Ok(config)
}

/// Parses the keyed-object form, bare or wrapped as `{"speaker_module": {...}}`.
/// Unknown keys are rejected.
pub fn parse_config_object(json_text: &str) -> Result<SpeakerModuleConfig, GCodeError> {
    parse_config_object_with(json_text, Registry::builtin())
}

pub fn parse_config_object_with(
    json_text: &str,
    registry: &Registry,
) -> Result<SpeakerModuleConfig, GCodeError> {
    let value: Value =
        serde_json::from_str(json_text).map_err(|e| GCodeError::MalformedJson(e.to_string()))?;
    let map = match value {
        Value::Object(map) => map,
        _ => return Err(GCodeError::MalformedJson("expected a JSON object".into())),
    };
    match map.get("speaker_module") {
        Some(Value::Object(inner)) if map.len() == 1 => {
            SpeakerModuleConfig::from_object(inner, registry)
        }
        Some(_) if map.len() == 1 => Err(GCodeError::MalformedJson(
            "speaker_module must be an object".into(),
        )),
        _ => SpeakerModuleConfig::from_object(&map, registry),
    }
}

impl Serialize for SpeakerModuleConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_object().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpeakerModuleConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        SpeakerModuleConfig::from_json_value(&value, Registry::builtin()).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D3: [&str; 6] = [
        "#T_SOFTASSERT",
        "#P_SELFREF",
        "#C_LOOP",
        "#CTX_MERGE",
        "#L_CASCADE",
        "#E_TIGHT",
    ];
    const D5: &str = r#"{"tone":"SOFTASSERT","position":"SELFREF","closure":"LOOP","context_alignment":"MERGE","logical_flow":"CASCADE","affective_tension":"TIGHT"}"#;

    #[test]
    fn full_tag_list() {
        let c = parse_tag_list(D3).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.to_tag_list(), D3);
    }

    #[test]
    fn empty_tag_list() {
        assert!(parse_tag_list(Vec::<String>::new()).unwrap().is_empty());
    }

    #[test]
    fn duplicate_dimension() {
        assert!(matches!(
            parse_tag_list(["#T_NEUTRAL", "#T_HIGHASSERT"]),
            Err(GCodeError::DuplicateDimension(Dimension::Tone))
        ));
    }

    #[test]
    fn object_form_equals_tag_list() {
        assert_eq!(
            parse_config_object(D5).unwrap(),
            parse_tag_list(D3).unwrap()
        );
    }

    #[test]
    fn speaker_a_profile() {
        let c = parse_config_object(
            r#"{"tone":"NEUTRAL","position":"DETACH","closure":"SINK","logical_flow":"SCATTER","context_alignment":"STANDALONE","affective_tension":"FLAT"}"#,
        )
        .unwrap();
        assert_eq!(
            c.to_tag_list(),
            [
                "#T_NEUTRAL",
                "#P_DETACH",
                "#C_SINK",
                "#CTX_STANDALONE",
                "#L_SCATTER",
                "#E_FLAT"
            ]
        );
    }

    #[test]
    fn object_values_case_insensitive() {
        let c = parse_config_object(r#"{"tone":"softAssert"}"#).unwrap();
        assert_eq!(c.get(Dimension::Tone).unwrap().value(), "SOFTASSERT");
    }

    #[test]
    fn object_errors() {
        assert!(matches!(
            parse_config_object(r#"{"mood":"HAPPY"}"#),
            Err(GCodeError::UnknownKey(k)) if k == "mood"
        ));
        assert!(matches!(
            parse_config_object(r#"{"tone":"BANANA"}"#),
            Err(GCodeError::UnknownValue { .. })
        ));
        assert!(matches!(
            parse_config_object("{"),
            Err(GCodeError::MalformedJson(_))
        ));
        assert!(matches!(
            parse_config_object("[]"),
            Err(GCodeError::MalformedJson(_))
        ));
        assert!(matches!(
            parse_config_object(r#"{"tone":3}"#),
            Err(GCodeError::MalformedJson(_))
        ));
    }

    #[test]
    fn wrapped_single_speaker_schema() {
        let wrapped = format!(r#"{{"speaker_module": {D5}}}"#);
        let v: Value = serde_json::from_str(&wrapped).unwrap();
        let c = SpeakerModuleConfig::from_json_value(&v, Registry::builtin()).unwrap();
        assert_eq!(c, parse_tag_list(D3).unwrap());
    }

    #[test]
    fn serde_round_trip_keeps_speaker_id() {
        let mut c = parse_tag_list(["#T_NEUTRAL", "#E_DRIFT"]).unwrap();
        c.speaker_id = Some("speaker_A".into());
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"speaker_id":"speaker_A","tone":"NEUTRAL","affective_tension":"DRIFT"}"#
        );
        let back: SpeakerModuleConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
