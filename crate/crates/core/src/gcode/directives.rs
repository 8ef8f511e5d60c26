use std::fmt;

use serde::{Deserialize, Serialize};

use super::SpeakerModuleConfig;

/// Space-joined `[KEY=VALUE]` segments handed to the language model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectiveString(String);

impl DirectiveString {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a free-form suffix (e.g. a realignment request), space-separated.
    pub fn append(&mut self, suffix: &str) {
        if !self.0.is_empty() {
            self.0.push(' ');
        }
        self.0.push_str(suffix);
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for DirectiveString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<DirectiveString> for String {
    fn from(d: DirectiveString) -> String {
        d.0
    }
}

pub fn build_prompt_directives(config: &SpeakerModuleConfig) -> DirectiveString {
    let segments: Vec<String> = config
        .tags()
        .map(|tag| format!("[{}={}]", tag.dimension().directive_key(), tag.value()))
        .collect();
    DirectiveString(segments.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcode::{parse_config_object, parse_tag_list};

    #[test]
    fn full_profile() {
        let c = parse_config_object(
            r#"{"affective_tension":"tight","tone":"SOFTASSERT","position":"SELFREF","closure":"LOOP","context_alignment":"MERGE","logical_flow":"CASCADE"}"#,
        )
        .unwrap();
        assert_eq!(
            build_prompt_directives(&c).as_str(),
            "[TONE=SOFTASSERT] [POSITION=SELFREF] [CLOSURE=LOOP] [CONTEXT_ALIGNMENT=MERGE] [LOGICAL_FLOW=CASCADE] [AFFECTIVE_TENSION=TIGHT]"
        );
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(
            build_prompt_directives(&SpeakerModuleConfig::new()).as_str(),
            ""
        );
        let c = parse_tag_list(["#t_neutral"]).unwrap();
        assert_eq!(build_prompt_directives(&c).as_str(), "[TONE=NEUTRAL]");
    }

    #[test]
    fn append_on_empty_has_no_leading_space() {
        let mut d = DirectiveString::default();
        d.append("(x)");
        assert_eq!(d.as_str(), "(x)");
        d.append("(y)");
        assert_eq!(d.as_str(), "(x) (y)");
    }
}
