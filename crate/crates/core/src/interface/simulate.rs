use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::fixtures::sha256_hex;
use super::InterfaceError;
use crate::dialogue::{run_pipeline, LlmClient, PipelineConfig};
use crate::gcode::{Registry, SpeakerModuleConfig};
use crate::msl::SpeakerId;
use crate::transcript::{Transcript, TurnRole};

/// Several configured speakers and a shared task:
///
/// ```json
/// {"speaker_A": {"tone": "NEUTRAL"}, "speaker_B": ["#T_HIGHASSERT"], "task": "Debate ..."}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSpeakerTask {
    pub speakers: IndexMap<SpeakerId, SpeakerModuleConfig>,
    pub task: String,
}

impl MultiSpeakerTask {
    pub fn from_json_value(value: &Value) -> Result<Self, InterfaceError> {
        let map = value
            .as_object()
            .ok_or_else(|| InterfaceError::Invalid("task file must be a JSON object".into()))?;
        let task = match map.get("task") {
            Some(Value::String(t)) if !t.trim().is_empty() => t.clone(),
            Some(_) => {
                return Err(InterfaceError::Invalid(
                    "\"task\" must be a non-empty string".into(),
                ))
            }
            None => return Err(InterfaceError::Invalid("missing \"task\"".into())),
        };
        let mut speakers = IndexMap::new();
        for (name, config) in map.iter().filter(|(k, _)| k.as_str() != "task") {
            let id = SpeakerId::new(name.as_str())?;
            let config = SpeakerModuleConfig::from_json_value(config, Registry::builtin())?;
            if speakers.insert(id, config).is_some() {
                return Err(InterfaceError::Invalid(format!(
                    "speaker {name:?} listed twice"
                )));
            }
        }
        if speakers.len() < 2 {
            return Err(InterfaceError::Invalid(format!(
                "a multi-speaker task needs at least 2 speakers, got {}",
                speakers.len()
            )));
        }
        Ok(MultiSpeakerTask { speakers, task })
    }

    pub fn from_json(text: &str) -> Result<Self, InterfaceError> {
        Self::from_json_value(&serde_json::from_str(text)?)
    }

    pub fn to_json_value(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (id, config) in &self.speakers {
            map.insert(id.as_str().to_string(), Value::Object(config.to_object()));
        }
        map.insert("task".into(), Value::String(self.task.clone()));
        Value::Object(map)
    }

    /// First 12 hex digits of the SHA-256 of the canonical task JSON.
    pub fn task_id(&self) -> String {
        let canonical = serde_json::to_string(&self.to_json_value()).expect("task serializes");
        sha256_hex(canonical.as_bytes())[..12].to_string()
    }
}

/// Runs `turns` generated turns after an opening system turn carrying the
/// task. The seed picks the opening speaker and each next speaker among
/// the others; every turn goes through the full pipeline with the
/// speaker's own configuration.
pub fn simulate(
    task: &MultiSpeakerTask,
    turns: usize,
    seed: u64,
    client: &dyn LlmClient,
) -> Result<Transcript, InterfaceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<&SpeakerId> = task.speakers.keys().collect();
    let mut transcript = Transcript::new();
    transcript.push(
        SpeakerId::new("task")?,
        task.task.clone(),
        TurnRole::System,
        None,
    )?;

    let mut current = rng.random_range(0..names.len());
    for _ in 0..turns {
        let speaker = names[current];
        let config = PipelineConfig {
            reply_speaker: Some(speaker.clone()),
            ..PipelineConfig::default()
        };
        let result = run_pipeline(&transcript, &task.speakers[speaker], client, &config)?;
        let reply = result.reply;
        transcript.push(
            reply.speaker,
            reply.text,
            reply.turn_role,
            reply.function_role,
        )?;

        let step = rng.random_range(1..names.len());
        current = (current + step) % names.len();
    }
    Ok(transcript)
}

/// Writes `<dir>/<task-id>.<timestamp>.jsonl`; `timestamp` defaults to the
/// current unix time in seconds.
pub fn write_output(
    dir: &Path,
    task: &MultiSpeakerTask,
    transcript: &Transcript,
    timestamp: Option<u64>,
) -> Result<PathBuf, InterfaceError> {
    let ts = timestamp.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    });
    fs::create_dir_all(dir).map_err(|e| InterfaceError::io(dir, e))?;
    let path = dir.join(format!("{}.{ts}.jsonl", task.task_id()));
    fs::write(&path, transcript.to_jsonl()).map_err(|e| InterfaceError::io(&path, e))?;
    Ok(path)
}
