//! Request handling shared by the CLI and the HTTP service, so both
//! surfaces produce the same bytes for the same input.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::InterfaceError;
use crate::dialogue::{LlmClient, PatternSet, RolePolicy};
use crate::gcode::{build_prompt_directives, Registry, SpeakerModuleConfig};
use crate::msl::{
    analyze_loops, detect_partial_drift, LoopAnalysis, ResponsibilityGraph, SpeakerId,
};
use crate::scoring::{score_transcript, RubricRules, ScoreCard};
use crate::transcript::{DialogueTurn, Transcript, TurnRole};

/// `{"prompt": "...", "speaker_module": [...tags] | {...keyed}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub prompt: String,
    pub speaker_module: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub output: String,
}

/// Parsed and validated generate request.
#[derive(Debug, Clone)]
pub struct PreparedGenerate {
    pub config: SpeakerModuleConfig,
    pub context: Transcript,
}

impl PreparedGenerate {
    pub fn run(&self, client: &dyn LlmClient) -> Result<GenerateResponse, InterfaceError> {
        let directives = build_prompt_directives(&self.config);
        let output = client.generate(&directives, &self.context)?;
        Ok(GenerateResponse { output })
    }
}

pub fn prepare_generate(body: &str) -> Result<PreparedGenerate, InterfaceError> {
    let request: GenerateRequest = serde_json::from_str(body)?;
    if request.prompt.trim().is_empty() {
        return Err(InterfaceError::Invalid("prompt must not be empty".into()));
    }
    let config =
        SpeakerModuleConfig::from_json_value(&request.speaker_module, Registry::builtin())?;
    let mut context = Transcript::new();
    context.push(
        SpeakerId::new("user")?,
        request.prompt,
        TurnRole::User,
        None,
    )?;
    Ok(PreparedGenerate { config, context })
}

/// A generate request end to end, for callers that may block.
pub fn generate(body: &str, client: &dyn LlmClient) -> Result<GenerateResponse, InterfaceError> {
    prepare_generate(body)?.run(client)
}

/// Transcript from JSONL or from a JSON array of turns.
pub fn parse_transcript(body: &str) -> Result<Transcript, InterfaceError> {
    if body.trim_start().starts_with('[') {
        let turns: Vec<DialogueTurn> = serde_json::from_str(body)?;
        Ok(Transcript::from_turns(turns)?)
    } else {
        Ok(Transcript::from_jsonl_str(body)?)
    }
}

pub fn annotate(transcript: &Transcript) -> ScoreCard {
    score_transcript(
        transcript,
        &RubricRules::default(),
        &RolePolicy::default(),
        &PatternSet::default(),
    )
}

/// Score card JSON for a transcript body, as printed by `msa annotate` and
/// returned by `POST /annotate`.
pub fn annotate_json(body: &str) -> Result<String, InterfaceError> {
    let transcript = parse_transcript(body)?;
    if transcript.is_empty() {
        return Err(InterfaceError::Invalid("transcript has no turns".into()));
    }
    Ok(serde_json::to_string_pretty(&annotate(&transcript))?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub nodes: usize,
    pub edges: usize,
    #[serde(flatten)]
    pub loops: LoopAnalysis,
    pub self_retention: Vec<SpeakerId>,
    pub drift: Vec<SpeakerId>,
}

pub fn analyze_graph(graph: &ResponsibilityGraph) -> GraphReport {
    let loops = analyze_loops(graph);
    let self_retention = match &loops {
        LoopAnalysis::Exhaustive { loops } => loops
            .iter()
            .filter(|l| l.is_self_retention())
            .map(|l| l.speakers[0].clone())
            .collect(),
        LoopAnalysis::Components { .. } => graph
            .edges()
            .iter()
            .filter(|e| e.from == e.to)
            .map(|e| e.from.clone())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    GraphReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        loops,
        self_retention,
        drift: detect_partial_drift(graph).into_iter().collect(),
    }
}

pub fn analyze_graph_json(body: &str) -> Result<String, InterfaceError> {
    let graph = ResponsibilityGraph::from_json(body)?;
    Ok(serde_json::to_string_pretty(&analyze_graph(&graph))?)
}
