use serde::Serialize;

use super::{
    assign_role, generate_realignment, ChainState, DialogueError, DriftDetector, DriftReport,
    LlmClient, PatternSet, RolePolicy,
};
use crate::gcode::{
    build_prompt_directives, infer_tags, DirectiveString, InferenceRules, SpeakerModuleConfig,
};
use crate::msl::SpeakerId;
use crate::scoring::{score_transcript, RubricRules, ScoreCard};
use crate::transcript::{DialogueTurn, Transcript};

/// Everything `run_pipeline` needs besides the context and the client.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub inference_rules: InferenceRules,
    pub role_policy: RolePolicy,
    pub patterns: PatternSet,
    pub drift: DriftDetector,
    pub rubric: RubricRules,
    /// Speaker id for the generated turn; defaults to the assigned turn role
    /// (`user` / `assistant`).
    pub reply_speaker: Option<SpeakerId>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            inference_rules: InferenceRules::builtin().clone(),
            role_policy: RolePolicy::default(),
            patterns: PatternSet::default(),
            drift: DriftDetector::default(),
            rubric: RubricRules::default(),
            reply_speaker: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineResult {
    pub reply: DialogueTurn,
    pub tags: SpeakerModuleConfig,
    pub directives: DirectiveString,
    pub chain: ChainState,
    pub drift_flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftReport>,
    pub scorecard: ScoreCard,
}

/// One turn of the speaker architecture:
///
/// 1. infer tags and compile directives;
/// 2. assign the next roles and replay commitments over the context;
/// 3. drift-check the last two turns, appending a realignment request on drift;
/// 4. generate the reply;
/// 5. record commitments in the reply;
/// 6. score the extended transcript.
pub fn run_pipeline(
    context: &Transcript,
    prev_tags: &SpeakerModuleConfig,
    llm: &dyn LlmClient,
    config: &PipelineConfig,
) -> Result<PipelineResult, DialogueError> {
    let last = context.last().ok_or(DialogueError::EmptyContext)?;

    let tags = infer_tags(context, prev_tags, &config.inference_rules)?;
    let mut directives = build_prompt_directives(&tags);

    let assignment = assign_role(context, &config.role_policy);
    let mut chain = ChainState::new();
    for turn in context {
        chain.ingest(turn, &config.patterns);
    }

    let mut drift = None;
    if let [.., prev, curr] = context.turns() {
        let mut report = config.drift.check(&prev.text, &curr.text)?;
        report.turn_index = curr.index;
        if report.drifted {
            let realignment = generate_realignment(&last.text);
            directives.append(&realignment);
            report.realignment = Some(realignment);
        }
        drift = Some(report);
    }
    let drift_flag = drift.as_ref().is_some_and(|d| d.drifted);

    let text = llm.generate(&directives, context)?;
    let speaker = match &config.reply_speaker {
        Some(s) => s.clone(),
        None => SpeakerId::new(assignment.turn_role.as_str())?,
    };
    let mut extended = context.clone();
    let reply = extended
        .push(
            speaker,
            text,
            assignment.turn_role,
            Some(assignment.function_role),
        )?
        .clone();

    chain.ingest(&reply, &config.patterns);

    let scorecard = score_transcript(
        &extended,
        &config.rubric,
        &config.role_policy,
        &config.patterns,
    );

    Ok(PipelineResult {
        reply,
        tags,
        directives,
        chain,
        drift_flag,
        drift,
        scorecard,
    })
}
