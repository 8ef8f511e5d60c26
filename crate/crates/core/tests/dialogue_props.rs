use msa::dialogue::{
    assign_role, detect_drift, monitor_role_transition, run_pipeline, ChainState, CommitmentStatus,
    DriftDetector, PatternSet, PipelineConfig, PragmaticRole, RolePolicy, StubClient,
    TransitionVerdict,
};
use msa::gcode::parse_tag_list;
use msa::msl::SpeakerId;
use msa::{Transcript, TurnRole};
use proptest::prelude::*;

fn sid(s: &str) -> SpeakerId {
    SpeakerId::new(s).unwrap()
}

const STATUSES: [CommitmentStatus; 5] = [
    CommitmentStatus::Active,
    CommitmentStatus::Updated,
    CommitmentStatus::Transferred,
    CommitmentStatus::Closed,
    CommitmentStatus::Abandoned,
];

fn utterance() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop::sample::select(vec![
            "I", "will", "should", "check", "the", "report", "leave", "that", "to", "you", "I'll",
            "over", "budget", "figures", "later", "why", "not",
        ]),
        1..10,
    )
    .prop_map(|w| w.join(" "))
}

fn dialogue() -> impl Strategy<Value = Transcript> {
    prop::collection::vec((0usize..3, utterance()), 1..20).prop_map(|turns| {
        let mut t = Transcript::new();
        for (i, (who, text)) in turns.into_iter().enumerate() {
            let role = if i % 2 == 0 {
                TurnRole::User
            } else {
                TurnRole::Assistant
            };
            t.push(sid(["a", "b", "c"][who]), text, role, None).unwrap();
        }
        t
    })
}

proptest! {
    #[test]
    fn lower_threshold_never_adds_drift(
        prev in utterance(),
        curr in utterance(),
        lo in 0.0f64..1.0,
        hi in 0.0f64..1.0,
    ) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let at_lo = detect_drift(&prev, &curr, lo).unwrap();
        let at_hi = detect_drift(&prev, &curr, hi).unwrap();
        prop_assert_eq!(at_lo.overlap_ratio, at_hi.overlap_ratio);
        prop_assert!(!at_lo.drifted || at_hi.drifted);
        prop_assert!((0.0..=1.0).contains(&at_lo.overlap_ratio));
    }

    #[test]
    fn identical_utterances_never_drift(text in utterance(), th in 0.0f64..=1.0) {
        let mut words: Vec<&str> = Vec::new();
        for w in text.split(' ') {
            if !words.contains(&w) {
                words.push(w);
            }
        }
        let text = words.join(" ");
        let r = detect_drift(&text, &text, th).unwrap();
        prop_assert_eq!(r.overlap_ratio, 1.0);
        prop_assert!(!r.drifted);
        let raw = DriftDetector::new(th).raw().check(&text, &text).unwrap();
        prop_assert!(!raw.drifted);
    }

    #[test]
    fn reingest_is_idempotent(t in dialogue()) {
        let patterns = PatternSet::default();
        let mut once = ChainState::new();
        for turn in t.iter() {
            once.ingest(turn, &patterns);
        }
        let mut twice = once.clone();
        for turn in t.iter() {
            twice.ingest(turn, &patterns);
        }
        prop_assert_eq!(&twice, &once);
    }

    #[test]
    fn commitments_follow_lifecycle(t in dialogue()) {
        let patterns = PatternSet::default();
        let mut chain = ChainState::new();
        for turn in t.iter() {
            chain.ingest(turn, &patterns);
        }
        for c in chain.commitments() {
            prop_assert_eq!(c.history[0].status, CommitmentStatus::Active);
            prop_assert_eq!(c.history[0].turn, c.created_at);
            let mut prev = CommitmentStatus::Active;
            for change in &c.history[1..] {
                prop_assert!(prev.can_become(change.status), "{:?} -> {:?}", prev, change.status);
                prop_assert_eq!(change.target.is_some(), change.status == CommitmentStatus::Transferred);
                prev = change.status;
            }
            prop_assert_eq!(prev, c.status);
        }
        let transfers = chain
            .commitments()
            .iter()
            .flat_map(|c| &c.history)
            .filter(|h| h.status == CommitmentStatus::Transferred)
            .count();
        prop_assert_eq!(transfers, chain.graph().edge_count());
    }

    #[test]
    fn turn_roles_alternate(t in dialogue()) {
        let policy = RolePolicy::default();
        let next = assign_role(&t, &policy);
        let expected = if t.last().unwrap().turn_role == TurnRole::User {
            TurnRole::Assistant
        } else {
            TurnRole::User
        };
        prop_assert_eq!(next.turn_role, expected);
        prop_assert_eq!(next.function_role, policy.classify(&t.last().unwrap().text));
    }

    #[test]
    fn pipeline_is_deterministic(t in dialogue()) {
        let config = parse_tag_list(["#T_NEUTRAL", "#C_LOOP"]).unwrap();
        let a = run_pipeline(&t, &config, &StubClient, &PipelineConfig::default()).unwrap();
        let b = run_pipeline(&t, &config, &StubClient, &PipelineConfig::default()).unwrap();
        prop_assert_eq!(&a.reply, &b.reply);
        prop_assert_eq!(a.reply.index, t.len());
        prop_assert_eq!(a.directives, b.directives);
    }
}

#[test]
fn terminal_statuses_accept_nothing() {
    for from in [CommitmentStatus::Closed, CommitmentStatus::Abandoned] {
        for to in STATUSES {
            assert!(!from.can_become(to));
        }
    }
    for from in STATUSES {
        assert!(!from.can_become(CommitmentStatus::Active));
    }
    assert!(CommitmentStatus::Transferred.can_become(CommitmentStatus::Closed));
    assert!(!CommitmentStatus::Transferred.can_become(CommitmentStatus::Updated));
}

#[test]
fn transfer_phrase_hands_over_latest_commitment() {
    let mut t = Transcript::new();
    t.push(sid("a"), "I will draft the budget", TurnRole::User, None)
        .unwrap();
    t.push(sid("b"), "sounds fine", TurnRole::Assistant, None)
        .unwrap();
    t.push(
        sid("a"),
        "actually I'll leave that to you",
        TurnRole::User,
        None,
    )
    .unwrap();
    let mut chain = ChainState::new();
    for turn in t.iter() {
        chain.ingest(turn, &PatternSet::default());
    }
    let c = &chain.commitments()[0];
    assert_eq!(c.status, CommitmentStatus::Transferred);
    assert_eq!(c.transferred_to.as_ref().map(SpeakerId::as_str), Some("b"));
    assert!(chain.graph().has_edge(&sid("a"), &sid("b")));

    let id = c.id.clone();
    assert!(chain.set_status(&id, CommitmentStatus::Updated, 3).is_err());
    chain.set_status(&id, CommitmentStatus::Closed, 3).unwrap();
    assert!(chain
        .set_status(&id, CommitmentStatus::Abandoned, 4)
        .is_err());
}

#[test]
fn uncaused_role_change_is_flagged() {
    use PragmaticRole::*;
    assert_eq!(
        monitor_role_transition(Clarifier, Evader, None),
        TransitionVerdict::Flagged
    );
    assert_eq!(
        monitor_role_transition(Clarifier, Evader, Some("topic switch")),
        TransitionVerdict::Smooth
    );
}

#[test]
fn pipeline_realigns_after_drift() {
    let mut t = Transcript::new();
    t.push(
        sid("u"),
        "tell me about the quarterly budget figures",
        TurnRole::User,
        None,
    )
    .unwrap();
    t.push(
        sid("m"),
        "penguins enjoy cold weather swimming",
        TurnRole::Assistant,
        None,
    )
    .unwrap();
    let config = parse_tag_list(["#T_NEUTRAL"]).unwrap();
    let r = run_pipeline(&t, &config, &StubClient, &PipelineConfig::default()).unwrap();
    assert!(r.drift_flag);
    assert!(r.directives.as_str().contains("please confirm first"));
}
