//! Modular speaker architecture.
//!
//! * [`gcode`]: pragmatic control tags and prompt directives
//! * [`msl`]: responsibility graphs, closed loops, drift and context rules
//! * [`dialogue`]: roles, commitments, drift realignment and the turn pipeline
//! * [`scoring`]: rubric totals, shift rate, heuristics and group statistics
//! * [`interface`]: CLI, HTTP service, fixtures and simulation

pub mod dialogue;
pub mod gcode;
pub mod interface;
pub mod msl;
pub mod scoring;
pub mod text;
pub mod transcript;

pub use transcript::{DialogueTurn, Transcript, TranscriptError, TurnRole};
