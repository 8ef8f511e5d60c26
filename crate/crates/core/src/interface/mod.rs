//! User surfaces: the command line, the HTTP service, runtime settings,
//! the bundled case corpus and multi-speaker simulation.

pub mod cli;
mod error;
pub mod fixtures;
pub mod server;
pub mod service;
pub mod settings;
pub mod simulate;

pub use error::{ErrorBody, InterfaceError};
pub use fixtures::{load_fixtures, load_fixtures_from, Fixture};
pub use settings::{PartialSettings, Settings};
pub use simulate::{simulate, write_output, MultiSpeakerTask};
