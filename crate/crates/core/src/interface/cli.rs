use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use super::server::{self, AppState};
use super::service;
use super::settings::{PartialSettings, Settings};
use super::simulate::{simulate, write_output, MultiSpeakerTask};
use super::InterfaceError;
use crate::gcode::{build_prompt_directives, parse_tag_list, Registry, SpeakerModuleConfig};
use crate::scoring::{
    mean_confidence_interval, two_sample_t, CaseAnnotation, GroupStats, ScoreCard, TTestVariant,
};

#[derive(Debug, Parser)]
#[command(
    name = "msa",
    version,
    about = "Speaker module tags, responsibility graphs and dialogue scoring"
)]
pub struct Cli {
    /// JSON settings file (also MSA_CONFIG)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse tags or a JSON config into the canonical keyed form
    Parse(ConfigInput),
    /// Compile tags or a JSON config into prompt directives
    Compile(ConfigInput),
    /// Score a JSONL transcript
    Annotate {
        /// transcript file, or - for stdin
        input: String,
        /// print a table instead of JSON
        #[arg(long)]
        table: bool,
    },
    /// Closed loops and drift nodes of a responsibility graph
    Graph {
        /// graph JSON file, or - for stdin
        input: String,
    },
    /// Generate a multi-speaker dialogue into the output directory
    Simulate {
        /// multi-speaker task JSON; relative paths not found here are looked up in the data directory
        task: PathBuf,
        #[arg(long, default_value_t = 6)]
        turns: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// file name timestamp; defaults to the current unix time
        #[arg(long)]
        timestamp: Option<u64>,
    },
    /// Totals table from a sub-score file
    ScoreCase {
        input: String,
        #[arg(long)]
        json: bool,
        /// transcript to add reference heuristic scores from
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Two-sample t and confidence intervals from summary statistics
    Stats {
        /// n,mean,sd
        #[arg(long, value_parser = parse_group)]
        a: GroupStats,
        /// n,mean,sd
        #[arg(long, value_parser = parse_group)]
        b: GroupStats,
        #[arg(long, value_enum, default_value_t = Variant::Pooled)]
        variant: Variant,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// published t to compare against
        #[arg(long)]
        reference_t: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service
    Serve {
        #[arg(long)]
        bind: Option<String>,
        #[arg(long)]
        port: Option<u16>,
    },
}

#[derive(Debug, clap::Args)]
pub struct ConfigInput {
    /// whitespace-separated tags, or inline JSON
    pub input: Option<String>,
    /// read the config from a file instead
    #[arg(long, conflicts_with = "input")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Pooled,
    Welch,
}

impl From<Variant> for TTestVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Pooled => TTestVariant::Pooled,
            Variant::Welch => TTestVariant::Welch,
        }
    }
}

fn parse_group(s: &str) -> Result<GroupStats, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, mean, sd] = parts.as_slice() else {
        return Err(format!("expected n,mean,sd, got {s:?}"));
    };
    let n = n.parse().map_err(|_| format!("bad n {n:?}"))?;
    let mean = mean.parse().map_err(|_| format!("bad mean {mean:?}"))?;
    let sd = sd.parse().map_err(|_| format!("bad sd {sd:?}"))?;
    GroupStats::new(n, mean, sd).map_err(|e| e.to_string())
}

fn read_input(input: &str) -> Result<String, InterfaceError> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| InterfaceError::io("stdin", e))?;
        Ok(s)
    } else {
        read_file(Path::new(input))
    }
}

fn read_file(path: &Path) -> Result<String, InterfaceError> {
    fs::read_to_string(path).map_err(|e| InterfaceError::io(path, e))
}

/// Tags (`#T_SOFTASSERT #P_SELFREF`) or JSON in either wire form.
pub fn parse_config_text(text: &str) -> Result<SpeakerModuleConfig, InterfaceError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(trimmed)?;
        Ok(SpeakerModuleConfig::from_json_value(
            &value,
            Registry::builtin(),
        )?)
    } else {
        Ok(parse_tag_list(trimmed.split_whitespace())?)
    }
}

fn config_input(c: &ConfigInput) -> Result<SpeakerModuleConfig, InterfaceError> {
    let text = match (&c.input, &c.file) {
        (_, Some(path)) => read_file(path)?,
        (Some(inline), None) => inline.clone(),
        (None, None) => return Err(InterfaceError::Invalid("give tags, JSON or --file".into())),
    };
    parse_config_text(&text)
}

fn stats_report(
    a: &GroupStats,
    b: &GroupStats,
    variant: TTestVariant,
    level: f64,
    reference_t: Option<f64>,
    json: bool,
) -> Result<String, InterfaceError> {
    let t = two_sample_t(a, b, variant)?;
    let ci_a = mean_confidence_interval(a, level)?;
    let ci_b = mean_confidence_interval(b, level)?;
    if json {
        let mut v = serde_json::json!({"t_test": t, "ci_a": ci_a, "ci_b": ci_b});
        if let Some(r) = reference_t {
            v["reference_t"] = r.into();
            v["delta"] = (t.t - r).into();
        }
        return Ok(serde_json::to_string_pretty(&v)? + "\n");
    }
    let name = match variant {
        TTestVariant::Pooled => "pooled",
        TTestVariant::Welch => "welch",
    };
    let pct = level * 100.0;
    let mut out = format!(
        "{name} t = {:.4}  df = {}  p = {:.3e}\n",
        t.t,
        fmt_df(t.df),
        t.p_value
    );
    out += &format!(
        "a: mean {} sd {} n {}  {pct}% CI [{:.2}, {:.2}]\n",
        a.mean(),
        a.sd(),
        a.n(),
        ci_a.lower,
        ci_a.upper
    );
    out += &format!(
        "b: mean {} sd {} n {}  {pct}% CI [{:.2}, {:.2}]\n",
        b.mean(),
        b.sd(),
        b.n(),
        ci_b.lower,
        ci_b.upper
    );
    if let Some(r) = reference_t {
        out += &format!("reference t = {r}  delta = {:+.4}\n", t.t - r);
    }
    Ok(out)
}

fn fmt_df(df: f64) -> String {
    if df.fract() == 0.0 {
        format!("{df:.0}")
    } else {
        format!("{df:.2}")
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), InterfaceError> {
    let write = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| InterfaceError::io("stdout", e))
    };
    match cli.command {
        Command::Parse(input) => {
            let config = config_input(&input)?;
            let text = serde_json::to_string_pretty(&config.to_object())?;
            write(out, &(text + "\n"))
        }
        Command::Compile(input) => {
            let config = config_input(&input)?;
            write(out, &format!("{}\n", build_prompt_directives(&config)))
        }
        Command::Annotate { input, table } => {
            let body = read_input(&input)?;
            if table {
                let transcript = service::parse_transcript(&body)?;
                let card = service::annotate(&transcript);
                write(out, &card.render_table(&input))
            } else {
                write(out, &(service::annotate_json(&body)? + "\n"))
            }
        }
        Command::Graph { input } => {
            let body = read_input(&input)?;
            write(out, &(service::analyze_graph_json(&body)? + "\n"))
        }
        Command::Simulate {
            task,
            turns,
            seed,
            output_dir,
            timestamp,
        } => {
            let settings = Settings::load(
                PartialSettings {
                    seed,
                    output_dir,
                    ..PartialSettings::default()
                },
                cli.config.as_deref(),
            )?;
            let task_path = if task.is_relative() && !task.exists() {
                settings.data_dir.join(&task)
            } else {
                task
            };
            let task = MultiSpeakerTask::from_json(&read_file(&task_path)?)?;
            let transcript = simulate(&task, turns, settings.seed, settings.client().as_ref())?;
            let path = write_output(&settings.output_dir, &task, &transcript, timestamp)?;
            write(out, &format!("{}\n", path.display()))
        }
        Command::ScoreCase {
            input,
            json,
            transcript,
        } => {
            let case: CaseAnnotation = serde_json::from_str(&read_input(&input)?)?;
            let mut card = ScoreCard::from_annotation(&case)?;
            if let Some(path) = transcript {
                let t = service::parse_transcript(&read_file(&path)?)?;
                card = card.with_heuristic(crate::scoring::heuristic_score(&t));
            }
            if json {
                write(out, &(serde_json::to_string_pretty(&card)? + "\n"))
            } else {
                let title = case.case.clone().unwrap_or_default();
                write(out, &card.render_table(&title))
            }
        }
        Command::Stats {
            a,
            b,
            variant,
            level,
            reference_t,
            json,
        } => write(
            out,
            &stats_report(&a, &b, variant.into(), level, reference_t, json)?,
        ),
        Command::Serve { bind, port } => {
            let settings = Settings::load(
                PartialSettings {
                    bind,
                    port,
                    ..PartialSettings::default()
                },
                cli.config.as_deref(),
            )?;
            let state = AppState::new(Arc::from(settings.client()));
            let addr = settings.address();
            write(out, &format!("listening on {addr}\n"))?;
            out.flush().map_err(|e| InterfaceError::io("stdout", e))?;
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| InterfaceError::io("runtime", e))?;
            runtime.block_on(server::serve(&addr, state))
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 on success, 2 on invalid input, 1 on runtime failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
