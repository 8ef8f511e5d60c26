//! Runtime settings. Each value resolves as command-line flag, then
//! environment variable, then JSON config file, then built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::InterfaceError;
use crate::dialogue::{
    LlmClient, RemoteClient, RemoteConfig, StubClient, ENV_BASE_URL, ENV_MODEL, ENV_RETRIES,
    ENV_TIMEOUT_MS, ENV_TOKEN,
};

pub const ENV_CONFIG: &str = "MSA_CONFIG";
pub const ENV_BIND: &str = "MSA_BIND";
pub const ENV_PORT: &str = "MSA_PORT";
pub const ENV_DATA_DIR: &str = "MSA_DATA_DIR";
pub const ENV_OUTPUT_DIR: &str = "MSA_OUTPUT_DIR";
pub const ENV_SEED: &str = "MSA_SEED";

/// Every setting, all optional. Used for the config file and for the
/// command-line and environment layers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialSettings {
    pub bind: Option<String>,
    pub port: Option<u16>,
    pub data_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub llm_base_url: Option<String>,
    pub llm_model: Option<String>,
    pub llm_token: Option<String>,
    pub llm_timeout_ms: Option<u64>,
    pub llm_retries: Option<u32>,
}

impl PartialSettings {
    pub fn from_file(path: &Path) -> Result<Self, InterfaceError> {
        let text = fs::read_to_string(path).map_err(|e| InterfaceError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| InterfaceError::Config(format!("{}: {e}", path.display())))
    }

    /// Reads the environment layer through `var`, so tests can supply a map.
    pub fn from_env_with(var: impl Fn(&str) -> Option<String>) -> Result<Self, InterfaceError> {
        fn num<T: std::str::FromStr>(
            name: &str,
            v: Option<String>,
        ) -> Result<Option<T>, InterfaceError> {
            v.map(|s| {
                s.trim().parse().map_err(|_| {
                    InterfaceError::Config(format!("{name} must be a number, got {s:?}"))
                })
            })
            .transpose()
        }
        Ok(PartialSettings {
            bind: var(ENV_BIND),
            port: num(ENV_PORT, var(ENV_PORT))?,
            data_dir: var(ENV_DATA_DIR).map(PathBuf::from),
            output_dir: var(ENV_OUTPUT_DIR).map(PathBuf::from),
            seed: num(ENV_SEED, var(ENV_SEED))?,
            llm_base_url: var(ENV_BASE_URL),
            llm_model: var(ENV_MODEL),
            llm_token: var(ENV_TOKEN),
            llm_timeout_ms: num(ENV_TIMEOUT_MS, var(ENV_TIMEOUT_MS))?,
            llm_retries: num(ENV_RETRIES, var(ENV_RETRIES))?,
        })
    }

    pub fn from_env() -> Result<Self, InterfaceError> {
        Self::from_env_with(|k| std::env::var(k).ok().filter(|v| !v.is_empty()))
    }

    /// Fills every unset field from `lower`.
    pub fn or(self, lower: PartialSettings) -> PartialSettings {
        PartialSettings {
            bind: self.bind.or(lower.bind),
            port: self.port.or(lower.port),
            data_dir: self.data_dir.or(lower.data_dir),
            output_dir: self.output_dir.or(lower.output_dir),
            seed: self.seed.or(lower.seed),
            llm_base_url: self.llm_base_url.or(lower.llm_base_url),
            llm_model: self.llm_model.or(lower.llm_model),
            llm_token: self.llm_token.or(lower.llm_token),
            llm_timeout_ms: self.llm_timeout_ms.or(lower.llm_timeout_ms),
            llm_retries: self.llm_retries.or(lower.llm_retries),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub bind: String,
    pub port: u16,
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// `None` selects the deterministic stub client.
    pub llm: Option<RemoteConfig>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings::from_partial(PartialSettings::default())
    }
}

impl Settings {
    fn from_partial(p: PartialSettings) -> Self {
        let llm = p.llm_base_url.map(|url| {
            let mut cfg = RemoteConfig::new(url, p.llm_model.unwrap_or_else(|| "default".into()));
            cfg.token = p.llm_token;
            if let Some(t) = p.llm_timeout_ms {
                cfg.timeout_ms = t;
            }
            if let Some(r) = p.llm_retries {
                cfg.retries = r;
            }
            cfg
        });
        Settings {
            bind: p.bind.unwrap_or_else(|| "127.0.0.1".into()),
            port: p.port.unwrap_or(8080),
            data_dir: p.data_dir.unwrap_or_else(|| "data".into()),
            output_dir: p.output_dir.unwrap_or_else(|| "output".into()),
            seed: p.seed.unwrap_or(0),
            llm,
        }
    }

    /// Layers `cli` over `env` over the config file at `config` over the
    /// defaults.
    pub fn resolve(
        cli: PartialSettings,
        env: PartialSettings,
        config: Option<&Path>,
    ) -> Result<Self, InterfaceError> {
        let file = match config {
            Some(path) => PartialSettings::from_file(path)?,
            None => PartialSettings::default(),
        };
        Ok(Settings::from_partial(cli.or(env).or(file)))
    }

    /// `resolve` against the process environment; the config file falls
    /// back to `MSA_CONFIG` when `config` is `None`.
    pub fn load(cli: PartialSettings, config: Option<&Path>) -> Result<Self, InterfaceError> {
        let env_config = std::env::var(ENV_CONFIG)
            .ok()
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        let config = config.map(Path::to_path_buf).or(env_config);
        Settings::resolve(cli, PartialSettings::from_env()?, config.as_deref())
    }

    pub fn client(&self) -> Box<dyn LlmClient> {
        match &self.llm {
            Some(cfg) => Box::new(RemoteClient::new(cfg.clone())),
            None => Box::new(StubClient),
        }
    }

    pub fn address(&self) -> String {
        format!("{}:{}", self.bind, self.port)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("msa.json");
        fs::write(
            &file,
            r#"{"port": 9000, "bind": "0.0.0.0", "seed": 7, "output_dir": "out-file"}"#,
        )
        .unwrap();

        let env_map: HashMap<&str, &str> = [(ENV_PORT, "9100"), (ENV_SEED, "8")].into();
        let env =
            PartialSettings::from_env_with(|k| env_map.get(k).map(|v| v.to_string())).unwrap();
        let cli = PartialSettings {
            port: Some(9200),
            ..PartialSettings::default()
        };
        let s = Settings::resolve(cli, env, Some(&file)).unwrap();
        assert_eq!(s.port, 9200);
        assert_eq!(s.seed, 8);
        assert_eq!(s.bind, "0.0.0.0");
        assert_eq!(s.output_dir, PathBuf::from("out-file"));
        assert_eq!(s.data_dir, PathBuf::from("data"));
        assert!(s.llm.is_none());
    }

    #[test]
    fn remote_from_env() {
        let env_map: HashMap<&str, &str> =
            [(ENV_BASE_URL, "http://localhost:5000"), (ENV_RETRIES, "4")].into();
        let env =
            PartialSettings::from_env_with(|k| env_map.get(k).map(|v| v.to_string())).unwrap();
        let s = Settings::resolve(PartialSettings::default(), env, None).unwrap();
        let llm = s.llm.unwrap();
        assert_eq!(llm.base_url, "http://localhost:5000");
        assert_eq!(llm.retries, 4);
        assert_eq!(llm.model, "default");
    }

    #[test]
    fn bad_values() {
        let bad = PartialSettings::from_env_with(|k| (k == ENV_PORT).then(|| "eighty".to_string()));
        assert!(matches!(bad, Err(InterfaceError::Config(_))));
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("bad.json");
        fs::write(&file, r#"{"colour": "blue"}"#).unwrap();
        assert!(Settings::resolve(
            PartialSettings::default(),
            PartialSettings::default(),
            Some(&file)
        )
        .is_err());
    }
}
