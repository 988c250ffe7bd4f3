//! Run configuration shared by the command-line tool and the examples.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::DEFAULT_OVERLAP_TOLERANCE;
use crate::geom::DEFAULT_POINTS;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "ROPEBOUND_THREADS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{THREADS_ENV} must be a positive integer, got {0:?}")]
    Threads(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub points_per_component: usize,
    pub overlap_tolerance: f64,
    pub random_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub restarts: usize,
    pub max_evaluations: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            points_per_component: DEFAULT_POINTS,
            overlap_tolerance: DEFAULT_OVERLAP_TOLERANCE,
            random_seed: 0,
            threads: None,
            input: None,
            output: None,
            restarts: 5,
            max_evaluations: 2000,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Thread count after applying the environment cap; `None` leaves the
    /// pool's default.
    pub fn effective_threads(&self) -> Result<Option<usize>, ConfigError> {
        let env = match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|n| *n > 0)
                    .ok_or(ConfigError::Threads(v))?,
            ),
            Err(_) => None,
        };
        Ok(match (self.threads, env) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
    }

    /// Configures the global pool. Only the first call in a process takes effect.
    pub fn install_thread_pool(&self) -> Result<(), ConfigError> {
        if let Some(n) = self.effective_threads()? {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| ConfigError::Pool(e.to_string()))?;
        }
        Ok(())
    }
}
