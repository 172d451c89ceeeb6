use foothills_core::closedform::MAX_MOMENT_ORDER;
use foothills_core::oracle::{DEFAULT_CELL_BUDGET_LOG2, DEFAULT_DEPTH};
use foothills_core::Params;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything a subcommand needs; built from flags only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub lambda: f64,
    pub depth: usize,
    pub n_max: usize,
    pub harmonics: usize,
    pub tol: f64,
    /// `None` picks the subcommand's natural format.
    pub format: Option<OutputFormat>,
    pub seed: u64,
    pub window: Option<(f64, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            depth: DEFAULT_DEPTH,
            n_max: 6,
            harmonics: 100,
            tol: 1e-12,
            format: None,
            seed: 0x5eed,
            window: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        Params::new(self.lambda)?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.depth + 1 > DEFAULT_CELL_BUDGET_LOG2 as usize {
            return Err(CliError::Resource(format!(
                "--depth {} needs 2^{} cells, budget is 2^{}",
                self.depth,
                self.depth + 1,
                DEFAULT_CELL_BUDGET_LOG2
            )));
        }
        if self.n_max > MAX_MOMENT_ORDER {
            return Err(CliError::Usage(format!(
                "--nmax {} exceeds {}",
                self.n_max, MAX_MOMENT_ORDER
            )));
        }
        if let Some((a, b)) = self.window {
            if !(-1.0 <= a && a < b && b <= 1.0) {
                return Err(CliError::Usage(format!(
                    "--window needs -1 <= a < b <= 1, got {a} {b}"
                )));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<Params> {
        Ok(Params::new(self.lambda)?)
    }

    pub fn format_or(&self, fallback: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(fallback)
    }

    pub fn window_or_full(&self) -> (f64, f64) {
        self.window.unwrap_or((-1.0, 1.0))
    }
}
