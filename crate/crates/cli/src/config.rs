use std::path::Path;

use realzoo::witness::DEFAULT_PRECISION;
use realzoo::zoo::{EvalOptions, DEFAULT_FAMILY_N};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Dot,
    Table,
}

/// Defaults shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct CliConfig {
    pub default_precision: u32,
    pub default_family_n: u32,
    pub output_format: Option<OutputFormat>,
    /// Refinement rounds per ternary digit of an irrational point.
    pub digit_budget: u32,
    /// Precision-doubling rounds before evaluation gives up.
    pub max_rounds: u32,
}

impl Default for CliConfig {
    fn default() -> Self {
        let opts = EvalOptions::default();
        CliConfig {
            default_precision: DEFAULT_PRECISION,
            default_family_n: DEFAULT_FAMILY_N,
            output_format: None,
            digit_budget: opts.digit_budget,
            max_rounds: opts.max_rounds,
        }
    }
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<CliConfig, CliError> {
        let Some(path) = path else {
            return Ok(CliConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: CliConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Usage(format!("config: {what} must be at least 1")));
        if self.default_precision == 0 {
            return bad("defaultPrecision");
        }
        if self.default_family_n == 0 {
            return bad("defaultFamilyN");
        }
        if self.digit_budget == 0 {
            return bad("digitBudget");
        }
        if self.max_rounds == 0 {
            return bad("maxRounds");
        }
        Ok(())
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions { digit_budget: self.digit_budget, max_rounds: self.max_rounds }
    }
}
