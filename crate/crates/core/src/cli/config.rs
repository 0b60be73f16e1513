//! Run configuration: one JSON document per command invocation.

use std::path::Path;

use serde::Deserialize;

use crate::analysis::{ModeClass, Tolerances};
use crate::lattice::ModelParams;

use super::CliError;

/// Evenly spaced samples `from..=to`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let span = self.to - self.from;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + span * i as f64 / last
                }
            })
            .collect()
    }

    fn check(&self, name: &str, min_steps: usize) -> Result<(), CliError> {
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Config(format!("`{name}` range must be finite")));
        }
        if self.steps < min_steps {
            return Err(CliError::Config(format!(
                "`{name}.steps` must be at least {min_steps}, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    /// Integer samples; every sample must land on an integer.
    pub fn integer_values(&self, name: &str) -> Result<Vec<usize>, CliError> {
        self.values()
            .into_iter()
            .map(|v| {
                let r = v.round();
                if (v - r).abs() > 1e-9 || r < 1.0 {
                    Err(CliError::Config(format!("`{name}` samples must be positive integers, got {v}")))
                } else {
                    Ok(r as usize)
                }
            })
            .collect()
    }
}

/// Model field varied by a spectrum sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Theta,
    Gamma,
    Delta,
    Kappa,
    J,
    NCells,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Gamma => "gamma",
            SweepParam::Delta => "delta",
            SweepParam::Kappa => "kappa",
            SweepParam::J => "j",
            SweepParam::NCells => "n_cells",
        }
    }

    pub fn is_integer(self) -> bool {
        self == SweepParam::NCells
    }

    pub fn apply(self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            SweepParam::Theta => p.theta = value,
            SweepParam::Gamma => p.gamma = value,
            SweepParam::Delta => p.delta = value,
            SweepParam::Kappa => p.kappa = value,
            SweepParam::J => p.j = value,
            SweepParam::NCells => p.n_cells = value.round() as usize,
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn range(&self) -> Range {
        Range {
            from: self.from,
            to: self.to,
            steps: self.steps,
        }
    }

    /// Sweep values; integer parameters are validated as integers.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.param.is_integer() {
            Ok(self
                .range()
                .integer_values(self.param.name())?
                .into_iter()
                .map(|v| v as f64)
                .collect())
        } else {
            Ok(self.range().values())
        }
    }
}

/// Mode(s) written by the `profile` command: one index or every mode of a class.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSelector {
    pub index: Option<usize>,
    pub class: Option<ModeClass>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    /// Optional one-parameter sweep (`spectrum`).
    #[serde(default)]
    pub sweep: Option<Sweep>,
    /// θ axis (`phase-diagram`).
    #[serde(default)]
    pub theta: Option<Range>,
    /// γ axis (`phase-diagram`, `recovery`).
    #[serde(default)]
    pub gamma: Option<Range>,
    /// Chain lengths (`recovery`).
    #[serde(default)]
    pub n_cells: Option<Range>,
    /// Defect cells (`fit-decay`).
    #[serde(default)]
    pub n_values: Option<Vec<usize>>,
    /// Mode selection (`profile`).
    #[serde(default)]
    pub mode: Option<ModeSelector>,
    /// Output directory used when `--out` is not given.
    #[serde(default)]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        // an empty document is reported like an empty object: by its first missing field
        let text = if text.trim().is_empty() { "{}" } else { text };
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.model.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(s) = &self.sweep {
            s.range().check("sweep", 2)?;
            s.values()?;
        }
        for (name, r) in [("theta", &self.theta), ("gamma", &self.gamma), ("n_cells", &self.n_cells)] {
            if let Some(r) = r {
                r.check(name, 1)?;
            }
        }
        if let Some(r) = &self.n_cells {
            r.integer_values("n_cells")?;
        }
        let t = &self.tolerances;
        if !(t.imag > 0.0 && t.matching > 0.0 && t.in_gap_fraction > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn require_range(&self, name: &'static str) -> Result<Range, CliError> {
        let r = match name {
            "theta" => self.theta,
            "gamma" => self.gamma,
            "n_cells" => self.n_cells,
            _ => None,
        };
        r.ok_or_else(|| CliError::Config(format!("missing field `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_names_the_missing_field() {
        let err = RunConfig::parse("").unwrap_err();
        assert!(err.to_string().contains("missing field `model`"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::parse(r#"{"model":{"variant":"ssh_a","n_cells":4},"extra":1}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn sweep_needs_two_steps() {
        let err = RunConfig::parse(r#"{"model":{"variant":"ssh_a","n_cells":4},"sweep":{"param":"theta","from":0,"to":1,"steps":1}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("steps"));
    }

    #[test]
    fn ranges_hit_endpoints() {
        let r = Range {
            from: -1.0,
            to: 1.0,
            steps: 5,
        };
        assert_eq!(r.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let r = Range {
            from: 4.0,
            to: 10.0,
            steps: 4,
        };
        assert_eq!(r.integer_values("n").unwrap(), vec![4, 6, 8, 10]);
        let r = Range {
            from: 4.0,
            to: 10.0,
            steps: 5,
        };
        assert!(r.integer_values("n").is_err());
    }

    #[test]
    fn invalid_model_is_a_config_error() {
        let err = RunConfig::parse(r#"{"model":{"variant":"ssh_c","n_cells":4,"n":3}}"#).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
