use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use halflow::flow::{FlowConfig, LongTimeSpec, Scheme};
use halflow::Normalization;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::suite::{find_check, FamilyOverrides, Level};

/// Experiment kinds; `ineq:<name>` selects one check of the suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Flow,
    Twin,
    LongTime,
    VerifyAll,
    Inequality(String),
    CjkTable,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Flow => f.write_str("flow"),
            Kind::Twin => f.write_str("twin"),
            Kind::LongTime => f.write_str("longtime"),
            Kind::VerifyAll => f.write_str("verify-all"),
            Kind::Inequality(name) => write!(f, "ineq:{name}"),
            Kind::CjkTable => f.write_str("cjk-table"),
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "flow" => Kind::Flow,
            "twin" => Kind::Twin,
            "longtime" => Kind::LongTime,
            "verify-all" => Kind::VerifyAll,
            "cjk-table" => Kind::CjkTable,
            other => match other.strip_prefix("ineq:") {
                Some(name) if find_check(name).is_some() => Kind::Inequality(name.to_string()),
                Some(name) => return Err(format!("unknown check `{name}`")),
                None => {
                    return Err(format!(
                        "unknown experiment kind `{other}` (expected flow, twin, longtime, verify-all, ineq:<name> or cjk-table)"
                    ))
                }
            },
        })
    }
}

impl Serialize for Kind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwinParams {
    #[serde(default = "exponential")]
    pub scheme_a: Scheme,
    #[serde(default = "semi_implicit")]
    pub scheme_b: Scheme,
    pub dts: Vec<f64>,
}

fn exponential() -> Scheme {
    Scheme::Exponential
}

fn semi_implicit() -> Scheme {
    Scheme::SemiImplicit
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CjkParams {
    pub max_frequency: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    /// Subdirectory name under the output root; defaults to the kind.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub level: Option<Level>,
    #[serde(default)]
    pub flow: Option<FlowConfig>,
    #[serde(default)]
    pub twin: Option<TwinParams>,
    #[serde(default)]
    pub longtime: Option<LongTimeSpec>,
    #[serde(default)]
    pub cjk: Option<CjkParams>,
    #[serde(default)]
    pub family: Option<FamilyOverrides>,
    /// Replaces the normalization constants of the suite (mutation testing).
    #[serde(default)]
    pub normalization: Option<Normalization>,
}

/// Malformed or incomplete configuration, with its location when known.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: cannot read: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Field { path: String, field: String, message: String },
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
        })?;
        cfg.validate(origin)?;
        Ok(cfg)
    }

    fn field_error(origin: &str, field: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Field { path: origin.to_string(), field: field.to_string(), message: message.into() }
    }

    /// Checks that the parameters the kind needs are present and consistent.
    pub fn validate(&self, origin: &str) -> Result<(), ConfigError> {
        let needs_flow = matches!(self.kind, Kind::Flow | Kind::Twin | Kind::LongTime);
        if needs_flow {
            let flow = self.flow.as_ref().ok_or_else(|| Self::field_error(origin, "flow", format!("required for kind {}", self.kind)))?;
            flow.validate().map_err(|e| Self::field_error(origin, "flow", e.to_string()))?;
            if flow.initial.seed().is_some() && self.seed.is_none() {
                return Err(Self::field_error(origin, "seed", "required for randomized initial data"));
            }
        }
        match &self.kind {
            Kind::Twin => {
                let t = self.twin.as_ref().ok_or_else(|| Self::field_error(origin, "twin", "required for kind twin"))?;
                if t.dts.len() < 2 || t.dts.iter().any(|d| !(*d > 0.0)) {
                    return Err(Self::field_error(origin, "twin.dts", "needs at least two positive time steps"));
                }
            }
            Kind::CjkTable => {
                let c = self.cjk.as_ref().ok_or_else(|| Self::field_error(origin, "cjk", "required for kind cjk-table"))?;
                if c.max_frequency == 0 {
                    return Err(Self::field_error(origin, "cjk.max_frequency", "must be positive"));
                }
            }
            Kind::VerifyAll | Kind::Inequality(_) if self.seed.is_none() => {
                return Err(Self::field_error(origin, "seed", format!("required for kind {}", self.kind)));
            }
            _ => {}
        }
        Ok(())
    }

    /// Directory name under the output root.
    pub fn run_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.to_string().replace(':', "-"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_roundtrip() {
        for k in ["flow", "twin", "longtime", "verify-all", "cjk-table", "ineq:wente"] {
            assert_eq!(k.parse::<Kind>().unwrap().to_string(), k);
        }
        assert!("ineq:nothing".parse::<Kind>().is_err());
        assert!("walk".parse::<Kind>().is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ExperimentConfig::parse("{\n  \"kind\": \"flow\",\n  \"bogus\": 1\n}", "x.json").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn missing_parameters_name_the_field() {
        let err = ExperimentConfig::parse(r#"{"kind": "twin"}"#, "x.json").unwrap_err();
        assert!(err.to_string().contains("field `flow`"), "{err}");
        let err = ExperimentConfig::parse(r#"{"kind": "verify-all"}"#, "x.json").unwrap_err();
        assert!(err.to_string().contains("field `seed`"), "{err}");
    }
}
