use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{de_rational, ser_rational, BoundParameters};
use crate::error::{Error, Result};
use crate::heights::{ConstantMode, HeightOptions};
use crate::numeric::DEFAULT_PRECISION;
use crate::orbits::{TreeOptions, WorkLimits};
use crate::places::{parse_rational, PlaceSet, Rational};
use crate::proj1::ProjPoint;
use crate::ratmap::{MapSystem, RatMap};
use crate::words::Word;

/// One experiment: a map system, the points involved, and every knob the
/// subcommands read. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: MapSystem,
    #[serde(default = "default_point")]
    pub point: ProjPoint,
    #[serde(default = "ProjPoint::infinity")]
    pub point_a: ProjPoint,
    #[serde(default = "PlaceSet::infinite_only")]
    pub places: PlaceSet,
    #[serde(default = "default_epsilon", serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub epsilon: Rational,
    /// Defaults to the constant word `(1, 1, ...)`.
    #[serde(default = "default_word")]
    pub word: Word,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub work_limits: WorkLimits,
    #[serde(default)]
    pub bound_parameters: BoundParameters,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default = "default_constants")]
    pub constants: ConstantMode,
    /// Longest period scanned for `ĥ^min`.
    #[serde(default = "default_period_bound")]
    pub period_bound: usize,
    #[serde(default)]
    pub dedupe: bool,
    #[serde(default)]
    pub seed: u64,
}

fn map_from_value(v: &serde_json::Value) -> Result<RatMap> {
    match v {
        serde_json::Value::String(s) => s.parse(),
        serde_json::Value::Object(o) => {
            let coeffs = |key: &str| -> Result<Vec<Rational>> {
                let list = o
                    .get(key)
                    .and_then(serde_json::Value::as_array)
                    .ok_or_else(|| Error::Config(format!("map needs a coefficient list {key:?}")))?;
                list.iter()
                    .map(|c| match c {
                        serde_json::Value::String(s) => parse_rational(s),
                        other => parse_rational(&other.to_string()),
                    })
                    .collect()
            };
            RatMap::new(&coeffs("f")?, &coeffs("g")?)
        }
        other => Err(Error::Config(format!("cannot read a map from {other}"))),
    }
}

fn system_from_value(v: &serde_json::Value) -> Result<MapSystem> {
    match v {
        serde_json::Value::String(s) => s.parse(),
        serde_json::Value::Array(items) => MapSystem::new(items.iter().map(map_from_value).collect::<Result<_>>()?),
        other => Err(Error::Config(format!("cannot read a map system from {other}"))),
    }
}

fn default_point() -> ProjPoint {
    ProjPoint::from_int(2)
}

fn default_epsilon() -> Rational {
    Rational::one() / Rational::from_integer(2.into())
}

fn default_word() -> Word {
    Word::constant(1)
}

fn default_depth() -> usize {
    6
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

fn default_constants() -> ConstantMode {
    ConstantMode::Certified
}

fn default_period_bound() -> usize {
    2
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        // surface map errors (with their witnesses) before generic schema errors
        if let Some(system) = value.get("system") {
            system_from_value(system)?;
        }
        let cfg: ExperimentConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    /// A config for `system` with every other field at its default.
    pub fn for_system(system: MapSystem) -> ExperimentConfig {
        ExperimentConfig {
            system,
            point: default_point(),
            point_a: ProjPoint::infinity(),
            places: PlaceSet::infinite_only(),
            epsilon: default_epsilon(),
            word: default_word(),
            depth: default_depth(),
            work_limits: WorkLimits::default(),
            bound_parameters: BoundParameters::default(),
            precision_bits: default_precision(),
            constants: default_constants(),
            period_bound: default_period_bound(),
            dedupe: false,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::integrality::check_epsilon(&self.epsilon)?;
        self.word.validate(self.system.k())?;
        self.bound_parameters.validate()?;
        if !(16..=4096).contains(&self.precision_bits) {
            return Err(Error::Config(format!(
                "precisionBits must lie in 16..=4096, got {}",
                self.precision_bits
            )));
        }
        if self.period_bound == 0 {
            return Err(Error::Config("periodBound must be at least 1".into()));
        }
        Ok(())
    }

    pub fn height_options(&self) -> HeightOptions {
        HeightOptions {
            depth: self.depth,
            target_width: None,
            prec: self.precision_bits,
            constants: self.constants,
            limits: self.work_limits,
        }
    }

    pub fn tree_options(&self, workers: usize) -> TreeOptions {
        TreeOptions {
            dedupe: self.dedupe,
            workers,
            limits: self.work_limits,
        }
    }

    /// Canonical JSON with defaults filled in.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// First 12 hex digits of the SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_json(r#"{"system": "z^2"}"#).unwrap();
        assert_eq!(cfg.depth, 6);
        assert_eq!(cfg.precision_bits, 128);
        assert_eq!(cfg.point_a, ProjPoint::infinity());
        assert_eq!(cfg.epsilon, default_epsilon());
        assert_eq!(cfg.work_limits.max_nodes, 1_000_000);
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_json(r#"{"system": "z^2", "depth": 4}"#).unwrap();
        let b = ExperimentConfig::from_json(r#"{"depth": 4, "system": "z^2"}"#).unwrap();
        let c = ExperimentConfig::from_json(r#"{"system": "z^2", "depth": 5}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 12);
        let back = ExperimentConfig::from_json(&a.canonical_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"system": "z^2", "epsilon": 2}"#,
            r#"{"system": "z^2", "word": [1, 2]}"#,
            r#"{"system": "z^2", "colour": 1}"#,
            r#"{"system": "(z^2-1)/(z-1)"}"#,
            r#"{"depth": 3}"#,
        ];
        for text in bad {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn map_errors_keep_their_witness() {
        for text in [
            r#"{"system": "(z^2-1)/(z-1)"}"#,
            r#"{"system": [{"f": ["-1", "0", "1"], "g": ["-1", "1"]}]}"#,
        ] {
            match ExperimentConfig::from_json(text) {
                Err(Error::CommonFactor { factor }) => assert_eq!(factor, "z-1"),
                other => panic!("{other:?}"),
            }
        }
    }
}
