//! Campaign configuration files.
//!
//! ```json
//! {
//!   "code": { "builtin": "c6" },
//!   "povm": { "random": { "dim": 8, "seed": 7 } },
//!   "state": "maximally_mixed",
//!   "noise": { "kind": "adversarial", "t": 1 },
//!   "trials": 1000,
//!   "seed": 42
//! }
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use robmeas_core::measurement::NoiseModel;
use robmeas_core::povm::random_ranks;
use robmeas_core::rng::stream_rng;
use robmeas_core::{ClassicalCode, ObservableSet, ProjectivePovm, QuantumState};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{read_code, read_povm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSource {
    /// `c6`: the length-6 shortened Hamming code.
    Builtin(String),
    Repetition {
        q: usize,
        t: usize,
    },
    File(PathBuf),
}

impl CodeSource {
    pub fn load(&self, base: &Path) -> Result<ClassicalCode> {
        match self {
            Self::Builtin(name) => builtin_code(name),
            Self::Repetition { q, t } => Ok(ClassicalCode::repetition(*q, *t)?),
            Self::File(p) => read_code(&base.join(p)),
        }
    }
}

pub fn builtin_code(name: &str) -> Result<ClassicalCode> {
    match name.to_ascii_lowercase().as_str() {
        "c6" => Ok(ClassicalCode::shortened_hamming_6()),
        other => Err(Error::Config(format!(
            "unknown builtin code `{other}` (known: c6)"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PovmSource {
    File(PathBuf),
    /// Random ranks and a random unitary, both drawn from `seed`.
    Random {
        dim: usize,
        seed: u64,
    },
    /// Consecutive blocks of standard basis vectors with the given ranks.
    Blocks(Vec<usize>),
}

impl PovmSource {
    /// `parts` is the number of projectors the code needs.
    pub fn load(&self, base: &Path, parts: usize) -> Result<ProjectivePovm> {
        match self {
            Self::File(p) => read_povm(&base.join(p)),
            Self::Random { dim, seed } => {
                let mut rng = stream_rng(*seed, 0);
                let ranks = random_ranks(parts, *dim, &mut rng)?;
                Ok(ProjectivePovm::random(&ranks, &mut rng)?)
            }
            Self::Blocks(ranks) => Ok(ProjectivePovm::blocks(ranks)?),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSource {
    #[default]
    MaximallyMixed,
    Random {
        seed: u64,
    },
}

impl StateSource {
    pub fn build(&self, dim: usize) -> QuantumState {
        match *self {
            Self::MaximallyMixed => QuantumState::maximally_mixed(dim),
            Self::Random { seed } => QuantumState::random(dim, &mut stream_rng(seed, 0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub code: CodeSource,
    pub povm: PovmSource,
    #[serde(default)]
    pub state: StateSource,
    pub noise: NoiseModel,
    pub trials: u64,
    pub seed: u64,
}

/// Everything a campaign needs, loaded and validated.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub config: CampaignConfig,
    pub set: ObservableSet,
    pub state: QuantumState,
}

impl CampaignConfig {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn read(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::parse(&text)?, base))
    }

    /// Loads every input and checks the whole configuration before any
    /// trial runs.
    pub fn prepare(&self, base: &Path) -> Result<Campaign> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let code = self.code.load(base)?;
        let povm = self.povm.load(base, code.size())?;
        self.noise.validate(code.q(), code.length())?;
        let set = ObservableSet::build(code, povm)?;
        let state = self.state.build(set.dim());
        Ok(Campaign {
            config: self.clone(),
            set,
            state,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let cfg = CampaignConfig::parse(
            r#"{
              "code": { "builtin": "c6" },
              "povm": { "random": { "dim": 8, "seed": 7 } },
              "state": "maximally_mixed",
              "noise": { "kind": "adversarial", "t": 1 },
              "trials": 1000,
              "seed": 42
            }"#,
        )
        .unwrap();
        assert_eq!(
            cfg.noise,
            NoiseModel::Adversarial {
                t: 1,
                positions: None
            }
        );
        let c = cfg.prepare(Path::new(".")).unwrap();
        assert_eq!(c.set.dim(), 8);
        assert_eq!(c.set.len(), 6);
    }

    #[test]
    fn homodyne_noise_is_validated() {
        let cfg = CampaignConfig::parse(
            r#"{
              "code": { "repetition": { "q": 2, "t": 1 } },
              "povm": { "blocks": [1, 1] },
              "state": { "random": { "seed": 3 } },
              "noise": { "kind": "homodyne", "readout": { "q": 2, "alpha": [1.0, 0.0] } },
              "trials": 10,
              "seed": 1
            }"#,
        )
        .unwrap();
        let NoiseModel::Homodyne { readout } = cfg.noise else {
            panic!("expected homodyne noise");
        };
        assert!((readout.theta() - std::f64::consts::PI).abs() < 1e-15);
        assert!(cfg.prepare(Path::new(".")).is_ok());
        let bad = r#"{"code":{"builtin":"c6"},"povm":{"random":{"dim":8,"seed":1}},
            "noise":{"kind":"homodyne","readout":{"q":2,"alpha":[1,0],"gamma":-1}},"trials":1,"seed":0}"#;
        assert!(CampaignConfig::parse(bad).is_err());
    }

    #[test]
    fn configuration_errors() {
        let base = Path::new(".");
        let mk = |code: &str, povm: &str, noise: &str, trials: u64| {
            CampaignConfig::parse(&format!(
                r#"{{"code":{code},"povm":{povm},"noise":{noise},"trials":{trials},"seed":0}}"#
            ))
        };
        let c6 = r#"{"builtin":"c6"}"#;
        let ok_povm = r#"{"random":{"dim":8,"seed":1}}"#;
        let clean = r#"{"kind":"noiseless"}"#;
        assert!(mk(c6, ok_povm, clean, 0).unwrap().prepare(base).is_err());
        assert!(mk(r#"{"builtin":"c7"}"#, ok_povm, clean, 1)
            .unwrap()
            .prepare(base)
            .is_err());
        assert!(mk(c6, r#"{"random":{"dim":4,"seed":1}}"#, clean, 1)
            .unwrap()
            .prepare(base)
            .is_err());
        assert!(mk(c6, r#"{"blocks":[1,1]}"#, clean, 1)
            .unwrap()
            .prepare(base)
            .is_err());
        let bad_pos = r#"{"kind":"adversarial","t":1,"positions":[7]}"#;
        assert!(mk(c6, ok_povm, bad_pos, 1).unwrap().prepare(base).is_err());
        let missing = r#"{"file":"no/such/povm.json"}"#;
        assert!(matches!(
            mk(c6, missing, clean, 1).unwrap().prepare(base),
            Err(Error::Io { .. })
        ));
        assert!(mk(c6, ok_povm, r#"{"kind":"bogus"}"#, 1).is_err());
    }
}
