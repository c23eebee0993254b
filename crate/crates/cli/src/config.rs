//! JSON scenario configuration. Angles are radians; complex numbers are
//! [re, im] pairs. The `scheme` tag selects the engine and fixes which other
//! fields are required, so missing fields surface as schema diagnostics with
//! a field path and source location.

use num_complex::Complex64;
use qgames_core::games::{Bimatrix2, Matrix3x3Pair, ThreePlayerSymmetricSpec};
use qgames_core::mw::{InitState2, InitState3, Pairing, QutritInitState};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config schema violation at `{path}` ({detail})")]
    Schema { path: String, detail: String },
    #[error("config rejected: {0}")]
    Invalid(String),
}

/// One scenario: an engine, its game and state parameters, candidate
/// strategies, and the analyses to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme")]
pub enum ScenarioConfig {
    #[serde(rename = "EWL")]
    Ewl(EwlScenario),
    #[serde(rename = "MW2")]
    Mw2(Mw2Scenario),
    #[serde(rename = "MW3")]
    Mw3(Mw3Scenario),
    #[serde(rename = "RSP")]
    Rsp(RspScenario),
    #[serde(rename = "CLASSICAL")]
    Classical(ClassicalScenario),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EwlScenario {
    pub game: RoleGameSpec,
    /// Entanglement angle in [0, pi/2].
    pub gamma: f64,
    #[serde(default)]
    pub candidates: Vec<EwlCandidate>,
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mw2Scenario {
    pub game: Game2x2Spec,
    pub initial_state: TwoAmplitudeState,
    #[serde(default)]
    pub candidates: Vec<IntervalCandidate>,
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mw3Scenario {
    pub game: ThreePlayerGameSpec,
    pub initial_state: ThreeQubitState,
    #[serde(default)]
    pub candidates: Vec<IntervalCandidate>,
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RspScenario {
    pub game: Game3x3Spec,
    pub initial_state: QutritStateSpec,
    #[serde(default)]
    pub candidates: Vec<SimplexCandidate>,
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalScenario {
    pub game: Game2x2Spec,
    #[serde(default)]
    pub candidates: Vec<IntervalCandidate>,
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub options: RunOptions,
}

/// Role constants of a dilemma-shaped game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleGameSpec {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub u: f64,
}

impl RoleGameSpec {
    pub fn to_game(self) -> Result<Bimatrix2, ConfigError> {
        Bimatrix2::from_roles(self.r, self.s, self.t, self.u)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

/// A 2x2 game given as role constants, explicit cells, or the
/// battle-of-the-sexes triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Game2x2Spec {
    Roles(RoleGameSpec),
    Bos { bos: [f64; 3] },
    Cells { cells: [[[f64; 2]; 2]; 2] },
}

impl Game2x2Spec {
    pub fn to_game(&self) -> Result<Bimatrix2, ConfigError> {
        let game = match self {
            Game2x2Spec::Roles(r) => Bimatrix2::from_roles(r.r, r.s, r.t, r.u),
            Game2x2Spec::Bos { bos } => Bimatrix2::battle_of_sexes(bos[0], bos[1], bos[2]),
            Game2x2Spec::Cells { cells } => {
                let as_pairs = |c: &[[f64; 2]; 2]| [(c[0][0], c[0][1]), (c[1][0], c[1][1])];
                Bimatrix2::new([as_pairs(&cells[0]), as_pairs(&cells[1])])
            }
        };
        game.map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePlayerGameSpec {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha8: f64,
}

impl ThreePlayerGameSpec {
    pub fn to_spec(self) -> Result<ThreePlayerSymmetricSpec, ConfigError> {
        ThreePlayerSymmetricSpec::new(
            self.alpha1,
            self.alpha2,
            self.alpha3,
            self.alpha5,
            self.alpha6,
            self.alpha8,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

/// A 3x3 game: the premium form or explicit payoff matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Game3x3Spec {
    Premium { epsilon: f64 },
    Matrices {
        alpha: [[f64; 3]; 3],
        beta: [[f64; 3]; 3],
    },
}

impl Game3x3Spec {
    pub fn to_game(&self) -> Result<Matrix3x3Pair, ConfigError> {
        match self {
            Game3x3Spec::Premium { epsilon } => Matrix3x3Pair::rock_scissors_paper(*epsilon),
            Game3x3Spec::Matrices { alpha, beta } => Matrix3x3Pair::new(*alpha, *beta),
        }
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

fn to_complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn from_complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoAmplitudeState {
    pub pairing: PairingSpec,
    /// Complex amplitude as [re, im].
    pub a: [f64; 2],
    pub b: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairingSpec {
    #[serde(rename = "DIAGONAL")]
    Diagonal,
    #[serde(rename = "ANTI")]
    Anti,
}

impl TwoAmplitudeState {
    pub fn to_state(self) -> Result<InitState2, ConfigError> {
        let pairing = match self.pairing {
            PairingSpec::Diagonal => Pairing::Diagonal,
            PairingSpec::Anti => Pairing::Anti,
        };
        InitState2::new(to_complex(self.a), to_complex(self.b), pairing)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn diagonal_from_bsq(bsq: f64) -> Self {
        Self {
            pairing: PairingSpec::Diagonal,
            a: from_complex(Complex64::new((1.0 - bsq).sqrt(), 0.0)),
            b: from_complex(Complex64::new(bsq.sqrt(), 0.0)),
        }
    }

    pub fn anti_from_bsq(bsq: f64) -> Self {
        Self {
            pairing: PairingSpec::Anti,
            ..Self::diagonal_from_bsq(bsq)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeQubitState {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl ThreeQubitState {
    pub fn to_state(self) -> Result<InitState3, ConfigError> {
        InitState3::new(to_complex(self.a), to_complex(self.b))
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn from_bsq(bsq: f64) -> Self {
        Self {
            a: from_complex(Complex64::new((1.0 - bsq).sqrt(), 0.0)),
            b: from_complex(Complex64::new(bsq.sqrt(), 0.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritStateSpec {
    /// c[i][j] as [re, im] for basis |ij>.
    pub c: [[[f64; 2]; 3]; 3],
}

impl QutritStateSpec {
    pub fn to_state(self) -> Result<QutritInitState, ConfigError> {
        let mut c = [[Complex64::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = to_complex(self.c[i][j]);
            }
        }
        QutritInitState::new(c).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn classical() -> Self {
        let mut c = [[[0.0; 2]; 3]; 3];
        c[0][0] = [1.0, 0.0];
        Self { c }
    }

    pub fn entangled_off_diagonal() -> Self {
        let mut c = [[[0.0; 2]; 3]; 3];
        for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0)] {
            c[i][j] = [0.5, 0.0];
        }
        Self { c }
    }
}

/// EWL candidate strategy (theta, phi) in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwlCandidate {
    pub theta: f64,
    pub phi: f64,
}

/// Interval candidate: a symmetric strategy p, or a (p, q) pair for
/// asymmetric analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalCandidate {
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexCandidate {
    pub p: f64,
    pub p1: f64,
}

/// Analyses run in the listed order; `candidate`, `mutant` and `profile`
/// reference the scenario's candidate list by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisSpec {
    /// Expected payoffs for a profile of candidates (two seats, or three for
    /// the three-player scheme).
    Payoff { profile: Vec<usize> },
    /// Scan the strategy space for symmetric equilibria (or, for pair games,
    /// enumerate the pure and interior equilibria of the effective bimatrix).
    NeScan,
    /// Equilibrium plus stability verdict for one candidate.
    Ess { candidate: usize },
    /// Share-by-share invasion test of a candidate by a mutant.
    Invasion {
        candidate: usize,
        mutant: usize,
        epsilons: Vec<f64>,
    },
    /// Replicator trajectory from a start population over the pure tactics,
    /// with an optional stability probe around it.
    Replicate {
        start: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_delta: Option<f64>,
    },
}

/// Grid and tolerance overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct RunOptions {
    /// Per-axis grid resolution for candidate checks (fraction of the axis
    /// range; default 1e-2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    /// Grid resolution for whole-space scans (defaults depend on the space).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_step: Option<f64>,
    /// Equality/strictness tolerance override (default 1e-9).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Parse a config from JSON text, mapping failures to path + line/column
/// diagnostics.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let deserializer = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(deserializer).map_err(|err| ConfigError::Schema {
        path: err.path().to_string(),
        detail: err.inner().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_gamma_is_a_schema_error() {
        let text = r#"{"scheme": "EWL", "game": {"r":3,"s":0,"t":5,"u":1}, "analyses": []}"#;
        let err = parse_config(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma"), "diagnostic should name the field: {msg}");
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let state = TwoAmplitudeState {
            pairing: PairingSpec::Diagonal,
            a: [0.9, 0.0],
            b: [0.0, 0.0],
        };
        assert!(state.to_state().is_err());
    }

    #[test]
    fn round_trip_through_json() {
        let cfg = ScenarioConfig::Ewl(EwlScenario {
            game: RoleGameSpec {
                r: 3.0,
                s: 0.0,
                t: 5.0,
                u: 1.0,
            },
            gamma: 1.0,
            candidates: vec![EwlCandidate {
                theta: 0.0,
                phi: 1.5,
            }],
            analyses: vec![
                AnalysisSpec::Ess { candidate: 0 },
                AnalysisSpec::NeScan,
            ],
            options: RunOptions::default(),
        });
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}
