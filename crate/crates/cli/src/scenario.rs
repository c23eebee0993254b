//! Execute a scenario configuration and assemble a deterministic report.

use crate::config::{
    AnalysisSpec, ClassicalScenario, ConfigError, EwlScenario, Mw2Scenario, Mw3Scenario,
    RspScenario, RunOptions, ScenarioConfig,
};
use qgames_core::ewl::{ewl_payoffs, EwlConfig, EwlStrategy};
use qgames_core::games::{
    classical_equilibria_2x2, mixed_payoff_bimatrix, Bimatrix2, Equilibria2x2, MixedStrategy1,
    MixedStrategy2,
};
use qgames_core::mw::{
    mw2_effective_bimatrix, mw_payoffs_2, mw_payoffs_3, rsp_effective_matrix, rsp_payoffs,
    Pairing,
};
use qgames_core::replicator::{
    evolve, stability_probe, PayoffMatrix, Population, ProbeReport, Trajectory,
};
use qgames_core::stability::{
    check_asymmetric_ess, check_invasion, check_symmetric_ess, check_three_player_ess, ne_scan,
    AsymmetricPayoffFns, AsymmetricReport, EquilibriumReport, InvasionOutcome, InvasionTest,
    NeScanResult, Point, Space, SymmetricPayoffFn, ThreePlayerPayoffFn, Tolerances,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("candidate index {0} out of range ({1} candidates defined)")]
    BadCandidateIndex(usize, usize),
    #[error("analysis `{0}` is not available for this scenario: {1}")]
    UnsupportedAnalysis(&'static str, String),
    #[error("invalid analysis input: {0}")]
    BadAnalysisInput(String),
}

/// Machine-readable outcome of one scenario run. Serializing the same config
/// twice yields byte-identical documents.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub library_version: &'static str,
    /// The configuration this report was produced from, echoed verbatim.
    pub config: ScenarioConfig,
    pub grid_step: f64,
    pub scan_step: f64,
    pub tolerances: Tolerances,
    pub analyses: Vec<AnalysisResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisResult {
    Payoff {
        profile: Vec<usize>,
        payoffs: Vec<f64>,
    },
    NeScan {
        scan: NeScanResult,
    },
    /// Pure-pair plus interior equilibria of the (effective) bimatrix, used
    /// for pair games where the single-population scan does not apply.
    NeScanPairs {
        equilibria: Equilibria2x2,
    },
    Ess {
        candidate: usize,
        report: EquilibriumReport,
    },
    EssPair {
        candidate: usize,
        report: AsymmetricReport,
    },
    Invasion {
        candidate: usize,
        mutant: usize,
        outcomes: Vec<InvasionOutcome>,
    },
    Replicate {
        trajectory: TrajectorySummary,
        #[serde(skip_serializing_if = "Option::is_none")]
        probe: Option<ProbeReport>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySummary {
    pub dt: f64,
    pub steps: usize,
    pub terminal: Vec<f64>,
    /// Decimated (time, frequencies) samples for export.
    pub samples: Vec<(f64, Vec<f64>)>,
}

impl TrajectorySummary {
    fn from_trajectory(t: &Trajectory) -> Self {
        Self {
            dt: t.dt,
            steps: t.steps,
            terminal: t.terminal().freqs().to_vec(),
            samples: t
                .samples
                .iter()
                .map(|(time, pop)| (*time, pop.freqs().to_vec()))
                .collect(),
        }
    }
}

fn resolve_options(options: &RunOptions, space: Space) -> (f64, f64, Tolerances) {
    let grid_step = options.grid_step.unwrap_or(1e-2);
    let scan_step = options.scan_step.unwrap_or(match space {
        Space::Interval => 1e-2,
        Space::Simplex2 => 0.02,
        Space::EwlRect => 0.02,
    });
    let tol = options.tolerance.map_or_else(Tolerances::default, |t| Tolerances {
        tol_ne: t,
        tol_eq: t,
        tol_strict: t,
    });
    (grid_step, scan_step, tol)
}

fn candidate<T: Copy>(list: &[T], index: usize) -> Result<T, ScenarioError> {
    list.get(index)
        .copied()
        .ok_or(ScenarioError::BadCandidateIndex(index, list.len()))
}

type ProfilePayoffFn = Box<dyn Fn(&[Point]) -> Result<Vec<f64>, ScenarioError>>;

/// Everything the per-scheme analysis loop needs: payoff functions, the
/// candidate list as points, and the pure-tactic matrix for the dynamics.
struct Engine {
    symmetric: Option<SymmetricPayoffFn>,
    asymmetric: Option<AsymmetricPayoffFns>,
    three_player: Option<ThreePlayerPayoffFn>,
    effective_bimatrix: Option<Bimatrix2>,
    replicator_matrix: Option<PayoffMatrix>,
    candidates: Vec<Point>,
    /// Candidate pairs for asymmetric checks (interval schemes only).
    candidate_pairs: Vec<Option<(f64, f64)>>,
    payoff_profile: ProfilePayoffFn,
    space: Space,
}

fn interval_candidates(
    cands: &[crate::config::IntervalCandidate],
) -> (Vec<Point>, Vec<Option<(f64, f64)>>) {
    let points = cands.iter().map(|c| [c.p, 0.0]).collect();
    let pairs = cands.iter().map(|c| c.q.map(|q| (c.p, q))).collect();
    (points, pairs)
}

fn build_engine(config: &ScenarioConfig) -> Result<Engine, ScenarioError> {
    match config {
        ScenarioConfig::Ewl(EwlScenario {
            game,
            gamma,
            candidates,
            ..
        }) => {
            let cfg = EwlConfig::new(game.to_game()?, *gamma)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            let points: Vec<Point> = candidates.iter().map(|c| [c.theta, c.phi]).collect();
            let payoff_cfg = cfg;
            Ok(Engine {
                symmetric: Some(SymmetricPayoffFn::from_ewl(cfg)),
                asymmetric: None,
                three_player: None,
                effective_bimatrix: None,
                replicator_matrix: None,
                candidates: points,
                candidate_pairs: Vec::new(),
                payoff_profile: Box::new(move |profile| {
                    if profile.len() != 2 {
                        return Err(ScenarioError::BadAnalysisInput(
                            "payoff profile needs two strategies".into(),
                        ));
                    }
                    let s = |p: Point| {
                        EwlStrategy::two_parameter(p[0], p[1])
                            .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))
                    };
                    let (pa, pb) = ewl_payoffs(&payoff_cfg, &s(profile[0])?, &s(profile[1])?);
                    Ok(vec![pa, pb])
                }),
                space: Space::EwlRect,
            })
        }
        ScenarioConfig::Mw2(Mw2Scenario {
            game,
            initial_state,
            candidates,
            ..
        }) => {
            let g = game.to_game()?;
            let init = initial_state.to_state()?;
            let (points, pairs) = interval_candidates(candidates);
            let symmetric = if g.is_symmetric() && init.pairing == Pairing::Diagonal {
                Some(SymmetricPayoffFn::from_mw2_diagonal(g, init).expect("checked"))
            } else {
                None
            };
            let effective = mw2_effective_bimatrix(&g, &init);
            Ok(Engine {
                symmetric,
                asymmetric: Some(AsymmetricPayoffFns::from_mw2(g, init)),
                three_player: None,
                effective_bimatrix: Some(effective),
                replicator_matrix: Some(PayoffMatrix::from_bimatrix_rows(&effective)),
                candidates: points,
                candidate_pairs: pairs,
                payoff_profile: Box::new(move |profile| {
                    if profile.len() != 2 {
                        return Err(ScenarioError::BadAnalysisInput(
                            "payoff profile needs two strategies".into(),
                        ));
                    }
                    let pr = |v: f64| {
                        MixedStrategy1::new(v)
                            .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))
                    };
                    let (pa, pb) =
                        mw_payoffs_2(&g, &init, pr(profile[0][0])?, pr(profile[1][0])?);
                    Ok(vec![pa, pb])
                }),
                space: Space::Interval,
            })
        }
        ScenarioConfig::Mw3(Mw3Scenario {
            game,
            initial_state,
            candidates,
            ..
        }) => {
            let spec = game.to_spec()?;
            let init = initial_state.to_state()?;
            let (points, pairs) = interval_candidates(candidates);
            Ok(Engine {
                symmetric: None,
                asymmetric: None,
                three_player: Some(ThreePlayerPayoffFn::from_mw3(spec, init)),
                effective_bimatrix: None,
                replicator_matrix: None,
                candidates: points,
                candidate_pairs: pairs,
                payoff_profile: Box::new(move |profile| {
                    if profile.len() != 3 {
                        return Err(ScenarioError::BadAnalysisInput(
                            "payoff profile needs three strategies".into(),
                        ));
                    }
                    let pr = |v: f64| {
                        MixedStrategy1::new(v)
                            .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))
                    };
                    let (pa, pb, pc) = mw_payoffs_3(
                        &spec,
                        &init,
                        pr(profile[0][0])?,
                        pr(profile[1][0])?,
                        pr(profile[2][0])?,
                    );
                    Ok(vec![pa, pb, pc])
                }),
                space: Space::Interval,
            })
        }
        ScenarioConfig::Rsp(RspScenario {
            game,
            initial_state,
            candidates,
            ..
        }) => {
            let g = game.to_game()?;
            let init = initial_state.to_state()?;
            let points: Vec<Point> = candidates.iter().map(|c| [c.p, c.p1]).collect();
            let symmetric = if g.is_symmetric() && init.is_symmetric_play() {
                Some(SymmetricPayoffFn::from_rsp(g, init).expect("checked"))
            } else {
                None
            };
            let effective = rsp_effective_matrix(&g, &init);
            Ok(Engine {
                symmetric,
                asymmetric: None,
                three_player: None,
                effective_bimatrix: None,
                replicator_matrix: Some(PayoffMatrix::from_matrix3x3_rows(&effective)),
                candidates: points,
                candidate_pairs: Vec::new(),
                payoff_profile: Box::new(move |profile| {
                    if profile.len() != 2 {
                        return Err(ScenarioError::BadAnalysisInput(
                            "payoff profile needs two strategies".into(),
                        ));
                    }
                    let tac = |p: Point| {
                        MixedStrategy2::new(p[0], p[1])
                            .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))
                    };
                    let (pa, pb) = rsp_payoffs(&g, &init, &tac(profile[0])?, &tac(profile[1])?);
                    Ok(vec![pa, pb])
                }),
                space: Space::Simplex2,
            })
        }
        ScenarioConfig::Classical(ClassicalScenario {
            game, candidates, ..
        }) => {
            let g = game.to_game()?;
            let (points, pairs) = interval_candidates(candidates);
            let symmetric = if g.is_symmetric() {
                Some(SymmetricPayoffFn::from_symmetric_bimatrix(g).expect("checked"))
            } else {
                None
            };
            Ok(Engine {
                symmetric,
                asymmetric: Some(AsymmetricPayoffFns::from_bimatrix(g)),
                three_player: None,
                effective_bimatrix: Some(g),
                replicator_matrix: Some(PayoffMatrix::from_bimatrix_rows(&g)),
                candidates: points,
                candidate_pairs: pairs,
                payoff_profile: Box::new(move |profile| {
                    if profile.len() != 2 {
                        return Err(ScenarioError::BadAnalysisInput(
                            "payoff profile needs two strategies".into(),
                        ));
                    }
                    let pr = |v: f64| {
                        MixedStrategy1::new(v)
                            .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))
                    };
                    let (pa, pb) =
                        mixed_payoff_bimatrix(&g, pr(profile[0][0])?, pr(profile[1][0])?);
                    Ok(vec![pa, pb])
                }),
                space: Space::Interval,
            })
        }
    }
}

fn options_of(config: &ScenarioConfig) -> &RunOptions {
    match config {
        ScenarioConfig::Ewl(s) => &s.options,
        ScenarioConfig::Mw2(s) => &s.options,
        ScenarioConfig::Mw3(s) => &s.options,
        ScenarioConfig::Rsp(s) => &s.options,
        ScenarioConfig::Classical(s) => &s.options,
    }
}

fn analyses_of(config: &ScenarioConfig) -> &[AnalysisSpec] {
    match config {
        ScenarioConfig::Ewl(s) => &s.analyses,
        ScenarioConfig::Mw2(s) => &s.analyses,
        ScenarioConfig::Mw3(s) => &s.analyses,
        ScenarioConfig::Rsp(s) => &s.analyses,
        ScenarioConfig::Classical(s) => &s.analyses,
    }
}

/// Run every requested analysis and return the report document.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Report, ScenarioError> {
    let engine = build_engine(config)?;
    let (grid_step, scan_step, tol) = resolve_options(options_of(config), engine.space);
    let mut results = Vec::new();
    for analysis in analyses_of(config) {
        let result = match analysis {
            AnalysisSpec::Payoff { profile } => {
                let points: Vec<Point> = profile
                    .iter()
                    .map(|i| candidate(&engine.candidates, *i))
                    .collect::<Result<_, _>>()?;
                AnalysisResult::Payoff {
                    profile: profile.clone(),
                    payoffs: (engine.payoff_profile)(&points)?,
                }
            }
            AnalysisSpec::NeScan => {
                if let Some(f) = &engine.symmetric {
                    AnalysisResult::NeScan {
                        scan: ne_scan(f, scan_step, &tol),
                    }
                } else if let Some(g) = &engine.effective_bimatrix {
                    AnalysisResult::NeScanPairs {
                        equilibria: classical_equilibria_2x2(g),
                    }
                } else {
                    return Err(ScenarioError::UnsupportedAnalysis(
                        "ne_scan",
                        "no symmetric payoff function or effective bimatrix".into(),
                    ));
                }
            }
            AnalysisSpec::Ess { candidate: index } => {
                let point = candidate(&engine.candidates, *index)?;
                let pair = engine.candidate_pairs.get(*index).copied().flatten();
                if let Some(pair) = pair {
                    let fns = engine.asymmetric.as_ref().ok_or(
                        ScenarioError::UnsupportedAnalysis(
                            "ess",
                            "pair candidates need a two-seat payoff function".into(),
                        ),
                    )?;
                    AnalysisResult::EssPair {
                        candidate: *index,
                        report: check_asymmetric_ess(fns, pair, grid_step, &tol),
                    }
                } else if let Some(f3) = &engine.three_player {
                    AnalysisResult::Ess {
                        candidate: *index,
                        report: check_three_player_ess(f3, point[0], grid_step, &tol),
                    }
                } else if let Some(f) = &engine.symmetric {
                    AnalysisResult::Ess {
                        candidate: *index,
                        report: check_symmetric_ess(f, point, grid_step, &tol),
                    }
                } else {
                    return Err(ScenarioError::UnsupportedAnalysis(
                        "ess",
                        "game/initial state is not symmetric; give a (p, q) pair candidate".into(),
                    ));
                }
            }
            AnalysisSpec::Invasion {
                candidate: cand_index,
                mutant,
                epsilons,
            } => {
                let x_star = candidate(&engine.candidates, *cand_index)?;
                let y = candidate(&engine.candidates, *mutant)?;
                let f = engine.symmetric.as_ref().ok_or(
                    ScenarioError::UnsupportedAnalysis(
                        "invasion",
                        "requires a symmetric payoff function".into(),
                    ),
                )?;
                let test = InvasionTest::new(epsilons.clone(), y)
                    .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))?;
                let outcomes = check_invasion(f, x_star, &test)
                    .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))?;
                AnalysisResult::Invasion {
                    candidate: *cand_index,
                    mutant: *mutant,
                    outcomes,
                }
            }
            AnalysisSpec::Replicate {
                start,
                dt,
                steps,
                probe_delta,
            } => {
                let matrix = engine.replicator_matrix.as_ref().ok_or(
                    ScenarioError::UnsupportedAnalysis(
                        "replicate",
                        "no pure-tactic payoff matrix for this scheme".into(),
                    ),
                )?;
                let pop = Population::new(start.clone())
                    .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))?;
                let dt = dt.unwrap_or(1e-3);
                let steps = steps.unwrap_or(10_000);
                let trajectory = evolve(&pop, matrix, dt, steps)
                    .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))?;
                let probe = probe_delta
                    .map(|delta| stability_probe(&pop, matrix, delta, dt, steps))
                    .transpose()
                    .map_err(|e| ScenarioError::BadAnalysisInput(e.to_string()))?;
                AnalysisResult::Replicate {
                    trajectory: TrajectorySummary::from_trajectory(&trajectory),
                    probe,
                }
            }
        };
        results.push(result);
    }
    Ok(Report {
        library_version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        grid_step,
        scan_step,
        tolerances: tol,
        analyses: results,
    })
}
