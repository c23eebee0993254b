//! Python bindings exposing the payoff engines, stability certification and
//! replicator dynamics. Complex amplitudes cross the boundary as (re, im)
//! tuples; angles are radians.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qgames_core::ewl;
use qgames_core::games::{
    classical_equilibria_2x2, Bimatrix2, Matrix3x3Pair, MixedStrategy1, MixedStrategy2,
    ThreePlayerSymmetricSpec,
};
use qgames_core::mw;
use qgames_core::replicator;
use qgames_core::stability;

type Pair = (f64, f64);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bimatrix(cells: [[[f64; 2]; 2]; 2]) -> PyResult<Bimatrix2> {
    let as_pairs = |c: &[[f64; 2]; 2]| [(c[0][0], c[0][1]), (c[1][0], c[1][1])];
    Bimatrix2::new([as_pairs(&cells[0]), as_pairs(&cells[1])]).map_err(value_err)
}

fn complex(z: Pair) -> Complex64 {
    Complex64::new(z.0, z.1)
}

fn init2(a: Pair, b: Pair, anti: bool) -> PyResult<mw::InitState2> {
    let pairing = if anti {
        mw::Pairing::Anti
    } else {
        mw::Pairing::Diagonal
    };
    mw::InitState2::new(complex(a), complex(b), pairing).map_err(value_err)
}

fn qutrit_state(c: [[[f64; 2]; 3]; 3]) -> PyResult<mw::QutritInitState> {
    let mut amps = [[Complex64::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            amps[i][j] = complex((c[i][j][0], c[i][j][1]));
        }
    }
    mw::QutritInitState::new(amps).map_err(value_err)
}

fn prob(v: f64) -> PyResult<MixedStrategy1> {
    MixedStrategy1::new(v).map_err(value_err)
}

fn tactic(pair: Pair) -> PyResult<MixedStrategy2> {
    MixedStrategy2::new(pair.0, pair.1).map_err(value_err)
}

/// Grid-certified equilibrium and stability findings for one candidate.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct StabilityReport {
    candidate: (f64, f64),
    is_ne: bool,
    ne_margin: f64,
    is_strict: bool,
    /// "ESS", "NE_NOT_ESS" or "NOT_NE".
    ess_status: String,
    /// (coordinate 1, coordinate 2, margin) of the worst mutant, if any.
    witness: Option<(f64, f64, f64)>,
    grid_step: f64,
}

impl StabilityReport {
    fn from_core(report: &stability::EquilibriumReport) -> Self {
        Self {
            candidate: (report.candidate[0], report.candidate[1]),
            is_ne: report.is_ne,
            ne_margin: report.ne_margin,
            is_strict: report.is_strict,
            ess_status: match report.ess_status {
                Some(stability::EssStatus::Ess) => "ESS".into(),
                Some(stability::EssStatus::NeNotEss) => "NE_NOT_ESS".into(),
                Some(stability::EssStatus::NotNe) => "NOT_NE".into(),
                None => "UNCHECKED".into(),
            },
            witness: report
                .witness
                .map(|w| (w.mutant[0], w.mutant[1], w.margin)),
            grid_step: report.grid_step,
        }
    }
}

#[pymethods]
impl StabilityReport {
    fn __repr__(&self) -> String {
        format!(
            "StabilityReport(candidate={:?}, status={}, ne_margin={:.3e})",
            self.candidate, self.ess_status, self.ne_margin
        )
    }
}

/// Payoffs (P_A, P_B) of the gate-based quantization for a role game
/// (r, s, t, u) at entanglement gamma.
#[pyfunction]
fn ewl_payoffs(
    r: f64,
    s: f64,
    t: f64,
    u: f64,
    gamma: f64,
    strategy_a: Pair,
    strategy_b: Pair,
) -> PyResult<Pair> {
    let cfg = ewl::EwlConfig::new(
        Bimatrix2::from_roles(r, s, t, u).map_err(value_err)?,
        gamma,
    )
    .map_err(value_err)?;
    let sa = ewl::EwlStrategy::two_parameter(strategy_a.0, strategy_a.1).map_err(value_err)?;
    let sb = ewl::EwlStrategy::two_parameter(strategy_b.0, strategy_b.1).map_err(value_err)?;
    Ok(ewl::ewl_payoffs(&cfg, &sa, &sb))
}

/// Closed-form symmetric payoff for games with s = t, r = u, r - t > 0.
#[pyfunction]
fn ewl_symmetric_payoff_closed(
    r: f64,
    s: f64,
    t: f64,
    u: f64,
    gamma: f64,
    strategy_a: Pair,
    strategy_b: Pair,
) -> PyResult<f64> {
    let cfg = ewl::EwlConfig::new(
        Bimatrix2::from_roles(r, s, t, u).map_err(value_err)?,
        gamma,
    )
    .map_err(value_err)?;
    let sa = ewl::EwlStrategy::two_parameter(strategy_a.0, strategy_a.1).map_err(value_err)?;
    let sb = ewl::EwlStrategy::two_parameter(strategy_b.0, strategy_b.1).map_err(value_err)?;
    ewl::ewl_symmetric_payoff_closed(&cfg, &sa, &sb).map_err(value_err)
}

/// Stability verdict for a strategy (theta, phi) of the gate-based scheme.
#[pyfunction]
#[pyo3(signature = (r, s, t, u, gamma, candidate, grid_step = 1e-2))]
fn ewl_ess(
    r: f64,
    s: f64,
    t: f64,
    u: f64,
    gamma: f64,
    candidate: Pair,
    grid_step: f64,
) -> PyResult<StabilityReport> {
    let cfg = ewl::EwlConfig::new(
        Bimatrix2::from_roles(r, s, t, u).map_err(value_err)?,
        gamma,
    )
    .map_err(value_err)?;
    let f = stability::SymmetricPayoffFn::from_ewl(cfg);
    let report = stability::check_symmetric_ess(
        &f,
        [candidate.0, candidate.1],
        grid_step,
        &stability::Tolerances::default(),
    );
    Ok(StabilityReport::from_core(&report))
}

/// Payoffs (P_A, P_B) of the initial-state quantization of a 2x2 game.
/// `cells[i][j]` is [row payoff, column payoff]; amplitudes are (re, im).
#[pyfunction]
#[pyo3(signature = (cells, a, b, p, q, anti = false))]
fn mw2_payoffs(
    cells: [[[f64; 2]; 2]; 2],
    a: Pair,
    b: Pair,
    p: f64,
    q: f64,
    anti: bool,
) -> PyResult<Pair> {
    let g = bimatrix(cells)?;
    let init = init2(a, b, anti)?;
    Ok(mw::mw_payoffs_2(&g, &init, prob(p)?, prob(q)?))
}

/// Stability verdict for a symmetric strategy p of a quantized symmetric
/// 2x2 game over the diagonal initial state.
#[pyfunction]
#[pyo3(signature = (cells, a, b, candidate, grid_step = 1e-2))]
fn mw2_ess(
    cells: [[[f64; 2]; 2]; 2],
    a: Pair,
    b: Pair,
    candidate: f64,
    grid_step: f64,
) -> PyResult<StabilityReport> {
    let g = bimatrix(cells)?;
    let init = init2(a, b, false)?;
    let f = stability::SymmetricPayoffFn::from_mw2_diagonal(g, init).map_err(value_err)?;
    let report = stability::check_symmetric_ess(
        &f,
        [candidate, 0.0],
        grid_step,
        &stability::Tolerances::default(),
    );
    Ok(StabilityReport::from_core(&report))
}

/// Strict-equilibrium (stability) verdict for a pair (p, q) of a quantized
/// 2x2 game; works for asymmetric games and the anti pairing too.
#[pyfunction]
#[pyo3(signature = (cells, a, b, pair, grid_step = 1e-2, anti = false))]
fn mw2_pair_ess(
    cells: [[[f64; 2]; 2]; 2],
    a: Pair,
    b: Pair,
    pair: Pair,
    grid_step: f64,
    anti: bool,
) -> PyResult<(bool, bool, f64, f64)> {
    let g = bimatrix(cells)?;
    let init = init2(a, b, anti)?;
    let fns = stability::AsymmetricPayoffFns::from_mw2(g, init);
    let report = stability::check_asymmetric_ess(
        &fns,
        pair,
        grid_step,
        &stability::Tolerances::default(),
    );
    Ok((report.is_ne, report.is_ess, report.margin_row, report.margin_col))
}

/// Payoffs of the symmetric three-player scheme defined by the six payoff
/// constants (alpha1, alpha2, alpha3, alpha5, alpha6, alpha8).
#[pyfunction]
fn mw3_payoffs(
    constants: (f64, f64, f64, f64, f64, f64),
    a: Pair,
    b: Pair,
    p: f64,
    q: f64,
    r: f64,
) -> PyResult<(f64, f64, f64)> {
    let spec = ThreePlayerSymmetricSpec::new(
        constants.0, constants.1, constants.2, constants.3, constants.4, constants.5,
    )
    .map_err(value_err)?;
    let init = mw::InitState3::new(complex(a), complex(b)).map_err(value_err)?;
    Ok(mw::mw_payoffs_3(&spec, &init, prob(p)?, prob(q)?, prob(r)?))
}

/// Interior symmetric equilibria of the three-player game at a given |b|^2:
/// (roots, discriminant, used linear fallback, indeterminate).
#[pyfunction]
fn three_player_mixed_ne(
    constants: (f64, f64, f64, f64, f64, f64),
    bsq: f64,
) -> PyResult<(Vec<f64>, f64, bool, bool)> {
    let spec = ThreePlayerSymmetricSpec::new(
        constants.0, constants.1, constants.2, constants.3, constants.4, constants.5,
    )
    .map_err(value_err)?;
    let roots = mw::three_player_mixed_ne(&spec, bsq);
    Ok((
        roots.roots,
        roots.discriminant,
        roots.linear_fallback,
        roots.indeterminate,
    ))
}

/// Payoffs (P_A, P_B) of the quantized 3x3 premium game for tactic pairs
/// (p, p1) over a two-qutrit state c[i][j] of (re, im) entries.
#[pyfunction]
fn rsp_payoffs(
    epsilon: f64,
    c: [[[f64; 2]; 3]; 3],
    tactic_a: Pair,
    tactic_b: Pair,
) -> PyResult<Pair> {
    let g = Matrix3x3Pair::rock_scissors_paper(epsilon).map_err(value_err)?;
    let init = qutrit_state(c)?;
    Ok(mw::rsp_payoffs(&g, &init, &tactic(tactic_a)?, &tactic(tactic_b)?))
}

/// Gradient (dP/dp, dP/dp1) of the quantized premium game at a symmetric
/// tactic point; both components vanish at a mixed equilibrium.
#[pyfunction]
fn rsp_gradients(epsilon: f64, c: [[[f64; 2]; 3]; 3], at: Pair) -> PyResult<Pair> {
    let g = Matrix3x3Pair::rock_scissors_paper(epsilon).map_err(value_err)?;
    let init = qutrit_state(c)?;
    mw::rsp_gradients(&g, &init, &tactic(at)?).map_err(value_err)
}

/// Stability verdict for a tactic pair of the quantized premium game.
#[pyfunction]
#[pyo3(signature = (epsilon, c, candidate, grid_step = 0.02))]
fn rsp_ess(
    epsilon: f64,
    c: [[[f64; 2]; 3]; 3],
    candidate: Pair,
    grid_step: f64,
) -> PyResult<StabilityReport> {
    let g = Matrix3x3Pair::rock_scissors_paper(epsilon).map_err(value_err)?;
    let init = qutrit_state(c)?;
    let f = stability::SymmetricPayoffFn::from_rsp(g, init).map_err(value_err)?;
    let report = stability::check_symmetric_ess(
        &f,
        [candidate.0, candidate.1],
        grid_step,
        &stability::Tolerances::default(),
    );
    Ok(StabilityReport::from_core(&report))
}

/// Nash equilibria of a classical 2x2 bimatrix game: ((p, q) pairs with p
/// the row player's weight on strategy 0, degeneracy flag).
#[pyfunction]
fn classical_equilibria(cells: [[[f64; 2]; 2]; 2]) -> PyResult<(Vec<Pair>, bool)> {
    let eq = classical_equilibria_2x2(&bimatrix(cells)?);
    Ok((eq.equilibria, eq.degenerate))
}

/// Integrate replicator dynamics; returns sampled (time, frequencies) pairs.
#[pyfunction]
#[pyo3(signature = (payoff_rows, start, dt = 1e-3, steps = 10_000))]
fn replicator_evolve(
    payoff_rows: Vec<Vec<f64>>,
    start: Vec<f64>,
    dt: f64,
    steps: usize,
) -> PyResult<Vec<(f64, Vec<f64>)>> {
    let matrix = replicator::PayoffMatrix::from_rows(&payoff_rows);
    let pop = replicator::Population::new(start).map_err(value_err)?;
    let trajectory = replicator::evolve(&pop, &matrix, dt, steps).map_err(value_err)?;
    Ok(trajectory
        .samples
        .into_iter()
        .map(|(t, p)| (t, p.freqs().to_vec()))
        .collect())
}

/// (pure-strategy direction, outcome label, terminal distance) per probe.
type ProbeDirections = Vec<(usize, String, f64)>;

/// Perturbation probe around a candidate population:
/// ("RETURNS" | "ESCAPES" | "INCONCLUSIVE", per-direction outcomes).
#[pyfunction]
#[pyo3(signature = (payoff_rows, candidate, delta = 0.05, dt = 1e-3, steps = 50_000))]
fn replicator_probe(
    payoff_rows: Vec<Vec<f64>>,
    candidate: Vec<f64>,
    delta: f64,
    dt: f64,
    steps: usize,
) -> PyResult<(String, ProbeDirections)> {
    let matrix = replicator::PayoffMatrix::from_rows(&payoff_rows);
    let pop = replicator::Population::new(candidate).map_err(value_err)?;
    let report =
        replicator::stability_probe(&pop, &matrix, delta, dt, steps).map_err(value_err)?;
    let label = |o: replicator::ProbeOutcome| {
        match o {
            replicator::ProbeOutcome::Returns => "RETURNS",
            replicator::ProbeOutcome::Escapes => "ESCAPES",
            replicator::ProbeOutcome::Inconclusive => "INCONCLUSIVE",
        }
        .to_string()
    };
    Ok((
        label(report.outcome),
        report
            .directions
            .into_iter()
            .map(|(dir, outcome, dist)| (dir, label(outcome), dist))
            .collect(),
    ))
}

/// Run one bundled reproduction case; returns (name, passed, detail) rows.
#[pyfunction]
fn reproduce(case_id: &str) -> PyResult<Vec<(String, bool, String)>> {
    let run = qgames_cli::catalog::run_case(case_id)
        .ok_or_else(|| value_err(format!("unknown case id `{case_id}`")))?;
    Ok(run
        .assertions
        .into_iter()
        .map(|a| (a.name, a.passed, a.detail))
        .collect())
}

/// The bundled reproduction case ids.
#[pyfunction]
fn list_cases() -> Vec<String> {
    qgames_cli::catalog::CASE_IDS
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[pymodule]
fn qgames_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<StabilityReport>()?;
    m.add_function(wrap_pyfunction!(ewl_payoffs, m)?)?;
    m.add_function(wrap_pyfunction!(ewl_symmetric_payoff_closed, m)?)?;
    m.add_function(wrap_pyfunction!(ewl_ess, m)?)?;
    m.add_function(wrap_pyfunction!(mw2_payoffs, m)?)?;
    m.add_function(wrap_pyfunction!(mw2_ess, m)?)?;
    m.add_function(wrap_pyfunction!(mw2_pair_ess, m)?)?;
    m.add_function(wrap_pyfunction!(mw3_payoffs, m)?)?;
    m.add_function(wrap_pyfunction!(three_player_mixed_ne, m)?)?;
    m.add_function(wrap_pyfunction!(rsp_payoffs, m)?)?;
    m.add_function(wrap_pyfunction!(rsp_gradients, m)?)?;
    m.add_function(wrap_pyfunction!(rsp_ess, m)?)?;
    m.add_function(wrap_pyfunction!(classical_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(replicator_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(replicator_probe, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(list_cases, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
