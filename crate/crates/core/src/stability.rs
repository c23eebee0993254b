//! Scheme-agnostic Nash-equilibrium and evolutionary-stability certification
//! over abstract symmetric payoff functions, plus the asymmetric (strict-NE)
//! and three-player variants.
//!
//! Certification is by finite grid search with local refinement near marginal
//! margins. It is not a continuum proof; every report records the grid step
//! it was produced with.

use crate::ewl::{ewl_payoffs, EwlConfig, EwlStrategy};
use crate::games::{Bimatrix2, Matrix3x3Pair, MixedStrategy1, MixedStrategy2, ThreePlayerSymmetricSpec};
use crate::mw::{mw_payoffs_2, mw_payoffs_3, rsp_payoffs, InitState2, InitState3, Pairing, QutritInitState};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error("invasion mixing is undefined on the strategy-unitary rectangle")]
    MixingUnsupported,
    #[error("mutant coincides with the candidate")]
    MutantEqualsCandidate,
    #[error("epsilon grid must be strictly decreasing inside (0, 1)")]
    BadEpsilonGrid,
    #[error("point {0:?} lies outside the strategy space")]
    OutsideSpace([f64; 2]),
    #[error("frequency {0} outside [0, 1]")]
    BadFrequency(f64),
    #[error("adapter requires a symmetric game")]
    RequiresSymmetricGame,
    #[error("adapter requires the diagonal initial-state pairing")]
    RequiresDiagonalPairing,
    #[error("adapter requires |c_ij|^2 = |c_ji|^2 (symmetric play)")]
    RequiresSymmetricPlay,
}

/// A strategy is a point with up to two coordinates; interval strategies use
/// only the first.
pub type Point = [f64; 2];

/// The strategy space a symmetric payoff function is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    /// p in [0, 1].
    Interval,
    /// (p, p1) with p, p1 >= 0 and p + p1 <= 1.
    Simplex2,
    /// (theta, phi) in [0, pi] x [0, pi/2].
    EwlRect,
}

impl Space {
    fn ranges(&self) -> [(f64, f64); 2] {
        match self {
            Space::Interval => [(0.0, 1.0), (0.0, 0.0)],
            Space::Simplex2 => [(0.0, 1.0), (0.0, 1.0)],
            Space::EwlRect => [(0.0, PI), (0.0, FRAC_PI_2)],
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let eps = 1e-12;
        match self {
            Space::Interval => (-eps..=1.0 + eps).contains(&p[0]),
            Space::Simplex2 => p[0] >= -eps && p[1] >= -eps && p[0] + p[1] <= 1.0 + eps,
            Space::EwlRect => {
                (-eps..=PI + eps).contains(&p[0]) && (-eps..=FRAC_PI_2 + eps).contains(&p[1])
            }
        }
    }

    /// Regular grid with `step` as the per-axis resolution expressed as a
    /// fraction of the axis range (so 1e-2 means 101 points per axis).
    pub fn grid(&self, step: f64) -> Vec<Point> {
        assert!(step > 0.0 && step <= 1.0, "grid step must lie in (0, 1]");
        let n = (1.0 / step).round().max(1.0) as usize;
        let mut points = Vec::new();
        match self {
            Space::Interval => {
                for i in 0..=n {
                    points.push([i as f64 / n as f64, 0.0]);
                }
            }
            Space::Simplex2 => {
                for i in 0..=n {
                    for j in 0..=(n - i) {
                        points.push([i as f64 / n as f64, j as f64 / n as f64]);
                    }
                }
            }
            Space::EwlRect => {
                for i in 0..=n {
                    for j in 0..=n {
                        points.push([PI * i as f64 / n as f64, FRAC_PI_2 * j as f64 / n as f64]);
                    }
                }
            }
        }
        points
    }

    /// Convex mixture (1-eps) x + eps y; defined only where strategies mix
    /// linearly (interval and simplex spaces).
    pub fn mix(&self, x: Point, y: Point, eps: f64) -> Option<Point> {
        match self {
            Space::EwlRect => None,
            _ => Some([
                (1.0 - eps) * x[0] + eps * y[0],
                (1.0 - eps) * x[1] + eps * y[1],
            ]),
        }
    }

    fn axis_steps(&self, step: f64) -> [f64; 2] {
        let r = self.ranges();
        [
            (r[0].1 - r[0].0) * step,
            ((r[1].1 - r[1].0) * step).max(f64::MIN_POSITIVE),
        ]
    }

    fn within_one_step(&self, a: Point, b: Point, step: f64) -> bool {
        let h = self.axis_steps(step);
        let theta_close = (a[0] - b[0]).abs() <= h[0] * (1.0 + 1e-9);
        // On the unitary rectangle the phi axis is immaterial when either
        // point sits on the theta = pi chart line.
        let on_collapsed_line =
            *self == Space::EwlRect && ((a[0] - PI).abs() < 1e-12 || (b[0] - PI).abs() < 1e-12);
        if on_collapsed_line {
            return theta_close;
        }
        theta_close && (a[1] - b[1]).abs() <= h[1] * (1.0 + 1e-9)
    }

    /// Whether two points denote the same strategy. Coordinates are compared
    /// exactly, except that the whole theta = pi line of the unitary
    /// rectangle is one strategy: the strategy matrix there does not depend
    /// on phi.
    pub fn same_strategy(&self, a: Point, b: Point) -> bool {
        if same_point(a, b) {
            return true;
        }
        *self == Space::EwlRect
            && (a[0] - PI).abs() < 1e-12
            && (b[0] - PI).abs() < 1e-12
    }
}

fn same_point(a: Point, b: Point) -> bool {
    (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12
}

/// Numeric cutoffs for the equilibrium checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Slack allowed on the NE inequality.
    pub tol_ne: f64,
    /// Band treated as payoff equality.
    pub tol_eq: f64,
    /// Margin required for a strict inequality.
    pub tol_strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_ne: 1e-9,
            tol_eq: 1e-9,
            tol_strict: 1e-9,
        }
    }
}

/// Symmetric-contest payoff: `payoff(x, y)` is what an x-player earns against
/// a y-player.
pub struct SymmetricPayoffFn {
    space: Space,
    eval: Box<dyn Fn(Point, Point) -> f64 + Send + Sync>,
}

impl SymmetricPayoffFn {
    pub fn new(
        space: Space,
        eval: impl Fn(Point, Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            space,
            eval: Box::new(eval),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn payoff(&self, x: Point, y: Point) -> f64 {
        (self.eval)(x, y)
    }

    /// Classical mixed-strategy contest over a symmetric 2x2 game.
    pub fn from_symmetric_bimatrix(g: Bimatrix2) -> Result<Self, StabilityError> {
        if !g.is_symmetric() {
            return Err(StabilityError::RequiresSymmetricGame);
        }
        Ok(Self::new(Space::Interval, move |x, y| {
            crate::games::mixed_payoff_bimatrix(
                &g,
                MixedStrategy1::new(x[0]).unwrap(),
                MixedStrategy1::new(y[0]).unwrap(),
            )
            .0
        }))
    }

    /// Quantized symmetric 2x2 contest over the diagonal initial state.
    pub fn from_mw2_diagonal(g: Bimatrix2, init: InitState2) -> Result<Self, StabilityError> {
        if !g.is_symmetric() {
            return Err(StabilityError::RequiresSymmetricGame);
        }
        if init.pairing != Pairing::Diagonal {
            return Err(StabilityError::RequiresDiagonalPairing);
        }
        Ok(Self::new(Space::Interval, move |x, y| {
            mw_payoffs_2(
                &g,
                &init,
                MixedStrategy1::new(x[0]).unwrap(),
                MixedStrategy1::new(y[0]).unwrap(),
            )
            .0
        }))
    }

    /// EWL contest over the two-parameter strategy rectangle; role games are
    /// symmetric so the row payoff serves both seats.
    pub fn from_ewl(cfg: EwlConfig) -> Self {
        Self::new(Space::EwlRect, move |x, y| {
            let sa = EwlStrategy::two_parameter(x[0], x[1]).unwrap();
            let sb = EwlStrategy::two_parameter(y[0], y[1]).unwrap();
            ewl_payoffs(&cfg, &sa, &sb).0
        })
    }

    /// Quantized 3x3 contest over tactic pairs (p, p1).
    pub fn from_rsp(g: Matrix3x3Pair, init: QutritInitState) -> Result<Self, StabilityError> {
        if !g.is_symmetric() {
            return Err(StabilityError::RequiresSymmetricGame);
        }
        if !init.is_symmetric_play() {
            return Err(StabilityError::RequiresSymmetricPlay);
        }
        Ok(Self::new(Space::Simplex2, move |x, y| {
            rsp_payoffs(
                &g,
                &init,
                &MixedStrategy2::new(x[0], x[1]).unwrap(),
                &MixedStrategy2::new(y[0], y[1]).unwrap(),
            )
            .0
        }))
    }
}

/// Verdict of the two-condition evolutionary-stability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EssStatus {
    #[serde(rename = "ESS")]
    Ess,
    #[serde(rename = "NE_NOT_ESS")]
    NeNotEss,
    #[serde(rename = "NOT_NE")]
    NotNe,
}

/// The mutant that came closest to (or succeeded in) invading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutantWitness {
    pub mutant: Point,
    pub margin: f64,
}

/// Grid-certified equilibrium findings for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub candidate: Point,
    pub space: Space,
    /// Per-axis grid resolution (fraction of the axis range) actually used.
    pub grid_step: f64,
    pub is_ne: bool,
    /// min over mutants of P(x*,x*) - P(y,x*).
    pub ne_margin: f64,
    pub is_strict: bool,
    /// Present for full stability checks, absent for NE-only checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess_status: Option<EssStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MutantWitness>,
    /// How the verdict was certified.
    pub certification: &'static str,
}

const CERTIFICATION: &str =
    "finite mutant grid at the recorded step with local refinement; not a continuum proof";

impl EquilibriumReport {
    fn assert_structure(&self) {
        if self.ess_status == Some(EssStatus::Ess) {
            assert!(self.is_ne, "stability verdict implies equilibrium");
        }
        if matches!(self.ess_status, Some(s) if s != EssStatus::Ess) {
            assert!(self.witness.is_some(), "non-stable verdicts carry a witness");
        }
    }
}

/// Mutant grid for a candidate: all grid points except those denoting the
/// candidate's own strategy, plus a refined shell around `focus` when
/// provided.
fn mutant_grid(space: Space, step: f64, x_star: Point, focus: Option<Point>) -> Vec<Point> {
    let mut points: Vec<Point> = space
        .grid(step)
        .into_iter()
        .filter(|p| !space.same_strategy(*p, x_star))
        .collect();
    if let Some(center) = focus {
        let h = space.axis_steps(step);
        let fine = 10usize;
        for i in 0..=(2 * fine) {
            for j in 0..=(2 * fine) {
                let p = [
                    center[0] + (i as f64 / fine as f64 - 1.0) * h[0],
                    center[1] + (j as f64 / fine as f64 - 1.0) * h[1],
                ];
                if space.contains(p) && !space.same_strategy(p, x_star) {
                    points.push(p);
                }
                if space == Space::Interval {
                    break;
                }
            }
        }
    }
    points
}

fn ne_margins(
    f: &SymmetricPayoffFn,
    x_star: Point,
    mutants: &[Point],
) -> (f64, Point) {
    let own = f.payoff(x_star, x_star);
    let mut worst = f64::INFINITY;
    let mut witness = x_star;
    for &y in mutants {
        let margin = own - f.payoff(y, x_star);
        if margin < worst {
            worst = margin;
            witness = y;
        }
    }
    (worst, witness)
}

/// Is `x_star` a symmetric NE: P(x*,x*) - P(y,x*) >= -tol_ne for every grid
/// mutant. Strictness asks the same margin to exceed tol_strict everywhere.
pub fn check_symmetric_ne(
    f: &SymmetricPayoffFn,
    x_star: Point,
    grid_step: f64,
    tol: &Tolerances,
) -> EquilibriumReport {
    assert!(f.space.contains(x_star), "candidate outside strategy space");
    let mutants = mutant_grid(f.space, grid_step, x_star, None);
    let (mut margin, mut witness) = ne_margins(f, x_star, &mutants);
    if margin.abs() <= 10.0 * tol.tol_ne {
        // Marginal: refine around the worst mutant.
        let refined = mutant_grid(f.space, grid_step, x_star, Some(witness));
        let (m2, w2) = ne_margins(f, x_star, &refined);
        if m2 < margin {
            margin = m2;
            witness = w2;
        }
    }
    let report = EquilibriumReport {
        candidate: x_star,
        space: f.space,
        grid_step,
        is_ne: margin >= -tol.tol_ne,
        ne_margin: margin,
        is_strict: margin > tol.tol_strict,
        ess_status: None,
        witness: Some(MutantWitness {
            mutant: witness,
            margin,
        }),
        certification: CERTIFICATION,
    };
    report.assert_structure();
    report
}

/// Per-mutant stability score under the two-condition test. `None` marks a
/// neighbor of the candidate that tied and is exempt from the tie-break.
fn ess_score(
    f: &SymmetricPayoffFn,
    x_star: Point,
    own: f64,
    y: Point,
    adjacent: bool,
    tol: &Tolerances,
) -> (f64, Option<f64>) {
    let a = own - f.payoff(y, x_star);
    if a > tol.tol_strict {
        return (a, Some(a));
    }
    if a < -tol.tol_eq {
        return (a, Some(a));
    }
    if adjacent {
        // Grid points one step from the candidate sample the same payoff
        // plateau; they are tested against invasion but allowed to tie.
        return (a, None);
    }
    let b = f.payoff(x_star, y) - f.payoff(y, y);
    (a, Some(b))
}

/// Full two-condition stability check. For every grid mutant y != x*, either
/// P(x*,x*) > P(y,x*) strictly, or the payoffs tie and P(x*,y) > P(y,y)
/// strictly.
pub fn check_symmetric_ess(
    f: &SymmetricPayoffFn,
    x_star: Point,
    grid_step: f64,
    tol: &Tolerances,
) -> EquilibriumReport {
    assert!(f.space.contains(x_star), "candidate outside strategy space");
    let run = |mutants: &[Point]| {
        let own = f.payoff(x_star, x_star);
        let mut ne_margin = f64::INFINITY;
        let mut worst_score = f64::INFINITY;
        let mut worst_mutant: Option<Point> = None;
        for &y in mutants {
            let adjacent = f.space.within_one_step(y, x_star, grid_step);
            let (a, score) = ess_score(f, x_star, own, y, adjacent, tol);
            if a < ne_margin {
                ne_margin = a;
            }
            if let Some(s) = score {
                if s < worst_score {
                    worst_score = s;
                    worst_mutant = Some(y);
                }
            }
        }
        (ne_margin, worst_score, worst_mutant)
    };
    let mutants = mutant_grid(f.space, grid_step, x_star, None);
    let (mut ne_margin, mut worst_score, mut worst_mutant) = run(&mutants);
    if worst_score.abs() <= 10.0 * tol.tol_strict || ne_margin.abs() <= 10.0 * tol.tol_ne {
        if let Some(center) = worst_mutant {
            let refined = mutant_grid(f.space, grid_step, x_star, Some(center));
            let (m2, s2, w2) = run(&refined);
            if m2 < ne_margin {
                ne_margin = m2;
            }
            if s2 < worst_score {
                worst_score = s2;
                worst_mutant = w2;
            }
        }
    }
    let is_ne = ne_margin >= -tol.tol_ne;
    let stable = is_ne && worst_score > tol.tol_strict;
    let status = if stable {
        EssStatus::Ess
    } else if is_ne {
        EssStatus::NeNotEss
    } else {
        EssStatus::NotNe
    };
    let report = EquilibriumReport {
        candidate: x_star,
        space: f.space,
        grid_step,
        is_ne,
        ne_margin,
        is_strict: ne_margin > tol.tol_strict,
        ess_status: Some(status),
        witness: if stable {
            None
        } else {
            worst_mutant.map(|mutant| MutantWitness {
                mutant,
                margin: worst_score,
            })
        },
        certification: CERTIFICATION,
    };
    report.assert_structure();
    report
}

/// The two-condition test against a single named mutant.
pub fn ess_holds_against(
    f: &SymmetricPayoffFn,
    x_star: Point,
    mutant: Point,
    tol: &Tolerances,
) -> Result<bool, StabilityError> {
    if f.space.same_strategy(x_star, mutant) {
        return Err(StabilityError::MutantEqualsCandidate);
    }
    let own = f.payoff(x_star, x_star);
    let a = own - f.payoff(mutant, x_star);
    if a > tol.tol_strict {
        return Ok(true);
    }
    if a < -tol.tol_eq {
        return Ok(false);
    }
    Ok(f.payoff(x_star, mutant) - f.payoff(mutant, mutant) > tol.tol_strict)
}

/// A shrinking sequence of mutant population shares to test invasion at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvasionTest {
    /// Strictly decreasing shares in (0, 1).
    pub epsilons: Vec<f64>,
    pub mutant: Point,
}

impl InvasionTest {
    pub fn new(epsilons: Vec<f64>, mutant: Point) -> Result<Self, StabilityError> {
        if epsilons.is_empty()
            || epsilons.iter().any(|e| !(0.0..1.0).contains(e) || *e == 0.0)
            || epsilons.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(StabilityError::BadEpsilonGrid);
        }
        Ok(Self { epsilons, mutant })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvasionOutcome {
    pub epsilon: f64,
    /// True when the incumbent strictly out-earns the mutant at this share.
    pub holds: bool,
    pub margin: f64,
}

/// Literal evaluation of P[x*, (1-e)x* + e y] > P[y, (1-e)x* + e y] at each
/// share, using linearity of the payoff in the opponent mix. Rejected for
/// the unitary rectangle, which has no canonical convex mixture.
pub fn check_invasion(
    f: &SymmetricPayoffFn,
    x_star: Point,
    test: &InvasionTest,
) -> Result<Vec<InvasionOutcome>, StabilityError> {
    if f.space == Space::EwlRect {
        return Err(StabilityError::MixingUnsupported);
    }
    if f.space.same_strategy(x_star, test.mutant) {
        return Err(StabilityError::MutantEqualsCandidate);
    }
    if !f.space.contains(test.mutant) {
        return Err(StabilityError::OutsideSpace(test.mutant));
    }
    Ok(test
        .epsilons
        .iter()
        .map(|&epsilon| {
            let mixed = f
                .space
                .mix(x_star, test.mutant, epsilon)
                .expect("mixable space");
            let margin = f.payoff(x_star, mixed) - f.payoff(test.mutant, mixed);
            InvasionOutcome {
                epsilon,
                holds: margin > 0.0,
                margin,
            }
        })
        .collect())
}

/// Payoff pair for a two-seat contest without symmetry.
pub struct AsymmetricPayoffFns {
    eval_a: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    eval_b: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl AsymmetricPayoffFns {
    pub fn new(
        eval_a: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        eval_b: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval_a: Box::new(eval_a),
            eval_b: Box::new(eval_b),
        }
    }

    pub fn from_bimatrix(g: Bimatrix2) -> Self {
        let ga = g;
        let gb = g;
        Self::new(
            move |p, q| {
                crate::games::mixed_payoff_bimatrix(
                    &ga,
                    MixedStrategy1::new(p).unwrap(),
                    MixedStrategy1::new(q).unwrap(),
                )
                .0
            },
            move |p, q| {
                crate::games::mixed_payoff_bimatrix(
                    &gb,
                    MixedStrategy1::new(p).unwrap(),
                    MixedStrategy1::new(q).unwrap(),
                )
                .1
            },
        )
    }

    pub fn from_mw2(g: Bimatrix2, init: InitState2) -> Self {
        Self::new(
            move |p, q| {
                mw_payoffs_2(
                    &g,
                    &init,
                    MixedStrategy1::new(p).unwrap(),
                    MixedStrategy1::new(q).unwrap(),
                )
                .0
            },
            move |p, q| {
                mw_payoffs_2(
                    &g,
                    &init,
                    MixedStrategy1::new(p).unwrap(),
                    MixedStrategy1::new(q).unwrap(),
                )
                .1
            },
        )
    }

    pub fn payoff_a(&self, p: f64, q: f64) -> f64 {
        (self.eval_a)(p, q)
    }

    pub fn payoff_b(&self, p: f64, q: f64) -> f64 {
        (self.eval_b)(p, q)
    }
}

/// Findings for a strategy pair of an asymmetric game, where stability is
/// strict NE on both seats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymmetricReport {
    pub pair: (f64, f64),
    pub grid_step: f64,
    pub is_ne: bool,
    /// min over row deviations of P_A(x*,y*) - P_A(x,y*).
    pub margin_row: f64,
    /// min over column deviations of P_B(x*,y*) - P_B(x*,y).
    pub margin_col: f64,
    /// Strict NE on both seats.
    pub is_ess: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_row: Option<MutantWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_col: Option<MutantWitness>,
    pub certification: &'static str,
}

/// Strict-NE test for a pair (x*, y*): P_A(x*,y*) > P_A(x,y*) for every
/// x != x* and P_B(x*,y*) > P_B(x*,y) for every y != y*.
pub fn check_asymmetric_ess(
    fns: &AsymmetricPayoffFns,
    pair: (f64, f64),
    grid_step: f64,
    tol: &Tolerances,
) -> AsymmetricReport {
    let space = Space::Interval;
    let base_a = fns.payoff_a(pair.0, pair.1);
    let base_b = fns.payoff_b(pair.0, pair.1);
    let scan = |against_row: bool| -> (f64, f64) {
        let center = if against_row { pair.0 } else { pair.1 };
        let mut worst = f64::INFINITY;
        let mut witness = center;
        for p in mutant_grid(space, grid_step, [center, 0.0], Some([center, 0.0])) {
            let x = p[0];
            let margin = if against_row {
                base_a - fns.payoff_a(x, pair.1)
            } else {
                base_b - fns.payoff_b(pair.0, x)
            };
            if margin < worst {
                worst = margin;
                witness = x;
            }
        }
        (worst, witness)
    };
    let (margin_row, wr) = scan(true);
    let (margin_col, wc) = scan(false);
    let is_ne = margin_row >= -tol.tol_ne && margin_col >= -tol.tol_ne;
    let is_ess = margin_row > tol.tol_strict && margin_col > tol.tol_strict;
    AsymmetricReport {
        pair,
        grid_step,
        is_ne,
        margin_row,
        margin_col,
        is_ess,
        witness_row: Some(MutantWitness {
            mutant: [wr, 0.0],
            margin: margin_row,
        }),
        witness_col: Some(MutantWitness {
            mutant: [wc, 0.0],
            margin: margin_col,
        }),
        certification: CERTIFICATION,
    }
}

/// Payoff to the first seat of a symmetric three-player contest.
pub struct ThreePlayerPayoffFn {
    eval: Box<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>,
}

impl ThreePlayerPayoffFn {
    pub fn new(eval: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Box::new(eval),
        }
    }

    pub fn from_mw3(spec: ThreePlayerSymmetricSpec, init: InitState3) -> Self {
        Self::new(move |x, y, z| {
            mw_payoffs_3(
                &spec,
                &init,
                MixedStrategy1::new(x).unwrap(),
                MixedStrategy1::new(y).unwrap(),
                MixedStrategy1::new(z).unwrap(),
            )
            .0
        })
    }

    pub fn payoff(&self, x: f64, y: f64, z: f64) -> f64 {
        (self.eval)(x, y, z)
    }
}

/// Three-player stability: P(p,p,p) > P(q,p,p) strictly for every mutant q,
/// with the tie-break P(p,q,p) > P(q,q,p) when the first condition is an
/// equality.
pub fn check_three_player_ess(
    f3: &ThreePlayerPayoffFn,
    p_star: f64,
    grid_step: f64,
    tol: &Tolerances,
) -> EquilibriumReport {
    let space = Space::Interval;
    let own = f3.payoff(p_star, p_star, p_star);
    let mut ne_margin = f64::INFINITY;
    let mut worst_score = f64::INFINITY;
    let mut worst_mutant = p_star;
    for p in mutant_grid(space, grid_step, [p_star, 0.0], Some([p_star, 0.0])) {
        let q = p[0];
        let a = own - f3.payoff(q, p_star, p_star);
        if a < ne_margin {
            ne_margin = a;
        }
        let adjacent = (q - p_star).abs() <= grid_step * (1.0 + 1e-9);
        let score = if a > tol.tol_strict || a < -tol.tol_eq {
            Some(a)
        } else if adjacent {
            None
        } else {
            Some(f3.payoff(p_star, q, p_star) - f3.payoff(q, q, p_star))
        };
        if let Some(s) = score {
            if s < worst_score {
                worst_score = s;
                worst_mutant = q;
            }
        }
    }
    let is_ne = ne_margin >= -tol.tol_ne;
    let stable = is_ne && worst_score > tol.tol_strict;
    let status = if stable {
        EssStatus::Ess
    } else if is_ne {
        EssStatus::NeNotEss
    } else {
        EssStatus::NotNe
    };
    let report = EquilibriumReport {
        candidate: [p_star, 0.0],
        space,
        grid_step,
        is_ne,
        ne_margin,
        is_strict: ne_margin > tol.tol_strict,
        ess_status: Some(status),
        witness: if stable {
            None
        } else {
            Some(MutantWitness {
                mutant: [worst_mutant, 0.0],
                margin: worst_score,
            })
        },
        certification: CERTIFICATION,
    };
    report.assert_structure();
    report
}

/// Frequency-weighted fitnesses W(x), W(y) of two strategies sharing a
/// population with proportions (fx, 1 - fx).
pub fn fitness_pair(
    f: &SymmetricPayoffFn,
    x: Point,
    y: Point,
    fx: f64,
) -> Result<(f64, f64), StabilityError> {
    if !(0.0..=1.0).contains(&fx) {
        return Err(StabilityError::BadFrequency(fx));
    }
    let fy = 1.0 - fx;
    Ok((
        f.payoff(x, x) * fx + f.payoff(x, y) * fy,
        f.payoff(y, x) * fx + f.payoff(y, y) * fy,
    ))
}

/// One approximate symmetric equilibrium found by scanning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NePoint {
    pub point: Point,
    /// f(x,x) - max_y f(y,x); nonnegative up to tolerance at an equilibrium.
    pub margin: f64,
    /// Number of qualifying grid points merged into this cluster.
    pub cluster_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeScanResult {
    pub equilibria: Vec<NePoint>,
    /// Set when at least half the grid qualifies (flat payoff landscape).
    pub degenerate: bool,
    pub grid_step: f64,
}

/// Scan the whole grid for symmetric equilibria: keep points x where
/// f(x,x) >= max_y f(y,x) - tol_ne, then merge grid-adjacent hits into
/// clusters represented by their best point.
pub fn ne_scan(f: &SymmetricPayoffFn, grid_step: f64, tol: &Tolerances) -> NeScanResult {
    let grid = f.space.grid(grid_step);
    let margins: Vec<f64> = grid
        .par_iter()
        .map(|&x| {
            let own = f.payoff(x, x);
            let best_reply = grid
                .iter()
                .map(|&y| f.payoff(y, x))
                .fold(f64::NEG_INFINITY, f64::max);
            own - best_reply
        })
        .collect();
    let qualifying: Vec<(Point, f64)> = grid
        .iter()
        .zip(&margins)
        .filter(|(_, m)| **m >= -tol.tol_ne)
        .map(|(p, m)| (*p, *m))
        .collect();
    let degenerate = qualifying.len() * 2 >= grid.len();
    // Greedy clustering in grid order; adjacency within 1.5 steps per axis.
    let h = f.space.axis_steps(grid_step);
    let mut clusters: Vec<Vec<(Point, f64)>> = Vec::new();
    for (p, m) in qualifying {
        let home = clusters.iter_mut().find(|cluster| {
            cluster.iter().any(|(q, _)| {
                (p[0] - q[0]).abs() <= 1.5 * h[0] && (p[1] - q[1]).abs() <= 1.5 * h[1]
            })
        });
        match home {
            Some(cluster) => cluster.push((p, m)),
            None => clusters.push(vec![(p, m)]),
        }
    }
    let equilibria = clusters
        .into_iter()
        .map(|cluster| {
            let size = cluster.len();
            let best = cluster
                .into_iter()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            NePoint {
                point: best.0,
                margin: best.1,
                cluster_size: size,
            }
        })
        .collect();
    NeScanResult {
        equilibria,
        degenerate,
        grid_step,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd_fn() -> SymmetricPayoffFn {
        SymmetricPayoffFn::from_symmetric_bimatrix(
            Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn classical_defection_is_strict_ne() {
        let report = check_symmetric_ne(&pd_fn(), [0.0, 0.0], 1e-2, &tol());
        assert!(report.is_ne);
        assert!(report.is_strict);
        let report = check_symmetric_ess(&pd_fn(), [0.0, 0.0], 1e-2, &tol());
        assert_eq!(report.ess_status, Some(EssStatus::Ess));
    }

    #[test]
    fn cooperation_is_not_ne() {
        let report = check_symmetric_ess(&pd_fn(), [1.0, 0.0], 1e-2, &tol());
        assert_eq!(report.ess_status, Some(EssStatus::NotNe));
        assert!(!report.is_ne);
        assert!(report.witness.is_some());
    }

    #[test]
    fn constant_payoff_is_weak_ne_everywhere() {
        let f = SymmetricPayoffFn::new(Space::Interval, |_, _| 1.0);
        let report = check_symmetric_ne(&f, [0.4, 0.0], 1e-2, &tol());
        assert!(report.is_ne);
        assert!(!report.is_strict);
        let scan = ne_scan(&f, 0.05, &tol());
        assert!(scan.degenerate);
    }

    #[test]
    fn ewl_q_is_unique_equilibrium_at_full_entanglement() {
        let cfg = EwlConfig::new(
            Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(),
            FRAC_PI_2,
        )
        .unwrap();
        let f = SymmetricPayoffFn::from_ewl(cfg);
        let q = [0.0, FRAC_PI_2];
        let report = check_symmetric_ess(&f, q, 0.02, &tol());
        assert!(report.is_ne);
        assert_eq!(report.ess_status, Some(EssStatus::Ess));
        let scan = ne_scan(&f, 1.0 / 24.0, &tol());
        assert_eq!(scan.equilibria.len(), 1);
        assert!(!scan.degenerate);
        let found = scan.equilibria[0].point;
        assert!((found[0] - q[0]).abs() < 1e-9 && (found[1] - q[1]).abs() < 1e-9);
    }

    #[test]
    fn pd_scan_finds_only_defection() {
        let scan = ne_scan(&pd_fn(), 0.02, &tol());
        assert_eq!(scan.equilibria.len(), 1);
        assert!((scan.equilibria[0].point[0]).abs() < 1e-12);
        assert!(!scan.degenerate);
    }

    #[test]
    fn invasion_pd_defector_resists_cooperators() {
        // Expanded share inequality for the dilemma with mutant y = 1 at
        // e = 0.01: the defector earns 1 + 2e more than... evaluated directly.
        let test = InvasionTest::new(vec![0.1, 0.05, 0.01], [1.0, 0.0]).unwrap();
        let outcomes = check_invasion(&pd_fn(), [0.0, 0.0], &test).unwrap();
        assert!(outcomes.iter().all(|o| o.holds));
        // P(D, mix) = 5e + 1(1-e) versus P(C, mix) = 3e: margin 1 + e.
        let last = outcomes.last().unwrap();
        assert!((last.margin - (1.0 + last.epsilon)).abs() < 1e-12);
    }

    #[test]
    fn invasion_rejects_identical_mutant() {
        let test = InvasionTest::new(vec![0.1], [0.0, 0.0]).unwrap();
        assert!(matches!(
            check_invasion(&pd_fn(), [0.0, 0.0], &test),
            Err(StabilityError::MutantEqualsCandidate)
        ));
    }

    #[test]
    fn invasion_rejects_unitary_rectangle() {
        let cfg = EwlConfig::new(
            Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(),
            FRAC_PI_2,
        )
        .unwrap();
        let f = SymmetricPayoffFn::from_ewl(cfg);
        let test = InvasionTest::new(vec![0.1], [1.0, 0.0]).unwrap();
        assert!(matches!(
            check_invasion(&f, [0.0, FRAC_PI_2], &test),
            Err(StabilityError::MixingUnsupported)
        ));
    }

    #[test]
    fn epsilon_grid_validation() {
        assert!(InvasionTest::new(vec![], [1.0, 0.0]).is_err());
        assert!(InvasionTest::new(vec![0.1, 0.2], [1.0, 0.0]).is_err());
        assert!(InvasionTest::new(vec![1.0], [1.0, 0.0]).is_err());
    }

    #[test]
    fn fitness_pair_examples() {
        let f = pd_fn();
        // All-defector population: W(D) = P(D,D), W(C) = P(C,D).
        let (wd, wc) = fitness_pair(&f, [0.0, 0.0], [1.0, 0.0], 1.0).unwrap();
        assert!((wd - 1.0).abs() < 1e-12);
        assert!((wc - 0.0).abs() < 1e-12);
        // Zero frequency flips to the cross terms.
        let (wx, wy) = fitness_pair(&f, [0.0, 0.0], [1.0, 0.0], 0.0).unwrap();
        assert!((wx - 5.0).abs() < 1e-12);
        assert!((wy - 3.0).abs() < 1e-12);
        assert!(fitness_pair(&f, [0.0, 0.0], [1.0, 0.0], 1.5).is_err());
    }

    #[test]
    fn asymmetric_bos_pattern() {
        let fns =
            AsymmetricPayoffFns::from_bimatrix(Bimatrix2::battle_of_sexes(3.0, 2.0, 1.0).unwrap());
        for pure in [(0.0, 0.0), (1.0, 1.0)] {
            let report = check_asymmetric_ess(&fns, pure, 1e-2, &tol());
            assert!(report.is_ne && report.is_ess);
        }
        let mixed = (2.0 / 3.0, 1.0 / 3.0);
        let report = check_asymmetric_ess(&fns, mixed, 1e-2, &tol());
        assert!(report.is_ne);
        assert!(!report.is_ess);
    }

    #[test]
    fn strictness_implies_stability_on_interval() {
        // Any strict symmetric NE must come out stable: condition one alone.
        let f = pd_fn();
        let report = check_symmetric_ess(&f, [0.0, 0.0], 1e-2, &tol());
        assert!(report.is_strict);
        assert_eq!(report.ess_status, Some(EssStatus::Ess));
    }

    #[test]
    fn spin_flip_line_is_one_strategy() {
        // U(pi, phi) is the same matrix for every phi, so those grid points
        // must not count as mutants of the spin-flip. Without entanglement
        // the classical stable strategy therefore stays stable in the
        // two-parameter space.
        let space = Space::EwlRect;
        assert!(space.same_strategy([PI, 0.0], [PI, 0.3]));
        assert!(!space.same_strategy([PI - 0.1, 0.0], [PI, 0.0]));
        assert!(!Space::Interval.same_strategy([1.0, 0.0], [1.0, 0.3]));
        let cfg = EwlConfig::new(Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(), 0.0)
            .unwrap();
        let f = SymmetricPayoffFn::from_ewl(cfg);
        let report = check_symmetric_ess(&f, [PI, 0.0], 0.02, &tol());
        assert_eq!(report.ess_status, Some(EssStatus::Ess));
        assert!(matches!(
            ess_holds_against(&f, [PI, 0.0], [PI, 0.7], &tol()),
            Err(StabilityError::MutantEqualsCandidate)
        ));
    }

    #[test]
    fn refinement_does_not_flip_clear_verdicts() {
        let f = pd_fn();
        let coarse = check_symmetric_ess(&f, [0.0, 0.0], 2e-2, &tol());
        let fine = check_symmetric_ess(&f, [0.0, 0.0], 1e-2, &tol());
        assert_eq!(coarse.ess_status, fine.ess_status);
        let coarse = check_symmetric_ne(&f, [1.0, 0.0], 2e-2, &tol());
        let fine = check_symmetric_ne(&f, [1.0, 0.0], 1e-2, &tol());
        assert_eq!(coarse.is_ne, fine.is_ne);
    }
}
