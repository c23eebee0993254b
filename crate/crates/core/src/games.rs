//! Classical game specifications and classical mixed-strategy payoff
//! evaluation. All payoff constants used elsewhere in the crate live in the
//! types defined here.
//!
//! Convention: strategy index 0 is the first row/column (S1; "cooperate" in
//! dilemma-style games) and a mixed strategy `p` is the probability of
//! playing index 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("payoff entries must be finite")]
    NonFinite,
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("tactic probabilities p={0}, p1={1} must be nonnegative with p + p1 <= 1")]
    BadTacticPair(f64, f64),
    #[error("game does not carry the (r,s,t,u) role pattern")]
    MissingRolePattern,
    #[error("premium {0} outside (-1, 0]")]
    BadPremium(f64),
}

/// A 2x2 bimatrix game; `cells[i][j]` holds (row payoff, column payoff) when
/// the row player picks strategy i and the column player picks strategy j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bimatrix2 {
    pub cells: [[(f64, f64); 2]; 2],
}

impl Bimatrix2 {
    pub fn new(cells: [[(f64, f64); 2]; 2]) -> Result<Self, GameError> {
        for row in &cells {
            for &(a, b) in row {
                if !a.is_finite() || !b.is_finite() {
                    return Err(GameError::NonFinite);
                }
            }
        }
        Ok(Self { cells })
    }

    /// Dilemma-style role constants: diagonal (r,r) and (u,u), off-diagonal
    /// (s,t) and (t,s).
    pub fn from_roles(r: f64, s: f64, t: f64, u: f64) -> Result<Self, GameError> {
        Self::new([[(r, r), (s, t)], [(t, s), (u, u)]])
    }

    /// Recover (r,s,t,u) when the cell pattern allows it.
    pub fn roles(&self) -> Option<(f64, f64, f64, f64)> {
        let [[(r1, r2), (s, t)], [(t2, s2), (u1, u2)]] = self.cells;
        if r1 == r2 && u1 == u2 && s == s2 && t == t2 {
            Some((r1, s, t, u1))
        } else {
            None
        }
    }

    /// True for the dilemma ordering s < u < r < t.
    pub fn is_prisoners_dilemma(&self) -> bool {
        match self.roles() {
            Some((r, s, t, u)) => s < u && u < r && r < t,
            None => false,
        }
    }

    /// Battle-of-the-sexes shape [(alpha,beta),(gamma,gamma);(gamma,gamma),(beta,alpha)].
    pub fn battle_of_sexes(alpha: f64, beta: f64, gamma: f64) -> Result<Self, GameError> {
        Self::new([
            [(alpha, beta), (gamma, gamma)],
            [(gamma, gamma), (beta, alpha)],
        ])
    }

    /// Coefficients (alpha, beta, gamma, delta) when the game has the
    /// symmetric shape [(a,a),(b,g);(g,b),(d,d)].
    pub fn symmetric_coeffs(&self) -> Option<(f64, f64, f64, f64)> {
        let [[(a1, a2), (b, g)], [(g2, b2), (d1, d2)]] = self.cells;
        if a1 == a2 && d1 == d2 && b == b2 && g == g2 {
            Some((a1, b, g, d1))
        } else {
            None
        }
    }

    /// True when the column player's matrix is the transpose of the row
    /// player's, i.e. the game is symmetric.
    pub fn is_symmetric(&self) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.cells[i][j].1 == self.cells[j][i].0))
    }

    pub fn payoff_row(&self, i: usize, j: usize) -> f64 {
        self.cells[i][j].0
    }

    pub fn payoff_col(&self, i: usize, j: usize) -> f64 {
        self.cells[i][j].1
    }
}

/// A 3x3 two-player game: `alpha[i][j]` pays the row player, `beta[i][j]`
/// the column player, when the row player picks i and the column player j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix3x3Pair {
    pub alpha: [[f64; 3]; 3],
    pub beta: [[f64; 3]; 3],
}

impl Matrix3x3Pair {
    pub fn new(alpha: [[f64; 3]; 3], beta: [[f64; 3]; 3]) -> Result<Self, GameError> {
        let finite = |m: &[[f64; 3]; 3]| m.iter().flatten().all(|v| v.is_finite());
        if !finite(&alpha) || !finite(&beta) {
            return Err(GameError::NonFinite);
        }
        Ok(Self { alpha, beta })
    }

    /// Rock-Scissors-Paper with a draw premium epsilon in (-1, 0].
    pub fn rock_scissors_paper(epsilon: f64) -> Result<Self, GameError> {
        if !(epsilon > -1.0 && epsilon <= 0.0) {
            return Err(GameError::BadPremium(epsilon));
        }
        let alpha = [
            [-epsilon, 1.0, -1.0],
            [-1.0, -epsilon, 1.0],
            [1.0, -1.0, -epsilon],
        ];
        let mut beta = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                beta[i][j] = alpha[j][i];
            }
        }
        Self::new(alpha, beta)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.alpha[i][j] == self.beta[j][i]))
    }
}

/// The six payoff constants defining a symmetric three-player 2x2x2 game.
/// The derived combinations sigma, eta and omega are recomputed on demand,
/// never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePlayerSymmetricSpec {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha8: f64,
}

impl ThreePlayerSymmetricSpec {
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        alpha3: f64,
        alpha5: f64,
        alpha6: f64,
        alpha8: f64,
    ) -> Result<Self, GameError> {
        let spec = Self {
            alpha1,
            alpha2,
            alpha3,
            alpha5,
            alpha6,
            alpha8,
        };
        if [alpha1, alpha2, alpha3, alpha5, alpha6, alpha8]
            .iter()
            .all(|v| v.is_finite())
        {
            Ok(spec)
        } else {
            Err(GameError::NonFinite)
        }
    }

    /// Build a spec realizing given (sigma, eta, omega) differences, with the
    /// free baseline constants set to zero.
    pub fn from_differences(sigma: f64, eta: f64, omega: f64) -> Result<Self, GameError> {
        Self::new(sigma, 0.0, eta, omega, 0.0, 0.0)
    }

    pub fn sigma(&self) -> f64 {
        self.alpha1 - self.alpha2
    }

    pub fn eta(&self) -> f64 {
        self.alpha3 - self.alpha6
    }

    pub fn omega(&self) -> f64 {
        self.alpha5 - self.alpha8
    }
}

/// A probability of playing the first strategy (or, in the quantized setting,
/// the identity tactic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy1(f64);

impl MixedStrategy1 {
    pub fn new(p: f64) -> Result<Self, GameError> {
        if p.is_finite() && (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(GameError::BadProbability(p))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// A pair of tactic probabilities (p for the first permutation tactic, p1 for
/// the second); the identity gets the remainder 1 - p - p1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy2 {
    pub p: f64,
    pub p1: f64,
}

impl MixedStrategy2 {
    pub fn new(p: f64, p1: f64) -> Result<Self, GameError> {
        if p.is_finite() && p1.is_finite() && p >= 0.0 && p1 >= 0.0 && p + p1 <= 1.0 + 1e-12 {
            Ok(Self { p, p1 })
        } else {
            Err(GameError::BadTacticPair(p, p1))
        }
    }

    /// (identity, first tactic, second tactic) probabilities.
    pub fn weights(&self) -> [f64; 3] {
        [1.0 - self.p - self.p1, self.p, self.p1]
    }
}

/// Expected payoffs when the row player plays strategy 0 with probability p
/// and the column player with probability q.
pub fn mixed_payoff_bimatrix(g: &Bimatrix2, p: MixedStrategy1, q: MixedStrategy1) -> (f64, f64) {
    let (p, q) = (p.value(), q.value());
    let w = [[p * q, p * (1.0 - q)], [(1.0 - p) * q, (1.0 - p) * (1.0 - q)]];
    let mut pa = 0.0;
    let mut pb = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            pa += w[i][j] * g.cells[i][j].0;
            pb += w[i][j] * g.cells[i][j].1;
        }
    }
    (pa, pb)
}

/// Expected payoffs for a 3x3 game under mixed strategies given as
/// probability vectors over the three strategies.
pub fn mixed_payoff_3x3(g: &Matrix3x3Pair, wa: &[f64; 3], wb: &[f64; 3]) -> (f64, f64) {
    let mut pa = 0.0;
    let mut pb = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let w = wa[i] * wb[j];
            pa += w * g.alpha[i][j];
            pb += w * g.beta[i][j];
        }
    }
    (pa, pb)
}

/// Candidate Nash equilibria of a 2x2 bimatrix game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibria2x2 {
    /// (p, q) pairs, p = row player's probability of strategy 0.
    pub equilibria: Vec<(f64, f64)>,
    /// Set when an indifference denominator was too small to solve.
    pub degenerate: bool,
}

const NE_TOL: f64 = 1e-9;
const DEGENERACY_TOL: f64 = 1e-9;
const SCAN_STEP: f64 = 1e-3;

fn best_response_verified(g: &Bimatrix2, p: f64, q: f64) -> bool {
    let here = mixed_payoff_bimatrix(
        g,
        MixedStrategy1::new(p).unwrap(),
        MixedStrategy1::new(q).unwrap(),
    );
    let n = (1.0 / SCAN_STEP) as usize;
    for k in 0..=n {
        let x = k as f64 * SCAN_STEP;
        let dev_a = mixed_payoff_bimatrix(
            g,
            MixedStrategy1::new(x).unwrap(),
            MixedStrategy1::new(q).unwrap(),
        )
        .0;
        if dev_a > here.0 + NE_TOL {
            return false;
        }
        let dev_b = mixed_payoff_bimatrix(
            g,
            MixedStrategy1::new(p).unwrap(),
            MixedStrategy1::new(x).unwrap(),
        )
        .1;
        if dev_b > here.1 + NE_TOL {
            return false;
        }
    }
    true
}

/// All pure-pair Nash equilibria plus the interior mixed equilibrium when one
/// exists. The interior point is solved from the indifference conditions in
/// closed form and then re-verified against a deviation grid; games whose
/// indifference denominator vanishes are flagged degenerate and yield pure
/// candidates only.
pub fn classical_equilibria_2x2(g: &Bimatrix2) -> Equilibria2x2 {
    let mut equilibria = Vec::new();
    // Pure pairs: strategy index i maps to p = 1 - i.
    for i in 0..2usize {
        for j in 0..2usize {
            let a_ok = g.payoff_row(i, j) >= g.payoff_row(1 - i, j) - NE_TOL;
            let b_ok = g.payoff_col(i, j) >= g.payoff_col(i, 1 - j) - NE_TOL;
            if a_ok && b_ok {
                equilibria.push(((1 - i) as f64, (1 - j) as f64));
            }
        }
    }
    // Interior mixed point: the row player is indifferent at q*, the column
    // player at p*.
    let a = &g.cells;
    let denom_a = a[0][0].0 - a[0][1].0 - a[1][0].0 + a[1][1].0;
    let denom_b = a[0][0].1 - a[0][1].1 - a[1][0].1 + a[1][1].1;
    let mut degenerate = false;
    if denom_a.abs() < DEGENERACY_TOL || denom_b.abs() < DEGENERACY_TOL {
        degenerate = true;
    } else {
        let q_star = (a[1][1].0 - a[0][1].0) / denom_a;
        let p_star = (a[1][1].1 - a[1][0].1) / denom_b;
        let interior = |x: f64| x > NE_TOL && x < 1.0 - NE_TOL;
        if interior(p_star) && interior(q_star) && best_response_verified(g, p_star, q_star) {
            equilibria.push((p_star, q_star));
        }
    }
    Equilibria2x2 {
        equilibria,
        degenerate,
    }
}
