//! MW-style quantization: players mix local permutation tactics over a shared
//! pure initial state, with no disentangling gate before measurement.
//!
//! Three carriers are supported: two qubits with tactics {I, sigma_x} for 2x2
//! games, three qubits for symmetric 2x2x2 games, and two qutrits with
//! tactics {I, C, D} for 3x3 games (C swaps levels 1 and 3, D swaps 1 and 2).

use crate::games::{
    Bimatrix2, Matrix3x3Pair, MixedStrategy1, MixedStrategy2, ThreePlayerSymmetricSpec,
};
use crate::qmat::{DensityMatrix, QmatError, StateVector, UnitaryMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MwError {
    #[error("initial-state coefficients must satisfy |a|^2 + |b|^2 = 1 (defect {0:.3e})")]
    NotNormalized(f64),
    #[error("operation requires the diagonal pairing a|S1S1> + b|S2S2>")]
    RequiresDiagonalPairing,
    #[error("operation requires a symmetric game shape")]
    RequiresSymmetricGame,
    #[error("operation requires |c_ij|^2 = |c_ji|^2 (symmetric play)")]
    RequiresSymmetricPlay,
    #[error(transparent)]
    Qmat(#[from] QmatError),
}

/// Which basis pair carries the two-qubit initial superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pairing {
    /// a|S1S1> + b|S2S2>
    Diagonal,
    /// a|S1S2> + b|S2S1>
    Anti,
}

/// Two-qubit initial state a|xy> + b|x'y'> with |a|^2 + |b|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitState2 {
    pub a: Complex64,
    pub b: Complex64,
    pub pairing: Pairing,
}

impl InitState2 {
    pub fn new(a: Complex64, b: Complex64, pairing: Pairing) -> Result<Self, MwError> {
        let defect = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if defect >= 1e-12 {
            return Err(MwError::NotNormalized(defect));
        }
        Ok(Self { a, b, pairing })
    }

    /// Diagonal state from |b|^2 alone, with real nonnegative coefficients.
    pub fn diagonal_from_bsq(bsq: f64) -> Result<Self, MwError> {
        let bsq = bsq.clamp(0.0, 1.0);
        Self::new(
            Complex64::new((1.0 - bsq).sqrt(), 0.0),
            Complex64::new(bsq.sqrt(), 0.0),
            Pairing::Diagonal,
        )
    }

    pub fn anti_from_bsq(bsq: f64) -> Result<Self, MwError> {
        let bsq = bsq.clamp(0.0, 1.0);
        Self::new(
            Complex64::new((1.0 - bsq).sqrt(), 0.0),
            Complex64::new(bsq.sqrt(), 0.0),
            Pairing::Anti,
        )
    }

    pub fn state_vector(&self) -> StateVector {
        let mut amps = vec![Complex64::ZERO; 4];
        match self.pairing {
            Pairing::Diagonal => {
                amps[0] = self.a;
                amps[3] = self.b;
            }
            Pairing::Anti => {
                amps[1] = self.a;
                amps[2] = self.b;
            }
        }
        StateVector::new(amps).expect("normalized by construction")
    }
}

/// Three-qubit initial state a|S1S1S1> + b|S2S2S2>.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitState3 {
    pub a: Complex64,
    pub b: Complex64,
}

impl InitState3 {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, MwError> {
        let defect = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if defect >= 1e-12 {
            return Err(MwError::NotNormalized(defect));
        }
        Ok(Self { a, b })
    }

    pub fn from_bsq(bsq: f64) -> Result<Self, MwError> {
        let bsq = bsq.clamp(0.0, 1.0);
        Self::new(
            Complex64::new((1.0 - bsq).sqrt(), 0.0),
            Complex64::new(bsq.sqrt(), 0.0),
        )
    }

    pub fn state_vector(&self) -> StateVector {
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0] = self.a;
        amps[7] = self.b;
        StateVector::new(amps).expect("normalized by construction")
    }
}

/// Two-qutrit initial state sum_ij c_ij |ij> with sum |c_ij|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritInitState {
    pub c: [[Complex64; 3]; 3],
}

impl QutritInitState {
    pub fn new(c: [[Complex64; 3]; 3]) -> Result<Self, MwError> {
        let total: f64 = c.iter().flatten().map(|z| z.norm_sqr()).sum();
        let defect = (total - 1.0).abs();
        if defect >= 1e-12 {
            return Err(MwError::NotNormalized(defect));
        }
        Ok(Self { c })
    }

    /// The product state |11>, which reproduces the classical game.
    pub fn classical() -> Self {
        let mut c = [[Complex64::ZERO; 3]; 3];
        c[0][0] = Complex64::ONE;
        Self::new(c).unwrap()
    }

    /// The entangled state (|12> + |21> + |13> + |31>)/2.
    pub fn entangled_off_diagonal() -> Self {
        let mut c = [[Complex64::ZERO; 3]; 3];
        let h = Complex64::new(0.5, 0.0);
        c[0][1] = h;
        c[1][0] = h;
        c[0][2] = h;
        c[2][0] = h;
        Self::new(c).unwrap()
    }

    pub fn moduli_squared(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.c[i][j].norm_sqr();
            }
        }
        m
    }

    /// True when |c_ij|^2 = |c_ji|^2 for all i, j, which together with a
    /// symmetric game makes the quantized game symmetric.
    pub fn is_symmetric_play(&self) -> bool {
        let m = self.moduli_squared();
        (0..3).all(|i| (0..3).all(|j| (m[i][j] - m[j][i]).abs() < 1e-12))
    }

    pub fn state_vector(&self) -> StateVector {
        let mut amps = vec![Complex64::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                amps[3 * i + j] = self.c[i][j];
            }
        }
        StateVector::new(amps).expect("normalized by construction")
    }
}

fn identity2() -> UnitaryMatrix {
    UnitaryMatrix::identity(2).unwrap()
}

fn sigma_x() -> UnitaryMatrix {
    UnitaryMatrix::new(
        2,
        vec![
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ],
    )
    .unwrap()
}

fn qutrit_permutation(perm: [usize; 3]) -> UnitaryMatrix {
    let mut entries = vec![Complex64::ZERO; 9];
    for (col, &row) in perm.iter().enumerate() {
        entries[row * 3 + col] = Complex64::ONE;
    }
    UnitaryMatrix::new(3, entries).unwrap()
}

/// Qutrit tactic C: swaps levels 1 and 3, fixes 2. Hermitian and self-inverse.
pub fn qutrit_c() -> UnitaryMatrix {
    qutrit_permutation([2, 1, 0])
}

/// Qutrit tactic D: swaps levels 1 and 2, fixes 3. Hermitian and self-inverse.
pub fn qutrit_d() -> UnitaryMatrix {
    qutrit_permutation([1, 0, 2])
}

fn payoff_weights_2(g: &Bimatrix2) -> ([f64; 4], [f64; 4]) {
    let mut wa = [0.0; 4];
    let mut wb = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            wa[2 * i + j] = g.cells[i][j].0;
            wb[2 * i + j] = g.cells[i][j].1;
        }
    }
    (wa, wb)
}

/// Final two-qubit state after both players mix identity (probability p, q)
/// with the spin flip.
pub fn mw_final_state_2(init: &InitState2, p: MixedStrategy1, q: MixedStrategy1) -> DensityMatrix {
    let rho_in = init.state_vector().to_density();
    let (p, q) = (p.value(), q.value());
    let i2 = identity2();
    let sx = sigma_x();
    let ops = [
        (p * q, i2.tensor(&i2).unwrap()),
        (p * (1.0 - q), i2.tensor(&sx).unwrap()),
        ((1.0 - p) * q, sx.tensor(&i2).unwrap()),
        ((1.0 - p) * (1.0 - q), sx.tensor(&sx).unwrap()),
    ];
    let parts: Vec<(f64, DensityMatrix)> = ops
        .iter()
        .map(|(w, u)| (*w, rho_in.evolve(u).expect("matching dims")))
        .collect();
    DensityMatrix::mix(&parts).expect("tactic weights are convex")
}

/// Expected payoffs Tr[(P_A) rho_fin], Tr[(P_B) rho_fin] for the two-qubit
/// scheme.
pub fn mw_payoffs_2(
    g: &Bimatrix2,
    init: &InitState2,
    p: MixedStrategy1,
    q: MixedStrategy1,
) -> (f64, f64) {
    let rho = mw_final_state_2(init, p, q);
    let (wa, wb) = payoff_weights_2(g);
    (rho.expectation_diag(&wa), rho.expectation_diag(&wb))
}

/// The 2x2 bimatrix over pure tactics (index 0 = identity, 1 = flip) induced
/// by a game and an initial state. Replicator dynamics and equilibrium scans
/// for quantized 2x2 games run on this matrix.
pub fn mw2_effective_bimatrix(g: &Bimatrix2, init: &InitState2) -> Bimatrix2 {
    let pr = |v: f64| MixedStrategy1::new(v).unwrap();
    let mut cells = [[(0.0, 0.0); 2]; 2];
    for (i, p) in [1.0, 0.0].iter().enumerate() {
        for (j, q) in [1.0, 0.0].iter().enumerate() {
            cells[i][j] = mw_payoffs_2(g, init, pr(*p), pr(*q));
        }
    }
    Bimatrix2::new(cells).expect("payoffs are finite")
}

/// Candidate symmetric Nash equilibria for a symmetric 2x2 game played over
/// the diagonal initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MwNeCandidates {
    /// Always contains the pure strategies 0 and 1; the interior mixed point
    /// is appended when it lands in (0, 1).
    pub candidates: Vec<f64>,
    /// The mixed solution when it exists but falls outside [0, 1]; reported
    /// rather than returned as a candidate.
    pub clamped_mixed: Option<f64>,
    /// Set when the mixed-point denominator vanishes.
    pub zero_denominator: bool,
}

/// Closed-form candidate set {0, 1, p*} with
/// p* = (|a|^2 (beta-delta) + |b|^2 (gamma-alpha)) / ((beta-delta) + (gamma-alpha)).
pub fn mw_symmetric_ne_closed(
    g: &Bimatrix2,
    init: &InitState2,
) -> Result<MwNeCandidates, MwError> {
    let (alpha, beta, gamma, delta) = g
        .symmetric_coeffs()
        .ok_or(MwError::RequiresSymmetricGame)?;
    if init.pairing != Pairing::Diagonal {
        return Err(MwError::RequiresDiagonalPairing);
    }
    let asq = init.a.norm_sqr();
    let bsq = init.b.norm_sqr();
    let denom = (beta - delta) + (gamma - alpha);
    let mut out = MwNeCandidates {
        candidates: vec![0.0, 1.0],
        clamped_mixed: None,
        zero_denominator: false,
    };
    if denom.abs() < 1e-9 {
        out.zero_denominator = true;
        return Ok(out);
    }
    let p_star = (asq * (beta - delta) + bsq * (gamma - alpha)) / denom;
    if (0.0..=1.0).contains(&p_star) {
        out.candidates.push(p_star);
    } else {
        out.clamped_mixed = Some(p_star);
    }
    Ok(out)
}

/// Payoff constants by (own strategy, number of opponents playing S2).
fn three_player_weight(spec: &ThreePlayerSymmetricSpec, own: usize, opp_twos: usize) -> f64 {
    match (own, opp_twos) {
        (0, 0) => spec.alpha1,
        (0, 1) => spec.alpha3,
        (0, 2) => spec.alpha5,
        (1, 0) => spec.alpha2,
        (1, 1) => spec.alpha6,
        (1, 2) => spec.alpha8,
        _ => unreachable!("binary strategies, at most two opponents"),
    }
}

/// Final three-qubit state after the players apply the identity with
/// probabilities p, q, r.
pub fn mw_final_state_3(
    init: &InitState3,
    p: MixedStrategy1,
    q: MixedStrategy1,
    r: MixedStrategy1,
) -> DensityMatrix {
    let rho_in = init.state_vector().to_density();
    let i2 = identity2();
    let sx = sigma_x();
    let probs = [p.value(), q.value(), r.value()];
    let mut parts = Vec::with_capacity(8);
    for flips in 0..8usize {
        let mut weight = 1.0;
        let mut op: Option<UnitaryMatrix> = None;
        for player in 0..3 {
            let flipped = (flips >> (2 - player)) & 1 == 1;
            weight *= if flipped {
                1.0 - probs[player]
            } else {
                probs[player]
            };
            let local = if flipped { sx.clone() } else { i2.clone() };
            op = Some(match op {
                None => local,
                Some(acc) => acc.tensor(&local).expect("within dimension scope"),
            });
        }
        parts.push((weight, rho_in.evolve(&op.unwrap()).expect("matching dims")));
    }
    DensityMatrix::mix(&parts).expect("tactic weights are convex")
}

/// Expected payoffs (P_A, P_B, P_C) for the symmetric three-player scheme.
/// The payoff operators are identity-independent: each player's constants
/// depend only on their own move and how many opponents play S2.
pub fn mw_payoffs_3(
    spec: &ThreePlayerSymmetricSpec,
    init: &InitState3,
    p: MixedStrategy1,
    q: MixedStrategy1,
    r: MixedStrategy1,
) -> (f64, f64, f64) {
    let rho = mw_final_state_3(init, p, q, r);
    let mut wa = [0.0; 8];
    let mut wb = [0.0; 8];
    let mut wc = [0.0; 8];
    for idx in 0..8usize {
        let a = (idx >> 2) & 1;
        let b = (idx >> 1) & 1;
        let c = idx & 1;
        wa[idx] = three_player_weight(spec, a, b + c);
        wb[idx] = three_player_weight(spec, b, a + c);
        wc[idx] = three_player_weight(spec, c, a + b);
    }
    (
        rho.expectation_diag(&wa),
        rho.expectation_diag(&wb),
        rho.expectation_diag(&wc),
    )
}

/// Coefficients (quadratic, linear, constant) of the symmetric-point payoff
/// gradient g(p) = d P_A / d p at p = q = r; its roots are the mixed NE.
pub fn three_player_ne_polynomial(spec: &ThreePlayerSymmetricSpec, bsq: f64) -> (f64, f64, f64) {
    let sigma = spec.sigma();
    let eta = spec.eta();
    let omega = spec.omega();
    let a2 = (1.0 - 2.0 * bsq) * (sigma + omega - 2.0 * eta);
    let a1 = 2.0 * (bsq * (sigma + omega - 2.0 * eta) - omega + eta);
    let a0 = omega - bsq * (sigma + omega);
    (a2, a1, a0)
}

/// Mixed symmetric NE of the three-player game at a given |b|^2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreePlayerNeRoots {
    /// Real roots of the gradient polynomial inside [0, 1].
    pub roots: Vec<f64>,
    /// (sigma+omega)^2 - (2 eta)^2 times |b|^2 (1-|b|^2), plus eta^2 - sigma omega.
    pub discriminant: f64,
    /// Set when the quadratic degenerated and a linear solve was used.
    pub linear_fallback: bool,
    /// Set when every strategy solves the stationarity condition.
    pub indeterminate: bool,
}

/// Solve the quadratic stationarity condition for interior NE, with a linear
/// fallback when the leading coefficient vanishes (|b|^2 = 1/2 or
/// sigma + omega = 2 eta).
pub fn three_player_mixed_ne(spec: &ThreePlayerSymmetricSpec, bsq: f64) -> ThreePlayerNeRoots {
    assert!((0.0..=1.0).contains(&bsq), "|b|^2 must lie in [0, 1]");
    let sigma = spec.sigma();
    let eta = spec.eta();
    let omega = spec.omega();
    let (a2, a1, a0) = three_player_ne_polynomial(spec, bsq);
    let discriminant = ((sigma + omega).powi(2) - (2.0 * eta).powi(2)) * bsq * (1.0 - bsq)
        + (eta * eta - sigma * omega);
    let scale = a2.abs().max(a1.abs()).max(a0.abs()).max(1.0);
    let in_range = |x: f64| -> Option<f64> {
        if x.is_finite() && (-1e-9..=1.0 + 1e-9).contains(&x) {
            Some(x.clamp(0.0, 1.0))
        } else {
            None
        }
    };
    let mut out = ThreePlayerNeRoots {
        roots: Vec::new(),
        discriminant,
        linear_fallback: false,
        indeterminate: false,
    };
    if a2.abs() < 1e-12 * scale {
        out.linear_fallback = true;
        if a1.abs() < 1e-12 * scale {
            // Constant gradient: either no interior solution or all of [0, 1].
            if a0.abs() < 1e-12 * scale {
                out.indeterminate = true;
            }
            return out;
        }
        if let Some(x) = in_range(-a0 / a1) {
            out.roots.push(x);
        }
        return out;
    }
    if discriminant < 0.0 {
        return out;
    }
    let sq = discriminant.sqrt();
    // Citardauq-style split keeps both roots accurate when a1 dominates.
    let q_stable = if a1 >= 0.0 {
        -(a1 / 2.0 + sq)
    } else {
        -(a1 / 2.0 - sq)
    };
    let mut roots: Vec<f64> = Vec::new();
    if q_stable.abs() > 0.0 {
        roots.push(q_stable / a2);
        roots.push(a0 / q_stable);
    } else {
        roots.push(0.0);
        roots.push(-a1 / a2);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    out.roots = roots.into_iter().filter_map(in_range).collect();
    out
}

/// Probability layout of the nine joint tactic draws, identity first:
/// index 3 * (column player's tactic) + (row player's tactic).
fn rsp_joint_probabilities(sa: &MixedStrategy2, sb: &MixedStrategy2) -> [f64; 9] {
    let wa = sa.weights();
    let wb = sb.weights();
    let mut phi = [0.0; 9];
    for (bi, wb_i) in wb.iter().enumerate() {
        for (ai, wa_i) in wa.iter().enumerate() {
            phi[3 * bi + ai] = wa_i * wb_i;
        }
    }
    phi
}

fn qutrit_tactics() -> [UnitaryMatrix; 3] {
    [UnitaryMatrix::identity(3).unwrap(), qutrit_c(), qutrit_d()]
}

/// Index permutations of the three qutrit tactics (identity, C, D).
const QUTRIT_PERMS: [[usize; 3]; 3] = [[0, 1, 2], [2, 1, 0], [1, 0, 2]];

/// Final two-qutrit state under the nine-term tactic mixture.
pub fn rsp_final_state(
    init: &QutritInitState,
    sa: &MixedStrategy2,
    sb: &MixedStrategy2,
) -> DensityMatrix {
    let rho_in = init.state_vector().to_density();
    let tactics = qutrit_tactics();
    let phi = rsp_joint_probabilities(sa, sb);
    let mut parts = Vec::with_capacity(9);
    for bi in 0..3 {
        for ai in 0..3 {
            let u = tactics[ai].tensor(&tactics[bi]).expect("3x3 operands");
            parts.push((phi[3 * bi + ai], rho_in.evolve(&u).expect("matching dims")));
        }
    }
    DensityMatrix::mix(&parts).expect("tactic weights are convex")
}

/// Trace-path payoffs (P_A, P_B) for the quantized 3x3 game. This is the
/// source of truth; the factorized path below must agree with it.
pub fn rsp_payoffs(
    g: &Matrix3x3Pair,
    init: &QutritInitState,
    sa: &MixedStrategy2,
    sb: &MixedStrategy2,
) -> (f64, f64) {
    let rho = rsp_final_state(init, sa, sb);
    let mut wa = [0.0; 9];
    let mut wb = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            wa[3 * i + j] = g.alpha[i][j];
            wb[3 * i + j] = g.beta[i][j];
        }
    }
    (rho.expectation_diag(&wa), rho.expectation_diag(&wb))
}

/// The factorized form of the row player's payoff: a probability vector over
/// joint tactics, a 9x9 matrix of permuted initial-state moduli, and the
/// payoff constants.
#[derive(Debug, Clone, PartialEq)]
pub struct RspPayoffFactors {
    pub phi: [f64; 9],
    pub omega: [[f64; 9]; 9],
    pub upsilon: [f64; 9],
}

impl RspPayoffFactors {
    /// phi . (omega . upsilon^T)
    pub fn payoff(&self) -> f64 {
        let mut total = 0.0;
        for k in 0..9 {
            let mut row = 0.0;
            for l in 0..9 {
                row += self.omega[k][l] * self.upsilon[l];
            }
            total += self.phi[k] * row;
        }
        total
    }

    /// Structural invariants: phi is a probability vector and every omega row
    /// is a permutation of the nine initial-state moduli (hence sums to 1).
    pub fn validate(&self) -> bool {
        let phi_ok = self.phi.iter().all(|p| *p >= -1e-12)
            && (self.phi.iter().sum::<f64>() - 1.0).abs() < 1e-9;
        let mut base: Vec<f64> = self.omega[0].to_vec();
        base.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let rows_ok = self.omega.iter().all(|row| {
            let mut sorted = row.to_vec();
            sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let perm = sorted
                .iter()
                .zip(&base)
                .all(|(x, y)| (x - y).abs() < 1e-12);
            perm && (row.iter().sum::<f64>() - 1.0).abs() < 1e-9
        });
        phi_ok && rows_ok
    }
}

/// Build the factorized payoff for the row player. Row k of omega (joint
/// tactic k = 3*b + a) holds m[perm_a(i)][perm_b(j)] at slot 3*i + j.
pub fn rsp_payoff_factors(
    g: &Matrix3x3Pair,
    init: &QutritInitState,
    sa: &MixedStrategy2,
    sb: &MixedStrategy2,
) -> RspPayoffFactors {
    let m = init.moduli_squared();
    let phi = rsp_joint_probabilities(sa, sb);
    let mut omega = [[0.0; 9]; 9];
    for bi in 0..3 {
        for ai in 0..3 {
            let row = 3 * bi + ai;
            let pa = QUTRIT_PERMS[ai];
            let pb = QUTRIT_PERMS[bi];
            for i in 0..3 {
                for j in 0..3 {
                    omega[row][3 * i + j] = m[pa[i]][pb[j]];
                }
            }
        }
    }
    let mut upsilon = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            upsilon[3 * i + j] = g.alpha[i][j];
        }
    }
    RspPayoffFactors { phi, omega, upsilon }
}

/// Differences of initial-state moduli entering the stationarity gradients.
fn rsp_deltas(m: &[[f64; 3]; 3]) -> ([f64; 3], [f64; 3]) {
    let d = [
        m[0][0] - m[2][0], // |c11|^2 - |c31|^2
        m[0][2] - m[2][2], // |c13|^2 - |c33|^2
        m[0][1] - m[2][1], // |c12|^2 - |c32|^2
    ];
    let dp = [
        m[1][0] - m[0][0], // |c21|^2 - |c11|^2
        m[1][1] - m[0][1], // |c22|^2 - |c12|^2
        m[1][2] - m[0][2], // |c23|^2 - |c13|^2
    ];
    (d, dp)
}

/// Gradient (dP/dp, dP/dp1) of the row player's payoff at the symmetric point
/// p = q, p1 = q1. Requires symmetric play (|c_ij|^2 = |c_ji|^2); both partial
/// derivatives vanish exactly at a mixed NE.
pub fn rsp_gradients(
    g: &Matrix3x3Pair,
    init: &QutritInitState,
    at: &MixedStrategy2,
) -> Result<(f64, f64), MwError> {
    if !init.is_symmetric_play() {
        return Err(MwError::RequiresSymmetricPlay);
    }
    let a = &g.alpha;
    let m = init.moduli_squared();
    let (d, dp) = rsp_deltas(&m);
    let (p, p1) = (at.p, at.p1);
    let grad_p = p * (d[0] - d[1]) * ((a[0][0] + a[2][2]) - (a[0][2] + a[2][0]))
        + p1 * (d[0] - d[2]) * ((a[0][0] + a[2][1]) - (a[0][1] + a[2][0]))
        - d[0] * (a[0][0] - a[2][0])
        - d[1] * (a[0][2] - a[2][2])
        - d[2] * (a[0][1] - a[2][1]);
    let grad_p1 = p * (dp[2] - dp[0]) * ((a[0][0] + a[1][2]) - (a[0][2] + a[1][0]))
        + p1 * (dp[1] - dp[0]) * ((a[0][0] + a[1][1]) - (a[0][1] + a[1][0]))
        + dp[0] * (a[0][0] - a[1][0])
        + dp[1] * (a[0][1] - a[1][1])
        + dp[2] * (a[0][2] - a[1][2]);
    Ok((grad_p, grad_p1))
}

/// The 3x3 bimatrix over pure tactics (identity, C, D) induced by a game and
/// an initial state; the carrier for replicator dynamics of quantized RSP.
pub fn rsp_effective_matrix(g: &Matrix3x3Pair, init: &QutritInitState) -> Matrix3x3Pair {
    let pure = [
        MixedStrategy2::new(0.0, 0.0).unwrap(),
        MixedStrategy2::new(1.0, 0.0).unwrap(),
        MixedStrategy2::new(0.0, 1.0).unwrap(),
    ];
    let mut alpha = [[0.0; 3]; 3];
    let mut beta = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (pa, pb) = rsp_payoffs(g, init, &pure[i], &pure[j]);
            alpha[i][j] = pa;
            beta[i][j] = pb;
        }
    }
    Matrix3x3Pair::new(alpha, beta).expect("payoffs are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{mixed_payoff_3x3, mixed_payoff_bimatrix};

    fn pr(v: f64) -> MixedStrategy1 {
        MixedStrategy1::new(v).unwrap()
    }

    fn tac(p: f64, p1: f64) -> MixedStrategy2 {
        MixedStrategy2::new(p, p1).unwrap()
    }

    #[test]
    fn qutrit_tactics_are_hermitian_and_self_inverse() {
        for u in [qutrit_c(), qutrit_d()] {
            assert_eq!(u, u.dagger());
            assert_eq!(
                u.mul(&u).unwrap(),
                UnitaryMatrix::identity(3).unwrap()
            );
        }
        // Action table: C maps level 1 to 3, D maps level 1 to 2.
        let e1 = StateVector::basis(3, 0).unwrap();
        assert_eq!(qutrit_c().apply(&e1).unwrap().probability(2), 1.0);
        assert_eq!(qutrit_d().apply(&e1).unwrap().probability(1), 1.0);
    }

    #[test]
    fn classical_corners_match_cells() {
        let g = Bimatrix2::new([[(7.0, 1.0), (0.0, 2.0)], [(4.0, 4.0), (1.0, 9.0)]]).unwrap();
        let init = InitState2::diagonal_from_bsq(0.0).unwrap();
        for (p, q, i, j) in [
            (1.0, 1.0, 0usize, 0usize),
            (1.0, 0.0, 0, 1),
            (0.0, 1.0, 1, 0),
            (0.0, 0.0, 1, 1),
        ] {
            let got = mw_payoffs_2(&g, &init, pr(p), pr(q));
            assert!((got.0 - g.cells[i][j].0).abs() < 1e-12);
            assert!((got.1 - g.cells[i][j].1).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_embedding_matches_mixed_payoffs() {
        let g = Bimatrix2::battle_of_sexes(3.0, 2.0, 1.0).unwrap();
        let init = InitState2::diagonal_from_bsq(0.0).unwrap();
        for kp in 0..=10 {
            for kq in 0..=10 {
                let (p, q) = (kp as f64 / 10.0, kq as f64 / 10.0);
                let quantum = mw_payoffs_2(&g, &init, pr(p), pr(q));
                let classical = mixed_payoff_bimatrix(&g, pr(p), pr(q));
                assert!((quantum.0 - classical.0).abs() < 1e-12);
                assert!((quantum.1 - classical.1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn anti_state_interior_stationarity() {
        // Unique interior NE of the anti-paired battle of the sexes: both
        // players' payoffs must be flat in their own tactic there. Direct
        // evaluation puts the stationary point at
        // p* = q* = (alpha |a|^2 + beta |b|^2 - gamma)/(alpha + beta - 2 gamma).
        let (alpha, beta, gamma) = (3.0, 2.0, 1.0);
        let g = Bimatrix2::battle_of_sexes(alpha, beta, gamma).unwrap();
        for bsq in [0.0, 0.3, 0.5, 0.9] {
            let init = InitState2::anti_from_bsq(bsq).unwrap();
            let asq = 1.0 - bsq;
            let denom = alpha + beta - 2.0 * gamma;
            let p_star = (alpha * asq + beta * bsq - gamma) / denom;
            let q_star = p_star;
            let here = mw_payoffs_2(&g, &init, pr(p_star), pr(q_star));
            for dev in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let da = mw_payoffs_2(&g, &init, pr(dev), pr(q_star)).0;
                let db = mw_payoffs_2(&g, &init, pr(p_star), pr(dev)).1;
                assert!((da - here.0).abs() < 1e-12, "row deviation at bsq={bsq}");
                assert!((db - here.1).abs() < 1e-12, "col deviation at bsq={bsq}");
            }
        }
    }

    #[test]
    fn asymmetric_game_example_flat_side() {
        // At |b|^2 = 1/2 the column player's payoff difference at (0,0)
        // vanishes identically.
        let g = Bimatrix2::new([[(1.0, 1.0), (1.0, 2.0)], [(2.0, 1.0), (3.0, 2.0)]]).unwrap();
        let init = InitState2::diagonal_from_bsq(0.5).unwrap();
        let base = mw_payoffs_2(&g, &init, pr(0.0), pr(0.0)).1;
        for kq in 0..=20 {
            let q = kq as f64 / 20.0;
            let dev = mw_payoffs_2(&g, &init, pr(0.0), pr(q)).1;
            assert!((dev - base).abs() < 1e-12);
        }
    }

    #[test]
    fn phases_do_not_affect_payoffs() {
        let g = Bimatrix2::battle_of_sexes(3.0, 2.0, 1.0).unwrap();
        let bare = InitState2::diagonal_from_bsq(0.4).unwrap();
        let phased = InitState2::new(
            Complex64::from_polar(0.6f64.sqrt(), 1.1),
            Complex64::from_polar(0.4f64.sqrt(), -2.3),
            Pairing::Diagonal,
        )
        .unwrap();
        for kp in 0..=5 {
            for kq in 0..=5 {
                let (p, q) = (kp as f64 / 5.0, kq as f64 / 5.0);
                let x = mw_payoffs_2(&g, &bare, pr(p), pr(q));
                let y = mw_payoffs_2(&g, &phased, pr(p), pr(q));
                assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_closed_form_candidates() {
        // alpha=1, beta=0, gamma=2, delta=3 at |a|^2 = 1 puts the mixed point
        // at 1.5, outside the strategy range.
        let g = Bimatrix2::new([[(1.0, 1.0), (0.0, 2.0)], [(2.0, 0.0), (3.0, 3.0)]]).unwrap();
        let init = InitState2::diagonal_from_bsq(0.0).unwrap();
        let cands = mw_symmetric_ne_closed(&g, &init).unwrap();
        assert_eq!(cands.candidates, vec![0.0, 1.0]);
        assert!((cands.clamped_mixed.unwrap() - 1.5).abs() < 1e-12);
        assert!(!cands.zero_denominator);
    }

    #[test]
    fn symmetric_mixed_point_flattens_payoff() {
        let g = Bimatrix2::new([[(1.0, 1.0), (0.0, 2.0)], [(2.0, 0.0), (3.0, 3.0)]]).unwrap();
        // beta-delta = -3, gamma-alpha = 1; |b|^2 = 0.4 puts the mixed point
        // inside (0, 1).
        let init = InitState2::diagonal_from_bsq(0.4).unwrap();
        let cands = mw_symmetric_ne_closed(&g, &init).unwrap();
        let p_star = *cands.candidates.last().unwrap();
        assert!(p_star > 0.0 && p_star < 1.0);
        let here = mw_payoffs_2(&g, &init, pr(p_star), pr(p_star)).0;
        for kp in 0..=20 {
            let p = kp as f64 / 20.0;
            let dev = mw_payoffs_2(&g, &init, pr(p), pr(p_star)).0;
            assert!((dev - here).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_diagonal_class_keeps_pure_ne() {
        // gamma = alpha with beta - delta < 0: both pure strategies stay NE
        // for every |b|^2.
        let g = Bimatrix2::new([[(1.0, 1.0), (0.0, 1.0)], [(1.0, 0.0), (2.0, 2.0)]]).unwrap();
        for bsq in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let init = InitState2::diagonal_from_bsq(bsq).unwrap();
            for cand in [0.0, 1.0] {
                let here = mw_payoffs_2(&g, &init, pr(cand), pr(cand)).0;
                for kp in 0..=10 {
                    let p = kp as f64 / 10.0;
                    let dev = mw_payoffs_2(&g, &init, pr(p), pr(cand)).0;
                    assert!(dev <= here + 1e-12, "bsq={bsq} cand={cand} p={p}");
                }
            }
        }
    }

    #[test]
    fn three_player_classical_corner() {
        let spec = ThreePlayerSymmetricSpec::new(5.0, 1.0, 2.0, 3.0, 4.0, 6.0).unwrap();
        let init = InitState3::from_bsq(0.0).unwrap();
        let got = mw_payoffs_3(&spec, &init, pr(1.0), pr(1.0), pr(1.0));
        assert!((got.0 - 5.0).abs() < 1e-12);
        assert!((got.1 - 5.0).abs() < 1e-12);
        assert!((got.2 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn three_player_payoffs_are_identity_independent() {
        let spec = ThreePlayerSymmetricSpec::new(1.0, -0.5, 2.0, 0.7, -1.2, 0.3).unwrap();
        let init = InitState3::from_bsq(0.35).unwrap();
        let (x, y, z) = (0.2, 0.6, 0.9);
        let base = mw_payoffs_3(&spec, &init, pr(x), pr(y), pr(z));
        // Swapping the opponents leaves the focal payoff unchanged.
        let swapped = mw_payoffs_3(&spec, &init, pr(x), pr(z), pr(y));
        assert!((base.0 - swapped.0).abs() < 1e-12);
        // P_B(y,x,z) = P_A(x,y,z) after exchanging the first two seats.
        let seats = mw_payoffs_3(&spec, &init, pr(y), pr(x), pr(z));
        assert!((seats.1 - base.0).abs() < 1e-12);
        let seats = mw_payoffs_3(&spec, &init, pr(z), pr(y), pr(x));
        assert!((seats.2 - base.0).abs() < 1e-12);
    }

    #[test]
    fn three_player_quadratic_matches_trace_differences() {
        let spec = ThreePlayerSymmetricSpec::new(1.0, -0.5, 2.0, 0.7, -1.2, 0.3).unwrap();
        for bsq in [0.0, 0.2, 0.5, 0.8, 1.0] {
            let init = InitState3::from_bsq(bsq).unwrap();
            let (a2, a1, a0) = three_player_ne_polynomial(&spec, bsq);
            for ks in 0..=10 {
                let star = ks as f64 / 10.0;
                let poly = a2 * star * star + a1 * star + a0;
                for kp in 0..=5 {
                    let p = kp as f64 / 5.0;
                    let diff = mw_payoffs_3(&spec, &init, pr(star), pr(star), pr(star)).0
                        - mw_payoffs_3(&spec, &init, pr(p), pr(star), pr(star)).0;
                    assert!(
                        (diff - (star - p) * poly).abs() < 1e-9,
                        "bsq={bsq} star={star} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_ne_root_examples() {
        // eta^2 = sigma omega with |b|^2 = 0: the double root
        // (omega - eta)/(sigma + omega - 2 eta) = 2/3.
        let spec = ThreePlayerSymmetricSpec::from_differences(1.0, -2.0, 4.0).unwrap();
        let roots = three_player_mixed_ne(&spec, 0.0);
        assert_eq!(roots.roots.len(), 1);
        assert!((roots.roots[0] - 2.0 / 3.0).abs() < 1e-9);
        assert!(roots.discriminant.abs() < 1e-12);
        // Away from zero the same class generally has two NE.
        let roots = three_player_mixed_ne(&spec, 0.1);
        assert_eq!(roots.roots.len(), 2);
        for root in &roots.roots {
            let (a2, a1, a0) = three_player_ne_polynomial(&spec, 0.1);
            assert!((a2 * root * root + a1 * root + a0).abs() < 1e-9);
        }
        // |b|^2 = 1/2 kills the leading coefficient; the linear path runs.
        let roots = three_player_mixed_ne(&spec, 0.5);
        assert!(roots.linear_fallback);
        assert_eq!(roots.roots.len(), 1);
        assert!((roots.roots[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rsp_classical_identity_corner() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let init = QutritInitState::classical();
        let got = rsp_payoffs(&g, &init, &tac(0.0, 0.0), &tac(0.0, 0.0));
        assert!((got.0 - 0.5).abs() < 1e-12);
        assert!((got.1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rsp_classical_uniform_sum() {
        // Both players uniform over {I, C, D}: total payoff
        // -2 eps {(1-p-p1)(1-q-q1) + p1 q1 + p q} = 1/3 at eps = -1/2.
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let init = QutritInitState::classical();
        let u = tac(1.0 / 3.0, 1.0 / 3.0);
        let (pa, pb) = rsp_payoffs(&g, &init, &u, &u);
        assert!((pa + pb - 1.0 / 3.0).abs() < 1e-12);
        assert!((pa - pb).abs() < 1e-12);
    }

    #[test]
    fn rsp_classical_embedding_matches_3x3() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.25).unwrap();
        let init = QutritInitState::classical();
        for (p, p1, q, q1) in [(0.2, 0.3, 0.1, 0.6), (0.0, 1.0, 1.0, 0.0), (0.5, 0.5, 0.3, 0.3)] {
            let quantum = rsp_payoffs(&g, &init, &tac(p, p1), &tac(q, q1));
            // Identity keeps strategy 1, C plays 3, D plays 2.
            let wa = [1.0 - p - p1, p1, p];
            let wb = [1.0 - q - q1, q1, q];
            let classical = mixed_payoff_3x3(&g, &wa, &wb);
            assert!((quantum.0 - classical.0).abs() < 1e-12);
            assert!((quantum.1 - classical.1).abs() < 1e-12);
        }
    }

    #[test]
    fn rsp_dual_path_agreement() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        for init in [
            QutritInitState::classical(),
            QutritInitState::entangled_off_diagonal(),
        ] {
            for (p, p1, q, q1) in [(0.1, 0.2, 0.4, 0.4), (0.3, 0.0, 0.0, 0.9), (1.0, 0.0, 0.0, 1.0)]
            {
                let trace = rsp_payoffs(&g, &init, &tac(p, p1), &tac(q, q1)).0;
                let factors = rsp_payoff_factors(&g, &init, &tac(p, p1), &tac(q, q1));
                assert!(factors.validate());
                assert!((factors.payoff() - trace).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rsp_omega_matches_literal_table() {
        // The 9x9 row layout, written out longhand for one asymmetric state,
        // guards the permutation construction against transcription slips.
        let mut c = [[Complex64::ZERO; 3]; 3];
        let vals = [
            [0.30f64, 0.05, 0.10],
            [0.15, 0.02, 0.08],
            [0.12, 0.07, 0.11],
        ];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = Complex64::new(vals[i][j].sqrt(), 0.0);
            }
        }
        let init = QutritInitState::new(c).unwrap();
        let f = rsp_payoff_factors(
            &Matrix3x3Pair::rock_scissors_paper(0.0).unwrap(),
            &init,
            &tac(0.2, 0.3),
            &tac(0.1, 0.5),
        );
        let m = vals;
        let rows: [[f64; 9]; 9] = [
            [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]],
            [m[2][0], m[2][1], m[2][2], m[1][0], m[1][1], m[1][2], m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2], m[0][0], m[0][1], m[0][2], m[2][0], m[2][1], m[2][2]],
            [m[0][2], m[0][1], m[0][0], m[1][2], m[1][1], m[1][0], m[2][2], m[2][1], m[2][0]],
            [m[2][2], m[2][1], m[2][0], m[1][2], m[1][1], m[1][0], m[0][2], m[0][1], m[0][0]],
            [m[1][2], m[1][1], m[1][0], m[0][2], m[0][1], m[0][0], m[2][2], m[2][1], m[2][0]],
            [m[0][1], m[0][0], m[0][2], m[1][1], m[1][0], m[1][2], m[2][1], m[2][0], m[2][2]],
            [m[2][1], m[2][0], m[2][2], m[1][1], m[1][0], m[1][2], m[0][1], m[0][0], m[0][2]],
            [m[1][1], m[1][0], m[1][2], m[0][1], m[0][0], m[0][2], m[2][1], m[2][0], m[2][2]],
        ];
        for k in 0..9 {
            for l in 0..9 {
                assert!(
                    (f.omega[k][l] - rows[k][l]).abs() < 1e-12,
                    "omega[{k}][{l}]"
                );
            }
        }
    }

    #[test]
    fn rsp_gradients_vanish_at_uniform() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let at = tac(1.0 / 3.0, 1.0 / 3.0);
        for init in [
            QutritInitState::classical(),
            QutritInitState::entangled_off_diagonal(),
        ] {
            let (gp, gp1) = rsp_gradients(&g, &init, &at).unwrap();
            assert!(gp.abs() < 1e-12 && gp1.abs() < 1e-12);
        }
    }

    #[test]
    fn rsp_gradients_match_finite_differences() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let h = 1e-6;
        // With the opponent pinned, the payoff is affine in the row player's
        // tactic pair, so a central stencil taken anywhere in the interior
        // measures the gradient at every point, including boundary points.
        let numeric = |init: &QutritInitState, p: f64, p1: f64, along_p: bool| -> f64 {
            let base = (0.4, 0.3);
            let eval = |dp: f64, dp1: f64| {
                rsp_payoffs(&g, init, &tac(base.0 + dp, base.1 + dp1), &tac(p, p1)).0
            };
            if along_p {
                (eval(h, 0.0) - eval(-h, 0.0)) / (2.0 * h)
            } else {
                (eval(0.0, h) - eval(0.0, -h)) / (2.0 * h)
            }
        };
        for init in [
            QutritInitState::classical(),
            QutritInitState::entangled_off_diagonal(),
        ] {
            for (p, p1) in [(1.0 / 3.0, 1.0 / 3.0), (1.0, 0.0), (0.2, 0.5), (0.0, 0.0)] {
                let (gp, gp1) = rsp_gradients(&g, &init, &tac(p, p1)).unwrap();
                assert!(
                    (gp - numeric(&init, p, p1, true)).abs() < 1e-6,
                    "dP/dp at ({p},{p1})"
                );
                assert!(
                    (gp1 - numeric(&init, p, p1, false)).abs() < 1e-6,
                    "dP/dp1 at ({p},{p1})"
                );
            }
        }
    }

    #[test]
    fn rsp_gradients_require_symmetric_play() {
        let mut c = [[Complex64::ZERO; 3]; 3];
        c[0][1] = Complex64::ONE;
        let init = QutritInitState::new(c).unwrap();
        assert!(matches!(
            rsp_gradients(
                &Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap(),
                &init,
                &tac(0.3, 0.3)
            ),
            Err(MwError::RequiresSymmetricPlay)
        ));
    }

    #[test]
    fn rsp_symmetric_play_swaps_payoffs() {
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let init = QutritInitState::entangled_off_diagonal();
        assert!(init.is_symmetric_play());
        let x = tac(0.2, 0.5);
        let y = tac(0.7, 0.1);
        let xy = rsp_payoffs(&g, &init, &x, &y);
        let yx = rsp_payoffs(&g, &init, &y, &x);
        assert!((xy.0 - yx.1).abs() < 1e-12);
        assert!((xy.1 - yx.0).abs() < 1e-12);
    }

    #[test]
    fn rsp_payoff_sum_relation() {
        // Against the off-diagonal entangled state the payoff sum satisfies
        // (PA+PB)_qu = -( (PA+PB)_cl / 2 + eps ).
        let eps = -0.5;
        let g = Matrix3x3Pair::rock_scissors_paper(eps).unwrap();
        let classical = QutritInitState::classical();
        let entangled = QutritInitState::entangled_off_diagonal();
        for (p, p1, q, q1) in [
            (0.0, 0.0, 0.0, 0.0),
            (0.3, 0.3, 0.2, 0.1),
            (1.0, 0.0, 0.0, 1.0),
            (0.4, 0.6, 0.5, 0.5),
        ] {
            let cl = rsp_payoffs(&g, &classical, &tac(p, p1), &tac(q, q1));
            let qu = rsp_payoffs(&g, &entangled, &tac(p, p1), &tac(q, q1));
            let cl_sum = cl.0 + cl.1;
            assert!(
                (cl_sum
                    - (-2.0 * eps)
                        * ((1.0 - p - p1) * (1.0 - q - q1) + p1 * q1 + p * q))
                    .abs()
                    < 1e-12
            );
            assert!(((qu.0 + qu.1) - (-(0.5 * cl_sum + eps))).abs() < 1e-12);
        }
    }

    #[test]
    fn effective_matrices_reproduce_pure_payoffs() {
        let g = Bimatrix2::battle_of_sexes(3.0, 2.0, 1.0).unwrap();
        let init = InitState2::anti_from_bsq(0.2).unwrap();
        let eff = mw2_effective_bimatrix(&g, &init);
        assert_eq!(
            eff.cells[0][1],
            mw_payoffs_2(&g, &init, pr(1.0), pr(0.0))
        );
        let rsp = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let qinit = QutritInitState::entangled_off_diagonal();
        let eff3 = rsp_effective_matrix(&rsp, &qinit);
        let direct = rsp_payoffs(&rsp, &qinit, &tac(1.0, 0.0), &tac(0.0, 0.0));
        assert!((eff3.alpha[1][0] - direct.0).abs() < 1e-12);
        assert!((eff3.beta[1][0] - direct.1).abs() < 1e-12);
    }
}
