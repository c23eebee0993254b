//! Cross-module property tests: structural invariants of the engines under
//! randomized inputs, and consistency between the closed forms, the grid
//! certifiers and the dynamics.

use num_complex::Complex64;
use proptest::prelude::*;
use qgames_core::ewl::{entangler, ewl_payoffs, final_state, EwlConfig, EwlStrategy};
use qgames_core::games::{
    classical_equilibria_2x2, Bimatrix2, Matrix3x3Pair, MixedStrategy1, MixedStrategy2,
    ThreePlayerSymmetricSpec,
};
use qgames_core::mw::{
    mw_final_state_2, mw_final_state_3, mw_payoffs_2, rsp_final_state, rsp_payoff_factors,
    rsp_payoffs, InitState2, InitState3, Pairing, QutritInitState,
};
use qgames_core::qmat::{hermitian_eigenvalues, StateVector, UnitaryMatrix};
use qgames_core::stability::{
    check_invasion, check_symmetric_ess, check_symmetric_ne, ess_holds_against, AsymmetricPayoffFns,
    check_asymmetric_ess, EssStatus, InvasionTest, SymmetricPayoffFn, Tolerances,
};
use std::f64::consts::{FRAC_PI_2, PI};

fn pr(v: f64) -> MixedStrategy1 {
    MixedStrategy1::new(v).unwrap()
}

/// General 2x2 unitary from four angles.
fn unitary2(theta: f64, phi: f64, lambda: f64, global: f64) -> UnitaryMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let g = Complex64::from_polar(1.0, global);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    UnitaryMatrix::new(
        2,
        vec![
            g * e(phi) * c,
            g * e(lambda) * s,
            -g * e(-lambda) * s,
            g * e(-phi) * c,
        ],
    )
    .expect("parametrized unitary")
}

/// 3x3 unitary as a product of plane rotations with phases.
fn unitary3(angles: [f64; 6]) -> UnitaryMatrix {
    let embed = |p: usize, q: usize, theta: f64, phi: f64| {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let mut entries = vec![Complex64::ZERO; 9];
        for k in 0..3 {
            entries[k * 3 + k] = if k == p || k == q {
                Complex64::ZERO
            } else {
                Complex64::ONE
            };
        }
        entries[p * 3 + p] = Complex64::new(c, 0.0);
        entries[q * 3 + q] = Complex64::new(c, 0.0);
        entries[p * 3 + q] = e * s;
        entries[q * 3 + p] = -e.conj() * s;
        UnitaryMatrix::new(3, entries).expect("plane rotation")
    };
    embed(0, 1, angles[0], angles[1])
        .mul(&embed(0, 2, angles[2], angles[3]))
        .unwrap()
        .mul(&embed(1, 2, angles[4], angles[5]))
        .unwrap()
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..(2.0 * PI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_preserves_trace_and_spectrum(
        ta in 0.0..PI, pa in 0.0..FRAC_PI_2,
        tb in 0.0..PI, pb in 0.0..FRAC_PI_2,
        gamma in 0.0..FRAC_PI_2,
        amp in 0.05..0.95f64,
    ) {
        let psi = StateVector::new(vec![
            Complex64::new(amp.sqrt(), 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(0.0, (1.0 - amp).sqrt()),
        ]).unwrap();
        let rho = psi.to_density();
        let u = unitary2(ta, pa, 0.3, 0.1)
            .tensor(&unitary2(tb, pb, 1.3, 2.1)).unwrap()
            .mul(&entangler(gamma).unwrap()).unwrap();
        let evolved = rho.evolve(&u).unwrap();
        let diag = evolved.diagnostics();
        prop_assert!(diag.trace_defect < 1e-10);
        prop_assert!(diag.hermiticity_defect < 1e-10);
        prop_assert!(diag.min_eigenvalue > -1e-10);
        let before = rho.eigenvalues();
        let after = evolved.eigenvalues();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn tensor_is_associative_for_random_unitaries(
        a in angle(), b in angle(), c in angle(),
        d in angle(), e in angle(), f in angle(),
    ) {
        let u = unitary2(a, b, c, d);
        let v = unitary2(b, c, d, e);
        let w = unitary2(c, d, e, f);
        let left = u.tensor(&v).unwrap().tensor(&w).unwrap();
        let right = u.tensor(&v.tensor(&w).unwrap()).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                prop_assert!((left.entry(i, j) - right.entry(i, j)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn random_qutrit_unitaries_pass_invariants(angles in prop::array::uniform6(angle())) {
        let u = unitary3(angles);
        // Construction would have failed if unitarity did not hold; exercise
        // evolution on a random qutrit-pair state too.
        let psi = StateVector::basis(3, 0).unwrap();
        let rho = psi.tensor(&StateVector::basis(3, 1).unwrap()).unwrap().to_density();
        let uu = u.tensor(&UnitaryMatrix::identity(3).unwrap()).unwrap();
        let diag = rho.evolve(&uu).unwrap().diagnostics();
        prop_assert!(diag.is_valid());
    }

    #[test]
    fn ewl_probabilities_sum_to_one(
        ta in 0.0..PI, pa in 0.0..FRAC_PI_2,
        tb in 0.0..PI, pb in 0.0..FRAC_PI_2,
        gamma in 0.0..FRAC_PI_2,
    ) {
        let cfg = EwlConfig::new(Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(), gamma).unwrap();
        let sa = EwlStrategy::two_parameter(ta, pa).unwrap();
        let sb = EwlStrategy::two_parameter(tb, pb).unwrap();
        let total: f64 = final_state(&cfg, &sa, &sb).probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        // Symmetric-contest identity for the role game.
        let ab = ewl_payoffs(&cfg, &sa, &sb);
        let ba = ewl_payoffs(&cfg, &sb, &sa);
        prop_assert!((ab.0 - ba.1).abs() < 1e-12);
    }

    #[test]
    fn mw_final_states_are_valid_densities(
        p in 0.0..1.0f64, q in 0.0..1.0f64, r in 0.0..1.0f64,
        bsq in 0.0..1.0f64,
        phase_a in angle(), phase_b in angle(),
    ) {
        let a = Complex64::from_polar((1.0 - bsq).sqrt(), phase_a);
        let b = Complex64::from_polar(bsq.sqrt(), phase_b);
        for pairing in [Pairing::Diagonal, Pairing::Anti] {
            let init = InitState2::new(a, b, pairing).unwrap();
            let rho = mw_final_state_2(&init, pr(p), pr(q));
            prop_assert!(rho.diagnostics().is_valid());
        }
        let init3 = InitState3::new(a, b).unwrap();
        let rho = mw_final_state_3(&init3, pr(p), pr(q), pr(r));
        prop_assert!(rho.diagnostics().is_valid());
    }

    #[test]
    fn mw_payoffs_depend_only_on_moduli(
        p in 0.0..1.0f64, q in 0.0..1.0f64,
        bsq in 0.0..1.0f64,
        phase_a in angle(), phase_b in angle(),
    ) {
        let g = Bimatrix2::new([[(1.0, 1.0), (0.0, 2.0)], [(2.0, 0.0), (3.0, 3.0)]]).unwrap();
        let bare = InitState2::diagonal_from_bsq(bsq).unwrap();
        let phased = InitState2::new(
            Complex64::from_polar((1.0 - bsq).sqrt(), phase_a),
            Complex64::from_polar(bsq.sqrt(), phase_b),
            Pairing::Diagonal,
        ).unwrap();
        let x = mw_payoffs_2(&g, &bare, pr(p), pr(q));
        let y = mw_payoffs_2(&g, &phased, pr(p), pr(q));
        prop_assert!((x.0 - y.0).abs() < 1e-12);
        prop_assert!((x.1 - y.1).abs() < 1e-12);
    }

    #[test]
    fn rsp_dual_path_and_validity(
        p in 0.0..1.0f64, p1_frac in 0.0..1.0f64,
        q in 0.0..1.0f64, q1_frac in 0.0..1.0f64,
        mass in prop::array::uniform9(0.01..1.0f64),
        phases in prop::array::uniform9(0.0..(2.0 * PI)),
    ) {
        let total: f64 = mass.iter().sum();
        let mut c = [[Complex64::ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let k = 3 * i + j;
                c[i][j] = Complex64::from_polar((mass[k] / total).sqrt(), phases[k]);
            }
        }
        let init = QutritInitState::new(c).unwrap();
        let sa = MixedStrategy2::new(p, (1.0 - p) * p1_frac).unwrap();
        let sb = MixedStrategy2::new(q, (1.0 - q) * q1_frac).unwrap();
        let g = Matrix3x3Pair::rock_scissors_paper(-0.5).unwrap();
        let rho = rsp_final_state(&init, &sa, &sb);
        prop_assert!(rho.diagnostics().is_valid());
        let trace = rsp_payoffs(&g, &init, &sa, &sb).0;
        let factors = rsp_payoff_factors(&g, &init, &sa, &sb);
        prop_assert!(factors.validate());
        prop_assert!((factors.payoff() - trace).abs() < 1e-10);
    }

    #[test]
    fn classical_limits_agree_exactly(
        p in 0.0..1.0f64, q in 0.0..1.0f64,
        theta_a in 0.0..PI, theta_b in 0.0..PI,
    ) {
        // MW with the product state equals the classical mixed game.
        let g = Bimatrix2::battle_of_sexes(3.0, 2.0, 1.0).unwrap();
        let init = InitState2::diagonal_from_bsq(0.0).unwrap();
        let quantum = mw_payoffs_2(&g, &init, pr(p), pr(q));
        let classical = qgames_core::games::mixed_payoff_bimatrix(&g, pr(p), pr(q));
        prop_assert!((quantum.0 - classical.0).abs() < 1e-12);
        prop_assert!((quantum.1 - classical.1).abs() < 1e-12);
        // EWL without entanglement equals the classical mixed game.
        let pd = Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap();
        let cfg = EwlConfig::new(pd, 0.0).unwrap();
        let got = ewl_payoffs(
            &cfg,
            &EwlStrategy::one_parameter(theta_a).unwrap(),
            &EwlStrategy::one_parameter(theta_b).unwrap(),
        );
        let want = qgames_core::games::mixed_payoff_bimatrix(
            &pd,
            pr((theta_a / 2.0).cos().powi(2)),
            pr((theta_b / 2.0).cos().powi(2)),
        );
        prop_assert!((got.0 - want.0).abs() < 1e-12);
        prop_assert!((got.1 - want.1).abs() < 1e-12);
    }

    #[test]
    fn three_player_permutation_symmetry(
        x in 0.0..1.0f64, y in 0.0..1.0f64, z in 0.0..1.0f64,
        bsq in 0.0..1.0f64,
        consts in prop::array::uniform6(-2.0..2.0f64),
    ) {
        let spec = ThreePlayerSymmetricSpec::new(
            consts[0], consts[1], consts[2], consts[3], consts[4], consts[5],
        ).unwrap();
        let init = InitState3::from_bsq(bsq).unwrap();
        let f = |a: f64, b: f64, c: f64| qgames_core::mw::mw_payoffs_3(&spec, &init, pr(a), pr(b), pr(c));
        let base = f(x, y, z);
        prop_assert!((base.0 - f(x, z, y).0).abs() < 1e-12);
        prop_assert!((base.0 - f(y, x, z).1).abs() < 1e-12);
        prop_assert!((base.0 - f(z, y, x).2).abs() < 1e-12);
    }

    #[test]
    fn random_2x2_equilibria_verify_against_stability(
        cells in prop::array::uniform8(-3.0..3.0f64),
    ) {
        let g = Bimatrix2::new([
            [(cells[0], cells[1]), (cells[2], cells[3])],
            [(cells[4], cells[5]), (cells[6], cells[7])],
        ]).unwrap();
        let eq = classical_equilibria_2x2(&g);
        let fns = AsymmetricPayoffFns::from_bimatrix(g);
        for (p, q) in eq.equilibria {
            let report = check_asymmetric_ess(&fns, (p, q), 1e-2, &Tolerances::default());
            prop_assert!(report.is_ne, "candidate ({p},{q}) failed the deviation scan");
        }
    }
}

#[test]
fn hermitian_eigenvalues_of_known_matrix() {
    // Pauli-like 2x2 with eigenvalues -1 and 1.
    let h = vec![
        Complex64::ZERO,
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::ZERO,
    ];
    let eig = hermitian_eigenvalues(2, &h);
    assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
}

/// Stability and invasion certify the same verdicts on the 2x2 catalog games
/// with interval strategies (bilinear payoffs).
#[test]
fn ess_and_invasion_agree_on_interval_games() {
    let tol = Tolerances::default();
    let games: Vec<(SymmetricPayoffFn, f64)> = vec![
        (
            SymmetricPayoffFn::from_symmetric_bimatrix(
                Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(),
            )
            .unwrap(),
            0.0,
        ),
        (
            SymmetricPayoffFn::from_mw2_diagonal(
                Bimatrix2::new([[(1.0, 1.0), (0.0, 2.0)], [(2.0, 0.0), (3.0, 3.0)]]).unwrap(),
                InitState2::diagonal_from_bsq(0.5).unwrap(),
            )
            .unwrap(),
            0.0,
        ),
        (
            SymmetricPayoffFn::from_mw2_diagonal(
                Bimatrix2::new([[(1.0, 1.0), (0.0, 2.0)], [(2.0, 0.0), (3.0, 3.0)]]).unwrap(),
                InitState2::diagonal_from_bsq(0.25).unwrap(),
            )
            .unwrap(),
            1.0,
        ),
    ];
    let epsilons: Vec<f64> = (1..=6).rev().map(|k| 0.02 * k as f64).collect();
    for (f, candidate) in &games {
        let report = check_symmetric_ess(f, [*candidate, 0.0], 1e-2, &tol);
        let stable = report.ess_status == Some(EssStatus::Ess);
        // Stability should coincide with: every mutant is repelled at the
        // smallest tested share.
        let mut all_repelled = true;
        for k in 1..=20 {
            let mutant = [k as f64 / 20.0, 0.0];
            if (mutant[0] - candidate).abs() < 1e-12 {
                continue;
            }
            let test = InvasionTest::new(epsilons.clone(), mutant).unwrap();
            let outcomes = check_invasion(f, [*candidate, 0.0], &test).unwrap();
            if !outcomes.last().unwrap().holds {
                all_repelled = false;
            }
            // Consistency with the pairwise two-condition test.
            let pairwise = ess_holds_against(f, [*candidate, 0.0], mutant, &tol).unwrap();
            assert_eq!(
                pairwise,
                outcomes.last().unwrap().holds,
                "pairwise test and small-share invasion disagree at mutant {mutant:?}"
            );
        }
        assert_eq!(stable, all_repelled, "candidate {candidate}");
    }
}

/// Halving the grid step never flips verdicts whose margins are comfortably
/// beyond tolerance.
#[test]
fn grid_refinement_is_monotone() {
    let tol = Tolerances::default();
    let fns: Vec<(SymmetricPayoffFn, [f64; 2])> = vec![
        (
            SymmetricPayoffFn::from_symmetric_bimatrix(
                Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(),
            )
            .unwrap(),
            [0.0, 0.0],
        ),
        (
            SymmetricPayoffFn::from_ewl(
                EwlConfig::new(Bimatrix2::from_roles(3.0, 0.0, 5.0, 1.0).unwrap(), FRAC_PI_2)
                    .unwrap(),
            ),
            [0.0, FRAC_PI_2],
        ),
    ];
    for (f, candidate) in &fns {
        let mut verdicts = Vec::new();
        for step in [0.04, 0.02, 0.01] {
            let report = check_symmetric_ess(f, *candidate, step, &tol);
            if report.witness.map(|w| w.margin.abs()).unwrap_or(f64::INFINITY)
                > 10.0 * tol.tol_strict
            {
                verdicts.push(report.ess_status);
            }
        }
        for pair in verdicts.windows(2) {
            assert_eq!(pair[0], pair[1]);
        }
    }
}

/// The equilibria returned for the coordination game also pass the
/// symmetric checker when the game is symmetric.
#[test]
fn symmetric_equilibria_cross_check() {
    let g = Bimatrix2::from_roles(2.0, 0.0, 0.0, 2.0).unwrap();
    let f = SymmetricPayoffFn::from_symmetric_bimatrix(g).unwrap();
    let eq = classical_equilibria_2x2(&g);
    for (p, q) in eq.equilibria {
        if (p - q).abs() < 1e-12 {
            let report = check_symmetric_ne(&f, [p, 0.0], 1e-2, &Tolerances::default());
            assert!(report.is_ne);
        }
    }
}
