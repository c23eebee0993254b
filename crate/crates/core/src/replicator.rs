//! Continuous-time replicator dynamics over pure-strategy frequency vectors,
//! integrated with a fixed-step classical fourth-order scheme. Used to probe
//! whether certified equilibria are dynamically stable.

use crate::games::{Bimatrix2, Matrix3x3Pair};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReplicatorError {
    #[error("frequencies must be nonnegative and sum to 1 (defect {0:.3e})")]
    NotASimplexPoint(f64),
    #[error("payoff matrix is {0}x{0} but the population has {1} strategies")]
    DimensionMismatch(usize, usize),
    #[error("step size must be positive")]
    BadStep,
    #[error("perturbation size {0} outside (0, 0.1]")]
    BadDelta(f64),
}

/// Frequencies of the pure strategies in an infinite population.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Population {
    freqs: Vec<f64>,
}

impl Population {
    pub fn new(freqs: Vec<f64>) -> Result<Self, ReplicatorError> {
        let sum: f64 = freqs.iter().sum();
        let defect = (sum - 1.0).abs();
        if freqs.iter().any(|f| *f < 0.0) || defect >= 1e-12 {
            return Err(ReplicatorError::NotASimplexPoint(defect.max(
                freqs.iter().cloned().fold(0.0, |acc, f| acc.max(-f)),
            )));
        }
        Ok(Self { freqs })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            freqs: vec![1.0 / n as f64; n],
        }
    }

    pub fn vertex(n: usize, index: usize) -> Self {
        let mut freqs = vec![0.0; n];
        freqs[index] = 1.0;
        Self { freqs }
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn distance(&self, other: &Population) -> f64 {
        self.freqs
            .iter()
            .zip(&other.freqs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Row-player payoff matrix over the pure strategies driving the dynamic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl PayoffMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    /// The row player's payoffs of a 2x2 game.
    pub fn from_bimatrix_rows(g: &Bimatrix2) -> Self {
        Self::from_rows(&[
            vec![g.cells[0][0].0, g.cells[0][1].0],
            vec![g.cells[1][0].0, g.cells[1][1].0],
        ])
    }

    /// The row player's payoffs of a 3x3 game.
    pub fn from_matrix3x3_rows(g: &Matrix3x3Pair) -> Self {
        Self::from_rows(&[
            g.alpha[0].to_vec(),
            g.alpha[1].to_vec(),
            g.alpha[2].to_vec(),
        ])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// (A x)_i for every i.
    pub fn pure_payoffs(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

fn derivative(x: &[f64], a: &PayoffMatrix) -> Vec<f64> {
    let fitness = a.pure_payoffs(x);
    let average: f64 = fitness.iter().zip(x).map(|(f, xi)| f * xi).sum();
    x.iter()
        .zip(&fitness)
        .map(|(xi, fi)| xi * (fi - average))
        .collect()
}

fn clamp_renormalize(mut x: Vec<f64>) -> Vec<f64> {
    for v in &mut x {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = x.iter().sum();
    for v in &mut x {
        *v /= sum;
    }
    x
}

/// One fixed-step fourth-order step of x_i' = x_i [(Ax)_i - x.Ax], clamped
/// back onto the simplex.
pub fn replicator_step(
    pop: &Population,
    payoff: &PayoffMatrix,
    dt: f64,
) -> Result<Population, ReplicatorError> {
    if payoff.n != pop.len() {
        return Err(ReplicatorError::DimensionMismatch(payoff.n, pop.len()));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(ReplicatorError::BadStep);
    }
    let x = pop.freqs();
    let k1 = derivative(x, payoff);
    let stage = |base: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, kv)| b + h * kv).collect()
    };
    let k2 = derivative(&stage(x, &k1, dt / 2.0), payoff);
    let k3 = derivative(&stage(x, &k2, dt / 2.0), payoff);
    let k4 = derivative(&stage(x, &k3, dt), payoff);
    let next: Vec<f64> = (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    Ok(Population {
        freqs: clamp_renormalize(next),
    })
}

/// A sampled integration run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// (time, population) pairs in increasing time, ending at the horizon.
    pub samples: Vec<(f64, Population)>,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn terminal(&self) -> &Population {
        &self.samples.last().expect("trajectory is never empty").1
    }
}

/// Integrate for `steps` fixed steps of size `dt`, sampling about a thousand
/// evenly spaced states plus the endpoint.
pub fn evolve(
    pop0: &Population,
    payoff: &PayoffMatrix,
    dt: f64,
    steps: usize,
) -> Result<Trajectory, ReplicatorError> {
    let stride = (steps / 1000).max(1);
    let mut samples = vec![(0.0, pop0.clone())];
    let mut current = pop0.clone();
    for step in 1..=steps {
        current = replicator_step(&current, payoff, dt)?;
        if step % stride == 0 || step == steps {
            samples.push((step as f64 * dt, current.clone()));
        }
    }
    Ok(Trajectory {
        samples,
        dt,
        steps,
    })
}

/// Outcome of a perturbation probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeOutcome {
    /// Terminal state within delta/10 of the candidate.
    Returns,
    /// Terminal state farther than 10 delta from the candidate.
    Escapes,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub outcome: ProbeOutcome,
    /// (pure-strategy direction, outcome, terminal distance) per probe.
    pub directions: Vec<(usize, ProbeOutcome, f64)>,
    pub delta: f64,
    pub dt: f64,
    pub steps: usize,
}

impl ProbeReport {
    pub fn all_return(&self) -> bool {
        self.directions.iter().all(|(_, o, _)| *o == ProbeOutcome::Returns)
    }
}

/// Push the candidate by delta toward each pure-strategy vertex, integrate,
/// and classify by the terminal distance back to the candidate.
pub fn stability_probe(
    candidate: &Population,
    payoff: &PayoffMatrix,
    delta: f64,
    dt: f64,
    steps: usize,
) -> Result<ProbeReport, ReplicatorError> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(ReplicatorError::BadDelta(delta));
    }
    let n = candidate.len();
    let mut directions = Vec::with_capacity(n);
    for dir in 0..n {
        let perturbed: Vec<f64> = candidate
            .freqs()
            .iter()
            .enumerate()
            .map(|(i, x)| (1.0 - delta) * x + if i == dir { delta } else { 0.0 })
            .collect();
        let start = Population::new(perturbed).expect("convex perturbation stays on the simplex");
        let trajectory = evolve(&start, payoff, dt, steps)?;
        let distance = trajectory.terminal().distance(candidate);
        let outcome = if distance < delta / 10.0 {
            ProbeOutcome::Returns
        } else if distance > 10.0 * delta {
            ProbeOutcome::Escapes
        } else {
            ProbeOutcome::Inconclusive
        };
        directions.push((dir, outcome, distance));
    }
    let outcome = if directions.iter().all(|(_, o, _)| *o == ProbeOutcome::Returns) {
        ProbeOutcome::Returns
    } else if directions.iter().any(|(_, o, _)| *o == ProbeOutcome::Escapes) {
        ProbeOutcome::Escapes
    } else {
        ProbeOutcome::Inconclusive
    };
    Ok(ProbeReport {
        outcome,
        directions,
        delta,
        dt,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd_matrix() -> PayoffMatrix {
        // Rows are (cooperate, defect) payoffs of the canonical dilemma.
        PayoffMatrix::from_rows(&[vec![3.0, 0.0], vec![5.0, 1.0]])
    }

    fn rsp_matrix(eps: f64) -> PayoffMatrix {
        PayoffMatrix::from_matrix3x3_rows(&Matrix3x3Pair::rock_scissors_paper(eps).unwrap())
    }

    #[test]
    fn constant_game_leaves_population_unchanged() {
        let a = PayoffMatrix::from_rows(&[vec![2.0, 2.0], vec![2.0, 2.0]]);
        let pop = Population::uniform(2);
        let next = replicator_step(&pop, &a, 1e-2).unwrap();
        assert!(pop.distance(&next) < 1e-15);
    }

    #[test]
    fn defector_share_grows_from_even_split() {
        let pop = Population::new(vec![0.5, 0.5]).unwrap();
        let next = replicator_step(&pop, &pd_matrix(), 1e-3).unwrap();
        assert!(next.freqs()[1] > 0.5);
        assert!(next.freqs()[0] < 0.5);
    }

    #[test]
    fn vertices_are_rest_points() {
        let pop = Population::vertex(3, 1);
        let next = replicator_step(&pop, &rsp_matrix(-0.5), 1e-2).unwrap();
        assert!(pop.distance(&next) < 1e-15);
    }

    #[test]
    fn dimension_and_step_checks() {
        let pop = Population::uniform(3);
        assert!(matches!(
            replicator_step(&pop, &pd_matrix(), 1e-2),
            Err(ReplicatorError::DimensionMismatch(2, 3))
        ));
        assert!(matches!(
            replicator_step(&Population::uniform(2), &pd_matrix(), 0.0),
            Err(ReplicatorError::BadStep)
        ));
    }

    #[test]
    fn dilemma_converges_to_all_defect() {
        let start = Population::new(vec![0.99, 0.01]).unwrap();
        let trajectory = evolve(&start, &pd_matrix(), 1e-3, 20_000).unwrap();
        let terminal = trajectory.terminal();
        assert!(terminal.distance(&Population::vertex(2, 1)) < 1e-6);
    }

    #[test]
    fn exact_interior_equilibrium_is_a_rest_point() {
        let start = Population::uniform(3);
        let trajectory = evolve(&start, &rsp_matrix(-0.5), 1e-3, 5_000).unwrap();
        assert!(trajectory.terminal().distance(&start) < 1e-9);
    }

    #[test]
    fn perturbed_rsp_interior_does_not_return() {
        // The uniform point of the premium game is an equilibrium but not
        // stable; the product of frequencies shrinks monotonically, so the
        // orbit cannot re-approach the center.
        let center = Population::uniform(3);
        let mut start = center.freqs().to_vec();
        start[0] += 0.05;
        start[1] -= 0.025;
        start[2] -= 0.025;
        let trajectory = evolve(
            &Population::new(start).unwrap(),
            &rsp_matrix(-0.5),
            1e-3,
            30_000,
        )
        .unwrap();
        assert!(trajectory.terminal().distance(&center) > 0.05);
    }

    #[test]
    fn trajectories_stay_on_the_simplex() {
        let start = Population::new(vec![0.9, 0.05, 0.05]).unwrap();
        let trajectory = evolve(&start, &rsp_matrix(-0.25), 1e-2, 2_000).unwrap();
        for (time, pop) in &trajectory.samples {
            assert!(*time >= 0.0);
            let sum: f64 = pop.freqs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(pop.freqs().iter().all(|f| *f >= 0.0));
        }
        let times: Vec<f64> = trajectory.samples.iter().map(|(t, _)| *t).collect();
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn probe_classifications() {
        // Strict equilibrium: all-defect returns.
        let report = stability_probe(
            &Population::vertex(2, 1),
            &pd_matrix(),
            0.05,
            1e-3,
            20_000,
        )
        .unwrap();
        assert_eq!(report.outcome, ProbeOutcome::Returns);
        assert!(report.all_return());
        // Unstable interior point never returns on all directions.
        let report = stability_probe(
            &Population::uniform(3),
            &rsp_matrix(-0.5),
            0.05,
            1e-3,
            50_000,
        )
        .unwrap();
        assert!(!report.all_return());
        assert_ne!(report.outcome, ProbeOutcome::Returns);
        // Flat landscape: inconclusive.
        let flat = PayoffMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let report =
            stability_probe(&Population::uniform(2), &flat, 0.05, 1e-2, 1_000).unwrap();
        assert_eq!(report.outcome, ProbeOutcome::Inconclusive);
        assert!(stability_probe(&Population::uniform(2), &flat, 0.2, 1e-2, 10).is_err());
    }

    #[test]
    fn interior_rest_points_have_equal_support_payoffs() {
        let a = rsp_matrix(-0.5);
        let pop = Population::uniform(3);
        let fitness = a.pure_payoffs(pop.freqs());
        for pair in fitness.windows(2) {
            assert!((pair[0] - pair[1]).abs() < 1e-8);
        }
    }
}
