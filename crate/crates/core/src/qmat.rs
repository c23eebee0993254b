//! Small dense complex linear algebra for the fixed dimensions the
//! quantization engines use: 2 and 3 for single subsystems, 4, 8 and 9 for
//! the composite spaces (two qubits, three qubits, two qutrits).
//!
//! Everything is immutable after construction and every operation is a pure
//! function, so values can be shared across threads freely. Constructors
//! validate the structural invariants (normalization, Hermiticity, trace,
//! positive semidefiniteness, unitarity) and reject bad inputs.

use num_complex::Complex64;
use thiserror::Error;

/// Dimensions accepted by the constructors in this module.
pub const SUPPORTED_DIMS: &[usize] = &[2, 3, 4, 8, 9];

/// Largest composite dimension in scope; tensor products above this are rejected.
pub const MAX_DIM: usize = 9;

/// Tolerance for normalization, Hermiticity, trace and unitarity defects.
pub const STRUCT_TOL: f64 = 1e-12;

/// How far below zero a density-matrix eigenvalue may drift.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmatError {
    #[error("unsupported dimension {0} (supported: 2, 3, 4, 8, 9)")]
    UnsupportedDim(usize),
    #[error("tensor product of dimensions {0} and {1} exceeds the 9-dimensional scope")]
    DimOverflow(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("entry count {0} does not match dimension {1}")]
    BadShape(usize, usize),
    #[error("state vector norm deviates from 1 by {0:.3e}")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("trace deviates from 1 by {0:.3e}")]
    BadTrace(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("basis index {0} out of range for dimension {1}")]
    BadBasisIndex(usize, usize),
    #[error("mixture weights sum to {0}, expected 1")]
    BadMixture(f64),
}

fn check_dim(dim: usize) -> Result<(), QmatError> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(QmatError::UnsupportedDim(dim))
    }
}

fn mat_mul(dim: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == Complex64::ZERO {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

fn dagger(dim: usize, a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = a[i * dim + j].conj();
        }
    }
    out
}

fn hermiticity_defect(dim: usize, a: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            worst = worst.max((a[i * dim + j] - a[j * dim + i].conj()).norm());
        }
    }
    worst
}

fn unitarity_defect(dim: usize, a: &[Complex64]) -> f64 {
    let adag = dagger(dim, a);
    let prod = mat_mul(dim, &adag, a);
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
            worst = worst.max((prod[i * dim + j] - expect).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted ascending. Only the Hermitian part of the input is consulted.
pub fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    assert_eq!(entries.len(), dim * dim, "entry count must match dimension");
    let n = dim;
    // Work on the Hermitian average so tiny asymmetries cannot stall convergence.
    let mut a: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            0.5 * (entries[i * n + j] + entries[j * n + i].conj())
        })
        .collect();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].norm());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let sp = s * phase; // sin * e^{i phi}
                let spc = s * phase.conj();
                // B = A G, columns p and q of G are (c, s e^{-i phi}) and (-s e^{i phi}, c).
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp + spc * akq;
                    a[k * n + q] = -sp * akp + c * akq;
                }
                // A' = G^dag B.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk + sp * aqk;
                    a[q * n + k] = -spc * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Validity diagnostics for a square complex matrix viewed as a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl DensityDiagnostics {
    /// True when all defects are within the density-matrix invariants.
    pub fn is_valid(&self) -> bool {
        self.hermiticity_defect < STRUCT_TOL
            && self.trace_defect < STRUCT_TOL
            && self.min_eigenvalue >= -PSD_TOL
    }
}

/// Diagnostics for an arbitrary square matrix; never fails.
pub fn density_diagnostics(dim: usize, entries: &[Complex64]) -> DensityDiagnostics {
    assert_eq!(entries.len(), dim * dim, "entry count must match dimension");
    let trace: Complex64 = (0..dim).map(|i| entries[i * dim + i]).sum();
    DensityDiagnostics {
        hermiticity_defect: hermiticity_defect(dim, entries),
        trace_defect: (trace - Complex64::ONE).norm(),
        min_eigenvalue: hermitian_eigenvalues(dim, entries)[0],
    }
}

/// A normalized pure state on one of the supported dimensions.
///
/// Basis indices follow the row-major composite convention: the tensor
/// product of |i> (dimension dA) and |j> (dimension dB) sits at index
/// i * dB + j.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dim: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QmatError> {
        let dim = amps.len();
        check_dim(dim)?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let defect = (norm_sq - 1.0).abs();
        if defect >= STRUCT_TOL {
            return Err(QmatError::NotNormalized(defect));
        }
        Ok(Self { dim, amps })
    }

    /// The computational basis state |index> of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self, QmatError> {
        check_dim(dim)?;
        if index >= dim {
            return Err(QmatError::BadBasisIndex(index, dim));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { dim, amps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// |<index|psi>|^2.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64, QmatError> {
        if self.dim != other.dim {
            return Err(QmatError::DimMismatch(self.dim, other.dim));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product |a> (x) |b> with index convention i * dim_b + j.
    pub fn tensor(&self, other: &Self) -> Result<Self, QmatError> {
        let dim = self.dim * other.dim;
        if dim > MAX_DIM {
            return Err(QmatError::DimOverflow(self.dim, other.dim));
        }
        check_dim(dim)?;
        let mut amps = Vec::with_capacity(dim);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { dim, amps })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix { dim, entries }
    }
}

/// A unitary matrix on one of the supported dimensions, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, QmatError> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QmatError::BadShape(entries.len(), dim));
        }
        let defect = unitarity_defect(dim, &entries);
        if defect >= STRUCT_TOL {
            return Err(QmatError::NotUnitary(defect));
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self, QmatError> {
        check_dim(dim)?;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::ONE;
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        Self {
            dim: self.dim,
            entries: dagger(self.dim, &self.entries),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QmatError> {
        if self.dim != other.dim {
            return Err(QmatError::DimMismatch(self.dim, other.dim));
        }
        Ok(Self {
            dim: self.dim,
            entries: mat_mul(self.dim, &self.entries, &other.entries),
        })
    }

    /// Kronecker product A (x) B with row-major composite indices.
    pub fn tensor(&self, other: &Self) -> Result<Self, QmatError> {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        if dim > MAX_DIM {
            return Err(QmatError::DimOverflow(da, db));
        }
        check_dim(dim)?;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..da {
            for j in 0..da {
                let aij = self.entries[i * da + j];
                for k in 0..db {
                    for l in 0..db {
                        entries[(i * db + k) * dim + (j * db + l)] =
                            aij * other.entries[k * db + l];
                    }
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector, QmatError> {
        if self.dim != state.dim {
            return Err(QmatError::DimMismatch(self.dim, state.dim));
        }
        let mut amps = vec![Complex64::ZERO; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                amps[i] += self.entries[i * self.dim + j] * state.amps[j];
            }
        }
        Ok(StateVector {
            dim: self.dim,
            amps,
        })
    }

    /// Max-norm of the commutator [self, other]; zero when they commute.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64, QmatError> {
        if self.dim != other.dim {
            return Err(QmatError::DimMismatch(self.dim, other.dim));
        }
        let ab = mat_mul(self.dim, &self.entries, &other.entries);
        let ba = mat_mul(self.dim, &other.entries, &self.entries);
        Ok(ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, QmatError> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QmatError::BadShape(entries.len(), dim));
        }
        let diag = density_diagnostics(dim, &entries);
        if diag.hermiticity_defect >= STRUCT_TOL {
            return Err(QmatError::NotHermitian(diag.hermiticity_defect));
        }
        if diag.trace_defect >= STRUCT_TOL {
            return Err(QmatError::BadTrace(diag.trace_defect));
        }
        if diag.min_eigenvalue < -PSD_TOL {
            return Err(QmatError::NotPositive(diag.min_eigenvalue));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        state.to_density()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// U rho U^dag. The result satisfies all density-matrix invariants.
    pub fn evolve(&self, u: &UnitaryMatrix) -> Result<Self, QmatError> {
        if self.dim != u.dim {
            return Err(QmatError::DimMismatch(self.dim, u.dim));
        }
        let tmp = mat_mul(self.dim, &u.entries, &self.entries);
        let udag = dagger(self.dim, &u.entries);
        let entries = mat_mul(self.dim, &tmp, &udag);
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    /// Convex combination of density matrices. Weights must be nonnegative
    /// and sum to 1 (within 1e-9 to absorb probability-product rounding);
    /// the result is renormalized by the exact weight sum.
    pub fn mix(parts: &[(f64, DensityMatrix)]) -> Result<Self, QmatError> {
        assert!(!parts.is_empty(), "mixture must have at least one part");
        let dim = parts[0].1.dim;
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > 1e-9 || parts.iter().any(|(w, _)| *w < -1e-12) {
            return Err(QmatError::BadMixture(total));
        }
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (w, rho) in parts {
            if rho.dim != dim {
                return Err(QmatError::DimMismatch(dim, rho.dim));
            }
            for (e, r) in entries.iter_mut().zip(&rho.entries) {
                *e += Complex64::new(w / total, 0.0) * r;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn diagnostics(&self) -> DensityDiagnostics {
        density_diagnostics(self.dim, &self.entries)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }

    /// Tr[diag(weights) rho]; the expectation of a diagonal observable.
    pub fn expectation_diag(&self, weights: &[f64]) -> f64 {
        assert_eq!(weights.len(), self.dim, "weight count must match dimension");
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.entries[i * self.dim + i].re)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> UnitaryMatrix {
        UnitaryMatrix::new(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap()
    }

    // Spin-flip-like real unitary [[0,1],[-1,0]].
    fn flip_d() -> UnitaryMatrix {
        UnitaryMatrix::new(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = UnitaryMatrix::identity(2).unwrap();
        let i4 = i2.tensor(&i2).unwrap();
        assert_eq!(i4, UnitaryMatrix::identity(4).unwrap());
    }

    #[test]
    fn tensor_of_basis_kets() {
        let zero = StateVector::basis(2, 0).unwrap();
        let prod = zero.tensor(&zero).unwrap();
        assert_eq!(prod.amps(), StateVector::basis(4, 0).unwrap().amps());
    }

    #[test]
    fn sigma_x_tensor_sigma_x_flips_00_to_11() {
        // Hand expansion: sigma_x (x) sigma_x is the antidiagonal-ones 4x4,
        // so it maps index 0 to index 3.
        let xx = sigma_x().tensor(&sigma_x()).unwrap();
        for (row, col, want) in [
            (0, 3, 1.0),
            (1, 2, 1.0),
            (2, 1, 1.0),
            (3, 0, 1.0),
            (0, 0, 0.0),
            (1, 1, 0.0),
        ] {
            assert_eq!(xx.entry(row, col), c(want, 0.0));
        }
        let out = xx.apply(&StateVector::basis(4, 0).unwrap()).unwrap();
        assert_eq!(out.amps(), StateVector::basis(4, 3).unwrap().amps());
    }

    #[test]
    fn tensor_rejects_overflow() {
        let i4 = UnitaryMatrix::identity(4).unwrap();
        assert!(matches!(
            i4.tensor(&i4),
            Err(QmatError::DimOverflow(4, 4))
        ));
    }

    #[test]
    fn tensor_is_associative() {
        let a = flip_d();
        let b = sigma_x();
        let i2 = UnitaryMatrix::identity(2).unwrap();
        let left = a.tensor(&b).unwrap().tensor(&i2).unwrap();
        let right = a.tensor(&b.tensor(&i2).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn evolve_by_identity_is_identity() {
        let rho = StateVector::basis(4, 0).unwrap().to_density();
        let i4 = UnitaryMatrix::identity(4).unwrap();
        assert_eq!(rho.evolve(&i4).unwrap(), rho);
    }

    #[test]
    fn evolve_basis_flip() {
        // (|00><00|, sigma_x (x) I) -> |10><10|
        let rho = StateVector::basis(4, 0).unwrap().to_density();
        let u = sigma_x().tensor(&UnitaryMatrix::identity(2).unwrap()).unwrap();
        let out = rho.evolve(&u).unwrap();
        let want = StateVector::basis(4, 2).unwrap().to_density();
        for i in 0..4 {
            for j in 0..4 {
                assert!((out.entry(i, j) - want.entry(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn evolve_dim_mismatch_rejected() {
        let rho = StateVector::basis(4, 0).unwrap().to_density();
        let u = UnitaryMatrix::identity(2).unwrap();
        assert!(matches!(rho.evolve(&u), Err(QmatError::DimMismatch(4, 2))));
    }

    #[test]
    fn maximally_entangling_gate_by_hand() {
        // J at full entanglement is (I + i D (x) D)/sqrt(2); applied to |00>
        // it gives (|00> + i|11>)/sqrt(2).
        let d = flip_d();
        let dd = d.tensor(&d).unwrap();
        let i4 = UnitaryMatrix::identity(4).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let entries: Vec<Complex64> = i4
            .entries()
            .iter()
            .zip(dd.entries())
            .map(|(a, b)| inv_sqrt2 * (a + Complex64::i() * b))
            .collect();
        let j = UnitaryMatrix::new(4, entries).unwrap();
        let out = j.apply(&StateVector::basis(4, 0).unwrap()).unwrap();
        let rho = out.to_density();
        assert!((rho.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((rho.entry(3, 3) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((rho.entry(0, 3) - c(0.0, -0.5)).norm() < 1e-14);
        assert!((rho.entry(3, 0) - c(0.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn diagnostics_on_maximally_mixed() {
        let dim = 4;
        let mut entries = vec![Complex64::ZERO; 16];
        for i in 0..dim {
            entries[i * dim + i] = c(0.25, 0.0);
        }
        let diag = density_diagnostics(dim, &entries);
        assert!(diag.hermiticity_defect == 0.0);
        assert!(diag.trace_defect < 1e-15);
        assert!((diag.min_eigenvalue - 0.25).abs() < 1e-12);
        assert!(diag.is_valid());
    }

    #[test]
    fn diagnostics_flag_non_hermitian() {
        let mut entries = vec![Complex64::ZERO; 4];
        entries[0] = c(1.0, 0.0);
        entries[1] = c(0.3, 0.0); // no matching (1,0) entry
        let diag = density_diagnostics(2, &entries);
        assert!(diag.hermiticity_defect > 0.1);
        assert!(!diag.is_valid());
    }

    #[test]
    fn eigenvalues_of_pure_state_projector() {
        let amp = 1.0 / 2.0f64.sqrt();
        let psi = StateVector::new(vec![c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, amp)])
            .unwrap();
        let eig = psi.to_density().eigenvalues();
        assert!((eig[3] - 1.0).abs() < 1e-12);
        for v in &eig[..3] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_match_trace_and_frobenius() {
        // Hermitian 3x3 built as B + B^dag.
        let b = [
            c(0.3, 0.0), c(0.2, 0.5), c(-0.1, 0.7),
            c(0.0, 0.0), c(-0.4, 0.0), c(0.9, -0.2),
            c(0.5, 0.1), c(0.0, 0.3), c(0.8, 0.0),
        ];
        let mut h = vec![Complex64::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                h[i * 3 + j] = b[i * 3 + j] + b[j * 3 + i].conj();
            }
        }
        let eig = hermitian_eigenvalues(3, &h);
        let trace: f64 = (0..3).map(|i| h[i * 3 + i].re).sum();
        let frob: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-10);
        assert!((eig.iter().map(|v| v * v).sum::<f64>() - frob).abs() < 1e-9);
    }

    #[test]
    fn constructors_reject_invalid_input() {
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0); 5]),
            Err(QmatError::UnsupportedDim(5))
        ));
        assert!(matches!(
            StateVector::new(vec![c(0.9, 0.0), c(0.0, 0.0)]),
            Err(QmatError::NotNormalized(_))
        ));
        assert!(matches!(
            UnitaryMatrix::new(2, vec![c(1.0, 0.0); 4]),
            Err(QmatError::NotUnitary(_))
        ));
        let mut entries = vec![Complex64::ZERO; 4];
        entries[0] = c(0.7, 0.0);
        entries[3] = c(0.2, 0.0);
        assert!(matches!(
            DensityMatrix::new(2, entries),
            Err(QmatError::BadTrace(_))
        ));
    }

    #[test]
    fn mixture_weights_must_be_convex() {
        let rho = StateVector::basis(2, 0).unwrap().to_density();
        let err = DensityMatrix::mix(&[(0.4, rho.clone()), (0.4, rho)]);
        assert!(matches!(err, Err(QmatError::BadMixture(_))));
    }
}
