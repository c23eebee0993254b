//! Payoff evaluation, Nash-equilibrium certification and evolutionary
//! stability analysis for quantized matrix games.
//!
//! Two quantization engines are provided: the gate-based scheme with an
//! entangling gate and its inverse around local strategy unitaries
//! ([`ewl`]), and the initial-state scheme where players mix permutation
//! tactics over a shared entangled state ([`mw`]). Classical game data live
//! in [`games`], the fixed-dimension complex linear algebra in [`qmat`],
//! equilibrium and stability certification in [`stability`], and replicator
//! dynamics in [`replicator`].

pub mod ewl;
pub mod games;
pub mod mw;
pub mod qmat;
pub mod replicator;
pub mod stability;

pub use num_complex::Complex64;
