//! entkit — a toolkit for quantifying and constructing multipartite entanglement
//! in finite discrete quantum systems.
//!
//! The central quantity is the *ent* Υ of a pure state: one minus the average
//! *unitized* reduction purity over all modes, normalized so that Υ = 1 exactly
//! for maximally entangled states and Υ = 0 for product states.  Around it the
//! crate provides:
//!
//! - mode-aware index arithmetic, partial traces, and mode permutations
//!   ([`modes`], [`state`]);
//! - the minimum-physical-purity function, the normalization `M(L)`, and the
//!   search for the level counts `L*` that support maximal entanglement
//!   ([`measure`]);
//! - a deterministic thirteen-step search (`a13`) for every maximally entangled
//!   TGX level set through a chosen starting level, plus a closed form for
//!   multiqudit systems ([`tgx`]);
//! - maximally entangled bases assembled from exact covers of the level space,
//!   expanded with Fourier phases ([`meb`]);
//! - parameterized families: single- and multi-angle TGX states,
//!   entanglement-preserving unitaries, Schmidt decomposition and its reverse,
//!   and worked non-TGX families in 2×2 and 2×2×3 ([`param`]);
//! - modal and partitional ent, the ent vector and ent array, net/absolute ent,
//!   and genuinely-multipartite (GM) ent ([`multi`]);
//! - decomposition machinery and brute-force rank-2 convex-roof minimization
//!   for mixed states ([`roof`]);
//! - a JSON state-file format and machine-readable reports ([`io`]);
//! - stable reference-table row generators shared by the command-line tool
//!   and the test suite ([`artifacts`]).
//!
//! Levels and mode labels are 1-based throughout the public API, matching the
//! usual ket convention `|1⟩ … |n⟩`; storage is 0-based internally.

pub mod artifacts;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod meb;
pub mod modes;
pub mod multi;
pub mod param;
pub mod roof;
pub mod state;
pub mod tgx;

pub mod io;

pub use error::{EntKitError, Result};
pub use modes::{ModeList, ModeStructure};
pub use state::{DensityMatrix, StateVector};

/// Tolerance for state validation (norms, Hermiticity, trace).
pub const EPS_NORM: f64 = 1e-10;

/// Tolerance for value comparisons in tests and classifications.
pub const EPS_MATCH: f64 = 1e-9;

/// Relative tolerance when selecting the argmin set over `1 − M(L)`.
///
/// Members of the true `L*` set are exactly equal in rational arithmetic, so a
/// near-tie at this tolerance is a genuine tie; an exact-rational path is also
/// provided to rule out float artifacts.
pub const TOL_LSTAR: f64 = 1e-9;

/// Maximum mixed-state rank supported by the exact-grid convex-roof search.
pub const RMAX_ROOF: usize = 2;

/// Eigenvalues below this cutoff are treated as zero when ranking a density
/// matrix for decomposition.
pub const RANK_EPS: f64 = 1e-10;

/// Decomposition members with probability below this are dropped.
pub const P_DROP: f64 = 1e-12;

/// Purity above `1 − PURE_REDUCTION_EPS` routes a reduction to the pure-state
/// ent; anything more mixed requires the convex-roof (formation) variant.
pub const PURE_REDUCTION_EPS: f64 = 1e-8;

/// Guardrail on the number of candidate level-set combinations the
/// thirteen-step search will enumerate.
pub const COMBINATION_CAP: u128 = 10_000_000;
