//! Decompositions of density matrices and brute-force rank-2 convex-roof
//! minimization for any pure-state measure.
//!
//! Every decomposition of a rank-`R` density matrix into `D ≥ R` weighted
//! pure states arises from a `D×D` unitary acting on the eigendecomposition:
//! `|w̃_j⟩ = Σ_k U[j,k]·√λ_k·|e_k⟩` with probabilities `p_j = ⟨w̃_j|w̃_j⟩`.
//! For rank 2 with `D = 2`, member phases drop out of any measure average,
//! so the search space collapses to two parameters
//! `U(θ,χ) = [[cosθ, sinθ·e^{iχ}], [−sinθ·e^{−iχ}, cosθ]]`; the roof is the
//! grid minimum of the decomposition-averaged measure plus a golden-section
//! refinement around the best cell.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{EntKitError, Result};
use crate::linalg::is_unitary;
use crate::modes::ModeStructure;
use crate::state::{DensityMatrix, StateVector};
use crate::{P_DROP, RANK_EPS, RMAX_ROOF};

/// Default decomposition-search grid: 30 points per parameter.
pub const DEFAULT_ROOF_GRID: (usize, usize) = (30, 30);

/// Objective tolerance of the golden-section refinement.
pub const ROOF_REFINE_TOL: f64 = 1e-6;

/// A weighted pure-state decomposition of a density matrix.
#[derive(Debug, Clone)]
pub struct Decomposition {
    probabilities: Vec<f64>,
    members: Vec<StateVector>,
    dropped_mass: f64,
    unitary: Array2<Complex64>,
}

impl Decomposition {
    /// The member probabilities (those below the drop threshold omitted).
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// The normalized member states, aligned with the probabilities.
    pub fn members(&self) -> &[StateVector] {
        &self.members
    }

    /// Probability mass of members dropped below [`crate::P_DROP`].
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    /// The unitary that produced this decomposition.
    pub fn unitary(&self) -> &Array2<Complex64> {
        &self.unitary
    }

    /// `Σ p_j |w_j⟩⟨w_j|`, for reconstruction checks.
    pub fn assemble(&self) -> Result<DensityMatrix> {
        let parts: Vec<(f64, StateVector)> = self
            .probabilities
            .iter()
            .zip(&self.members)
            .map(|(&p, w)| (p, w.clone()))
            .collect();
        DensityMatrix::mixture(&parts)
    }

    /// Probability-weighted average of a pure-state measure over members.
    pub fn average<F>(&self, measure: F) -> Result<f64>
    where
        F: Fn(&StateVector) -> Result<f64>,
    {
        let mut total = 0.0;
        for (&p, w) in self.probabilities.iter().zip(&self.members) {
            total += p * measure(w)?;
        }
        Ok(total)
    }
}

/// Expands a density matrix through a `D×D` unitary into `D` weighted pure
/// members (`D` at least the rank; eigenvalues under [`crate::RANK_EPS`]
/// count as zero).  Members lighter than [`crate::P_DROP`] are omitted and
/// their mass reported on the result.
pub fn decompose(rho: &DensityMatrix, u: &Array2<Complex64>) -> Result<Decomposition> {
    if u.nrows() != u.ncols() {
        return Err(EntKitError::InvalidArgument(format!(
            "decomposition operator is {}×{}, not square",
            u.nrows(),
            u.ncols()
        )));
    }
    if !is_unitary(u, 1e-8) {
        return Err(EntKitError::Validation(
            "decomposition operator is not unitary".into(),
        ));
    }
    let (eigenvalues, eigenvectors) = rho.eigensystem();
    let rank = eigenvalues.iter().filter(|&&x| x > RANK_EPS).count();
    let d = u.nrows();
    if d < rank {
        return Err(EntKitError::InvalidArgument(format!(
            "operator size {d} is below the rank {rank}"
        )));
    }
    let n = rho.structure().dim();
    let roots: Vec<f64> = eigenvalues[..rank].iter().map(|&x| x.sqrt()).collect();
    let mut probabilities = Vec::with_capacity(d);
    let mut members = Vec::with_capacity(d);
    let mut dropped_mass = 0.0;
    for j in 0..d {
        let mut unnormalized = vec![Complex64::new(0.0, 0.0); n];
        for (k, &root) in roots.iter().enumerate() {
            let coefficient = u[[j, k]] * root;
            for (r, slot) in unnormalized.iter_mut().enumerate() {
                *slot += coefficient * eigenvectors[[r, k]];
            }
        }
        let p: f64 = unnormalized.iter().map(|a| a.norm_sqr()).sum();
        if p < P_DROP {
            dropped_mass += p;
            continue;
        }
        let scale = 1.0 / p.sqrt();
        let amplitudes = unnormalized.into_iter().map(|a| a * scale).collect();
        members.push(StateVector::new(rho.structure().clone(), amplitudes)?);
        probabilities.push(p);
    }
    Ok(Decomposition {
        probabilities,
        members,
        dropped_mass,
        unitary: u.clone(),
    })
}

/// The two-parameter decomposition unitary
/// `[[cosθ, sinθ·e^{iχ}], [−sinθ·e^{−iχ}, cosθ]]`.
pub fn rank2_unitary(theta: f64, chi: f64) -> Array2<Complex64> {
    let (sin, cos) = theta.sin_cos();
    let phase = Complex64::from_polar(1.0, chi);
    let mut u = Array2::from_elem((2, 2), Complex64::new(0.0, 0.0));
    u[[0, 0]] = Complex64::new(cos, 0.0);
    u[[0, 1]] = phase * sin;
    u[[1, 0]] = -phase.conj() * sin;
    u[[1, 1]] = Complex64::new(cos, 0.0);
    u
}

/// Result of a rank-2 roof search: the refined minimum, its parameters, and
/// the full grid surface for plotting.
#[derive(Debug, Clone)]
pub struct RoofRank2 {
    minimum: f64,
    theta: f64,
    chi: f64,
    grid_minimum: f64,
    grid_argmin: (usize, usize),
    thetas: Vec<f64>,
    chis: Vec<f64>,
    surface: Array2<f64>,
}

impl RoofRank2 {
    /// The refined minimum average.
    pub fn minimum(&self) -> f64 {
        self.minimum
    }

    /// Parameters of the refined minimum.
    pub fn argmin(&self) -> (f64, f64) {
        (self.theta, self.chi)
    }

    /// The best grid value before refinement (never below the minimum).
    pub fn grid_minimum(&self) -> f64 {
        self.grid_minimum
    }

    /// Grid indices of the best cell (ties resolved toward smaller θ, then
    /// smaller χ).
    pub fn grid_argmin(&self) -> (usize, usize) {
        self.grid_argmin
    }

    /// The θ grid values.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// The χ grid values.
    pub fn chis(&self) -> &[f64] {
        &self.chis
    }

    /// The averaged-measure surface, indexed `[θ, χ]`.
    pub fn surface(&self) -> &Array2<f64> {
        &self.surface
    }
}

fn golden_refine<F>(objective: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    let (mut best_x, mut best_f) = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..80 {
        if (fc - fd).abs() < tol && (b - a) < 1e-4 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = objective(d)?;
        }
        if fc < best_f {
            best_f = fc;
            best_x = c;
        }
        if fd < best_f {
            best_f = fd;
            best_x = d;
        }
    }
    Ok((best_x, best_f))
}

/// Minimizes the decomposition-averaged measure over the two-parameter
/// unitary family for a matrix of rank at most 2.
///
/// The grid covers `θ ∈ [0, π/2]` inclusively and `χ ∈ [0, 2π)`; after the
/// sweep, one golden-section pass per axis refines around the best cell.
/// Refinement only ever lowers the reported minimum.
pub fn roof_rank2<F>(
    rho: &DensityMatrix,
    measure: F,
    grid: (usize, usize),
) -> Result<RoofRank2>
where
    F: Fn(&StateVector) -> Result<f64> + Sync,
{
    let rank = rho.rank(RANK_EPS);
    if rank > RMAX_ROOF {
        return Err(EntKitError::UnsupportedRank {
            rank,
            max: RMAX_ROOF,
        });
    }
    let (n_theta, n_chi) = grid;
    if n_theta < 2 || n_chi < 2 {
        return Err(EntKitError::InvalidArgument(format!(
            "grid {n_theta}×{n_chi} too small; need at least 2×2"
        )));
    }
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| FRAC_PI_2 * i as f64 / (n_theta - 1) as f64)
        .collect();
    let chis: Vec<f64> = (0..n_chi).map(|j| TAU * j as f64 / n_chi as f64).collect();

    let objective = |theta: f64, chi: f64| -> Result<f64> {
        decompose(rho, &rank2_unitary(theta, chi))?.average(&measure)
    };

    let rows: Vec<Vec<f64>> = thetas
        .par_iter()
        .map(|&theta| chis.iter().map(|&chi| objective(theta, chi)).collect())
        .collect::<Result<_>>()?;
    let mut surface = Array2::zeros((n_theta, n_chi));
    let mut grid_minimum = f64::INFINITY;
    let mut grid_argmin = (0, 0);
    for (i, row) in rows.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            surface[[i, j]] = value;
            if value < grid_minimum {
                grid_minimum = value;
                grid_argmin = (i, j);
            }
        }
    }

    // One refinement pass: golden-section along θ (χ fixed), then along χ.
    let (i0, j0) = grid_argmin;
    let theta_step = FRAC_PI_2 / (n_theta - 1) as f64;
    let chi_step = TAU / n_chi as f64;
    let theta_lo = (thetas[i0] - theta_step).max(0.0);
    let theta_hi = (thetas[i0] + theta_step).min(FRAC_PI_2);
    let chi_center = chis[j0];
    let (theta_best, f_theta) = golden_refine(
        |theta| objective(theta, chi_center),
        theta_lo,
        theta_hi,
        ROOF_REFINE_TOL,
    )?;
    let (chi_best_raw, f_chi) = golden_refine(
        |chi| objective(theta_best, chi.rem_euclid(TAU)),
        chi_center - chi_step,
        chi_center + chi_step,
        ROOF_REFINE_TOL,
    )?;
    let chi_best = chi_best_raw.rem_euclid(TAU);

    let mut minimum = grid_minimum;
    let mut theta = thetas[i0];
    let mut chi = chis[j0];
    if f_theta < minimum {
        minimum = f_theta;
        theta = theta_best;
        chi = chi_center;
    }
    if f_chi < minimum {
        minimum = f_chi;
        theta = theta_best;
        chi = chi_best;
    }

    Ok(RoofRank2 {
        minimum,
        theta,
        chi,
        grid_minimum,
        grid_argmin,
        thetas,
        chis,
        surface,
    })
}

/// Rank-2 roof of the genuinely multipartite measure: each decomposition
/// member may settle on its own minimizing bipartition.
pub fn gm_roof(rho: &DensityMatrix, grid: (usize, usize)) -> Result<RoofRank2> {
    roof_rank2(
        rho,
        |w| crate::multi::gm_ent(w).map(|report| report.value()),
        grid,
    )
}

/// Convenience: roof of the plain ent measure.
pub fn ent_roof(rho: &DensityMatrix, grid: (usize, usize)) -> Result<RoofRank2> {
    roof_rank2(rho, |w| crate::measure::ent(w).map(|report| report.ent()), grid)
}

/// Checks a structure can host roof members (two or more modes).
pub fn supports_roof(structure: &ModeStructure) -> bool {
    structure.mode_count() >= 2
}
