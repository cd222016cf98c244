//! The ent measure Υ for pure states and its scaffolding: minimum physical
//! purity, the normalization `M(L)`, the search for the level counts `L*`
//! supporting maximal entanglement, unitized purities, an alternative
//! normalization of the measure, and closed forms for the two-mode squeezed
//! vacuum.
//!
//! For a pure state of structure `(n₁,…,n_N)` the ent is
//!
//! ```text
//! Υ = (1/M) · (1 − (1/N) Σₘ (nₘ Pₘ − 1)/(nₘ − 1))
//! ```
//!
//! where `Pₘ` is the purity of the reduction to mode `m` and `M = M(L*)`
//! rescales so that the most entangled states reach exactly 1.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::Ratio;

use crate::error::{EntKitError, Result};
use crate::modes::{ModeList, ModeStructure};
use crate::state::StateVector;
use crate::TOL_LSTAR;

type Rational = Ratio<i128>;

/// Minimum physical purity of an `n_m`-level reduction when the parent is a
/// balanced `L`-level TGX superposition: the reduction diagonal holds
/// `mod(L,n_m)` values `(1+⌊L/n_m⌋)/L` and `n_m − mod(L,n_m)` values
/// `⌊L/n_m⌋/L`.
pub fn p_mp(l: usize, n_m: usize) -> f64 {
    let q = (l / n_m) as f64;
    let rem = (l % n_m) as f64;
    let l = l as f64;
    rem * ((1.0 + q) / l).powi(2) + (n_m as f64 - rem) * (q / l).powi(2)
}

/// Exact-rational form of [`p_mp`].
pub fn p_mp_rational(l: usize, n_m: usize) -> Rational {
    let q = (l / n_m) as i128;
    let rem = (l % n_m) as i128;
    let l = l as i128;
    let n_m = n_m as i128;
    Rational::new(rem * (1 + q) * (1 + q) + (n_m - rem) * q * q, l * l)
}

fn check_l_range(l: usize, structure: &ModeStructure) -> Result<()> {
    let hi = structure.nbar_max();
    if l < 2 || l > hi {
        return Err(EntKitError::InvalidArgument(format!(
            "level count {l} outside 2..={hi} for structure {structure}"
        )));
    }
    Ok(())
}

/// The normalization `M(L) = 1 − (1/N) Σₘ (nₘ·p_mp(L,nₘ) − 1)/(nₘ − 1)`.
pub fn normalization_m(l: usize, structure: &ModeStructure) -> Result<f64> {
    check_l_range(l, structure)?;
    Ok(1.0 - normalization_residual(l, structure))
}

/// The residual `1 − M(L)`: the lowest average unitized reduction purity any
/// `L`-level superposition can reach.  Zero exactly when `L`-level states can
/// be maximally entangled with every reduction maximally mixed.
pub fn normalization_residual(l: usize, structure: &ModeStructure) -> f64 {
    let n_modes = structure.mode_count() as f64;
    structure
        .modes()
        .iter()
        .map(|&n_m| (n_m as f64 * p_mp(l, n_m) - 1.0) / (n_m as f64 - 1.0))
        .sum::<f64>()
        / n_modes
}

/// Exact-rational form of [`normalization_residual`].
pub fn normalization_residual_rational(l: usize, structure: &ModeStructure) -> Rational {
    let n_modes = Rational::from_integer(structure.mode_count() as i128);
    let sum: Rational = structure
        .modes()
        .iter()
        .map(|&n_m| {
            let n = i128::try_from(n_m).expect("mode size fits i128");
            (Rational::from_integer(n) * p_mp_rational(l, n_m)
                - Rational::from_integer(1))
                / Rational::from_integer(n - 1)
        })
        .sum();
    sum / n_modes
}

/// All level counts `L ∈ 2..=n̄_max` minimizing `1 − M(L)`, ascending.
///
/// Selection uses an absolute tolerance of [`TOL_LSTAR`] on the residual
/// (which lives in `[0,1]`, so absolute and relative coincide at scale);
/// genuine ties are exactly equal in rational arithmetic — see
/// [`lstar_set_exact`] — and any near-tie at this tolerance is a true tie.
pub fn lstar_set(structure: &ModeStructure) -> Result<Vec<usize>> {
    let range = lstar_candidates(structure)?;
    let residuals: Vec<f64> = range
        .iter()
        .map(|&l| normalization_residual(l, structure))
        .collect();
    let min = residuals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(range
        .into_iter()
        .zip(residuals)
        .filter(|&(_, r)| r - min <= TOL_LSTAR)
        .map(|(l, _)| l)
        .collect())
}

/// Exact-rational variant of [`lstar_set`], immune to float artifacts.
pub fn lstar_set_exact(structure: &ModeStructure) -> Result<Vec<usize>> {
    let range = lstar_candidates(structure)?;
    let residuals: Vec<Rational> = range
        .iter()
        .map(|&l| normalization_residual_rational(l, structure))
        .collect();
    let min = *residuals.iter().min().expect("range nonempty");
    Ok(range
        .into_iter()
        .zip(residuals)
        .filter(|(_, r)| *r == min)
        .map(|(l, _)| l)
        .collect())
}

fn lstar_candidates(structure: &ModeStructure) -> Result<Vec<usize>> {
    if structure.mode_count() < 2 {
        return Err(EntKitError::UnsupportedStructure(
            "the ent and its level-count search need at least 2 modes".into(),
        ));
    }
    Ok((2..=structure.nbar_max()).collect())
}

/// Precomputed per-structure context for evaluating the ent: the `L*` set, a
/// chosen representative, the normalization `M`, and each mode's minimum
/// physical purity at that representative.
#[derive(Debug, Clone)]
pub struct EntContext {
    structure: ModeStructure,
    lstar_set: Vec<usize>,
    lstar: usize,
    m: f64,
    pmp_per_mode: Vec<f64>,
}

impl EntContext {
    /// Context with the conventional representative `L* = min(𝐋*)`.
    pub fn new(structure: &ModeStructure) -> Result<Self> {
        let set = lstar_set(structure)?;
        let lstar = set[0];
        Self::with_representative(structure, lstar)
    }

    /// Context with an explicit representative from the `L*` set.
    ///
    /// The normalization `M` is identical at every member (that is what makes
    /// it a set), so this choice only affects which `p_mp` pattern is
    /// reported per mode.
    pub fn with_representative(structure: &ModeStructure, lstar: usize) -> Result<Self> {
        let set = lstar_set(structure)?;
        if !set.contains(&lstar) {
            return Err(EntKitError::InvalidArgument(format!(
                "{lstar} is not in the L* set {set:?} of {structure}"
            )));
        }
        let m = normalization_m(lstar, structure)?;
        let pmp_per_mode = structure.modes().iter().map(|&n_m| p_mp(lstar, n_m)).collect();
        Ok(Self {
            structure: structure.clone(),
            lstar_set: set,
            lstar,
            m,
            pmp_per_mode,
        })
    }

    /// Shared, memoized context for a structure (conventional representative).
    pub fn cached(structure: &ModeStructure) -> Result<Arc<Self>> {
        static CACHE: OnceLock<RwLock<HashMap<ModeStructure, Arc<EntContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(ctx) = cache.read().expect("cache lock").get(structure) {
            return Ok(Arc::clone(ctx));
        }
        let ctx = Arc::new(Self::new(structure)?);
        let mut write = cache.write().expect("cache lock");
        Ok(Arc::clone(
            write
                .entry(structure.clone())
                .or_insert_with(|| Arc::clone(&ctx)),
        ))
    }

    /// The structure this context describes.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// The full ascending `L*` set.
    pub fn lstar_set(&self) -> &[usize] {
        &self.lstar_set
    }

    /// The chosen representative `L*`.
    pub fn lstar(&self) -> usize {
        self.lstar
    }

    /// The normalization `M = M(L*)` in `(0, 1]`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Each mode's minimum physical purity `p_mp(L*, nₘ)`.
    pub fn pmp_per_mode(&self) -> &[f64] {
        &self.pmp_per_mode
    }
}

/// Rescales a purity to `[0,1]` for an `n`-level system: `(nP − 1)/(n − 1)`;
/// 0 for maximally mixed, 1 for pure.
pub fn unitized_purity(purity: f64, n: usize) -> f64 {
    (n as f64 * purity - 1.0) / (n as f64 - 1.0)
}

/// Everything the ent evaluation produced: the raw value, a `[0,1]`-clamped
/// display copy, the per-mode reduction and unitized purities, and the
/// structure context.
///
/// The raw value can exceed 1 by a hair for special non-TGX states in
/// structures whose normalization residual is positive (the measure's
/// normalizer targets TGX maxima), so tests and diagnostics always use
/// [`ent`](Self::ent); [`ent_clamped`](Self::ent_clamped) exists for
/// presentation.
#[derive(Debug, Clone)]
pub struct EntReport {
    ent: f64,
    reduction_purities: Vec<f64>,
    unitized_purities: Vec<f64>,
    context: Arc<EntContext>,
}

impl EntReport {
    /// The raw ent value.
    pub fn ent(&self) -> f64 {
        self.ent
    }

    /// The ent clamped to `[0,1]` for display.
    pub fn ent_clamped(&self) -> f64 {
        self.ent.clamp(0.0, 1.0)
    }

    /// Purity of each single-mode reduction.
    pub fn reduction_purities(&self) -> &[f64] {
        &self.reduction_purities
    }

    /// Unitized purity of each single-mode reduction.
    pub fn unitized_purities(&self) -> &[f64] {
        &self.unitized_purities
    }

    /// The structure context (L* set, normalization, per-mode minima).
    pub fn context(&self) -> &EntContext {
        &self.context
    }
}

/// Computes the ent of a pure state, reporting per-mode purities alongside
/// the value.  Requires at least two modes.
pub fn ent(psi: &StateVector) -> Result<EntReport> {
    let context = EntContext::cached(psi.structure())?;
    ent_with_context(psi, context)
}

/// As [`ent`] but with a caller-chosen context (e.g. a non-default `L*`
/// representative).
pub fn ent_with_context(psi: &StateVector, context: Arc<EntContext>) -> Result<EntReport> {
    let structure = psi.structure();
    if structure != context.structure() {
        return Err(EntKitError::InvalidArgument(format!(
            "context is for {}, state is in {structure}",
            context.structure()
        )));
    }
    let rho = psi.density();
    let mut reduction_purities = Vec::with_capacity(structure.mode_count());
    let mut unitized = Vec::with_capacity(structure.mode_count());
    for (m, &n_m) in structure.modes().iter().enumerate() {
        let keep = ModeList::new(&[m + 1], structure)?;
        let purity = rho.partial_trace(&keep)?.purity();
        reduction_purities.push(purity);
        unitized.push(unitized_purity(purity, n_m));
    }
    let mean_unitized = unitized.iter().sum::<f64>() / structure.mode_count() as f64;
    let value = (1.0 - mean_unitized) / context.m();
    Ok(EntReport {
        ent: value,
        reduction_purities,
        unitized_purities: unitized,
        context,
    })
}

/// Combines precomputed single-part reduction purities into the ent value
/// under the context's structure: `(1 − mean unitized purity)/M`.
///
/// Lets callers evaluate the measure on coarser part structures (e.g. mode
/// blocks) where the purities come from grouped reductions rather than
/// single modes.
pub fn ent_from_reduction_purities(context: &EntContext, purities: &[f64]) -> Result<f64> {
    let structure = context.structure();
    if purities.len() != structure.mode_count() {
        return Err(EntKitError::InvalidArgument(format!(
            "{} purities for {} parts",
            purities.len(),
            structure.mode_count()
        )));
    }
    let mean_unitized = purities
        .iter()
        .zip(structure.modes())
        .map(|(&p, &n_m)| unitized_purity(p, n_m))
        .sum::<f64>()
        / structure.mode_count() as f64;
    Ok((1.0 - mean_unitized) / context.m())
}

/// An alternative normalization of the measure:
/// `1 − (1/N) Σₘ (Pₘ − p_mpₘ)/(1 − p_mpₘ)`, which also reaches 1 exactly on
/// maximally entangled states and 0 on product states, rescaling each mode
/// individually instead of averaging first.
pub fn alternative_ent(psi: &StateVector) -> Result<f64> {
    let context = EntContext::cached(psi.structure())?;
    let structure = psi.structure();
    let rho = psi.density();
    let mut sum = 0.0;
    for (m, &pmp_m) in context.pmp_per_mode().iter().enumerate() {
        let keep = ModeList::new(&[m + 1], structure)?;
        let purity = rho.partial_trace(&keep)?.purity();
        let denom = 1.0 - pmp_m;
        if denom <= 0.0 {
            return Err(EntKitError::InternalInconsistency(format!(
                "degenerate minimum purity {pmp_m} for mode {}",
                m + 1
            )));
        }
        sum += (purity - pmp_m) / denom;
    }
    Ok(1.0 - sum / structure.mode_count() as f64)
}

/// Closed-form ent of the two-mode squeezed vacuum at squeezing `r`:
/// `1 − 1/(2cosh²r − 1)`.
pub fn ent_two_mode_squeezed(r: f64) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(EntKitError::InvalidArgument(format!(
            "squeezing parameter must be finite and ≥ 0, got {r}"
        )));
    }
    let c2 = r.cosh().powi(2);
    Ok(1.0 - 1.0 / (2.0 * c2 - 1.0))
}

/// Converts a target ent `Υ* < 1` of the two-mode squeezed vacuum into the
/// squeezing parameter achieving it and the matching logarithmic negativity:
/// `r* = acosh(√(½(1/(1−Υ*)+1)))`, `E_N = r*/ln√2`.
pub fn logneg_gauge(upsilon_star: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&upsilon_star) {
        return Err(EntKitError::InvalidArgument(format!(
            "target ent must be in [0,1) (1 needs infinite squeezing), got {upsilon_star}"
        )));
    }
    let r_star = (0.5 * (1.0 / (1.0 - upsilon_star) + 1.0)).sqrt().acosh();
    let e_n = r_star / 2.0f64.sqrt().ln();
    Ok((r_star, e_n))
}

/// Partial sum `Σ_{k=0}^{cutoff} p_k²` of the squeezed vacuum's thermal
/// reduction purity, with `p_k = tanh^{2k}(r)/cosh²(r)` — a truncated-Fock
/// oracle for [`ent_two_mode_squeezed`].
///
/// The truncation error is `P·λ^{2(cutoff+1)}` with `λ = tanh²r`; use
/// [`squeezed_cutoff_for`] to size the cutoff for a tolerance.
pub fn squeezed_purity_truncated(r: f64, cutoff: usize) -> f64 {
    let lambda = r.tanh().powi(2);
    let head = 1.0 / r.cosh().powi(2); // p₀ = 1 − λ
    let mut p_k = head;
    let mut sum = 0.0;
    for _ in 0..=cutoff {
        sum += p_k * p_k;
        p_k *= lambda;
    }
    sum
}

/// Smallest Fock cutoff making the truncation error of
/// [`squeezed_purity_truncated`] at squeezing `r` at most `tol`.
pub fn squeezed_cutoff_for(r: f64, tol: f64) -> usize {
    let lambda = r.tanh().powi(2);
    if lambda <= 0.0 {
        return 0;
    }
    let purity = 1.0 / (2.0 * r.cosh().powi(2) - 1.0);
    // Need λ^{2(K+1)} ≤ tol/P.
    let needed = (tol / purity).ln() / (2.0 * lambda.ln());
    needed.ceil().max(0.0) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_pure_state, random_pure_state_with_rng};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn structure(modes: &[usize]) -> ModeStructure {
        ModeStructure::new(modes).unwrap()
    }

    #[test]
    fn p_mp_golden_values() {
        assert_relative_eq!(p_mp(4, 2), 0.5, epsilon = 1e-15);
        assert_relative_eq!(p_mp(4, 3), 3.0 / 8.0, epsilon = 1e-15);
        assert_relative_eq!(p_mp(6, 2), 0.5, epsilon = 1e-15);
        assert_relative_eq!(p_mp(6, 3), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(p_mp(6, 4), 5.0 / 18.0, epsilon = 1e-15);
        assert_eq!(p_mp_rational(4, 3), Rational::new(3, 8));
        assert_eq!(p_mp_rational(6, 4), Rational::new(5, 18));
        // n_m ≥ L: the reduction spreads over L equal entries.
        assert_eq!(p_mp_rational(2, 5), Rational::new(1, 2));
    }

    #[test]
    fn residual_golden_223() {
        let s = structure(&[2, 2, 3]);
        assert_eq!(
            normalization_residual_rational(2, &s),
            Rational::new(1, 12)
        );
        assert_eq!(
            normalization_residual_rational(3, &s),
            Rational::new(2, 27)
        );
        assert_eq!(
            normalization_residual_rational(4, &s),
            Rational::new(1, 48)
        );
        assert_relative_eq!(normalization_residual(2, &s), 1.0 / 12.0, epsilon = 1e-12);
        assert_relative_eq!(normalization_residual(3, &s), 2.0 / 27.0, epsilon = 1e-12);
        assert_relative_eq!(normalization_residual(4, &s), 1.0 / 48.0, epsilon = 1e-12);
        assert!(normalization_m(1, &s).is_err());
        assert!(normalization_m(5, &s).is_err());
    }

    #[test]
    fn lstar_golden_sets() {
        assert_eq!(lstar_set(&structure(&[2, 2, 2])).unwrap(), vec![2, 4]);
        assert_eq!(lstar_set(&structure(&[3, 3, 3])).unwrap(), vec![3, 6, 9]);
        assert_eq!(lstar_set(&structure(&[2, 3, 4])).unwrap(), vec![6]);
        assert_eq!(lstar_set(&structure(&[2, 2, 3])).unwrap(), vec![4]);
        assert_eq!(
            lstar_set(&structure(&[2, 2, 2, 2])).unwrap(),
            vec![2, 4, 6, 8]
        );
        assert!(lstar_set(&structure(&[5])).is_err());
    }

    /// Every ordered factorization into parts ≥ 2 with product ≤ `max_dim`
    /// and at least two modes.
    fn all_structures(max_dim: usize) -> Vec<ModeStructure> {
        fn extend(
            prefix: &mut Vec<usize>,
            product: usize,
            max_dim: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if prefix.len() >= 2 {
                out.push(prefix.clone());
            }
            let mut k = 2;
            while product * k <= max_dim {
                prefix.push(k);
                extend(prefix, product * k, max_dim, out);
                prefix.pop();
                k += 1;
            }
        }
        let mut raw = Vec::new();
        extend(&mut Vec::new(), 1, max_dim, &mut raw);
        raw.iter().map(|m| structure(m)).collect()
    }

    #[test]
    fn float_and_exact_lstar_agree_exhaustively() {
        for s in all_structures(64) {
            assert_eq!(
                lstar_set(&s).unwrap(),
                lstar_set_exact(&s).unwrap(),
                "structure {s}"
            );
        }
    }

    #[test]
    fn m_agrees_at_every_set_member() {
        for s in all_structures(64) {
            let set = lstar_set(&s).unwrap();
            let m0 = normalization_m(set[0], &s).unwrap();
            for &l in &set {
                assert!(
                    (normalization_m(l, &s).unwrap() - m0).abs() <= 1e-12,
                    "structure {s}, L={l}"
                );
            }
        }
    }

    #[test]
    fn context_representative_is_checkable() {
        let s = structure(&[2, 2, 2]);
        let ctx = EntContext::new(&s).unwrap();
        assert_eq!(ctx.lstar(), 2);
        let ctx4 = EntContext::with_representative(&s, 4).unwrap();
        assert_eq!(ctx4.lstar(), 4);
        assert_relative_eq!(ctx.m(), ctx4.m(), epsilon = 1e-12);
        assert!(EntContext::with_representative(&s, 3).is_err());
        let cached = EntContext::cached(&s).unwrap();
        assert_eq!(cached.lstar_set(), &[2, 4]);
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ent_golden_bell_basis_and_ghz() {
        let s = structure(&[2, 2]);
        let inv = 1.0 / 2.0f64.sqrt();
        let bell =
            StateVector::new(s.clone(), vec![c(inv), c(0.0), c(0.0), c(inv)]).unwrap();
        assert_relative_eq!(ent(&bell).unwrap().ent(), 1.0, epsilon = 1e-12);

        for level in 1..=4 {
            let basis = StateVector::basis_state(s.clone(), level).unwrap();
            assert_relative_eq!(ent(&basis).unwrap().ent(), 0.0, epsilon = 1e-12);
        }

        let s3 = structure(&[2, 2, 2]);
        let mut ghz = vec![c(0.0); 8];
        ghz[0] = c(inv);
        ghz[7] = c(inv);
        let ghz = StateVector::new(s3, ghz).unwrap();
        let report = ent(&ghz).unwrap();
        assert_relative_eq!(report.ent(), 1.0, epsilon = 1e-12);
        for &p in report.reduction_purities() {
            assert_relative_eq!(p, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn ent_of_two_qubit_theta_family_is_sin_squared() {
        let s = structure(&[2, 2]);
        for k in 0..=20 {
            let theta = std::f64::consts::FRAC_PI_4 * k as f64 / 20.0;
            let psi = StateVector::new(
                s.clone(),
                vec![c(theta.cos()), c(0.0), c(0.0), c(theta.sin())],
            )
            .unwrap();
            assert_relative_eq!(
                ent(&psi).unwrap().ent(),
                (2.0 * theta).sin().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ent_rejects_single_mode() {
        let s = structure(&[4]);
        let psi = StateVector::basis_state(s, 1).unwrap();
        assert!(matches!(
            ent(&psi),
            Err(EntKitError::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn random_states_stay_in_range_smoke() {
        for modes in [vec![2, 2], vec![2, 3], vec![2, 2, 3], vec![3, 3]] {
            let s = structure(&modes);
            let mut rng = ChaCha12Rng::seed_from_u64(5150);
            for _ in 0..100 {
                let psi = random_pure_state_with_rng(&s, &mut rng);
                let v = ent(&psi).unwrap().ent();
                assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{s}: ent {v}");
            }
        }
    }

    #[test]
    fn purity_combiner_matches_full_evaluation() {
        for modes in [vec![2, 2], vec![2, 2, 3], vec![3, 4]] {
            let s = structure(&modes);
            let context = EntContext::cached(&s).unwrap();
            for seed in 0..20 {
                let psi = random_pure_state(&s, seed);
                let report = ent(&psi).unwrap();
                let combined =
                    ent_from_reduction_purities(&context, report.reduction_purities()).unwrap();
                assert_relative_eq!(combined, report.ent(), epsilon = 1e-14);
            }
            assert!(ent_from_reduction_purities(&context, &[0.5]).is_err());
        }
    }

    #[test]
    fn product_states_have_zero_ent() {
        let s = structure(&[2, 2, 3]);
        let factors: Vec<Vec<Complex64>> = vec![
            random_pure_state(&structure(&[2, 2]), 1).amplitudes()[..2].to_vec(),
            random_pure_state(&structure(&[2, 2]), 2).amplitudes()[..2].to_vec(),
            random_pure_state(&structure(&[3, 2]), 3).amplitudes()[..3].to_vec(),
        ];
        let mut amplitudes = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    amplitudes.push(factors[0][i] * factors[1][j] * factors[2][k]);
                }
            }
        }
        let psi = StateVector::from_unnormalized(s, amplitudes).unwrap();
        assert!(ent(&psi).unwrap().ent().abs() < 1e-9);
    }

    #[test]
    fn entangled_whenever_any_reduction_is_mixed() {
        let s = structure(&[2, 2, 3]);
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..50 {
            let psi = random_pure_state_with_rng(&s, &mut rng);
            let report = ent(&psi).unwrap();
            if report
                .reduction_purities()
                .iter()
                .any(|&p| p < 1.0 - 1e-6)
            {
                assert!(report.ent() > 0.0);
            }
        }
    }

    #[test]
    fn local_unitary_invariance_smoke() {
        use crate::linalg::haar_unitary;
        let s = structure(&[2, 2, 3]);
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..25 {
            let psi = random_pure_state_with_rng(&s, &mut rng);
            let base = ent(&psi).unwrap().ent();
            let mut rotated = psi.clone();
            for (m, &n_m) in s.modes().iter().enumerate() {
                rotated = rotated
                    .apply_local(m + 1, &haar_unitary(n_m, &mut rng))
                    .unwrap();
            }
            assert_relative_eq!(ent(&rotated).unwrap().ent(), base, epsilon = 1e-9);
        }
    }

    #[test]
    fn alternative_ent_endpoints_and_ordering() {
        let s = structure(&[2, 2]);
        let inv = 1.0 / 2.0f64.sqrt();
        let bell =
            StateVector::new(s.clone(), vec![c(inv), c(0.0), c(0.0), c(inv)]).unwrap();
        assert_relative_eq!(alternative_ent(&bell).unwrap(), 1.0, epsilon = 1e-12);
        let basis = StateVector::basis_state(s, 1).unwrap();
        assert_relative_eq!(alternative_ent(&basis).unwrap(), 0.0, epsilon = 1e-12);

        // Sampled ordering agreement with the primary measure.
        let s = structure(&[2, 2, 3]);
        let mut rng = ChaCha12Rng::seed_from_u64(404);
        let pairs: Vec<(f64, f64)> = (0..1000)
            .map(|_| {
                let psi = random_pure_state_with_rng(&s, &mut rng);
                (ent(&psi).unwrap().ent(), alternative_ent(&psi).unwrap())
            })
            .collect();
        let mut compared = 0usize;
        let mut agreed = 0usize;
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len().min(i + 20) {
                let (e1, a1) = pairs[i];
                let (e2, a2) = pairs[j];
                if (e1 - e2).abs() > 1e-6 && (a1 - a2).abs() > 1e-6 {
                    compared += 1;
                    if ((e1 > e2) && (a1 > a2)) || ((e1 < e2) && (a1 < a2)) {
                        agreed += 1;
                    }
                }
            }
        }
        assert!(compared > 1000);
        let rate = agreed as f64 / compared as f64;
        assert!(rate >= 0.99, "ordering agreement rate {rate}");
    }

    #[test]
    fn unitized_purity_concavity_of_per_mode_term() {
        // The per-mode contribution to the ent is affine in −(unitized
        // purity), so its concavity in the reduction is convexity of the
        // purity; check the sampled inequality directly.
        let mut rng = ChaCha12Rng::seed_from_u64(7211);
        let s2 = structure(&[2, 2]);
        for _ in 0..200 {
            let keep = ModeList::new(&[1], &s2).unwrap();
            let sigma1 = random_pure_state_with_rng(&s2, &mut rng)
                .reduced_for_modes(&keep)
                .unwrap();
            let sigma2 = random_pure_state_with_rng(&s2, &mut rng)
                .reduced_for_modes(&keep)
                .unwrap();
            for step in 0..=10 {
                let p = step as f64 / 10.0;
                let mut mix = sigma1.matrix() * Complex64::new(p, 0.0);
                mix += &(sigma2.matrix() * Complex64::new(1.0 - p, 0.0));
                let mix_purity: f64 = mix.iter().map(|z| z.norm_sqr()).sum();
                let lhs = unitized_purity(mix_purity, 2);
                let rhs = p * unitized_purity(sigma1.purity(), 2)
                    + (1.0 - p) * unitized_purity(sigma2.purity(), 2);
                assert!(lhs <= rhs + 1e-9, "convexity violated: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn squeezed_closed_form_endpoints() {
        assert_relative_eq!(ent_two_mode_squeezed(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(ent_two_mode_squeezed(20.0).unwrap() > 1.0 - 1e-9);
        assert!(ent_two_mode_squeezed(-0.1).is_err());
        assert!(ent_two_mode_squeezed(f64::NAN).is_err());
    }

    #[test]
    fn logneg_gauge_golden_and_roundtrip() {
        let (r0, e0) = logneg_gauge(0.0).unwrap();
        assert_relative_eq!(r0, 0.0, epsilon = 1e-12);
        assert_relative_eq!(e0, 0.0, epsilon = 1e-12);

        let (r_star, e_n) = logneg_gauge(0.999).unwrap();
        assert!((r_star - 3.80).abs() < 0.01, "r* = {r_star}");
        assert!((e_n - 11.0).abs() < 0.1, "E_N = {e_n}");

        for k in 0..100 {
            let target = k as f64 / 100.0;
            let (r, _) = logneg_gauge(target).unwrap();
            assert_relative_eq!(
                ent_two_mode_squeezed(r).unwrap(),
                target,
                epsilon = 1e-10
            );
        }
        assert!(logneg_gauge(1.0).is_err());
    }

    #[test]
    fn truncated_purity_oracle_at_moderate_squeezing() {
        let exact = 1.0 / (2.0 * 1.0f64.cosh().powi(2) - 1.0);
        assert!((squeezed_purity_truncated(1.0, 200) - exact).abs() < 1e-8);
    }

    #[test]
    fn truncation_deficit_documented_at_high_squeezing() {
        // At r = 3 a cutoff of 200 misses ≈ 9.2e−5 of the purity; sweeps must
        // size the cutoff by tolerance instead of assuming a fixed one.
        let exact = 1.0 / (2.0 * 3.0f64.cosh().powi(2) - 1.0);
        let deficit = exact - squeezed_purity_truncated(3.0, 200);
        assert!(deficit > 8e-5 && deficit < 1e-4, "deficit {deficit}");
        let adequate = squeezed_cutoff_for(3.0, 1e-8);
        assert!(
            (exact - squeezed_purity_truncated(3.0, adequate)).abs() < 1e-8,
            "cutoff {adequate} still inadequate"
        );
    }
}
