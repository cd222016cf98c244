//! TGX-space machinery and the deterministic thirteen-step search (`a13`)
//! producing every maximally entangled TGX level set through a chosen
//! starting level.
//!
//! A *TGX state* has parent-matrix support only where no single-mode
//! reduction picks up an off-diagonal element, i.e. at positions whose
//! multi-indices differ in at least two modes (plus the diagonal); its
//! reductions are therefore diagonal.  The search works entirely in integer
//! arithmetic:
//!
//! 1. compatibility mask `W` over level pairs ([`tgx_mask`]);
//! 2. occurrence matrix `Ω` recording where each level lands in each mode's
//!    reduction diagonal ([`occurrence_matrix`]);
//! 3. goals matrix `G` of occupancy totals certifying maximal entanglement
//!    under balanced superposition ([`goals_matrix`]);
//! 4. enumerate `(L*−1)`-subsets of the levels compatible with the starting
//!    level, keep the mutually compatible ones, keep those whose occurrence
//!    totals match a goals row ([`a13`]).
//!
//! Balanced superposition over any surviving set (arbitrary relative phases
//! allowed) is maximally entangled ([`state_from_levels`]).

use itertools::Itertools;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{EntKitError, Result};
use crate::measure::lstar_set;
use crate::modes::ModeStructure;
use crate::state::StateVector;
use crate::COMBINATION_CAP;

/// Boolean compatibility mask over level pairs: `true` where a parent matrix
/// element is allowed in a TGX state.
#[derive(Debug, Clone)]
pub struct TgxMask {
    structure: ModeStructure,
    mask: Array2<bool>,
}

impl TgxMask {
    /// The structure the mask was built for.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// The full `n×n` mask.
    pub fn matrix(&self) -> &Array2<bool> {
        &self.mask
    }

    /// Whether levels `a` and `b` (1-based) may both appear in a TGX state.
    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.mask[[a - 1, b - 1]]
    }

    /// Number of `true` off-diagonal entries; equals
    /// `n(n − 1 + N − Σ nₘ)`.
    pub fn off_diagonal_true_count(&self) -> usize {
        let n = self.mask.nrows();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.mask[[a, b]])
            .count()
    }
}

/// Builds the TGX compatibility mask: entry `(a,b)` is `true` iff `a = b` or
/// the multi-indices of `a` and `b` differ in at least two modes.
pub fn tgx_mask(structure: &ModeStructure) -> TgxMask {
    let n = structure.dim();
    let multi: Vec<Vec<usize>> = (1..=n)
        .map(|v| structure.inverse_indical(v).expect("v in range"))
        .collect();
    let mask = Array2::from_shape_fn((n, n), |(a, b)| {
        let differing = multi[a]
            .iter()
            .zip(&multi[b])
            .filter(|(x, y)| x != y)
            .count();
        differing == 0 || differing >= 2
    });
    TgxMask {
        structure: structure.clone(),
        mask,
    }
}

/// Per level, the concatenated one-hot record of where its diagonal lands in
/// each mode's reduction diagonal; width `Σ nₘ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceMatrix {
    structure: ModeStructure,
    rows: Vec<Vec<u32>>,
}

impl OccurrenceMatrix {
    /// Row for 1-based level `v`.
    pub fn row(&self, v: usize) -> &[u32] {
        &self.rows[v - 1]
    }

    /// All rows, level order.
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Row width `Σ nₘ`.
    pub fn width(&self) -> usize {
        self.structure.modes().iter().sum()
    }

    /// Element-wise sum of the rows for the given 1-based levels.
    pub fn sum_rows(&self, levels: &[usize]) -> Vec<u32> {
        let mut acc = vec![0u32; self.width()];
        for &v in levels {
            for (slot, x) in acc.iter_mut().zip(self.row(v)) {
                *slot += x;
            }
        }
        acc
    }
}

/// Builds the occurrence matrix `Ω`: row `v` concatenates, over modes, the
/// one-hot encoding of `v`'s multi-index component in that mode.
pub fn occurrence_matrix(structure: &ModeStructure) -> OccurrenceMatrix {
    let rows = (1..=structure.dim())
        .map(|v| {
            let a = structure.inverse_indical(v).expect("v in range");
            let mut row = Vec::with_capacity(structure.modes().iter().sum());
            for (&a_m, &n_m) in a.iter().zip(structure.modes()) {
                for level in 1..=n_m {
                    row.push(u32::from(level == a_m));
                }
            }
            row
        })
        .collect();
    OccurrenceMatrix {
        structure: structure.clone(),
        rows,
    }
}

/// Target occupancy totals certifying `L*`-level maximal entanglement.
///
/// Every mode block of every row sums to `L*`: modes away from the nominal
/// largest get the uniform `⌊L*/nₘ⌋` pattern, while the first largest mode
/// enumerates all placements of its `mod(L*, n_max)` extra occupancies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalsMatrix {
    structure: ModeStructure,
    lstar: usize,
    rows: Vec<Vec<u32>>,
}

impl GoalsMatrix {
    /// All rows; the first is the primary goals vector (extra occupancies
    /// packed at the lowest positions).
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The primary goals vector.
    pub fn primary(&self) -> &[u32] {
        &self.rows[0]
    }

    /// Row width `Σ nₘ`.
    pub fn width(&self) -> usize {
        self.structure.modes().iter().sum()
    }

    /// Whether some goals row equals the given occupancy totals.
    pub fn matches(&self, totals: &[u32]) -> bool {
        self.rows.iter().any(|row| row == totals)
    }
}

/// Builds the goals matrix for a structure and a member of its `L*` set.
pub fn goals_matrix(structure: &ModeStructure, lstar: usize) -> Result<GoalsMatrix> {
    let set = lstar_set(structure)?;
    if !set.contains(&lstar) {
        return Err(EntKitError::InvalidArgument(format!(
            "{lstar} is not in the L* set {set:?} of {structure}"
        )));
    }
    // Nominal largest mode: the first of maximal size.
    let n_max = structure.max_mode();
    let m_max = structure
        .modes()
        .iter()
        .position(|&n_m| n_m == n_max)
        .expect("some mode is largest");
    let rem = lstar % n_max;

    let fixed_blocks: Vec<Vec<u32>> = structure
        .modes()
        .iter()
        .enumerate()
        .map(|(m, &n_m)| {
            if m == m_max {
                Vec::new() // filled per row below
            } else {
                vec![(lstar / n_m) as u32; n_m]
            }
        })
        .collect();

    let base = (lstar / n_max) as u32;
    let rows = (1..=n_max)
        .combinations(rem)
        .map(|extra_positions| {
            let mut row = Vec::with_capacity(structure.modes().iter().sum());
            for (m, &n_m) in structure.modes().iter().enumerate() {
                if m == m_max {
                    for position in 1..=n_m {
                        let bump = u32::from(extra_positions.contains(&position));
                        row.push(base + bump);
                    }
                } else {
                    row.extend_from_slice(&fixed_blocks[m]);
                }
            }
            row
        })
        .collect();

    Ok(GoalsMatrix {
        structure: structure.clone(),
        lstar,
        rows,
    })
}

/// A collection of level sets, each an ascending list of 1-based levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSetTable {
    rows: Vec<Vec<usize>>,
}

impl LevelSetTable {
    /// The level sets.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Number of sets.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when no sets are present.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether the (ascending) set is present.
    pub fn contains(&self, levels: &[usize]) -> bool {
        self.rows.iter().any(|row| row == levels)
    }
}

/// Intermediate artifacts of one [`a13`] run, for inspection and golden
/// pinning.
#[derive(Debug, Clone)]
pub struct A13Trace {
    /// Levels after the starting level that are compatible with it.
    pub forward_candidates: Vec<usize>,
    /// Levels before the starting level that are compatible with it.
    pub backward_candidates: Vec<usize>,
    /// Both candidate groups concatenated (forward first) — the pool the
    /// `(L*−1)`-subsets are drawn from.
    pub candidate_levels: Vec<usize>,
    /// Mutually compatible candidate sets in production order, each listed as
    /// the starting level followed by the chosen subset.
    pub compatible_sets: Vec<Vec<usize>>,
    /// The subset of `compatible_sets` whose occurrence totals match a goals
    /// row — the maximally entangled level sets, production order.
    pub matched_sets: Vec<Vec<usize>>,
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.saturating_mul((n - j) as u128) / (j + 1) as u128;
    }
    acc
}

/// Runs the thirteen-step search, returning all intermediates.
pub fn a13_trace(structure: &ModeStructure, s_l: usize, lstar: usize) -> Result<A13Trace> {
    let n = structure.dim();
    if s_l < 1 || s_l > n {
        return Err(EntKitError::IndexOutOfRange(format!(
            "starting level {s_l} not in 1..={n}"
        )));
    }
    let goals = goals_matrix(structure, lstar)?; // also validates lstar
    let mask = tgx_mask(structure);
    let omega = occurrence_matrix(structure);

    let forward_candidates: Vec<usize> =
        ((s_l + 1)..=n).filter(|&k| mask.compatible(s_l, k)).collect();
    let backward_candidates: Vec<usize> =
        (1..s_l).filter(|&k| mask.compatible(s_l, k)).collect();
    let mut candidate_levels = forward_candidates.clone();
    candidate_levels.extend_from_slice(&backward_candidates);

    let combos = binomial_u128(candidate_levels.len(), lstar - 1);
    if combos > COMBINATION_CAP {
        return Err(EntKitError::ResourceLimit(format!(
            "{combos} candidate subsets of size {} from {} levels exceed the cap of {COMBINATION_CAP}",
            lstar - 1,
            candidate_levels.len()
        )));
    }

    let mut compatible_sets = Vec::new();
    let mut matched_sets = Vec::new();
    for subset in candidate_levels.iter().copied().combinations(lstar - 1) {
        let all_compatible = subset
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| mask.compatible(a, b));
        if !all_compatible {
            continue;
        }
        let mut row = Vec::with_capacity(lstar);
        row.push(s_l);
        row.extend_from_slice(&subset);
        if goals.matches(&omega.sum_rows(&row)) {
            matched_sets.push(row.clone());
        }
        compatible_sets.push(row);
    }

    Ok(A13Trace {
        forward_candidates,
        backward_candidates,
        candidate_levels,
        compatible_sets,
        matched_sets,
    })
}

/// All maximally entangled TGX level sets of size `lstar` containing the
/// starting level `s_l`, rows ascending, production order.
///
/// An empty result is reported as an internal defect: every level belongs to
/// at least one maximally entangled TGX state.
pub fn a13(structure: &ModeStructure, s_l: usize, lstar: usize) -> Result<LevelSetTable> {
    let trace = a13_trace(structure, s_l, lstar)?;
    if trace.matched_sets.is_empty() {
        return Err(EntKitError::InternalInconsistency(format!(
            "no maximally entangled level set found through level {s_l} of {structure} at L = {lstar}; \
             every level should support at least one"
        )));
    }
    let rows = trace
        .matched_sets
        .into_iter()
        .map(|mut row| {
            row.sort_unstable();
            row
        })
        .collect();
    Ok(LevelSetTable { rows })
}

fn catalog_order(rows: &mut Vec<Vec<usize>>) {
    rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    rows.dedup();
}

/// Union of [`a13`] over every starting level at one `L*` member,
/// deduplicated, rows ascending, table sorted lexicographically.
pub fn a13_all_at(structure: &ModeStructure, lstar: usize) -> Result<LevelSetTable> {
    let tables: Vec<LevelSetTable> = (1..=structure.dim())
        .into_par_iter()
        .map(|s_l| a13(structure, s_l, lstar))
        .collect::<Result<_>>()?;
    let mut rows: Vec<Vec<usize>> = tables.into_iter().flat_map(|t| t.rows).collect();
    catalog_order(&mut rows);
    Ok(LevelSetTable { rows })
}

/// Union of [`a13_all_at`] over every member of the `L*` set: the complete
/// catalog of maximally entangled TGX level sets, shorter sets first, then
/// lexicographic.
pub fn a13_all(structure: &ModeStructure) -> Result<LevelSetTable> {
    let mut rows = Vec::new();
    for lstar in lstar_set(structure)? {
        rows.extend(a13_all_at(structure, lstar)?.rows);
    }
    catalog_order(&mut rows);
    Ok(LevelSetTable { rows })
}

/// Balanced superposition `Σ e^{iφ_k}|levelₖ⟩/√L` over distinct levels, with
/// optional relative phases (radians, one per level; zero phases otherwise).
pub fn state_from_levels(
    structure: &ModeStructure,
    levels: &[usize],
    phases: Option<&[f64]>,
) -> Result<StateVector> {
    if levels.is_empty() {
        return Err(EntKitError::InvalidArgument(
            "need at least one level".into(),
        ));
    }
    let n = structure.dim();
    let mut seen = vec![false; n];
    for &v in levels {
        if v < 1 || v > n {
            return Err(EntKitError::IndexOutOfRange(format!(
                "level {v} not in 1..={n}"
            )));
        }
        if seen[v - 1] {
            return Err(EntKitError::InvalidArgument(format!("duplicate level {v}")));
        }
        seen[v - 1] = true;
    }
    if let Some(ph) = phases {
        if ph.len() != levels.len() {
            return Err(EntKitError::InvalidArgument(format!(
                "{} phases for {} levels",
                ph.len(),
                levels.len()
            )));
        }
    }
    let amp = 1.0 / (levels.len() as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
    for (k, &v) in levels.iter().enumerate() {
        let phase = phases.map_or(0.0, |ph| ph[k]);
        amplitudes[v - 1] = Complex64::from_polar(amp, phase);
    }
    StateVector::new(structure.clone(), amplitudes)
}

/// Closed-form maximally entangled level set for `N` qudits of equal size
/// `d`: levels `1 + (k−1)(n−1)/(d−1)` for `k = 1..=d`, with `n = d^N`.
pub fn multiqudit_me(d: usize, n_modes: usize) -> Result<Vec<usize>> {
    if d < 2 || n_modes < 2 {
        return Err(EntKitError::InvalidArgument(format!(
            "need qudit size ≥ 2 and ≥ 2 modes, got d={d}, N={n_modes}"
        )));
    }
    let n = d
        .checked_pow(n_modes as u32)
        .ok_or_else(|| EntKitError::ResourceLimit(format!("{d}^{n_modes} overflows")))?;
    let step = (n - 1) / (d - 1); // 1 + d + … + d^(N−1), exact
    Ok((0..d).map(|k| 1 + k * step).collect())
}
