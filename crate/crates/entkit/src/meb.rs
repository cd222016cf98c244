//! Maximally entangled bases: exact covers of the level range by maximally
//! entangled TGX level sets, expanded into full orthonormal bases by a
//! discrete-Fourier phase matrix.
//!
//! A *generating set* is a collection of catalog rows (see [`crate::tgx`])
//! that partition `{1, …, n}`.  Each row of length `L` contributes `L`
//! orthonormal maximally entangled states via the phase matrix
//! `F[j][k] = e^{−i·2π(j−1)(k−1)/L}/√L`; disjoint supports make states from
//! different rows orthogonal, so the expansion of a generating set is a
//! complete orthonormal basis of maximally entangled states.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{EntKitError, Result};
use crate::measure::lstar_set;
use crate::modes::ModeStructure;
use crate::state::StateVector;
use crate::tgx::{a13_all, a13_all_at, LevelSetTable};

/// The `L×L` balanced phase matrix `F[j][k] = e^{−i·2π(j−1)(k−1)/L}/√L`
/// (0-based indices in code).  Unitary for every `L ≥ 1`.
pub fn fourier(l: usize) -> Array2<Complex64> {
    let norm = 1.0 / (l as f64).sqrt();
    Array2::from_shape_fn((l, l), |(j, k)| {
        Complex64::from_polar(norm, -TAU * (j * k) as f64 / l as f64)
    })
}

/// A partition of `{1, …, n}` into maximally entangled TGX level sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    structure: ModeStructure,
    rows: Vec<Vec<usize>>,
}

impl GeneratingSet {
    /// Validates that the rows are catalog members, pairwise disjoint, and
    /// jointly cover every level, then wraps them (rows reordered by their
    /// smallest member).
    pub fn new(structure: ModeStructure, rows: Vec<Vec<usize>>) -> Result<Self> {
        let catalog = a13_all(&structure)?;
        let mut sorted_rows: Vec<Vec<usize>> = rows
            .into_iter()
            .map(|mut row| {
                row.sort_unstable();
                row
            })
            .collect();
        sorted_rows.sort();
        for row in &sorted_rows {
            if !catalog.contains(row) {
                return Err(EntKitError::InvalidArgument(format!(
                    "{row:?} is not a maximally entangled TGX level set of {structure}"
                )));
            }
        }
        let n = structure.dim();
        let mut seen = vec![false; n];
        for row in &sorted_rows {
            for &v in row {
                if seen[v - 1] {
                    return Err(EntKitError::InvalidArgument(format!(
                        "level {v} appears in more than one row"
                    )));
                }
                seen[v - 1] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(EntKitError::InvalidArgument(format!(
                "level {} is not covered by any row",
                v + 1
            )));
        }
        Ok(Self {
            structure,
            rows: sorted_rows,
        })
    }

    fn from_catalog_rows(structure: ModeStructure, rows: Vec<Vec<usize>>) -> Self {
        Self { structure, rows }
    }

    /// The structure being covered.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// The rows, ordered by smallest member; each row ascends.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Number of rows in the cover.
    pub fn group_count(&self) -> usize {
        self.rows.len()
    }
}

/// Depth-first exact-cover enumeration: covers emerge in lexicographic order
/// of their row choices; rows within a cover are ordered by smallest member.
fn exact_covers(n: usize, rows: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    // For each level, the rows whose *smallest* member is that level: always
    // branch on the lowest uncovered level, so each row is tried exactly
    // where it can first apply.
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (r, row) in rows.iter().enumerate() {
        by_min[row[0]].push(r);
    }
    let mut covered = vec![false; n + 1];
    let mut chosen: Vec<usize> = Vec::new();
    let mut found = Vec::new();
    fn recurse(
        n: usize,
        rows: &[Vec<usize>],
        by_min: &[Vec<usize>],
        covered: &mut [bool],
        chosen: &mut Vec<usize>,
        found: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let lowest = match (1..=n).find(|&v| !covered[v]) {
            Some(v) => v,
            None => {
                found.push(chosen.iter().map(|&r| rows[r].clone()).collect());
                return;
            }
        };
        for &r in &by_min[lowest] {
            if rows[r].iter().any(|&v| covered[v]) {
                continue;
            }
            for &v in &rows[r] {
                covered[v] = true;
            }
            chosen.push(r);
            recurse(n, rows, by_min, covered, chosen, found);
            chosen.pop();
            for &v in &rows[r] {
                covered[v] = false;
            }
        }
    }
    recurse(n, rows, &by_min, &mut covered, &mut chosen, &mut found);
    found
}

fn covers_from_table(
    structure: &ModeStructure,
    table: &LevelSetTable,
) -> Vec<GeneratingSet> {
    exact_covers(structure.dim(), table.rows())
        .into_iter()
        .map(|rows| GeneratingSet::from_catalog_rows(structure.clone(), rows))
        .collect()
}

/// All generating sets built from rows of one uniform size `lstar`.
///
/// Errors when `lstar` does not divide `n`, since no partition into
/// equal-size rows can exist in that case.
pub fn generating_sets_at(structure: &ModeStructure, lstar: usize) -> Result<Vec<GeneratingSet>> {
    let n = structure.dim();
    let set = lstar_set(structure)?;
    if !set.contains(&lstar) {
        return Err(EntKitError::InvalidArgument(format!(
            "{lstar} is not in the L* set {set:?} of {structure}"
        )));
    }
    if !n.is_multiple_of(lstar) {
        return Err(EntKitError::UnsupportedStructure(format!(
            "no cover of {structure} by equal rows: {lstar} does not divide {n}"
        )));
    }
    let table = a13_all_at(structure, lstar)?;
    Ok(covers_from_table(structure, &table))
}

/// All generating sets at the smallest `L*` member.
pub fn generating_sets(structure: &ModeStructure) -> Result<Vec<GeneratingSet>> {
    let lstar = lstar_set(structure)?[0];
    generating_sets_at(structure, lstar)
}

/// All generating sets drawing rows from the *entire* catalog, so covers may
/// mix row sizes across `L*` members.  Superset of every uniform family.
pub fn generating_sets_mixed(structure: &ModeStructure) -> Result<Vec<GeneratingSet>> {
    let table = a13_all(structure)?;
    Ok(covers_from_table(structure, &table))
}

/// A complete orthonormal basis of maximally entangled states, produced by
/// expanding a generating set.
#[derive(Debug, Clone)]
pub struct MebBasis {
    generating_set: GeneratingSet,
    states: Vec<StateVector>,
    labels: Vec<(usize, usize)>,
}

impl MebBasis {
    /// The generating set the basis was expanded from.
    pub fn generating_set(&self) -> &GeneratingSet {
        &self.generating_set
    }

    /// The basis states, grouped by generating row, phase index fastest.
    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// Number of states (equals the structure dimension).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when the basis holds no states (never for a valid expansion).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The state for 1-based row `g` and phase index `j`.
    pub fn state(&self, g: usize, j: usize) -> Option<&StateVector> {
        self.labels
            .iter()
            .position(|&(gg, jj)| (gg, jj) == (g, j))
            .map(|i| &self.states[i])
    }

    /// `(row, phase)` labels, 1-based, aligned with [`Self::states`].
    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    /// Gram matrix `⟨ψ_a|ψ_b⟩` of the basis.
    pub fn gram(&self) -> Array2<Complex64> {
        let n = self.states.len();
        Array2::from_shape_fn((n, n), |(a, b)| self.states[a].inner(&self.states[b]))
    }

    /// Maximum deviation of `Σ|ψ⟩⟨ψ|` from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.states[0].structure().dim();
        let mut sum = Array2::<Complex64>::zeros((n, n));
        for psi in &self.states {
            let amp = psi.amplitudes();
            for a in 0..n {
                for b in 0..n {
                    sum[[a, b]] += amp[a] * amp[b].conj();
                }
            }
        }
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((sum[[a, b]] - target).norm());
            }
        }
        worst
    }
}

/// Expands a generating set into its maximally entangled basis: row `g` of
/// size `L` yields states `Σ_k F[j][k] |row_g[k]⟩` for `j = 1..=L`.
pub fn meb_expand(generating_set: &GeneratingSet) -> Result<MebBasis> {
    let structure = generating_set.structure();
    let n = structure.dim();
    let mut states = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (g, row) in generating_set.rows().iter().enumerate() {
        let l = row.len();
        let f = fourier(l);
        for j in 0..l {
            let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
            for (k, &level) in row.iter().enumerate() {
                amplitudes[level - 1] = f[[j, k]];
            }
            states.push(StateVector::new(structure.clone(), amplitudes)?);
            labels.push((g + 1, j + 1));
        }
    }
    Ok(MebBasis {
        generating_set: generating_set.clone(),
        states,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ent;
    use approx::assert_relative_eq;

    fn structure(modes: &[usize]) -> ModeStructure {
        ModeStructure::new(modes).unwrap()
    }

    #[test]
    fn fourier_golden_and_unitary() {
        let f = fourier(2);
        let r = 1.0 / 2.0f64.sqrt();
        assert_relative_eq!(f[[0, 0]].re, r, epsilon = 1e-15);
        assert_relative_eq!(f[[1, 1]].re, -r, epsilon = 1e-15);
        assert_relative_eq!(f[[1, 1]].im, 0.0, epsilon = 1e-15);

        let f = fourier(4);
        // j=2, k=2 (1-based): e^{−iπ/2}/2 = −i/2.
        assert_relative_eq!(f[[1, 1]].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(f[[1, 1]].im, -0.5, epsilon = 1e-15);

        for l in 1..=8 {
            let f = fourier(l);
            for a in 0..l {
                for b in 0..l {
                    let dot: Complex64 =
                        (0..l).map(|k| f[[a, k]] * f[[b, k]].conj()).sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    assert_relative_eq!(dot.re, target, epsilon = 1e-12);
                    assert_relative_eq!(dot.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn two_qutrits_have_exactly_two_generating_sets() {
        let sets = generating_sets(&structure(&[3, 3])).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(
            sets[0].rows(),
            &[vec![1, 5, 9], vec![2, 6, 7], vec![3, 4, 8]]
        );
        assert_eq!(
            sets[1].rows(),
            &[vec![1, 6, 8], vec![2, 4, 9], vec![3, 5, 7]]
        );
    }

    #[test]
    fn small_generating_set_goldens() {
        let sets = generating_sets(&structure(&[2, 2])).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].rows(), &[vec![1, 4], vec![2, 3]]);

        let sets = generating_sets(&structure(&[2, 3])).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].rows(), &[vec![1, 5], vec![2, 6], vec![3, 4]]);
        assert_eq!(sets[1].rows(), &[vec![1, 6], vec![2, 4], vec![3, 5]]);

        // Three qubits: one cover at each uniform size.
        let sets = generating_sets_at(&structure(&[2, 2, 2]), 2).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].group_count(), 4);
        let sets = generating_sets_at(&structure(&[2, 2, 2]), 4).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].rows(), &[vec![1, 4, 6, 7], vec![2, 3, 5, 8]]);
    }

    #[test]
    fn indivisible_row_size_is_rejected() {
        // Four qubits admit L = 6, but 6 does not divide 16.
        match generating_sets_at(&structure(&[2, 2, 2, 2]), 6) {
            Err(EntKitError::UnsupportedStructure(msg)) => {
                assert!(msg.contains("divide"), "{msg}");
            }
            other => panic!("expected an unsupported-structure error, got {other:?}"),
        }
        // And a size outside the L* set is an argument error.
        assert!(generating_sets_at(&structure(&[2, 2]), 3).is_err());
    }

    #[test]
    fn mixed_covers_include_every_uniform_cover() {
        let s = structure(&[2, 2, 2]);
        let mixed = generating_sets_mixed(&s).unwrap();
        let mut uniform = generating_sets_at(&s, 2).unwrap();
        uniform.extend(generating_sets_at(&s, 4).unwrap());
        for cover in &uniform {
            assert!(mixed.contains(cover));
        }
        // Three qubits happen to admit only the two uniform covers.
        assert_eq!(mixed.len(), 2);

        for cover in &mixed {
            let total: usize = cover.rows().iter().map(Vec::len).sum();
            assert_eq!(total, s.dim());
        }
    }

    #[test]
    fn generating_set_constructor_validates() {
        let s = structure(&[3, 3]);
        let ok = GeneratingSet::new(
            s.clone(),
            vec![vec![2, 6, 7], vec![9, 5, 1], vec![3, 4, 8]],
        )
        .unwrap();
        assert_eq!(ok.rows()[0], vec![1, 5, 9]);

        // Not a catalog row.
        assert!(GeneratingSet::new(
            s.clone(),
            vec![vec![1, 5, 8], vec![2, 6, 7], vec![3, 4, 9]]
        )
        .is_err());
        // Overlapping rows.
        assert!(GeneratingSet::new(
            s.clone(),
            vec![vec![1, 5, 9], vec![1, 6, 8], vec![3, 4, 8]]
        )
        .is_err());
        // Not covering.
        assert!(GeneratingSet::new(s, vec![vec![1, 5, 9]]).is_err());
    }

    #[test]
    fn expansion_is_orthonormal_complete_and_maximally_entangled() {
        for modes in [vec![2, 2], vec![3, 3], vec![2, 2, 3]] {
            let s = structure(&modes);
            for set in generating_sets(&s).unwrap() {
                let basis = meb_expand(&set).unwrap();
                assert_eq!(basis.len(), s.dim());
                let gram = basis.gram();
                for a in 0..basis.len() {
                    for b in 0..basis.len() {
                        let target = if a == b { 1.0 } else { 0.0 };
                        assert_relative_eq!(gram[[a, b]].re, target, epsilon = 1e-10);
                        assert_relative_eq!(gram[[a, b]].im, 0.0, epsilon = 1e-10);
                    }
                }
                assert!(basis.completeness_defect() < 1e-10);
                for psi in basis.states() {
                    assert_relative_eq!(ent(psi).unwrap().ent(), 1.0, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn expansion_pinned_amplitudes_two_qutrits() {
        let s = structure(&[3, 3]);
        let set = &generating_sets(&s).unwrap()[0];
        let basis = meb_expand(set).unwrap();
        // Row 1 = {1,5,9}, phase index 2: (|1⟩ + ω̄|5⟩ + ω̄²|9⟩)/√3 with
        // ω̄ = e^{−2πi/3}.
        let psi = basis.state(1, 2).unwrap();
        let r = 1.0 / 3.0f64.sqrt();
        let omega_bar = Complex64::from_polar(1.0, -TAU / 3.0);
        assert_relative_eq!(psi.amplitude(1).re, r, epsilon = 1e-12);
        assert_relative_eq!(
            (psi.amplitude(5) - omega_bar * r).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            (psi.amplitude(9) - omega_bar * omega_bar * r).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_eq!(psi.amplitude(2), Complex64::new(0.0, 0.0));
        // Labels run phase-fastest within each row.
        assert_eq!(basis.labels()[0], (1, 1));
        assert_eq!(basis.labels()[1], (1, 2));
        assert_eq!(basis.labels()[3], (2, 1));
    }
}
