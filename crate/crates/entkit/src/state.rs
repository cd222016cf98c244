//! Pure-state and density-matrix containers, reductions (partial traces),
//! mode permutations, local-unitary application, and Haar-random sampling.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{EntKitError, Result};
use crate::linalg;
use crate::modes::{ModeList, ModeStructure};
use crate::EPS_NORM;

/// A normalized pure state of a composite system.
///
/// Amplitudes are stored in computational-basis order: `amplitudes[k]` is the
/// coefficient of level `k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    structure: ModeStructure,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state, verifying the amplitude count and unit norm.
    pub fn new(structure: ModeStructure, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != structure.dim() {
            return Err(EntKitError::InvalidArgument(format!(
                "expected {} amplitudes for structure {structure}, got {}",
                structure.dim(),
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EPS_NORM {
            return Err(EntKitError::Validation(format!(
                "state is not normalized: Σ|a|² = {norm_sqr}"
            )));
        }
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// Builds a state from arbitrary nonzero amplitudes, rescaling to unit
    /// norm.
    pub fn from_unnormalized(structure: ModeStructure, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != structure.dim() {
            return Err(EntKitError::InvalidArgument(format!(
                "expected {} amplitudes for structure {structure}, got {}",
                structure.dim(),
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(EntKitError::Validation(
                "cannot normalize the zero vector".into(),
            ));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// The computational basis state `|v⟩` for a 1-based level `v`.
    pub fn basis_state(structure: ModeStructure, level: usize) -> Result<Self> {
        let n = structure.dim();
        if level < 1 || level > n {
            return Err(EntKitError::IndexOutOfRange(format!(
                "level {level} not in 1..={n}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[level - 1] = Complex64::new(1.0, 0.0);
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// The mode structure this state lives in.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// All amplitudes in computational-basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of the 1-based level `v`.
    pub fn amplitude(&self, level: usize) -> Complex64 {
        self.amplitudes[level - 1]
    }

    /// Euclidean norm (1 up to validation tolerance).
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Overlap magnitude `|⟨self|other⟩|`; 1 means equal up to global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// The projector `|ψ⟩⟨ψ|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let n = self.structure.dim();
        let entries = Array2::from_shape_fn((n, n), |(r, c)| {
            self.amplitudes[r] * self.amplitudes[c].conj()
        });
        DensityMatrix {
            structure: self.structure.clone(),
            entries,
        }
    }

    /// Applies a full `n×n` operator to the state (no unitarity check).
    pub fn apply(&self, op: &Array2<Complex64>) -> Result<StateVector> {
        let n = self.structure.dim();
        if op.nrows() != n || op.ncols() != n {
            return Err(EntKitError::InvalidArgument(format!(
                "operator is {}×{}, state dimension is {n}",
                op.nrows(),
                op.ncols()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (r, slot) in out.iter_mut().enumerate() {
            for c in 0..n {
                *slot += op[[r, c]] * self.amplitudes[c];
            }
        }
        Ok(StateVector {
            structure: self.structure.clone(),
            amplitudes: out,
        })
    }

    /// Applies a local operator `u` (size `nₘ×nₘ`) to mode `m` (1-based),
    /// leaving all other modes untouched.
    pub fn apply_local(&self, m: usize, u: &Array2<Complex64>) -> Result<StateVector> {
        let n_m = self.structure.size_of(m)?;
        if u.nrows() != n_m || u.ncols() != n_m {
            return Err(EntKitError::InvalidArgument(format!(
                "local operator is {}×{}, mode {m} has {n_m} levels",
                u.nrows(),
                u.ncols()
            )));
        }
        let d = self.structure.stride(m);
        let n = self.structure.dim();
        let block = n_m * d;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for q in (0..n).step_by(block) {
            for r in 0..d {
                for b in 0..n_m {
                    let mut s = Complex64::new(0.0, 0.0);
                    for a in 0..n_m {
                        s += u[[b, a]] * self.amplitudes[q + a * d + r];
                    }
                    out[q + b * d + r] = s;
                }
            }
        }
        Ok(StateVector {
            structure: self.structure.clone(),
            amplitudes: out,
        })
    }

    /// Reduction of this pure state to the listed modes (any order).
    pub fn reduced_for_modes(&self, m: &ModeList) -> Result<DensityMatrix> {
        self.density().reduced_for_modes(m)
    }

    /// Reorders the modes: entry `m` of the permutation names the parent
    /// mode that becomes new mode `m`, so amplitudes move as
    /// `ψ′[(a_{q₁},…,a_{q_N})] = ψ[(a₁,…,a_N)]`.
    pub fn permute_modes(&self, m: &ModeList) -> Result<StateVector> {
        let m = ModeList::new(m.labels(), &self.structure)?;
        if m.len() != self.structure.mode_count() {
            return Err(EntKitError::InvalidArgument(format!(
                "permutation lists {} of {} modes",
                m.len(),
                self.structure.mode_count()
            )));
        }
        let new_structure = self.structure.substructure(m.labels())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for v in 1..=self.structure.dim() {
            let a = self.structure.inverse_indical(v)?;
            let image: Vec<usize> = m.labels().iter().map(|&label| a[label - 1]).collect();
            let w = new_structure.indical_register(&image)?;
            out[w - 1] = self.amplitudes[v - 1];
        }
        Ok(StateVector {
            structure: new_structure,
            amplitudes: out,
        })
    }
}

/// Draws a Haar-uniform pure state: i.i.d. standard complex Gaussian
/// amplitudes, normalized.  Fully determined by the seed.
pub fn random_pure_state(structure: &ModeStructure, seed: u64) -> StateVector {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    random_pure_state_with_rng(structure, &mut rng)
}

/// As [`random_pure_state`] but drawing from a caller-supplied generator, for
/// streams of states.
pub fn random_pure_state_with_rng<R: Rng + ?Sized>(
    structure: &ModeStructure,
    rng: &mut R,
) -> StateVector {
    use rand_distr::StandardNormal;
    let raw: Vec<Complex64> = (0..structure.dim())
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::from_unnormalized(structure.clone(), raw)
        .expect("Gaussian sample is nonzero with probability 1")
}

/// A density matrix over a composite system: Hermitian, unit trace, positive
/// semidefinite (all verified at the validating constructor).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    structure: ModeStructure,
    entries: Array2<Complex64>,
}

impl DensityMatrix {
    /// Builds a density matrix from raw entries, verifying shape, Hermiticity,
    /// unit trace, and positive semidefiniteness (eigenvalues ≥ −tolerance).
    pub fn new(structure: ModeStructure, entries: Array2<Complex64>) -> Result<Self> {
        let n = structure.dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(EntKitError::InvalidArgument(format!(
                "matrix is {}×{}, structure {structure} has dimension {n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let mut herm_dev = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                herm_dev = herm_dev.max((entries[[r, c]] - entries[[c, r]].conj()).norm());
            }
        }
        if herm_dev > EPS_NORM {
            return Err(EntKitError::Validation(format!(
                "matrix is not Hermitian: max |ρ_ab − ρ*_ba| = {herm_dev:e}"
            )));
        }
        let trace: Complex64 = (0..n).map(|k| entries[[k, k]]).sum();
        if (trace.re - 1.0).abs() > EPS_NORM || trace.im.abs() > EPS_NORM {
            return Err(EntKitError::Validation(format!(
                "matrix trace is {trace}, expected 1"
            )));
        }
        let candidate = Self { structure, entries };
        let (eigenvalues, _) = candidate.eigensystem();
        if let Some(&min) = eigenvalues.last() {
            if min < -EPS_NORM {
                return Err(EntKitError::Validation(format!(
                    "matrix is not positive semidefinite: min eigenvalue {min:e}"
                )));
            }
        }
        Ok(candidate)
    }

    /// Internal constructor for results of operations that preserve the
    /// invariants exactly (partial traces, permutations, conjugations).
    fn from_parts(structure: ModeStructure, entries: Array2<Complex64>) -> Self {
        Self { structure, entries }
    }

    /// The projector onto a pure state.
    pub fn from_pure(psi: &StateVector) -> Self {
        psi.density()
    }

    /// The convex mixture `Σ pⱼ |ψⱼ⟩⟨ψⱼ|`; probabilities must be nonnegative
    /// and sum to 1 within tolerance, and all states must share a structure.
    pub fn mixture(parts: &[(f64, StateVector)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(EntKitError::InvalidArgument(
                "mixture needs at least one component".into(),
            ));
        };
        let structure = first.structure().clone();
        let n = structure.dim();
        let mut total = 0.0;
        let mut entries = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for (p, psi) in parts {
            if *p < -1e-12 {
                return Err(EntKitError::InvalidArgument(format!(
                    "negative mixture probability {p}"
                )));
            }
            if psi.structure() != &structure {
                return Err(EntKitError::InvalidArgument(
                    "mixture components live in different structures".into(),
                ));
            }
            total += p;
            for r in 0..n {
                for c in 0..n {
                    entries[[r, c]] += p * psi.amplitudes[r] * psi.amplitudes[c].conj();
                }
            }
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(EntKitError::InvalidArgument(format!(
                "mixture probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self::from_parts(structure, entries))
    }

    /// The mode structure this matrix lives in.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// The raw `n×n` entries.
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.entries
    }

    /// Entry `ρ_{a,b}` with 1-based row/column levels.
    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.entries[[a - 1, b - 1]]
    }

    /// The trace (1 up to validation tolerance for valid states).
    pub fn trace(&self) -> f64 {
        (0..self.entries.nrows())
            .map(|k| self.entries[[k, k]].re)
            .sum()
    }

    /// Purity `tr(ρ²)`; for a Hermitian matrix this is `Σ |ρ_ab|²`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues (descending) and matching eigenvector columns.
    pub fn eigensystem(&self) -> (Vec<f64>, Array2<Complex64>) {
        linalg::hermitian_eigen(&self.entries)
    }

    /// Number of eigenvalues above the cutoff.
    pub fn rank(&self, eps: f64) -> usize {
        let (eigenvalues, _) = self.eigensystem();
        eigenvalues.iter().filter(|&&v| v > eps).count()
    }

    /// Extracts the pure state when `ρ` is a projector up to `tol` (i.e. the
    /// top eigenvalue is within `tol` of 1); errors otherwise.
    pub fn pure_projection(&self, tol: f64) -> Result<StateVector> {
        let (eigenvalues, eigenvectors) = self.eigensystem();
        let top = eigenvalues[0];
        if (top - 1.0).abs() > tol {
            return Err(EntKitError::Validation(format!(
                "matrix is not pure within {tol:e}: top eigenvalue {top}"
            )));
        }
        let amplitudes: Vec<Complex64> = (0..self.structure.dim())
            .map(|r| eigenvectors[[r, 0]])
            .collect();
        StateVector::from_unnormalized(self.structure.clone(), amplitudes)
    }

    /// Partial trace keeping the listed modes, which must be sorted ascending
    /// (use [`reduced_for_modes`](Self::reduced_for_modes) for arbitrary
    /// order).  Entries are direct sums of parent entries over the discarded
    /// modes' diagonal.
    pub fn partial_trace(&self, keep: &ModeList) -> Result<DensityMatrix> {
        if !keep.is_sorted() {
            return Err(EntKitError::InvalidArgument(format!(
                "partial_trace expects ascending mode labels, got {:?}; use reduced_for_modes for arbitrary order",
                keep.labels()
            )));
        }
        // Validate labels against this structure.
        let keep = ModeList::new(keep.labels(), &self.structure)?;
        let kept_labels = keep.labels();
        let rest_labels: Vec<usize> = (1..=self.structure.mode_count())
            .filter(|m| !kept_labels.contains(m))
            .collect();

        let kept_sub = self.structure.substructure(kept_labels)?;
        let n_keep = kept_sub.dim();
        let kept_offsets = self.offsets_for(kept_labels, &kept_sub)?;
        let rest_offsets = if rest_labels.is_empty() {
            vec![0usize]
        } else {
            let rest_sub = self.structure.substructure(&rest_labels)?;
            self.offsets_for(&rest_labels, &rest_sub)?
        };

        let mut entries = Array2::from_elem((n_keep, n_keep), Complex64::new(0.0, 0.0));
        for a in 0..n_keep {
            for b in 0..n_keep {
                let mut s = Complex64::new(0.0, 0.0);
                for &rest in &rest_offsets {
                    s += self.entries[[
                        kept_offsets[a] + rest,
                        kept_offsets[b] + rest,
                    ]];
                }
                entries[[a, b]] = s;
            }
        }
        Ok(DensityMatrix::from_parts(kept_sub, entries))
    }

    /// For each scalar index of the sub-structure over `labels`, the 0-based
    /// offset it contributes to a full-system index.
    fn offsets_for(&self, labels: &[usize], sub: &ModeStructure) -> Result<Vec<usize>> {
        let strides: Vec<usize> = labels.iter().map(|&m| self.structure.stride(m)).collect();
        let mut offsets = Vec::with_capacity(sub.dim());
        for v in 1..=sub.dim() {
            let digits = sub.inverse_indical(v)?;
            offsets.push(
                digits
                    .iter()
                    .zip(&strides)
                    .map(|(&d_j, &s_j)| (d_j - 1) * s_j)
                    .sum(),
            );
        }
        Ok(offsets)
    }

    /// Relabels modes so that new mode `j` is old mode `m_j`; `m` must be a
    /// permutation of all mode labels.  The entries are conjugated by the
    /// corresponding permutation unitary, so spectrum and purity are
    /// unchanged.
    pub fn permute_modes(&self, m: &ModeList) -> Result<DensityMatrix> {
        let m = ModeList::new(m.labels(), &self.structure)?;
        if m.len() != self.structure.mode_count() {
            return Err(EntKitError::InvalidArgument(format!(
                "permutation lists {} of {} modes",
                m.len(),
                self.structure.mode_count()
            )));
        }
        let new_structure = self.structure.substructure(m.labels())?;
        let n = self.structure.dim();
        let mut map = vec![0usize; n];
        for v in 1..=n {
            let a = self.structure.inverse_indical(v)?;
            let b: Vec<usize> = m.labels().iter().map(|&label| a[label - 1]).collect();
            map[v - 1] = new_structure.indical_register(&b)? - 1;
        }
        let mut entries = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for r in 0..n {
            for c in 0..n {
                entries[[map[r], map[c]]] = self.entries[[r, c]];
            }
        }
        Ok(DensityMatrix::from_parts(new_structure, entries))
    }

    /// Reduction to the listed modes in the listed (possibly unsorted) order:
    /// partial trace to the sorted labels, then a mode permutation into the
    /// requested order.
    pub fn reduced_for_modes(&self, m: &ModeList) -> Result<DensityMatrix> {
        let m = ModeList::new(m.labels(), &self.structure)?;
        let sorted = m.sorted();
        let reduced = self.partial_trace(&sorted)?;
        if m.is_sorted() {
            return Ok(reduced);
        }
        // Position of each requested label within the sorted reduction.
        let perm: Vec<usize> = m
            .labels()
            .iter()
            .map(|label| {
                sorted
                    .labels()
                    .iter()
                    .position(|x| x == label)
                    .expect("label present by construction")
                    + 1
            })
            .collect();
        let perm = ModeList::new(&perm, reduced.structure())?;
        reduced.permute_modes(&perm)
    }

    /// Applies a local operator on mode `m` by conjugation: `ρ → u ρ u†`.
    pub fn apply_local(&self, m: usize, u: &Array2<Complex64>) -> Result<DensityMatrix> {
        let n_m = self.structure.size_of(m)?;
        if u.nrows() != n_m || u.ncols() != n_m {
            return Err(EntKitError::InvalidArgument(format!(
                "local operator is {}×{}, mode {m} has {n_m} levels",
                u.nrows(),
                u.ncols()
            )));
        }
        let d = self.structure.stride(m);
        let n = self.structure.dim();
        let block = n_m * d;
        // Left multiply by u on mode m.
        let mut left = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for col in 0..n {
            for q in (0..n).step_by(block) {
                for r in 0..d {
                    for b in 0..n_m {
                        let mut s = Complex64::new(0.0, 0.0);
                        for a in 0..n_m {
                            s += u[[b, a]] * self.entries[[q + a * d + r, col]];
                        }
                        left[[q + b * d + r, col]] = s;
                    }
                }
            }
        }
        // Right multiply by u† on mode m.
        let mut entries = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for row in 0..n {
            for q in (0..n).step_by(block) {
                for r in 0..d {
                    for b in 0..n_m {
                        let mut s = Complex64::new(0.0, 0.0);
                        for a in 0..n_m {
                            s += left[[row, q + a * d + r]] * u[[b, a]].conj();
                        }
                        entries[[row, q + b * d + r]] = s;
                    }
                }
            }
        }
        Ok(DensityMatrix::from_parts(self.structure.clone(), entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> StateVector {
        let s = ModeStructure::new(&[2, 2]).unwrap();
        let inv = 1.0 / 2.0f64.sqrt();
        StateVector::new(s, vec![c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)]).unwrap()
    }

    /// Random mixed state as a seeded 3-component mixture of Haar states.
    fn random_density(structure: &ModeStructure, seed: u64) -> DensityMatrix {
        let parts = vec![
            (0.5, random_pure_state(structure, seed)),
            (0.3, random_pure_state(structure, seed.wrapping_add(1))),
            (0.2, random_pure_state(structure, seed.wrapping_add(2))),
        ];
        DensityMatrix::mixture(&parts).unwrap()
    }

    #[test]
    fn state_validation() {
        let s = ModeStructure::new(&[2, 2]).unwrap();
        assert!(StateVector::new(s.clone(), vec![c(1.0, 0.0); 4]).is_err());
        assert!(StateVector::new(s.clone(), vec![c(1.0, 0.0); 3]).is_err());
        let psi = StateVector::from_unnormalized(s, vec![c(1.0, 0.0); 4]).unwrap();
        assert_relative_eq!(psi.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_projector_purity_is_one() {
        assert_relative_eq!(bell().density().purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_purity() {
        let s = ModeStructure::new(&[2, 3]).unwrap();
        let n = s.dim();
        let entries = Array2::from_shape_fn((n, n), |(r, col)| {
            if r == col {
                c(1.0 / n as f64, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let rho = DensityMatrix::new(s, entries).unwrap();
        assert_relative_eq!(rho.purity(), 1.0 / n as f64, epsilon = 1e-12);
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let s = ModeStructure::new(&[2, 2]).unwrap();
        // Non-Hermitian.
        let mut m = Array2::from_elem((4, 4), c(0.0, 0.0));
        m[[0, 0]] = c(1.0, 0.0);
        m[[0, 1]] = c(0.3, 0.0);
        assert!(DensityMatrix::new(s.clone(), m).is_err());
        // Hermitian, unit trace, but indefinite.
        let mut m = Array2::from_elem((4, 4), c(0.0, 0.0));
        m[[0, 0]] = c(1.5, 0.0);
        m[[1, 1]] = c(-0.5, 0.0);
        assert!(DensityMatrix::new(s, m).is_err());
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let rho = bell().density();
        let keep = ModeList::new(&[1], rho.structure()).unwrap();
        let red = rho.partial_trace(&keep).unwrap();
        assert_eq!(red.structure().modes(), &[2]);
        for r in 0..2 {
            for col in 0..2 {
                let expect = if r == col { 0.5 } else { 0.0 };
                assert_relative_eq!(red.matrix()[[r, col]].re, expect, epsilon = 1e-12);
                assert_relative_eq!(red.matrix()[[r, col]].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn product_state_reduction_recovers_factor() {
        let s1 = ModeStructure::new(&[2]).unwrap();
        let s2 = ModeStructure::new(&[3]).unwrap();
        let a = random_pure_state(&s1, 10);
        let b = random_pure_state(&s2, 20);
        let joint_structure = ModeStructure::new(&[2, 3]).unwrap();
        let mut amplitudes = Vec::new();
        for i in 0..2 {
            for j in 0..3 {
                amplitudes.push(a.amplitudes()[i] * b.amplitudes()[j]);
            }
        }
        let joint = StateVector::new(joint_structure, amplitudes).unwrap();
        let keep = ModeList::new(&[2], joint.structure()).unwrap();
        let red = joint.reduced_for_modes(&keep).unwrap();
        let expect = b.density();
        for r in 0..3 {
            for col in 0..3 {
                let d = (red.matrix()[[r, col]] - expect.matrix()[[r, col]]).norm();
                assert!(d < 1e-12, "entry ({r},{col}) off by {d}");
            }
        }
    }

    #[test]
    fn partial_trace_preserves_trace_and_hermiticity() {
        let s = ModeStructure::new(&[2, 3, 2]).unwrap();
        for seed in 0..5u64 {
            let rho = random_density(&s, 100 + seed);
            for keep_labels in [vec![1], vec![2], vec![3], vec![1, 3], vec![2, 3]] {
                let keep = ModeList::new(&keep_labels, &s).unwrap();
                let red = rho.partial_trace(&keep).unwrap();
                assert_relative_eq!(red.trace(), 1.0, epsilon = 1e-12);
                let m = red.matrix();
                for r in 0..m.nrows() {
                    for col in 0..m.ncols() {
                        assert!((m[[r, col]] - m[[col, r]].conj()).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_is_basis_independent_on_discarded_modes() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let rho = random_density(&s, 42);
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let u2 = haar_unitary(2, &mut rng);
        let u3 = haar_unitary(3, &mut rng);
        // Rotate the two discarded modes (2 and 3), keep mode 1.
        let rotated = rho.apply_local(2, &u2).unwrap().apply_local(3, &u3).unwrap();
        let keep = ModeList::new(&[1], &s).unwrap();
        let red_a = rho.partial_trace(&keep).unwrap();
        let red_b = rotated.partial_trace(&keep).unwrap();
        for r in 0..2 {
            for col in 0..2 {
                let d = (red_a.matrix()[[r, col]] - red_b.matrix()[[r, col]]).norm();
                assert!(d < 1e-10, "entry ({r},{col}) off by {d}");
            }
        }
    }

    #[test]
    fn sequential_equals_joint_tracing() {
        let s = ModeStructure::new(&[2, 3, 2]).unwrap();
        let rho = random_density(&s, 7);
        // Trace out mode 3, then mode 2 of the remainder.
        let step1 = rho
            .partial_trace(&ModeList::new(&[1, 2], &s).unwrap())
            .unwrap();
        let step2 = step1
            .partial_trace(&ModeList::new(&[1], step1.structure()).unwrap())
            .unwrap();
        let joint = rho.partial_trace(&ModeList::new(&[1], &s).unwrap()).unwrap();
        for r in 0..2 {
            for col in 0..2 {
                let d = (step2.matrix()[[r, col]] - joint.matrix()[[r, col]]).norm();
                assert!(d < 1e-12);
            }
        }
    }

    #[test]
    fn permute_modes_golden_swap() {
        // |1,2⟩ in 2×3 → |2,1⟩ in 3×2.
        let s = ModeStructure::new(&[2, 3]).unwrap();
        let psi = StateVector::basis_state(s.clone(), s.indical_register(&[1, 2]).unwrap()).unwrap();
        let rho = psi.density();
        let swapped = rho.permute_modes(&ModeList::new(&[2, 1], &s).unwrap()).unwrap();
        assert_eq!(swapped.structure().modes(), &[3, 2]);
        let expect_level = swapped.structure().indical_register(&[2, 1]).unwrap();
        assert_relative_eq!(
            swapped.entry(expect_level, expect_level).re,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pure_permute_matches_density_permute() {
        let s = ModeStructure::new(&[2, 3]).unwrap();
        let psi = StateVector::basis_state(s.clone(), s.indical_register(&[1, 2]).unwrap()).unwrap();
        let perm = ModeList::new(&[2, 1], &s).unwrap();
        let swapped = psi.permute_modes(&perm).unwrap();
        assert_eq!(swapped.structure().modes(), &[3, 2]);
        let expect_level = swapped.structure().indical_register(&[2, 1]).unwrap();
        assert_relative_eq!(swapped.amplitude(expect_level).re, 1.0, epsilon = 1e-12);

        // Agreement with the density-matrix path on a random state.
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let psi = random_pure_state(&s, 31);
        let perm = ModeList::new(&[3, 1, 2], &s).unwrap();
        let via_state = psi.permute_modes(&perm).unwrap().density();
        let via_density = psi.density().permute_modes(&perm).unwrap();
        for a in 1..=s.dim() {
            for b in 1..=s.dim() {
                assert!((via_state.entry(a, b) - via_density.entry(a, b)).norm() < 1e-12);
            }
        }
        assert!(psi.permute_modes(&ModeList::new(&[1, 2], &s).unwrap()).is_err());
    }

    #[test]
    fn permute_modes_preserves_spectrum_and_involutes() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let rho = random_density(&s, 9);
        let perm = ModeList::new(&[3, 1, 2], &s).unwrap();
        let moved = rho.permute_modes(&perm).unwrap();
        let (ev_a, _) = rho.eigensystem();
        let (ev_b, _) = moved.eigensystem();
        for (a, b) in ev_a.iter().zip(&ev_b) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
        // A swap applied twice is the identity.
        let swap = ModeList::new(&[2, 1, 3], &s).unwrap();
        let twice = rho
            .permute_modes(&swap)
            .unwrap()
            .permute_modes(&ModeList::new(&[2, 1, 3], rho.permute_modes(&swap).unwrap().structure()).unwrap())
            .unwrap();
        for r in 0..s.dim() {
            for col in 0..s.dim() {
                assert!((twice.matrix()[[r, col]] - rho.matrix()[[r, col]]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_for_modes_golden_cases() {
        // Bell(1,3) ⊗ Bell(2,4): the joint reduction of modes {1,2} is I/4,
        // so both orderings (1,2) and (2,1) coincide.
        let s4 = ModeStructure::new(&[2, 2, 2, 2]).unwrap();
        let inv2 = 0.5;
        let mut amplitudes = vec![c(0.0, 0.0); 16];
        for i in 0..2 {
            for j in 0..2 {
                // |i⟩₁|j⟩₂|i⟩₃|j⟩₄ with amplitude 1/2.
                let level = s4
                    .indical_register(&[i + 1, j + 1, i + 1, j + 1])
                    .unwrap();
                amplitudes[level - 1] = c(inv2, 0.0);
            }
        }
        let two_pairs = StateVector::new(s4.clone(), amplitudes).unwrap();
        for order in [[1usize, 2], [2, 1]] {
            let red = two_pairs
                .reduced_for_modes(&ModeList::new(&order, &s4).unwrap())
                .unwrap();
            for r in 0..4 {
                for col in 0..4 {
                    let expect = if r == col { 0.25 } else { 0.0 };
                    assert!((red.matrix()[[r, col]] - c(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
        // keep (1..N) in order → ρ itself.
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let rho = random_density(&s, 3);
        let same = rho
            .reduced_for_modes(&ModeList::new(&[1, 2, 3], &s).unwrap())
            .unwrap();
        assert_eq!(same.matrix(), rho.matrix());
        // keep (3,1) of |1,2,3⟩ in 2×2×3 → |3,1⟩ projector in 3×2.
        let psi =
            StateVector::basis_state(s.clone(), s.indical_register(&[1, 2, 3]).unwrap()).unwrap();
        let red = psi
            .reduced_for_modes(&ModeList::new(&[3, 1], &s).unwrap())
            .unwrap();
        assert_eq!(red.structure().modes(), &[3, 2]);
        let level = red.structure().indical_register(&[3, 1]).unwrap();
        assert_relative_eq!(red.entry(level, level).re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(red.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_states_are_normalized_and_seeded() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let a = random_pure_state(&s, 123);
        let b = random_pure_state(&s, 123);
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_relative_eq!(a.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn haar_mean_reduction_purity_matches_known_average() {
        // For Haar 2×2 pure states the single-qubit reduction purity averages
        // (n₁+n₂)/(n+1) = 4/5.
        let s = ModeStructure::new(&[2, 2]).unwrap();
        let keep = ModeList::new(&[1], &s).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        let samples = 10_000;
        let mut mean = 0.0;
        for _ in 0..samples {
            let psi = random_pure_state_with_rng(&s, &mut rng);
            mean += psi.reduced_for_modes(&keep).unwrap().purity();
        }
        mean /= samples as f64;
        assert!((mean - 0.8).abs() < 0.02, "mean purity {mean}");
    }

    #[test]
    fn local_apply_matches_full_operator() {
        let s = ModeStructure::new(&[2, 3, 2]).unwrap();
        let psi = random_pure_state(&s, 55);
        let mut rng = ChaCha12Rng::seed_from_u64(66);
        let u = haar_unitary(3, &mut rng);
        // Build I ⊗ u ⊗ I explicitly and compare.
        let n = s.dim();
        let mut full = Array2::from_elem((n, n), c(0.0, 0.0));
        for r in 1..=n {
            let a = s.inverse_indical(r).unwrap();
            for col in 1..=n {
                let b = s.inverse_indical(col).unwrap();
                if a[0] == b[0] && a[2] == b[2] {
                    full[[r - 1, col - 1]] = u[[a[1] - 1, b[1] - 1]];
                }
            }
        }
        let via_local = psi.apply_local(2, &u).unwrap();
        let via_full = psi.apply(&full).unwrap();
        for k in 0..n {
            assert!((via_local.amplitudes()[k] - via_full.amplitudes()[k]).norm() < 1e-12);
        }
        // Density conjugation agrees with the pure-state route.
        let rho_local = psi.density().apply_local(2, &u).unwrap();
        let rho_expect = via_local.density();
        for r in 0..n {
            for col in 0..n {
                assert!((rho_local.matrix()[[r, col]] - rho_expect.matrix()[[r, col]]).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn pure_projection_roundtrip() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let psi = random_pure_state(&s, 31);
        let back = psi.density().pure_projection(1e-8).unwrap();
        assert!(psi.overlap(&back) > 1.0 - 1e-10);
        let mixed = random_density(&s, 32);
        assert!(mixed.pure_projection(1e-8).is_err());
    }
}
