//! Mode structures, mode lists, and the index arithmetic connecting scalar
//! levels `1..n` to per-mode multi-indices.
//!
//! A composite system is described by its [`ModeStructure`] `(n₁,…,n_N)`; a
//! scalar level `v ∈ 1..n` corresponds to the multi-index `(a₁,…,a_N)` with
//! `aₘ ∈ 1..nₘ` via the indical register map, a mixed-radix positional code
//! with the last mode varying fastest.

use crate::error::{EntKitError, Result};

/// The mode-size composition `(n₁,…,n_N)` of a composite system.
///
/// Every mode size is at least 2 and the total dimension is `n = Π nₘ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeStructure {
    modes: Vec<usize>,
}

impl ModeStructure {
    /// Builds a structure from the mode sizes `(n₁,…,n_N)`.
    ///
    /// Fails if the list is empty or any size is below 2.
    pub fn new(modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(EntKitError::InvalidStructure(
                "mode list must not be empty".into(),
            ));
        }
        if let Some(&bad) = modes.iter().find(|&&n_m| n_m < 2) {
            return Err(EntKitError::InvalidStructure(format!(
                "every mode needs at least 2 levels, got {bad}"
            )));
        }
        Ok(Self {
            modes: modes.to_vec(),
        })
    }

    /// The mode sizes `(n₁,…,n_N)`.
    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// Number of modes `N`.
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Total dimension `n = Π nₘ`.
    pub fn dim(&self) -> usize {
        self.modes.iter().product()
    }

    /// Largest mode size `n_max`.
    pub fn max_mode(&self) -> usize {
        *self.modes.iter().max().expect("structure is nonempty")
    }

    /// `n̄_max = n / n_max`, the dimension of everything but one largest mode;
    /// it bounds the number of levels a maximally entangled superposition can
    /// use.
    pub fn nbar_max(&self) -> usize {
        self.dim() / self.max_mode()
    }

    /// Size `nₘ` of the 1-based mode `m`.
    pub fn size_of(&self, m: usize) -> Result<usize> {
        self.modes
            .get(m.wrapping_sub(1))
            .copied()
            .ok_or_else(|| {
                EntKitError::IndexOutOfRange(format!(
                    "mode label {m} not in 1..={}",
                    self.mode_count()
                ))
            })
    }

    /// Stride of mode `m` (1-based): `Π_{q>m} n_q`, the dimension of all modes
    /// after `m`.
    pub fn stride(&self, m: usize) -> usize {
        self.modes[m..].iter().product()
    }

    /// Maps a 1-based multi-index `(a₁,…,a_N)` to the 1-based scalar level
    /// `1 + Σ (aₘ−1)·Π_{q>m} n_q`.
    pub fn indical_register(&self, a: &[usize]) -> Result<usize> {
        if a.len() != self.mode_count() {
            return Err(EntKitError::InvalidArgument(format!(
                "multi-index has {} components, structure has {} modes",
                a.len(),
                self.mode_count()
            )));
        }
        let mut v = 1usize;
        for (m, (&a_m, &n_m)) in a.iter().zip(&self.modes).enumerate() {
            if a_m < 1 || a_m > n_m {
                return Err(EntKitError::IndexOutOfRange(format!(
                    "component {} of multi-index is {}, valid range for mode {} is 1..={}",
                    m + 1,
                    a_m,
                    m + 1,
                    n_m
                )));
            }
            v += (a_m - 1) * self.stride(m + 1);
        }
        Ok(v)
    }

    /// Maps a 1-based scalar level `v ∈ 1..n` back to its multi-index; inverse
    /// of [`indical_register`](Self::indical_register).
    pub fn inverse_indical(&self, v: usize) -> Result<Vec<usize>> {
        let n = self.dim();
        if v < 1 || v > n {
            return Err(EntKitError::IndexOutOfRange(format!(
                "level {v} not in 1..={n}"
            )));
        }
        let mut rest = v;
        let mut a = Vec::with_capacity(self.mode_count());
        for m in 1..=self.mode_count() {
            let d = self.stride(m);
            let a_m = (rest - 1) / d + 1;
            rest -= (a_m - 1) * d;
            a.push(a_m);
        }
        Ok(a)
    }

    /// The structure of the sub-system formed by the given 1-based mode
    /// labels, in the given order.
    pub fn substructure(&self, labels: &[usize]) -> Result<ModeStructure> {
        let sizes = labels
            .iter()
            .map(|&m| self.size_of(m))
            .collect::<Result<Vec<_>>>()?;
        ModeStructure::new(&sizes)
    }
}

impl std::fmt::Display for ModeStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.modes.iter().map(|n_m| n_m.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An ordered list of distinct 1-based mode labels `(m₁,…,m_S)`.
///
/// Order is significant: `(2,1)` names the same modes as `(1,2)` but requests
/// them in swapped order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeList {
    labels: Vec<usize>,
}

impl ModeList {
    /// Builds a mode list, verifying the labels are distinct and within
    /// `1..=mode_count` of the given structure.
    pub fn new(labels: &[usize], structure: &ModeStructure) -> Result<Self> {
        if labels.is_empty() {
            return Err(EntKitError::InvalidArgument(
                "mode list must not be empty".into(),
            ));
        }
        let n_modes = structure.mode_count();
        for &m in labels {
            if m < 1 || m > n_modes {
                return Err(EntKitError::IndexOutOfRange(format!(
                    "mode label {m} not in 1..={n_modes}"
                )));
            }
        }
        let mut seen = vec![false; n_modes];
        for &m in labels {
            if seen[m - 1] {
                return Err(EntKitError::InvalidArgument(format!(
                    "duplicate mode label {m}"
                )));
            }
            seen[m - 1] = true;
        }
        Ok(Self {
            labels: labels.to_vec(),
        })
    }

    /// The labels in their significant order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of listed modes `S`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when no modes are listed (never constructible via [`new`](Self::new)).
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The same labels sorted ascending.
    pub fn sorted(&self) -> ModeList {
        let mut labels = self.labels.clone();
        labels.sort_unstable();
        ModeList { labels }
    }

    /// Whether the labels are already in ascending order.
    pub fn is_sorted(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] < w[1])
    }
}

fn factorizations(n: usize, min_factor: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut factor = min_factor;
    while factor * factor <= n {
        if n.is_multiple_of(factor) {
            for mut tail in factorizations(n / factor, factor) {
                let mut parts = vec![factor];
                parts.append(&mut tail);
                out.push(parts);
            }
        }
        factor += 1;
    }
    if n >= min_factor {
        out.push(vec![n]);
    }
    out
}

/// Every multimode structure with total dimension `4..=max_dim` — all ways
/// of writing each `n` as a product of factors ≥ 2 in at least two modes —
/// ordered by dimension, then mode count, then modes lexicographically.
pub fn standard_structures(max_dim: usize) -> Vec<ModeStructure> {
    let mut out = Vec::new();
    for n in 4..=max_dim {
        let mut shapes: Vec<Vec<usize>> = factorizations(n, 2)
            .into_iter()
            .filter(|parts| parts.len() >= 2)
            .collect();
        shapes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for shape in shapes {
            out.push(ModeStructure::new(&shape).expect("factors are ≥ 2"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_rejects_degenerate_modes() {
        assert!(ModeStructure::new(&[]).is_err());
        assert!(ModeStructure::new(&[2, 1, 3]).is_err());
        assert!(ModeStructure::new(&[2, 2, 3]).is_ok());
    }

    #[test]
    fn derived_quantities() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        assert_eq!(s.mode_count(), 3);
        assert_eq!(s.dim(), 12);
        assert_eq!(s.max_mode(), 3);
        assert_eq!(s.nbar_max(), 4);
        assert_eq!(s.to_string(), "2x2x3");
    }

    #[test]
    fn register_golden_values() {
        let s = ModeStructure::new(&[2, 2]).unwrap();
        assert_eq!(s.indical_register(&[1, 1]).unwrap(), 1);

        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        assert_eq!(s.indical_register(&[1, 2, 2]).unwrap(), 5);
        assert_eq!(s.indical_register(&[2, 1, 2]).unwrap(), 8);
        assert_eq!(s.indical_register(&[2, 2, 3]).unwrap(), 12);

        let s = ModeStructure::new(&[3, 4]).unwrap();
        assert_eq!(s.inverse_indical(6).unwrap(), vec![2, 2]);
    }

    #[test]
    fn inverse_golden_values() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        assert_eq!(s.inverse_indical(1).unwrap(), vec![1, 1, 1]);
        assert_eq!(s.inverse_indical(5).unwrap(), vec![1, 2, 2]);
        assert_eq!(s.inverse_indical(8).unwrap(), vec![2, 1, 2]);
        assert_eq!(s.inverse_indical(9).unwrap(), vec![2, 1, 3]);
        assert_eq!(s.inverse_indical(10).unwrap(), vec![2, 2, 1]);
        assert_eq!(s.inverse_indical(12).unwrap(), vec![2, 2, 3]);
    }

    /// Every ordered factorization into parts ≥ 2 with product ≤ `max_dim`.
    fn all_structures(max_dim: usize) -> Vec<Vec<usize>> {
        fn extend(prefix: &mut Vec<usize>, product: usize, max_dim: usize, out: &mut Vec<Vec<usize>>) {
            if !prefix.is_empty() {
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
        let mut out = Vec::new();
        extend(&mut Vec::new(), 1, max_dim, &mut out);
        out
    }

    #[test]
    fn register_roundtrip_exhaustive_to_dim_64() {
        for modes in all_structures(64) {
            let s = ModeStructure::new(&modes).unwrap();
            for v in 1..=s.dim() {
                let a = s.inverse_indical(v).unwrap();
                assert_eq!(s.indical_register(&a).unwrap(), v, "structure {s}");
            }
        }
    }

    #[test]
    fn register_range_errors_name_the_mode() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        let err = s.indical_register(&[1, 3, 1]).unwrap_err();
        assert!(err.to_string().contains("mode 2"), "{err}");
        assert!(s.inverse_indical(0).is_err());
        assert!(s.inverse_indical(13).is_err());
    }

    #[test]
    fn standard_structure_catalog_order_and_extent() {
        let all = standard_structures(28);
        assert_eq!(all.len(), 36);
        let names: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(names[0], "2x2");
        assert_eq!(names[1], "2x3");
        // Equal dimension orders by mode count, then lexicographically.
        let n24: Vec<String> = all
            .iter()
            .filter(|s| s.dim() == 24)
            .map(|s| s.to_string())
            .collect();
        assert_eq!(n24, vec!["2x12", "3x8", "4x6", "2x2x6", "2x3x4", "2x2x2x3"]);
        // Prime dimensions admit no multimode structure.
        assert!(!names.iter().any(|s| s == "23"));
        let small: Vec<&ModeStructure> = all.iter().filter(|s| s.dim() <= 12).collect();
        assert_eq!(small.len(), 9);
        assert_eq!(small.last().unwrap().to_string(), "2x2x3");
        // Desk-scale subset used by the randomized sweeps.
        assert_eq!(all.iter().filter(|s| s.dim() <= 18).count(), 18);
    }

    #[test]
    fn mode_list_validation() {
        let s = ModeStructure::new(&[2, 2, 3]).unwrap();
        assert!(ModeList::new(&[], &s).is_err());
        assert!(ModeList::new(&[1, 1], &s).is_err());
        assert!(ModeList::new(&[4], &s).is_err());
        let m = ModeList::new(&[3, 1], &s).unwrap();
        assert!(!m.is_sorted());
        assert_eq!(m.sorted().labels(), &[1, 3]);
        assert!(m.sorted().is_sorted());
    }
}
