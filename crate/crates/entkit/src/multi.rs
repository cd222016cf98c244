//! Ent of mode subsets and partitions of a pure parent state: modal ent,
//! partitional ent, the ent vector and ent array, ensemble-normalized net
//! and absolute ent, and the genuinely multipartite (GM) family.
//!
//! A *mode group* selects a subset of parent modes; its reduction, when
//! pure, is measured with the group substructure's own context.  A
//! *partition* coarse-grains a group into blocks, each block acting as one
//! large mode; partitional ent is the measure under that block structure.
//! Mixed reductions route to convex-roof formation values (rank ≤ 2), and
//! anything needing a deeper roof is reported as unavailable rather than
//! approximated.

use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{EntKitError, Result};
use crate::measure::{ent, ent_from_reduction_purities, EntContext};
use crate::meb::{generating_sets, meb_expand};
use crate::modes::{ModeList, ModeStructure};
use crate::roof::{roof_rank2, DEFAULT_ROOF_GRID};
use crate::state::{random_pure_state, DensityMatrix, StateVector};
use crate::tgx::{a13_all, state_from_levels};
use crate::{PURE_REDUCTION_EPS, RANK_EPS, RMAX_ROOF};

/// A subset of parent modes together with its derived substructure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeGroup {
    parent: ModeStructure,
    labels: Vec<usize>,
    sub: ModeStructure,
}

impl ModeGroup {
    /// Selects at least two distinct modes of the parent, keeping the given
    /// order.
    pub fn new(parent: &ModeStructure, labels: &[usize]) -> Result<Self> {
        if labels.len() < 2 {
            return Err(EntKitError::InvalidArgument(
                "a mode group needs at least two modes".into(),
            ));
        }
        ModeList::new(labels, parent)?;
        let sub = parent.substructure(labels)?;
        Ok(Self {
            parent: parent.clone(),
            labels: labels.to_vec(),
            sub,
        })
    }

    /// The group of all parent modes in natural order.
    pub fn full(parent: &ModeStructure) -> Result<Self> {
        let labels: Vec<usize> = (1..=parent.mode_count()).collect();
        Self::new(parent, &labels)
    }

    /// The parent structure.
    pub fn parent(&self) -> &ModeStructure {
        &self.parent
    }

    /// The selected parent mode labels, in group order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of modes in the group.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when the group selects no modes (never after construction).
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The structure formed by the selected modes.
    pub fn substructure(&self) -> &ModeStructure {
        &self.sub
    }

    /// Whether the group selects every parent mode.
    pub fn is_full(&self) -> bool {
        self.labels.len() == self.parent.mode_count()
    }

    /// 1-based position of a parent label within the group order.
    fn position_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label).map(|i| i + 1)
    }
}

/// A division of a mode group into `T` disjoint covering blocks, each block
/// treated as a single coarse mode of size `Π nₘ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    group: ModeGroup,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates disjoint nonempty blocks covering the group with
    /// `2 ≤ T ≤ S`, then canonicalizes: members ascending within blocks,
    /// blocks ordered by smallest member.
    pub fn new(group: ModeGroup, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let t = blocks.len();
        if t < 2 || t > group.len() {
            return Err(EntKitError::InvalidArgument(format!(
                "{t} blocks for a group of {} modes; need 2..={}",
                group.len(),
                group.len()
            )));
        }
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(t);
        for block in blocks {
            if block.is_empty() {
                return Err(EntKitError::InvalidArgument("empty block".into()));
            }
            let mut sorted = block;
            sorted.sort_unstable();
            canonical.push(sorted);
        }
        canonical.sort_by_key(|block| block[0]);
        let mut seen: Vec<usize> = canonical.iter().flatten().copied().collect();
        seen.sort_unstable();
        let mut expected: Vec<usize> = group.labels().to_vec();
        expected.sort_unstable();
        if seen != expected {
            return Err(EntKitError::InvalidArgument(format!(
                "blocks {canonical:?} do not partition the group modes {:?}",
                group.labels()
            )));
        }
        Ok(Self {
            group,
            blocks: canonical,
        })
    }

    /// The partitioned group.
    pub fn group(&self) -> &ModeGroup {
        &self.group
    }

    /// The blocks (parent labels), canonical order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `T`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Coarse mode sizes: the product of member mode sizes per block.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&label| self.group.parent.modes()[label - 1])
                    .product()
            })
            .collect()
    }

    /// The coarse structure formed by the block sizes.
    pub fn block_structure(&self) -> Result<ModeStructure> {
        ModeStructure::new(&self.block_sizes())
    }

    /// Block members rewritten as 1-based positions within the group order.
    fn block_positions(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&label| self.group.position_of(label).expect("validated"))
                    .collect()
            })
            .collect()
    }

    /// Display form like `1|2,3`.
    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// All divisions of `items` into exactly `block_count` nonempty blocks, in
/// restricted-growth-string order; within each division, blocks appear by
/// first occurrence (equivalently by smallest member when `items` ascend).
pub fn set_partitions(items: &[usize], block_count: usize) -> Vec<Vec<Vec<usize>>> {
    let s = items.len();
    if block_count < 1 || block_count > s {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; s];
    fn recurse(
        items: &[usize],
        target: usize,
        position: usize,
        used: usize,
        assignment: &mut [usize],
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let s = items.len();
        if position == s {
            if used == target {
                let mut blocks = vec![Vec::new(); target];
                for (i, &b) in assignment.iter().enumerate() {
                    blocks[b].push(items[i]);
                }
                out.push(blocks);
            }
            return;
        }
        let remaining = s - position;
        let highest = used.min(target - 1);
        for value in 0..=highest {
            let next_used = used.max(value + 1);
            // Prune branches that can no longer open enough blocks.
            if next_used + (remaining - 1) < target {
                continue;
            }
            assignment[position] = value;
            recurse(items, target, position + 1, next_used, assignment, out);
        }
    }
    recurse(items, block_count, 0, 0, &mut assignment, &mut out);
    out
}

/// Every partition of a group into `block_count` blocks, enumeration order
/// as in [`set_partitions`].
pub fn partitions_of_group(group: &ModeGroup, block_count: usize) -> Result<Vec<Partition>> {
    set_partitions(group.labels(), block_count)
        .into_iter()
        .map(|blocks| Partition::new(group.clone(), blocks))
        .collect()
}

fn group_reduction(psi: &StateVector, group: &ModeGroup) -> Result<DensityMatrix> {
    let list = ModeList::new(group.labels(), psi.structure())?;
    psi.reduced_for_modes(&list)
}

/// The reduction of the parent to the group as a pure state; errors when the
/// cut carries entanglement (mixed reduction), pointing to the formation
/// path.
pub fn group_state(psi: &StateVector, group: &ModeGroup) -> Result<StateVector> {
    if group.parent() != psi.structure() {
        return Err(EntKitError::InvalidArgument(format!(
            "group is over {}, state is in {}",
            group.parent(),
            psi.structure()
        )));
    }
    if group.is_full() {
        let list = ModeList::new(group.labels(), psi.structure())?;
        return psi.permute_modes(&list);
    }
    let rho = group_reduction(psi, group)?;
    let purity = rho.purity();
    if purity < 1.0 - PURE_REDUCTION_EPS {
        return Err(EntKitError::Validation(format!(
            "reduction to modes {:?} is mixed (purity {purity:.6}); use \
             modal_ent_formation on the reduced matrix",
            group.labels()
        )));
    }
    rho.pure_projection(PURE_REDUCTION_EPS)
}

/// Ent of the parent's pure reduction to a mode group, evaluated with the
/// group substructure's own context; mixed reductions error toward
/// [`modal_ent_formation`].
pub fn modal_ent(psi: &StateVector, group: &ModeGroup) -> Result<f64> {
    let w = group_state(psi, group)?;
    Ok(ent(&w)?.ent())
}

/// Convex-roof formation value of the ent for a (possibly mixed) matrix on
/// a group substructure: the minimum decomposition-averaged ent over the
/// rank-2 unitary family.
pub fn modal_ent_formation(rho: &DensityMatrix, grid: (usize, usize)) -> Result<f64> {
    Ok(roof_rank2(rho, |w| ent(w).map(|r| r.ent()), grid)?.minimum())
}

fn partitional_ent_of_group_state(w: &StateVector, partition: &Partition) -> Result<f64> {
    let block_structure = partition.block_structure()?;
    let context = EntContext::cached(&block_structure)?;
    let mut purities = Vec::with_capacity(partition.block_count());
    for positions in partition.block_positions() {
        let list = ModeList::new(&positions, w.structure())?;
        purities.push(w.reduced_for_modes(&list)?.purity());
    }
    ent_from_reduction_purities(&context, &purities)
}

/// Ent of the group reduction under the partition's coarse block structure:
/// block reduction purities fed through the block structure's context.
pub fn partitional_ent(psi: &StateVector, partition: &Partition) -> Result<f64> {
    let w = group_state(psi, partition.group())?;
    partitional_ent_of_group_state(&w, partition)
}

/// Same value by the reshape route: permute the group state so blocks are
/// contiguous, reinterpret the amplitudes under the block structure, and
/// measure the coarse state directly.  Serves as an independent oracle for
/// [`partitional_ent`].
pub fn partitional_ent_reshaped(psi: &StateVector, partition: &Partition) -> Result<f64> {
    let w = group_state(psi, partition.group())?;
    let order: Vec<usize> = partition.block_positions().concat();
    let permuted = w.permute_modes(&ModeList::new(&order, w.structure())?)?;
    let reshaped = StateVector::new(
        partition.block_structure()?,
        permuted.amplitudes().to_vec(),
    )?;
    Ok(ent(&reshaped)?.ent())
}

/// Formation value of the partitional ent for a mixed matrix on the group
/// substructure.
pub fn partitional_ent_formation(
    rho: &DensityMatrix,
    partition: &Partition,
    grid: (usize, usize),
) -> Result<f64> {
    if rho.structure() != partition.group().substructure() {
        return Err(EntKitError::InvalidArgument(format!(
            "matrix is on {}, partition's group substructure is {}",
            rho.structure(),
            partition.group().substructure()
        )));
    }
    Ok(roof_rank2(rho, |w| partitional_ent_of_group_state(w, partition), grid)?.minimum())
}

/// One measured cell: how the value was obtained, or why it is missing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntCell {
    /// Pure reduction measured directly.
    Direct(f64),
    /// Mixed reduction resolved by a rank-2 convex roof.
    Formation(f64),
    /// The reduction needs a roof beyond the supported rank.
    Unavailable {
        /// Rank of the offending reduction.
        rank: usize,
    },
}

impl EntCell {
    /// The numeric value, when available.
    pub fn value(&self) -> Option<f64> {
        match self {
            EntCell::Direct(x) | EntCell::Formation(x) => Some(*x),
            EntCell::Unavailable { .. } => None,
        }
    }

    /// Whether a value is present.
    pub fn is_available(&self) -> bool {
        self.value().is_some()
    }
}

enum GroupDisposition {
    Pure(StateVector),
    Mixed(DensityMatrix),
    TooDeep(usize),
}

fn group_disposition(psi: &StateVector, group: &ModeGroup) -> Result<GroupDisposition> {
    if group.is_full() {
        return Ok(GroupDisposition::Pure(group_state(psi, group)?));
    }
    let rho = group_reduction(psi, group)?;
    if rho.purity() >= 1.0 - PURE_REDUCTION_EPS {
        return Ok(GroupDisposition::Pure(rho.pure_projection(PURE_REDUCTION_EPS)?));
    }
    let rank = rho.rank(RANK_EPS);
    if rank > RMAX_ROOF {
        return Ok(GroupDisposition::TooDeep(rank));
    }
    Ok(GroupDisposition::Mixed(rho))
}

fn modal_cell(psi: &StateVector, group: &ModeGroup, grid: (usize, usize)) -> Result<EntCell> {
    Ok(match group_disposition(psi, group)? {
        GroupDisposition::Pure(w) => EntCell::Direct(ent(&w)?.ent()),
        GroupDisposition::Mixed(rho) => EntCell::Formation(modal_ent_formation(&rho, grid)?),
        GroupDisposition::TooDeep(rank) => EntCell::Unavailable { rank },
    })
}

fn ascending_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (1..=n).combinations(k).collect()
}

/// Modal ent (or formation value) of every mode subset, rows by subset size
/// `k = 2..=N`, each row in ascending combination order.
#[derive(Debug, Clone)]
pub struct EntVector {
    structure: ModeStructure,
    rows: Vec<Vec<(Vec<usize>, EntCell)>>,
}

impl EntVector {
    /// The parent structure.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// Row for subset size `k` (`2 ≤ k ≤ N`).
    pub fn row(&self, k: usize) -> Option<&[(Vec<usize>, EntCell)]> {
        k.checked_sub(2)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
    }

    /// All rows, `k` ascending.
    pub fn rows(&self) -> &[Vec<(Vec<usize>, EntCell)>] {
        &self.rows
    }

    /// Total number of cells.
    pub fn dim(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Whether every cell carries a value.
    pub fn all_available(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|(_, cell)| cell.is_available())
    }

    /// Sum of absolute cell values; errors on the first unavailable cell.
    pub fn one_norm(&self) -> Result<f64> {
        let mut total = 0.0;
        for (labels, cell) in self.rows.iter().flatten() {
            match cell.value() {
                Some(x) => total += x.abs(),
                None => {
                    return Err(EntKitError::Unavailable(format!(
                        "cell for modes {labels:?} needs a deeper decomposition \
                         search than supported"
                    )))
                }
            }
        }
        Ok(total)
    }
}

/// Builds the ent vector with the default decomposition grid.
pub fn ent_vector(psi: &StateVector) -> Result<EntVector> {
    ent_vector_with_grid(psi, DEFAULT_ROOF_GRID)
}

/// Builds the ent vector, choosing the formation-search grid.
pub fn ent_vector_with_grid(psi: &StateVector, grid: (usize, usize)) -> Result<EntVector> {
    let structure = psi.structure();
    let n = structure.mode_count();
    if n < 2 {
        return Err(EntKitError::UnsupportedStructure(
            "the ent vector needs at least two modes".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let subsets = ascending_subsets(n, k);
        let row: Vec<(Vec<usize>, EntCell)> = subsets
            .into_par_iter()
            .map(|labels| {
                let group = ModeGroup::new(structure, &labels)?;
                let cell = modal_cell(psi, &group, grid)?;
                Ok((labels, cell))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(EntVector {
        structure: structure.clone(),
        rows,
    })
}

/// Partitional ent of every partition of one group, rows by block count
/// `T = 2..=S` in enumeration order.
#[derive(Debug, Clone)]
pub struct PartitionalEntVector {
    group: ModeGroup,
    rows: Vec<Vec<(Partition, EntCell)>>,
}

impl PartitionalEntVector {
    /// The partitioned group.
    pub fn group(&self) -> &ModeGroup {
        &self.group
    }

    /// Row for block count `T` (`2 ≤ T ≤ S`).
    pub fn row(&self, t: usize) -> Option<&[(Partition, EntCell)]> {
        t.checked_sub(2)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
    }

    /// All rows, `T` ascending.
    pub fn rows(&self) -> &[Vec<(Partition, EntCell)>] {
        &self.rows
    }

    /// Total number of cells.
    pub fn dim(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Whether every cell carries a value.
    pub fn all_available(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|(_, cell)| cell.is_available())
    }

    /// Sum of absolute cell values; errors on the first unavailable cell.
    pub fn one_norm(&self) -> Result<f64> {
        let mut total = 0.0;
        for (partition, cell) in self.rows.iter().flatten() {
            match cell.value() {
                Some(x) => total += x.abs(),
                None => {
                    return Err(EntKitError::Unavailable(format!(
                        "cell for partition {} needs a deeper decomposition \
                         search than supported",
                        partition.label()
                    )))
                }
            }
        }
        Ok(total)
    }
}

/// Builds the partitional ent vector of a group with the default grid.
pub fn partitional_ent_vector(psi: &StateVector, group: &ModeGroup) -> Result<PartitionalEntVector> {
    partitional_ent_vector_with_grid(psi, group, DEFAULT_ROOF_GRID)
}

/// Builds the partitional ent vector, choosing the formation-search grid.
pub fn partitional_ent_vector_with_grid(
    psi: &StateVector,
    group: &ModeGroup,
    grid: (usize, usize),
) -> Result<PartitionalEntVector> {
    if group.parent() != psi.structure() {
        return Err(EntKitError::InvalidArgument(format!(
            "group is over {}, state is in {}",
            group.parent(),
            psi.structure()
        )));
    }
    let disposition = group_disposition(psi, group)?;
    let mut rows = Vec::with_capacity(group.len() - 1);
    for t in 2..=group.len() {
        let partitions = partitions_of_group(group, t)?;
        let row: Vec<(Partition, EntCell)> = partitions
            .into_par_iter()
            .map(|partition| {
                let cell = match &disposition {
                    GroupDisposition::Pure(w) => {
                        EntCell::Direct(partitional_ent_of_group_state(w, &partition)?)
                    }
                    GroupDisposition::Mixed(rho) => EntCell::Formation(
                        partitional_ent_formation(rho, &partition, grid)?,
                    ),
                    GroupDisposition::TooDeep(rank) => EntCell::Unavailable { rank: *rank },
                };
                Ok((partition, cell))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(PartitionalEntVector {
        group: group.clone(),
        rows,
    })
}

/// The full two-level aggregate: a partitional ent vector for every mode
/// subset of size `k = 2..=N`.
#[derive(Debug, Clone)]
pub struct EntArray {
    structure: ModeStructure,
    rows: Vec<Vec<PartitionalEntVector>>,
}

impl EntArray {
    /// The parent structure.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// Row for subset size `k`: one vector per `k`-subset, ascending order.
    pub fn row(&self, k: usize) -> Option<&[PartitionalEntVector]> {
        k.checked_sub(2)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
    }

    /// All rows, `k` ascending.
    pub fn rows(&self) -> &[Vec<PartitionalEntVector>] {
        &self.rows
    }

    /// Total number of scalar cells across all vectors.
    pub fn dim(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(PartitionalEntVector::dim)
            .sum()
    }

    /// Whether every cell everywhere carries a value.
    pub fn all_available(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(PartitionalEntVector::all_available)
    }

    /// Sum of absolute cell values; errors on the first unavailable cell.
    pub fn one_norm(&self) -> Result<f64> {
        let mut total = 0.0;
        for vector in self.rows.iter().flatten() {
            total += vector.one_norm()?;
        }
        Ok(total)
    }
}

/// Builds the ent array with the default grid.
pub fn ent_array(psi: &StateVector) -> Result<EntArray> {
    ent_array_with_grid(psi, DEFAULT_ROOF_GRID)
}

/// Builds the ent array, choosing the formation-search grid.
pub fn ent_array_with_grid(psi: &StateVector, grid: (usize, usize)) -> Result<EntArray> {
    let structure = psi.structure();
    let n = structure.mode_count();
    if n < 2 {
        return Err(EntKitError::UnsupportedStructure(
            "the ent array needs at least two modes".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let subsets = ascending_subsets(n, k);
        let row: Vec<PartitionalEntVector> = subsets
            .into_par_iter()
            .map(|labels| {
                let group = ModeGroup::new(structure, &labels)?;
                partitional_ent_vector_with_grid(psi, &group, grid)
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(EntArray {
        structure: structure.clone(),
        rows,
    })
}

/// How many random states join the reference ensemble for the net/absolute
/// normalizers.
pub const ENSEMBLE_RANDOM_COUNT: usize = 1000;

/// Base seed of the ensemble's random states (state `i` uses seed
/// `ENSEMBLE_SEED + i`), fixed so normalizers are reproducible.
pub const ENSEMBLE_SEED: u64 = 1729;

/// A normalizer estimated over a reference ensemble of states.
#[derive(Debug, Clone)]
pub struct EnsembleNormalizer {
    normalizer: f64,
    ensemble: String,
    evaluated: usize,
    skipped: usize,
}

impl EnsembleNormalizer {
    /// The maximum norm seen across the ensemble — a lower bound on the true
    /// supremum over all pure states.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Describes the ensemble composition and seeding.
    pub fn ensemble(&self) -> &str {
        &self.ensemble
    }

    /// Ensemble members whose norm was computable.
    pub fn evaluated(&self) -> usize {
        self.evaluated
    }

    /// Ensemble members skipped for needing unsupported roof depth.
    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

fn ensemble_states(structure: &ModeStructure) -> Result<(Vec<StateVector>, String)> {
    let mut states = Vec::new();
    let catalog = a13_all(structure)?;
    for row in catalog.rows() {
        states.push(state_from_levels(structure, row, None)?);
    }
    let catalog_count = states.len();
    let mut meb_count = 0;
    match generating_sets(structure) {
        Ok(sets) => {
            for set in &sets {
                let basis = meb_expand(set)?;
                meb_count += basis.len();
                states.extend(basis.states().iter().cloned());
            }
        }
        Err(EntKitError::UnsupportedStructure(_)) => {}
        Err(e) => return Err(e),
    }
    for i in 0..ENSEMBLE_RANDOM_COUNT {
        states.push(random_pure_state(structure, ENSEMBLE_SEED + i as u64));
    }
    let descriptor = format!(
        "a13({catalog_count})+meb({meb_count})+random({ENSEMBLE_RANDOM_COUNT};seed={ENSEMBLE_SEED})"
    );
    Ok((states, descriptor))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum NormKind {
    Net,
    Abs,
}

fn norm_of(psi: &StateVector, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::Net => ent_vector(psi)?.one_norm(),
        NormKind::Abs => ent_array(psi)?.one_norm(),
    }
}

type NormalizerCache = RwLock<HashMap<(ModeStructure, bool), Arc<EnsembleNormalizer>>>;
static NORMALIZERS: OnceLock<NormalizerCache> = OnceLock::new();

fn normalizer_for(structure: &ModeStructure, kind: NormKind) -> Result<Arc<EnsembleNormalizer>> {
    let key = (structure.clone(), kind == NormKind::Abs);
    let cache = NORMALIZERS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(found) = cache.read().expect("normalizer cache poisoned").get(&key) {
        return Ok(found.clone());
    }
    let (states, ensemble) = ensemble_states(structure)?;
    let norms: Vec<Option<f64>> = states
        .par_iter()
        .map(|psi| match norm_of(psi, kind) {
            Ok(value) => Ok(Some(value)),
            Err(EntKitError::Unavailable(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let evaluated = norms.iter().flatten().count();
    let skipped = norms.len() - evaluated;
    let normalizer = norms
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |acc, &x| acc.max(x));
    if evaluated == 0 {
        return Err(EntKitError::Unavailable(format!(
            "no ensemble member of {structure} admits the norm at supported roof depth"
        )));
    }
    let info = Arc::new(EnsembleNormalizer {
        normalizer,
        ensemble,
        evaluated,
        skipped,
    });
    cache
        .write()
        .expect("normalizer cache poisoned")
        .insert(key, info.clone());
    Ok(info)
}

/// A norm divided by its ensemble normalizer, carrying the details of how
/// the normalizer was estimated.
#[derive(Debug, Clone)]
pub struct NormalizedEntReport {
    value: f64,
    one_norm: f64,
    normalizer: Arc<EnsembleNormalizer>,
}

impl NormalizedEntReport {
    /// The normalized value.  Because the normalizer is an ensemble maximum
    /// rather than a proven supremum, treat this as an upper estimate.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// The raw 1-norm of the underlying vector or array.
    pub fn one_norm(&self) -> f64 {
        self.one_norm
    }

    /// The ensemble normalizer used.
    pub fn normalizer(&self) -> &EnsembleNormalizer {
        &self.normalizer
    }
}

/// Net ent: the 1-norm of the ent vector over the ensemble-approximated
/// maximum of that norm.
pub fn net_ent(psi: &StateVector) -> Result<NormalizedEntReport> {
    let one_norm = ent_vector(psi)?.one_norm()?;
    let normalizer = normalizer_for(psi.structure(), NormKind::Net)?;
    Ok(NormalizedEntReport {
        value: one_norm / normalizer.normalizer(),
        one_norm,
        normalizer,
    })
}

/// Absolute ent: the 1-norm of the ent array over the ensemble-approximated
/// maximum of that norm.
pub fn abs_ent(psi: &StateVector) -> Result<NormalizedEntReport> {
    let one_norm = ent_array(psi)?.one_norm()?;
    let normalizer = normalizer_for(psi.structure(), NormKind::Abs)?;
    Ok(NormalizedEntReport {
        value: one_norm / normalizer.normalizer(),
        one_norm,
        normalizer,
    })
}

/// A minimized partition together with its value.
#[derive(Debug, Clone)]
pub struct GmReport {
    value: f64,
    partition: Partition,
}

impl GmReport {
    /// The minimal partitional ent.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// The minimizing partition (first in enumeration order on ties).
    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

/// Minimum full-group `k`-partitional ent of a pure state.
pub fn gm_k_ent(psi: &StateVector, k: usize) -> Result<GmReport> {
    let structure = psi.structure();
    let n = structure.mode_count();
    if k < 2 || k > n {
        return Err(EntKitError::InvalidArgument(format!(
            "partition size {k} outside 2..={n}"
        )));
    }
    let group = ModeGroup::full(structure)?;
    let mut best: Option<GmReport> = None;
    for partition in partitions_of_group(&group, k)? {
        let value = partitional_ent(psi, &partition)?;
        let better = best.as_ref().is_none_or(|b| value < b.value);
        if better {
            best = Some(GmReport { value, partition });
        }
    }
    Ok(best.expect("at least one partition exists"))
}

/// The genuinely multipartite ent: minimum over full-group bipartitions.
pub fn gm_ent(psi: &StateVector) -> Result<GmReport> {
    gm_k_ent(psi, 2)
}

/// The standard pure-state GM concurrence: minimum over full-group
/// bipartitions of `√(2(1 − P))` with `P` the purity of one side.
pub fn gm_concurrence_pure(psi: &StateVector) -> Result<f64> {
    let structure = psi.structure();
    let group = ModeGroup::full(structure)?;
    let mut best = f64::INFINITY;
    for partition in partitions_of_group(&group, 2)? {
        let first = &partition.blocks()[0];
        let list = ModeList::new(first, structure)?;
        let purity = psi.reduced_for_modes(&list)?.purity();
        best = best.min((2.0 * (1.0 - purity)).max(0.0).sqrt());
    }
    Ok(best)
}
