//! Reference-artifact generators shared by the command-line `tables`
//! subcommand and the test suite: the level-count catalog, one canonical
//! maximally entangled level set per structure, and the full level-set
//! catalogs for small structures, all in a stable order.

use crate::error::Result;
use crate::measure::lstar_set;
use crate::modes::{standard_structures, ModeStructure};
use crate::tgx::{a13, a13_all, LevelSetTable};

/// `(structure, L* set)` for every standard structure up to `max_dim`.
pub fn level_count_rows(max_dim: usize) -> Result<Vec<(ModeStructure, Vec<usize>)>> {
    standard_structures(max_dim)
        .into_iter()
        .map(|s| {
            let set = lstar_set(&s)?;
            Ok((s, set))
        })
        .collect()
}

/// The canonical maximally entangled level set of one structure: the first
/// set produced by the thirteen-step search from starting level 1 at the
/// smallest `L*` (equivalently the lexicographically least such set).
pub fn canonical_level_set(structure: &ModeStructure) -> Result<Vec<usize>> {
    let lmin = *lstar_set(structure)?
        .first()
        .expect("the L* set is never empty");
    let table = a13(structure, 1, lmin)?;
    Ok(table
        .rows()
        .first()
        .expect("a13 errors instead of returning an empty table")
        .clone())
}

/// `(structure, canonical level set)` for every standard structure up to
/// `max_dim`.
pub fn canonical_state_rows(max_dim: usize) -> Result<Vec<(ModeStructure, Vec<usize>)>> {
    standard_structures(max_dim)
        .into_iter()
        .map(|s| {
            let levels = canonical_level_set(&s)?;
            Ok((s, levels))
        })
        .collect()
}

/// `(structure, full catalog)` for every standard structure up to `max_dim`
/// (callers wanting the fully enumerated reference set use `max_dim = 12`).
pub fn full_catalog_rows(max_dim: usize) -> Result<Vec<(ModeStructure, LevelSetTable)>> {
    standard_structures(max_dim)
        .into_iter()
        .map(|s| {
            let table = a13_all(&s)?;
            Ok((s, table))
        })
        .collect()
}
