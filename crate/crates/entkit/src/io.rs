//! State files on disk and the versioned machine-readable report envelope.
//!
//! A state file is a UTF-8 JSON object: `{"modes": [2,2,3], "kind": "pure",
//! "amplitudes": [[re,im], …]}` for vectors (entries in register order
//! `1..n`), or `"kind": "density"` with `"matrix": [[[re,im], …], …]` for
//! matrices.  Loading validates the payload with the same constructors used
//! everywhere else, so malformed or unnormalized input is rejected with a
//! specific message rather than silently repaired.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fs;
use std::path::Path;

use crate::error::{EntKitError, Result};
use crate::modes::ModeStructure;
use crate::state::{DensityMatrix, StateVector};

/// Version tag carried by every report this crate emits.
pub const REPORT_SCHEMA: &str = "entkit-report-v1";

#[derive(Serialize, Deserialize)]
struct StateFileJson {
    modes: Vec<usize>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// A state read from disk: either a pure vector or a density matrix.
#[derive(Debug, Clone)]
pub enum LoadedState {
    /// A normalized state vector.
    Pure(StateVector),
    /// A validated density matrix.
    Density(DensityMatrix),
}

impl LoadedState {
    /// The mode structure of the loaded state.
    pub fn structure(&self) -> &ModeStructure {
        match self {
            LoadedState::Pure(psi) => psi.structure(),
            LoadedState::Density(rho) => rho.structure(),
        }
    }

    /// `"pure"` or `"density"`, matching the file field.
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedState::Pure(_) => "pure",
            LoadedState::Density(_) => "density",
        }
    }
}

/// Parses the state-file JSON text.
pub fn parse_state(text: &str) -> Result<LoadedState> {
    let raw: StateFileJson = serde_json::from_str(text)?;
    let structure = ModeStructure::new(&raw.modes)?;
    let n = structure.dim();
    match raw.kind.as_str() {
        "pure" => {
            let pairs = raw.amplitudes.ok_or_else(|| {
                EntKitError::Validation("kind \"pure\" needs an \"amplitudes\" field".into())
            })?;
            if pairs.len() != n {
                return Err(EntKitError::Validation(format!(
                    "{} amplitudes for dimension {n}",
                    pairs.len()
                )));
            }
            let amplitudes = pairs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            Ok(LoadedState::Pure(StateVector::new(structure, amplitudes)?))
        }
        "density" => {
            let rows = raw.matrix.ok_or_else(|| {
                EntKitError::Validation("kind \"density\" needs a \"matrix\" field".into())
            })?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(EntKitError::Validation(format!(
                    "matrix must be {n}×{n}"
                )));
            }
            let entries = Array2::from_shape_fn((n, n), |(r, c)| {
                let [re, im] = rows[r][c];
                Complex64::new(re, im)
            });
            Ok(LoadedState::Density(DensityMatrix::new(structure, entries)?))
        }
        other => Err(EntKitError::Validation(format!(
            "unknown state kind {other:?}; expected \"pure\" or \"density\""
        ))),
    }
}

/// Loads and parses a state file.
pub fn load_state(path: &Path) -> Result<LoadedState> {
    parse_state(&fs::read_to_string(path)?)
}

/// The state-file JSON value for a pure state.
pub fn pure_state_json(psi: &StateVector) -> Value {
    let amplitudes: Vec<[f64; 2]> = psi.amplitudes().iter().map(|a| [a.re, a.im]).collect();
    json!({
        "modes": psi.structure().modes(),
        "kind": "pure",
        "amplitudes": amplitudes,
    })
}

/// The state-file JSON value for a density matrix.
pub fn density_json(rho: &DensityMatrix) -> Value {
    let n = rho.structure().dim();
    let m = rho.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..n)
        .map(|r| (0..n).map(|c| [m[[r, c]].re, m[[r, c]].im]).collect())
        .collect();
    json!({
        "modes": rho.structure().modes(),
        "kind": "density",
        "matrix": rows,
    })
}

/// The state-file JSON value for either kind.
pub fn state_json(state: &LoadedState) -> Value {
    match state {
        LoadedState::Pure(psi) => pure_state_json(psi),
        LoadedState::Density(rho) => density_json(rho),
    }
}

/// Writes a state file (pretty-printed JSON).
pub fn save_state(path: &Path, state: &LoadedState) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&state_json(state))?)?;
    Ok(())
}

/// The envelope wrapping every machine-readable result: a schema tag, the
/// producing command, the seed when randomness was involved, and the
/// command-specific payload.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    schema: &'static str,
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    data: Value,
}

impl Report {
    /// Wraps a payload under the current schema version.
    pub fn new(command: impl Into<String>, data: Value) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            command: command.into(),
            seed: None,
            data,
        }
    }

    /// Records the seed that determined any randomized content.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// The schema tag.
    pub fn schema(&self) -> &str {
        self.schema
    }

    /// The producing command.
    pub fn command(&self) -> &str {
        &self.command
    }

    /// The recorded seed, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The payload.
    pub fn data(&self) -> &Value {
        &self.data
    }

    /// Pretty-printed JSON text.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders a header and rows as CSV text with minimal quoting.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Writes text to `out` when given, otherwise to standard output.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
        }
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}
