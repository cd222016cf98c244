//! Parameterized state families and entanglement-preserving unitaries.
//!
//! Provides θ-families interpolating from a basis state to balanced
//! superposition over a level set, full hyperspherical parameterization of
//! the amplitude sphere over a level set, entanglement-preserving unitaries
//! (local unitaries composed with a diagonal phase gate), Schmidt
//! decomposition for two-mode structures, and the closed-form ent/θ pair for
//! the canonical 2×2×3 family.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{EntKitError, Result};
use crate::linalg::{complete_frame, haar_unitary, is_unitary, svd};
use crate::measure::ent;
use crate::modes::ModeStructure;
use crate::state::StateVector;

const DOMAIN_SLACK: f64 = 1e-12;

/// Amplitudes on the unit sphere from `L−1` polar angles:
/// `x₁ = cosθ₁`, `x_k = sinθ₁⋯sinθ_{k−1}·cosθ_k`, `x_L = sinθ₁⋯sinθ_{L−1}`.
pub fn hyperspherical(thetas: &[f64]) -> Vec<f64> {
    let l = thetas.len() + 1;
    let mut out = Vec::with_capacity(l);
    let mut sin_product = 1.0;
    for &theta in thetas {
        out.push(sin_product * theta.cos());
        sin_product *= theta.sin();
    }
    out.push(sin_product);
    out
}

/// Angles at which [`hyperspherical`] is balanced (`1/√L` everywhere):
/// `θ_k = atan(√(L−k))`.
pub fn balanced_angles(l: usize) -> Vec<f64> {
    (1..l).map(|k| ((l - k) as f64).sqrt().atan()).collect()
}

/// The angle of balanced superposition for an `L`-level family:
/// `acos(1/√L)`.
pub fn theta_max_for(l: usize) -> f64 {
    (1.0 / (l as f64).sqrt()).acos()
}

/// A one-angle family over a fixed level set: `cosθ` on the first level and
/// `sinθ/√(L−1)` on each of the rest, reaching balance at
/// [`ThetaFamily::theta_max`].
#[derive(Debug, Clone)]
pub struct ThetaFamily {
    structure: ModeStructure,
    levels: Vec<usize>,
}

impl ThetaFamily {
    /// Wraps a structure and at least two distinct in-range levels.  The
    /// level order is kept: the first level carries the `cosθ` amplitude.
    pub fn new(structure: ModeStructure, levels: Vec<usize>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(EntKitError::InvalidArgument(
                "a theta family needs at least two levels".into(),
            ));
        }
        let n = structure.dim();
        let mut seen = vec![false; n];
        for &v in &levels {
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
        Ok(Self { structure, levels })
    }

    /// The underlying structure.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// The level set, in family order.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Number of levels `L`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    /// True when the family has no levels (never after construction).
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The balance angle `acos(1/√L)`.
    pub fn theta_max(&self) -> f64 {
        theta_max_for(self.levels.len())
    }

    fn amplitudes_at(&self, theta: f64) -> Vec<Complex64> {
        let l = self.levels.len();
        let tail = theta.sin() / ((l - 1) as f64).sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.structure.dim()];
        for (k, &v) in self.levels.iter().enumerate() {
            let x = if k == 0 { theta.cos() } else { tail };
            amplitudes[v - 1] = Complex64::new(x, 0.0);
        }
        amplitudes
    }

    /// The family state at `θ ∈ [0, θ_max]`; out-of-range angles are
    /// rejected.
    pub fn state(&self, theta: f64) -> Result<StateVector> {
        let max = self.theta_max();
        if theta < -DOMAIN_SLACK || theta > max + DOMAIN_SLACK {
            return Err(EntKitError::InvalidArgument(format!(
                "theta {theta} outside [0, {max}]"
            )));
        }
        StateVector::new(self.structure.clone(), self.amplitudes_at(theta))
    }

    /// The family state extended past balance, up to `θ = π/2` where only
    /// the tail levels survive.
    pub fn state_extended(&self, theta: f64) -> Result<StateVector> {
        if !(-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&theta) {
            return Err(EntKitError::InvalidArgument(format!(
                "theta {theta} outside [0, π/2]"
            )));
        }
        StateVector::new(self.structure.clone(), self.amplitudes_at(theta))
    }

    /// Fully parameterized state: `L−1` angles feed [`hyperspherical`] and
    /// the resulting amplitudes land on the level set in order.
    pub fn state_multi(&self, thetas: &[f64]) -> Result<StateVector> {
        let l = self.levels.len();
        if thetas.len() != l - 1 {
            return Err(EntKitError::InvalidArgument(format!(
                "{} angles for {l} levels; need L−1",
                thetas.len()
            )));
        }
        let xs = hyperspherical(thetas);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.structure.dim()];
        for (&v, &x) in self.levels.iter().zip(&xs) {
            amplitudes[v - 1] = Complex64::new(x, 0.0);
        }
        StateVector::new(self.structure.clone(), amplitudes)
    }
}

/// The family state at one angle (see [`ThetaFamily::state`]).
pub fn theta_state(family: &ThetaFamily, theta: f64) -> Result<StateVector> {
    family.state(theta)
}

/// The fully parameterized family state (see [`ThetaFamily::state_multi`]).
pub fn theta_state_multi(family: &ThetaFamily, thetas: &[f64]) -> Result<StateVector> {
    family.state_multi(thetas)
}

/// An entanglement-preserving unitary: per-mode local unitaries applied
/// after a diagonal phase gate, `(U⁽¹⁾⊗⋯⊗U⁽ᴺ⁾)·diag{e^{iη_k}}`.
#[derive(Debug, Clone)]
pub struct EpuSpec {
    locals: Vec<Array2<Complex64>>,
    diag_phases: Vec<f64>,
}

impl EpuSpec {
    /// Validates one unitary per mode (matching sizes, unitary within
    /// `1e−12`) and one phase per level.
    pub fn new(
        structure: &ModeStructure,
        locals: Vec<Array2<Complex64>>,
        diag_phases: Vec<f64>,
    ) -> Result<Self> {
        if locals.len() != structure.mode_count() {
            return Err(EntKitError::InvalidArgument(format!(
                "{} local unitaries for {} modes",
                locals.len(),
                structure.mode_count()
            )));
        }
        for (m, u) in locals.iter().enumerate() {
            let n_m = structure.modes()[m];
            if u.nrows() != n_m || u.ncols() != n_m {
                return Err(EntKitError::InvalidArgument(format!(
                    "local unitary {} is {}×{}, mode has size {n_m}",
                    m + 1,
                    u.nrows(),
                    u.ncols()
                )));
            }
            if !is_unitary(u, 1e-12) {
                return Err(EntKitError::Validation(format!(
                    "local operator {} is not unitary",
                    m + 1
                )));
            }
        }
        if diag_phases.len() != structure.dim() {
            return Err(EntKitError::InvalidArgument(format!(
                "{} diagonal phases for dimension {}",
                diag_phases.len(),
                structure.dim()
            )));
        }
        Ok(Self {
            locals,
            diag_phases,
        })
    }

    /// The identity transformation for a structure.
    pub fn identity(structure: &ModeStructure) -> Self {
        let locals = structure
            .modes()
            .iter()
            .map(|&n_m| {
                Array2::from_shape_fn((n_m, n_m), |(a, b)| {
                    Complex64::new(f64::from(a == b), 0.0)
                })
            })
            .collect();
        Self {
            locals,
            diag_phases: vec![0.0; structure.dim()],
        }
    }

    /// A random transformation: Haar-distributed locals, uniform phases.
    pub fn random<R: Rng>(structure: &ModeStructure, rng: &mut R) -> Self {
        let locals = structure
            .modes()
            .iter()
            .map(|&n_m| haar_unitary(n_m, rng))
            .collect();
        let diag_phases = (0..structure.dim()).map(|_| rng.gen::<f64>() * TAU).collect();
        Self {
            locals,
            diag_phases,
        }
    }

    /// The per-mode unitaries.
    pub fn locals(&self) -> &[Array2<Complex64>] {
        &self.locals
    }

    /// The diagonal phases, level order.
    pub fn diag_phases(&self) -> &[f64] {
        &self.diag_phases
    }
}

/// Applies the transformation: phases first, then each local unitary on its
/// mode.
///
/// Ent is preserved *exactly* whenever the input's support is pairwise
/// TGX-compatible (its reductions are then diagonal, and diagonal phases
/// cannot move them) — the regime the transformation is designed for, where
/// it carries TGX states onto general states of equal ent.  On arbitrary
/// inputs only the local factor is guaranteed ent-preserving: the diagonal
/// gate is a controlled-phase-type operation and can entangle.
pub fn apply_epu(spec: &EpuSpec, psi: &StateVector) -> Result<StateVector> {
    let structure = psi.structure();
    if spec.locals.len() != structure.mode_count()
        || spec.diag_phases.len() != structure.dim()
    {
        return Err(EntKitError::InvalidArgument(format!(
            "transformation sized for another structure than {structure}"
        )));
    }
    let amplitudes = psi
        .amplitudes()
        .iter()
        .zip(&spec.diag_phases)
        .map(|(a, &eta)| a * Complex64::from_polar(1.0, eta))
        .collect();
    let mut out = StateVector::new(structure.clone(), amplitudes)?;
    for (m, u) in spec.locals.iter().enumerate() {
        out = out.apply_local(m + 1, u)?;
    }
    Ok(out)
}

/// Schmidt decomposition of a two-mode pure state: amplitude matrix
/// `A[j][k] = ψ[R(j,k)]` factored as `A = U·Σ·V†` with descending `Σ`.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    structure: ModeStructure,
    left: Array2<Complex64>,
    singular_values: Vec<f64>,
    right_dagger: Array2<Complex64>,
}

/// Tolerance for the separability/maximality classification flags.
pub const SCHMIDT_FLAG_EPS: f64 = 1e-9;

impl SchmidtForm {
    /// The two-mode structure.
    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// `U`: columns are the mode-1 Schmidt vectors (`n₁×s`).
    pub fn left(&self) -> &Array2<Complex64> {
        &self.left
    }

    /// The Schmidt coefficients, descending; `s = min(n₁, n₂)` of them.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// `V†`: rows are conjugated mode-2 Schmidt vectors (`s×n₂`).
    pub fn right_dagger(&self) -> &Array2<Complex64> {
        &self.right_dagger
    }

    /// Number of coefficients above `eps`.
    pub fn rank(&self, eps: f64) -> usize {
        self.singular_values.iter().filter(|&&x| x > eps).count()
    }

    /// Product state: the top coefficient exhausts the norm.
    pub fn is_separable(&self) -> bool {
        (self.singular_values[0] - 1.0).abs() <= SCHMIDT_FLAG_EPS
    }

    /// Maximally entangled: every coefficient equals `1/√s`.
    pub fn is_maximal(&self) -> bool {
        let target = 1.0 / (self.singular_values.len() as f64).sqrt();
        self.singular_values
            .iter()
            .all(|&x| (x - target).abs() <= SCHMIDT_FLAG_EPS)
    }
}

/// Computes the Schmidt decomposition; only two-mode structures qualify.
pub fn schmidt(psi: &StateVector) -> Result<SchmidtForm> {
    let structure = psi.structure();
    if structure.mode_count() != 2 {
        return Err(EntKitError::UnsupportedStructure(format!(
            "Schmidt decomposition needs exactly two modes, {structure} has {}",
            structure.mode_count()
        )));
    }
    let (n1, n2) = (structure.modes()[0], structure.modes()[1]);
    let a = Array2::from_shape_fn((n1, n2), |(j, k)| {
        let v = structure
            .indical_register(&[j + 1, k + 1])
            .expect("indices in range");
        psi.amplitude(v)
    });
    let (left, singular_values, right_dagger) = svd(&a);
    Ok(SchmidtForm {
        structure: structure.clone(),
        left,
        singular_values,
        right_dagger,
    })
}

/// Rebuilds the two-mode state `ψ[R(j,k)] = Σ_s U[j,s]·σ_s·V†[s,k]` from
/// Schmidt factors; the coefficients must carry unit norm.
pub fn reverse_schmidt(
    structure: &ModeStructure,
    left: &Array2<Complex64>,
    singular_values: &[f64],
    right_dagger: &Array2<Complex64>,
) -> Result<StateVector> {
    if structure.mode_count() != 2 {
        return Err(EntKitError::UnsupportedStructure(format!(
            "Schmidt reconstruction needs exactly two modes, {structure} has {}",
            structure.mode_count()
        )));
    }
    let (n1, n2) = (structure.modes()[0], structure.modes()[1]);
    let s = singular_values.len();
    if left.nrows() != n1 || left.ncols() != s || right_dagger.nrows() != s
        || right_dagger.ncols() != n2
    {
        return Err(EntKitError::InvalidArgument(format!(
            "factor shapes {}×{}, {s}, {}×{} do not fit {structure}",
            left.nrows(),
            left.ncols(),
            right_dagger.nrows(),
            right_dagger.ncols()
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); structure.dim()];
    for j in 0..n1 {
        for k in 0..n2 {
            let v = structure.indical_register(&[j + 1, k + 1])?;
            amplitudes[v - 1] = (0..s)
                .map(|q| left[[j, q]] * singular_values[q] * right_dagger[[q, k]])
                .sum();
        }
    }
    StateVector::new(structure.clone(), amplitudes)
}

/// The ent of the transition boundary of the canonical 2×2×3 family, where
/// the inverse switches branches: `352/423`.
pub const ENT_BRANCH_POINT_223: f64 = 352.0 / 423.0;

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(EntKitError::InvalidArgument(format!(
            "{name} {x} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Closed-form ent along the canonical 2×2×3 family on levels {1,5,8,12}:
/// with `u = sin²θ`, returns `(16/423)(75u − 53u²)` for `θ ∈ [0, π/2]`.
///
/// The value exceeds `1` for `u ∈ (141/212, 3/4)`, peaking at `2500/2491`:
/// the raw measure overshoots on this unbalanced stretch exactly as
/// [`crate::measure::EntReport::ent`] does.
pub fn ent_formula_223(theta: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&theta) {
        return Err(EntKitError::InvalidArgument(format!(
            "theta {theta} outside [0, π/2]"
        )));
    }
    let u = theta.sin().powi(2);
    Ok((16.0 / 423.0) * (75.0 * u - 53.0 * u * u))
}

/// Inverse of [`ent_formula_223`]: the angle whose family state has the
/// requested ent.
///
/// Below [`ENT_BRANCH_POINT_223`] the lower branch is used
/// (`u = 75/106 − √(…)`, angles below the peak); from the branch point up,
/// the upper branch (`u = 75/106 + √(…)`) lands in `θ ∈ [π/3, π/2]`.
pub fn theta_of_ent_223(target: f64) -> Result<f64> {
    check_unit_interval("ent", target)?;
    let upper = target >= ENT_BRANCH_POINT_223;
    theta_of_ent_223_branch(target, upper)
}

/// Branch-explicit inverse of [`ent_formula_223`]: `upper = false` takes
/// `u = 75/106 − √(…)`, `upper = true` takes `u = 75/106 + √(…)`.
pub fn theta_of_ent_223_branch(target: f64, upper: bool) -> Result<f64> {
    check_unit_interval("ent", target)?;
    let center = 75.0 / 106.0;
    let discriminant = (center * center - (423.0 / 848.0) * target).max(0.0);
    let u = if upper {
        center + discriminant.sqrt()
    } else {
        center - discriminant.sqrt()
    };
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&u) {
        return Err(EntKitError::InvalidArgument(format!(
            "ent {target} has no angle on the requested branch"
        )));
    }
    Ok(u.clamp(0.0, 1.0).sqrt().asin())
}

/// The two-qubit state of prescribed ent on levels {1,4}:
/// amplitudes `√((1 ± √(1−Υ))/2)`.
pub fn phi_g_2x2(target: f64) -> Result<StateVector> {
    check_unit_interval("ent", target)?;
    let root = (1.0 - target).max(0.0).sqrt();
    let structure = ModeStructure::new(&[2, 2])?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 4];
    amplitudes[0] = Complex64::new(((1.0 + root) / 2.0).sqrt(), 0.0);
    amplitudes[3] = Complex64::new(((1.0 - root) / 2.0).sqrt(), 0.0);
    StateVector::new(structure, amplitudes)
}

/// A global unitary carrying `core` to `target`, built by completing each
/// state to an orthonormal frame: `V = F(target)·F(core)†`.
///
/// Both states must live on the same structure and carry the same ent
/// within `1e−6`, keeping the map on one entanglement shell.
pub fn v_epu(target: &StateVector, core: &StateVector) -> Result<Array2<Complex64>> {
    if target.structure() != core.structure() {
        return Err(EntKitError::InvalidArgument(format!(
            "structures differ: {} vs {}",
            target.structure(),
            core.structure()
        )));
    }
    let ent_target = ent(target)?.ent();
    let ent_core = ent(core)?.ent();
    if (ent_target - ent_core).abs() > 1e-6 {
        return Err(EntKitError::Validation(format!(
            "ent mismatch: target {ent_target} vs core {ent_core}"
        )));
    }
    let n = target.structure().dim();
    let f_target = complete_frame(target.amplitudes(), 1e-8)?;
    let f_core = complete_frame(core.amplitudes(), 1e-8)?;
    let mut v = Array2::<Complex64>::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            v[[a, b]] = (0..n).map(|k| f_target[[a, k]] * f_core[[b, k]].conj()).sum();
        }
    }
    Ok(v)
}
