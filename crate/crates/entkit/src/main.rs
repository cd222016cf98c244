//! Thin command-line front end: every subcommand maps directly onto library
//! calls and renders the result as a versioned JSON report or as CSV.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use entkit::artifacts::{canonical_level_set, canonical_state_rows, full_catalog_rows, level_count_rows};
use entkit::io::{
    csv_table, emit, load_state, pure_state_json, LoadedState, Report,
};
use entkit::measure::{
    ent, ent_two_mode_squeezed, logneg_gauge, lstar_set, normalization_residual,
    normalization_residual_rational, squeezed_purity_truncated, EntContext,
};
use entkit::meb::{generating_sets, generating_sets_mixed, meb_expand};
use entkit::modes::standard_structures;
use entkit::multi::{abs_ent, ent_array_with_grid, ent_vector_with_grid, gm_concurrence_pure, gm_k_ent, net_ent, EntCell};
use entkit::param::ThetaFamily;
use entkit::roof::{ent_roof, gm_roof, RoofRank2};
use entkit::state::{random_pure_state, DensityMatrix, StateVector};
use entkit::tgx::a13_trace;
use entkit::{EntKitError, ModeStructure, Result, PURE_REDUCTION_EPS};

#[derive(Parser)]
#[command(
    name = "entkit",
    version,
    about = "Multipartite entanglement toolkit: the ent measure, maximally \
             entangled TGX states and bases, parameterized families, and \
             convex-roof extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (each subcommand has a sensible default)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Shorthand for --format json
    #[arg(long, global = true, conflicts_with_all = ["format", "csv"])]
    json: bool,

    /// Shorthand for --format csv
    #[arg(long, global = true, conflicts_with = "format")]
    csv: bool,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for randomized content; fixed seeds give identical output
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoofMeasure {
    /// Plain ent of each decomposition member
    Ent,
    /// Genuinely multipartite ent of each member
    Gm,
}

#[derive(Subcommand)]
enum Command {
    /// Measure the ent of a state file (pure, or a pure-projection density)
    Compute {
        /// State file (JSON)
        #[arg(long)]
        state: PathBuf,
    },
    /// The level counts L* of a structure and the full residual table
    Lstar {
        /// Mode sizes, e.g. 2,2,3
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
    },
    /// Thirteen-step search for maximally entangled TGX level sets
    A13 {
        /// Mode sizes, e.g. 2,2,3
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
        /// Starting level
        #[arg(long, default_value_t = 1)]
        start: usize,
        /// Superposition size (default: smallest member of the L* set)
        #[arg(long)]
        lstar: Option<usize>,
        /// Include every intermediate of the search
        #[arg(long)]
        trace: bool,
    },
    /// Regenerate a reference table (2: L* sets, 3: canonical level sets,
    /// 4: full catalogs for structures with n ≤ 12)
    Tables {
        /// Which table
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        which: u8,
        /// Largest total dimension to include
        #[arg(long, default_value_t = 28)]
        max_dim: usize,
    },
    /// Maximally entangled bases from exact-cover generating sets
    Meb {
        /// Mode sizes, e.g. 3,3
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
        /// Select a single generating set by index (0-based)
        #[arg(long)]
        index: Option<usize>,
        /// Also allow covers mixing different set sizes
        #[arg(long)]
        mixed: bool,
        /// Include the expanded basis states (forces JSON output)
        #[arg(long)]
        expand: bool,
    },
    /// Ent along the one-parameter family from a basis state to balance
    #[command(name = "theta-sweep")]
    ThetaSweep {
        /// Mode sizes, e.g. 2,2,3
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
        /// Number of sample points
        #[arg(long, default_value_t = 300)]
        points: usize,
        /// Levels of the superposition (default: the canonical set)
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
    },
    /// Two-mode squeezed vacuum: closed-form purity, ent, and the
    /// log-negativity gauge
    Squeezed {
        /// Largest squeezing parameter
        #[arg(long, default_value_t = 4.0)]
        rmax: f64,
        /// Number of sample points
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Also invert: report r* and the log-negativity at this ent
        #[arg(long)]
        target: Option<f64>,
        /// Cross-check the closed form against a truncated expansion with
        /// this many levels per mode
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Ent vector and ent array of a state file
    Entarray {
        /// State file (JSON, pure)
        #[arg(long)]
        state: PathBuf,
        /// Formation-search grid (θ,χ points)
        #[arg(long, value_delimiter = ',', default_value = "30,30")]
        grid: Vec<usize>,
        /// Also report ensemble-normalized net ent
        #[arg(long)]
        net: bool,
        /// Also report ensemble-normalized absolute ent
        #[arg(long)]
        abs: bool,
    },
    /// Genuinely multipartite ent: the minimum over full k-partitions
    Gm {
        /// State file (JSON, pure)
        #[arg(long)]
        state: PathBuf,
        /// Number of partition blocks
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Rank-2 convex-roof surface of a mixed state
    Roof {
        /// State file (JSON; a pure file is treated as its projector)
        #[arg(long)]
        state: PathBuf,
        /// Member measure to average
        #[arg(long, value_enum, default_value = "ent")]
        measure: RoofMeasure,
        /// Search grid (θ,χ points)
        #[arg(long, value_delimiter = ',', default_value = "30,30")]
        grid: Vec<usize>,
    },
    /// Randomized normalization check: ent of Haar states stays in [0, 1]
    Fuzz {
        /// States per structure
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Largest total dimension to include
        #[arg(long, default_value_t = 18)]
        max_dim: usize,
    },
    /// Reference figure data (2: squeezed sweep, 5: per-structure θ sweeps,
    /// 6: a seeded convex-roof surface)
    Figdata {
        /// Which figure
        #[arg(value_parser = ["2", "5", "6"])]
        figure: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let chosen = cli.format.or(if cli.json {
        Some(Format::Json)
    } else if cli.csv {
        Some(Format::Csv)
    } else {
        None
    });
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Compute { state } => cmd_compute(state, chosen.unwrap_or(Format::Json), out),
        Command::Lstar { modes } => cmd_lstar(modes, chosen.unwrap_or(Format::Json), out),
        Command::A13 {
            modes,
            start,
            lstar,
            trace,
        } => cmd_a13(modes, *start, *lstar, *trace, chosen.unwrap_or(Format::Json), out),
        Command::Tables { which, max_dim } => {
            cmd_tables(*which, *max_dim, chosen.unwrap_or(Format::Csv), out)
        }
        Command::Meb {
            modes,
            index,
            mixed,
            expand,
        } => cmd_meb(modes, *index, *mixed, *expand, chosen.unwrap_or(Format::Json), out),
        Command::ThetaSweep {
            modes,
            points,
            levels,
        } => cmd_theta_sweep(modes, *points, levels.as_deref(), chosen.unwrap_or(Format::Csv), out),
        Command::Squeezed {
            rmax,
            points,
            target,
            cutoff,
        } => cmd_squeezed(*rmax, *points, *target, *cutoff, chosen.unwrap_or(Format::Csv), out),
        Command::Entarray {
            state,
            grid,
            net,
            abs,
        } => cmd_entarray(state, grid, *net, *abs, chosen.unwrap_or(Format::Json), out),
        Command::Gm { state, k } => cmd_gm(state, *k, chosen.unwrap_or(Format::Json), out),
        Command::Roof {
            state,
            measure,
            grid,
        } => cmd_roof(state, *measure, grid, chosen.unwrap_or(Format::Csv), out),
        Command::Fuzz { count, max_dim } => {
            cmd_fuzz(*count, *max_dim, cli.seed, chosen.unwrap_or(Format::Json), out)
        }
        Command::Figdata { figure } => {
            cmd_figdata(figure, cli.seed, chosen.unwrap_or(Format::Csv), out)
        }
    }
}

fn structure_from(modes: &[usize]) -> Result<ModeStructure> {
    ModeStructure::new(modes)
}

fn grid_from(grid: &[usize]) -> Result<(usize, usize)> {
    match grid {
        &[t, c] => Ok((t, c)),
        other => Err(EntKitError::InvalidArgument(format!(
            "--grid expects two comma-separated counts, got {other:?}"
        ))),
    }
}

fn levels_cell(levels: &[usize]) -> String {
    levels
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn emit_report(report: &Report, out: Option<&Path>) -> Result<()> {
    emit(&report.to_json_string()?, out)
}

fn pure_from(loaded: LoadedState) -> Result<StateVector> {
    match loaded {
        LoadedState::Pure(psi) => Ok(psi),
        LoadedState::Density(rho) => {
            if rho.purity() >= 1.0 - PURE_REDUCTION_EPS {
                rho.pure_projection(PURE_REDUCTION_EPS)
            } else {
                Err(EntKitError::Validation(format!(
                    "state file holds a mixed matrix (purity {:.6}); use the \
                     roof subcommand for mixed states",
                    rho.purity()
                )))
            }
        }
    }
}

fn density_from(loaded: LoadedState) -> DensityMatrix {
    match loaded {
        LoadedState::Pure(psi) => DensityMatrix::from_pure(&psi),
        LoadedState::Density(rho) => rho,
    }
}

fn cmd_compute(state: &Path, format: Format, out: Option<&Path>) -> Result<()> {
    let psi = pure_from(load_state(state)?)?;
    let report = ent(&psi)?;
    let context = report.context();
    match format {
        Format::Json => {
            let data = json!({
                "modes": psi.structure().modes(),
                "ent": report.ent(),
                "ent_clamped": report.ent_clamped(),
                "lstar_set": context.lstar_set(),
                "lstar": context.lstar(),
                "normalization": context.m(),
                "reduction_purities": report.reduction_purities(),
                "unitized_purities": report.unitized_purities(),
            });
            emit_report(&Report::new("compute", data), out)
        }
        Format::Csv => {
            let mut rows = vec![
                vec!["ent".into(), format!("{:.15e}", report.ent())],
                vec!["lstar".into(), context.lstar().to_string()],
                vec!["normalization".into(), format!("{:.15e}", context.m())],
            ];
            for (m, p) in report.reduction_purities().iter().enumerate() {
                rows.push(vec![format!("purity_mode_{}", m + 1), format!("{p:.15e}")]);
            }
            emit(&csv_table(&["quantity", "value"], &rows), out)
        }
    }
}

fn cmd_lstar(modes: &[usize], format: Format, out: Option<&Path>) -> Result<()> {
    let s = structure_from(modes)?;
    let set = lstar_set(&s)?;
    let nbar_max = s.nbar_max();
    let residuals: Vec<(usize, String, f64)> = (2..=nbar_max)
        .map(|l| {
            (
                l,
                normalization_residual_rational(l, &s).to_string(),
                normalization_residual(l, &s),
            )
        })
        .collect();
    match format {
        Format::Json => {
            let data = json!({
                "modes": s.modes(),
                "lstar_set": set,
                "lstar": set[0],
                "residuals": residuals
                    .iter()
                    .map(|(l, exact, float)| json!({
                        "l": l,
                        "residual_exact": exact,
                        "residual_float": float,
                        "in_lstar_set": set.contains(l),
                    }))
                    .collect::<Vec<_>>(),
            });
            emit_report(&Report::new("lstar", data), out)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = residuals
                .iter()
                .map(|(l, exact, float)| {
                    vec![
                        l.to_string(),
                        exact.clone(),
                        format!("{float:.15e}"),
                        set.contains(l).to_string(),
                    ]
                })
                .collect();
            emit(
                &csv_table(&["l", "residual_exact", "residual_float", "in_lstar_set"], &rows),
                out,
            )
        }
    }
}

fn cmd_a13(
    modes: &[usize],
    start: usize,
    lstar: Option<usize>,
    trace: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let s = structure_from(modes)?;
    let lstar = match lstar {
        Some(l) => l,
        None => lstar_set(&s)?[0],
    };
    let result = a13_trace(&s, start, lstar)?;
    match format {
        Format::Json => {
            let mut data = json!({
                "modes": s.modes(),
                "start": start,
                "lstar": lstar,
                "matched_sets": result.matched_sets,
                "count": result.matched_sets.len(),
            });
            if trace {
                data["forward_candidates"] = json!(result.forward_candidates);
                data["backward_candidates"] = json!(result.backward_candidates);
                data["candidate_levels"] = json!(result.candidate_levels);
                data["compatible_sets"] = json!(result.compatible_sets);
            }
            emit_report(&Report::new("a13", data), out)
        }
        Format::Csv => {
            let mut rows = Vec::new();
            if trace {
                for (i, set) in result.compatible_sets.iter().enumerate() {
                    rows.push(vec!["compatible".into(), i.to_string(), levels_cell(set)]);
                }
            }
            for (i, set) in result.matched_sets.iter().enumerate() {
                rows.push(vec!["matched".into(), i.to_string(), levels_cell(set)]);
            }
            emit(&csv_table(&["kind", "index", "levels"], &rows), out)
        }
    }
}

fn cmd_tables(
    which: u8,
    max_dim: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    match which {
        2 => {
            let rows = level_count_rows(max_dim)?;
            match format {
                Format::Csv => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|(s, set)| {
                            vec![s.to_string(), s.dim().to_string(), levels_cell(set)]
                        })
                        .collect();
                    emit(&csv_table(&["modes", "n", "lstar_set"], &body), out)
                }
                Format::Json => {
                    let data = json!({
                        "table": 2,
                        "rows": rows
                            .iter()
                            .map(|(s, set)| json!({
                                "modes": s.modes(),
                                "n": s.dim(),
                                "lstar_set": set,
                            }))
                            .collect::<Vec<_>>(),
                    });
                    emit_report(&Report::new("tables", data), out)
                }
            }
        }
        3 => {
            let rows = canonical_state_rows(max_dim)?;
            match format {
                Format::Csv => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|(s, levels)| {
                            vec![s.to_string(), s.dim().to_string(), levels_cell(levels)]
                        })
                        .collect();
                    emit(&csv_table(&["modes", "n", "levels"], &body), out)
                }
                Format::Json => {
                    let data = json!({
                        "table": 3,
                        "rows": rows
                            .iter()
                            .map(|(s, levels)| json!({
                                "modes": s.modes(),
                                "n": s.dim(),
                                "levels": levels,
                            }))
                            .collect::<Vec<_>>(),
                    });
                    emit_report(&Report::new("tables", data), out)
                }
            }
        }
        4 => {
            let rows = full_catalog_rows(max_dim.min(12))?;
            match format {
                Format::Csv => {
                    let mut body = Vec::new();
                    for (s, table) in &rows {
                        for (i, levels) in table.rows().iter().enumerate() {
                            body.push(vec![
                                s.to_string(),
                                i.to_string(),
                                levels_cell(levels),
                            ]);
                        }
                    }
                    emit(&csv_table(&["modes", "index", "levels"], &body), out)
                }
                Format::Json => {
                    let data = json!({
                        "table": 4,
                        "rows": rows
                            .iter()
                            .map(|(s, table)| json!({
                                "modes": s.modes(),
                                "count": table.len(),
                                "sets": table.rows(),
                            }))
                            .collect::<Vec<_>>(),
                    });
                    emit_report(&Report::new("tables", data), out)
                }
            }
        }
        other => Err(EntKitError::InvalidArgument(format!(
            "no table {other}; choose 2, 3, or 4"
        ))),
    }
}

fn cmd_meb(
    modes: &[usize],
    index: Option<usize>,
    mixed: bool,
    expand: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let s = structure_from(modes)?;
    let sets = if mixed {
        generating_sets_mixed(&s)?
    } else {
        generating_sets(&s)?
    };
    let selected: Vec<_> = match index {
        Some(i) => {
            let set = sets.get(i).ok_or_else(|| {
                EntKitError::IndexOutOfRange(format!(
                    "set index {i} out of range for {} generating sets",
                    sets.len()
                ))
            })?;
            vec![set.clone()]
        }
        None => sets.clone(),
    };
    if expand || format == Format::Json {
        let mut payload = Vec::new();
        for set in &selected {
            let mut entry = json!({
                "rows": set.rows(),
                "groups": set.group_count(),
            });
            if expand {
                let basis = meb_expand(set)?;
                entry["states"] = json!(basis
                    .states()
                    .iter()
                    .zip(basis.labels())
                    .map(|(state, (g, j))| {
                        let mut v = pure_state_json(state);
                        v["group"] = json!(g);
                        v["member"] = json!(j);
                        v
                    })
                    .collect::<Vec<_>>());
            }
            payload.push(entry);
        }
        let data = json!({
            "modes": s.modes(),
            "mixed": mixed,
            "set_count": sets.len(),
            "sets": payload,
        });
        emit_report(&Report::new("meb", data), out)
    } else {
        let mut rows = Vec::new();
        for (si, set) in selected.iter().enumerate() {
            let label = index.map_or(si, |i| i);
            for (gi, group) in set.rows().iter().enumerate() {
                rows.push(vec![
                    label.to_string(),
                    gi.to_string(),
                    levels_cell(group),
                ]);
            }
        }
        emit(&csv_table(&["set", "group", "levels"], &rows), out)
    }
}

/// Levels used, the theta where the family peaks, and `(theta, ent)` samples.
type ThetaCurve = (Vec<usize>, f64, Vec<(f64, f64)>);

fn theta_curve(
    s: &ModeStructure,
    levels: Option<&[usize]>,
    points: usize,
) -> Result<ThetaCurve> {
    if points < 2 {
        return Err(EntKitError::InvalidArgument(
            "--points must be at least 2".into(),
        ));
    }
    let levels = match levels {
        Some(given) => given.to_vec(),
        None => canonical_level_set(s)?,
    };
    let family = ThetaFamily::new(s.clone(), levels.clone())?;
    let theta_max = family.theta_max();
    let mut curve = Vec::with_capacity(points);
    for i in 0..points {
        let theta = theta_max * i as f64 / (points - 1) as f64;
        let psi = family.state(theta)?;
        curve.push((theta, ent(&psi)?.ent()));
    }
    Ok((levels, theta_max, curve))
}

fn cmd_theta_sweep(
    modes: &[usize],
    points: usize,
    levels: Option<&[usize]>,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let s = structure_from(modes)?;
    let (levels, theta_max, curve) = theta_curve(&s, levels, points)?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = curve
                .iter()
                .map(|(theta, value)| vec![format!("{theta:.15e}"), format!("{value:.15e}")])
                .collect();
            emit(&csv_table(&["theta", "ent"], &rows), out)
        }
        Format::Json => {
            let data = json!({
                "modes": s.modes(),
                "levels": levels,
                "theta_max": theta_max,
                "points": curve.iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
            });
            emit_report(&Report::new("theta-sweep", data), out)
        }
    }
}

fn cmd_squeezed(
    rmax: f64,
    points: usize,
    target: Option<f64>,
    cutoff: Option<usize>,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    if points < 2 {
        return Err(EntKitError::InvalidArgument(
            "--points must be at least 2".into(),
        ));
    }
    if rmax <= 0.0 {
        return Err(EntKitError::InvalidArgument("--rmax must be positive".into()));
    }
    let mut curve = Vec::with_capacity(points);
    for i in 0..points {
        let r = rmax * i as f64 / (points - 1) as f64;
        let upsilon = ent_two_mode_squeezed(r)?;
        let purity = 1.0 - upsilon;
        let truncated = cutoff.map(|k| squeezed_purity_truncated(r, k));
        curve.push((r, purity, upsilon, truncated));
    }
    match format {
        Format::Csv => {
            let mut header = vec!["r", "purity", "ent"];
            if cutoff.is_some() {
                header.push("purity_truncated");
            }
            let rows: Vec<Vec<String>> = curve
                .iter()
                .map(|(r, p, u, t)| {
                    let mut row = vec![
                        format!("{r:.15e}"),
                        format!("{p:.15e}"),
                        format!("{u:.15e}"),
                    ];
                    if let Some(t) = t {
                        row.push(format!("{t:.15e}"));
                    }
                    row
                })
                .collect();
            emit(&csv_table(&header, &rows), out)
        }
        Format::Json => {
            let mut data = json!({
                "rmax": rmax,
                "points": curve
                    .iter()
                    .map(|(r, p, u, t)| match t {
                        Some(t) => json!([r, p, u, t]),
                        None => json!([r, p, u]),
                    })
                    .collect::<Vec<_>>(),
            });
            if let Some(target) = target {
                let (r_star, log_negativity) = logneg_gauge(target)?;
                data["target"] = json!({
                    "ent": target,
                    "r_star": r_star,
                    "log_negativity": log_negativity,
                });
            }
            emit_report(&Report::new("squeezed", data), out)
        }
    }
}

fn cell_json(cell: &EntCell) -> serde_json::Value {
    match cell {
        EntCell::Direct(x) => json!({"status": "direct", "value": x}),
        EntCell::Formation(x) => json!({"status": "formation", "value": x}),
        EntCell::Unavailable { rank } => json!({"status": "unavailable", "rank": rank}),
    }
}

fn cell_csv(cell: &EntCell) -> (String, String) {
    match cell {
        EntCell::Direct(x) => ("direct".into(), format!("{x:.15e}")),
        EntCell::Formation(x) => ("formation".into(), format!("{x:.15e}")),
        EntCell::Unavailable { rank } => (format!("unavailable(rank {rank})"), String::new()),
    }
}

fn cmd_entarray(
    state: &Path,
    grid: &[usize],
    net: bool,
    abs: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let psi = pure_from(load_state(state)?)?;
    let grid = grid_from(grid)?;
    let vector = ent_vector_with_grid(&psi, grid)?;
    let array = ent_array_with_grid(&psi, grid)?;
    match format {
        Format::Json => {
            let vector_rows: Vec<_> = vector
                .rows()
                .iter()
                .flatten()
                .map(|(labels, cell)| {
                    let mut v = cell_json(cell);
                    v["modes"] = json!(labels);
                    v
                })
                .collect();
            let array_rows: Vec<_> = array
                .rows()
                .iter()
                .flatten()
                .map(|xi| {
                    json!({
                        "group": xi.group().labels(),
                        "cells": xi
                            .rows()
                            .iter()
                            .flatten()
                            .map(|(partition, cell)| {
                                let mut v = cell_json(cell);
                                v["partition"] = json!(partition.label());
                                v
                            })
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut data = json!({
                "modes": psi.structure().modes(),
                "vector": vector_rows,
                "vector_dim": vector.dim(),
                "array": array_rows,
                "array_dim": array.dim(),
            });
            if vector.all_available() {
                data["vector_one_norm"] = json!(vector.one_norm()?);
            }
            if array.all_available() {
                data["array_one_norm"] = json!(array.one_norm()?);
            }
            if net {
                let report = net_ent(&psi)?;
                data["net_ent"] = json!({
                    "value": report.value(),
                    "one_norm": report.one_norm(),
                    "normalizer": report.normalizer().normalizer(),
                    "ensemble": report.normalizer().ensemble(),
                    "evaluated": report.normalizer().evaluated(),
                    "skipped": report.normalizer().skipped(),
                });
            }
            if abs {
                let report = abs_ent(&psi)?;
                data["abs_ent"] = json!({
                    "value": report.value(),
                    "one_norm": report.one_norm(),
                    "normalizer": report.normalizer().normalizer(),
                    "ensemble": report.normalizer().ensemble(),
                    "evaluated": report.normalizer().evaluated(),
                    "skipped": report.normalizer().skipped(),
                });
            }
            emit_report(&Report::new("entarray", data), out)
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for (labels, cell) in vector.rows().iter().flatten() {
                let (status, value) = cell_csv(cell);
                rows.push(vec![
                    "vector".into(),
                    levels_cell(labels),
                    String::new(),
                    status,
                    value,
                ]);
            }
            for xi in array.rows().iter().flatten() {
                for (partition, cell) in xi.rows().iter().flatten() {
                    let (status, value) = cell_csv(cell);
                    rows.push(vec![
                        "array".into(),
                        levels_cell(xi.group().labels()),
                        partition.label(),
                        status,
                        value,
                    ]);
                }
            }
            emit(
                &csv_table(&["section", "group", "partition", "status", "value"], &rows),
                out,
            )
        }
    }
}

fn cmd_gm(state: &Path, k: usize, format: Format, out: Option<&Path>) -> Result<()> {
    let psi = pure_from(load_state(state)?)?;
    let report = gm_k_ent(&psi, k)?;
    let concurrence = gm_concurrence_pure(&psi)?;
    match format {
        Format::Json => {
            let data = json!({
                "modes": psi.structure().modes(),
                "k": k,
                "value": report.value(),
                "partition": report.partition().label(),
                "gm_concurrence": concurrence,
            });
            emit_report(&Report::new("gm", data), out)
        }
        Format::Csv => {
            let rows = vec![
                vec!["gm_ent".into(), format!("{:.15e}", report.value())],
                vec!["partition".into(), report.partition().label()],
                vec!["gm_concurrence".into(), format!("{concurrence:.15e}")],
            ];
            emit(&csv_table(&["quantity", "value"], &rows), out)
        }
    }
}

fn roof_rows(surface: &RoofRank2) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, &theta) in surface.thetas().iter().enumerate() {
        for (j, &chi) in surface.chis().iter().enumerate() {
            rows.push(vec![
                format!("{theta:.15e}"),
                format!("{chi:.15e}"),
                format!("{:.15e}", surface.surface()[[i, j]]),
                "grid".into(),
            ]);
        }
    }
    let (theta, chi) = surface.argmin();
    rows.push(vec![
        format!("{theta:.15e}"),
        format!("{chi:.15e}"),
        format!("{:.15e}", surface.minimum()),
        "minimum".into(),
    ]);
    rows
}

fn roof_report(surface: &RoofRank2, measure: &str, modes: &[usize]) -> serde_json::Value {
    let (theta, chi) = surface.argmin();
    let (gi, gj) = surface.grid_argmin();
    json!({
        "modes": modes,
        "measure": measure,
        "grid": [surface.thetas().len(), surface.chis().len()],
        "minimum": surface.minimum(),
        "argmin": {"theta": theta, "chi": chi},
        "grid_minimum": surface.grid_minimum(),
        "grid_argmin": [gi, gj],
        "surface": surface
            .surface()
            .rows()
            .into_iter()
            .map(|row| row.to_vec())
            .collect::<Vec<_>>(),
    })
}

fn cmd_roof(
    state: &Path,
    measure: RoofMeasure,
    grid: &[usize],
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let rho = density_from(load_state(state)?);
    let grid = grid_from(grid)?;
    let (surface, name) = match measure {
        RoofMeasure::Ent => (ent_roof(&rho, grid)?, "ent"),
        RoofMeasure::Gm => (gm_roof(&rho, grid)?, "gm"),
    };
    match format {
        Format::Csv => emit(
            &csv_table(&["theta", "chi", "average", "tag"], &roof_rows(&surface)),
            out,
        ),
        Format::Json => emit_report(
            &Report::new("roof", roof_report(&surface, name, rho.structure().modes())),
            out,
        ),
    }
}

fn cmd_fuzz(
    count: usize,
    max_dim: usize,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    use rayon::prelude::*;
    let structures = standard_structures(max_dim);
    let per_structure: Vec<_> = structures
        .par_iter()
        .map(|s| {
            let context = EntContext::cached(s)?;
            let mut max_ent = f64::NEG_INFINITY;
            let mut min_ent = f64::INFINITY;
            let mut histogram = [0usize; 10];
            let mut offenders = Vec::new();
            for i in 0..count {
                let state_seed = seed.wrapping_add(i as u64);
                let psi = random_pure_state(s, state_seed);
                let value =
                    entkit::measure::ent_with_context(&psi, context.clone())?.ent();
                max_ent = max_ent.max(value);
                min_ent = min_ent.min(value);
                let bin = ((value.clamp(0.0, 1.0)) * 10.0).min(9.999) as usize;
                histogram[bin.min(9)] += 1;
                if !(0.0..=1.0 + entkit::EPS_MATCH).contains(&value) {
                    offenders.push((state_seed, value, pure_state_json(&psi)));
                }
            }
            Ok((s.clone(), max_ent, min_ent, histogram, offenders))
        })
        .collect::<Result<_>>()?;
    let total_violations: usize = per_structure.iter().map(|r| r.4.len()).sum();
    match format {
        Format::Json => {
            let data = json!({
                "count_per_structure": count,
                "max_dim": max_dim,
                "structures": per_structure
                    .iter()
                    .map(|(s, max_ent, min_ent, histogram, offenders)| json!({
                        "modes": s.modes(),
                        "max_ent": max_ent,
                        "min_ent": min_ent,
                        "histogram": histogram.to_vec(),
                        "violations": offenders
                            .iter()
                            .map(|(seed, value, state)| json!({
                                "seed": seed,
                                "ent": value,
                                "state": state,
                            }))
                            .collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
                "total_violations": total_violations,
            });
            emit_report(&Report::new("fuzz", data).with_seed(seed), out)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = per_structure
                .iter()
                .map(|(s, max_ent, min_ent, _, offenders)| {
                    vec![
                        s.to_string(),
                        count.to_string(),
                        format!("{max_ent:.15e}"),
                        format!("{min_ent:.15e}"),
                        offenders.len().to_string(),
                    ]
                })
                .collect();
            emit(
                &csv_table(&["modes", "count", "max_ent", "min_ent", "violations"], &rows),
                out,
            )?;
        }
    }
    if total_violations > 0 {
        return Err(EntKitError::Validation(format!(
            "{total_violations} normalization violations (see report for seeds and states)"
        )));
    }
    Ok(())
}

fn cmd_figdata(
    figure: &str,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    match figure {
        "2" => cmd_squeezed(4.0, 201, None, None, format, out),
        "5" => {
            let structures = standard_structures(18);
            let mut rows = Vec::new();
            for s in &structures {
                let (_, _, curve) = theta_curve(s, None, 300)?;
                for (theta, value) in curve {
                    rows.push(vec![
                        s.to_string(),
                        format!("{theta:.15e}"),
                        format!("{value:.15e}"),
                    ]);
                }
            }
            match format {
                Format::Csv => emit(&csv_table(&["modes", "theta", "ent"], &rows), out),
                Format::Json => {
                    let data = json!({
                        "figure": 5,
                        "rows": rows
                            .iter()
                            .map(|r| json!({"modes": r[0], "theta": r[1], "ent": r[2]}))
                            .collect::<Vec<_>>(),
                    });
                    emit_report(&Report::new("figdata", data), out)
                }
            }
        }
        "6" => {
            // A seeded stand-in: the roof surface of an even rank-2 mixture
            // of two seeded random two-qubit states.
            let s = ModeStructure::new(&[2, 2])?;
            let a = random_pure_state(&s, seed);
            let b = random_pure_state(&s, seed.wrapping_add(1));
            let rho = DensityMatrix::mixture(&[(0.5, a), (0.5, b)])?;
            let surface = ent_roof(&rho, (30, 30))?;
            match format {
                Format::Csv => emit(
                    &csv_table(&["theta", "chi", "average", "tag"], &roof_rows(&surface)),
                    out,
                ),
                Format::Json => emit_report(
                    &Report::new("figdata", roof_report(&surface, "ent", s.modes()))
                        .with_seed(seed),
                    out,
                ),
            }
        }
        other => Err(EntKitError::InvalidArgument(format!(
            "no figure {other}; choose 2, 5, or 6"
        ))),
    }
}
