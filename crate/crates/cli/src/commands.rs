//! Subcommand implementations.

use std::path::{Path, PathBuf};

use filippov_core::equilibria::{catalog, tangent_points, EquilibriumRecord};
use filippov_core::integrator::simulate;
use filippov_core::scan::{
    compute_basins, existence_boundary_p, locate_boundary_bifurcations, scan_m_sweep, scan_sp_plane,
};
use filippov_core::sliding::{pseudo_equilibrium, sliding_bounds, sliding_flow_derivative};
use filippov_core::{ModelParams, PsiMode, State};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::figures::{basin_heatmap, phase_portrait, region_heatmap};
use crate::svg::{emit_svg, Marker, MarkerStyle, Series, SvgPlotSpec};
use crate::table::{emit_csv, emit_grid, fmt_num, Table};
use crate::Command;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> CliResult<()> {
    match cmd {
        Command::Equilibria => equilibria(cfg),
        Command::Sliding { s_range, samples } => sliding(cfg, *s_range, *samples),
        Command::Simulate { x0, y0, sim } => simulate_cmd(cfg, *x0, *y0, &sim.options()),
        Command::ScanSp {
            s_range,
            p_range,
            resolution,
        } => scan_sp(cfg, *s_range, *p_range, *resolution),
        Command::SweepM {
            m_values,
            s_range,
            p_range,
            resolution,
        } => sweep_m(cfg, m_values, *s_range, *p_range, *resolution),
        Command::Basins {
            x_range,
            y_range,
            resolution,
            sim,
        } => basins(cfg, *x_range, *y_range, *resolution, &sim.options()),
        Command::Bifurcations { s_range } => bifurcations(cfg, *s_range),
    }
}

fn svg_path(cfg: &RunConfig) -> Option<PathBuf> {
    cfg.svg.then(|| {
        cfg.out
            .as_ref()
            .expect("validated with --svg")
            .with_extension("svg")
    })
}

fn eig_fields(eig: Option<[Complex64; 2]>) -> Vec<String> {
    match eig {
        Some([a, b]) => [a.re, a.im, b.re, b.im].map(fmt_num).to_vec(),
        None => vec![String::new(); 4],
    }
}

pub const EQUILIBRIA_COLUMNS: [&str; 10] = [
    "mode",
    "x",
    "y",
    "kind",
    "placement",
    "stability",
    "eig1_re",
    "eig1_im",
    "eig2_re",
    "eig2_im",
];

fn equilibrium_row(r: &EquilibriumRecord) -> Vec<String> {
    let mut row = vec![
        r.mode.as_str().to_string(),
        fmt_num(r.location.x),
        fmt_num(r.location.y),
        r.kind.as_str().to_string(),
        r.placement.as_str().to_string(),
        r.stability.as_str().to_string(),
    ];
    row.extend(eig_fields(r.eigenvalues));
    row
}

pub fn equilibria_table(params: &ModelParams) -> Table {
    let cat = catalog(params);
    let mut t = Table::new(&EQUILIBRIA_COLUMNS);
    for r in cat
        .axial
        .iter()
        .chain(&cat.interior)
        .chain(cat.pseudo.iter())
        .chain(&cat.boundary)
    {
        t.push(equilibrium_row(r));
    }
    t
}

fn equilibria(cfg: &RunConfig) -> CliResult<()> {
    emit_csv(&equilibria_table(&cfg.params), cfg.out.as_deref())?;
    if let Some(path) = svg_path(cfg) {
        emit_svg(&phase_portrait(&cfg.params, "Equilibria", &[]), &path)?;
    }
    Ok(())
}

pub const SLIDING_COLUMNS: [&str; 9] = [
    "S",
    "y_lower",
    "y_upper",
    "y_pseudo",
    "exists",
    "phi_prime",
    "stability",
    "tangent1",
    "tangent2",
];

pub fn sliding_table(params: &ModelParams, s_values: &[f64]) -> CliResult<Table> {
    let mut t = Table::new(&SLIDING_COLUMNS);
    for &s in s_values {
        let p = params.with_threshold(s)?;
        let b = sliding_bounds(&p);
        let (y_pseudo, exists, slope, stability) = match pseudo_equilibrium(&p) {
            Ok(pe) => {
                let slope = sliding_flow_derivative(pe.candidate_y, &p);
                let stab = pe.record.map(|r| r.stability.as_str()).unwrap_or("");
                (fmt_num(pe.candidate_y), pe.exists(), fmt_num(slope), stab)
            }
            Err(_) => (String::new(), false, String::new(), ""),
        };
        let tangents = tangent_points(&p);
        let vis = |mode: PsiMode| {
            tangents
                .iter()
                .find(|tp| tp.field == mode)
                .map(|tp| tp.visibility.as_str())
                .unwrap_or("")
                .to_string()
        };
        t.push(vec![
            fmt_num(s),
            fmt_num(b.lower),
            fmt_num(b.upper),
            y_pseudo,
            exists.to_string(),
            slope,
            stability.to_string(),
            vis(PsiMode::NonHarvest),
            vis(PsiMode::Harvest),
        ]);
    }
    Ok(t)
}

fn sliding(cfg: &RunConfig, s_range: Option<(f64, f64)>, samples: usize) -> CliResult<()> {
    let s_values: Vec<f64> = match s_range {
        None => vec![cfg.params.threshold()],
        Some((a, b)) => {
            if samples < 2 {
                return Err(CliError::Config(
                    "--samples must be at least 2 with --s-range".into(),
                ));
            }
            (0..samples)
                .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
                .collect()
        }
    };
    let table = sliding_table(&cfg.params, &s_values)?;
    emit_csv(&table, cfg.out.as_deref())?;
    if let Some(path) = svg_path(cfg) {
        let spec = if s_values.len() > 1 {
            bounds_figure(&cfg.params, &s_values)?
        } else {
            phase_portrait(&cfg.params, "Sliding segment", &[])
        };
        emit_svg(&spec, &path)?;
    }
    Ok(())
}

fn bounds_figure(params: &ModelParams, s_values: &[f64]) -> CliResult<SvgPlotSpec> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut pseudo = Vec::new();
    for &s in s_values {
        let p = params.with_threshold(s)?;
        let b = sliding_bounds(&p);
        lower.push((s, b.lower));
        upper.push((s, b.upper));
        if let Ok(pe) = pseudo_equilibrium(&p) {
            if pe.exists() {
                pseudo.push(Marker {
                    at: (s, pe.candidate_y),
                    style: MarkerStyle::Pseudo,
                });
            }
        }
    }
    let ys = lower.iter().chain(&upper).map(|p| p.1);
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| {
        (a.min(y), b.max(y))
    });
    let pad = 0.05 * (hi - lo).max(1e-9);
    let (s0, s1) = (s_values[0], s_values[s_values.len() - 1]);
    let mut spec = SvgPlotSpec::new(
        "Sliding segment bounds",
        "S",
        "y",
        (s0, s1),
        (lo.min(0.0) - pad, hi + pad),
    );
    for (points, label, color) in [(lower, "y_lower", "#2c7bb6"), (upper, "y_upper", "#d7191c")] {
        spec.series.push(Series {
            points,
            color: color.into(),
            width: 1.5,
            dashed: false,
            label: Some(label.into()),
        });
    }
    spec.markers = pseudo;
    Ok(spec)
}

pub fn trajectory_table(traj: &filippov_core::Trajectory) -> Table {
    let mut t = Table::new(&["t", "x", "y", "regime"]);
    for (time, z, regime) in traj.samples() {
        t.push(vec![
            fmt_num(time),
            fmt_num(z.x),
            fmt_num(z.y),
            regime.as_str().to_string(),
        ]);
    }
    t
}

fn simulate_cmd(
    cfg: &RunConfig,
    x0: Option<f64>,
    y0: Option<f64>,
    opts: &filippov_core::SimOptions,
) -> CliResult<()> {
    let start = match (x0, y0, cfg.seed) {
        (Some(x), Some(y), _) => State::new(x, y)?,
        (None, None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            State {
                x: rng.gen_range(0.0..cfg.params.k1()),
                y: rng.gen_range(0.0..cfg.params.k2()),
            }
        }
        _ => {
            return Err(CliError::Config(
                "simulate needs --x0 and --y0, or --seed for a random start".into(),
            ))
        }
    };
    let traj = simulate(start, &cfg.params, opts)?;
    emit_csv(&trajectory_table(&traj), cfg.out.as_deref())?;
    let end = traj.final_state();
    match &traj.attractor {
        Some(a) => eprintln!(
            "start ({}, {}) reached {} {} at ({}, {}) by t = {}",
            fmt_num(start.x),
            fmt_num(start.y),
            a.mode.as_str(),
            a.kind.as_str(),
            fmt_num(a.location.x),
            fmt_num(a.location.y),
            fmt_num(traj.final_time())
        ),
        None => eprintln!(
            "start ({}, {}) ended at ({}, {}) at t = {} without reaching an attractor",
            fmt_num(start.x),
            fmt_num(start.y),
            fmt_num(end.x),
            fmt_num(end.y),
            fmt_num(traj.final_time())
        ),
    }
    if let Some(path) = svg_path(cfg) {
        emit_svg(
            &phase_portrait(&cfg.params, "Phase portrait", &[&traj]),
            &path,
        )?;
    }
    Ok(())
}

fn default_s_range(params: &ModelParams) -> (f64, f64) {
    (0.01 * params.k1(), 0.99 * params.k1())
}

fn default_p_range(params: &ModelParams) -> (f64, f64) {
    let top = PsiMode::ALL
        .iter()
        .filter_map(|&m| existence_boundary_p(params, m).ok())
        .fold(params.p(), f64::max);
    (0.01 * top, 1.25 * top)
}

fn scan_sp(
    cfg: &RunConfig,
    s_range: Option<(f64, f64)>,
    p_range: Option<(f64, f64)>,
    resolution: (usize, usize),
) -> CliResult<()> {
    let s_range = s_range.unwrap_or_else(|| default_s_range(&cfg.params));
    let p_range = p_range.unwrap_or_else(|| default_p_range(&cfg.params));
    let grid = scan_sp_plane(&cfg.params, s_range, p_range, resolution)?;
    emit_grid(&grid, cfg.out.as_deref())?;
    if let Some(path) = svg_path(cfg) {
        emit_svg(
            &region_heatmap(&grid, "Equilibrium regions in the (S, p) plane"),
            &path,
        )?;
    }
    Ok(())
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}{ext}"))
}

fn sweep_m(
    cfg: &RunConfig,
    m_values: &[f64],
    s_range: Option<(f64, f64)>,
    p_range: Option<(f64, f64)>,
    resolution: (usize, usize),
) -> CliResult<()> {
    let s_range = s_range.unwrap_or_else(|| default_s_range(&cfg.params));
    let p_range = match p_range {
        Some(r) => r,
        None => {
            let mut hi: f64 = 0.0;
            for &m in m_values {
                hi = hi.max(default_p_range(&cfg.params.with("m", m)?).1);
            }
            (0.01 * hi / 1.25, hi)
        }
    };
    let sweep = scan_m_sweep(&cfg.params, m_values, s_range, p_range, resolution)?;
    let mut t = Table::new(&[
        "m",
        "p_boundary_non_harvest",
        "p_boundary_harvest",
        "both_exist_fraction",
    ]);
    for entry in &sweep {
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        t.push(vec![
            fmt_num(entry.m),
            opt(entry.existence_p[0]),
            opt(entry.existence_p[1]),
            fmt_num(entry.both_exist_fraction),
        ]);
        if let Some(out) = &cfg.out {
            let grid_path = suffixed(out, &format!("m{}", fmt_num(entry.m)));
            emit_grid(&entry.grid, Some(&grid_path))?;
            if cfg.svg {
                let title = format!("Equilibrium regions, m = {}", fmt_num(entry.m));
                emit_svg(
                    &region_heatmap(&entry.grid, &title),
                    &grid_path.with_extension("svg"),
                )?;
            }
        }
    }
    emit_csv(&t, cfg.out.as_deref())
}

fn basins(
    cfg: &RunConfig,
    x_range: Option<(f64, f64)>,
    y_range: Option<(f64, f64)>,
    resolution: (usize, usize),
    opts: &filippov_core::SimOptions,
) -> CliResult<()> {
    let p = &cfg.params;
    let x_range = x_range.unwrap_or((0.0, p.k1()));
    let y_range = y_range.unwrap_or((0.0, 1.2 * p.k2()));
    let grid = compute_basins(p, x_range, y_range, resolution, opts)?;
    for note in &grid.provenance.notes {
        eprintln!("warning: {note}");
    }
    emit_grid(&grid, cfg.out.as_deref())?;
    if let Some(path) = svg_path(cfg) {
        emit_svg(&basin_heatmap(&grid, "Basins of attraction"), &path)?;
    }
    Ok(())
}

pub const BIFURCATION_COLUMNS: [&str; 9] = [
    "S", "mode", "x", "y", "observed", "eig1_re", "eig1_im", "eig2_re", "eig2_im",
];

fn bifurcations(cfg: &RunConfig, s_range: Option<(f64, f64)>) -> CliResult<()> {
    let s_range = s_range.unwrap_or_else(|| default_s_range(&cfg.params));
    let events = locate_boundary_bifurcations(&cfg.params, s_range)?;
    let mut t = Table::new(&BIFURCATION_COLUMNS);
    for ev in &events {
        let mut row = vec![
            fmt_num(ev.threshold),
            ev.mode.as_str().to_string(),
            fmt_num(ev.location.x),
            fmt_num(ev.location.y),
            ev.observed.as_str().to_string(),
        ];
        row.extend(eig_fields(Some(ev.eigenvalues)));
        t.push(row);
    }
    emit_csv(&t, cfg.out.as_deref())?;
    if let Some(path) = svg_path(cfg) {
        let mut spec = SvgPlotSpec::new(
            "Boundary collisions x* = S",
            "S",
            "prey x",
            s_range,
            s_range,
        );
        spec.series.push(Series {
            points: vec![(s_range.0, s_range.0), (s_range.1, s_range.1)],
            color: "#888".into(),
            width: 1.0,
            dashed: true,
            label: Some("x = S".into()),
        });
        for ev in &events {
            spec.markers.push(Marker {
                at: (ev.threshold, ev.location.x),
                style: MarkerStyle::Tangent,
            });
        }
        for (mode, color) in [
            (PsiMode::NonHarvest, "#2c7bb6"),
            (PsiMode::Harvest, "#fdae61"),
        ] {
            for rec in catalog(&cfg.params).interior_of(mode) {
                spec.series.push(Series {
                    points: vec![(s_range.0, rec.location.x), (s_range.1, rec.location.x)],
                    color: color.into(),
                    width: 1.5,
                    dashed: false,
                    label: Some(format!("x* ({})", mode.as_str())),
                });
            }
        }
        emit_svg(&spec, &path)?;
    }
    Ok(())
}
