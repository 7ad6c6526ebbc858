//! Figure specs built from model objects.

use filippov_core::equilibria::{catalog, EquilibriumRecord};
use filippov_core::integrator::Regime;
use filippov_core::scan::{BasinLabel, CellPayload, GridResult};
use filippov_core::sliding::sliding_bounds;
use filippov_core::{ModelParams, Stability, Trajectory};

use crate::svg::{Heatmap, Marker, MarkerStyle, Series, SvgPlotSpec, PALETTE};

const SLIDING_RED: &str = "#d7191c";

fn marker_for(rec: &EquilibriumRecord) -> MarkerStyle {
    if rec.kind == filippov_core::equilibria::EquilibriumKind::Pseudo {
        MarkerStyle::Pseudo
    } else if rec.is_regular() && rec.stability == Stability::Stable {
        MarkerStyle::Stable
    } else {
        MarkerStyle::Other
    }
}

fn regime_color(r: Regime) -> &'static str {
    match r {
        Regime::FlowS1 => "#2c7bb6",
        Regime::FlowS2 => "#fdae61",
        Regime::Sliding => "#7b3294",
    }
}

/// Manifold, sliding segment (red) and equilibrium markers for `params`.
fn add_manifold_and_equilibria(spec: &mut SvgPlotSpec, params: &ModelParams) {
    let s = params.threshold();
    let (_, y_top) = spec.y_range;
    spec.series.push(Series {
        points: vec![(s, 0.0), (s, y_top)],
        color: "#888".into(),
        width: 1.0,
        dashed: true,
        label: Some("x = S".into()),
    });
    let b = sliding_bounds(params);
    if !b.is_empty() {
        spec.series.push(Series {
            points: vec![(s, b.lower.max(0.0)), (s, b.upper)],
            color: SLIDING_RED.into(),
            width: 3.5,
            dashed: false,
            label: Some("sliding segment".into()),
        });
    }
    let cat = catalog(params);
    let regular = cat
        .interior
        .iter()
        .chain(&cat.axial)
        .filter(|r| r.is_regular());
    for rec in regular.chain(cat.pseudo.iter()) {
        spec.markers.push(Marker {
            at: (rec.location.x, rec.location.y),
            style: marker_for(rec),
        });
    }
    for t in &cat.tangent {
        spec.markers.push(Marker {
            at: (t.location.x, t.location.y),
            style: MarkerStyle::Tangent,
        });
    }
}

/// Phase portrait with the given trajectories coloured by regime.
pub fn phase_portrait(
    params: &ModelParams,
    title: &str,
    trajectories: &[&Trajectory],
) -> SvgPlotSpec {
    let cat = catalog(params);
    let b = sliding_bounds(params);
    let mut x_max = params.k1();
    let mut y_max = b.upper.max(params.k2());
    for rec in cat.interior.iter().chain(cat.pseudo.iter()) {
        y_max = y_max.max(rec.location.y);
    }
    for traj in trajectories {
        for (_, z, _) in traj.samples() {
            x_max = x_max.max(z.x);
            y_max = y_max.max(z.y);
        }
    }
    let mut spec = SvgPlotSpec::new(
        title,
        "prey x",
        "predator y",
        (0.0, 1.05 * x_max),
        (0.0, 1.1 * y_max),
    );
    let mut labelled = Vec::new();
    for traj in trajectories {
        for seg in &traj.segments {
            let label = (!labelled.contains(&seg.regime)).then(|| {
                labelled.push(seg.regime);
                format!("orbit ({})", seg.regime.as_str())
            });
            spec.series.push(Series {
                points: seg.states.iter().map(|z| (z.x, z.y)).collect(),
                color: regime_color(seg.regime).into(),
                width: 1.4,
                dashed: false,
                label,
            });
        }
    }
    add_manifold_and_equilibria(&mut spec, params);
    spec
}

fn basin_color(label: BasinLabel) -> &'static str {
    match label {
        BasinLabel::Er1 => "#92c5de",
        BasinLabel::Er2 => "#f4a582",
        BasinLabel::Pseudo => "#bababa",
        BasinLabel::Axial => "#c2a5cf",
        BasinLabel::Undetermined => "#ffffff",
    }
}

fn extent(axis: &filippov_core::scan::Axis) -> (f64, f64) {
    if axis.centered {
        (axis.min, axis.max)
    } else {
        let h = 0.5 * axis.spacing();
        (axis.min - h, axis.max + h)
    }
}

fn heatmap_spec<C: CellPayload>(
    grid: &GridResult<C>,
    title: &str,
    color_of: impl Fn(&C, usize) -> String,
) -> SvgPlotSpec {
    let mut names: Vec<String> = grid.cells.iter().map(|c| c.category()).collect();
    names.sort();
    names.dedup();
    let mut categories: Vec<(String, String)> = Vec::with_capacity(names.len());
    for name in &names {
        let sample = grid
            .cells
            .iter()
            .find(|c| &c.category() == name)
            .expect("category comes from a cell");
        categories.push((name.clone(), color_of(sample, categories.len())));
    }
    let cells = grid
        .cells
        .iter()
        .map(|c| names.binary_search(&c.category()).expect("known category"))
        .collect();
    let mut spec = SvgPlotSpec::new(
        title,
        &grid.x_axis.name,
        &grid.y_axis.name,
        extent(&grid.x_axis),
        extent(&grid.y_axis),
    );
    spec.heatmap = Some(Heatmap {
        nx: grid.x_axis.count,
        ny: grid.y_axis.count,
        cells,
        categories,
    });
    spec
}

/// Region heatmap over a parameter plane.
pub fn region_heatmap<C: CellPayload>(grid: &GridResult<C>, title: &str) -> SvgPlotSpec {
    heatmap_spec(grid, title, |_, k| PALETTE[k % PALETTE.len()].to_string())
}

/// Basin heatmap with the manifold, sliding segment and equilibria overlaid.
pub fn basin_heatmap(grid: &GridResult<BasinLabel>, title: &str) -> SvgPlotSpec {
    let mut spec = heatmap_spec(grid, title, |c, _| basin_color(*c).to_string());
    add_manifold_and_equilibria(&mut spec, &grid.provenance.params);
    spec
}
