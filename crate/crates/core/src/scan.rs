//! Parameter-plane scans, existence boundaries, boundary bifurcations and
//! basins of attraction.
//!
//! The interior-equilibrium cubic does not involve the threshold `S`, so every
//! scan over `S` solves it once per value of the other parameter and derives
//! placement by comparing `x*` with `S`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{
    classify_equilibrium, interior_equilibria, EquilibriumKind, EquilibriumMode, EquilibriumRecord,
    Placement, Stability,
};
use crate::error::{Error, Result};
use crate::integrator::{simulate, SimOptions};
use crate::model::{ModelParams, PsiMode, State};
use crate::sliding::pseudo_equilibrium;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-10;

/// Basin grids warn when more than this fraction of cells is undetermined.
pub const UNDETERMINED_WARNING: f64 = 0.01;

/// One grid axis. Node axes include both endpoints; centered axes sample the
/// midpoints of `count` equal cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub centered: bool,
}

impl Axis {
    pub fn nodes(name: &str, range: (f64, f64), count: usize) -> Self {
        Axis {
            name: name.to_string(),
            min: range.0,
            max: range.1,
            count,
            centered: false,
        }
    }

    pub fn centers(name: &str, range: (f64, f64), count: usize) -> Self {
        Axis {
            name: name.to_string(),
            min: range.0,
            max: range.1,
            count,
            centered: true,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        let span = self.max - self.min;
        if self.centered {
            self.min + span * (i as f64 + 0.5) / self.count as f64
        } else if self.count == 1 {
            self.min
        } else {
            self.min + span * i as f64 / (self.count - 1) as f64
        }
    }

    /// Distance between neighbouring samples.
    pub fn spacing(&self) -> f64 {
        let span = self.max - self.min;
        if self.centered {
            span / self.count as f64
        } else {
            span / (self.count.max(2) - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    fn validate(&self, min_count: usize) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(Error::InvalidOption(
                "range",
                "must be finite with min < max",
            ));
        }
        if self.count < min_count {
            return Err(Error::InvalidOption(
                "resolution",
                "too few samples along an axis",
            ));
        }
        Ok(())
    }
}

/// Inputs a grid was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: ModelParams,
    pub sim: Option<SimOptions>,
    pub notes: Vec<String>,
}

/// Cell payloads that can be written to and read back from flat text columns.
pub trait CellPayload: Sized {
    const COLUMNS: &'static [&'static str];

    fn fields(&self) -> Vec<String>;

    fn parse(fields: &[&str]) -> Result<Self>;

    /// Short category name used for colouring and legends.
    fn category(&self) -> String;
}

/// Row-major grid: the cell at column `i` (x axis) and row `j` (y axis) is at
/// index `j * x_axis.count + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult<C> {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub cells: Vec<C>,
    pub provenance: Provenance,
}

impl<C> GridResult<C> {
    pub fn cell(&self, i: usize, j: usize) -> &C {
        &self.cells[j * self.x_axis.count + i]
    }

    /// `(i, j, x, y, cell)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64, f64, &C)> + '_ {
        let nx = self.x_axis.count;
        self.cells.iter().enumerate().map(move |(k, c)| {
            let (i, j) = (k % nx, k / nx);
            (i, j, self.x_axis.value(i), self.y_axis.value(j), c)
        })
    }

    pub fn fraction(&self, pred: impl Fn(&C) -> bool) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        self.cells.iter().filter(|c| pred(c)).count() as f64 / self.cells.len() as f64
    }
}

fn unknown(column: &str, value: &str) -> Error {
    Error::InvalidRecord(format!("unrecognised {column} value `{value}`"))
}

fn parse_placement(s: &str) -> Option<Placement> {
    [
        Placement::Regular,
        Placement::Virtual,
        Placement::OnBoundary,
        Placement::NotApplicable,
    ]
    .into_iter()
    .find(|p| p.as_str() == s)
}

fn parse_stability(s: &str) -> Option<Stability> {
    [
        Stability::Stable,
        Stability::Unstable,
        Stability::Inconclusive,
    ]
    .into_iter()
    .find(|v| v.as_str() == s)
}

/// Interior equilibrium of one field as seen from a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeStatus {
    Absent,
    /// The smallest positive equilibrium; `count` is the number of positive ones.
    Present {
        placement: Placement,
        stability: Stability,
        count: u8,
    },
    Undetermined,
}

impl ModeStatus {
    pub fn exists(&self) -> bool {
        matches!(self, ModeStatus::Present { .. })
    }

    pub fn placement(&self) -> Option<Placement> {
        match self {
            ModeStatus::Present { placement, .. } => Some(*placement),
            _ => None,
        }
    }

    fn from_records(records: &[EquilibriumRecord]) -> Self {
        match records.first() {
            None => ModeStatus::Absent,
            Some(r) => ModeStatus::Present {
                placement: r.placement,
                stability: r.stability,
                count: records.len().min(u8::MAX as usize) as u8,
            },
        }
    }

    fn text(&self) -> String {
        match self {
            ModeStatus::Absent => "absent".into(),
            ModeStatus::Undetermined => "undetermined".into(),
            ModeStatus::Present {
                placement,
                stability,
                ..
            } => {
                format!("{}:{}", placement.as_str(), stability.as_str())
            }
        }
    }

    fn parse(status: &str, count: &str) -> Result<Self> {
        Ok(match status {
            "absent" => ModeStatus::Absent,
            "undetermined" => ModeStatus::Undetermined,
            _ => {
                let (pl, st) = status
                    .split_once(':')
                    .ok_or_else(|| unknown("status", status))?;
                ModeStatus::Present {
                    placement: parse_placement(pl).ok_or_else(|| unknown("placement", pl))?,
                    stability: parse_stability(st).ok_or_else(|| unknown("stability", st))?,
                    count: count.parse().map_err(|_| unknown("count", count))?,
                }
            }
        })
    }

    fn count(&self) -> u8 {
        match self {
            ModeStatus::Present { count, .. } => *count,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PseudoStatus {
    Absent,
    Present(Stability),
    Undetermined,
}

impl PseudoStatus {
    fn text(&self) -> &'static str {
        match self {
            PseudoStatus::Absent => "absent",
            PseudoStatus::Undetermined => "undetermined",
            PseudoStatus::Present(s) => s.as_str(),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "absent" => PseudoStatus::Absent,
            "undetermined" => PseudoStatus::Undetermined,
            _ => PseudoStatus::Present(parse_stability(s).ok_or_else(|| unknown("pseudo", s))?),
        })
    }
}

/// Equilibrium structure of one `(S, p)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionCode {
    pub non_harvest: ModeStatus,
    pub harvest: ModeStatus,
    pub pseudo: PseudoStatus,
}

impl RegionCode {
    pub const UNDETERMINED: RegionCode = RegionCode {
        non_harvest: ModeStatus::Undetermined,
        harvest: ModeStatus::Undetermined,
        pseudo: PseudoStatus::Undetermined,
    };

    pub fn mode(&self, mode: PsiMode) -> ModeStatus {
        match mode {
            PsiMode::NonHarvest => self.non_harvest,
            PsiMode::Harvest => self.harvest,
        }
    }

    pub fn both_exist(&self) -> bool {
        self.non_harvest.exists() && self.harvest.exists()
    }

    pub fn is_undetermined(&self) -> bool {
        *self == Self::UNDETERMINED
    }
}

fn short_status(m: ModeStatus) -> &'static str {
    match m {
        ModeStatus::Absent => "-",
        ModeStatus::Undetermined => "?",
        ModeStatus::Present {
            placement: Placement::Regular,
            stability: Stability::Stable,
            ..
        } => "Rs",
        ModeStatus::Present {
            placement: Placement::Regular,
            ..
        } => "Ru",
        ModeStatus::Present {
            placement: Placement::OnBoundary,
            ..
        } => "B",
        ModeStatus::Present { .. } => "V",
    }
}

impl CellPayload for RegionCode {
    const COLUMNS: &'static [&'static str] = &[
        "non_harvest",
        "non_harvest_count",
        "harvest",
        "harvest_count",
        "pseudo",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.non_harvest.text(),
            self.non_harvest.count().to_string(),
            self.harvest.text(),
            self.harvest.count().to_string(),
            self.pseudo.text().to_string(),
        ]
    }

    fn parse(f: &[&str]) -> Result<Self> {
        let [nh, nhc, h, hc, ps] = f else {
            return Err(Error::InvalidRecord(format!(
                "expected 5 region fields, got {}",
                f.len()
            )));
        };
        Ok(RegionCode {
            non_harvest: ModeStatus::parse(nh, nhc)?,
            harvest: ModeStatus::parse(h, hc)?,
            pseudo: PseudoStatus::parse(ps)?,
        })
    }

    fn category(&self) -> String {
        if self.is_undetermined() {
            return "undetermined".into();
        }
        let ps = match self.pseudo {
            PseudoStatus::Absent => "-",
            PseudoStatus::Present(Stability::Stable) => "s",
            PseudoStatus::Present(Stability::Unstable) => "u",
            PseudoStatus::Present(Stability::Inconclusive) => "i",
            PseudoStatus::Undetermined => "?",
        };
        format!(
            "E1:{} E2:{} EP:{}",
            short_status(self.non_harvest),
            short_status(self.harvest),
            ps
        )
    }
}

/// Attractor reached from a basin-grid initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasinLabel {
    /// Interior equilibrium of the non-harvesting field.
    Er1,
    /// Interior equilibrium of the harvesting field.
    Er2,
    Pseudo,
    /// An equilibrium on a coordinate axis.
    Axial,
    Undetermined,
}

impl BasinLabel {
    pub const ALL: [BasinLabel; 5] = [
        BasinLabel::Er1,
        BasinLabel::Er2,
        BasinLabel::Pseudo,
        BasinLabel::Axial,
        BasinLabel::Undetermined,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BasinLabel::Er1 => "ER1",
            BasinLabel::Er2 => "ER2",
            BasinLabel::Pseudo => "PSEUDO",
            BasinLabel::Axial => "AXIAL",
            BasinLabel::Undetermined => "UNDETERMINED",
        }
    }

    pub fn of_attractor(rec: Option<&EquilibriumRecord>) -> Self {
        let Some(rec) = rec else {
            return BasinLabel::Undetermined;
        };
        match (rec.mode, rec.kind) {
            (EquilibriumMode::Pseudo, _) => BasinLabel::Pseudo,
            (EquilibriumMode::Field(PsiMode::NonHarvest), EquilibriumKind::Interior) => {
                BasinLabel::Er1
            }
            (EquilibriumMode::Field(PsiMode::Harvest), EquilibriumKind::Interior) => {
                BasinLabel::Er2
            }
            _ => BasinLabel::Axial,
        }
    }
}

impl CellPayload for BasinLabel {
    const COLUMNS: &'static [&'static str] = &["label"];

    fn fields(&self) -> Vec<String> {
        vec![self.as_str().to_string()]
    }

    fn parse(f: &[&str]) -> Result<Self> {
        let [s] = f else {
            return Err(Error::InvalidRecord(format!(
                "expected 1 basin field, got {}",
                f.len()
            )));
        };
        BasinLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == *s)
            .ok_or_else(|| unknown("label", s))
    }

    fn category(&self) -> String {
        self.as_str().to_string()
    }
}

pub type RegionGrid = GridResult<RegionCode>;
pub type BasinGrid = GridResult<BasinLabel>;

/// Interior equilibria of both fields at one value of the non-threshold
/// parameters; placement is recomputed per threshold.
struct Column {
    records: [Vec<EquilibriumRecord>; 2],
}

impl Column {
    fn solve(params: &ModelParams) -> Self {
        Column {
            records: PsiMode::ALL.map(|mode| interior_equilibria(params, mode).records),
        }
    }

    fn region_at(&self, params: &ModelParams) -> RegionCode {
        let placed = |mode: PsiMode| {
            let recs: Vec<_> = self.records[mode.index() - 1]
                .iter()
                .map(|r| classify_equilibrium(*r, params))
                .collect();
            ModeStatus::from_records(&recs)
        };
        let pseudo = match pseudo_equilibrium(params) {
            Ok(pe) => match pe.record {
                Some(r) => PseudoStatus::Present(r.stability),
                None => PseudoStatus::Absent,
            },
            Err(_) => PseudoStatus::Undetermined,
        };
        RegionCode {
            non_harvest: placed(PsiMode::NonHarvest),
            harvest: placed(PsiMode::Harvest),
            pseudo,
        }
    }
}

/// Region codes over the `(S, p)` plane; `S` runs along x, `p` along y.
pub fn scan_sp_plane(
    base: &ModelParams,
    s_range: (f64, f64),
    p_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<RegionGrid> {
    let x_axis = Axis::nodes("S", s_range, resolution.0);
    let y_axis = Axis::nodes("p", p_range, resolution.1);
    x_axis.validate(2)?;
    y_axis.validate(2)?;
    let s_values = x_axis.values();
    let rows: Vec<Vec<RegionCode>> = y_axis
        .values()
        .into_par_iter()
        .map(|p| {
            let Ok(at_p) = base.with("p", p) else {
                return vec![RegionCode::UNDETERMINED; s_values.len()];
            };
            let column = Column::solve(&at_p);
            s_values
                .iter()
                .map(|&s| match at_p.with_threshold(s) {
                    Ok(cell) => column.region_at(&cell),
                    Err(_) => RegionCode::UNDETERMINED,
                })
                .collect()
        })
        .collect();
    Ok(GridResult {
        x_axis,
        y_axis,
        cells: rows.concat(),
        provenance: Provenance {
            params: *base,
            sim: None,
            notes: Vec::new(),
        },
    })
}

fn exists_at_p(base: &ModelParams, mode: PsiMode, p: f64) -> bool {
    base.with("p", p)
        .map(|q| !interior_equilibria(&q, mode).records.is_empty())
        .unwrap_or(false)
}

/// Largest predation rate `p` for which the selected field has an interior
/// equilibrium.
///
/// A geometric search brackets the change of existence, starting from the
/// base `p`; bisection then narrows it to [`BISECTION_TOL`].
pub fn existence_boundary_p(base: &ModelParams, mode: PsiMode) -> Result<f64> {
    const P_MIN: f64 = 1e-6;
    const P_MAX: f64 = 1e6;
    let exists = |p: f64| exists_at_p(base, mode, p);
    let mut lo = base.p();
    if !exists(lo) {
        lo = P_MIN;
        while lo < base.p() && !exists(lo) {
            lo *= 2.0;
        }
        if !exists(lo) {
            return Err(Error::BracketFailure {
                lo: P_MIN,
                hi: base.p(),
            });
        }
    }
    let mut hi = lo * 2.0;
    while exists(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > P_MAX {
            return Err(Error::BracketFailure { lo, hi: P_MAX });
        }
    }
    while hi - lo > BISECTION_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if exists(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    /// Interior equilibrium, absent where the curve is broken.
    pub equilibrium: Option<State>,
    /// The step from the previous sample is much larger than its neighbours'.
    pub jump: bool,
}

/// Interior equilibrium `x*(p)` of one field over `samples` values of `p`.
///
/// With several positive roots the one closest to the previous sample is
/// followed. A step is flagged as a jump when it exceeds four times the sum of
/// the adjacent steps.
pub fn equilibrium_curve(
    base: &ModelParams,
    mode: PsiMode,
    p_range: (f64, f64),
    samples: usize,
) -> Result<Vec<CurvePoint>> {
    let axis = Axis::nodes("p", p_range, samples);
    axis.validate(2)?;
    let mut points: Vec<CurvePoint> = Vec::with_capacity(samples);
    for p in axis.values() {
        let prev = points.last().and_then(|c| c.equilibrium);
        let equilibrium = base.with("p", p).ok().and_then(|q| {
            let recs = interior_equilibria(&q, mode).records;
            let pick = |r: &&EquilibriumRecord| match prev {
                Some(z) => (r.location.x - z.x).abs(),
                None => r.location.x,
            };
            recs.iter()
                .min_by(|a, b| pick(a).total_cmp(&pick(b)))
                .map(|r| r.location)
        });
        points.push(CurvePoint {
            p,
            equilibrium,
            jump: false,
        });
    }
    let steps: Vec<Option<f64>> = points
        .windows(2)
        .map(|w| match (w[0].equilibrium, w[1].equilibrium) {
            (Some(a), Some(b)) => Some((b.x - a.x).abs()),
            _ => None,
        })
        .collect();
    for (k, step) in steps.iter().enumerate() {
        let Some(step) = *step else { continue };
        let before = k.checked_sub(1).and_then(|i| steps[i]).unwrap_or(0.0);
        let after = steps.get(k + 1).copied().flatten().unwrap_or(0.0);
        let reference = before + after;
        if reference > 0.0 && step > 4.0 * reference {
            points[k + 1].jump = true;
        }
    }
    Ok(points)
}

/// Local type of an equilibrium from its eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumType {
    Focus,
    Node,
    Saddle,
    Degenerate,
}

impl EquilibriumType {
    pub fn of(eig: &[Complex64; 2]) -> Self {
        let [a, b] = eig;
        if a.im.abs() > 0.0 {
            EquilibriumType::Focus
        } else if a.re == 0.0 || b.re == 0.0 {
            EquilibriumType::Degenerate
        } else if a.re.signum() == b.re.signum() {
            EquilibriumType::Node
        } else {
            EquilibriumType::Saddle
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumType::Focus => "focus",
            EquilibriumType::Node => "node",
            EquilibriumType::Saddle => "saddle",
            EquilibriumType::Degenerate => "degenerate",
        }
    }
}

/// Threshold value at which an interior equilibrium sits on the manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryBifurcation {
    pub threshold: f64,
    pub mode: PsiMode,
    pub location: State,
    pub eigenvalues: [Complex64; 2],
    pub observed: EquilibriumType,
}

/// Collisions of interior equilibria with the manifold for `S` in `s_range`,
/// sorted by threshold.
///
/// Bisection runs on `x*(mode) - S`, which is affine in `S` because the cubic
/// does not depend on the threshold.
pub fn locate_boundary_bifurcations(
    base: &ModelParams,
    s_range: (f64, f64),
) -> Result<Vec<BoundaryBifurcation>> {
    let (lo0, hi0) = s_range;
    if !(lo0.is_finite() && hi0.is_finite() && hi0 > lo0 && lo0 > 0.0) {
        return Err(Error::InvalidOption(
            "s_range",
            "must be positive and finite with min < max",
        ));
    }
    let mut out = Vec::new();
    for mode in PsiMode::ALL {
        for rec in interior_equilibria(base, mode).records {
            let gap = |s: f64| rec.location.x - s;
            if gap(lo0) * gap(hi0) > 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (lo0, hi0);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                if gap(lo) * gap(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let eig = rec.eigenvalues.expect("field equilibria carry eigenvalues");
            out.push(BoundaryBifurcation {
                threshold: 0.5 * (lo + hi),
                mode,
                location: rec.location,
                eigenvalues: eig,
                observed: EquilibriumType::of(&eig),
            });
        }
    }
    out.sort_by(|a, b| a.threshold.total_cmp(&b.threshold));
    Ok(out)
}

/// Attractor labels for initial conditions at the cell centres of
/// `x_range` x `y_range`.
///
/// Simulations that end without reaching a candidate, or fail, are labelled
/// [`BasinLabel::Undetermined`]; a note is added to the provenance when they
/// exceed [`UNDETERMINED_WARNING`] of the grid.
pub fn compute_basins(
    base: &ModelParams,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: (usize, usize),
    sim: &SimOptions,
) -> Result<BasinGrid> {
    let x_axis = Axis::centers("x", x_range, resolution.0);
    let y_axis = Axis::centers("y", y_range, resolution.1);
    x_axis.validate(1)?;
    y_axis.validate(1)?;
    sim.validate()?;
    let opts = SimOptions {
        stop_at_attractor: true,
        ..*sim
    };
    let nx = x_axis.count;
    let cells: Vec<BasinLabel> = (0..nx * y_axis.count)
        .into_par_iter()
        .map(|k| {
            let start = State {
                x: x_axis.value(k % nx),
                y: y_axis.value(k / nx),
            };
            match simulate(start, base, &opts) {
                Ok(traj) => BasinLabel::of_attractor(traj.attractor.as_ref()),
                Err(_) => BasinLabel::Undetermined,
            }
        })
        .collect();
    let mut grid = GridResult {
        x_axis,
        y_axis,
        cells,
        provenance: Provenance {
            params: *base,
            sim: Some(opts),
            notes: Vec::new(),
        },
    };
    let undetermined = grid.fraction(|c| *c == BasinLabel::Undetermined);
    if undetermined > UNDETERMINED_WARNING {
        grid.provenance.notes.push(format!(
            "{:.2}% of cells undetermined; consider a larger t_end (currently {})",
            100.0 * undetermined,
            opts.t_end
        ));
    }
    Ok(grid)
}

/// One `(S, p)` scan of an m-sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub m: f64,
    pub grid: RegionGrid,
    /// Fraction of cells where both interior equilibria exist.
    pub both_exist_fraction: f64,
    /// Existence boundary in `p` per field, in [`PsiMode::ALL`] order.
    pub existence_p: [Option<f64>; 2],
}

pub fn scan_m_sweep(
    base: &ModelParams,
    m_values: &[f64],
    s_range: (f64, f64),
    p_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<Vec<SweepEntry>> {
    m_values
        .iter()
        .map(|&m| {
            let at_m = base.with("m", m)?;
            let grid = scan_sp_plane(&at_m, s_range, p_range, resolution)?;
            let both_exist_fraction = grid.fraction(RegionCode::both_exist);
            let existence_p = PsiMode::ALL.map(|mode| existence_boundary_p(&at_m, mode).ok());
            Ok(SweepEntry {
                m,
                grid,
                both_exist_fraction,
                existence_p,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> ModelParams {
        ModelParams::preset_a1()
    }

    #[test]
    fn axes_sample_nodes_and_centers() {
        let n = Axis::nodes("S", (0.0, 1.0), 5);
        assert_eq!(n.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let c = Axis::centers("x", (0.0, 1.0), 4);
        assert_eq!(c.values(), vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!(c.spacing(), 0.25);
    }

    #[test]
    fn existence_boundaries_a1() {
        let nh = existence_boundary_p(&a1(), PsiMode::NonHarvest).unwrap();
        let h = existence_boundary_p(&a1(), PsiMode::Harvest).unwrap();
        assert!((nh - 0.75).abs() < 1e-3, "{nh}");
        assert!((h - 0.6667).abs() < 1e-3, "{h}");
    }

    #[test]
    fn region_code_fields_round_trip() {
        let grid = scan_sp_plane(&a1(), (0.05, 1.0), (0.1, 0.9), (7, 9)).unwrap();
        for (.., c) in grid.iter() {
            let f = c.fields();
            let refs: Vec<&str> = f.iter().map(String::as_str).collect();
            assert_eq!(RegionCode::parse(&refs).unwrap(), *c);
        }
        assert_eq!(
            RegionCode::parse(&["junk", "0", "absent", "0", "absent"]).ok(),
            None
        );
    }

    #[test]
    fn a1_high_p_rows_lack_equilibria() {
        let grid = scan_sp_plane(&a1(), (0.05, 1.5), (0.7, 0.8), (5, 3)).unwrap();
        for i in 0..5 {
            // p = 0.7: only the non-harvesting equilibrium survives.
            assert!(grid.cell(i, 0).non_harvest.exists() && !grid.cell(i, 0).harvest.exists());
            assert!(!grid.cell(i, 2).non_harvest.exists() && !grid.cell(i, 2).harvest.exists());
        }
    }

    #[test]
    fn a1_collisions() {
        let events = locate_boundary_bifurcations(&a1(), (0.05, 0.8)).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].mode, PsiMode::Harvest);
        assert!((events[0].threshold - 0.1416).abs() < 1e-3);
        assert_eq!(events[1].mode, PsiMode::NonHarvest);
        assert!((events[1].threshold - 0.4005).abs() < 1e-3);
        for ev in &events {
            assert!((ev.threshold - ev.location.x).abs() < 1e-9);
        }
        assert!(locate_boundary_bifurcations(&a1(), (0.5, 0.8))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn curve_follows_reported_equilibria() {
        let curve = equilibrium_curve(&a1(), PsiMode::NonHarvest, (0.3, 0.6), 31).unwrap();
        let last = curve.last().unwrap().equilibrium.unwrap();
        assert!((last.x - 0.4005).abs() < 1e-3);
        assert!(curve.iter().all(|c| !c.jump && c.equilibrium.is_some()));
        let broken = equilibrium_curve(&a1(), PsiMode::Harvest, (0.5, 0.8), 31).unwrap();
        assert!(broken.last().unwrap().equilibrium.is_none());
    }

    #[test]
    fn basin_labels_parse() {
        for l in BasinLabel::ALL {
            assert_eq!(BasinLabel::parse(&[l.as_str()]).unwrap(), l);
        }
    }
}
