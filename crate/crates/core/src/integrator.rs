//! Event-driven integration of the Filippov system.
//!
//! Smooth flow in `S1` / `S2` uses an adaptive Dormand-Prince 5(4) pair. A sign
//! change of `x - S` inside an accepted step is localized by bisection on the
//! step length. At the manifold point the signs of `sigma_1`, `sigma_2` decide
//! between crossing, grazing and sliding. Sliding motion pins `x = S` and
//! integrates the one-dimensional sliding flow until `y` leaves the segment.

use serde::{Deserialize, Serialize};

use crate::equilibria::{catalog, EquilibriumRecord};
use crate::error::{Error, Result};
use crate::model::{ModelParams, PsiMode, State};
use crate::sliding::{
    classify_manifold_point, sigma_pair, sliding_bounds, sliding_flow_unchecked, ManifoldRegime,
    SlidingBounds,
};

/// Smallest accepted relative tolerance.
pub const MIN_REL_TOL: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub t_end: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Localization tolerance on `|x - S|`.
    pub event_tol: f64,
    /// Radius around an attractor candidate counted as "reached".
    pub attractor_radius: f64,
    /// Time the trajectory must remain within the radius.
    pub dwell: f64,
    /// Stop as soon as an attractor is reached rather than running to `t_end`.
    pub stop_at_attractor: bool,
    pub max_events: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            t_end: 500.0,
            initial_step: 1e-2,
            max_step: 1.0,
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            event_tol: 1e-10,
            attractor_radius: 1e-4,
            dwell: 1.0,
            stop_at_attractor: true,
            max_events: 100_000,
        }
    }
}

impl SimOptions {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("t_end", self.t_end),
            ("initial_step", self.initial_step),
            ("max_step", self.max_step),
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("event_tol", self.event_tol),
            ("attractor_radius", self.attractor_radius),
            ("dwell", self.dwell),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidOption(name, "must be positive and finite"));
            }
        }
        if self.rel_tol < MIN_REL_TOL {
            return Err(Error::InvalidOption(
                "rel_tol",
                "below 100 ulp, unreachable in double precision",
            ));
        }
        if self.max_events == 0 {
            return Err(Error::InvalidOption("max_events", "must be positive"));
        }
        Ok(())
    }

    /// Same options with both integration tolerances scaled by `factor`.
    pub fn scaled_tolerances(&self, factor: f64) -> Self {
        SimOptions {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    FlowS1,
    FlowS2,
    Sliding,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::FlowS1 => "S1",
            Regime::FlowS2 => "S2",
            Regime::Sliding => "sliding",
        }
    }

    fn flow(mode: PsiMode) -> Self {
        match mode {
            PsiMode::NonHarvest => Regime::FlowS1,
            PsiMode::Harvest => Regime::FlowS2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentEnd {
    Crossing,
    SlidingEntry,
    SlidingExit,
    TimeLimit,
    AttractorReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub regime: Regime,
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub end: SegmentEnd,
}

impl Segment {
    fn new(regime: Regime, t: f64, z: State) -> Self {
        Segment {
            regime,
            times: vec![t],
            states: vec![z],
            end: SegmentEnd::TimeLimit,
        }
    }

    fn push(&mut self, t: f64, z: State) {
        self.times.push(t);
        self.states.push(z);
    }

    pub fn duration(&self) -> f64 {
        self.times.last().unwrap_or(&0.0) - self.times.first().unwrap_or(&0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    /// Candidate the simulation stopped at, when it ended with `AttractorReached`.
    pub attractor: Option<EquilibriumRecord>,
    /// Tangential touches of the manifold that continued in the incoming field.
    pub grazes: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> State {
        *self
            .segments
            .last()
            .and_then(|s| s.states.last())
            .expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .segments
            .last()
            .and_then(|s| s.times.last())
            .expect("trajectory is never empty")
    }

    /// All samples in time order as `(t, state, regime)`.
    pub fn samples(&self) -> impl Iterator<Item = (f64, State, Regime)> + '_ {
        self.segments.iter().flat_map(|s| {
            s.times
                .iter()
                .zip(&s.states)
                .map(move |(&t, &z)| (t, z, s.regime))
        })
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.times.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn terminal_event(&self) -> SegmentEnd {
        self.segments
            .last()
            .map(|s| s.end)
            .unwrap_or(SegmentEnd::TimeLimit)
    }
}

// Dormand-Prince 5(4) tableau (autonomous fields, so the nodes are not needed).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct StepOutcome<const N: usize> {
    y: [f64; N],
    err: f64,
}

fn dopri_step<const N: usize, F>(f: &F, y: &[f64; N], h: f64, opts: &SimOptions) -> StepOutcome<N>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(y);
    for stage in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        if stage == 6 {
            // Stage 7 is evaluated at the fifth-order solution itself.
            k[6] = f(&ys);
            let mut err_sq = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
                let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(ys[i].abs());
                err_sq += (e / sc).powi(2);
            }
            return StepOutcome {
                y: ys,
                err: (err_sq / N as f64).sqrt(),
            };
        }
        k[stage] = f(&ys);
    }
    unreachable!()
}

fn next_step(h: f64, err: f64) -> f64 {
    let factor = if err == 0.0 {
        5.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    };
    h * factor
}

/// Tracks how long the state has stayed near one attractor candidate.
struct AttractorWatch {
    candidates: Vec<EquilibriumRecord>,
    radius: f64,
    dwell: f64,
    current: Option<(usize, f64)>,
}

impl AttractorWatch {
    fn new(params: &ModelParams, opts: &SimOptions) -> Self {
        let candidates = if opts.stop_at_attractor {
            catalog(params).attractor_candidates()
        } else {
            Vec::new()
        };
        AttractorWatch {
            candidates,
            radius: opts.attractor_radius,
            dwell: opts.dwell,
            current: None,
        }
    }

    /// Returns the candidate once the dwell time has been satisfied.
    fn observe(&mut self, t: f64, z: State) -> Result<Option<EquilibriumRecord>> {
        let mut near = self
            .candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.location.distance(&z) <= self.radius);
        let first = near.next().map(|(i, _)| i);
        let others = near.count();
        if others > 0 {
            return Err(Error::AmbiguousAttractor(others + 1));
        }
        match (first, self.current) {
            (None, _) => self.current = None,
            (Some(i), Some((j, since))) if i == j => {
                if t - since >= self.dwell {
                    return Ok(Some(self.candidates[i]));
                }
            }
            (Some(i), _) => self.current = Some((i, t)),
        }
        Ok(None)
    }
}

enum ManifoldDecision {
    Slide,
    Cross(PsiMode),
    Graze,
}

fn decide_at_manifold(y: f64, incoming: PsiMode, params: &ModelParams) -> ManifoldDecision {
    match classify_manifold_point(y, params) {
        ManifoldRegime::AttractingSliding => ManifoldDecision::Slide,
        ManifoldRegime::Crossing => {
            let dest = if sigma_pair(y, params).0 > 0.0 {
                PsiMode::Harvest
            } else {
                PsiMode::NonHarvest
            };
            if dest == incoming {
                ManifoldDecision::Graze
            } else {
                ManifoldDecision::Cross(dest)
            }
        }
        // The incoming field grazes: continue in it.
        ManifoldRegime::Tangency1 if incoming == PsiMode::NonHarvest => ManifoldDecision::Graze,
        ManifoldRegime::Tangency2 if incoming == PsiMode::Harvest => ManifoldDecision::Graze,
        // The other field is tangent: closed-segment endpoint of the sliding region.
        ManifoldRegime::Tangency1 | ManifoldRegime::Tangency2 => ManifoldDecision::Slide,
        // sigma_2 = sigma_1 - q1 E S < sigma_1 rules this out.
        ManifoldRegime::EscapingSliding => unreachable!("escaping sliding region is empty"),
    }
}

fn offset_into(mode: PsiMode, s: f64, tol: f64) -> f64 {
    match mode {
        PsiMode::NonHarvest => s - tol,
        PsiMode::Harvest => s + tol,
    }
}

struct Runner<'a> {
    params: &'a ModelParams,
    opts: SimOptions,
    bounds: SlidingBounds,
    watch: AttractorWatch,
    segments: Vec<Segment>,
    events: usize,
    grazes: usize,
    h: f64,
}

enum Phase {
    Flow(PsiMode),
    Slide,
    Done,
}

/// Integrates the Filippov system from `initial` until `t_end` or an attractor.
pub fn simulate(initial: State, params: &ModelParams, options: &SimOptions) -> Result<Trajectory> {
    initial.validate()?;
    options.validate()?;
    let s = params.threshold();
    let bounds = sliding_bounds(params);
    let mut runner = Runner {
        params,
        opts: *options,
        bounds,
        watch: AttractorWatch::new(params, options),
        segments: Vec::new(),
        events: 0,
        grazes: 0,
        h: options.initial_step.min(options.max_step),
    };

    let mut z = initial;
    let mut phase = if z.x < s {
        Phase::Flow(PsiMode::NonHarvest)
    } else if z.x > s {
        Phase::Flow(PsiMode::Harvest)
    } else if !bounds.is_empty() && bounds.contains(z.y) {
        Phase::Slide
    } else if sigma_pair(z.y, params).0 > 0.0 {
        z.x = s + options.event_tol;
        Phase::Flow(PsiMode::Harvest)
    } else {
        z.x = s - options.event_tol;
        Phase::Flow(PsiMode::NonHarvest)
    };
    let mut t = 0.0;
    let mut first = true;
    loop {
        phase = match phase {
            Phase::Flow(mode) => runner.flow(mode, &mut t, &mut z, first)?,
            Phase::Slide => runner.slide(&mut t, &mut z, first)?,
            Phase::Done => break,
        };
        first = false;
        if runner.events > runner.opts.max_events {
            return Err(Error::EventLimit(runner.events));
        }
    }
    let attractor = match runner.segments.last() {
        Some(seg) if seg.end == SegmentEnd::AttractorReached => runner
            .watch
            .current
            .map(|(i, _)| runner.watch.candidates[i]),
        _ => None,
    };
    Ok(Trajectory {
        segments: runner.segments,
        attractor,
        grazes: runner.grazes,
    })
}

impl Runner<'_> {
    fn check_finite(&self, t: f64, y: &[f64]) -> Result<()> {
        if y.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite { t })
        }
    }

    fn min_step(&self, t: f64) -> f64 {
        1e-14 * t.abs().max(1.0)
    }

    /// Smooth flow in one region until an event, an attractor or `t_end`.
    fn flow(&mut self, mode: PsiMode, t: &mut f64, z: &mut State, first: bool) -> Result<Phase> {
        let params = self.params;
        let s = params.threshold();
        let f = |v: &[f64; 2]| params.field(mode, v[0], v[1]);
        let on_own_side = |x: f64| match mode {
            PsiMode::NonHarvest => x < s,
            PsiMode::Harvest => x > s,
        };
        let mut seg = Segment::new(Regime::flow(mode), *t, *z);
        if first {
            self.watch.observe(*t, *z)?;
        }
        loop {
            if *t >= self.opts.t_end {
                seg.end = SegmentEnd::TimeLimit;
                self.segments.push(seg);
                return Ok(Phase::Done);
            }
            let h = self.h.min(self.opts.t_end - *t).min(self.opts.max_step);
            let y0 = [z.x, z.y];
            let out = dopri_step(&f, &y0, h, &self.opts);
            self.check_finite(*t, &out.y)?;
            let negative = out.y.iter().copied().fold(f64::INFINITY, f64::min);
            if out.err > 1.0 || negative < -self.opts.abs_tol {
                if out.err <= 1.0 && h <= self.min_step(*t) * 16.0 {
                    return Err(Error::NegativeExcursion {
                        t: *t,
                        value: negative,
                    });
                }
                self.h = if out.err > 1.0 {
                    next_step(h, out.err).min(0.5 * h)
                } else {
                    0.25 * h
                };
                if self.h < self.min_step(*t) {
                    return Err(Error::StepUnderflow { t: *t, state: *z });
                }
                continue;
            }
            let mut y1 = out.y;
            for v in y1.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
            let grow = next_step(h, out.err);

            if on_own_side(y1[0]) {
                *t += h;
                *z = State { x: y1[0], y: y1[1] };
                seg.push(*t, *z);
                self.h = grow;
                if self.watch.observe(*t, *z)?.is_some() {
                    seg.end = SegmentEnd::AttractorReached;
                    self.segments.push(seg);
                    return Ok(Phase::Done);
                }
                continue;
            }

            // Switching event inside (0, h]: bisect on the step length.
            let (tau, hit) = self.localize(&f, y0, h, |v| v[0] - s, |v| on_own_side(v[0]));
            *t += tau;
            let y_hit = hit[1].max(0.0);
            self.events += 1;
            match decide_at_manifold(y_hit, mode, params) {
                ManifoldDecision::Slide => {
                    *z = State { x: s, y: y_hit };
                    seg.push(*t, *z);
                    seg.end = SegmentEnd::SlidingEntry;
                    self.segments.push(seg);
                    return Ok(Phase::Slide);
                }
                ManifoldDecision::Cross(dest) => {
                    seg.push(*t, State { x: s, y: y_hit });
                    seg.end = SegmentEnd::Crossing;
                    self.segments.push(seg);
                    *z = State {
                        x: offset_into(dest, s, self.opts.event_tol),
                        y: y_hit,
                    };
                    return Ok(Phase::Flow(dest));
                }
                ManifoldDecision::Graze => {
                    self.grazes += 1;
                    *z = State {
                        x: offset_into(mode, s, self.opts.event_tol),
                        y: y_hit,
                    };
                    seg.push(*t, *z);
                    if self.events > self.opts.max_events {
                        return Err(Error::EventLimit(self.events));
                    }
                }
            }
        }
    }

    /// Bisection on the step length for the first zero of `g` along one RK step.
    fn localize<const N: usize, F, G, O>(
        &self,
        f: &F,
        y0: [f64; N],
        h: f64,
        g: G,
        own: O,
    ) -> (f64, [f64; N])
    where
        F: Fn(&[f64; N]) -> [f64; N],
        G: Fn(&[f64; N]) -> f64,
        O: Fn(&[f64; N]) -> bool,
    {
        let mut lo = 0.0;
        let mut hi = h;
        let mut best = dopri_step(f, &y0, hi, &self.opts).y;
        for _ in 0..200 {
            if g(&best).abs() <= self.opts.event_tol || hi - lo <= f64::EPSILON * hi.max(1e-300) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let ym = dopri_step(f, &y0, mid, &self.opts).y;
            if own(&ym) {
                lo = mid;
            } else {
                hi = mid;
                best = ym;
            }
            if g(&ym).abs() <= self.opts.event_tol {
                return (mid, ym);
            }
        }
        (hi, best)
    }

    /// Sliding motion on `x = S` until `y` leaves the segment.
    fn slide(&mut self, t: &mut f64, z: &mut State, first: bool) -> Result<Phase> {
        let params = self.params;
        let s = params.threshold();
        let b = self.bounds;
        let f = |v: &[f64; 1]| [sliding_flow_unchecked(v[0], params)];
        let mut y = z.y.clamp(b.lower.max(0.0), b.upper);
        *z = State { x: s, y };
        let mut seg = Segment::new(Regime::Sliding, *t, *z);
        if first {
            self.watch.observe(*t, *z)?;
        }
        loop {
            // Leaving through an endpoint: continue in the field tangent there.
            let phi = sliding_flow_unchecked(y, params);
            if y >= b.upper - self.opts.event_tol && phi > 0.0 {
                return Ok(self.exit_sliding(seg, t, z, b.upper, PsiMode::NonHarvest));
            }
            if y <= b.lower + self.opts.event_tol && phi < 0.0 {
                return Ok(self.exit_sliding(seg, t, z, b.lower, PsiMode::Harvest));
            }
            if *t >= self.opts.t_end {
                seg.end = SegmentEnd::TimeLimit;
                self.segments.push(seg);
                return Ok(Phase::Done);
            }
            let h = self.h.min(self.opts.t_end - *t).min(self.opts.max_step);
            let out = dopri_step(&f, &[y], h, &self.opts);
            self.check_finite(*t, &out.y)?;
            if out.err > 1.0 {
                self.h = next_step(h, out.err).min(0.5 * h);
                if self.h < self.min_step(*t) {
                    return Err(Error::StepUnderflow { t: *t, state: *z });
                }
                continue;
            }
            let grow = next_step(h, out.err);
            let y_new = out.y[0];
            if b.contains(y_new) {
                *t += h;
                y = y_new;
                *z = State { x: s, y };
                seg.push(*t, *z);
                self.h = grow;
                if self.watch.observe(*t, *z)?.is_some() {
                    seg.end = SegmentEnd::AttractorReached;
                    self.segments.push(seg);
                    return Ok(Phase::Done);
                }
                continue;
            }
            let (edge, dest) = if y_new > b.upper {
                (b.upper, PsiMode::NonHarvest)
            } else {
                (b.lower, PsiMode::Harvest)
            };
            let (tau, _) = self.localize(&f, [y], h, |v| v[0] - edge, |v| b.contains(v[0]));
            *t += tau;
            return Ok(self.exit_sliding(seg, t, z, edge, dest));
        }
    }

    fn exit_sliding(
        &mut self,
        mut seg: Segment,
        t: &mut f64,
        z: &mut State,
        edge: f64,
        dest: PsiMode,
    ) -> Phase {
        let s = self.params.threshold();
        self.events += 1;
        seg.push(*t, State { x: s, y: edge });
        seg.end = SegmentEnd::SlidingExit;
        self.segments.push(seg);
        *z = State {
            x: offset_into(dest, s, self.opts.event_tol),
            y: edge,
        };
        Phase::Flow(dest)
    }
}

/// Integrates one smooth field, ignoring the switching rule.
pub fn simulate_field(
    initial: State,
    params: &ModelParams,
    mode: PsiMode,
    options: &SimOptions,
) -> Result<Trajectory> {
    initial.validate()?;
    options.validate()?;
    let f = |v: &[f64; 2]| params.field(mode, v[0], v[1]);
    let mut seg = Segment::new(Regime::flow(mode), 0.0, initial);
    let mut t = 0.0;
    let mut h = options.initial_step.min(options.max_step);
    let mut y = [initial.x, initial.y];
    while t < options.t_end {
        let step = h.min(options.t_end - t).min(options.max_step);
        let out = dopri_step(&f, &y, step, options);
        if !out.y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        let negative = out.y.iter().copied().fold(f64::INFINITY, f64::min);
        if out.err > 1.0 || negative < -options.abs_tol {
            h = if out.err > 1.0 {
                next_step(step, out.err).min(0.5 * step)
            } else {
                0.25 * step
            };
            if h < 1e-14 * t.max(1.0) {
                return Err(Error::StepUnderflow {
                    t,
                    state: State { x: y[0], y: y[1] },
                });
            }
            continue;
        }
        t += step;
        y = out.y.map(|v| v.max(0.0));
        seg.push(t, State { x: y[0], y: y[1] });
        h = next_step(step, out.err);
    }
    Ok(Trajectory {
        segments: vec![seg],
        attractor: None,
        grazes: 0,
    })
}

/// Lyapunov function `e (x - x* - x* ln(x/x*)) + (1 + b(1-m) x*)(y - y* - y* ln(y/y*))`.
pub fn lyapunov_value(state: State, eq: State, params: &ModelParams) -> Result<f64> {
    if !(state.x > 0.0 && state.y > 0.0) {
        return Err(Error::LyapunovDomain {
            x: state.x,
            y: state.y,
        });
    }
    if !(eq.x > 0.0 && eq.y > 0.0) {
        return Err(Error::LyapunovDomain { x: eq.x, y: eq.y });
    }
    let term = |u: f64, u_star: f64| {
        let r = u / u_star;
        // u - u* - u* ln(u/u*) = u* (r - 1 - ln r); ln_1p keeps precision near r = 1.
        u_star * ((r - 1.0) - (r - 1.0).ln_1p())
    };
    Ok(params.e() * term(state.x, eq.x) + (1.0 + params.handling() * eq.x) * term(state.y, eq.y))
}

/// Finds the candidate the trajectory tail has stayed within `radius` of for at
/// least `dwell` time units.
pub fn detect_attractor(
    traj: &Trajectory,
    candidates: &[EquilibriumRecord],
    radius: f64,
    dwell: f64,
) -> Result<Option<EquilibriumRecord>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidOption("radius", "must be positive"));
    }
    if !(dwell > 0.0) {
        return Err(Error::InvalidOption("dwell", "must be positive"));
    }
    let samples: Vec<(f64, State)> = traj.samples().map(|(t, z, _)| (t, z)).collect();
    let Some(&(t_last, z_last)) = samples.last() else {
        return Ok(None);
    };
    let near: Vec<&EquilibriumRecord> = candidates
        .iter()
        .filter(|c| c.location.distance(&z_last) <= radius)
        .collect();
    let target = match near.len() {
        0 => return Ok(None),
        1 => near[0],
        n => return Err(Error::AmbiguousAttractor(n)),
    };
    let mut t_entry = t_last;
    for &(t, z) in samples.iter().rev() {
        if target.location.distance(&z) > radius {
            break;
        }
        let crowd = candidates
            .iter()
            .filter(|c| c.location.distance(&z) <= radius)
            .count();
        if crowd > 1 {
            return Err(Error::AmbiguousAttractor(crowd));
        }
        t_entry = t;
    }
    Ok((t_last - t_entry >= dwell).then_some(*target))
}

/// Asymptotic upper bounds on prey and predator densities.
///
/// The predator bound uses `gamma = min(q1 E e, q2 E)`, reading the per-capita
/// harvest rates into the `eta = e x + y` comparison argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBounds {
    pub prey: f64,
    pub predator: f64,
}

pub fn density_bounds(params: &ModelParams) -> DensityBounds {
    let (r1, k1, r2, k2, e) = (
        params.r1(),
        params.k1(),
        params.r2(),
        params.k2(),
        params.e(),
    );
    let no_harvest = k2 / r2 * (r2 + e * params.attack() * k1 / (1.0 + params.handling() * k1));
    let gamma = (params.q1() * params.effort() * e).min(params.q2() * params.effort());
    let harvest = (r1 * k1 * e + r2 * k2) / (4.0 * gamma);
    DensityBounds {
        prey: k1,
        predator: no_harvest.max(harvest),
    }
}

/// Largest prey and predator densities observed after `burn_in`.
pub fn tail_maxima(traj: &Trajectory, burn_in: f64) -> Option<(f64, f64)> {
    traj.samples()
        .filter(|(t, _, _)| *t >= burn_in)
        .fold(None, |acc, (_, z, _)| match acc {
            None => Some((z.x, z.y)),
            Some((mx, my)) => Some((mx.max(z.x), my.max(z.y))),
        })
}
