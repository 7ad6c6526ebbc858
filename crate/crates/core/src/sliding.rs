//! Dynamics on the switching line `x = S`.
//!
//! On the manifold the prey derivative under each field is
//! `sigma_1(y) = r1 S (1 - S/k1) - p(1-m) S y / (1 + b(1-m) S)` and
//! `sigma_2(y) = sigma_1(y) - q1 E S`. The sliding segment is the interval of
//! predator densities where the two point towards each other. Because
//! `sigma_2 < sigma_1` everywhere, the segment is always attracting and there is
//! no escaping sliding for this model.
//!
//! Sliding motion uses the equivalent control obtained from `dx/dt = 0` at
//! `x = S`. Dividing that condition by `S` gives
//! `psi(y) = [r1 (1 - S/k1) - p(1-m) y / (1 + b(1-m) S)] / (q1 E)`,
//! which equals `1 - lambda` for the Filippov convex weight `lambda`. The resulting
//! predator equation keeps the predation gain `e p(1-m) S y / (1 + b(1-m) S)`,
//! so the Utkin and Filippov forms coincide and the closed-form pseudo-equilibrium
//! is a root of it.

use serde::{Deserialize, Serialize};

use crate::equilibria::{
    EquilibriumKind, EquilibriumMode, EquilibriumRecord, Placement, Stability,
};
use crate::error::{Error, Result};
use crate::model::{ModelParams, PsiMode, State, Velocity};

/// Absolute tolerance on `sigma` values for tangency classification.
pub const TANGENCY_TOL: f64 = 1e-12;

/// Below this magnitude the pseudo-equilibrium denominator is degenerate.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// `|phi'(y1)|` below this is reported as inconclusive.
pub const INCONCLUSIVE_SLOPE: f64 = 1e-8;

/// Predator densities delimiting the sliding segment on `x = S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlidingBounds {
    /// Zero of `sigma_2` (tangency of the harvesting field).
    pub lower: f64,
    /// Zero of `sigma_1` (tangency of the non-harvesting field).
    pub upper: f64,
}

impl SlidingBounds {
    pub fn is_empty(&self) -> bool {
        self.upper <= self.lower.max(0.0)
    }

    /// Closed-interval membership.
    pub fn contains(&self, y: f64) -> bool {
        y >= self.lower && y <= self.upper
    }

    pub fn contains_open(&self, y: f64) -> bool {
        y > self.lower && y < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManifoldRegime {
    Crossing,
    AttractingSliding,
    EscapingSliding,
    /// `sigma_1 = 0`: the non-harvesting field is tangent to the manifold.
    Tangency1,
    /// `sigma_2 = 0`: the harvesting field is tangent to the manifold.
    Tangency2,
}

impl ManifoldRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            ManifoldRegime::Crossing => "crossing",
            ManifoldRegime::AttractingSliding => "attracting_sliding",
            ManifoldRegime::EscapingSliding => "escaping_sliding",
            ManifoldRegime::Tangency1 => "tangency_1",
            ManifoldRegime::Tangency2 => "tangency_2",
        }
    }
}

/// `(sigma_1, sigma_2)`: prey derivative at `(S, y)` under each field.
pub fn sigma_pair(y: f64, params: &ModelParams) -> (f64, f64) {
    let s = params.threshold();
    (
        params.field(PsiMode::NonHarvest, s, y)[0],
        params.field(PsiMode::Harvest, s, y)[0],
    )
}

/// Closed-form bounds of the sliding segment.
pub fn sliding_bounds(params: &ModelParams) -> SlidingBounds {
    let s = params.threshold();
    let k1 = params.k1();
    let scale = (1.0 + params.handling() * s) / (k1 * params.attack());
    SlidingBounds {
        lower: (params.r1() * (k1 - s) - params.q1() * params.effort() * k1) * scale,
        upper: params.r1() * (k1 - s) * scale,
    }
}

/// Like [`sliding_bounds`] but fails when the segment is empty.
pub fn nonempty_sliding_bounds(params: &ModelParams) -> Result<SlidingBounds> {
    let b = sliding_bounds(params);
    if b.is_empty() {
        Err(Error::EmptySlidingSegment {
            lower: b.lower,
            upper: b.upper,
        })
    } else {
        Ok(b)
    }
}

/// Classifies the manifold point `(S, y)` from the signs of `sigma_1`, `sigma_2`.
pub fn classify_manifold_point(y: f64, params: &ModelParams) -> ManifoldRegime {
    let (s1, s2) = sigma_pair(y, params);
    if s1.abs() < TANGENCY_TOL {
        ManifoldRegime::Tangency1
    } else if s2.abs() < TANGENCY_TOL {
        ManifoldRegime::Tangency2
    } else if s1 * s2 > 0.0 {
        ManifoldRegime::Crossing
    } else if s1 > 0.0 {
        ManifoldRegime::AttractingSliding
    } else {
        ManifoldRegime::EscapingSliding
    }
}

fn check_in_segment(y: f64, bounds: &SlidingBounds) -> Result<()> {
    let slack = 1e-12 * (1.0 + bounds.upper.abs());
    if y < 0.0 || y < bounds.lower - slack || y > bounds.upper + slack || !y.is_finite() {
        return Err(Error::OutsideSlidingSegment {
            y,
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    Ok(())
}

/// Filippov convex weight of `F_S1` at `(S, y)`.
///
/// `sigma_2 / (sigma_2 - sigma_1)` simplifies to `(y - y_lower) / (y_upper - y_lower)`,
/// which is evaluated directly so the endpoints map to exactly 0 and 1.
pub fn filippov_lambda(y: f64, params: &ModelParams) -> Result<f64> {
    let b = sliding_bounds(params);
    check_in_segment(y, &b)?;
    Ok(lambda_unchecked(y, &b))
}

#[inline]
pub(crate) fn lambda_unchecked(y: f64, b: &SlidingBounds) -> f64 {
    (y - b.lower) / (b.upper - b.lower)
}

/// `lambda F_S1 + (1 - lambda) F_S2` at `(S, y)`.
pub fn convex_velocity(y: f64, params: &ModelParams) -> Result<Velocity> {
    let lambda = filippov_lambda(y, params)?;
    let s = params.threshold();
    let f1 = params.field(PsiMode::NonHarvest, s, y);
    let f2 = params.field(PsiMode::Harvest, s, y);
    Ok(Velocity {
        dx_dt: lambda * f1[0] + (1.0 - lambda) * f2[0],
        dy_dt: lambda * f1[1] + (1.0 - lambda) * f2[1],
    })
}

/// Predator growth on the sliding segment (equivalent-control form).
pub fn sliding_flow(y: f64, params: &ModelParams) -> Result<f64> {
    check_in_segment(y, &sliding_bounds(params))?;
    Ok(sliding_flow_unchecked(y, params))
}

/// `phi(y) = y * (c0 + c1 y)`; the pair `(c0, c1)`.
fn sliding_flow_coefficients(params: &ModelParams) -> (f64, f64) {
    let s = params.threshold();
    let denom = 1.0 + params.handling() * s;
    let ratio = params.q2() / params.q1();
    let c0 = params.r2() + params.e() * params.attack() * s / denom
        - ratio * params.r1() * (1.0 - s / params.k1());
    let c1 = -params.r2() / params.k2() + ratio * params.attack() / denom;
    (c0, c1)
}

#[inline]
pub(crate) fn sliding_flow_unchecked(y: f64, params: &ModelParams) -> f64 {
    let s = params.threshold();
    let denom = 1.0 + params.handling() * s;
    let control =
        (params.r1() * (1.0 - s / params.k1()) - params.attack() * y / denom) / params.q1();
    params.r2() * y * (1.0 - y / params.k2()) + params.e() * params.attack() * s * y / denom
        - params.q2() * y * control
}

/// Analytic `d phi / dy`.
pub fn sliding_flow_derivative(y: f64, params: &ModelParams) -> f64 {
    let (c0, c1) = sliding_flow_coefficients(params);
    c0 + 2.0 * c1 * y
}

/// Result of the pseudo-equilibrium search.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoEquilibrium {
    /// Closed-form candidate, reported even when it falls outside the segment.
    pub candidate_y: f64,
    pub bounds: SlidingBounds,
    /// Present only when the candidate lies strictly inside the segment.
    pub record: Option<EquilibriumRecord>,
}

impl PseudoEquilibrium {
    pub fn exists(&self) -> bool {
        self.record.is_some()
    }
}

/// Closed-form pseudo-equilibrium `(S, y1)` of the sliding flow.
pub fn pseudo_equilibrium(params: &ModelParams) -> Result<PseudoEquilibrium> {
    let (s, k1, k2) = (params.threshold(), params.k1(), params.k2());
    let (q1, q2) = (params.q1(), params.q2());
    let denom_s = 1.0 + params.handling() * s;
    let denominator = q2 * k1 * k2 * params.attack() - q1 * k1 * params.r2() * denom_s;
    if denominator.abs() < DEGENERATE_DENOMINATOR {
        return Err(Error::DegenerateDenominator(denominator));
    }
    let numerator = q2 * k2 * params.r1() * (k1 - s) * denom_s
        - q1 * k1
            * k2
            * (params.r2()
                + (params.r2() * params.b() + params.e() * params.p()) * (1.0 - params.m()) * s);
    let candidate_y = numerator / denominator;
    let bounds = sliding_bounds(params);
    let record = (candidate_y > 0.0 && bounds.contains_open(candidate_y)).then(|| {
        let slope = sliding_flow_derivative(candidate_y, params);
        EquilibriumRecord {
            location: State {
                x: s,
                y: candidate_y,
            },
            mode: EquilibriumMode::Pseudo,
            kind: EquilibriumKind::Pseudo,
            placement: Placement::NotApplicable,
            stability: slope_verdict(slope),
            eigenvalues: None,
        }
    });
    Ok(PseudoEquilibrium {
        candidate_y,
        bounds,
        record,
    })
}

fn slope_verdict(slope: f64) -> Stability {
    if slope.abs() < INCONCLUSIVE_SLOPE {
        Stability::Inconclusive
    } else if slope < 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoStability {
    pub verdict: Stability,
    pub y: f64,
    /// Analytic `phi'(y1)`.
    pub slope: f64,
    /// Central finite difference of `phi` at `y1`.
    pub slope_fd: f64,
}

/// Stability of the pseudo-equilibrium from the sign of `phi'(y1)`.
///
/// The analytic slope decides; a central difference with step
/// `1e-6 max(1, y1)` is computed alongside and a sign disagreement downgrades
/// the verdict to inconclusive.
pub fn pseudo_stability(params: &ModelParams) -> Result<PseudoStability> {
    let pe = pseudo_equilibrium(params)?;
    if !pe.exists() {
        return Err(Error::NoPseudoEquilibrium {
            candidate: pe.candidate_y,
        });
    }
    let y = pe.candidate_y;
    let slope = sliding_flow_derivative(y, params);
    let h = 1e-6 * y.max(1.0);
    let slope_fd =
        (sliding_flow_unchecked(y + h, params) - sliding_flow_unchecked(y - h, params)) / (2.0 * h);
    let mut verdict = slope_verdict(slope);
    if verdict != Stability::Inconclusive && slope.signum() != slope_fd.signum() {
        verdict = Stability::Inconclusive;
    }
    Ok(PseudoStability {
        verdict,
        y,
        slope,
        slope_fd,
    })
}
