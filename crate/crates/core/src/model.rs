//! The two smooth vector fields, the switching function and parameter handling.
//!
//! `F_S1` (no harvesting) governs the region `x < S` and `F_S2` (harvesting) the
//! region `x > S`:
//!
//! ```text
//! dx/dt = r1 x (1 - x/k1) - p(1-m) x y / (1 + b(1-m) x) - psi q1 E x
//! dy/dt = r2 y (1 - y/k2) + e p(1-m) x y / (1 + b(1-m) x) - psi q2 E y
//! ```
//!
//! with `psi = 0` in `S1` and `psi = 1` in `S2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equilibria::{EquilibriumKind, EquilibriumRecord};
use crate::error::{Error, Result};

/// Field selector: which smooth subsystem is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PsiMode {
    /// `psi = 0`, region `S1` (`x < S`).
    NonHarvest,
    /// `psi = 1`, region `S2` (`x > S`).
    Harvest,
}

impl PsiMode {
    pub const ALL: [PsiMode; 2] = [PsiMode::NonHarvest, PsiMode::Harvest];

    #[inline]
    pub fn psi(self) -> f64 {
        match self {
            PsiMode::NonHarvest => 0.0,
            PsiMode::Harvest => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PsiMode::NonHarvest => "non_harvest",
            PsiMode::Harvest => "harvest",
        }
    }

    /// Index used in labels such as `E^1` / `E^2`.
    pub fn index(self) -> usize {
        match self {
            PsiMode::NonHarvest => 1,
            PsiMode::Harvest => 2,
        }
    }
}

impl fmt::Display for PsiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Prey/predator densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let s = State { x, y };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_finite() && self.y.is_finite() && self.x >= 0.0 && self.y >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidState {
                x: self.x,
                y: self.y,
            })
        }
    }

    pub fn distance(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    pub dx_dt: f64,
    pub dy_dt: f64,
}

impl Velocity {
    pub fn norm(&self) -> f64 {
        self.dx_dt.hypot(self.dy_dt)
    }
}

/// Plain parameter values, used for (de)serialization and construction.
///
/// Keys follow the model notation exactly: `E` is the harvesting effort, `e` the
/// conversion rate, `S` the prey threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamValues {
    pub r1: f64,
    pub k1: f64,
    pub m: f64,
    pub p: f64,
    pub b: f64,
    pub q1: f64,
    #[serde(rename = "E")]
    pub effort: f64,
    pub r2: f64,
    pub k2: f64,
    pub e: f64,
    pub q2: f64,
    #[serde(rename = "S")]
    pub threshold: f64,
}

/// Validated model parameters.
///
/// Construction checks every invariant once; evaluation code assumes validity.
/// `q1 E` and `q2 E` are treated as effective per-capita harvest mortality
/// rates, no unit algebra is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamValues", into = "ParamValues")]
pub struct ModelParams {
    v: ParamValues,
}

/// Parameter keys in serialization order.
pub const PARAM_KEYS: [&str; 12] = [
    "r1", "k1", "m", "p", "b", "q1", "E", "r2", "k2", "e", "q2", "S",
];

impl TryFrom<ParamValues> for ModelParams {
    type Error = Error;

    fn try_from(v: ParamValues) -> Result<Self> {
        ModelParams::new(v)
    }
}

impl From<ModelParams> for ParamValues {
    fn from(p: ModelParams) -> Self {
        p.v
    }
}

impl ModelParams {
    pub fn new(v: ParamValues) -> Result<Self> {
        let positive = [
            ("r1", v.r1),
            ("k1", v.k1),
            ("p", v.p),
            ("b", v.b),
            ("q1", v.q1),
            ("E", v.effort),
            ("r2", v.r2),
            ("k2", v.k2),
            ("e", v.e),
            ("q2", v.q2),
            ("S", v.threshold),
        ];
        for (field, value) in positive {
            if !value.is_finite() {
                return Err(Error::InvalidParams {
                    field,
                    value,
                    reason: "must be finite",
                });
            }
            if value <= 0.0 {
                return Err(Error::InvalidParams {
                    field,
                    value,
                    reason: "must be strictly positive",
                });
            }
        }
        if !(v.m > 0.0 && v.m < 1.0) {
            return Err(Error::InvalidParams {
                field: "m",
                value: v.m,
                reason: "refuge fraction must lie in (0, 1)",
            });
        }
        Ok(ModelParams { v })
    }

    /// Parameter set A1 (threshold defaults to 0.25, inside the sliding regime).
    pub fn preset_a1() -> Self {
        ModelParams::new(ParamValues {
            r1: 0.9,
            k1: 2.0,
            m: 0.2,
            p: 0.6,
            b: 0.4,
            q1: 0.2,
            effort: 1.0,
            r2: 0.8,
            k2: 1.5,
            e: 0.6,
            q2: 0.1,
            threshold: 0.25,
        })
        .expect("preset A1 is valid")
    }

    /// Parameter set A2 (threshold defaults to 4, the bistable case).
    pub fn preset_a2() -> Self {
        ModelParams::new(ParamValues {
            r1: 2.3,
            k1: 9.0,
            m: 0.15,
            p: 0.2,
            b: 0.04,
            q1: 0.1,
            effort: 1.0,
            r2: 1.2,
            k2: 7.0,
            e: 0.5,
            q2: 0.2,
            threshold: 4.0,
        })
        .expect("preset A2 is valid")
    }

    /// Looks up a built-in preset by name (`A1`, `A2`, case-insensitive).
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "A1" => Some(Self::preset_a1()),
            "A2" => Some(Self::preset_a2()),
            _ => None,
        }
    }

    pub fn values(&self) -> ParamValues {
        self.v
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        let v = &self.v;
        Ok(match key {
            "r1" => v.r1,
            "k1" => v.k1,
            "m" => v.m,
            "p" => v.p,
            "b" => v.b,
            "q1" => v.q1,
            "E" => v.effort,
            "r2" => v.r2,
            "k2" => v.k2,
            "e" => v.e,
            "q2" => v.q2,
            "S" => v.threshold,
            _ => return Err(Error::UnknownParam(key.to_string())),
        })
    }

    /// Returns a copy with one parameter replaced, revalidated.
    pub fn with(&self, key: &str, value: f64) -> Result<Self> {
        let mut v = self.v;
        let slot = match key {
            "r1" => &mut v.r1,
            "k1" => &mut v.k1,
            "m" => &mut v.m,
            "p" => &mut v.p,
            "b" => &mut v.b,
            "q1" => &mut v.q1,
            "E" => &mut v.effort,
            "r2" => &mut v.r2,
            "k2" => &mut v.k2,
            "e" => &mut v.e,
            "q2" => &mut v.q2,
            "S" => &mut v.threshold,
            _ => return Err(Error::UnknownParam(key.to_string())),
        };
        *slot = value;
        ModelParams::new(v)
    }

    pub fn with_threshold(&self, s: f64) -> Result<Self> {
        self.with("S", s)
    }

    #[inline]
    pub fn r1(&self) -> f64 {
        self.v.r1
    }
    #[inline]
    pub fn k1(&self) -> f64 {
        self.v.k1
    }
    #[inline]
    pub fn m(&self) -> f64 {
        self.v.m
    }
    #[inline]
    pub fn p(&self) -> f64 {
        self.v.p
    }
    #[inline]
    pub fn b(&self) -> f64 {
        self.v.b
    }
    #[inline]
    pub fn q1(&self) -> f64 {
        self.v.q1
    }
    #[inline]
    pub fn effort(&self) -> f64 {
        self.v.effort
    }
    #[inline]
    pub fn r2(&self) -> f64 {
        self.v.r2
    }
    #[inline]
    pub fn k2(&self) -> f64 {
        self.v.k2
    }
    #[inline]
    pub fn e(&self) -> f64 {
        self.v.e
    }
    #[inline]
    pub fn q2(&self) -> f64 {
        self.v.q2
    }
    #[inline]
    pub fn threshold(&self) -> f64 {
        self.v.threshold
    }

    /// Effective attack rate on exposed prey, `p(1-m)`.
    #[inline]
    pub fn attack(&self) -> f64 {
        self.v.p * (1.0 - self.v.m)
    }

    /// Effective handling coefficient, `b(1-m)`.
    #[inline]
    pub fn handling(&self) -> f64 {
        self.v.b * (1.0 - self.v.m)
    }

    /// Per-capita prey harvest rate `psi q1 E`.
    #[inline]
    pub fn prey_harvest(&self, mode: PsiMode) -> f64 {
        mode.psi() * self.v.q1 * self.v.effort
    }

    /// Per-capita predator harvest rate `psi q2 E`.
    #[inline]
    pub fn predator_harvest(&self, mode: PsiMode) -> f64 {
        mode.psi() * self.v.q2 * self.v.effort
    }

    /// `S < k1`: without it the sliding segment on `x = S` is empty.
    pub fn has_sliding_segment(&self) -> bool {
        self.v.threshold < self.v.k1
    }

    /// Unchecked field evaluation for hot loops.
    #[inline]
    pub fn field(&self, mode: PsiMode, x: f64, y: f64) -> [f64; 2] {
        let response = self.attack() * x / (1.0 + self.handling() * x);
        [
            self.v.r1 * x * (1.0 - x / self.v.k1) - response * y - self.prey_harvest(mode) * x,
            self.v.r2 * y * (1.0 - y / self.v.k2) + self.v.e * response * y
                - self.predator_harvest(mode) * y,
        ]
    }

    /// Analytic partial derivatives of [`field`](Self::field), row-major.
    pub fn field_jacobian(&self, mode: PsiMode, x: f64, y: f64) -> [[f64; 2]; 2] {
        let a = self.attack();
        let denom = 1.0 + self.handling() * x;
        let d_response = a / (denom * denom);
        let response = a * x / denom;
        [
            [
                self.v.r1 * (1.0 - 2.0 * x / self.v.k1) - d_response * y - self.prey_harvest(mode),
                -response,
            ],
            [
                self.v.e * d_response * y,
                self.v.r2 * (1.0 - 2.0 * y / self.v.k2) + self.v.e * response
                    - self.predator_harvest(mode),
            ],
        ]
    }
}

/// Evaluates the smooth field selected by `mode` at `state`.
pub fn eval_field(state: State, params: &ModelParams, mode: PsiMode) -> Result<Velocity> {
    state.validate()?;
    let [dx_dt, dy_dt] = params.field(mode, state.x, state.y);
    Ok(Velocity { dx_dt, dy_dt })
}

/// `P(z) = x - S`: negative in `S1`, positive in `S2`, zero on the manifold.
#[inline]
pub fn switching_value(state: State, params: &ModelParams) -> f64 {
    state.x - params.threshold()
}

/// Region selected by the switching rule for a point off the manifold.
pub fn mode_at(state: State, params: &ModelParams) -> Option<PsiMode> {
    let s = switching_value(state, params);
    if s < 0.0 {
        Some(PsiMode::NonHarvest)
    } else if s > 0.0 {
        Some(PsiMode::Harvest)
    } else {
        None
    }
}

/// The trivial equilibrium plus the axial equilibria that are strictly positive.
pub fn semi_trivial_equilibria(params: &ModelParams, mode: PsiMode) -> Vec<EquilibriumRecord> {
    let mut out = vec![EquilibriumRecord::field_equilibrium(
        State { x: 0.0, y: 0.0 },
        mode,
        EquilibriumKind::Trivial,
        params,
    )];
    let prey_net = params.r1() - params.prey_harvest(mode);
    if prey_net > 0.0 {
        out.push(EquilibriumRecord::field_equilibrium(
            State {
                x: params.k1() * (1.0 - params.prey_harvest(mode) / params.r1()),
                y: 0.0,
            },
            mode,
            EquilibriumKind::SemiTrivial,
            params,
        ));
    }
    let predator_net = params.r2() - params.predator_harvest(mode);
    if predator_net > 0.0 {
        out.push(EquilibriumRecord::field_equilibrium(
            State {
                x: 0.0,
                y: params.k2() * (1.0 - params.predator_harvest(mode) / params.r2()),
            },
            mode,
            EquilibriumKind::SemiTrivial,
            params,
        ));
    }
    out
}
