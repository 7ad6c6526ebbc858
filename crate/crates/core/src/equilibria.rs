//! Equilibria of the two smooth fields and the special points on the manifold.
//!
//! Interior equilibria solve a cubic in the prey density that does not involve
//! the threshold `S`; the predator density follows from the prey nullcline
//! `y = (r1 - psi q1 E - r1 x / k1)(1 + b(1-m) x) / (p(1-m))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PsiMode, State};
use crate::poly;
use crate::sliding::sliding_bounds;

/// Field residual above which a point is not accepted as an equilibrium.
pub const EQUILIBRIUM_RESIDUAL: f64 = 1e-9;

/// `|x* - S|` below which an equilibrium is placed on the manifold.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Default tolerance on the scalar boundary-equilibrium conditions.
pub const BOUNDARY_CONDITION_TOL: f64 = 1e-8;

/// Eigenvalue real parts within this of zero give an inconclusive verdict.
pub const INCONCLUSIVE_EIGEN: f64 = 1e-8;

/// Coefficients of `a3 x^3 + a2 x^2 + a1 x + a0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CubicCoeffs {
    /// Highest degree first.
    pub fn as_array(&self) -> [f64; 4] {
        [self.a3, self.a2, self.a1, self.a0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        poly::eval_cubic(self.as_array(), x)
    }

    /// One of the three sign patterns that certify a unique positive root.
    pub fn descartes_unique(&self) -> bool {
        let (a0, a1, a2) = (self.a0, self.a1, self.a2);
        a0 < 0.0 && ((a1 < 0.0 && a2 < 0.0) || (a1 < 0.0 && a2 > 0.0) || (a1 > 0.0 && a2 > 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumMode {
    Field(PsiMode),
    Pseudo,
}

impl EquilibriumMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumMode::Field(m) => m.as_str(),
            EquilibriumMode::Pseudo => "pseudo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquilibriumKind {
    Trivial,
    SemiTrivial,
    Interior,
    Pseudo,
    Boundary,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::Trivial => "trivial",
            EquilibriumKind::SemiTrivial => "semi_trivial",
            EquilibriumKind::Interior => "interior",
            EquilibriumKind::Pseudo => "pseudo",
            EquilibriumKind::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placement {
    Regular,
    Virtual,
    OnBoundary,
    NotApplicable,
}

impl Placement {
    pub fn as_str(self) -> &'static str {
        match self {
            Placement::Regular => "regular",
            Placement::Virtual => "virtual",
            Placement::OnBoundary => "boundary",
            Placement::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    Inconclusive,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumRecord {
    pub location: State,
    pub mode: EquilibriumMode,
    pub kind: EquilibriumKind,
    pub placement: Placement,
    pub stability: Stability,
    /// Jacobian eigenvalues, for equilibria of a smooth field.
    pub eigenvalues: Option<[Complex64; 2]>,
}

impl EquilibriumRecord {
    /// Record for an equilibrium of one smooth field: placement relative to the
    /// threshold and eigenvalue-based stability are filled in.
    pub fn field_equilibrium(
        location: State,
        mode: PsiMode,
        kind: EquilibriumKind,
        params: &ModelParams,
    ) -> Self {
        let eig = eigenvalues(params.field_jacobian(mode, location.x, location.y));
        EquilibriumRecord {
            location,
            mode: EquilibriumMode::Field(mode),
            kind,
            placement: placement_of(location.x, mode, params),
            stability: eigen_verdict(&eig),
            eigenvalues: Some(eig),
        }
    }

    pub fn is_regular(&self) -> bool {
        self.placement == Placement::Regular
    }
}

fn placement_of(x: f64, mode: PsiMode, params: &ModelParams) -> Placement {
    let offset = x - params.threshold();
    if offset.abs() < BOUNDARY_TOL {
        return Placement::OnBoundary;
    }
    match (mode, offset < 0.0) {
        (PsiMode::NonHarvest, true) | (PsiMode::Harvest, false) => Placement::Regular,
        _ => Placement::Virtual,
    }
}

/// Eigenvalues of a real 2x2 matrix, ordered by ascending real part.
pub fn eigenvalues(j: [[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    // Same as tr^2/4 - det, without the cancellation for near-equal diagonals.
    let half_gap = 0.5 * (j[0][0] - j[1][1]);
    let disc = half_gap * half_gap + j[0][1] * j[1][0];
    if disc >= 0.0 {
        let root = disc.sqrt();
        // Avoid cancellation in the smaller-magnitude root.
        let big = 0.5 * tr + tr.signum() * root;
        let small = if big != 0.0 {
            det / big
        } else {
            0.5 * tr - root
        };
        let (a, b) = if big < small {
            (big, small)
        } else {
            (small, big)
        };
        [Complex64::new(a, 0.0), Complex64::new(b, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [Complex64::new(0.5 * tr, -im), Complex64::new(0.5 * tr, im)]
    }
}

fn eigen_verdict(eig: &[Complex64; 2]) -> Stability {
    let max_re = eig[0].re.max(eig[1].re);
    if max_re < -INCONCLUSIVE_EIGEN {
        Stability::Stable
    } else if max_re > INCONCLUSIVE_EIGEN {
        Stability::Unstable
    } else {
        Stability::Inconclusive
    }
}

pub fn cubic_coefficients(params: &ModelParams, mode: PsiMode) -> CubicCoeffs {
    let (r1, k1, r2, k2) = (params.r1(), params.k1(), params.r2(), params.k2());
    let (b, e, p) = (params.b(), params.e(), params.p());
    let om = 1.0 - params.m();
    let prey_net = r1 - params.prey_harvest(mode);
    let pred_net = r2 - params.predator_harvest(mode);
    CubicCoeffs {
        a0: k1 * k2 * p * om * pred_net - k1 * r2 * prey_net,
        a1: r1 * r2 - 2.0 * k1 * r2 * prey_net * b * om
            + k1 * k2 * p * om * om * (b * pred_net + e * p),
        a2: 2.0 * r1 * r2 * b * om - k1 * r2 * b * b * om * om * prey_net,
        a3: r1 * r2 * b * b * om * om,
    }
}

/// Predator density on the prey nullcline for prey density `x`.
pub fn predator_on_prey_nullcline(x: f64, params: &ModelParams, mode: PsiMode) -> f64 {
    (params.r1() - params.prey_harvest(mode) - params.r1() * x / params.k1())
        * (1.0 + params.handling() * x)
        / params.attack()
}

/// Interior equilibria of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorEquilibria {
    pub coefficients: CubicCoeffs,
    pub records: Vec<EquilibriumRecord>,
    /// Descartes sign conditions hold: at most one positive root exists.
    pub descartes_certified: bool,
    /// Positive cubic roots rejected because the predator density is not positive.
    pub discarded: Vec<State>,
}

/// All positive-prey roots of the cubic with positive predator density.
pub fn interior_equilibria(params: &ModelParams, mode: PsiMode) -> InteriorEquilibria {
    let coefficients = cubic_coefficients(params, mode);
    let mut records = Vec::new();
    let mut discarded = Vec::new();
    for x in positive_cubic_roots(&coefficients) {
        let y = predator_on_prey_nullcline(x, params, mode);
        let location = State { x, y };
        if y > 0.0 {
            records.push(EquilibriumRecord::field_equilibrium(
                location,
                mode,
                EquilibriumKind::Interior,
                params,
            ));
        } else {
            discarded.push(location);
        }
    }
    InteriorEquilibria {
        coefficients,
        records,
        descartes_certified: coefficients.descartes_unique(),
        discarded,
    }
}

/// Positive real roots of the cubic, ascending.
pub fn positive_cubic_roots(c: &CubicCoeffs) -> Vec<f64> {
    poly::real_roots_cubic(c.as_array())
        .into_iter()
        .filter(|&x| x > 0.0)
        .collect()
}

fn field_residual(eq: State, params: &ModelParams, mode: PsiMode) -> f64 {
    let [fx, fy] = params.field(mode, eq.x, eq.y);
    fx.hypot(fy)
}

/// Analytic Jacobian at an equilibrium of the selected field.
pub fn jacobian(eq: State, params: &ModelParams, mode: PsiMode) -> Result<[[f64; 2]; 2]> {
    eq.validate()?;
    let residual = field_residual(eq, params, mode);
    if !(residual < EQUILIBRIUM_RESIDUAL) {
        return Err(Error::NotAnEquilibrium {
            x: eq.x,
            y: eq.y,
            residual,
        });
    }
    Ok(params.field_jacobian(mode, eq.x, eq.y))
}

/// Sufficient condition for local asymptotic stability of an interior equilibrium:
/// `r1/k1 > b p (1-m)^2 y* / (1 + b(1-m) x*)^2`.
pub fn local_stability_condition(eq: State, params: &ModelParams) -> bool {
    let d = 1.0 + params.handling() * eq.x;
    params.r1() / params.k1() > predation_curvature(eq.y, params) / (d * d)
}

/// Sufficient condition for global asymptotic stability within the field:
/// `r1/k1 > b p (1-m)^2 y* / (1 + b(1-m) x*)`.
pub fn global_stability_condition(eq: State, params: &ModelParams) -> bool {
    let d = 1.0 + params.handling() * eq.x;
    params.r1() / params.k1() > predation_curvature(eq.y, params) / d
}

fn predation_curvature(y: f64, params: &ModelParams) -> f64 {
    let om = 1.0 - params.m();
    params.b() * params.p() * om * om * y
}

/// Sets the placement of a field equilibrium from its prey density and the threshold.
pub fn classify_equilibrium(eq: EquilibriumRecord, params: &ModelParams) -> EquilibriumRecord {
    let placement = match eq.mode {
        EquilibriumMode::Field(mode) => placement_of(eq.location.x, mode, params),
        EquilibriumMode::Pseudo => Placement::NotApplicable,
    };
    EquilibriumRecord { placement, ..eq }
}

/// Boundary-equilibrium condition values at `(S, y_upper)` for the non-harvesting
/// field and `(S, y_lower)` for the harvesting field.
///
/// Each is the per-capita predator growth of the respective field at its
/// tangent point; a zero means the tangent point is an equilibrium.
pub fn boundary_conditions(params: &ModelParams) -> [(PsiMode, f64, f64); 2] {
    let b = sliding_bounds(params);
    let s = params.threshold();
    let gain = params.e() * params.attack() * s / (1.0 + params.handling() * s);
    let growth = |y: f64| params.r2() / params.k2() * (params.k2() - y) + gain;
    [
        (PsiMode::NonHarvest, b.upper, growth(b.upper)),
        (
            PsiMode::Harvest,
            b.lower,
            growth(b.lower) - params.q2() * params.effort(),
        ),
    ]
}

pub fn boundary_equilibria(params: &ModelParams) -> Vec<EquilibriumRecord> {
    boundary_equilibria_with_tolerance(params, BOUNDARY_CONDITION_TOL)
}

/// Boundary equilibria, accepting a condition residual up to `tol`.
///
/// Also reports a boundary equilibrium whenever an interior equilibrium sits
/// within [`BOUNDARY_TOL`] of the manifold.
pub fn boundary_equilibria_with_tolerance(
    params: &ModelParams,
    tol: f64,
) -> Vec<EquilibriumRecord> {
    let s = params.threshold();
    let mut out = Vec::new();
    for (mode, y, residual) in boundary_conditions(params) {
        let collided = interior_equilibria(params, mode)
            .records
            .iter()
            .any(|r| (r.location.x - s).abs() < BOUNDARY_TOL);
        if y > 0.0 && (residual.abs() <= tol || collided) {
            let mut rec = EquilibriumRecord::field_equilibrium(
                State { x: s, y },
                mode,
                EquilibriumKind::Boundary,
                params,
            );
            rec.placement = Placement::OnBoundary;
            out.push(rec);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Visibility {
    Visible,
    Invisible,
    /// Zero curvature: the tangent point is itself stationary for the field.
    Degenerate,
}

impl Visibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Visible => "visible",
            Visibility::Invisible => "invisible",
            Visibility::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPointRecord {
    pub location: State,
    pub field: PsiMode,
    pub visibility: Visibility,
    /// `d^2 x / dt^2` along the field at the tangent point.
    pub curvature: f64,
}

/// Second time derivative of `x` along `mode` at `(x, y)`.
pub fn prey_acceleration(params: &ModelParams, mode: PsiMode, x: f64, y: f64) -> f64 {
    let f = params.field(mode, x, y);
    let j = params.field_jacobian(mode, x, y);
    j[0][0] * f[0] + j[0][1] * f[1]
}

/// The two tangent points `(S, y_upper)` and `(S, y_lower)` with visibility.
///
/// A tangent point of `F_S1` is visible when the grazing orbit curves back into
/// `x < S` (negative prey acceleration); for `F_S2` when it curves into `x > S`.
/// Points with non-positive predator density are omitted.
pub fn tangent_points(params: &ModelParams) -> Vec<TangentPointRecord> {
    if !params.has_sliding_segment() {
        return Vec::new();
    }
    let b = sliding_bounds(params);
    let s = params.threshold();
    let mut out = Vec::new();
    for (mode, y) in [(PsiMode::NonHarvest, b.upper), (PsiMode::Harvest, b.lower)] {
        if y <= 0.0 {
            continue;
        }
        let curvature = prey_acceleration(params, mode, s, y);
        let scale = params.r1() * s * params.r1();
        let visibility = if curvature.abs() <= 1e-12 * scale.max(1.0) {
            Visibility::Degenerate
        } else {
            let into_own_region = match mode {
                PsiMode::NonHarvest => curvature < 0.0,
                PsiMode::Harvest => curvature > 0.0,
            };
            if into_own_region {
                Visibility::Visible
            } else {
                Visibility::Invisible
            }
        };
        out.push(TangentPointRecord {
            location: State { x: s, y },
            field: mode,
            visibility,
            curvature,
        });
    }
    out
}

/// Every equilibrium-like object of the Filippov system at the given parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCatalog {
    pub axial: Vec<EquilibriumRecord>,
    pub interior: Vec<EquilibriumRecord>,
    pub pseudo: Option<EquilibriumRecord>,
    pub boundary: Vec<EquilibriumRecord>,
    pub tangent: Vec<TangentPointRecord>,
}

impl EquilibriumCatalog {
    /// Regular interior equilibria and an existing pseudo-equilibrium: the
    /// candidates a trajectory may settle on.
    pub fn attractor_candidates(&self) -> Vec<EquilibriumRecord> {
        let mut out: Vec<_> = self
            .interior
            .iter()
            .filter(|r| r.is_regular())
            .copied()
            .collect();
        out.extend(self.axial.iter().filter(|r| r.is_regular()).copied());
        out.extend(self.pseudo);
        out
    }

    pub fn interior_of(&self, mode: PsiMode) -> impl Iterator<Item = &EquilibriumRecord> {
        self.interior
            .iter()
            .filter(move |r| r.mode == EquilibriumMode::Field(mode))
    }
}

pub fn catalog(params: &ModelParams) -> EquilibriumCatalog {
    let mut axial = Vec::new();
    let mut interior = Vec::new();
    for mode in PsiMode::ALL {
        axial.extend(crate::model::semi_trivial_equilibria(params, mode));
        interior.extend(interior_equilibria(params, mode).records);
    }
    let pseudo = crate::sliding::pseudo_equilibrium(params)
        .ok()
        .and_then(|p| p.record);
    EquilibriumCatalog {
        axial,
        interior,
        pseudo,
        boundary: boundary_equilibria(params),
        tangent: tangent_points(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eval_field;

    fn a1() -> ModelParams {
        ModelParams::preset_a1()
    }

    #[test]
    fn repeated_real_eigenvalue_has_no_imaginary_part() {
        let eig = eigenvalues([[0.7, 0.0], [0.0, 0.7]]);
        assert_eq!(eig, [Complex64::new(0.7, 0.0); 2]);
        let rot = eigenvalues([[0.0, -2.0], [2.0, 0.0]]);
        assert_eq!(rot[1], Complex64::new(0.0, 2.0));
    }

    fn single(params: &ModelParams, mode: PsiMode) -> EquilibriumRecord {
        let eqs = interior_equilibria(params, mode);
        assert_eq!(eqs.records.len(), 1, "{eqs:?}");
        eqs.records[0]
    }

    #[test]
    fn a1_interior_equilibria_match_reported_values() {
        let e1 = single(&a1(), PsiMode::NonHarvest);
        assert!((e1.location.x - 0.4005).abs() < 1e-3 && (e1.location.y - 1.6917).abs() < 1e-3);
        let e2 = single(&a1(), PsiMode::Harvest);
        assert!((e2.location.x - 0.1416).abs() < 1e-3 && (e2.location.y - 1.3856).abs() < 1e-3);
        for (rec, mode) in [(e1, PsiMode::NonHarvest), (e2, PsiMode::Harvest)] {
            assert!(eval_field(rec.location, &a1(), mode).unwrap().norm() < 1e-12);
            let c = cubic_coefficients(&a1(), mode);
            assert!(c.eval(rec.location.x).abs() < 1e-9 * c.a0.abs().max(1.0));
            assert!(c.descartes_unique());
        }
    }

    #[test]
    fn a1_coefficients_by_hand() {
        // psi = 0: a0 = 2*1.5*0.6*0.8*0.8 - 2*0.8*0.9
        let c = cubic_coefficients(&a1(), PsiMode::NonHarvest);
        assert!((c.a0 - (-0.288)).abs() < 1e-12);
        assert!((c.a3 - 0.9 * 0.8 * 0.16 * 0.64).abs() < 1e-15);
    }

    #[test]
    fn full_refuge_limit_degenerates_toward_linear() {
        let p = a1().with("m", 1.0 - 1e-12).unwrap();
        for mode in PsiMode::ALL {
            let c = cubic_coefficients(&p, mode);
            let om = 1.0 - p.m();
            assert!(c.a3 > 0.0 && c.a3 < 1e-20);
            assert!(c.a2 > 0.0 && (c.a2 - 2.0 * p.r1() * p.r2() * p.b() * om).abs() < 1e-20);
        }
    }

    #[test]
    fn placement_across_threshold() {
        let cases = [
            (0.1, Placement::Virtual, Placement::Regular),
            (0.25, Placement::Virtual, Placement::Virtual),
            (0.7, Placement::Regular, Placement::Virtual),
        ];
        for (s, p1, p2) in cases {
            let p = a1().with_threshold(s).unwrap();
            assert_eq!(single(&p, PsiMode::NonHarvest).placement, p1, "S = {s}");
            assert_eq!(single(&p, PsiMode::Harvest).placement, p2, "S = {s}");
        }
        let rec = single(&a1(), PsiMode::Harvest);
        let at = a1().with_threshold(rec.location.x).unwrap();
        assert_eq!(
            classify_equilibrium(rec, &at).placement,
            Placement::OnBoundary
        );
    }

    #[test]
    fn jacobian_signs_and_stability() {
        for mode in PsiMode::ALL {
            let e = single(&a1(), mode);
            let j = jacobian(e.location, &a1(), mode).unwrap();
            let tr = j[0][0] + j[1][1];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            assert!(tr < 0.0 && det > 0.0, "{mode}: {j:?}");
            assert!(j[0][1] < 0.0 && j[1][0] > 0.0);
            assert_eq!(e.stability, Stability::Stable);
        }
        assert!(matches!(
            jacobian(
                State {
                    x: 0.4005,
                    y: 1.6917
                },
                &a1(),
                PsiMode::NonHarvest
            ),
            Err(Error::NotAnEquilibrium { .. })
        ));
    }

    #[test]
    fn stability_conditions() {
        let e = single(&a1(), PsiMode::NonHarvest);
        assert!(local_stability_condition(e.location, &a1()));
        let a2 = ModelParams::preset_a2();
        let e = single(&a2, PsiMode::NonHarvest);
        assert!(global_stability_condition(e.location, &a2));
        assert!(local_stability_condition(e.location, &a2));
        let p = a1().with("m", 1.0 - 1e-12).unwrap();
        assert!(local_stability_condition(State { x: 1.0, y: 100.0 }, &p));
    }

    #[test]
    fn boundary_equilibria_at_collisions() {
        assert!(boundary_equilibria(&a1()).is_empty());
        let x2 = single(&a1(), PsiMode::Harvest).location.x;
        let b = boundary_equilibria(&a1().with_threshold(x2).unwrap());
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].mode, EquilibriumMode::Field(PsiMode::Harvest));
        let x1 = single(&a1(), PsiMode::NonHarvest).location.x;
        let b = boundary_equilibria(&a1().with_threshold(x1).unwrap());
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].mode, EquilibriumMode::Field(PsiMode::NonHarvest));
        assert!((b[0].location.y - 1.6917).abs() < 1e-3);
    }

    #[test]
    fn boundary_conditions_at_four_digit_thresholds() {
        // The collision thresholds are known to four digits; at that resolution
        // the condition residual is O(1e-5) and needs a matching tolerance.
        let b = boundary_equilibria_with_tolerance(&a1().with_threshold(0.1416).unwrap(), 1e-3);
        assert!(b
            .iter()
            .any(|r| r.mode == EquilibriumMode::Field(PsiMode::Harvest)));
        let b = boundary_equilibria_with_tolerance(&a1().with_threshold(0.4005).unwrap(), 1e-3);
        assert!(b
            .iter()
            .any(|r| r.mode == EquilibriumMode::Field(PsiMode::NonHarvest)));
        assert!(boundary_equilibria_with_tolerance(&a1(), 1e-3).is_empty());
    }

    fn visibility(s: f64) -> (Visibility, Visibility) {
        let t = tangent_points(&a1().with_threshold(s).unwrap());
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].field, PsiMode::NonHarvest);
        (t[0].visibility, t[1].visibility)
    }

    #[test]
    fn tangent_visibility_through_the_threshold_range() {
        use Visibility::*;
        assert_eq!(visibility(0.1), (Invisible, Visible));
        assert_eq!(visibility(0.25), (Invisible, Invisible));
        assert_eq!(visibility(0.7), (Visible, Invisible));
        let t = tangent_points(&ModelParams::preset_a2());
        assert!(t.iter().all(|t| t.visibility == Visible));
    }

    #[test]
    fn tangent_visibility_matches_short_integration() {
        // Classical RK4 for 1e-3 time units from each tangent point.
        fn rk4(p: &ModelParams, mode: PsiMode, mut z: [f64; 2], t_end: f64) -> [f64; 2] {
            let n = 100;
            let h = t_end / n as f64;
            for _ in 0..n {
                let k1 = p.field(mode, z[0], z[1]);
                let k2 = p.field(mode, z[0] + 0.5 * h * k1[0], z[1] + 0.5 * h * k1[1]);
                let k3 = p.field(mode, z[0] + 0.5 * h * k2[0], z[1] + 0.5 * h * k2[1]);
                let k4 = p.field(mode, z[0] + h * k3[0], z[1] + h * k3[1]);
                for i in 0..2 {
                    z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
            z
        }
        for s in [0.1, 0.25, 0.7] {
            let p = a1().with_threshold(s).unwrap();
            for t in tangent_points(&p) {
                let end = rk4(&p, t.field, [t.location.x, t.location.y], 1e-3);
                let stays_in_s1 = end[0] < s;
                let visible = match t.field {
                    PsiMode::NonHarvest => stays_in_s1,
                    PsiMode::Harvest => !stays_in_s1,
                };
                assert_eq!(
                    visible,
                    t.visibility == Visibility::Visible,
                    "S = {s}, {t:?}"
                );
            }
        }
    }

    #[test]
    fn catalog_a2_bistable() {
        let c = catalog(&ModelParams::preset_a2());
        let cands = c.attractor_candidates();
        assert!(cands
            .iter()
            .any(|r| r.mode == EquilibriumMode::Field(PsiMode::NonHarvest)));
        assert!(cands
            .iter()
            .any(|r| r.mode == EquilibriumMode::Field(PsiMode::Harvest)));
        assert_eq!(c.pseudo.unwrap().stability, Stability::Unstable);
    }

    #[test]
    fn eigenvalues_of_known_matrices() {
        let e = eigenvalues([[0.0, 1.0], [-1.0, 0.0]]);
        assert_eq!(e[0].re, 0.0);
        assert_eq!(e[1].im.abs(), 1.0);
        let e = eigenvalues([[-1.0, 0.0], [0.0, -3.0]]);
        assert_eq!((e[0].re, e[1].re), (-3.0, -1.0));
    }
}
