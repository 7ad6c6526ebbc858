//! Real roots of polynomials up to degree three.
//!
//! Closed-form (Cardano / trigonometric) evaluation followed by Newton polishing
//! against the original coefficients. Leading coefficients that are negligible
//! relative to the rest drop the degree; the roots lost that way have magnitude
//! beyond ~1e12 times the coefficient ratio and are never physical here.

use std::f64::consts::PI;

const DEGENERATE_LEADING: f64 = 1e-14;
const MAX_POLISH: usize = 8;

/// Evaluates `a3 x^3 + a2 x^2 + a1 x + a0`.
#[inline]
pub fn eval_cubic(c: [f64; 4], x: f64) -> f64 {
    let [a3, a2, a1, a0] = c;
    ((a3 * x + a2) * x + a1) * x + a0
}

#[inline]
fn eval_cubic_derivative(c: [f64; 4], x: f64) -> f64 {
    let [a3, a2, a1, _] = c;
    (3.0 * a3 * x + 2.0 * a2) * x + a1
}

/// All distinct real roots of `a3 x^3 + a2 x^2 + a1 x + a0`, ascending.
///
/// Coefficients are given highest degree first.
pub fn real_roots_cubic(c: [f64; 4]) -> Vec<f64> {
    let [a3, a2, a1, a0] = c;
    let scale = a2.abs().max(a1.abs()).max(a0.abs());
    let mut roots = if a3.abs() <= DEGENERATE_LEADING * scale {
        real_roots_quadratic(a2, a1, a0)
    } else {
        cubic_closed_form(a2 / a3, a1 / a3, a0 / a3)
    };
    for r in roots.iter_mut() {
        *r = polish(c, *r);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}

/// Real roots of `a x^2 + b x + c`, falling back to linear when `a` is negligible.
pub fn real_roots_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = b.abs().max(c.abs());
    if a.abs() <= DEGENERATE_LEADING * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // Tangent double roots can land a hair below zero.
        if disc > -1e-14 * b * b {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    let mut r = vec![q / a, c / q];
    r.sort_by(|a, b| a.total_cmp(b));
    r
}

/// Monic cubic `x^3 + a x^2 + b x + c`.
fn cubic_closed_form(a: f64, b: f64, c: f64) -> Vec<f64> {
    // Depressed form t^3 + p t + q with x = t - a/3.
    let shift = a / 3.0;
    let p = b - a * shift;
    let q = c + shift * (2.0 * shift * shift - b);
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if p == 0.0 && q == 0.0 {
        return vec![-shift];
    }
    if disc > 0.0 {
        let u = (-half_q - half_q.signum() * disc.sqrt()).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - third_p / u };
        vec![t - shift]
    } else {
        // Three real roots (two may coincide).
        let rho = (-third_p).sqrt();
        let cos_arg = (-half_q / (rho * rho * rho)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        (0..3)
            .map(|k| 2.0 * rho * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}

/// Newton iterations on the full cubic, kept only while they reduce the residual.
fn polish(c: [f64; 4], mut x: f64) -> f64 {
    let mut fx = eval_cubic(c, x);
    for _ in 0..MAX_POLISH {
        if fx == 0.0 {
            break;
        }
        let d = eval_cubic_derivative(c, x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        let f_next = eval_cubic(c, next);
        if !(f_next.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = f_next;
    }
    x
}
