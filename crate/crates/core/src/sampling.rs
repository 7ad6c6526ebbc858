//! Random parameter draws for property suites and randomized drivers.

use rand::Rng;

use crate::model::{ModelParams, ParamValues};

/// Draws a valid parameter set from broad ecological ranges.
///
/// The threshold is drawn in `(0.05 k1, 0.95 k1)` so the sliding segment is
/// never empty.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> ModelParams {
    let k1 = rng.gen_range(0.5..10.0);
    let v = ParamValues {
        r1: rng.gen_range(0.2..3.0),
        k1,
        m: rng.gen_range(0.05..0.95),
        p: rng.gen_range(0.05..1.5),
        b: rng.gen_range(0.01..1.0),
        q1: rng.gen_range(0.01..0.5),
        effort: rng.gen_range(0.5..2.0),
        r2: rng.gen_range(0.2..3.0),
        k2: rng.gen_range(0.5..10.0),
        e: rng.gen_range(0.1..1.0),
        q2: rng.gen_range(0.01..0.5),
        threshold: rng.gen_range(0.05..0.95) * k1,
    };
    ModelParams::new(v).expect("sampling ranges produce valid parameters")
}

/// `base` with every rate constant jittered by up to `spread` (relative).
pub fn perturbed_params<R: Rng + ?Sized>(
    base: &ModelParams,
    spread: f64,
    rng: &mut R,
) -> ModelParams {
    let mut v = base.values();
    for slot in [
        &mut v.r1,
        &mut v.k1,
        &mut v.p,
        &mut v.b,
        &mut v.q1,
        &mut v.effort,
        &mut v.r2,
        &mut v.k2,
        &mut v.e,
        &mut v.q2,
    ] {
        *slot *= 1.0 + rng.gen_range(-spread..spread);
    }
    v.m = (v.m * (1.0 + rng.gen_range(-spread..spread))).clamp(0.01, 0.99);
    ModelParams::new(v).expect("small perturbations of a valid set stay valid")
}
