//! Sampling helpers shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use ptolemy_core::automorphism::{homothety, shift, Automorphism, SpaceInversion};
use ptolemy_core::model::FnCurve;
use ptolemy_core::{MPoint, Model, OrientedLine, PtolemyCircle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(m: Model, r: &mut ChaCha8Rng) -> MPoint {
    MPoint::Finite(m.random_point(r, 1.0))
}

pub fn line(m: Model, r: &mut ChaCha8Rng) -> OrientedLine {
    let p = m.random_point(r, 1.0);
    let v = m.random_direction(r);
    OrientedLine::new(m, p, v).unwrap()
}

pub fn line_through(m: Model, p: &[f64], r: &mut ChaCha8Rng) -> OrientedLine {
    OrientedLine::new(m, p.to_vec(), m.random_direction(r)).unwrap()
}

pub fn radius(r: &mut ChaCha8Rng) -> f64 {
    0.2 + 1.8 * r.random::<f64>()
}

pub fn s_inversion(m: Model, r: &mut ChaCha8Rng) -> Automorphism {
    let base = m.random_point(r, 1.0);
    SpaceInversion::at_infinity(m, &base, radius(r)).unwrap().to_automorphism()
}

/// An s-inversion over a finite infinitely remote point.
pub fn s_inversion_finite_omega(m: Model, r: &mut ChaCha8Rng) -> Automorphism {
    let omega = point(m, r);
    let base = point(m, r);
    SpaceInversion::new(m, omega, base, radius(r)).unwrap().to_automorphism()
}

pub fn homothety_map(m: Model, r: &mut ChaCha8Rng) -> Automorphism {
    let o = point(m, r);
    homothety(m, &MPoint::Infinity, &o, 0.25 + 3.0 * r.random::<f64>()).unwrap()
}

pub fn shift_map(m: Model, r: &mut ChaCha8Rng) -> Automorphism {
    let x = point(m, r);
    let y = point(m, r);
    shift(m, &MPoint::Infinity, &x, &y).unwrap()
}

/// A Euclidean round circle in a random plane of `R^n`, `n ≥ 2`.
pub fn euclidean_circle(n: usize, r: &mut ChaCha8Rng) -> FnCurve<impl Fn(f64) -> MPoint> {
    let m = Model::euclidean(n);
    let c = m.random_point(r, 1.0);
    let rad = radius(r);
    let rot = m.random_rotation(r);
    let col = |j: usize| -> Vec<f64> { (0..n).map(|i| rot[i * n + j]).collect() };
    let (e1, e2) = (col(0), col(1));
    FnCurve {
        model: m,
        f: move |u: f64| {
            let (s, co) = (2.0 * PI * u).sin_cos();
            MPoint::Finite((0..n).map(|i| c[i] + rad * (co * e1[i] + s * e2[i])).collect())
        },
    }
}

/// A round circle in the real plane `{y = 0, t = 0}` of the Heisenberg group
/// with `m = 2`, moved by a random left translation and unitary rotation.
pub fn heisenberg_r_circle(r: &mut ChaCha8Rng) -> FnCurve<impl Fn(f64) -> MPoint> {
    let h = Model::heisenberg(2);
    let c = [r.random::<f64>() - 0.5, r.random::<f64>() - 0.5];
    let rad = radius(r);
    let g = Automorphism::rotate(h, h.random_rotation(r)).then(&Automorphism::translate(h, &h.random_point(r, 1.0)));
    FnCurve {
        model: h,
        f: move |u: f64| {
            let (s, co) = (2.0 * PI * u).sin_cos();
            g.apply(&MPoint::finite(vec![c[0] + rad * co, 0.0, c[1] + rad * s, 0.0, 0.0]))
        },
    }
}

/// Image of a random line under a random s-inversion.
pub fn inverted_line(m: Model, r: &mut ChaCha8Rng) -> PtolemyCircle {
    let l = line(m, r);
    PtolemyCircle::image(l, s_inversion(m, r))
}

pub fn sorted_params(r: &mut ChaCha8Rng) -> [f64; 4] {
    let mut u: [f64; 4] = std::array::from_fn(|_| r.random::<f64>());
    u.sort_by(f64::total_cmp);
    u
}

/// Busemann function of the line through `p` with horizontal direction `v`,
/// normalised at `p`, from the limit of the gauge expansion:
/// `b(x) = −⟨x_z − p_z, v⟩` in both models.
pub fn busemann_oracle(m: Model, p: &[f64], v: &[f64], x: &[f64]) -> f64 {
    let h = m.horizontal_dim();
    -(0..h).map(|i| (x[i] - p[i]) * v[i]).sum::<f64>()
}
