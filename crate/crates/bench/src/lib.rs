//! Seeded inputs shared by the benchmarks in `benches/`.

use ptolemy_core::filling::FillingPoint;
use ptolemy_core::{Model, OrientedLine};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xbe9c)
}

pub fn points(m: Model, n: usize, r: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| m.random_point(r, 1.0)).collect()
}

pub fn line(m: Model, r: &mut ChaCha8Rng) -> OrientedLine {
    OrientedLine::new(m, m.random_point(r, 1.0), m.random_direction(r)).expect("random line")
}

pub fn filling_point(m: Model, r: &mut ChaCha8Rng) -> FillingPoint {
    let h = 0.2 + 1.8 * r.random::<f64>();
    FillingPoint::new(m, m.random_point(r, 1.0), h).expect("random filling point")
}

/// The model frame through the origin.
pub fn frame(m: Model) -> Vec<OrientedLine> {
    m.horizontal_frame().into_iter().map(|v| OrientedLine::new(m, m.origin(), v).expect("frame line")).collect()
}
