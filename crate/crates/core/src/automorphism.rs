//! Möbius automorphisms of the two models as words in primitive generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::point::MPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    /// Left multiplication `x ↦ p·x`.
    Translate(Vec<f64>),
    /// `δ_λ`, λ > 0.
    Dilate(f64),
    /// Row-major real matrix on the horizontal coordinates.
    Rotate(Vec<f64>),
    /// The unit space inversion swapping `0` and `∞`.
    Invert,
}

/// A composable Möbius map; generators are applied first to last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Automorphism {
    pub model: Model,
    pub word: Vec<Generator>,
}

impl Automorphism {
    pub fn identity(model: Model) -> Self {
        Automorphism { model, word: Vec::new() }
    }

    pub fn from_generator(model: Model, g: Generator) -> Self {
        Automorphism { model, word: vec![g] }
    }

    pub fn translate(model: Model, p: &[f64]) -> Self {
        Self::from_generator(model, Generator::Translate(p.to_vec()))
    }

    pub fn dilate(model: Model, lambda: f64) -> Self {
        Self::from_generator(model, Generator::Dilate(lambda))
    }

    pub fn rotate(model: Model, matrix: Vec<f64>) -> Self {
        Self::from_generator(model, Generator::Rotate(matrix))
    }

    pub fn unit_inversion(model: Model) -> Self {
        Self::from_generator(model, Generator::Invert)
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &Automorphism) -> Self {
        self.word.extend(next.word.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        let word = self
            .word
            .iter()
            .rev()
            .map(|g| match g {
                Generator::Translate(p) => Generator::Translate(self.model.group_inv(p)),
                Generator::Dilate(l) => Generator::Dilate(1.0 / l),
                Generator::Rotate(m) => {
                    let h = self.model.horizontal_dim();
                    let mut t = vec![0.0; h * h];
                    for i in 0..h {
                        for j in 0..h {
                            t[j * h + i] = m[i * h + j];
                        }
                    }
                    Generator::Rotate(t)
                }
                Generator::Invert => Generator::Invert,
            })
            .collect();
        Automorphism { model: self.model, word }
    }

    /// `g ∘ self ∘ g⁻¹`, the map `self` transported by `g`.
    pub fn conjugated_by(&self, g: &Automorphism) -> Self {
        g.inverse().then(self).then(g)
    }

    pub fn apply(&self, p: &MPoint) -> MPoint {
        let model = self.model;
        let mut cur = p.clone();
        for g in &self.word {
            cur = match (g, cur) {
                (Generator::Invert, c) => model.unit_inversion(&c),
                (_, MPoint::Infinity) => MPoint::Infinity,
                (Generator::Translate(t), MPoint::Finite(c)) => MPoint::Finite(model.mul(t, &c)),
                (Generator::Dilate(l), MPoint::Finite(c)) => MPoint::Finite(model.dilate(*l, &c)),
                (Generator::Rotate(m), MPoint::Finite(c)) => MPoint::Finite(model.rotate(m, &c)),
            };
        }
        cur
    }

    pub fn apply_finite(&self, p: &[f64]) -> MPoint {
        self.apply(&MPoint::Finite(p.to_vec()))
    }
}

/// Unit inversion centred at a finite point `w`: the involution `T_w ∘ φ₀ ∘ T_w⁻¹`.
///
/// It sends `w ↦ ∞` and pulls the model metric back to the inverted metric
/// `d(x,y)/(d(w,x)d(w,y))`, so it identifies `(X_w, d_w)` with `(X_∞, d)`.
pub fn unit_inversion_at(model: Model, w: &[f64]) -> Automorphism {
    Automorphism::translate(model, &model.group_inv(w))
        .then(&Automorphism::unit_inversion(model))
        .then(&Automorphism::translate(model, w))
}

/// Chart for `X_ω`: an automorphism carrying `ω` to the model's `∞` and the
/// unit-scale metric with `ω` infinitely remote to the model metric.
pub fn chart_at(model: Model, omega: &MPoint) -> Automorphism {
    match omega {
        MPoint::Infinity => Automorphism::identity(model),
        MPoint::Finite(w) => unit_inversion_at(model, w),
    }
}

/// A space inversion of `X` given in half-space coordinates relative to `ω`.
///
/// `radius` is measured in the metric of `X_ω` normalised as in
/// [`chart_at`] (the model metric when `ω = ∞`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceInversion {
    pub model: Model,
    pub omega: MPoint,
    pub base: MPoint,
    pub radius: f64,
}

impl SpaceInversion {
    pub fn new(model: Model, omega: MPoint, base: MPoint, radius: f64) -> Result<Self> {
        model.check_point(&omega)?;
        model.check_point(&base)?;
        if omega == base {
            return Err(Error::DegenerateInput("base coincides with omega".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::DegenerateInput(format!("radius must be positive, got {radius}")));
        }
        Ok(SpaceInversion { model, omega, base, radius })
    }

    /// Inversion about a finite base with `ω = ∞`.
    pub fn at_infinity(model: Model, base: &[f64], radius: f64) -> Result<Self> {
        Self::new(model, MPoint::Infinity, MPoint::Finite(base.to_vec()), radius)
    }

    /// The map as an automorphism word.
    pub fn to_automorphism(&self) -> Automorphism {
        let model = self.model;
        let chart = chart_at(model, &self.omega);
        let b = chart.apply(&self.base);
        let b = b.expect_finite();
        let r = self.radius;
        let core = Automorphism::translate(model, &model.group_inv(b))
            .then(&Automorphism::dilate(model, 1.0 / r))
            .then(&Automorphism::unit_inversion(model))
            .then(&Automorphism::dilate(model, r))
            .then(&Automorphism::translate(model, b));
        // the chart is an involution, so conjugation is chart ∘ core ∘ chart
        chart.clone().then(&core).then(&chart)
    }

    pub fn apply(&self, x: &MPoint) -> MPoint {
        self.to_automorphism().apply(x)
    }
}

/// Applies an s-inversion.
pub fn s_inversion_apply(phi: &SpaceInversion, x: &MPoint) -> MPoint {
    phi.apply(x)
}

/// Homothety of `X_ω` with centre `o` and coefficient `λ`.
pub fn homothety(model: Model, omega: &MPoint, o: &MPoint, lambda: f64) -> Result<Automorphism> {
    if !(lambda > 0.0) {
        return Err(Error::DegenerateInput(format!("homothety coefficient must be positive, got {lambda}")));
    }
    if omega == o {
        return Err(Error::DegenerateInput("homothety centre coincides with omega".into()));
    }
    let chart = chart_at(model, omega);
    let c = chart.apply(o);
    let c = c.expect_finite();
    let core = Automorphism::translate(model, &model.group_inv(c))
        .then(&Automorphism::dilate(model, lambda))
        .then(&Automorphism::translate(model, c));
    Ok(chart.clone().then(&core).then(&chart))
}

/// The shift of `X_ω` taking `x` to `x′`: left translation by `x′·x⁻¹` in the chart.
pub fn shift(model: Model, omega: &MPoint, x: &MPoint, x_prime: &MPoint) -> Result<Automorphism> {
    if x == omega || x_prime == omega {
        return Err(Error::DegenerateInput("shift endpoints must lie in X_omega".into()));
    }
    let chart = chart_at(model, omega);
    let a = chart.apply(x);
    let b = chart.apply(x_prime);
    let g = model.mul(b.expect_finite(), &model.group_inv(a.expect_finite()));
    let core = Automorphism::translate(model, &g);
    Ok(chart.clone().then(&core).then(&chart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &MPoint, b: &MPoint, tol: f64) -> bool {
        match (a, b) {
            (MPoint::Infinity, MPoint::Infinity) => true,
            (MPoint::Finite(x), MPoint::Finite(y)) => {
                x.iter().zip(y).all(|(u, v)| (u - v).abs() <= tol * (1.0 + u.abs().max(v.abs())))
            }
            _ => false,
        }
    }

    #[test]
    fn euclidean_unit_inversion_formula() {
        let e = Model::euclidean(2);
        let phi = SpaceInversion::at_infinity(e, &[0.0, 0.0], 1.0).unwrap();
        let y = phi.apply(&MPoint::finite(vec![2.0, 0.0]));
        assert!(close(&y, &MPoint::finite(vec![-0.5, 0.0]), 1e-15));
        assert_eq!(phi.apply(&MPoint::Infinity), MPoint::finite(vec![0.0, 0.0]));
    }

    #[test]
    fn inversions_are_involutions_swapping_omega_and_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for model in [Model::euclidean(3), Model::heisenberg(1), Model::heisenberg(2)] {
            for omega in [MPoint::Infinity, MPoint::Finite(model.random_point(&mut rng, 1.0))] {
                let base = MPoint::Finite(model.random_point(&mut rng, 1.0));
                let phi = SpaceInversion::new(model, omega.clone(), base.clone(), 0.7).unwrap();
                assert!(close(&phi.apply(&omega), &base, 1e-9));
                assert!(close(&phi.apply(&base), &omega, 1e-9));
                for _ in 0..50 {
                    let x = MPoint::Finite(model.random_point(&mut rng, 1.0));
                    assert!(close(&phi.apply(&phi.apply(&x)), &x, 1e-8));
                }
            }
        }
    }

    #[test]
    fn heisenberg_inversion_induced_metric() {
        let h = Model::heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = h.random_point(&mut rng, 1.0);
        let r = 1.3;
        let phi = SpaceInversion::at_infinity(h, &b, r).unwrap();
        for _ in 0..100 {
            let x = h.random_point(&mut rng, 1.0);
            let y = h.random_point(&mut rng, 1.0);
            let fx = phi.apply(&MPoint::Finite(x.clone()));
            let fy = phi.apply(&MPoint::Finite(y.clone()));
            let lhs = h.dist(&fx, &fy);
            let rhs = r * r * h.dist_finite(&x, &y) / (h.dist_finite(&x, &b) * h.dist_finite(&y, &b));
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn homothety_scales_and_fixes_centre() {
        let h = Model::heisenberg(1);
        let o = MPoint::finite(vec![0.2, -0.4, 0.9]);
        let g = homothety(h, &MPoint::Infinity, &o, 3.0).unwrap();
        assert!(close(&g.apply(&o), &o, 1e-14));
        let x = MPoint::finite(vec![1.0, 0.5, -0.3]);
        let y = MPoint::finite(vec![-0.7, 0.1, 0.4]);
        let ratio = h.dist(&g.apply(&x), &g.apply(&y)) / h.dist(&x, &y);
        assert!((ratio - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shift_hits_target() {
        let h = Model::heisenberg(2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = MPoint::Finite(h.random_point(&mut rng, 1.0));
        let y = MPoint::Finite(h.random_point(&mut rng, 1.0));
        let g = shift(h, &MPoint::Infinity, &x, &y).unwrap();
        assert!(close(&g.apply(&x), &y, 1e-13));
        assert_eq!(g.apply(&MPoint::Infinity), MPoint::Infinity);
    }

    #[test]
    fn inverse_undoes_word() {
        let h = Model::heisenberg(1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Automorphism::translate(h, &[0.3, 0.1, -0.2])
            .then(&Automorphism::rotate(h, h.random_rotation(&mut rng)))
            .then(&Automorphism::unit_inversion(h))
            .then(&Automorphism::dilate(h, 2.0));
        let x = MPoint::finite(vec![0.5, -0.6, 0.2]);
        assert!(close(&g.inverse().apply(&g.apply(&x)), &x, 1e-12));
    }
}
