//! Model-agnostic Möbius primitives: metrics of a structure, cross-ratio
//! triples, metric inversion and the Ptolemy predicates.
//!
//! Distances to the infinitely remote point are carried symbolically as a
//! finite factor together with a count of infinite factors, and products are
//! compared by that count before any floating-point arithmetic happens.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::point::MPoint;

/// A concrete metric of the canonical Möbius structure of a model.
///
/// With `omega = ∞` this is `scale · d₀` for the model metric `d₀`. With a
/// finite `omega = p` it is the inverted metric
/// `scale · d₀(x,y) / (d₀(p,x) d₀(p,y))`, for which the model's `∞` is an
/// ordinary point at distance `scale / d₀(p,x)` from `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRep {
    pub model: Model,
    pub omega: MPoint,
    pub scale: f64,
}

/// A distance `finite · ∞^inf` with `inf ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sym {
    finite: f64,
    inf: u8,
}

impl Sym {
    fn mul(self, o: Sym) -> Sym {
        Sym { finite: self.finite * o.finite, inf: self.inf + o.inf }
    }
}

/// Resolves symbolic products: those with fewer infinite factors than the
/// largest count vanish, the rest keep their finite part.
fn resolve<const N: usize>(p: [Sym; N]) -> [f64; N] {
    let top = p.iter().map(|s| s.inf).max().unwrap_or(0);
    p.map(|s| if s.inf == top { s.finite } else { 0.0 })
}

impl MetricRep {
    /// The model metric itself (`ω = ∞`, unit scale).
    pub fn standard(model: Model) -> Self {
        MetricRep { model, omega: MPoint::Infinity, scale: 1.0 }
    }

    pub fn new(model: Model, omega: MPoint, scale: f64) -> Result<Self> {
        model.check_point(&omega)?;
        if !omega.has_finite_coords() {
            return Err(Error::MixedInfinity);
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DegenerateInput(format!("metric scale must be positive, got {scale}")));
        }
        Ok(MetricRep { model, omega, scale })
    }

    fn check(&self, p: &MPoint) -> Result<()> {
        self.model.check_point(p)?;
        if !p.has_finite_coords() {
            return Err(Error::MixedInfinity);
        }
        Ok(())
    }

    fn sym(&self, x: &MPoint, y: &MPoint) -> Sym {
        let m = &self.model;
        let fin = |v: f64| Sym { finite: v, inf: 0 };
        if x == y {
            return fin(0.0);
        }
        if *x == self.omega || *y == self.omega {
            return Sym { finite: 1.0, inf: 1 };
        }
        match &self.omega {
            MPoint::Infinity => fin(self.scale * m.dist(x, y)),
            MPoint::Finite(p) => match (x, y) {
                (MPoint::Finite(a), MPoint::Finite(b)) => {
                    fin(self.scale * m.dist_finite(a, b) / (m.dist_finite(p, a) * m.dist_finite(p, b)))
                }
                (MPoint::Finite(a), MPoint::Infinity) | (MPoint::Infinity, MPoint::Finite(a)) => {
                    fin(self.scale / m.dist_finite(p, a))
                }
                (MPoint::Infinity, MPoint::Infinity) => fin(0.0),
            },
        }
    }

    /// Extended distance; `f64::INFINITY` when exactly one argument is `ω`.
    pub fn distance(&self, x: &MPoint, y: &MPoint) -> f64 {
        let s = self.sym(x, y);
        if s.inf > 0 {
            f64::INFINITY
        } else {
            s.finite
        }
    }

    /// Whether `x` is a point of `X_ω`.
    pub fn is_finite_point(&self, x: &MPoint) -> bool {
        *x != self.omega
    }
}

/// `distance(model, d, x, y)`.
pub fn distance(d: &MetricRep, x: &MPoint, y: &MPoint) -> f64 {
    d.distance(x, y)
}

/// An ordered quadruple `(x, y, z, u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadruple(pub [MPoint; 4]);

impl Quadruple {
    pub fn new(x: MPoint, y: MPoint, z: MPoint, u: MPoint) -> Self {
        Quadruple([x, y, z, u])
    }
}

/// No entry occurs three or four times.
pub fn is_admissible(q: &Quadruple) -> bool {
    q.0.iter().all(|p| q.0.iter().filter(|o| *o == p).count() < 3)
}

/// Normalised projective triple `(a : b : c)` with maximal entry `1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatioTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CrossRatioTriple {
    pub fn from_products(p: [f64; 3]) -> Result<Self> {
        let m = p[0].max(p[1]).max(p[2]);
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::DegenerateQuadruple);
        }
        Ok(CrossRatioTriple { a: p[0] / m, b: p[1] / m, c: p[2] / m })
    }

    pub fn entries(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Largest entrywise difference between normalised triples.
    pub fn deviation(&self, other: &CrossRatioTriple) -> f64 {
        self.entries().iter().zip(other.entries()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Largest excess of an entry over the sum of the other two.
    pub fn triangle_excess(&self) -> f64 {
        let [a, b, c] = self.entries();
        (a - b - c).max(b - a - c).max(c - a - b)
    }
}

fn validate(d: &MetricRep, q: &Quadruple) -> Result<()> {
    for p in &q.0 {
        d.check(p)?;
    }
    if !is_admissible(q) {
        return Err(Error::NonAdmissible);
    }
    Ok(())
}

/// The three products `(d(x,y)d(z,u), d(x,z)d(y,u), d(x,u)d(y,z))` after
/// resolving the infinity conventions.
pub fn crt_products(d: &MetricRep, q: &Quadruple) -> Result<[f64; 3]> {
    validate(d, q)?;
    let [x, y, z, u] = &q.0;
    Ok(resolve([
        d.sym(x, y).mul(d.sym(z, u)),
        d.sym(x, z).mul(d.sym(y, u)),
        d.sym(x, u).mul(d.sym(y, z)),
    ]))
}

pub fn crt(d: &MetricRep, q: &Quadruple) -> Result<CrossRatioTriple> {
    CrossRatioTriple::from_products(crt_products(d, q)?)
}

/// `⟨ω, x, y, ω′⟩ = |ωy|·|xω′| / (|ωx|·|yω′|)`.
///
/// `x = y` is allowed and yields `1`; every other coincidence is rejected.
pub fn scalar_cross_ratio(d: &MetricRep, omega: &MPoint, x: &MPoint, y: &MPoint, omega_p: &MPoint) -> Result<f64> {
    for p in [omega, x, y, omega_p] {
        d.check(p)?;
    }
    if omega == omega_p || omega == x || omega == y || omega_p == x || omega_p == y {
        return Err(Error::DegenerateQuadruple);
    }
    if x == y {
        return Ok(1.0);
    }
    let [num, den] = resolve([d.sym(omega, y).mul(d.sym(x, omega_p)), d.sym(omega, x).mul(d.sym(y, omega_p))]);
    Ok(num / den)
}

/// The metric `d_z(x,y) = r² d(x,y) / (d(z,x) d(z,y))` with `z` infinitely remote.
///
/// Inverting at `z = ω` gives `r²·d`.
pub fn metric_inversion(d: &MetricRep, z: &MPoint, r: f64) -> Result<MetricRep> {
    d.check(z)?;
    if !(r > 0.0) {
        return Err(Error::DegenerateInput(format!("inversion radius must be positive, got {r}")));
    }
    let m = d.model;
    let r2 = r * r;
    let scale = match (&d.omega, z) {
        _ if *z == d.omega => return Ok(MetricRep { scale: r2 * d.scale, ..d.clone() }),
        (MPoint::Infinity, _) | (_, MPoint::Infinity) => r2 / d.scale,
        (MPoint::Finite(p), MPoint::Finite(q)) => {
            let pq = m.dist_finite(p, q);
            r2 * pq * pq / d.scale
        }
    };
    Ok(MetricRep { model: m, omega: z.clone(), scale })
}

/// Entrywise triangle inequality of the cross-ratio triple, with slack
/// `tol` relative to the largest entry.
pub fn ptolemy_check(d: &MetricRep, q: &Quadruple, tol: f64) -> Result<bool> {
    Ok(crt(d, q)?.triangle_excess() <= tol)
}

/// `d(x,z)d(y,u) − d(x,y)d(z,u) − d(x,u)d(y,z)`: zero for cyclically ordered
/// points of a Ptolemy circle, nonpositive in any Ptolemy space.
pub fn ptolemy_equality_residual(d: &MetricRep, q: &Quadruple) -> Result<f64> {
    let [p_xy, p_xz, p_xu] = crt_products(d, q)?;
    Ok(p_xz - p_xy - p_xu)
}

/// The residual divided by the largest of the three products.
pub fn ptolemy_equality_relative(d: &MetricRep, q: &Quadruple) -> Result<f64> {
    let p = crt_products(d, q)?;
    let m = p[0].max(p[1]).max(p[2]);
    if !(m > 0.0) {
        return Err(Error::DegenerateQuadruple);
    }
    Ok((p[1] - p[0] - p[2]) / m)
}

/// Whether `x, y` lie on one sphere between `ω` and `ω′`, i.e. the first two
/// entries of `crt(ω, x, y, ω′)` agree.
pub fn same_sphere(d: &MetricRep, omega: &MPoint, omega_p: &MPoint, x: &MPoint, y: &MPoint, tol: f64) -> Result<bool> {
    if omega == omega_p {
        return Err(Error::DegenerateInput("sphere poles coincide".into()));
    }
    if [omega, omega_p].iter().any(|p| *p == x || *p == y) {
        return Err(Error::DegenerateInput("sphere point coincides with a pole".into()));
    }
    let t = crt(d, &Quadruple::new(omega.clone(), x.clone(), y.clone(), omega_p.clone()))?;
    Ok((t.a - t.b).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize) -> MetricRep {
        MetricRep::standard(Model::euclidean(n))
    }

    fn p(c: &[f64]) -> MPoint {
        MPoint::finite(c.to_vec())
    }

    #[test]
    fn admissibility() {
        let (x, y) = (p(&[0.0]), p(&[1.0]));
        assert!(!is_admissible(&Quadruple::new(x.clone(), x.clone(), x.clone(), y.clone())));
        assert!(is_admissible(&Quadruple::new(x.clone(), x.clone(), y.clone(), y.clone())));
        assert!(matches!(
            crt(&e(1), &Quadruple::new(x.clone(), x.clone(), x.clone(), y)),
            Err(Error::NonAdmissible)
        ));
    }

    #[test]
    fn unit_square_triple() {
        let q = Quadruple::new(p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[1.0, 1.0]), p(&[0.0, 1.0]));
        let t = crt(&e(2), &q).unwrap();
        // products: d(x,y)d(z,u)=1, d(x,z)d(y,u)=2, d(x,u)d(y,z)=1
        assert!((t.a - 0.5).abs() < 1e-15 && (t.b - 1.0).abs() < 1e-15 && (t.c - 0.5).abs() < 1e-15);
        assert!(ptolemy_equality_residual(&e(2), &q).unwrap().abs() < 1e-12);
    }

    #[test]
    fn infinity_conventions() {
        let d = e(1);
        let t = crt(&d, &Quadruple::new(p(&[0.0]), p(&[1.0]), MPoint::Infinity, MPoint::Infinity)).unwrap();
        assert_eq!(t.entries(), [0.0, 1.0, 1.0]);
        let t = crt(&d, &Quadruple::new(p(&[0.0]), p(&[1.0]), p(&[3.0]), MPoint::Infinity)).unwrap();
        let want = [1.0 / 3.0, 1.0, 2.0 / 3.0];
        for (a, b) in t.entries().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn ordered_line_with_infinity_is_ptolemy_equality() {
        let q = Quadruple::new(p(&[0.0]), p(&[1.0]), p(&[3.0]), MPoint::Infinity);
        assert!(ptolemy_equality_residual(&e(1), &q).unwrap().abs() < 1e-15);
    }

    #[test]
    fn non_concyclic_residual_negative() {
        let q = Quadruple::new(p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[1.0, 3.0]), p(&[0.0, 1.0]));
        assert!(ptolemy_equality_residual(&e(2), &q).unwrap() < -1e-3);
    }

    #[test]
    fn scalar_cross_ratio_examples() {
        let d = e(1);
        let v = scalar_cross_ratio(&d, &p(&[0.0]), &p(&[1.0]), &p(&[std::f64::consts::E]), &MPoint::Infinity).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(scalar_cross_ratio(&d, &p(&[0.0]), &p(&[2.0]), &p(&[2.0]), &p(&[5.0])).unwrap(), 1.0);
        assert!(scalar_cross_ratio(&d, &p(&[0.0]), &p(&[0.0]), &p(&[2.0]), &p(&[5.0])).is_err());
    }

    #[test]
    fn metric_inversion_value() {
        let dz = metric_inversion(&e(1), &p(&[0.0]), 1.0).unwrap();
        assert!((dz.distance(&p(&[1.0]), &p(&[2.0])) - 0.5).abs() < 1e-15);
        assert_eq!(dz.distance(&p(&[1.0]), &p(&[0.0])), f64::INFINITY);
        assert_eq!(dz.distance(&p(&[0.0]), &p(&[0.0])), 0.0);
        assert!((dz.distance(&p(&[4.0]), &MPoint::Infinity) - 0.25).abs() < 1e-15);
        let back = metric_inversion(&dz, &MPoint::Infinity, 1.0).unwrap();
        assert_eq!(back, e(1));
    }

    #[test]
    fn same_sphere_radii() {
        let d = e(1);
        assert!(same_sphere(&d, &MPoint::Infinity, &p(&[0.0]), &p(&[1.0]), &p(&[-1.0]), 1e-12).unwrap());
        assert!(!same_sphere(&d, &MPoint::Infinity, &p(&[0.0]), &p(&[1.0]), &p(&[-2.0]), 1e-12).unwrap());
        assert!(same_sphere(&d, &MPoint::Infinity, &p(&[0.0]), &p(&[1.0]), &p(&[1.0]), 1e-12).unwrap());
    }

    fn pt2() -> impl Strategy<Value = MPoint> {
        prop::collection::vec(-5.0f64..5.0, 2).prop_map(MPoint::Finite)
    }

    proptest! {
        #[test]
        fn scalar_cross_ratio_reciprocal(a in pt2(), b in pt2(), c in pt2(), w in pt2()) {
            let d = e(2);
            if let (Ok(r1), Ok(r2)) = (
                scalar_cross_ratio(&d, &a, &b, &c, &w),
                scalar_cross_ratio(&d, &a, &c, &b, &w),
            ) {
                prop_assert!((r1 * r2 - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn crt_agrees_across_metrics(a in pt2(), b in pt2(), c in pt2(), u in pt2(), w in pt2()) {
            let d = e(2);
            let q = Quadruple::new(a, b, c, u);
            prop_assume!(q.0.iter().all(|x| *x != w));
            let dw = metric_inversion(&d, &w, 1.7).unwrap();
            let t0 = crt(&d, &q).unwrap();
            let t1 = crt(&dw, &q).unwrap();
            prop_assert!(t0.deviation(&t1) < 1e-9);
        }

        #[test]
        fn euclidean_triples_are_ptolemy(a in pt2(), b in pt2(), c in pt2(), u in pt2()) {
            let q = Quadruple::new(a, b, c, u);
            prop_assert!(ptolemy_check(&e(2), &q, 1e-9).unwrap());
        }
    }
}
