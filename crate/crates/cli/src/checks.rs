//! The check registry. Each check draws its own samples and returns one
//! residual per sample; it passes when the largest residual is within
//! tolerance.

use std::f64::consts::PI;

use ptolemy_core::automorphism::{homothety, shift, Automorphism, SpaceInversion};
use ptolemy_core::filling::{
    common_line, endpoint_proximity_check, filling_asymptotic_check, gromov_product_check, hyp2_embed_check,
    line_geodesy_check, rho, rho_both, FillingPoint,
};
use ptolemy_core::geodesy::{
    arclength_defect, duality_check, first_variation_check, flatness_check, quadratic_excess_check, slope,
    BusemannFn, Fibration,
};
use ptolemy_core::mobius::ptolemy_equality_relative;
use ptolemy_core::model::FnCurve;
use ptolemy_core::numeric::{chart_distance, golden_min};
use ptolemy_core::zigzag::{
    busemann_affinity_check, orthogonalize, zigzag_limit, zigzag_slope_check, Orthogonalized, ZigzagSpec,
};
use ptolemy_core::{
    crt, metric_inversion, scalar_cross_ratio, Curve, MPoint, MetricRep, Model, OrientedLine, PtolemyCircle, Quadruple, Result,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Suite;

pub type Residuals = Result<Vec<f64>>;

pub struct Check {
    pub id: &'static str,
    pub suite: Suite,
    /// The identity under test, as a formula.
    pub anchor: &'static str,
    pub tol: f64,
    /// Requested samples are divided by this for expensive checks.
    pub cost: usize,
    pub applies: fn(Model) -> bool,
    pub run: fn(Model, usize, &mut ChaCha8Rng) -> Residuals,
}

impl Check {
    pub fn samples_for(&self, requested: usize) -> usize {
        requested.div_ceil(self.cost).max(1)
    }
}

fn any(_: Model) -> bool {
    true
}

fn euclidean(m: Model) -> bool {
    matches!(m, Model::Euclidean { .. })
}

fn heisenberg(m: Model) -> bool {
    matches!(m, Model::Heisenberg { .. })
}

/// Models with round circles through pairs of points joined by a line.
fn has_planar_circles(m: Model) -> bool {
    match m {
        Model::Euclidean { dim } => dim >= 2,
        Model::Heisenberg { m } => m >= 2,
    }
}

macro_rules! check {
    ($id:literal, $suite:ident, $anchor:literal, $tol:expr, $cost:expr, $applies:expr, $run:expr) => {
        Check {
            id: $id,
            suite: Suite::$suite,
            anchor: $anchor,
            tol: $tol,
            cost: $cost,
            applies: $applies,
            run: $run,
        }
    };
}

/// All checks in a fixed order; a check's position is its random stream.
pub fn registry() -> Vec<Check> {
    vec![
        check!("ptolemy.triangle", Ptolemy, "|xz|·|yu| ≤ |xy|·|zu| + |xu|·|yz|", 1e-9, 1, any, ptolemy_triangle),
        check!(
            "ptolemy.circle_equality",
            Ptolemy,
            "|xz|·|yu| = |xy|·|zu| + |xu|·|yz| for x, y, z, u in cyclic order on a circle",
            1e-9,
            1,
            any,
            ptolemy_circle_equality
        ),
        check!(
            "ptolemy.metric_inversion",
            Ptolemy,
            "d_z(x,y) = r²·d(x,y)/(d(z,x)·d(z,y)) keeps crt and the triangle inequality",
            1e-9,
            1,
            any,
            ptolemy_metric_inversion
        ),
        check!(
            "ptolemy.scalar_cross_ratio",
            Ptolemy,
            "⟨ω,x,y,ω′⟩·⟨ω,y,z,ω′⟩ = ⟨ω,x,z,ω′⟩",
            1e-10,
            1,
            any,
            ptolemy_scalar_cross_ratio
        ),
        check!(
            "ptolemy.same_sphere",
            Ptolemy,
            "crt(ω, x, y, ω′) = (1 : 1 : ∗) for x, y on a sphere between ω and ω′",
            1e-9,
            1,
            any,
            ptolemy_same_sphere
        ),
        check!("inversions.s_inversion", Inversions, "crt(φ(Q)) = crt(Q)", 1e-9, 1, any, inversions_s_inversion),
        check!("inversions.homothety", Inversions, "crt(h(Q)) = crt(Q)", 1e-9, 1, any, inversions_homothety),
        check!("inversions.shift", Inversions, "crt(η(Q)) = crt(Q)", 1e-9, 1, any, inversions_shift),
        check!(
            "inversions.involution",
            Inversions,
            "φ∘φ = id, |xb|·|φ(x)b| = r²",
            1e-9,
            1,
            any,
            inversions_involution
        ),
        check!(
            "duality.derivative",
            Duality,
            "b±(x) = ±(d/dt) ln d′(x, c(t)) at t = 0±",
            1e-5,
            4,
            any,
            duality_derivative
        ),
        check!("duality.flatness", Duality, "b⁺ + b⁻ = const", 1e-6, 4, any, duality_flatness),
        check!("duality.closed_form", Duality, "b(z,t) = −Re⟨z − z₀, v⟩", 1e-6, 4, any, duality_closed_form),
        check!("slope.symmetry", Slope, "slope(l; l′) = slope(l′; l)", 1e-6, 10, any, slope_symmetry),
        check!("slope.self", Slope, "slope(l; l) = −1", 1e-8, 10, any, slope_self),
        check!("slope.closed_form", Slope, "slope(l; l′) = −Re⟨u, v⟩", 1e-6, 10, any, slope_closed_form),
        check!(
            "slope.first_variation",
            Slope,
            "(d/dt) d′(l′(s), l(1/t)) at t = 0 equals slope(l′; l)·sign(s)",
            1e-5,
            10,
            any,
            slope_first_variation
        ),
        check!(
            "slope.quadratic_excess",
            Slope,
            "b⁺(x_t) + b⁻(y_t) ≤ 2αt − (1 − α²)t²/a",
            1e-8,
            20,
            has_planar_circles,
            slope_quadratic_excess
        ),
        check!(
            "slope.arclength",
            Slope,
            "(L − r)/r² → 0 along arcs of chord r → 0",
            1e-2,
            50,
            any,
            slope_arclength
        ),
        check!("fibration.lipschitz", Fibration, "|π(x)π(y)| ≤ |xy|", 1e-12, 1, any, fibration_lipschitz),
        check!(
            "fibration.line_isometry",
            Fibration,
            "|π(l(s))π(l(s′))| = |s − s′|",
            1e-9,
            1,
            any,
            fibration_line_isometry
        ),
        check!("fibration.k_line", Fibration, "d(F, F′) = |xx′|", 1e-9, 1, any, fibration_k_line),
        check!("zigzag.speed", Zigzag, "λ = √(Σ sᵢ²) for Σ sᵢ = 1", 1e-4, 100, any, zigzag_speed),
        check!("zigzag.slopes", Zigzag, "slope(γ; lᵢ) = −sᵢ/λ", 1e-4, 100, any, zigzag_slopes),
        check!(
            "zigzag.busemann_affine",
            Zigzag,
            "b(γ(t)) = βt, β = Σ αᵢsᵢ / Σ sᵢ",
            1e-6,
            100,
            any,
            zigzag_busemann_affine
        ),
        check!(
            "zigzag.orthogonalize_full",
            Zigzag,
            "Σ αᵢ² = 1 for a full orthogonal frame",
            1e-6,
            10,
            any,
            zigzag_orthogonalize_full
        ),
        check!(
            "zigzag.orthogonalize_partial",
            Zigzag,
            "slope(l⊥; lᵢ) = 0",
            1e-6,
            100,
            |m| m.horizontal_dim() >= 2,
            zigzag_orthogonalize_partial
        ),
        check!(
            "filling.euclidean_oracle",
            Filling,
            "cosh ρ = 1 + (|xy|² + (r − r′)²)/(2rr′)",
            1e-6,
            1,
            euclidean,
            filling_euclidean_oracle
        ),
        check!(
            "filling.inversion_roundtrip",
            Filling,
            "(base, r) ↦ φ ↦ (φ(ω), √(|xb|·|φ(x)b|))",
            1e-9,
            1,
            any,
            filling_inversion_roundtrip
        ),
        check!("filling.two_path", Filling, "ρ(s,t) = |ln⟨a, x_s, x_t, a′⟩|", 1e-8, 4, heisenberg, filling_two_path),
        check!(
            "filling.line_geodesy",
            Filling,
            "ρ(s₁,s₃) = ρ(s₁,s₂) + ρ(s₂,s₃)",
            1e-9,
            4,
            any,
            filling_line_geodesy
        ),
        check!("filling.triangle", Filling, "ρ(s,u) ≤ ρ(s,t) + ρ(t,u)", 1e-9, 4, any, filling_triangle),
        check!("filling.h2_embedding", Filling, "ρ = d_H² on Y_σ", 1e-6, 4, any, filling_h2_embedding),
        check!(
            "asymptotics.endpoint_product",
            Asymptotics,
            "|a₀ωᵢ|·|a₁ωᵢ| = rᵢ²",
            1e-9,
            10,
            any,
            asymptotics_endpoint_product
        ),
        check!(
            "asymptotics.endpoint_bound",
            Asymptotics,
            "|aᵢωᵢ| < 4rᵢ²/|ω₀ω₁|",
            1.0,
            10,
            any,
            asymptotics_endpoint_bound
        ),
        check!(
            "asymptotics.filling_rate",
            Asymptotics,
            "e^{ρ/2}·√(r₀r₁) = |ω₀ω₁|·(1 + O(r)), log-log slope 1",
            0.1,
            100,
            any,
            asymptotics_filling_rate
        ),
        check!(
            "asymptotics.gromov_rate",
            Asymptotics,
            "|e^{−(s₀|s₁)_b} − |a₀a₁|| = O(r), log-log slope 1",
            0.1,
            100,
            any,
            asymptotics_gromov_rate
        ),
    ]
}

// sampling

fn point(m: Model, r: &mut ChaCha8Rng) -> Vec<f64> {
    m.random_point(r, 1.0)
}

fn fin(v: Vec<f64>) -> MPoint {
    MPoint::Finite(v)
}

fn radius(r: &mut ChaCha8Rng) -> f64 {
    0.2 + 1.8 * r.random::<f64>()
}

fn line(m: Model, r: &mut ChaCha8Rng) -> Result<OrientedLine> {
    let p = point(m, r);
    OrientedLine::new(m, p, m.random_direction(r))
}

fn line_through(m: Model, p: &[f64], r: &mut ChaCha8Rng) -> Result<OrientedLine> {
    OrientedLine::new(m, p.to_vec(), m.random_direction(r))
}

/// With a finite `ω`, the base is kept `0.25` away from it: as the two
/// approach, the image of the sampling region shrinks onto the base below
/// coordinate resolution.
fn s_inversion(m: Model, r: &mut ChaCha8Rng, finite_omega: bool) -> Result<Automorphism> {
    let base = point(m, r);
    let omega = if finite_omega {
        loop {
            let w = point(m, r);
            if m.dist_finite(&w, &base) >= 0.25 {
                break fin(w);
            }
        }
    } else {
        MPoint::Infinity
    };
    let base = fin(base);
    Ok(SpaceInversion::new(m, omega, base, radius(r))?.to_automorphism())
}

fn quadruple(m: Model, r: &mut ChaCha8Rng) -> Quadruple {
    let mut pts: Vec<MPoint> = (0..4).map(|_| fin(point(m, r))).collect();
    match r.random_range(0..10) {
        0 => pts[r.random_range(0..4)] = MPoint::Infinity,
        1 => {
            let i = r.random_range(0..4);
            pts[(i + r.random_range(1..4)) % 4] = pts[i].clone();
        }
        _ => {}
    }
    Quadruple(pts.try_into().expect("four points"))
}

fn finite_quadruple(m: Model, r: &mut ChaCha8Rng) -> Quadruple {
    Quadruple(std::array::from_fn(|_| fin(point(m, r))))
}

/// A round circle in a real plane: the `(e₁, e₂)` plane in the Euclidean
/// model, the `(x₁, x₂)` plane in the Heisenberg model, moved by a random
/// rotation and translation.
fn planar_circle(m: Model, r: &mut ChaCha8Rng) -> impl Curve {
    let c = [r.random::<f64>() - 0.5, r.random::<f64>() - 0.5];
    let rad = radius(r);
    let (i1, i2) = match m {
        Model::Euclidean { .. } => (0, 1),
        Model::Heisenberg { .. } => (0, 2),
    };
    let g = Automorphism::rotate(m, m.random_rotation(r)).then(&Automorphism::translate(m, &point(m, r)));
    let n = m.coord_dim();
    FnCurve {
        model: m,
        f: move |u: f64| {
            let (s, co) = (2.0 * PI * u).sin_cos();
            let mut p = vec![0.0; n];
            p[i1] = c[0] + rad * co;
            p[i2] = c[1] + rad * s;
            g.apply(&MPoint::Finite(p))
        },
    }
}

fn inverted_line(m: Model, r: &mut ChaCha8Rng) -> Result<PtolemyCircle> {
    let l = line(m, r)?;
    Ok(PtolemyCircle::image(l, s_inversion(m, r, false)?))
}

fn sorted_params(r: &mut ChaCha8Rng) -> [f64; 4] {
    let mut u: [f64; 4] = std::array::from_fn(|_| r.random::<f64>());
    u.sort_by(f64::total_cmp);
    u
}

/// Whether the smallest pairwise distance is at least `10⁻³` of the largest;
/// closer points lose the Cygan distance to rounding in the vertical
/// coordinate.
fn well_spread(m: Model, q: &Quadruple) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = m.dist(&q.0[i], &q.0[j]);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    lo >= 1e-3 * hi
}

fn filling_point(m: Model, r: &mut ChaCha8Rng) -> Result<FillingPoint> {
    let h = (0.1 + 1.9 * r.random::<f64>()).powi(2);
    FillingPoint::new(m, point(m, r), h)
}

fn frame(m: Model, o: &[f64]) -> Result<Vec<OrientedLine>> {
    m.horizontal_frame().into_iter().map(|v| OrientedLine::new(m, o.to_vec(), v)).collect()
}

fn collect(n: usize, mut f: impl FnMut() -> Result<f64>) -> Residuals {
    (0..n).map(|_| f()).collect()
}

// ptolemy

fn ptolemy_triangle(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let d = MetricRep::standard(m);
    collect(n, || Ok(crt(&d, &quadruple(m, r))?.triangle_excess().max(0.0)))
}

fn ptolemy_circle_equality(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let d = MetricRep::standard(m);
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while out.len() < n {
        let circle: Box<dyn Curve> = match k % 3 {
            0 => Box::new(PtolemyCircle::line(line(m, r)?)),
            1 => Box::new(inverted_line(m, r)?),
            _ if has_planar_circles(m) => Box::new(planar_circle(m, r)),
            _ => Box::new(inverted_line(m, r)?),
        };
        k += 1;
        for _ in 0..50.min(n - out.len()) {
            let q = loop {
                let q = Quadruple(sorted_params(r).map(|u| circle.point(u)));
                if q.0.iter().any(MPoint::is_infinite) || well_spread(m, &q) {
                    break q;
                }
            };
            out.push(ptolemy_equality_relative(&d, &q)?.abs());
        }
    }
    Ok(out)
}

fn ptolemy_metric_inversion(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let d = MetricRep::standard(m);
    collect(n, || {
        let q = finite_quadruple(m, r);
        let dz = metric_inversion(&d, &fin(point(m, r)), radius(r))?;
        let (a, b) = (crt(&d, &q)?, crt(&dz, &q)?);
        Ok(a.deviation(&b).max(b.triangle_excess()))
    })
}

fn ptolemy_scalar_cross_ratio(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let d = MetricRep::standard(m);
    collect(n, || {
        let [w, x, y, z, wp]: [MPoint; 5] = std::array::from_fn(|_| fin(point(m, r)));
        let a = scalar_cross_ratio(&d, &w, &x, &y, &wp)?;
        let b = scalar_cross_ratio(&d, &w, &y, &z, &wp)?;
        let c = scalar_cross_ratio(&d, &w, &x, &z, &wp)?;
        Ok((a * b / c - 1.0).abs())
    })
}

/// Points of the sphere of radius `ρ` about `b`, i.e. between `∞` and `b`.
fn ptolemy_same_sphere(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let d = MetricRep::standard(m);
    let on_sphere = |b: &[f64], rho: f64, r: &mut ChaCha8Rng| {
        let u = point(m, r);
        let g = m.gauge(&u);
        fin(m.mul(b, &m.dilate(rho / g, &u)))
    };
    collect(n, || {
        let b = point(m, r);
        let rho = radius(r);
        let (x, y) = (on_sphere(&b, rho, r), on_sphere(&b, rho, r));
        let e = crt(&d, &Quadruple::new(MPoint::Infinity, x, y, fin(b)))?.entries();
        Ok((e[0] - e[1]).abs() / e[0].max(e[1]))
    })
}

// inversions

fn crt_deviation(m: Model, f: &Automorphism, r: &mut ChaCha8Rng) -> Result<f64> {
    let d = MetricRep::standard(m);
    let q = finite_quadruple(m, r);
    let fq = Quadruple(q.0.clone().map(|p| f.apply(&p)));
    Ok(crt(&d, &q)?.deviation(&crt(&d, &fq)?))
}

fn inversions_s_inversion(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let mut k = 0;
    collect(n, || {
        k += 1;
        let f = s_inversion(m, r, k % 2 == 0)?;
        crt_deviation(m, &f, r)
    })
}

fn inversions_homothety(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let o = fin(point(m, r));
        let f = homothety(m, &MPoint::Infinity, &o, 0.25 + 3.0 * r.random::<f64>())?;
        crt_deviation(m, &f, r)
    })
}

fn inversions_shift(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (x, y) = (fin(point(m, r)), fin(point(m, r)));
        let f = shift(m, &MPoint::Infinity, &x, &y)?;
        crt_deviation(m, &f, r)
    })
}

fn inversions_involution(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let b = point(m, r);
        let rad = radius(r);
        let phi = SpaceInversion::at_infinity(m, &b, rad)?;
        let x = point(m, r);
        let fx = phi.apply(&fin(x.clone()));
        let back = phi.apply(&fx);
        let ret = chart_distance(back.expect_finite(), &x) / (1.0 + ptolemy_core::numeric::norm(&x));
        let prod = m.dist_finite(&x, &b) * m.dist_finite(fx.expect_finite(), &b);
        Ok(ret.max((prod / (rad * rad) - 1.0).abs()))
    })
}

// duality

fn duality_derivative(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || Ok(duality_check(&line(m, r)?, &point(m, r), 1e-4)?.max()))
}

fn duality_flatness(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let l = line(m, r)?;
        let k = 100.min(n - out.len());
        for _ in 0..k {
            let p = m.random_point(r, 2.0);
            out.push(flatness_check(&l, &[p])?);
        }
    }
    Ok(out)
}

fn duality_closed_form(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let l = line(m, r)?;
        let x = m.random_point(r, 2.0);
        let got = BusemannFn::new(l.clone()).eval(&x)?;
        let h = m.horizontal_dim();
        let want: f64 = -(0..h).map(|i| (x[i] - l.through[i]) * l.direction[i]).sum::<f64>();
        Ok((got - want).abs())
    })
}

// slope

fn slope_symmetry(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (l, lp) = (line(m, r)?, line(m, r)?);
        Ok((slope(&l, &lp)?.value - slope(&lp, &l)?.value).abs())
    })
}

fn slope_self(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let l = line(m, r)?;
        Ok((slope(&l, &l)?.value + 1.0).abs())
    })
}

fn slope_closed_form(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (l, lp) = (line(m, r)?, line(m, r)?);
        let want: f64 = -l.direction.iter().zip(&lp.direction).map(|(a, b)| a * b).sum::<f64>();
        Ok((slope(&l, &lp)?.value - want).abs())
    })
}

fn slope_first_variation(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let p = point(m, r);
        let (l, lp) = (line_through(m, &p, r)?, line_through(m, &p, r)?);
        let mut s = 3.0 * (r.random::<f64>() - 0.5);
        if s.abs() < 0.05 {
            s = 0.5;
        }
        first_variation_check(&l, &lp, s, 1e-4)
    })
}

fn slope_quadratic_excess(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let fractions = [1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4];
    collect(n, || {
        let c = planar_circle(m, r);
        let ux = r.random::<f64>();
        let uy = (ux + 0.15 + 0.7 * r.random::<f64>()).rem_euclid(1.0);
        let a = m.dist(&c.point(ux), &c.point(uy));
        let ts: Vec<f64> = fractions.iter().map(|f| f * a).collect();
        Ok(quadratic_excess_check(&c, ux, uy, &ts)?.max(0.0))
    })
}

fn slope_arclength(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    // chords below 10⁻³ of the circle size reach the rounding floor of the
    // Cygan gauge, about √ε
    let chord = 1e-3;
    collect(n, || {
        let (c, u, size) = loop {
            let c: Box<dyn Curve> = if has_planar_circles(m) && r.random::<bool>() {
                Box::new(planar_circle(m, r))
            } else {
                Box::new(inverted_line(m, r)?)
            };
            let u = 0.05 + 0.9 * r.random::<f64>();
            let size = m.dist(&c.point(u), &c.point(u + 0.25));
            if (0.1..10.0).contains(&size) {
                break (c, u, size);
            }
        };
        // scale-free defect at the shortest chord
        Ok(arclength_defect(c.as_ref(), u, chord * size, 8)?.abs() * size)
    })
}

// fibration

fn fibration_lipschitz(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let mut k = 0;
    collect(n, || {
        k += 1;
        let (f, d) = if k % 2 == 0 {
            (Fibration::new(m, MPoint::Infinity)?, MetricRep::standard(m))
        } else {
            let omega = fin(point(m, r));
            (Fibration::new(m, omega.clone())?, MetricRep::new(m, omega, 1.0)?)
        };
        let (x, y) = (fin(point(m, r)), fin(point(m, r)));
        let gap = chart_distance(&f.project(&x)?, &f.project(&y)?) - d.distance(&x, &y);
        Ok(gap.max(0.0) / (1.0 + d.distance(&x, &y)))
    })
}

fn fibration_line_isometry(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let f = Fibration::new(m, MPoint::Infinity)?;
    collect(n, || {
        let l = line(m, r)?;
        let (a, b) = (4.0 * r.random::<f64>() - 2.0, 4.0 * r.random::<f64>() - 2.0);
        let got = chart_distance(&f.project(&l.point(a))?, &f.project(&l.point(b))?);
        Ok((got - (a - b).abs()).abs())
    })
}

fn fibration_k_line(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let f = Fibration::new(m, MPoint::Infinity)?;
    collect(n, || {
        let x = point(m, r);
        let fib = f.fiber(&fin(point(m, r)))?;
        let kl = f.k_line_connect(&fin(x.clone()), &fib)?;
        let got = m.dist_finite(&x, &kl.hit);
        let want = match m {
            Model::Euclidean { .. } => m.dist_finite(&x, &fib.through),
            Model::Heisenberg { .. } => {
                let v = m.vertical(&m.between(&x, &fib.through));
                let span = 2.0 * v.abs() + 1.0;
                golden_min(|a| m.dist_finite(&x, &fib.at(a)), -span, span, 1e-12).1
            }
        };
        let off_fiber = if fib.contains(&kl.hit, 1e-12) { 0.0 } else { f64::INFINITY };
        Ok((got - want).abs().max(off_fiber))
    })
}

// zigzag

fn frame_zigzag(m: Model, r: &mut ChaCha8Rng) -> Result<(ZigzagSpec, ptolemy_core::zigzag::ZigzagResult)> {
    let o = point(m, r);
    let lines = frame(m, &o)?;
    let raw: Vec<f64> = lines.iter().map(|_| 0.1 + r.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let steps = raw.iter().map(|s| s / total).collect();
    let spec = ZigzagSpec::new(m, o, lines, steps, 14)?;
    let res = zigzag_limit(&spec)?;
    Ok((spec, res))
}

fn zigzag_speed(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (spec, res) = frame_zigzag(m, r)?;
        let want = spec.steps.iter().map(|s| s * s).sum::<f64>().sqrt();
        Ok(res.speed.map_or(f64::INFINITY, |l| (l - want).abs()))
    })
}

fn zigzag_slopes(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (spec, res) = frame_zigzag(m, r)?;
        Ok(zigzag_slope_check(&res, &spec)?.into_iter().fold(0.0, f64::max))
    })
}

fn zigzag_busemann_affine(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (spec, res) = frame_zigzag(m, r)?;
        let l = line(m, r)?;
        busemann_affinity_check(&res, &spec, &l)
    })
}

fn zigzag_orthogonalize_full(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let o = point(m, r);
        let l = line_through(m, &o, r)?;
        Ok(match orthogonalize(&frame(m, &o)?, &l, &o)? {
            Orthogonalized::Degenerate { sum_alpha_sq } => (sum_alpha_sq - 1.0).abs(),
            Orthogonalized::Line { .. } => f64::INFINITY,
        })
    })
}

fn zigzag_orthogonalize_partial(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let o = point(m, r);
        let full = frame(m, &o)?;
        let k = r.random_range(1..full.len());
        let partial = &full[..k];
        // near the span of the frame the orthogonal part has speed → 0
        let l = loop {
            let l = line_through(m, &o, r)?;
            let in_span: f64 = partial.iter().map(|li| slope(&l, li).map(|s| s.value * s.value)).sum::<Result<f64>>()?;
            if in_span <= 0.99 {
                break l;
            }
        };
        match orthogonalize(partial, &l, &o)? {
            Orthogonalized::Line { line, .. } => {
                partial.iter().map(|li| Ok(slope(&line, li)?.value.abs())).try_fold(0.0, |a, b: Result<f64>| Ok(f64::max(a, b?)))
            }
            Orthogonalized::Degenerate { .. } => Ok(f64::INFINITY),
        }
    })
}

// filling

fn filling_euclidean_oracle(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (s, t) = (filling_point(m, r)?, filling_point(m, r)?);
        let sq = chart_distance(s.base.expect_finite(), t.base.expect_finite()).powi(2) + (s.height - t.height).powi(2);
        let want = (1.0 + sq / (2.0 * s.height * t.height)).acosh();
        Ok((rho(&s, &t)? - want).abs() / want)
    })
}

fn filling_inversion_roundtrip(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    let mut k = 0;
    collect(n, || {
        k += 1;
        let base = point(m, r);
        let omega = if k % 2 == 0 {
            MPoint::Infinity
        } else {
            loop {
                let w = point(m, r);
                if m.dist_finite(&w, &base) >= 0.25 {
                    break fin(w);
                }
            }
        };
        let s = FillingPoint::with_omega(m, omega.clone(), fin(base), radius(r))?;
        let back = FillingPoint::from_involution(m, omega, &s.to_automorphism())?;
        let db = chart_distance(back.base.expect_finite(), s.base.expect_finite());
        Ok(db.max((back.height / s.height - 1.0).abs()))
    })
}

fn filling_two_path(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (a, b) = rho_both(&filling_point(m, r)?, &filling_point(m, r)?)?;
        Ok((a - b).abs())
    })
}

fn filling_line_geodesy(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let l = common_line(&filling_point(m, r)?, &filling_point(m, r)?)?;
        let mut taus: [f64; 3] = std::array::from_fn(|_| 6.0 * r.random::<f64>() - 3.0);
        taus.sort_by(f64::total_cmp);
        let p = taus.iter().map(|&x| l.point(x)).collect::<Result<Vec<_>>>()?;
        line_geodesy_check(&p[0], &p[1], &p[2])
    })
}

fn filling_triangle(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (s, t, u) = (filling_point(m, r)?, filling_point(m, r)?, filling_point(m, r)?);
        Ok((rho(&s, &u)? - rho(&s, &t)? - rho(&t, &u)?).max(0.0))
    })
}

fn filling_h2_embedding(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let l = line(m, r)?;
        let samples: Vec<(f64, f64)> =
            (0..2).map(|_| (4.0 * r.random::<f64>() - 2.0, 0.05 + 2.0 * r.random::<f64>())).collect();
        hyp2_embed_check(&l, &samples)
    })
}

// asymptotics

fn schedule() -> Vec<f64> {
    (3..=12).map(|k| 2f64.powi(-k)).collect()
}

fn endpoint_residuals(m: Model, r: &mut ChaCha8Rng) -> Result<Vec<([f64; 2], [f64; 2])>> {
    let (w0, w1) = (point(m, r), point(m, r));
    let d = m.dist_finite(&w0, &w1);
    let ratio = 0.5 + 0.5 * r.random::<f64>();
    schedule()
        .into_iter()
        .map(|x| {
            let s0 = FillingPoint::new(m, w0.clone(), x * d)?;
            let s1 = FillingPoint::new(m, w1.clone(), x * d * ratio)?;
            let e = endpoint_proximity_check(&s0, &s1)?;
            Ok((e.product, e.bound_ratio))
        })
        .collect()
}

fn asymptotics_endpoint_product(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || Ok(endpoint_residuals(m, r)?.iter().flat_map(|(p, _)| *p).fold(0.0, f64::max)))
}

fn asymptotics_endpoint_bound(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || Ok(endpoint_residuals(m, r)?.iter().flat_map(|(_, b)| *b).fold(0.0, f64::max)))
}

fn asymptotics_filling_rate(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (w0, w1) = (point(m, r), point(m, r));
        let d = m.dist_finite(&w0, &w1);
        let rs: Vec<f64> = schedule().iter().map(|x| x * d).collect();
        Ok((filling_asymptotic_check(m, &w0, &w1, &rs)?.loglog_slope - 1.0).abs())
    })
}

fn asymptotics_gromov_rate(m: Model, n: usize, r: &mut ChaCha8Rng) -> Residuals {
    collect(n, || {
        let (a0, a1) = (point(m, r), point(m, r));
        let d = m.dist_finite(&a0, &a1);
        let rs: Vec<f64> = schedule().iter().map(|x| x * d).collect();
        Ok((gromov_product_check(m, &a0, &a1, &rs)?.loglog_slope - 1.0).abs())
    })
}
