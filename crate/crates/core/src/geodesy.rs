//! Busemann functions, slopes, tangent lines, the canonical fibration and
//! second-order estimates along Ptolemy circles.
//!
//! Lines and curves live in the chart `X_∞` of the model, i.e. the point at
//! infinity is the infinitely remote point `ω`.

use serde::{Deserialize, Serialize};

use crate::automorphism::{chart_at, Automorphism, SpaceInversion};
use crate::error::{Error, Result};
use crate::model::{Curve, Model, OrientedLine};
use crate::numeric::{bisect, dot, fit_line, golden_min, norm};
use crate::point::MPoint;

/// The Busemann function of the end `s → +∞` of an oriented line,
/// normalised to vanish at `anchor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusemannFn {
    pub line: OrientedLine,
    pub anchor: Vec<f64>,
    /// Relative Cauchy tolerance; two successive differences of the
    /// extrapolated estimates must fall below it.
    pub tol: f64,
    /// Largest exponent `j` of the schedule `s = S·2^j`.
    pub max_doublings: u32,
    /// Richardson levels applied in `1/s`.
    pub levels: usize,
}

impl BusemannFn {
    pub fn new(line: OrientedLine) -> Self {
        let anchor = line.through.clone();
        Self::with_anchor(line, anchor)
    }

    pub fn with_anchor(line: OrientedLine, anchor: Vec<f64>) -> Self {
        BusemannFn { line, anchor, tol: 1e-8, max_doublings: 40, levels: 3 }
    }

    /// The opposite Busemann function `b⁻` (same line, other end).
    pub fn opposite(&self) -> Self {
        BusemannFn { line: self.line.reversed(), ..self.clone() }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let m = self.line.model;
        let d = |a: &[f64], b: &[f64]| m.dist_finite(a, b);
        let scale = 1f64.max(d(x, &self.anchor)).max(d(&self.anchor, &self.line.through));
        let f = |s: f64| {
            let c = self.line.at(s);
            d(x, &c) - d(&self.anchor, &c)
        };
        let mut prev_row: Vec<f64> = Vec::new();
        let mut prev_est: Option<f64> = None;
        let mut last_diff = f64::INFINITY;
        let mut settled = 0;
        for j in 0..=self.max_doublings {
            let s = scale * 2f64.powi(j as i32 + 2);
            let mut row = vec![f(s)];
            for k in 1..=self.levels.min(j as usize) {
                let r = row[k - 1] + (row[k - 1] - prev_row[k - 1]) / (2f64.powi(k as i32) - 1.0);
                row.push(r);
            }
            let est = *row.last().unwrap();
            if let Some(p) = prev_est {
                last_diff = (est - p).abs();
                if j as usize > self.levels && last_diff <= self.tol * est.abs().max(1.0) {
                    settled += 1;
                    if settled == 2 {
                        return Ok(est);
                    }
                } else {
                    settled = 0;
                }
            }
            prev_est = Some(est);
            prev_row = row;
        }
        Err(Error::NonConvergence { steps: self.max_doublings as usize, last_diff })
    }
}

pub fn busemann_eval(b: &BusemannFn, x: &MPoint) -> Result<f64> {
    match x {
        MPoint::Finite(c) => b.eval(c),
        MPoint::Infinity => Err(Error::DegenerateInput("Busemann functions are finite only on X_omega".into())),
    }
}

/// Order-2 one-sided difference `f'(0±)` from `f(0), f(±h), f(±2h)`.
fn one_sided(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
}

/// Residuals of the two one-sided duality identities at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityResidual {
    pub plus: f64,
    pub minus: f64,
}

impl DualityResidual {
    pub fn max(&self) -> f64 {
        self.plus.max(self.minus)
    }
}

/// Compares `b^±(x)` with the one-sided derivatives of `t ↦ ln d′(x, c(t))`.
///
/// The circle is `line ∪ {∞}` with `ω′ = line(0)`, `d′` is the metric
/// inversion at `ω′` of radius 1 and `c(t) = line(1/t)`, `c(0) = ∞`, so that
/// `b^± ∘ c(t) = ∓1/t`. Then `b⁺(x) = (ln d′)′(0+)` and `b⁻(x) = −(ln d′)′(0−)`.
pub fn duality_check(line: &OrientedLine, x: &[f64], h: f64) -> Result<DualityResidual> {
    let m = line.model;
    let w = &line.through;
    if m.dist_finite(w, x) == 0.0 {
        return Err(Error::DegenerateInput("x coincides with omega'".into()));
    }
    let dwx = m.dist_finite(w, x);
    let g = |t: f64| -> f64 {
        if t == 0.0 {
            return -dwx.ln();
        }
        let c = line.at(1.0 / t);
        (m.dist_finite(x, &c) / (dwx * m.dist_finite(w, &c))).ln()
    };
    let g0 = g(0.0);
    let right = one_sided(g0, g(h), g(2.0 * h), h);
    let left = -one_sided(g0, g(-h), g(-2.0 * h), h);
    let bp = BusemannFn::new(line.clone());
    let bm = bp.opposite();
    Ok(DualityResidual { plus: (bp.eval(x)? - right).abs(), minus: (bm.eval(x)? + left).abs() })
}

/// `max |b⁺ + b⁻ − (b⁺ + b⁻)(anchor)|` over the given points.
pub fn flatness_check(line: &OrientedLine, points: &[Vec<f64>]) -> Result<f64> {
    let bp = BusemannFn::new(line.clone());
    let bm = bp.opposite();
    let c = bp.eval(&line.through)? + bm.eval(&line.through)?;
    let mut worst = 0.0f64;
    for p in points {
        worst = worst.max((bp.eval(p)? + bm.eval(p)? - c).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeValue {
    pub value: f64,
    /// Largest deviation of the sampled restriction from its affine fit.
    pub fit_residual: f64,
}

pub const SLOPE_HALF_WIDTH: f64 = 8.0;
pub const SLOPE_GRID: usize = 33;

/// `slope(l′; l)`: the linear coefficient of `b_l ∘ c′`, where `b_l` is the
/// Busemann function of `l` and `c′` the parameterization of `l′`.
pub fn slope(l_prime: &OrientedLine, l: &OrientedLine) -> Result<SlopeValue> {
    if l_prime.model != l.model {
        return Err(Error::DegenerateInput("lines live in different models".into()));
    }
    let b = BusemannFn::new(l.clone());
    let t_max = SLOPE_HALF_WIDTH;
    let ts: Vec<f64> =
        (0..SLOPE_GRID).map(|i| -t_max + 2.0 * t_max * i as f64 / (SLOPE_GRID - 1) as f64).collect();
    let ys = ts.iter().map(|&t| b.eval(&l_prime.at(t))).collect::<Result<Vec<f64>>>()?;
    let fit = fit_line(&ts, &ys);
    let bound = 1e-6 * t_max;
    if fit.max_residual > bound {
        return Err(Error::NonAffine { residual: fit.max_residual, bound });
    }
    Ok(SlopeValue { value: fit.slope.clamp(-1.0, 1.0), fit_residual: fit.max_residual })
}

/// `|d/dt d′(c′(s), c(t))|_{t=0} − slope(l′;l)·sign s|` for lines through a
/// common point `ω′`, with `d′` the inversion at `ω′` and `c(t) = l(1/t)`.
pub fn first_variation_check(l: &OrientedLine, l_prime: &OrientedLine, s: f64, h: f64) -> Result<f64> {
    let m = l.model;
    let w = &l.through;
    if m.dist_finite(w, &l_prime.through) > 1e-12 {
        return Err(Error::DegenerateInput("lines must pass through a common point".into()));
    }
    if s == 0.0 {
        return Err(Error::DegenerateInput("s must be nonzero".into()));
    }
    let p = l_prime.at(s);
    let dwp = m.dist_finite(w, &p);
    let f = |t: f64| {
        let c = l.at(1.0 / t);
        m.dist_finite(&p, &c) / (dwp * m.dist_finite(w, &c))
    };
    let lhs = (f(h) - f(-h)) / (2.0 * h);
    let alpha = slope(l_prime, l)?.value;
    Ok((lhs - alpha * s.signum()).abs())
}

/// Curve parameter offset `δ > 0` with `d(x, σ(u ± δ)) = t`, `x = σ(u)`.
///
/// The distance along the scan must be nondecreasing until it reaches `t`,
/// apart from rounding noise below `1e-7·(1 + |x|)`.
pub fn distance_parameter<C: Curve + ?Sized>(curve: &C, u: f64, t: f64, forward: bool) -> Result<f64> {
    let m = curve.model();
    let x = finite_on(curve, u)?;
    let floor = 1e-7 * (1.0 + norm(&x));
    let sign = if forward { 1.0 } else { -1.0 };
    let dist = |delta: f64| match curve.point(u + sign * delta) {
        MPoint::Finite(p) => m.dist_finite(&x, &p),
        MPoint::Infinity => f64::INFINITY,
    };
    let mut lo = 0.0;
    let mut d_lo = 0.0;
    let mut delta = 2f64.powi(-50);
    loop {
        let d = dist(delta);
        if d < d_lo && d_lo > floor {
            return Err(Error::ParameterizationFailure(format!(
                "distance decreases from {d_lo:e} to {d:e} near offset {delta:e}"
            )));
        }
        if d >= t {
            break;
        }
        lo = delta;
        d_lo = d;
        delta *= 2.0;
        if delta > 0.5 {
            return Err(Error::ParameterizationFailure(format!("distance {t:e} not reached on the half circle")));
        }
    }
    bisect(|dl| dist(dl) - t, lo, delta, 0.0)
        .ok_or_else(|| Error::ParameterizationFailure("no sign change while bisecting".into()))
}

fn finite_on<C: Curve + ?Sized>(curve: &C, u: f64) -> Result<Vec<f64>> {
    match curve.point(u) {
        MPoint::Finite(p) => Ok(p),
        MPoint::Infinity => Err(Error::DegenerateInput("curve point is omega".into())),
    }
}

/// The tangent Ptolemy line to `σ` at `x = σ(u)`, oriented along increasing
/// curve parameter.
///
/// The s-inversion with base `x` carries `σ` to a line whose Busemann-parallel
/// through `x` is the tangent.
pub fn tangent_line<C: Curve + ?Sized>(curve: &C, u: f64) -> Result<OrientedLine> {
    let m = curve.model();
    let x = finite_on(curve, u)?;
    let phi = SpaceInversion::at_infinity(m, &x, 1.0)?;
    let mut images: Vec<Vec<f64>> = Vec::new();
    for off in [0.21, 0.43, 0.62, 0.79, 0.37] {
        if let MPoint::Finite(a) = phi.apply(&curve.point(u + off)) {
            if images.iter().all(|b| m.dist_finite(b, &a) > 1e-6) {
                images.push(a);
            }
        }
        if images.len() == 2 {
            break;
        }
    }
    if images.len() < 2 {
        return Err(Error::DegenerateInput("could not sample the inverted curve".into()));
    }
    let disp = m.between(&images[0], &images[1]);
    let hor = m.horizontal(&disp).to_vec();
    let vertical = m.vertical(&disp);
    let hn = norm(&hor);
    if vertical.abs() > 1e-8 * hn * hn.max(1.0) {
        return Err(Error::NonHorizontalDirection { vertical });
    }
    let mut dir: Vec<f64> = hor.iter().map(|v| v / hn).collect();
    let ahead = m.between(&x, &finite_on(curve, u + 1e-5)?);
    if dot(m.horizontal(&ahead), &dir) < 0.0 {
        dir.iter_mut().for_each(|v| *v = -*v);
    }
    OrientedLine::new(m, x, dir)
}

/// Distance from `y` to a line, minimising over a parameter window around
/// the projection guess `s0`.
pub fn distance_to_line(line: &OrientedLine, y: &[f64], s0: f64, half_width: f64) -> f64 {
    let m = line.model;
    let tol = half_width * 1e-10;
    golden_min(|s| m.dist_finite(y, &line.at(s)), s0 - half_width, s0 + half_width, tol).1
}

/// `dist(y, l_x) / |xy|` for points `y = x_r` of `σ` at the given distances `r`.
pub fn tangency_ratios<C: Curve + ?Sized>(curve: &C, u: f64, line: &OrientedLine, radii: &[f64]) -> Result<Vec<f64>> {
    radii
        .iter()
        .map(|&r| {
            let delta = distance_parameter(curve, u, r, true)?;
            let y = finite_on(curve, u + delta)?;
            Ok(distance_to_line(line, &y, r, 2.0 * r) / r)
        })
        .collect()
}

/// The canonical fibration `π_ω : X_ω → B_ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fibration {
    pub model: Model,
    pub omega: MPoint,
    chart: Automorphism,
}

/// The fiber through a point, in chart coordinates.
///
/// Euclidean fibers are single points; Heisenberg fibers are vertical lines
/// `p·{(0, t)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub model: Model,
    pub through: Vec<f64>,
}

impl Fiber {
    pub fn base_point(&self) -> Vec<f64> {
        self.model.project(&self.through)
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        match self.model {
            Model::Euclidean { .. } => crate::numeric::chart_distance(p, &self.through) <= tol,
            Model::Heisenberg { .. } => {
                crate::numeric::chart_distance(self.model.horizontal(p), self.model.horizontal(&self.through)) <= tol
            }
        }
    }

    /// The fiber point at vertical offset `t` (the point itself in the
    /// Euclidean model).
    pub fn at(&self, t: f64) -> Vec<f64> {
        match self.model {
            Model::Euclidean { .. } => self.through.clone(),
            Model::Heisenberg { m } => {
                let mut v = vec![0.0; 2 * m + 1];
                v[2 * m] = t;
                self.model.mul(&self.through, &v)
            }
        }
    }
}

/// A Ptolemy line from `x` to a fiber, with the point where it meets the fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KLine {
    pub line: OrientedLine,
    pub hit: Vec<f64>,
    /// Line parameter of the hit point.
    pub s: f64,
}

impl Fibration {
    pub fn new(model: Model, omega: MPoint) -> Result<Self> {
        model.check_point(&omega)?;
        let chart = chart_at(model, &omega);
        Ok(Fibration { model, omega, chart })
    }

    /// Chart coordinates of a point of `X_ω`.
    pub fn chart_coords(&self, x: &MPoint) -> Result<Vec<f64>> {
        if *x == self.omega {
            return Err(Error::DegenerateInput("omega is not a point of X_omega".into()));
        }
        Ok(self.chart.apply(x).expect_finite().to_vec())
    }

    pub fn project(&self, x: &MPoint) -> Result<Vec<f64>> {
        Ok(self.model.project(&self.chart_coords(x)?))
    }

    pub fn fiber(&self, x: &MPoint) -> Result<Fiber> {
        Ok(Fiber { model: self.model, through: self.chart_coords(x)? })
    }

    /// Dimension `k` of the base `B_ω ≅ R^k`.
    pub fn base_dim(&self) -> usize {
        self.model.horizontal_dim()
    }

    /// The unique Ptolemy line through `x` meeting the fiber `f` (chart
    /// coordinates).
    pub fn k_line_connect(&self, x: &MPoint, f: &Fiber) -> Result<KLine> {
        let xc = self.chart_coords(x)?;
        let m = self.model;
        let dz: Vec<f64> = m.horizontal(&f.through).iter().zip(m.horizontal(&xc)).map(|(a, b)| a - b).collect();
        let s = norm(&dz);
        if s <= 1e-14 * (1.0 + norm(m.horizontal(&xc))) {
            return Err(Error::NoSolution);
        }
        let dir: Vec<f64> = dz.iter().map(|v| v / s).collect();
        let line = OrientedLine::new(m, xc, dir)?;
        let hit = line.at(s);
        Ok(KLine { line, hit, s })
    }
}

pub fn project(model: Model, omega: &MPoint, x: &MPoint) -> Result<Vec<f64>> {
    Fibration::new(model, omega.clone())?.project(x)
}

pub fn fiber(model: Model, omega: &MPoint, x: &MPoint) -> Result<Fiber> {
    Fibration::new(model, omega.clone())?.fiber(x)
}

pub fn k_line_connect(model: Model, omega: &MPoint, x: &MPoint, f: &Fiber) -> Result<KLine> {
    Fibration::new(model, omega.clone())?.k_line_connect(x, f)
}

/// `(L(x x_r) − r) / r²` with `L` the arclength of the arc from `x = σ(u)` to
/// `x_r`, `|x x_r| = r`, from inscribed polygons on the distance
/// parameterization with Richardson extrapolation over `n, 2n, 4n` vertices.
pub fn arclength_defect<C: Curve + ?Sized>(curve: &C, u: f64, r: f64, n: usize) -> Result<f64> {
    let m = curve.model();
    let x = finite_on(curve, u)?;
    let polygon = |k: usize| -> Result<(f64, f64)> {
        let mut prev = x.clone();
        let mut len = 0.0;
        for j in 1..=k {
            let delta = distance_parameter(curve, u, r * j as f64 / k as f64, true)?;
            let p = finite_on(curve, u + delta)?;
            len += m.dist_finite(&prev, &p);
            prev = p;
        }
        Ok((len, m.dist_finite(&x, &prev)))
    };
    let (l1, chord) = polygon(n)?;
    let (l2, _) = polygon(2 * n)?;
    let (l4, _) = polygon(4 * n)?;
    let r1 = (4.0 * l2 - l1) / 3.0;
    let r2 = (4.0 * l4 - l2) / 3.0;
    let l = (16.0 * r2 - r1) / 15.0;
    Ok((l - chord) / (chord * chord))
}

/// Worst violation of
/// `b⁺(x_t) + b⁻(y_t) ≤ 2αt − (1 − α²)t²/a` over `ts`.
///
/// `x = σ(u_x)`, `y = σ(u_y)` lie on a common Ptolemy line `l`, `a = |xy|`,
/// and `x_t`, `y_t` are the distance parameterizations into the arc from `x`
/// to `y` in the direction of increasing parameter. `b⁺` is the Busemann
/// function of the end of `l` beyond `y`, normalised at `x`; `b⁻` that of the
/// end beyond `x`, normalised at `y`. `α = g′(0)` for `g(t) = |x_t y|`, which
/// is the slope of the tangent at `x` against `l` oriented from `x` to `y`.
pub fn quadratic_excess_check<C: Curve + ?Sized>(curve: &C, u_x: f64, u_y: f64, ts: &[f64]) -> Result<f64> {
    let m = curve.model();
    let x = finite_on(curve, u_x)?;
    let y = finite_on(curve, u_y)?;
    let a = m.dist_finite(&x, &y);
    let disp = m.between(&x, &y);
    if m.vertical(&disp).abs() > 1e-9 * a * a {
        return Err(Error::DegenerateInput("x and y do not lie on a common Ptolemy line".into()));
    }
    let dir: Vec<f64> = m.horizontal(&disp).iter().map(|v| v / a).collect();
    let l = OrientedLine::new(m, x.clone(), dir)?;
    let bp = BusemannFn::with_anchor(l.clone(), x.clone());
    let bm = BusemannFn::with_anchor(l.reversed(), y.clone());
    let alpha = slope(&tangent_line(curve, u_x)?, &l)?.value;
    let arc = (u_y - u_x).rem_euclid(1.0);
    let mut worst = f64::NEG_INFINITY;
    for &t in ts {
        let dx = distance_parameter(curve, u_x, t, true)?;
        let dy = distance_parameter(curve, u_y, t, false)?;
        if dx >= arc || dy >= arc {
            return Err(Error::ParameterizationFailure(format!("t = {t:e} leaves the arc from x to y")));
        }
        let xt = finite_on(curve, u_x + dx)?;
        let yt = finite_on(curve, u_y - dy)?;
        let lhs = bp.eval(&xt)? + bm.eval(&yt)?;
        let rhs = 2.0 * alpha * t - (1.0 - alpha * alpha) * t * t / a;
        worst = worst.max(lhs - rhs);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondOrder {
    /// `(r, (L − r)/r²)` per requested arc chord.
    pub defects: Vec<(f64, f64)>,
    /// Largest value of `LHS − RHS` in the quadratic excess inequality.
    pub excess_violation: f64,
}

pub fn circle_second_order<C: Curve + ?Sized>(
    curve: &C,
    u_x: f64,
    u_y: f64,
    radii: &[f64],
    ts: &[f64],
) -> Result<SecondOrder> {
    let defects = radii
        .iter()
        .map(|&r| Ok((r, arclength_defect(curve, u_x, r, 8)?)))
        .collect::<Result<Vec<_>>>()?;
    let excess_violation = quadratic_excess_check(curve, u_x, u_y, ts)?;
    Ok(SecondOrder { defects, excess_violation })
}
