//! The filling `Y`: space inversions as points, lines between them, the
//! distance `ρ`, and the recovery of the boundary metric from `Y`.
//!
//! A point `(base, height)` of `Y = X_ω × R₊` is the s-inversion with that
//! base and invariant-sphere radius. Logarithmic heights are used wherever
//! `ρ` is assembled.

use serde::{Deserialize, Serialize};

use crate::automorphism::{chart_at, Automorphism, SpaceInversion};
use crate::error::{Error, Result};
use crate::mobius::{scalar_cross_ratio, MetricRep};
use crate::model::{Model, OrientedLine};
use crate::numeric::{bisect, chart_distance, golden_min, loglog_slope, solve_linear};
use crate::point::MPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillingPoint {
    pub model: Model,
    pub omega: MPoint,
    pub base: MPoint,
    pub height: f64,
}

impl FillingPoint {
    /// Half-space point over a finite base with `ω = ∞`.
    pub fn new(model: Model, base: Vec<f64>, height: f64) -> Result<Self> {
        Self::with_omega(model, MPoint::Infinity, MPoint::Finite(base), height)
    }

    pub fn with_omega(model: Model, omega: MPoint, base: MPoint, height: f64) -> Result<Self> {
        let s = SpaceInversion::new(model, omega, base, height)?;
        Ok(Self::from_inversion(&s))
    }

    pub fn as_inversion(&self) -> SpaceInversion {
        SpaceInversion { model: self.model, omega: self.omega.clone(), base: self.base.clone(), radius: self.height }
    }

    pub fn from_inversion(phi: &SpaceInversion) -> Self {
        FillingPoint { model: phi.model, omega: phi.omega.clone(), base: phi.base.clone(), height: phi.radius }
    }

    pub fn to_automorphism(&self) -> Automorphism {
        self.as_inversion().to_automorphism()
    }

    /// Reads off base and radius of an s-inversion given only as a map:
    /// `base = φ(ω)` and `r² = |x base|·|φ(x) base|` in `X_ω`.
    pub fn from_involution(model: Model, omega: MPoint, map: &Automorphism) -> Result<Self> {
        let chart = chart_at(model, &omega);
        let h = chart.clone().then(map).then(&chart);
        let b = match h.apply(&MPoint::Infinity) {
            MPoint::Finite(b) => b,
            MPoint::Infinity => return Err(Error::DegenerateInput("map fixes omega".into())),
        };
        let ln_r2 = |rad: f64| -> Result<f64> {
            let mut e = vec![0.0; model.coord_dim()];
            e[0] = rad;
            let x = model.mul(&b, &e);
            match h.apply(&MPoint::Finite(x.clone())) {
                MPoint::Finite(fx) => Ok(model.dist_finite(&x, &b).ln() + model.dist_finite(&fx, &b).ln()),
                MPoint::Infinity => Err(Error::DegenerateInput("probe point mapped to omega".into())),
            }
        };
        let r0 = (0.5 * ln_r2(1.0)?).exp();
        let r = (0.5 * ln_r2(r0)?).exp();
        let base = chart.apply(&MPoint::Finite(b));
        Self::with_omega(model, omega, base, r)
    }

    /// `g_* s = g ∘ s ∘ g⁻¹`, represented over the same `ω`.
    pub fn transported(&self, g: &Automorphism) -> Result<Self> {
        let conj = self.to_automorphism().conjugated_by(g);
        Self::from_involution(self.model, self.omega.clone(), &conj)
    }

    fn chart_base(&self) -> Vec<f64> {
        chart_at(self.model, &self.omega).apply(&self.base).expect_finite().to_vec()
    }
}

pub fn as_inversion(y: &FillingPoint) -> SpaceInversion {
    y.as_inversion()
}

pub fn from_inversion(phi: &SpaceInversion) -> FillingPoint {
    FillingPoint::from_inversion(phi)
}

/// A line of `Y`, given by its ideal endpoints. Points are parameterized by
/// `τ ∈ R`, running from `a` (`τ → −∞`) to `a′` (`τ → +∞`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillingLine {
    pub model: Model,
    pub omega: MPoint,
    pub a: MPoint,
    pub a_prime: MPoint,
}

impl FillingLine {
    /// Möbius map sending `a′ ↦ ∞` and `a ↦ 0`.
    pub fn normalizer(&self) -> Automorphism {
        let m = self.model;
        let psi = match &self.a_prime {
            MPoint::Infinity => Automorphism::identity(m),
            MPoint::Finite(w) => Automorphism::translate(m, &m.group_inv(w)).then(&Automorphism::unit_inversion(m)),
        };
        let pa = psi.apply(&self.a);
        let shift = Automorphism::translate(m, &m.group_inv(pa.expect_finite()));
        psi.then(&shift)
    }

    pub fn point(&self, tau: f64) -> Result<FillingPoint> {
        let m = self.model;
        let g = self.normalizer();
        let vertical = SpaceInversion::at_infinity(m, &m.origin(), tau.exp())?.to_automorphism();
        let s = vertical.conjugated_by(&g.inverse());
        FillingPoint::from_involution(m, self.omega.clone(), &s)
    }

    /// `τ` of a point of the line: the log height after normalisation.
    pub fn tau_of(&self, s: &FillingPoint) -> Result<f64> {
        Ok(normalized_log_height(s, &self.normalizer())?.1)
    }

    /// Whether `s` swaps the endpoints.
    pub fn contains(&self, s: &FillingPoint, tol: f64) -> bool {
        let img = s.to_automorphism().apply(&self.a);
        match (&img, &self.a_prime) {
            (MPoint::Infinity, MPoint::Infinity) => true,
            (MPoint::Finite(x), MPoint::Finite(y)) => {
                chart_distance(x, y) <= tol * (1.0 + crate::numeric::norm(y))
            }
            _ => false,
        }
    }

    /// Largest height (over `ω`) along the line and the `τ` attaining it.
    pub fn max_height(&self) -> Result<(f64, f64)> {
        if self.a.is_infinite() || self.a_prime.is_infinite() {
            return Ok((f64::INFINITY, f64::NAN));
        }
        let f = |t: f64| self.point(t).map(|p| -p.height.ln()).unwrap_or(f64::INFINITY);
        let (t, v) = golden_min(f, -60.0, 60.0, 1e-12);
        Ok(((-v).exp(), t))
    }
}

/// Base offset and `ln r̃` of `g s g⁻¹`, where `g` moves the line of `s` to
/// the vertical line over `0`.
fn normalized_log_height(s: &FillingPoint, g: &Automorphism) -> Result<(f64, f64)> {
    let m = s.model;
    let conj = s.to_automorphism().conjugated_by(g);
    let p = FillingPoint::from_involution(m, MPoint::Infinity, &conj)?;
    let off = m.gauge(p.base.expect_finite());
    Ok((off, p.height.ln()))
}

fn check_pair(s: &FillingPoint, t: &FillingPoint) -> Result<()> {
    if s.model != t.model || s.omega != t.omega {
        return Err(Error::DegenerateInput("filling points over different models or omegas".into()));
    }
    Ok(())
}

/// The unique line through `s ≠ t`, oriented `a, s, t, a′`.
///
/// `a` and `a′` are the attracting and repelling fixed points of `s ∘ t`.
pub fn common_line(s: &FillingPoint, t: &FillingPoint) -> Result<FillingLine> {
    check_pair(s, t)?;
    let m = s.model;
    let chart = chart_at(m, &s.omega);
    let (x, y) = (s.chart_base(), t.chart_base());
    let (r, big_r) = (s.height, t.height);
    let dist = m.dist_finite(&x, &y);
    let scale = dist.max(r).max(big_r);
    let done = |a: MPoint, a_prime: MPoint| FillingLine {
        model: m,
        omega: s.omega.clone(),
        a: chart.apply(&a),
        a_prime: chart.apply(&a_prime),
    };
    if dist <= 1e-15 * scale {
        if (r - big_r).abs() <= 1e-15 * scale {
            return Err(Error::IterationDivergence("s and t coincide".into()));
        }
        let base = MPoint::Finite(x);
        return Ok(if r < big_r { done(base, MPoint::Infinity) } else { done(MPoint::Infinity, base) });
    }
    if let Model::Euclidean { .. } = m {
        let (a, ap) = euclidean_endpoints(&x, &y, r, big_r);
        return Ok(done(MPoint::Finite(a), MPoint::Finite(ap)));
    }
    // solve at unit scale centred at x for a and at y for a′, each endpoint
    // lying close to its centre
    let local = |c: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let to = |p: &[f64]| m.dilate(1.0 / scale, &m.between(c, p));
        let (a, ap) = unit_endpoints(m, &to(&x), &to(&y), r / scale, big_r / scale)?;
        let back = |p: &[f64]| m.mul(c, &m.dilate(scale, p));
        Ok((back(&a), back(&ap)))
    };
    let (a, _) = local(&x)?;
    let (_, ap) = local(&y)?;
    Ok(done(MPoint::Finite(a), MPoint::Finite(ap)))
}

/// Fixed points of `φ_t ∘ φ_s` for `s = (x, r)`, `t = (y, R)` over `ω = ∞`,
/// with `max(|xy|, r, R) = 1`.
fn unit_endpoints(m: Model, x: &[f64], y: &[f64], r: f64, big_r: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let hs = FillingPoint::new(m, x.to_vec(), r)?.to_automorphism();
    let ht = FillingPoint::new(m, y.to_vec(), big_r)?.to_automorphism();
    let h = ht.clone().then(&hs);
    let h_inv = hs.then(&ht);
    let starts = starting_points(m, x, y, 1.0);
    let a = fixed_point(&h, &starts, 1.0)?;
    let ap = fixed_point(&h_inv, &starts, 1.0)?;
    if chart_distance(&a, &ap) <= 1e-9 {
        return Err(Error::IterationDivergence("attracting and repelling points coincide".into()));
    }
    let spacing = m.dist_finite(&a, &ap);
    let ratio_a = local_ratio(m, &h, &a, spacing);
    let ratio_ap = local_ratio(m, &h, &ap, spacing);
    if !(ratio_a < 1.0 && ratio_ap > 1.0) {
        return Err(Error::IterationDivergence(format!(
            "fixed points misclassified: contraction {ratio_a:e} at a, {ratio_ap:e} at a'"
        )));
    }
    Ok((a, ap))
}

/// Endpoints of the half-circle through `(x, r)` and `(y, R)` in the upper
/// half space, in the order `a, (x,r), (y,R), a′`.
fn euclidean_endpoints(x: &[f64], y: &[f64], r: f64, big_r: f64) -> (Vec<f64>, Vec<f64>) {
    let d = chart_distance(x, y);
    let e: Vec<f64> = x.iter().zip(y).map(|(a, b)| (b - a) / d).collect();
    let kappa = (d * d + big_r * big_r - r * r) / (2.0 * d);
    let rad = kappa.hypot(r);
    // offsets of the endpoints from x and from y, arranged to avoid cancellation
    let back = if kappa >= 0.0 { r * r / (kappa + rad) } else { rad - kappa };
    let rest = d - kappa;
    let fwd = if rest >= 0.0 { big_r * big_r / (rest + rad) } else { rad - rest };
    let a = x.iter().zip(&e).map(|(p, v)| p - back * v).collect();
    let ap = y.iter().zip(&e).map(|(p, v)| p + fwd * v).collect();
    (a, ap)
}

fn starting_points(m: Model, x: &[f64], y: &[f64], scale: f64) -> Vec<Vec<f64>> {
    let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
    (0..8)
        .map(|k| {
            let off: Vec<f64> = (0..m.coord_dim())
                .map(|i| {
                    let ang = 0.9 * k as f64 + 1.7 * i as f64;
                    let s = if i == m.horizontal_dim() { scale * scale } else { scale };
                    s * (1.0 + 0.5 * (k % 3) as f64) * ang.cos()
                })
                .collect();
            mid.iter().zip(&off).map(|(a, b)| a + b).collect()
        })
        .collect()
}

fn apply_finite(h: &Automorphism, x: &[f64]) -> Option<Vec<f64>> {
    match h.apply_finite(x) {
        MPoint::Finite(y) if y.iter().all(|v| v.is_finite()) => Some(y),
        _ => None,
    }
}

/// Power iteration from several starts, polished by Newton's method on
/// `h(x) − x` with a finite-difference Jacobian.
fn fixed_point(h: &Automorphism, starts: &[Vec<f64>], scale: f64) -> Result<Vec<f64>> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x0 in starts {
        let mut x = x0.clone();
        let mut ok = true;
        for _ in 0..200_000 {
            let Some(y) = apply_finite(h, &x) else {
                ok = false;
                break;
            };
            let step = chart_distance(&x, &y);
            x = y;
            if step <= 1e-8 * scale {
                break;
            }
        }
        if !ok {
            continue;
        }
        let x = newton_polish(h, x, scale);
        let Some(hx) = apply_finite(h, &x) else { continue };
        let res = chart_distance(&hx, &x);
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, x));
        }
    }
    match best {
        Some((res, x)) if res <= 1e-9 * scale => Ok(x),
        Some((res, _)) => Err(Error::IterationDivergence(format!("fixed-point residual {res:e} at scale {scale:e}"))),
        None => Err(Error::IterationDivergence("no starting point converged".into())),
    }
}

fn newton_polish(h: &Automorphism, mut x: Vec<f64>, scale: f64) -> Vec<f64> {
    let n = x.len();
    for _ in 0..8 {
        let Some(hx) = apply_finite(h, &x) else { return x };
        let f: Vec<f64> = hx.iter().zip(&x).map(|(a, b)| a - b).collect();
        if crate::numeric::norm(&f) <= 1e-15 * scale {
            break;
        }
        let eps = 1e-7 * scale.max(crate::numeric::norm(&x) * 1e-3);
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += eps;
            xm[j] -= eps;
            let (Some(fp), Some(fm)) = (apply_finite(h, &xp), apply_finite(h, &xm)) else { return x };
            for i in 0..n {
                let e = if i == j { 1.0 } else { 0.0 };
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * eps) - e;
            }
        }
        let Some(dx) = solve_linear(jac, f.iter().map(|v| -v).collect()) else { break };
        let cand: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let Some(hc) = apply_finite(h, &cand) else { break };
        let fc = chart_distance(&hc, &cand);
        if fc >= crate::numeric::norm(&f) {
            break;
        }
        x = cand;
    }
    x
}

/// `d(h(p), a) / d(p, a)` for `p` near the fixed point `a`, in the model
/// metric; its limit is the conformal factor of `h` at `a`.
/// The probe sits at `10⁻³·spacing`, well above the Cygan size of rounding
/// errors in the vertical coordinate.
fn local_ratio(m: Model, h: &Automorphism, a: &[f64], spacing: f64) -> f64 {
    let mut e = vec![0.0; a.len()];
    e[0] = 1e-3 * spacing;
    let p = m.mul(a, &e);
    match apply_finite(h, &p) {
        Some(hp) => m.dist_finite(&hp, a) / m.dist_finite(&p, a),
        None => f64::INFINITY,
    }
}

/// `ρ(s,t) = |ln r̃_s − ln r̃_t|` after moving the common line to the
/// vertical line over `0`.
pub fn rho(s: &FillingPoint, t: &FillingPoint) -> Result<f64> {
    Ok(rho_both(s, t)?.0)
}

/// Both evaluations of `ρ`: normalised heights, and `|ln⟨a, x_s, x_t, a′⟩|`
/// with `x_s`, `x_t` on the invariant spheres between `a` and `a′`.
pub fn rho_both(s: &FillingPoint, t: &FillingPoint) -> Result<(f64, f64)> {
    check_pair(s, t)?;
    if s.base == t.base && s.height == t.height {
        return Ok((0.0, 0.0));
    }
    let line = common_line(s, t)?;
    Ok((rho_vertical(&line, s, t)?, rho_cross_ratio(&line, s, t)?))
}

fn rho_vertical(line: &FillingLine, s: &FillingPoint, t: &FillingPoint) -> Result<f64> {
    let mut l = line.clone();
    if l.a.is_infinite() {
        std::mem::swap(&mut l.a, &mut l.a_prime);
    }
    let g = l.normalizer();
    let (_, ls) = normalized_log_height(s, &g)?;
    let (_, lt) = normalized_log_height(t, &g)?;
    Ok((ls - lt).abs())
}

/// `ln(d(x,a′)/d(x,a))` with the infinity conventions of the model metric.
fn ln_apollonian(m: Model, x: &[f64], a: &MPoint, ap: &MPoint) -> f64 {
    let ln_d = |p: &MPoint| match p {
        MPoint::Finite(c) => m.dist_finite(x, c).ln(),
        MPoint::Infinity => 0.0,
    };
    ln_d(ap) - ln_d(a)
}

fn sphere_point(line: &FillingLine, s: &FillingPoint) -> Result<Vec<f64>> {
    let m = s.model;
    let map = s.to_automorphism();
    let b = match &s.base {
        MPoint::Finite(b) => b.clone(),
        MPoint::Infinity => m.origin(),
    };
    let mut e = vec![0.0; m.coord_dim()];
    e[0] = s.height;
    let x0 = m.mul(&b, &e);
    let x1 = match map.apply_finite(&x0) {
        MPoint::Finite(v) => v,
        MPoint::Infinity => return Err(Error::DegenerateInput("probe point maps to infinity".into())),
    };
    let f0 = ln_apollonian(m, &x0, &line.a, &line.a_prime);
    let f1 = ln_apollonian(m, &x1, &line.a, &line.a_prime);
    let c = 0.5 * (f0 + f1);
    let seg = |lam: f64| -> Vec<f64> { x0.iter().zip(&x1).map(|(p, q)| p + lam * (q - p)).collect() };
    let lam = bisect(|lam| ln_apollonian(m, &seg(lam), &line.a, &line.a_prime) - c, 0.0, 1.0, 0.0)
        .ok_or_else(|| Error::IterationDivergence("invariant sphere not crossed".into()))?;
    Ok(seg(lam))
}

fn rho_cross_ratio(line: &FillingLine, s: &FillingPoint, t: &FillingPoint) -> Result<f64> {
    let d = MetricRep::standard(s.model);
    let xs = MPoint::Finite(sphere_point(line, s)?);
    let xt = MPoint::Finite(sphere_point(line, t)?);
    Ok(scalar_cross_ratio(&d, &line.a, &xs, &xt, &line.a_prime)?.ln().abs())
}

/// `|ρ(s₁,s₃) − ρ(s₁,s₂) − ρ(s₂,s₃)|`.
pub fn line_geodesy_check(s1: &FillingPoint, s2: &FillingPoint, s3: &FillingPoint) -> Result<f64> {
    Ok((rho(s1, s3)? - rho(s1, s2)? - rho(s2, s3)?).abs())
}

/// Hyperbolic-plane distance in the upper half plane.
pub fn h2_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let chord = (p.0 - q.0).hypot(p.1 - q.1);
    2.0 * (chord / (2.0 * (p.1 * q.1).sqrt())).asinh()
}

/// Largest relative deviation of `ρ` from the upper-half-plane distance for
/// the points `(σ(u), r)` over a Ptolemy line `σ`.
pub fn hyp2_embed_check(line: &OrientedLine, samples: &[(f64, f64)]) -> Result<f64> {
    let pts = samples
        .iter()
        .map(|&(u, r)| FillingPoint::new(line.model, line.at(u), r))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let want = h2_distance(samples[i], samples[j]);
            if want == 0.0 {
                continue;
            }
            let got = rho(&pts[i], &pts[j])?;
            worst = worst.max((got - want).abs() / want);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub rs: Vec<f64>,
    pub errors: Vec<f64>,
    /// Slope of `ln|error|` against `ln r`.
    pub loglog_slope: f64,
    /// `max |error| / (r / |ω₀ω₁|)`.
    pub fitted_c: f64,
}

/// `E(r) = exp(ρ/2)·√(r₀r₁)/|ω₀ω₁| − 1` for `s_i = (ω_i, r)` over the schedule.
pub fn filling_asymptotic_check(model: Model, w0: &[f64], w1: &[f64], rs: &[f64]) -> Result<AsymptoticFit> {
    let d = model.dist_finite(w0, w1);
    let mut errors = Vec::with_capacity(rs.len());
    for &r in rs {
        if r > d / 4.0 {
            return Err(Error::DegenerateInput(format!("r = {r:e} exceeds |w0 w1|/4")));
        }
        let s0 = FillingPoint::new(model, w0.to_vec(), r)?;
        let s1 = FillingPoint::new(model, w1.to_vec(), r)?;
        let rho = rho(&s0, &s1)?;
        errors.push((0.5 * rho + r.ln() - d.ln()).exp_m1());
    }
    let fitted_c = rs.iter().zip(&errors).map(|(r, e)| e.abs() * d / r).fold(0.0, f64::max);
    Ok(AsymptoticFit { rs: rs.to_vec(), loglog_slope: loglog_slope(rs, &errors), errors, fitted_c })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GromovFit {
    pub rs: Vec<f64>,
    /// `e^{−(s₀|s₁)_b}` per height.
    pub estimates: Vec<f64>,
    /// `|estimate − |a₀a₁||`.
    pub errors: Vec<f64>,
    pub loglog_slope: f64,
}

/// Intersects the line `(a₀, a₁)` with the horospheres `{height = r}` of
/// `b(t) = ln(1/r_t)` and compares `e^{−(s₀|s₁)_b}` with `|a₀a₁|`.
pub fn gromov_product_check(model: Model, a0: &[f64], a1: &[f64], rs: &[f64]) -> Result<GromovFit> {
    let line = FillingLine {
        model,
        omega: MPoint::Infinity,
        a: MPoint::Finite(a0.to_vec()),
        a_prime: MPoint::Finite(a1.to_vec()),
    };
    let target = model.dist_finite(a0, a1);
    let (h_max, t_max) = line.max_height()?;
    let ln_h = |t: f64| line.point(t).map(|p| p.height.ln()).unwrap_or(f64::NEG_INFINITY);
    let mut estimates = Vec::with_capacity(rs.len());
    for &r in rs {
        if r > h_max {
            return Err(Error::HorosphereMiss { height: r, max_height: h_max });
        }
        let lr = r.ln();
        let mut lo = t_max - 1.0;
        while ln_h(lo) > lr {
            lo -= 2.0 * (t_max - lo);
        }
        let mut hi = t_max + 1.0;
        while ln_h(hi) > lr {
            hi += 2.0 * (hi - t_max);
        }
        let miss = || Error::HorosphereMiss { height: r, max_height: h_max };
        let t0 = bisect(|t| ln_h(t) - lr, lo, t_max, 0.0).ok_or_else(miss)?;
        let t1 = bisect(|t| ln_h(t) - lr, t_max, hi, 0.0).ok_or_else(miss)?;
        let s0 = line.point(t0)?;
        let s1 = line.point(t1)?;
        let b = |s: &FillingPoint| -s.height.ln();
        let gp = 0.5 * (b(&s0) + b(&s1) - rho(&s0, &s1)?);
        estimates.push((-gp).exp());
    }
    let errors: Vec<f64> = estimates.iter().map(|e| (e - target).abs()).collect();
    Ok(GromovFit { rs: rs.to_vec(), loglog_slope: loglog_slope(rs, &errors), estimates, errors })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointResiduals {
    /// `| |a₀ω_i|·|a₁ω_i| / r_i² − 1 |`.
    pub product: [f64; 2],
    /// `|a_iω_i| / (4r_i²/|ω₀ω₁|)`; the bound holds when this is below 1.
    pub bound_ratio: [f64; 2],
    pub tau: [f64; 2],
}

/// Checks the endpoint estimates for `s₀, s₁` with `ω = ∞` on their common
/// line `(a₀, a₁)`, ordered `a₀, s₀, s₁, a₁`.
///
/// The quantities at `ω_i` are evaluated after translating `ω_i` to the
/// origin, where `a_i` is stored without cancellation.
pub fn endpoint_proximity_check(s0: &FillingPoint, s1: &FillingPoint) -> Result<EndpointResiduals> {
    let m = s0.model;
    let (w0, w1) = match (&s0.base, &s1.base, &s0.omega, &s1.omega) {
        (MPoint::Finite(a), MPoint::Finite(b), MPoint::Infinity, MPoint::Infinity) => (a.clone(), b.clone()),
        _ => return Err(Error::DegenerateInput("endpoint estimates need finite bases and omega = inf".into())),
    };
    let w = [w0, w1];
    let r = [s0.height, s1.height];
    let d01 = m.dist_finite(&w[0], &w[1]);
    let mut product = [0.0; 2];
    let mut bound_ratio = [0.0; 2];
    let mut tau = [0.0; 2];
    for i in 0..2 {
        let t0 = FillingPoint::new(m, m.between(&w[i], &w[0]), r[0])?;
        let t1 = FillingPoint::new(m, m.between(&w[i], &w[1]), r[1])?;
        let line = common_line(&t0, &t1)?;
        let (a0, a1) = match (&line.a, &line.a_prime) {
            (MPoint::Finite(a), MPoint::Finite(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::DegenerateInput("endpoints must be finite".into())),
        };
        let (u0, u1) = (line.tau_of(&t0)?, line.tau_of(&t1)?);
        if u0 >= u1 {
            return Err(Error::OrderingViolation(format!("tau(s0) = {u0} is not below tau(s1) = {u1}")));
        }
        if i == 0 {
            tau = [u0, u1];
        }
        let p = m.gauge(&a0) * m.gauge(&a1);
        product[i] = (p / (r[i] * r[i]) - 1.0).abs();
        let near = if i == 0 { &a0 } else { &a1 };
        bound_ratio[i] = m.gauge(near) / (4.0 * r[i] * r[i] / d01);
    }
    Ok(EndpointResiduals { product, bound_ratio, tau })
}
