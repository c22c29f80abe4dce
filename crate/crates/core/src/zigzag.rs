//! Zigzag curves: dyadic staircases along Busemann-parallel foliations and
//! their limits.
//!
//! The depth-`p` polygon starts at `o` and moves by `s_i / 2^{p−1}` along the
//! parallel of `l_i` through the current vertex, cycling through the lines.
//! Vertices with negative index run the cycle backwards with reversed
//! orientations. `γ_p` is the polygon parameterized proportionally to the
//! step lengths, so one cycle takes time `Σs / 2^{p−1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::slope;
use crate::model::{Model, OrientedLine};
use crate::numeric::{chart_distance, norm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZigzagSpec {
    pub model: Model,
    pub o: Vec<f64>,
    /// Only the directions of the lines matter.
    pub lines: Vec<OrientedLine>,
    pub steps: Vec<f64>,
    pub p_max: u32,
    /// Successive-depth difference at which the limit counts as reached;
    /// defaults to `1e-3·max(Σs, (Σs)²)`.
    pub converge_tol: Option<f64>,
}

impl ZigzagSpec {
    pub fn new(model: Model, o: Vec<f64>, lines: Vec<OrientedLine>, steps: Vec<f64>, p_max: u32) -> Result<Self> {
        model.check_point(&crate::point::MPoint::Finite(o.clone()))?;
        if lines.len() != steps.len() || lines.is_empty() {
            return Err(Error::DegenerateInput("need one step length per line".into()));
        }
        if steps.iter().any(|s| !(*s >= 0.0)) || !(steps.iter().sum::<f64>() > 0.0) {
            return Err(Error::DegenerateInput("step lengths must be nonnegative with positive sum".into()));
        }
        if lines.iter().any(|l| l.model != model) {
            return Err(Error::DegenerateInput("lines live in a different model".into()));
        }
        Ok(ZigzagSpec { model, o, lines, steps, p_max, converge_tol: None })
    }

    pub fn total(&self) -> f64 {
        self.steps.iter().sum()
    }

    fn tol(&self) -> f64 {
        let s = self.total();
        self.converge_tol.unwrap_or(1e-3 * s.max(s * s))
    }

    /// Constant of the Cauchy schedule `C·2^{−p}` on the sampled grid.
    pub fn cauchy_constant(&self) -> f64 {
        let s = self.total();
        8.0 * s * s + 8.0 * s
    }

    fn step(&self, i: usize, scale: f64, sign: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.lines[i].direction.iter().map(|d| sign * scale * self.steps[i] * d).collect();
        if let Model::Heisenberg { .. } = self.model {
            v.push(0.0);
        }
        v
    }
}

/// Vertices `v_p^n` for `n ∈ [from, to]`, in index order.
pub fn zigzag_polygon(spec: &ZigzagSpec, p: u32, from: i64, to: i64) -> Result<Vec<Vec<f64>>> {
    if p < 1 {
        return Err(Error::DegenerateInput("depth must be at least 1".into()));
    }
    if from > to {
        return Ok(Vec::new());
    }
    let m = spec.model;
    let k = spec.lines.len() as i64;
    let scale = 0.5f64.powi(p as i32 - 1);
    let fwd: Vec<Vec<f64>> = (0..k as usize).map(|i| spec.step(i, scale, 1.0)).collect();
    let bwd: Vec<Vec<f64>> = (0..k as usize).map(|i| spec.step(i, scale, -1.0)).collect();
    let mut out = Vec::with_capacity((to - from + 1) as usize);
    let mut neg: Vec<Vec<f64>> = Vec::new();
    if from < 0 {
        let mut v = spec.o.clone();
        for n in (from..0).rev() {
            // v^{n} = v^{n+1}·(step n mod k)⁻¹
            v = m.mul(&v, &bwd[n.rem_euclid(k) as usize]);
            if n <= to {
                neg.push(v.clone());
            }
        }
        neg.reverse();
    }
    out.extend(neg);
    if to >= 0 {
        let mut v = spec.o.clone();
        if from <= 0 {
            out.push(v.clone());
        }
        for n in 1..=to {
            v = m.mul(&v, &fwd[(n - 1).rem_euclid(k) as usize]);
            if n >= from {
                out.push(v.clone());
            }
        }
    }
    Ok(out)
}

/// Samples `γ_p(t)` at `t = j·Σs/8`, `j ∈ [−J, J]`; requires `p ≥ 4` so each
/// grid point is a cycle boundary.
fn grid_samples(spec: &ZigzagSpec, p: u32, half: i64) -> Result<Vec<Vec<f64>>> {
    let k = spec.lines.len() as i64;
    let per = k << (p - 4);
    let all = zigzag_polygon(spec, p, -half * per, half * per)?;
    Ok((-half..=half).map(|j| all[((j + half) * per) as usize].clone()).collect())
}

pub const GRID_HALF: i64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZigzagResult {
    pub grid: Vec<f64>,
    /// `γ_{p_max}` on the grid.
    pub samples: Vec<Vec<f64>>,
    /// `(p, max_j |γ_p(t_j) − γ_{p+1}(t_j)|)` in chart coordinates.
    pub depth_diffs: Vec<(u32, f64)>,
    /// First depth whose successive difference is within the convergence
    /// tolerance.
    pub converged_depth: Option<u32>,
    pub degenerate: bool,
    /// `Σ α_i s_i = 0` for the Busemann functions of the model frame.
    pub analytic_degenerate: bool,
    /// Fitted `λ` in `d(o, γ(t)) = λ|t|`; for orthogonal lines `λ = √(Σs²)/Σs`.
    pub speed: Option<f64>,
    pub speed_fit_residual: Option<f64>,
    pub limit_line: Option<OrientedLine>,
    /// `(p, max_j |line(λ t_j)⁻¹ γ_p(t_j)|)` against the fitted limit line.
    pub drift: Vec<(u32, f64)>,
}

/// Cauchy-certified pointwise limit of the depth sequence.
pub fn zigzag_limit(spec: &ZigzagSpec) -> Result<ZigzagResult> {
    if spec.p_max < 6 {
        return Err(Error::DegenerateInput("p_max must be at least 6".into()));
    }
    let m = spec.model;
    let total = spec.total();
    let grid: Vec<f64> = (-GRID_HALF..=GRID_HALF).map(|j| j as f64 * total / 8.0).collect();
    let depths: Vec<u32> = (4..=spec.p_max).collect();
    let levels = depths.iter().map(|&p| grid_samples(spec, p, GRID_HALF)).collect::<Result<Vec<_>>>()?;
    let c = spec.cauchy_constant();
    let tol = spec.tol();
    let mut depth_diffs = Vec::new();
    let mut converged_depth = None;
    for w in 0..levels.len() - 1 {
        let p = depths[w];
        let diff = levels[w]
            .iter()
            .zip(&levels[w + 1])
            .map(|(a, b)| chart_distance(a, b))
            .fold(0.0, f64::max);
        let bound = c * 0.5f64.powi(p as i32);
        if diff > bound {
            return Err(Error::NonCauchy { depth: p, diff, bound });
        }
        depth_diffs.push((p, diff));
        if converged_depth.is_none() && diff <= tol {
            converged_depth = Some(p + 1);
        }
    }
    let (last_p, last_diff) = *depth_diffs.last().unwrap();
    if converged_depth.is_none() {
        return Err(Error::NonCauchy { depth: last_p, diff: last_diff, bound: tol });
    }
    let samples = levels.last().unwrap().clone();
    let mut diameter = 0.0f64;
    for a in &samples {
        for b in &samples {
            diameter = diameter.max(m.dist_finite(a, b));
        }
    }
    let degenerate = diameter < 1e-6 * total;
    let analytic_degenerate = analytic_degeneracy(spec)?;
    let mut res = ZigzagResult {
        grid: grid.clone(),
        samples,
        depth_diffs,
        converged_depth,
        degenerate,
        analytic_degenerate,
        speed: None,
        speed_fit_residual: None,
        limit_line: None,
        drift: Vec::new(),
    };
    if degenerate {
        return Ok(res);
    }
    let ds: Vec<f64> = res.samples.iter().map(|g| m.dist_finite(&spec.o, g)).collect();
    let num: f64 = grid.iter().zip(&ds).map(|(t, d)| t.abs() * d).sum();
    let den: f64 = grid.iter().map(|t| t * t).sum();
    let lambda = num / den;
    let fit_res = grid.iter().zip(&ds).map(|(t, d)| (d - lambda * t.abs()).abs()).fold(0.0, f64::max);
    let far = m.between(&spec.o, res.samples.last().unwrap());
    let hor = m.horizontal(&far).to_vec();
    let line = OrientedLine::new(m, spec.o.clone(), hor)?;
    res.drift = depths
        .iter()
        .zip(&levels)
        .map(|(&p, lv)| {
            let worst = grid
                .iter()
                .zip(lv)
                .map(|(&t, g)| norm(&m.between(&line.at(lambda * t), g)))
                .fold(0.0, f64::max);
            (p, worst)
        })
        .collect();
    res.speed = Some(lambda);
    res.speed_fit_residual = Some(fit_res);
    res.limit_line = Some(line);
    Ok(res)
}

/// Whether `Σ α_i s_i` vanishes for the Busemann functions of every line of
/// the model frame through `o`.
fn analytic_degeneracy(spec: &ZigzagSpec) -> Result<bool> {
    let m = spec.model;
    for e in m.horizontal_frame() {
        let le = OrientedLine::new(m, spec.o.clone(), e)?;
        let beta = spec_beta(spec, &le)?;
        if beta.abs() > 1e-6 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `β = Σ α_i s_i / Σ s_i` with `α_i = slope(l_i; l)`.
fn spec_beta(spec: &ZigzagSpec, l: &OrientedLine) -> Result<f64> {
    let mut acc = 0.0;
    for (li, si) in spec.lines.iter().zip(&spec.steps) {
        if *si != 0.0 {
            acc += slope(li, l)?.value * si;
        }
    }
    Ok(acc / spec.total())
}

/// `|slope(limit; l_i) + s_i/(λ Σs)|` for each line of the spec; meaningful
/// when the lines are mutually orthogonal.
pub fn zigzag_slope_check(result: &ZigzagResult, spec: &ZigzagSpec) -> Result<Vec<f64>> {
    let (line, lambda) = match (&result.limit_line, result.speed) {
        (Some(l), Some(s)) => (l, s),
        _ => return Err(Error::DegenerateInput("zigzag limit is degenerate".into())),
    };
    let total = spec.total();
    spec.lines
        .iter()
        .zip(&spec.steps)
        .map(|(li, si)| Ok((slope(line, li)?.value + si / (lambda * total)).abs()))
        .collect()
}

/// `max_j |b(γ(t_j)) − β t_j|` for the Busemann function of `l` normalised
/// at `o`, with `β = Σ α_i s_i / Σ s_i`.
pub fn busemann_affinity_check(result: &ZigzagResult, spec: &ZigzagSpec, l: &OrientedLine) -> Result<f64> {
    let b = crate::geodesy::BusemannFn::with_anchor(l.clone(), spec.o.clone());
    let beta = spec_beta(spec, l)?;
    let mut worst = 0.0f64;
    for (t, g) in result.grid.iter().zip(&result.samples) {
        worst = worst.max((b.eval(g)? - beta * t).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Orthogonalized {
    Line { line: OrientedLine, alphas: Vec<f64> },
    /// `Σ α_i² = 1`: `l` lies in the span of the frame.
    Degenerate { sum_alpha_sq: f64 },
}

/// Builds a line through `o` orthogonal to the mutually orthogonal lines
/// `existing` from the zigzag with weights `s_i = α_i/(1+α)`,
/// `s_{k+1} = 1/(1+α)`, after orienting each `l_i` so `α_i = slope(l; l_i) ≥ 0`.
pub fn orthogonalize(existing: &[OrientedLine], l: &OrientedLine, o: &[f64]) -> Result<Orthogonalized> {
    let m = l.model;
    let mut lines = Vec::with_capacity(existing.len() + 1);
    let mut alphas = Vec::with_capacity(existing.len());
    for li in existing {
        let a = slope(l, li)?.value;
        if a < 0.0 {
            lines.push(li.reversed());
            alphas.push(-a);
        } else {
            lines.push(li.clone());
            alphas.push(a);
        }
    }
    let sum_sq: f64 = alphas.iter().map(|a| a * a).sum();
    if (sum_sq - 1.0).abs() <= 1e-6 {
        return Ok(Orthogonalized::Degenerate { sum_alpha_sq: sum_sq });
    }
    let alpha: f64 = alphas.iter().sum();
    let mut steps: Vec<f64> = alphas.iter().map(|a| a / (1.0 + alpha)).collect();
    steps.push(1.0 / (1.0 + alpha));
    lines.push(l.clone());
    let spec = ZigzagSpec::new(m, o.to_vec(), lines, steps, 14)?;
    let res = zigzag_limit(&spec)?;
    match res.limit_line {
        Some(line) => Ok(Orthogonalized::Line { line, alphas }),
        None => Ok(Orthogonalized::Degenerate { sum_alpha_sq: sum_sq }),
    }
}
