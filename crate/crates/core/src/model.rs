//! Concrete boundary models.
//!
//! * [`Model::Euclidean`]: the extended Euclidean space `R^n ∪ {∞}` with the
//!   Euclidean metric.
//! * [`Model::Heisenberg`]: the Heisenberg group `C^m × R` with the Cygan
//!   metric `d((z,t),(w,s)) = | |z−w|² + i(s − t + 2 Im⟨z,w⟩) |^{1/2}`,
//!   completed by a point at infinity.
//!
//! Heisenberg coordinates are laid out as `[x1, y1, …, xm, ym, t]` with
//! `z_j = x_j + i y_j`. The group law is
//! `(z,t)·(w,s) = (z + w, t + s + 2 Im⟨w,z⟩)` with `⟨a,b⟩ = Σ a_j conj(b_j)`,
//! so the Cygan metric is `d(p,q) = ‖p⁻¹q‖` for the Korányi gauge
//! `‖(z,t)‖ = (|z|⁴ + t²)^{1/4}`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{dot, norm};
use crate::point::MPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Euclidean { dim: usize },
    /// `m` is the complex dimension of the horizontal part.
    Heisenberg { m: usize },
}

/// `Im⟨w,z⟩` for packed complex vectors `z = (x,y)`, `w = (u,v)`.
fn im_inner(w: &[f64], z: &[f64]) -> f64 {
    w.chunks_exact(2)
        .zip(z.chunks_exact(2))
        .map(|(w, z)| w[1] * z[0] - w[0] * z[1])
        .sum()
}

impl Model {
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim >= 1, "Euclidean dimension must be positive");
        Model::Euclidean { dim }
    }

    pub fn heisenberg(m: usize) -> Self {
        assert!(m >= 1, "Heisenberg complex dimension must be positive");
        Model::Heisenberg { m }
    }

    /// Number of real coordinates of a finite point.
    pub fn coord_dim(&self) -> usize {
        match *self {
            Model::Euclidean { dim } => dim,
            Model::Heisenberg { m } => 2 * m + 1,
        }
    }

    /// Dimension of the horizontal (Ptolemy-line) directions; equals the
    /// dimension of the fibration base.
    pub fn horizontal_dim(&self) -> usize {
        match *self {
            Model::Euclidean { dim } => dim,
            Model::Heisenberg { m } => 2 * m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Euclidean { .. } => "euclidean",
            Model::Heisenberg { .. } => "heisenberg",
        }
    }

    pub fn check_point(&self, p: &MPoint) -> Result<()> {
        if let MPoint::Finite(c) = p {
            if c.len() != self.coord_dim() {
                return Err(Error::DimensionMismatch { expected: self.coord_dim(), got: c.len() });
            }
        }
        Ok(())
    }

    pub fn origin(&self) -> Vec<f64> {
        vec![0.0; self.coord_dim()]
    }

    /// Group product `a·b` (vector addition in the Euclidean model).
    pub fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        match *self {
            Model::Euclidean { .. } => a.iter().zip(b).map(|(x, y)| x + y).collect(),
            Model::Heisenberg { m } => {
                let h = 2 * m;
                let mut out: Vec<f64> = a[..h].iter().zip(&b[..h]).map(|(x, y)| x + y).collect();
                out.push(a[h] + b[h] + 2.0 * im_inner(&b[..h], &a[..h]));
                out
            }
        }
    }

    pub fn group_inv(&self, a: &[f64]) -> Vec<f64> {
        a.iter().map(|x| -x).collect()
    }

    /// `a⁻¹·b`, the displacement from `a` to `b`.
    pub fn between(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        self.mul(&self.group_inv(a), b)
    }

    /// Distance of a finite point from the identity.
    pub fn gauge(&self, a: &[f64]) -> f64 {
        match *self {
            Model::Euclidean { .. } => norm(a),
            Model::Heisenberg { m } => {
                let h = 2 * m;
                let z2: f64 = a[..h].iter().map(|x| x * x).sum();
                let t = a[h];
                (z2 * z2 + t * t).sqrt().sqrt()
            }
        }
    }

    /// Model distance between finite points.
    pub fn dist_finite(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Model::Euclidean { .. } => crate::numeric::chart_distance(a, b),
            Model::Heisenberg { m } => {
                let h = 2 * m;
                let z2: f64 = a[..h].iter().zip(&b[..h]).map(|(x, y)| (x - y) * (x - y)).sum();
                let vert = b[h] - a[h] + 2.0 * im_inner(&a[..h], &b[..h]);
                (z2 * z2 + vert * vert).sqrt().sqrt()
            }
        }
    }

    /// Model distance with the point at infinity infinitely remote.
    pub fn dist(&self, a: &MPoint, b: &MPoint) -> f64 {
        match (a, b) {
            (MPoint::Finite(x), MPoint::Finite(y)) => self.dist_finite(x, y),
            (MPoint::Infinity, MPoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// Dilation `δ_λ`: `x ↦ λx`, resp. `(z,t) ↦ (λz, λ²t)`.
    pub fn dilate(&self, lambda: f64, a: &[f64]) -> Vec<f64> {
        match *self {
            Model::Euclidean { .. } => a.iter().map(|x| lambda * x).collect(),
            Model::Heisenberg { m } => {
                let h = 2 * m;
                let mut out: Vec<f64> = a[..h].iter().map(|x| lambda * x).collect();
                out.push(lambda * lambda * a[h]);
                out
            }
        }
    }

    /// Applies a real matrix (row-major, size `horizontal_dim²`) to the
    /// horizontal coordinates; the vertical coordinate is untouched.
    pub fn rotate(&self, matrix: &[f64], a: &[f64]) -> Vec<f64> {
        let h = self.horizontal_dim();
        let mut out: Vec<f64> = (0..h).map(|i| dot(&matrix[i * h..(i + 1) * h], &a[..h])).collect();
        out.extend_from_slice(&a[h..]);
        out
    }

    /// The unit space inversion swapping `0` and `∞`.
    ///
    /// Euclidean: `x ↦ −x/|x|²`. Heisenberg: the Korányi inversion composed
    /// with `z ↦ −z`, i.e. `(z,t) ↦ (−z/(|z|² + it), −t/(|z|⁴ + t²))`.
    pub fn unit_inversion(&self, p: &MPoint) -> MPoint {
        let a = match p {
            MPoint::Infinity => return MPoint::Finite(self.origin()),
            MPoint::Finite(a) => a,
        };
        if a.iter().all(|x| *x == 0.0) {
            return MPoint::Infinity;
        }
        MPoint::Finite(match *self {
            Model::Euclidean { .. } => {
                let n2: f64 = a.iter().map(|x| x * x).sum();
                a.iter().map(|x| -x / n2).collect()
            }
            Model::Heisenberg { m } => {
                let h = 2 * m;
                let re: f64 = a[..h].iter().map(|x| x * x).sum();
                let im = a[h];
                let den = re * re + im * im;
                let mut out = Vec::with_capacity(h + 1);
                for c in a[..h].chunks_exact(2) {
                    // (x + iy)·(re − i·im) / den, negated
                    out.push(-(c[0] * re + c[1] * im) / den);
                    out.push(-(c[1] * re - c[0] * im) / den);
                }
                out.push(-im / den);
                out
            }
        })
    }

    /// Point at parameter `s` on the Ptolemy line through `through` with unit
    /// horizontal direction `dir`.
    pub fn line_point(&self, through: &[f64], dir: &[f64], s: f64) -> Vec<f64> {
        let mut step: Vec<f64> = dir.iter().map(|v| s * v).collect();
        if let Model::Heisenberg { .. } = self {
            step.push(0.0);
        }
        self.mul(through, &step)
    }

    /// Horizontal part of a displacement.
    pub fn horizontal<'a>(&self, a: &'a [f64]) -> &'a [f64] {
        &a[..self.horizontal_dim()]
    }

    /// Vertical part of a displacement (zero for the Euclidean model).
    pub fn vertical(&self, a: &[f64]) -> f64 {
        match self {
            Model::Euclidean { .. } => 0.0,
            Model::Heisenberg { m } => a[2 * m],
        }
    }

    /// Projection onto the base of the canonical fibration.
    pub fn project(&self, a: &[f64]) -> Vec<f64> {
        a[..self.horizontal_dim()].to_vec()
    }

    /// Orthonormal horizontal frame; in the Heisenberg model this is
    /// `{e_1, i e_1, …, e_m, i e_m}`.
    pub fn horizontal_frame(&self) -> Vec<Vec<f64>> {
        let h = self.horizontal_dim();
        (0..h)
            .map(|i| {
                let mut e = vec![0.0; h];
                e[i] = 1.0;
                e
            })
            .collect()
    }

    /// Whether a real matrix on horizontal coordinates is an automorphism-
    /// compatible rotation (orthogonal; additionally complex-linear for the
    /// Heisenberg model).
    pub fn is_rotation(&self, matrix: &[f64], tol: f64) -> bool {
        let h = self.horizontal_dim();
        if matrix.len() != h * h {
            return false;
        }
        for i in 0..h {
            for j in 0..h {
                let g: f64 = (0..h).map(|k| matrix[k * h + i] * matrix[k * h + j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                if (g - e).abs() > tol {
                    return false;
                }
            }
        }
        if let Model::Heisenberg { m } = *self {
            // commute with the complex structure J(x, y) = (−y, x)
            for blk_r in 0..m {
                for blk_c in 0..m {
                    let a = matrix[(2 * blk_r) * h + 2 * blk_c];
                    let b = matrix[(2 * blk_r) * h + 2 * blk_c + 1];
                    let c = matrix[(2 * blk_r + 1) * h + 2 * blk_c];
                    let d = matrix[(2 * blk_r + 1) * h + 2 * blk_c + 1];
                    if (a - d).abs() > tol || (b + c).abs() > tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    // ----- sampling helpers -------------------------------------------------

    /// Random finite point; horizontal coordinates ~ N(0, spread²), the
    /// Heisenberg vertical coordinate ~ N(0, spread⁴).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, spread: f64) -> Vec<f64> {
        let h = self.horizontal_dim();
        let mut v: Vec<f64> = (0..h).map(|_| spread * rng.sample::<f64, _>(StandardNormal)).collect();
        if let Model::Heisenberg { .. } = self {
            v.push(spread * spread * rng.sample::<f64, _>(StandardNormal));
        }
        v
    }

    /// Uniform random unit horizontal direction.
    pub fn random_direction<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..self.horizontal_dim()).map(|_| rng.sample(StandardNormal)).collect();
            let n = norm(&v);
            if n > 1e-6 {
                return v.into_iter().map(|x| x / n).collect();
            }
        }
    }

    /// Random rotation (orthogonal, resp. unitary) by Gram–Schmidt.
    pub fn random_rotation<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match *self {
            Model::Euclidean { dim } => {
                let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
                while cols.len() < dim {
                    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    for c in &cols {
                        let p = dot(&v, c);
                        v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
                    }
                    let n = norm(&v);
                    if n > 1e-6 {
                        cols.push(v.into_iter().map(|x| x / n).collect());
                    }
                }
                let mut mat = vec![0.0; dim * dim];
                for (j, c) in cols.iter().enumerate() {
                    for i in 0..dim {
                        mat[i * dim + j] = c[i];
                    }
                }
                mat
            }
            Model::Heisenberg { m } => {
                // complex Gram–Schmidt on columns of an m×m complex matrix
                let mut cols: Vec<Vec<(f64, f64)>> = Vec::with_capacity(m);
                while cols.len() < m {
                    let mut v: Vec<(f64, f64)> =
                        (0..m).map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
                    for c in &cols {
                        // projection coefficient ⟨v, c⟩ = Σ v conj(c)
                        let (mut pr, mut pi) = (0.0, 0.0);
                        for (a, b) in v.iter().zip(c) {
                            pr += a.0 * b.0 + a.1 * b.1;
                            pi += a.1 * b.0 - a.0 * b.1;
                        }
                        for (a, b) in v.iter_mut().zip(c) {
                            a.0 -= pr * b.0 - pi * b.1;
                            a.1 -= pr * b.1 + pi * b.0;
                        }
                    }
                    let n = v.iter().map(|a| a.0 * a.0 + a.1 * a.1).sum::<f64>().sqrt();
                    if n > 1e-6 {
                        cols.push(v.into_iter().map(|a| (a.0 / n, a.1 / n)).collect());
                    }
                }
                let h = 2 * m;
                let mut mat = vec![0.0; h * h];
                for (j, c) in cols.iter().enumerate() {
                    for (i, &(re, im)) in c.iter().enumerate() {
                        mat[(2 * i) * h + 2 * j] = re;
                        mat[(2 * i) * h + 2 * j + 1] = -im;
                        mat[(2 * i + 1) * h + 2 * j] = im;
                        mat[(2 * i + 1) * h + 2 * j + 1] = re;
                    }
                }
                mat
            }
        }
    }
}

/// Unit-speed parameterized Ptolemy line through a finite point.
///
/// Euclidean: `s ↦ through + s·direction`. Heisenberg: the left translate
/// `s ↦ through·(s·direction, 0)` of a horizontal line. Reversing the
/// orientation negates the direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub model: Model,
    pub through: Vec<f64>,
    pub direction: Vec<f64>,
}

impl OrientedLine {
    pub fn new(model: Model, through: Vec<f64>, direction: Vec<f64>) -> Result<Self> {
        model.check_point(&MPoint::Finite(through.clone()))?;
        if direction.len() != model.horizontal_dim() {
            return Err(Error::DimensionMismatch { expected: model.horizontal_dim(), got: direction.len() });
        }
        let n = norm(&direction);
        if !(n > 0.0) {
            return Err(Error::DegenerateInput("zero line direction".into()));
        }
        let direction = direction.into_iter().map(|x| x / n).collect();
        Ok(OrientedLine { model, through, direction })
    }

    pub fn at(&self, s: f64) -> Vec<f64> {
        self.model.line_point(&self.through, &self.direction, s)
    }

    pub fn point(&self, s: f64) -> MPoint {
        MPoint::Finite(self.at(s))
    }

    pub fn reversed(&self) -> Self {
        OrientedLine {
            model: self.model,
            through: self.through.clone(),
            direction: self.direction.iter().map(|x| -x).collect(),
        }
    }

    /// The Busemann-parallel line with compatible orientation through `p`.
    pub fn parallel_through(&self, p: &[f64]) -> Self {
        OrientedLine { model: self.model, through: p.to_vec(), direction: self.direction.clone() }
    }

    /// Same line, reparameterized so that `s = 0` sits at the old `s0`.
    pub fn recentered(&self, s0: f64) -> Self {
        OrientedLine { model: self.model, through: self.at(s0), direction: self.direction.clone() }
    }
}

/// Builds the Ptolemy line through `through` with the given direction.
///
/// In the Heisenberg model `direction` must be horizontal: a full
/// coordinate vector with a nonzero vertical entry is rejected, because
/// vertical curves satisfy `d((0,t),(0,t')) = |t−t'|^{1/2}` and are not lines.
pub fn ptolemy_line(model: Model, through: &[f64], direction: &[f64]) -> Result<OrientedLine> {
    let h = model.horizontal_dim();
    let dir = if direction.len() == model.coord_dim() && direction.len() != h {
        let vertical = direction[h];
        if vertical.abs() > 1e-12 * norm(direction).max(1e-300) {
            return Err(Error::NonHorizontalDirection { vertical });
        }
        direction[..h].to_vec()
    } else {
        direction.to_vec()
    };
    OrientedLine::new(model, through.to_vec(), dir)
}

/// A closed curve parameterized by `u ∈ [0, 1)` (periodic).
pub trait Curve {
    fn model(&self) -> Model;
    fn point(&self, u: f64) -> MPoint;
}

/// A curve given by a closure.
pub struct FnCurve<F: Fn(f64) -> MPoint> {
    pub model: Model,
    pub f: F,
}

impl<F: Fn(f64) -> MPoint> Curve for FnCurve<F> {
    fn model(&self) -> Model {
        self.model
    }
    fn point(&self, u: f64) -> MPoint {
        (self.f)(u.rem_euclid(1.0))
    }
}

/// The Möbius image of an extended Ptolemy line `line ∪ {∞}`.
///
/// `u = 0` corresponds to `∞` on the line, `u ∈ (0,1)` to the line parameter
/// `tan(π(u − ½))`.
#[derive(Debug, Clone)]
pub struct PtolemyCircle {
    pub line: OrientedLine,
    pub map: crate::automorphism::Automorphism,
}

impl PtolemyCircle {
    pub fn line(line: OrientedLine) -> Self {
        let map = crate::automorphism::Automorphism::identity(line.model);
        PtolemyCircle { line, map }
    }

    pub fn image(line: OrientedLine, map: crate::automorphism::Automorphism) -> Self {
        PtolemyCircle { line, map }
    }

    pub fn param_to_line(u: f64) -> Option<f64> {
        let u = u.rem_euclid(1.0);
        if u == 0.0 {
            None
        } else {
            Some((std::f64::consts::PI * (u - 0.5)).tan())
        }
    }
}

impl Curve for PtolemyCircle {
    fn model(&self) -> Model {
        self.line.model
    }
    fn point(&self, u: f64) -> MPoint {
        let p = match Self::param_to_line(u) {
            None => MPoint::Infinity,
            Some(s) => self.line.point(s),
        };
        self.map.apply(&p)
    }
}

/// Samples `samples` cyclically ordered quadruples along `curve` and checks
/// the Ptolemy equality relative to the largest product.
pub fn is_ptolemy_circle<C: Curve + ?Sized, R: Rng + ?Sized>(
    d: &crate::mobius::MetricRep,
    curve: &C,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> bool {
    max_circle_residual(d, curve, samples, rng).is_some_and(|r| r <= tol)
}

/// Largest relative Ptolemy-equality residual over sampled ordered
/// quadruples; `None` if some quadruple could not be evaluated.
pub fn max_circle_residual<C: Curve + ?Sized, R: Rng + ?Sized>(
    d: &crate::mobius::MetricRep,
    curve: &C,
    samples: usize,
    rng: &mut R,
) -> Option<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut u: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
        u.sort_by(f64::total_cmp);
        let q = crate::mobius::Quadruple(u.map(|t| curve.point(t)));
        let r = crate::mobius::ptolemy_equality_relative(d, &q).ok()?;
        worst = worst.max(r.abs());
    }
    Some(worst)
}
