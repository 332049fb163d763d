//! Numerical radius `w(T) = max_θ λ_max(Re(e^{iθ} T))`.
//!
//! The support function of the numerical range is scanned on a uniform grid
//! over the full circle and every competitive local maximum is refined by
//! golden-section search. Each branch of the support function dominates a
//! cosine `w·cos(θ − θ*)` around its peak, so a bracket of width `δ` loses at
//! most `‖T‖·δ²/8`; that is the reported certified error.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    hermitian_eig, inner, lambda_max, lambda_max_hint, lambda_min, normalized, operator_norm, CMatrix, LinalgError, TridiagWorkspace,
};
use crate::rng::CounterRng;

/// Angular width at which golden-section refinement stops.
pub const ANGULAR_TOL: f64 = 1e-12;
pub const MIN_GRID: usize = 16;
/// Number of angles whose eigenvectors seed [`radius_oracle`].
pub const ORACLE_ANGLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusOptions {
    pub grid: usize,
    pub tol: f64,
    /// Upper bound on golden-section refinements, taken in order of grid value.
    #[serde(default = "default_max_refinements")]
    pub max_refinements: usize,
}

fn default_max_refinements() -> usize {
    16
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            grid: 1024,
            tol: 1e-9,
            max_refinements: default_max_refinements(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub value: f64,
    /// Angle in `[0, 2π)` at which `value` is attained.
    pub theta_star: f64,
    pub certified_error: f64,
    pub grid_points: usize,
    pub refinements: usize,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumradError {
    #[error("grid of {0} points is below the minimum of 16")]
    GridTooSmall(usize),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("need at least 3 boundary points, got {0}")]
    TooFewBoundaryPoints(usize),
    #[error("certified error {certified:e} exceeds requested tolerance {tol:e}")]
    ToleranceNotMet { certified: f64, tol: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `θ ↦ λ_max(cos θ · Re T + sin θ · Re(iT))` with reusable buffers.
///
/// The support function is `‖T‖`-Lipschitz, so the previous evaluation gives
/// an upper bound that warm-starts the next eigenvalue iteration.
struct SupportFunction {
    n: usize,
    re_part: Vec<Complex64>,
    re_of_i: Vec<Complex64>,
    buf: Vec<Complex64>,
    ws: TridiagWorkspace,
    lipschitz: f64,
    last: Option<(f64, f64)>,
}

impl SupportFunction {
    fn new(t: &CMatrix) -> Self {
        let re_part = t.hermitian_part();
        let re_of_i = t.scale(Complex64::new(0.0, 1.0)).hermitian_part();
        Self {
            n: t.n(),
            re_part: re_part.data().to_vec(),
            re_of_i: re_of_i.data().to_vec(),
            buf: vec![Complex64::new(0.0, 0.0); t.n() * t.n()],
            ws: TridiagWorkspace::default(),
            lipschitz: operator_norm(t) * (1.0 + 1e-9),
            last: None,
        }
    }

    fn fill(&mut self, theta: f64) {
        let (s, c) = theta.sin_cos();
        for ((h, a), b) in self.buf.iter_mut().zip(&self.re_part).zip(&self.re_of_i) {
            *h = a * c + b * s;
        }
    }

    fn eval(&mut self, theta: f64) -> f64 {
        self.fill(theta);
        let hint = self
            .last
            .map(|(t0, v0)| v0 + self.lipschitz * (theta - t0).abs() + 1e-13 * self.lipschitz);
        let v = lambda_max_hint(self.n, &self.buf, &mut self.ws, hint);
        self.last = Some((theta, v));
        v
    }

    fn matrix(&mut self, theta: f64) -> CMatrix {
        self.fill(theta);
        CMatrix::from_raw(self.n, self.buf.clone())
    }
}

/// `H_θ = (e^{iθ}T + e^{-iθ}T*)/2`.
pub fn rotated_hermitian(t: &CMatrix, theta: f64) -> CMatrix {
    SupportFunction::new(t).matrix(theta)
}

/// `λ_max(H_θ)`, the support function of the numerical range in direction `θ`.
pub fn rotation_support(t: &CMatrix, theta: f64) -> f64 {
    SupportFunction::new(t).eval(theta)
}

struct Refined {
    value: f64,
    theta: f64,
    width: f64,
}

fn golden_section_max(f: &mut SupportFunction, mut lo: f64, mut hi: f64) -> Refined {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f.eval(x1);
    let mut f2 = f.eval(x2);
    let (mut best, mut best_theta) = if f2 > f1 { (f2, x2) } else { (f1, x1) };
    while hi - lo > ANGULAR_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f.eval(x2);
            if f2 > best {
                best = f2;
                best_theta = x2;
            }
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f.eval(x1);
            if f1 > best {
                best = f1;
                best_theta = x1;
            }
        }
    }
    Refined {
        value: best,
        theta: best_theta,
        width: hi - lo,
    }
}

pub fn numerical_radius(t: &CMatrix, opts: &RadiusOptions) -> Result<RadiusResult, NumradError> {
    if opts.grid < MIN_GRID {
        return Err(NumradError::GridTooSmall(opts.grid));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(NumradError::BadTolerance(opts.tol));
    }
    let norm = operator_norm(t);
    if norm == 0.0 {
        return Ok(RadiusResult {
            value: 0.0,
            theta_star: 0.0,
            certified_error: 0.0,
            grid_points: opts.grid,
            refinements: 0,
        });
    }

    // Hermitian up to rounding: w is the spectral norm of the Hermitian part,
    // off by at most ‖(T − T*)/2‖ ≤ its Frobenius norm
    let herm = t.hermitian_part();
    let skew = (t - &herm).frobenius_norm();
    if skew <= 1e-3 * opts.tol {
        let top = lambda_max(&herm);
        let bottom = lambda_min(&herm);
        let (value, theta_star) = if top >= -bottom { (top, 0.0) } else { (-bottom, std::f64::consts::PI) };
        return Ok(RadiusResult {
            value,
            theta_star,
            certified_error: skew,
            grid_points: 0,
            refinements: 0,
        });
    }

    let grid = opts.grid;
    let step = TAU / grid as f64;
    let mut support = SupportFunction::new(t);
    let values: Vec<f64> = (0..grid).map(|k| support.eval(k as f64 * step)).collect();

    // argmax, ties broken by the smallest angle
    let mut top = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[top] {
            top = k;
        }
    }
    let threshold = values[top] - norm * step * step / 8.0;
    let mut candidates: Vec<usize> = (0..grid)
        .filter(|&k| {
            let v = values[k];
            let prev = values[(k + grid - 1) % grid];
            let next = values[(k + 1) % grid];
            v >= prev && v > next && v >= threshold
        })
        .collect();
    if !candidates.contains(&top) {
        candidates.push(top);
    }
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    candidates.truncate(opts.max_refinements.max(1));

    let mut best = values[top];
    let mut best_theta = top as f64 * step;
    let mut widest = 0.0_f64;
    for &k in &candidates {
        let centre = k as f64 * step;
        let r = golden_section_max(&mut support, centre - step, centre + step);
        widest = widest.max(r.width);
        if r.value > best {
            best = r.value;
            best_theta = r.theta;
        }
    }

    let certified_error = norm * widest * widest / 8.0;
    if certified_error > opts.tol {
        return Err(NumradError::ToleranceNotMet {
            certified: certified_error,
            tol: opts.tol,
        });
    }
    Ok(RadiusResult {
        value: best.max(0.0),
        theta_star: best_theta.rem_euclid(TAU),
        certified_error,
        grid_points: grid,
        refinements: candidates.len(),
    })
}

/// Independent lower bound for `w(T)`: the best `|⟨Tx, x⟩|` over random unit
/// vectors and over every eigenvector of `H_θ` on a 64-angle grid.
pub fn radius_oracle(t: &CMatrix, samples: usize, seed: u64) -> Result<f64, NumradError> {
    let n = t.n();
    let mut best = 0.0_f64;
    let mut rng = CounterRng::new(seed, 0);
    for _ in 0..samples {
        let g = rng.complex_gaussian_vec(n);
        if let Some(x) = normalized(&g) {
            best = best.max(inner(&t.matvec(&x), &x).norm());
        }
    }
    let mut support = SupportFunction::new(t);
    for k in 0..ORACLE_ANGLES {
        let h = support.matrix(TAU * k as f64 / ORACLE_ANGLES as f64);
        let eig = hermitian_eig(&h)?;
        for i in 0..n {
            let v = eig.vector(i);
            best = best.max(inner(&t.matvec(&v), &v).norm());
        }
    }
    Ok(best)
}

/// Support points `⟨Tv, v⟩` of the numerical range, `v` the top eigenvector
/// of `H_θ` at `m` equally spaced angles. Returns `(θ, point)` pairs.
pub fn range_boundary(t: &CMatrix, m: usize) -> Result<Vec<(f64, Complex64)>, NumradError> {
    if m < 3 {
        return Err(NumradError::TooFewBoundaryPoints(m));
    }
    let mut support = SupportFunction::new(t);
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let theta = TAU * k as f64 / m as f64;
        let eig = hermitian_eig(&support.matrix(theta))?;
        let v = eig.vector(0);
        out.push((theta, inner(&t.matvec(&v), &v)));
    }
    Ok(out)
}

/// CSV rendering `theta,re,im` of [`range_boundary`] output.
pub fn boundary_csv(points: &[(f64, Complex64)]) -> String {
    let mut s = String::from("theta,re,im\n");
    for (theta, z) in points {
        s.push_str(&format!("{theta:.17e},{:.17e},{:.17e}\n", z.re, z.im));
    }
    s
}
