//! Hermitian eigenproblems.
//!
//! Full decompositions use cyclic complex Jacobi rotations. The hot path of
//! the numerical-radius scan only needs the largest eigenvalue, which is
//! obtained from a Householder tridiagonalization followed by Sturm-sequence
//! bisection.

use num_complex::Complex64;

use super::{CMatrix, LinalgError};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_RTOL: f64 = 1e-14;

/// Spectral decomposition `A = V diag(values) V*` with eigenvalues sorted in
/// descending order and orthonormal eigenvectors stored as columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        let n = self.vectors.n();
        (0..n).map(|r| self.vectors.get(r, i)).collect()
    }

    /// `V diag(f(λ_i)) V*`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        self.reconstruct_with(&mapped)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(&self.values)
    }

    pub(crate) fn reconstruct_with(&self, diag: &[f64]) -> CMatrix {
        let n = self.vectors.n();
        let v = self.vectors.data();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, &d) in diag.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[i * n + k] * d;
                for j in 0..n {
                    out[i * n + j] += vik * v[j * n + k].conj();
                }
            }
        }
        // exact Hermitian symmetry: mirror the upper triangle
        for i in 0..n {
            out[i * n + i] = Complex64::new(out[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                out[j * n + i] = out[i * n + j].conj();
            }
        }
        CMatrix::from_raw(n, out)
    }
}

/// Tolerance on `‖A − A*‖_max` accepted as Hermitian.
pub fn hermitian_tolerance(a: &CMatrix) -> f64 {
    1e-12 * a.max_abs().max(1.0)
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eig(a: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    let defect = a.hermitian_defect();
    let tol = hermitian_tolerance(a);
    if defect > tol {
        return Err(LinalgError::NotHermitian { defect, tol });
    }
    let n = a.n();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n)?;
    let scale = m.frobenius_norm();
    let threshold = OFF_DIAGONAL_RTOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > threshold {
        return Err(LinalgError::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(j, j).re.total_cmp(&m.get(i, i).re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v.get(r, order[c]))?;
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `m[p][q]`.
///
/// With `m[p][q] = r e^{iφ}` the unitary `G = D R D*`, `D = diag(1, e^{-iφ})`,
/// reduces the 2×2 block to the real symmetric problem `[[a, r], [r, b]]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    // theta == 0 gives signum 1: t = 1, a 45 degree rotation
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.n();
    // G entries: g_pp = c, g_pq = s e^{iφ}, g_qp = -s e^{-iφ}, g_qq = c
    let g_pq = phase * s;
    let g_qp = -phase.conj() * s;

    // A <- A G (columns p, q)
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * c + akq * g_qp);
        m.set(k, q, akp * g_pq + akq * c);
    }
    // A <- G* A (rows p, q)
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, apk * c + aqk * g_qp.conj());
        m.set(q, k, apk * g_pq.conj() + aqk * c);
    }
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * g_qp);
        v.set(k, q, vkp * g_pq + vkq * c);
    }
}

/// Reusable scratch space for [`lambda_max_into`].
#[derive(Default)]
pub struct TridiagWorkspace {
    a: Vec<Complex64>,
    u: Vec<Complex64>,
    p: Vec<Complex64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Largest eigenvalue of a Hermitian matrix given as a row-major slice.
///
/// The input is assumed Hermitian; only the lower triangle is read.
pub fn lambda_max_into(n: usize, h: &[Complex64], ws: &mut TridiagWorkspace) -> f64 {
    lambda_max_hint(n, h, ws, None)
}

/// As [`lambda_max_into`], starting the iteration from `upper_hint` when it is
/// a valid upper bound for the largest eigenvalue. An invalid hint only costs
/// time, never accuracy.
pub fn lambda_max_hint(n: usize, h: &[Complex64], ws: &mut TridiagWorkspace, upper_hint: Option<f64>) -> f64 {
    match n {
        1 => return h[0].re,
        2 => {
            let (a, d) = (h[0].re, h[3].re);
            let b = h[2].norm();
            let half = 0.5 * (a - d);
            return 0.5 * (a + d) + half.hypot(b);
        }
        _ => {}
    }
    tridiagonalize(n, h, ws);
    tridiag_top(&ws.diag, &ws.off, upper_hint)
}

pub fn lambda_max(a: &CMatrix) -> f64 {
    let mut ws = TridiagWorkspace::default();
    lambda_max_into(a.n(), a.data(), &mut ws)
}

/// Smallest eigenvalue, via `-λ_max(-A)`.
pub fn lambda_min(a: &CMatrix) -> f64 {
    let neg: Vec<Complex64> = a.data().iter().map(|z| -z).collect();
    let mut ws = TridiagWorkspace::default();
    -lambda_max_into(a.n(), &neg, &mut ws)
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form (off-diagonal moduli), leaving the result in `ws.diag` / `ws.off`.
fn tridiagonalize(n: usize, h: &[Complex64], ws: &mut TridiagWorkspace) {
    ws.a.clear();
    ws.a.extend_from_slice(h);
    ws.diag.clear();
    ws.off.clear();
    ws.u.resize(n, Complex64::new(0.0, 0.0));
    ws.p.resize(n, Complex64::new(0.0, 0.0));
    let a = &mut ws.a;

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let mut xnorm2 = 0.0;
        for i in (k + 1)..n {
            xnorm2 += a[i * n + k].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        let tail2 = xnorm2 - x0.norm_sqr();
        if xnorm == 0.0 || tail2 <= f64::MIN_POSITIVE {
            ws.off.push(x0.norm());
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        // v = x - alpha e1, normalized
        let u = &mut ws.u[..m];
        for (idx, i) in ((k + 1)..n).enumerate() {
            u[idx] = a[i * n + k];
        }
        u[0] -= alpha;
        let vnorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in u.iter_mut() {
            *z /= vnorm;
        }
        // p = A22 u, K = u* p
        let p = &mut ws.p[..m];
        for (ii, i) in ((k + 1)..n).enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (jj, j) in ((k + 1)..n).enumerate() {
                acc += a[i * n + j] * u[jj];
            }
            p[ii] = acc;
        }
        let kk: f64 = u.iter().zip(p.iter()).map(|(ui, pi)| (ui.conj() * pi).re).sum();
        // w = 2p - 2K u, stored in p
        for (pi, ui) in p.iter_mut().zip(u.iter()) {
            *pi = (*pi - ui * kk) * 2.0;
        }
        // A22 <- A22 - u w* - w u*
        for (ii, i) in ((k + 1)..n).enumerate() {
            for (jj, j) in ((k + 1)..n).enumerate() {
                a[i * n + j] -= u[ii] * p[jj].conj() + p[ii] * u[jj].conj();
            }
        }
        ws.off.push(alpha.norm());
    }
    if n >= 2 {
        ws.off.push(a[(n - 1) * n + (n - 2)].norm());
    }
    for i in 0..n {
        ws.diag.push(a[i * n + i].re);
    }
}

/// Pivots of `T − xI = LDLᵀ` and their derivatives in `x`. Returns
/// `Some(Σ q_i'/q_i)` when every pivot is negative (`x` above the spectrum),
/// `None` otherwise.
fn pivot_log_derivative(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> Option<f64> {
    let mut q = diag[0] - x;
    let mut dq = -1.0;
    if q > -pivmin {
        return None;
    }
    let mut sum = dq / q;
    for i in 1..diag.len() {
        let e2 = off[i - 1] * off[i - 1];
        let q_next = diag[i] - x - e2 / q;
        dq = -1.0 + e2 * dq / (q * q);
        q = q_next;
        if q > -pivmin {
            return None;
        }
        sum += dq / q;
    }
    Some(sum)
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a symmetric tridiagonal matrix.
///
/// Newton's method on the characteristic polynomial, started above the
/// spectrum, decreases monotonically to the top eigenvalue, and each step `d`
/// certifies `x − λ_max ≤ n·d`. Slow (clustered) convergence falls back to
/// bisection inside that certified bracket.
fn tridiag_top(diag: &[f64], off: &[f64], upper_hint: Option<f64>) -> f64 {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut scale = 0.0_f64;
    for i in 0..n {
        let left = if i > 0 { off[i - 1] } else { 0.0 };
        let right = if i + 1 < n { off[i] } else { 0.0 };
        let radius = left + right;
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
        scale = scale.max(diag[i].abs()).max(left);
    }
    if scale == 0.0 {
        return 0.0;
    }
    let max_off2 = off.iter().map(|e| e * e).fold(0.0, f64::max);
    let pivmin = f64::MIN_POSITIVE * max_off2.max(1.0);
    let eps = f64::EPSILON;
    // widen so that the bracket strictly contains the spectrum
    let pad = 2.0 * eps * scale * n as f64 + pivmin;
    lo -= pad;
    hi += pad;
    let converged = |x: f64, width: f64| width <= 2.0 * eps * x.abs() || width <= 1e-3 * eps * scale;

    let mut x = match upper_hint {
        Some(u) if u.is_finite() && u < hi && u > lo => u,
        _ => hi,
    };
    for iter in 0..40 {
        match pivot_log_derivative(diag, off, x, pivmin) {
            Some(s) if s > 0.0 && s.is_finite() => {
                hi = x;
                let d = 1.0 / s;
                lo = lo.max(x - n as f64 * d);
                if converged(x, n as f64 * d) {
                    return x - d;
                }
                x -= d;
            }
            _ => {
                // below the top eigenvalue: either a bad hint (restart from the
                // Gershgorin bound) or a rounding-level overshoot near convergence
                if x < hi {
                    lo = lo.max(x);
                    if iter == 0 {
                        x = hi;
                        continue;
                    }
                }
                break;
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * eps * lo.abs().max(hi.abs()) {
            break;
        }
        if sturm_count(diag, off, mid, pivmin) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
