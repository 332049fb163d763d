use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::LinalgError;

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Dense square complex matrix stored row-major.
///
/// Every constructor validates the shape, the dimension range `1..=MAX_DIM`
/// and finiteness of all entries, so downstream code never sees NaN/Inf.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(LinalgError::NotSquare {
                rows: n,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length
    /// as the number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::NotSquare {
                    rows: n,
                    len: row.len() * n,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self, LinalgError> {
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Result<Self, LinalgError> {
        check_dim(n)?;
        Ok(Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn diag_real(values: &[f64]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * m.n + i] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    /// Jordan nilpotent block: ones on the superdiagonal.
    pub fn jordan_nilpotent(n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(n)?;
        for i in 0..n.saturating_sub(1) {
            m.data[i * n + i + 1] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Internal constructor for results of arithmetic on already-valid
    /// matrices. Non-finite results (overflow) are still rejected in debug
    /// builds only; callers that can overflow go through [`CMatrix::new`].
    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.n + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Self::from_raw(n, data)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|z| z * c).collect())
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: f64, other: &CMatrix) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `(A + A*)/2`, the Hermitian part.
    pub fn hermitian_part(&self) -> Self {
        let n = self.n;
        Self::from_raw(
            n,
            (0..n * n)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    (self.data[k] + self.data[j * n + i].conj()) * 0.5
                })
                .collect(),
        )
    }

    /// Integer power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n).expect("dimension already validated");
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(x.len(), n, "vector length must match matrix dimension");
        (0..n)
            .map(|i| {
                let row = &self.data[i * n..(i + 1) * n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Whether every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Entrywise comparison under an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.max_abs_diff(other) <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Bitwise identity of all entries; used only for reproducibility checks.
    pub fn bit_identical(&self, other: &Self) -> bool {
        self.n == other.n
            && self.data.iter().zip(&other.data).all(|(a, b)| {
                a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
            })
    }
}

fn check_dim(n: usize) -> Result<(), LinalgError> {
    if n == 0 || n > MAX_DIM {
        Err(LinalgError::DimensionOutOfRange(n))
    } else {
        Ok(())
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        CMatrix::from_raw(n, out)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix::from_raw(self.n, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix::from_raw(self.n, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len(), "vector length mismatch");
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `x/‖x‖`, or `None` for the zero vector.
pub fn normalized(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let nrm = vec_norm(x);
    (nrm > 0.0).then(|| x.iter().map(|z| z / nrm).collect())
}

/// Quadratic form `⟨A x, x⟩`.
pub fn quadratic_form(a: &CMatrix, x: &[Complex64]) -> Complex64 {
    inner(&a.matvec(x), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            CMatrix::new(2, vec![c(1.0, 0.0); 3]),
            Err(LinalgError::NotSquare { .. })
        ));
        assert!(matches!(
            CMatrix::new(0, vec![]),
            Err(LinalgError::DimensionOutOfRange(0))
        ));
        assert!(matches!(
            CMatrix::zeros(65),
            Err(LinalgError::DimensionOutOfRange(65))
        ));
        let err = CMatrix::new(2, vec![c(1.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(err, Err(LinalgError::NonFinite { row: 0, col: 1 })));
        let ragged = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0)]];
        assert!(CMatrix::from_rows(&ragged).is_err());
    }

    #[test]
    fn adjoint_and_products() {
        let t = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, 1.0)], vec![c(3.0, 0.0), c(-1.0, -1.0)]])
            .unwrap();
        let ta = t.adjoint();
        assert_eq!(ta.get(0, 1), c(3.0, 0.0));
        assert_eq!(ta.get(1, 0), c(0.0, -1.0));
        let gram = &ta * &t;
        assert!(gram.is_hermitian(1e-14));
        assert!(t.pow(0).approx_eq(&CMatrix::identity(2).unwrap(), 0.0));
        assert!(t.pow(2).approx_eq(&(&t * &t), 0.0));
    }

    #[test]
    fn jordan_block_is_nilpotent() {
        let j = CMatrix::jordan_nilpotent(4).unwrap();
        assert!(!j.pow(3).is_zero());
        assert!(j.pow(4).is_zero());
    }

    #[test]
    fn inner_product_convention() {
        let x = vec![c(0.0, 1.0), c(1.0, 0.0)];
        let y = vec![c(1.0, 0.0), c(0.0, 1.0)];
        // i*1 + 1*conj(i) = i - i = 0
        assert_eq!(inner(&x, &y), c(0.0, 0.0));
        assert_eq!(inner(&x, &x), c(2.0, 0.0));
        assert!(normalized(&[c(0.0, 0.0)]).is_none());
    }
}
