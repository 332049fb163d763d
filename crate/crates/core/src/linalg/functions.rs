use super::eigen::{hermitian_eig, lambda_max, lambda_min, EigenDecomposition};
use super::{CMatrix, LinalgError};

/// Relative tolerance below zero accepted (and clamped) for PSD spectra.
pub const PSD_CLAMP_RTOL: f64 = 1e-10;

/// `‖T‖ = sqrt(λ_max(T*T))`.
pub fn operator_norm(t: &CMatrix) -> f64 {
    if t.is_zero() {
        return 0.0;
    }
    let gram = &t.adjoint() * t;
    lambda_max(&gram).max(0.0).sqrt()
}

/// Operator norm of a Hermitian matrix: the largest eigenvalue modulus.
pub fn hermitian_norm(a: &CMatrix) -> f64 {
    lambda_max(a).abs().max(lambda_min(a).abs())
}

/// Eigendecomposition of a PSD matrix with slightly negative eigenvalues
/// (within `PSD_CLAMP_RTOL·‖A‖`) clamped to zero.
pub fn psd_eig(a: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    let mut eig = hermitian_eig(a)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = -PSD_CLAMP_RTOL * scale;
    for v in eig.values.iter_mut() {
        if *v < floor {
            return Err(LinalgError::NotPsd {
                eigenvalue: *v,
                floor,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// Eigendecomposition of `|T| = (T*T)^{1/2}`.
pub fn abs_eig(t: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    let gram = &t.adjoint() * t;
    let mut eig = psd_eig(&gram)?;
    for v in eig.values.iter_mut() {
        *v = v.sqrt();
    }
    Ok(eig)
}

/// `|T| = (T*T)^{1/2}`.
pub fn abs_op(t: &CMatrix) -> Result<CMatrix, LinalgError> {
    Ok(abs_eig(t)?.reconstruct())
}

/// Spectral mapping `f(A) = V diag(f(λ_i)) V*` for a PSD matrix `A`.
///
/// `f` may fail (for instance an Orlicz function overflowing); that error is
/// passed through unchanged.
pub fn psd_fun<E>(a: &CMatrix, f: impl FnMut(f64) -> Result<f64, E>) -> Result<CMatrix, E>
where
    E: From<LinalgError>,
{
    let eig = psd_eig(a)?;
    map_spectrum(&eig, f)
}

/// Applies `f` to an existing decomposition, rejecting non-finite images.
pub fn map_spectrum<E>(
    eig: &EigenDecomposition,
    mut f: impl FnMut(f64) -> Result<f64, E>,
) -> Result<CMatrix, E>
where
    E: From<LinalgError>,
{
    let mut mapped = Vec::with_capacity(eig.values.len());
    for &l in &eig.values {
        let y = f(l)?;
        if !y.is_finite() {
            return Err(LinalgError::NonFiniteFunctionValue { at: l }.into());
        }
        mapped.push(y);
    }
    Ok(eig.reconstruct_with(&mapped))
}

/// Power `t^p` with the convention `0^0 = 1`.
pub fn power(t: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        t
    } else {
        t.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ok(x: f64) -> Result<f64, LinalgError> {
        Ok(x)
    }

    #[test]
    fn operator_norm_examples() {
        let j = CMatrix::jordan_nilpotent(2).unwrap();
        assert!((operator_norm(&j) - 1.0).abs() < 1e-15);
        let d = CMatrix::diag_real(&[3.0, -4.0]).unwrap();
        assert!((operator_norm(&d) - 4.0).abs() < 1e-15);
        let t = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        // Gram matrix [[1,1],[1,2]] has eigenvalues (3±√5)/2
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((operator_norm(&t) - golden).abs() < 1e-14);
        assert_eq!(operator_norm(&CMatrix::zeros(3).unwrap()), 0.0);
    }

    #[test]
    fn abs_op_examples() {
        let d = CMatrix::diag_real(&[-2.0, 3.0]).unwrap();
        assert!(abs_op(&d).unwrap().approx_eq(&CMatrix::diag_real(&[2.0, 3.0]).unwrap(), 1e-14));
        let j = CMatrix::jordan_nilpotent(2).unwrap();
        assert!(abs_op(&j).unwrap().approx_eq(&CMatrix::diag_real(&[0.0, 1.0]).unwrap(), 1e-14));
        assert!(abs_op(&j.adjoint())
            .unwrap()
            .approx_eq(&CMatrix::diag_real(&[1.0, 0.0]).unwrap(), 1e-14));
    }

    #[test]
    fn psd_fun_examples() {
        let a = CMatrix::diag_real(&[0.0, 1.0]).unwrap();
        let e = psd_fun(&a, |t| ok(t.exp_m1())).unwrap();
        assert!(e.approx_eq(&CMatrix::diag_real(&[0.0, 1f64.exp() - 1.0]).unwrap(), 1e-14));
        let b = CMatrix::diag_real(&[4.0, 9.0]).unwrap();
        let r = psd_fun(&b, |t| ok(t.sqrt())).unwrap();
        assert!(r.approx_eq(&CMatrix::diag_real(&[2.0, 3.0]).unwrap(), 1e-14));
    }

    #[test]
    fn zero_power_is_identity_even_on_kernel() {
        let a = CMatrix::diag_real(&[0.0, 2.0]).unwrap();
        let p0 = psd_fun(&a, |t| ok(power(t, 0.0))).unwrap();
        assert!(p0.approx_eq(&CMatrix::identity(2).unwrap(), 1e-15));
    }

    #[test]
    fn psd_fun_rejects_negative_and_nonfinite() {
        let a = CMatrix::diag_real(&[-1.0, 2.0]).unwrap();
        assert!(matches!(psd_fun(&a, ok), Err(LinalgError::NotPsd { .. })));
        let b = CMatrix::diag_real(&[1.0, 2000.0]).unwrap();
        let err = psd_fun(&b, |t| ok(t.exp()));
        assert!(matches!(err, Err(LinalgError::NonFiniteFunctionValue { .. })));
        // tiny negative rounding is clamped
        let c = CMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1e-13, 0.0)],
        ])
        .unwrap();
        let s = psd_fun(&c, |t| ok(t.sqrt())).unwrap();
        assert_eq!(s.get(1, 1).re, 0.0);
    }
}
