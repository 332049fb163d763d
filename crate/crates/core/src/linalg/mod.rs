//! Dense complex linear algebra for small square matrices.

mod eigen;
mod functions;
pub mod io;
mod matrix;

pub use eigen::{
    hermitian_eig, hermitian_tolerance, lambda_max, lambda_max_hint, lambda_max_into, lambda_min, EigenDecomposition,
    TridiagWorkspace,
};
pub use functions::{
    abs_eig, abs_op, hermitian_norm, map_spectrum, operator_norm, power, psd_eig, psd_fun, PSD_CLAMP_RTOL,
};
pub use matrix::{inner, normalized, quadratic_form, vec_norm, CMatrix, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows} rows but {len} entries")]
    NotSquare { rows: usize, len: usize },
    #[error("dimension {0} outside supported range 1..=64")]
    DimensionOutOfRange(usize),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below {floor:e}")]
    NotPsd { eigenvalue: f64, floor: f64 },
    #[error("spectral function returned a non-finite value at {at}")]
    NonFiniteFunctionValue { at: f64 },
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("malformed matrix file: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}
