//! Scalar inequalities on vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::case::{BoundCase, CaseId};
use super::eval::log_mix;
use super::{BoundError, Quantity};
use crate::linalg::{abs_eig, inner, map_spectrum, power, psd_eig, quadratic_form, vec_norm, CMatrix};
use crate::orlicz::OrliczKind;

/// Inputs of a vector lemma. Which fields are used depends on the case:
/// `vectors` holds `x, y` (or `x_1..x_n`), `e` is a unit vector, and
/// `matrix` is `A ≥ 0` or `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorInputs {
    pub vectors: Vec<Vec<Complex64>>,
    #[serde(default)]
    pub e: Option<Vec<Complex64>>,
    #[serde(default)]
    pub matrix: Option<CMatrix>,
}

const UNIT_TOL: f64 = 1e-12;

fn bad(msg: impl Into<String>) -> BoundError {
    BoundError::BadVectorInput(msg.into())
}

impl VectorInputs {
    fn need_vectors(&self, k: usize) -> Result<&[Vec<Complex64>], BoundError> {
        if self.vectors.len() != k {
            return Err(bad(format!("expected {k} vectors, got {}", self.vectors.len())));
        }
        let len = self.vectors[0].len();
        if len == 0 || self.vectors.iter().any(|v| v.len() != len) {
            return Err(bad("vectors must be non-empty and of equal length"));
        }
        if self.vectors.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(bad("non-finite vector entry"));
        }
        if let Some(m) = &self.matrix {
            if m.n() != len {
                return Err(bad(format!("matrix dimension {} differs from vector length {len}", m.n())));
            }
        }
        Ok(&self.vectors)
    }

    fn unit_e(&self) -> Result<&[Complex64], BoundError> {
        let e = self.e.as_deref().ok_or_else(|| bad("unit vector e is required"))?;
        if e.len() != self.vectors[0].len() {
            return Err(bad("e has the wrong length"));
        }
        if (vec_norm(e) - 1.0).abs() > UNIT_TOL {
            return Err(bad(format!("e must have norm 1, got {}", vec_norm(e))));
        }
        Ok(e)
    }

    fn unit_x(&self) -> Result<&[Complex64], BoundError> {
        let x = &self.vectors[0];
        if (vec_norm(x) - 1.0).abs() > UNIT_TOL {
            return Err(bad(format!("x must have norm 1, got {}", vec_norm(x))));
        }
        Ok(x)
    }

    fn matrix(&self) -> Result<&CMatrix, BoundError> {
        self.matrix.as_ref().ok_or_else(|| bad("matrix is required"))
    }
}

pub(super) fn vector_chain(case: &BoundCase, inp: &VectorInputs) -> Result<(Vec<f64>, Vec<Quantity>), BoundError> {
    use CaseId::*;
    let mut q = Vec::new();
    let mut note = |name: &str, value: f64| {
        q.push(Quantity {
            name: name.to_string(),
            value,
        });
        value
    };
    let chain = match case.id() {
        BuzanoVec | OrliczBuzanoVec | OrliczBuzanoLog => {
            let v = inp.need_vectors(2)?;
            let e = inp.unit_e()?;
            let (x, y) = (&v[0], &v[1]);
            let lhs = note("|<x,e><e,y>|", (inner(x, e) * inner(e, y)).norm());
            let a = note("|x||y|", vec_norm(x) * vec_norm(y));
            let b = note("|<x,y>|", inner(x, y).norm());
            match case.id() {
                BuzanoVec => vec![lhs, 0.5 * (a + b)],
                OrliczBuzanoVec => {
                    let phi = case.phi_ref();
                    let (fa, fb) = (phi.eval(a)?, phi.eval(b)?);
                    vec![phi.eval(lhs)?, phi.eval(0.5 * (a + b))?, 0.5 * (fa + fb), fa]
                }
                _ => match case.phi_ref().kind() {
                    OrliczKind::ExpMinusOne => vec![lhs, log_mix(&[(0.5, a), (0.5, b)]), a],
                    _ => vec![lhs, log_mix(&[(0.5, a * a), (0.5, b * b)]).max(0.0).sqrt(), a],
                },
            }
        }
        GenCauchyVec => {
            let vv = case.v();
            let v = inp.need_vectors(2)?;
            let b = note("|<x,y>|", inner(&v[0], &v[1]).norm());
            let a = note("|x||y|", vec_norm(&v[0]) * vec_norm(&v[1]));
            vec![b * b, vv / (1.0 + vv) * a * a + b * a / (1.0 + vv), a * a]
        }
        MccarthyVec => {
            let r = case.r();
            inp.need_vectors(1)?;
            let x = inp.unit_x()?;
            let a = inp.matrix()?;
            let eig = psd_eig(a)?;
            let ax = note("<Ax,x>", quadratic_form(a, x).re.max(0.0));
            let ar = map_spectrum::<BoundError>(&eig, |l| Ok(power(l, r)))?;
            vec![ax.powf(r), quadratic_form(&ar, x).re]
        }
        OpJensenVec => {
            inp.need_vectors(1)?;
            let x = inp.unit_x()?;
            let a = inp.matrix()?;
            let phi = case.phi_ref();
            let eig = psd_eig(a)?;
            let ax = note("<Ax,x>", quadratic_form(a, x).re.max(0.0));
            let fa = map_spectrum::<BoundError>(&eig, |l| Ok(phi.eval(l)?))?;
            vec![phi.eval(ax)?, quadratic_form(&fa, x).re]
        }
        MixedSchwarzVec => {
            let s = case.s();
            let v = inp.need_vectors(2)?;
            let t = inp.matrix()?;
            let (x, y) = (&v[0], &v[1]);
            let lhs = inner(&t.matvec(x), y).norm();
            let at = abs_eig(t)?.map(|l| power(l, s));
            let ats = abs_eig(&t.adjoint())?.map(|l| power(l, 1.0 - s));
            let nx = note("|| |T|^s x ||", vec_norm(&at.matvec(x)));
            let ny = note("|| |T*|^(1-s) y ||", vec_norm(&ats.matvec(y)));
            vec![lhs, nx * ny]
        }
        ExtBuzanoVec => {
            let n = case.n() as usize;
            let v = inp.need_vectors(n)?;
            let e = inp.unit_e()?;
            let prod: Complex64 = v.iter().map(|x| inner(x, e)).product();
            let tail: Complex64 = v[2..].iter().map(|x| inner(x, e)).product();
            let norms: f64 = v.iter().map(|x| vec_norm(x)).product();
            let mixed = note("|<x1,x2> prod_{k>=3} <x_k,e>|", (inner(&v[0], &v[1]) * tail).norm());
            note("prod ||x_k||", norms);
            vec![prod.norm(), 0.5 * (mixed + norms)]
        }
        other => return Err(BoundError::NotVectorCase(other.name().to_string())),
    };
    Ok((chain, q))
}
