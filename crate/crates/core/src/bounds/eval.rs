//! Chain values of the operator inequalities.

use super::case::{BoundCase, CaseId, Variant};
use super::operands::{norm_of_combination, View, Which};
use super::{BoundError, Quantity};
use crate::linalg::CMatrix;
use crate::orlicz::OrliczFn;

/// `log Σ c_i e^{a_i}` without overflow; terms with `c_i = 0` are dropped.
pub fn log_mix(terms: &[(f64, f64)]) -> f64 {
    let m = terms
        .iter()
        .filter(|(c, _)| *c > 0.0)
        .map(|(_, a)| *a)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().filter(|(c, _)| *c > 0.0).map(|(c, a)| c * (a - m).exp()).sum();
    m + s.ln()
}

struct Ctx<'a> {
    view: View<'a>,
    phi: Option<&'a OrliczFn>,
    quantities: Vec<Quantity>,
}

impl<'a> Ctx<'a> {
    fn note(&mut self, name: &str, value: f64) -> f64 {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value,
        });
        value
    }

    fn phi(&self, x: f64) -> Result<f64, BoundError> {
        let phi = self.phi.expect("case carries phi");
        Ok(phi.eval(x.max(0.0))?)
    }

    /// `φ(|X|^p)`
    fn phi_abs(&self, which: Which, p: f64) -> Result<CMatrix, BoundError> {
        let phi = self.phi.expect("case carries phi");
        self.view.abs_pow_map(which, p, |x| Ok(phi.eval(x.max(0.0))?))
    }

    /// `‖φ(|X|^p) + φ(|Y|^q)‖`
    fn phi_abs_sum(&self, x: (Which, f64), y: (Which, f64)) -> Result<f64, BoundError> {
        let a = self.phi_abs(x.0, x.1)?;
        let b = self.phi_abs(y.0, y.1)?;
        Ok(norm_of_combination(&[(1.0, &a), (1.0, &b)]))
    }

    /// `‖|X|^p + |Y|^q‖`
    fn abs_sum(&self, x: (Which, f64), y: (Which, f64)) -> Result<f64, BoundError> {
        let a = self.view.abs_pow(x.0, x.1)?;
        let b = self.view.abs_pow(y.0, y.1)?;
        Ok(norm_of_combination(&[(1.0, &a), (1.0, &b)]))
    }

    fn w(&mut self) -> Result<f64, BoundError> {
        let w = self.view.w()?;
        Ok(self.note("w(T)", w))
    }

    fn norm(&mut self) -> f64 {
        let n = self.view.norm();
        self.note("||T||", n)
    }
}

/// Unscaled chain values plus the intermediate quantities that produced them.
pub(super) fn operator_chain(case: &BoundCase, view: View<'_>) -> Result<(Vec<f64>, Vec<Quantity>), BoundError> {
    use CaseId::*;
    use Which::{TStar, S, T};
    let mut cx = Ctx {
        view,
        phi: case.phi(),
        quantities: Vec::new(),
    };
    let chain = match case.id() {
        BaseNorm => {
            let n = cx.norm();
            vec![n / 2.0, cx.w()?, n]
        }
        BaseKittaneh => {
            let w = cx.w()?;
            let k = cx.abs_sum((T, 1.0), (TStar, 1.0))?;
            vec![w, 0.5 * cx.note("|| |T|+|T*| ||", k)]
        }
        BaseElhaddad => {
            let r = case.r();
            let w = cx.w()?;
            let k = cx.abs_sum((T, 2.0 * r), (TStar, 2.0 * r))?;
            vec![w.powf(2.0 * r), 0.5 * cx.note("|| |T|^2r+|T*|^2r ||", k)]
        }
        BaseAbuomar | BaseBhunia => {
            let w = cx.w()?;
            let b = cx.abs_sum((T, 2.0), (TStar, 2.0))?;
            cx.note("|| |T|^2+|T*|^2 ||", b);
            let extra = if case.id() == BaseAbuomar {
                let x = view.w_pow(2)?;
                cx.note("w(T^2)", x)
            } else {
                let x = view.w_abs_prod()?;
                cx.note("w(|T||T*|)", x)
            };
            vec![w * w, 0.25 * b + 0.5 * extra]
        }
        DragomirProduct => {
            let r = case.r();
            let wst = view.w_sstar_t()?;
            cx.note("w(S*T)", wst);
            let k = cx.abs_sum((T, 2.0 * r), (S, 2.0 * r))?;
            vec![wst.powf(r), 0.5 * cx.note("|| |T|^2r+|S|^2r ||", k)]
        }
        PowerNorm | PowerNormPhi => {
            let w = cx.w()?;
            let a = cx.norm();
            let b = view.norm_pow(2).sqrt();
            cx.note("||T^2||^(1/2)", b);
            if case.id() == PowerNorm {
                vec![w, log_mix(&[(0.5, a), (0.5, b)]), a]
            } else {
                let (pa, pb) = (cx.phi(a)?, cx.phi(b)?);
                vec![cx.phi(w)?, 0.5 * (pa + pb), pa]
            }
        }
        Th1Product | Th1Power | CorN1 | Cor11 => two_operator_chain(case, &mut cx)?,
        Th2Gh => {
            let (v, s) = (case.v(), case.s());
            let w = cx.w()?;
            let g4 = cx.phi_abs_sum((T, 4.0 * s), (TStar, 4.0 - 4.0 * s))?;
            let g2 = cx.phi_abs_sum((T, 2.0 * s), (TStar, 2.0 - 2.0 * s))?;
            let wm = view.w_mixed(s)?;
            cx.note("w(|T*|^(2-2s)|T|^(2s))", wm);
            let rhs = v / (4.0 * (1.0 + v)) * g4 + v / (2.0 * (1.0 + v)) * cx.phi(wm)?
                + cx.phi(w)? * g2 / (2.0 * (1.0 + v));
            vec![cx.phi(w * w)?, rhs]
        }
        Cor22 => {
            let w = cx.w()?;
            let b = cx.abs_sum((T, 2.0), (TStar, 2.0))?;
            let k = cx.abs_sum((T, 1.0), (TStar, 1.0))?;
            let wp = view.w_abs_prod()?;
            cx.note("|| |T|^2+|T*|^2 ||", b);
            cx.note("|| |T|+|T*| ||", k);
            cx.note("w(|T*||T|)", wp);
            let shared = w * k / 3.0;
            vec![w * w, b / 12.0 + wp / 6.0 + shared, b / 6.0 + shared]
        }
        Th3Alpha => {
            let a = case.alpha();
            let (x, y) = match case.variant() {
                Variant::A => (T, TStar),
                Variant::B => (TStar, T),
            };
            let w = cx.w()?;
            let w2 = view.w_pow(2)?;
            cx.note("w(T^2)", w2);
            let px = cx.phi_abs(x, 2.0)?;
            let py = cx.phi_abs(y, 2.0)?;
            let nrm = norm_of_combination(&[(a / 4.0, &px), (1.0 - 0.75 * a, &py)]);
            vec![cx.phi(w * w)?, a / 2.0 * cx.phi(w2)? + nrm]
        }
        Th4GhAlpha => {
            let (a, s) = (case.alpha(), case.s());
            let (x, y) = match case.variant() {
                Variant::A => (T, TStar),
                Variant::B => (TStar, T),
            };
            let w = cx.w()?;
            let m1 = cx.phi_abs(x, 4.0 * s)?;
            let m2 = cx.phi_abs(y, 4.0 - 4.0 * s)?;
            let m3 = cx.phi_abs(y, 2.0)?;
            let nrm = norm_of_combination(&[(a / 2.0, &m1), (a / 2.0, &m2), (1.0 - a, &m3)]);
            vec![cx.phi(w * w)?, nrm]
        }
        CorHalfsumSq => {
            let w = cx.w()?;
            vec![cx.phi(w * w)?, 0.5 * cx.phi_abs_sum((T, 2.0), (TStar, 2.0))?]
        }
        Th5 => {
            let w = cx.w()?;
            let ws = view.w_abs_sum()?;
            let wp = view.w_abs_prod()?;
            cx.note("w(|T|+i|T*|)", ws);
            cx.note("w(|T||T*|)", wp);
            let rhs = 0.5 * cx.phi(0.5 * ws * ws)? + 0.25 * cx.phi(wp)?
                + 0.125 * cx.phi_abs_sum((T, 2.0), (TStar, 2.0))?;
            vec![cx.phi(w * w)?, rhs]
        }
        CorHalfsum => {
            let w = cx.w()?;
            vec![cx.phi(w)?, 0.5 * cx.phi_abs_sum((T, 1.0), (TStar, 1.0))?]
        }
        Th6 | Th8 => {
            let w = cx.w()?;
            let wp = view.w_abs_prod()?;
            let w2 = view.w_pow(2)?;
            cx.note("w(|T||T*|)", wp);
            cx.note("w(T^2)", w2);
            let (fp, f2) = (cx.phi(wp)?, cx.phi(w2)?);
            cx.note("min_selects_abs_prod", if fp <= f2 { 1.0 } else { 0.0 });
            let tail = if case.id() == Th6 {
                0.25 * cx.phi_abs_sum((T, 2.0), (TStar, 2.0))?
            } else {
                let b = cx.abs_sum((T, 2.0), (TStar, 2.0))?;
                cx.note("|| |T|^2+|T*|^2 ||", b);
                0.5 * cx.phi(0.5 * b)?
            };
            vec![cx.phi(w * w)?, 0.5 * fp.min(f2) + tail]
        }
        Cor1_1 | Cor1_2 => {
            let w = cx.w()?;
            let x = if case.id() == Cor1_1 {
                let x = view.w_pow(2)?;
                cx.note("w(T^2)", x)
            } else {
                let x = view.w_abs_prod()?;
                cx.note("w(|T||T*|)", x)
            };
            let half = 0.5 * cx.abs_sum((T, 2.0), (TStar, 2.0))?;
            vec![w * w, log_mix(&[(0.5, x), (0.5, half)]), half]
        }
        CorProp1 => {
            let w = cx.w()?;
            let w2 = view.w_pow(2)?;
            cx.note("w(T^2)", w2);
            let half = 0.5 * cx.abs_sum((T, 4.0), (TStar, 4.0))?;
            vec![w.powi(4), log_mix(&[(0.5, w2 * w2), (0.5, half)]), half]
        }
        Th7Power => {
            let n = case.n();
            let w = cx.w()?;
            let nrm = cx.norm();
            let wn = view.w_pow(n)?;
            cx.note("w(T^n)", wn);
            let lead = 2f64.powi(1 - n as i32) * cx.phi(wn)?;
            let mut sum = lead;
            for k in 1..n {
                let nk = view.norm_pow(k);
                sum += 2f64.powi(-(k as i32)) * cx.phi(nk * nrm.powi((n - k) as i32))?;
            }
            let tail = lead + (1.0 - 2f64.powi(1 - n as i32)) * cx.phi(nrm.powi(n as i32))?;
            vec![cx.phi(w.powi(n as i32))?, sum, tail]
        }
        CorNil | CorN222 => {
            let n = case.n();
            let w = cx.w()?;
            let nrm = cx.norm();
            let wn = view.w_pow(n)?;
            cx.note("w(T^n)", wn);
            let c = 2f64.powi(1 - n as i32);
            let mid = log_mix(&[(c, wn), (1.0 - c, nrm.powi(n as i32))]).max(0.0);
            vec![w, mid.powf(1.0 / n as f64), nrm]
        }
        CorNilpotent => {
            let n = case.n();
            if !view.power_is_zero(n) {
                return Err(BoundError::NotApplicable(format!("T^{n} is not zero")));
            }
            let w = cx.w()?;
            let nrm = cx.norm();
            let cn = nilpotent_constant(n);
            cx.note("c_n", cn);
            vec![w, cn * nrm, nrm]
        }
        other => return Err(BoundError::VectorCase(other.name().to_string())),
    };
    Ok((chain, cx.quantities))
}

/// `(log(2^{1−n} + (1 − 2^{1−n})e))^{1/n}`
pub fn nilpotent_constant(n: u32) -> f64 {
    let c = 2f64.powi(1 - n as i32);
    (c + (1.0 - c) * std::f64::consts::E).ln().powf(1.0 / n as f64)
}

fn two_operator_chain(case: &BoundCase, cx: &mut Ctx<'_>) -> Result<Vec<f64>, BoundError> {
    use CaseId::*;
    use Which::{S, T};
    let view = cx.view;
    let wts = view.w_tstar_s()?;
    cx.note("w(T*S)", wts);
    let wm = view.w_s2t2()?;
    cx.note("w(|S|^2|T|^2)", wm);
    Ok(match case.id() {
        Th1Product => {
            let v = case.v();
            let p = cx.phi_abs_sum((T, 2.0), (S, 2.0))?;
            let q = cx.phi_abs_sum((T, 4.0), (S, 4.0))?;
            let rhs = cx.phi(wts)? * p / (2.0 * (1.0 + v))
                + v / (2.0 * (1.0 + v)) * cx.phi(wm)?
                + v / (4.0 * (1.0 + v)) * q;
            vec![cx.phi(wts * wts)?, rhs]
        }
        Th1Power => {
            let (v, r) = (case.v(), case.r());
            let p = cx.abs_sum((T, 2.0 * r), (S, 2.0 * r))?;
            let q = cx.abs_sum((T, 4.0 * r), (S, 4.0 * r))?;
            cx.note("|| |T|^2r+|S|^2r ||", p);
            cx.note("|| |T|^4r+|S|^4r ||", q);
            let rhs = wts.powf(r) * p / (2.0 * (1.0 + v))
                + v / (2.0 * (1.0 + v)) * wm.powf(r)
                + v / (4.0 * (1.0 + v)) * q;
            vec![wts.powf(2.0 * r), rhs, 0.5 * q]
        }
        CorN1 | Cor11 => {
            let v = if case.id() == CorN1 { 0.5 } else { case.v() };
            let a = cx.abs_sum((T, 2.0), (S, 2.0))?;
            let q = cx.abs_sum((T, 4.0), (S, 4.0))?;
            cx.note("|| |T|^2+|S|^2 ||", a);
            cx.note("|| |T|^4+|S|^4 ||", q);
            if case.id() == CorN1 {
                // the same chain written with S*T in place of T*S
                let wst = view.w_sstar_t()?;
                cx.note("w(S*T)", wst);
                cx.note("adjoint_form_gap", (wst * wst - wts * wts).abs());
            }
            let shared = a * wts / (2.0 * (1.0 + v));
            vec![
                wts * wts,
                shared + v / (4.0 * (1.0 + v)) * q + v / (2.0 * (1.0 + v)) * wm,
                shared + v / (2.0 * (1.0 + v)) * q,
            ]
        }
        _ => unreachable!("two_operator_chain called for single-operator case"),
    })
}
