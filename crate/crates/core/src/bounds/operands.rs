//! Memoized derived quantities of `T` (and optionally `S`).
//!
//! Every quantity an inequality needs is homogeneous in `T`, so a [`View`]
//! evaluates at `c·T` by rescaling cached values of `T` with `c^degree`.

use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::BoundError;
use crate::linalg::{hermitian_norm, operator_norm, power, psd_eig, CMatrix, EigenDecomposition};
use crate::numrad::{numerical_radius, RadiusOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Which {
    T,
    TStar,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RadiusKey {
    Pow(u32),
    /// `|T| + i|T*|`
    AbsSum,
    /// `|T*|^{2−2s}|T|^{2s}`, keyed by the bits of `s`
    Mixed(u64),
    TStarS,
    SStarT,
    /// `|S|²|T|²`
    S2T2,
}

pub struct Operands {
    t: CMatrix,
    s: Option<CMatrix>,
    radius: RadiusOptions,
    norm_t: OnceCell<f64>,
    norm_s: OnceCell<f64>,
    powers: RefCell<Vec<CMatrix>>,
    pow_norms: RefCell<BTreeMap<u32, f64>>,
    radii: RefCell<BTreeMap<RadiusKey, f64>>,
    /// Eigendecompositions of the Gram matrices `T*T`, `TT*`, `S*S`.
    gram: [OnceCell<EigenDecomposition>; 3],
    abs_pows: RefCell<BTreeMap<(Which, u64), CMatrix>>,
}

fn slot(which: Which) -> usize {
    match which {
        Which::T => 0,
        Which::TStar => 1,
        Which::S => 2,
    }
}

impl Operands {
    pub fn new(t: CMatrix, s: Option<CMatrix>, radius: RadiusOptions) -> Result<Self, BoundError> {
        if let Some(s) = &s {
            if s.n() != t.n() {
                return Err(BoundError::DimensionMismatch { t: t.n(), s: s.n() });
            }
        }
        Ok(Self {
            powers: RefCell::new(vec![t.clone()]),
            t,
            s,
            radius,
            norm_t: OnceCell::new(),
            norm_s: OnceCell::new(),
            pow_norms: RefCell::new(BTreeMap::new()),
            radii: RefCell::new(BTreeMap::new()),
            gram: Default::default(),
            abs_pows: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    pub fn s(&self) -> Option<&CMatrix> {
        self.s.as_ref()
    }

    fn s_or_err(&self) -> Result<&CMatrix, BoundError> {
        self.s.as_ref().ok_or(BoundError::MissingSecondOperator)
    }

    pub fn view(&self, c: f64) -> View<'_> {
        View { ops: self, c }
    }

    pub fn norm(&self) -> f64 {
        *self.norm_t.get_or_init(|| operator_norm(&self.t))
    }

    fn norm_s(&self) -> Result<f64, BoundError> {
        let s = self.s_or_err()?;
        Ok(*self.norm_s.get_or_init(|| operator_norm(s)))
    }

    /// `T^k`, `k ≥ 1`.
    pub fn power(&self, k: u32) -> CMatrix {
        let mut pows = self.powers.borrow_mut();
        while pows.len() < k as usize {
            let next = &pows[pows.len() - 1] * &self.t;
            pows.push(next);
        }
        pows[k as usize - 1].clone()
    }

    fn pow_norm(&self, k: u32) -> f64 {
        if let Some(&v) = self.pow_norms.borrow().get(&k) {
            return v;
        }
        let v = if k == 1 { self.norm() } else { operator_norm(&self.power(k)) };
        self.pow_norms.borrow_mut().insert(k, v);
        v
    }

    fn gram(&self, which: Which) -> Result<&EigenDecomposition, BoundError> {
        let cell = &self.gram[slot(which)];
        if let Some(e) = cell.get() {
            return Ok(e);
        }
        let m = match which {
            Which::T => &self.t.adjoint() * &self.t,
            Which::TStar => &self.t * &self.t.adjoint(),
            Which::S => {
                let s = self.s_or_err()?;
                &s.adjoint() * s
            }
        };
        let eig = psd_eig(&m)?;
        Ok(cell.get_or_init(|| eig))
    }

    /// `|X|^p` for the unscaled operand.
    fn abs_pow(&self, which: Which, p: f64) -> Result<CMatrix, BoundError> {
        let key = (which, p.to_bits());
        if let Some(m) = self.abs_pows.borrow().get(&key) {
            return Ok(m.clone());
        }
        let half = p / 2.0;
        let m = self.gram(which)?.map(|l| power(l, half));
        self.abs_pows.borrow_mut().insert(key, m.clone());
        Ok(m)
    }

    fn radius_of(&self, key: RadiusKey) -> Result<f64, BoundError> {
        if let Some(&v) = self.radii.borrow().get(&key) {
            return Ok(v);
        }
        let m = match key {
            RadiusKey::Pow(k) => self.power(k),
            RadiusKey::AbsSum => {
                let mut m = self.abs_pow(Which::T, 1.0)?;
                let star = self.abs_pow(Which::TStar, 1.0)?;
                let i = Complex64::new(0.0, 1.0);
                let shifted = star.scale(i);
                m = &m + &shifted;
                m
            }
            RadiusKey::Mixed(bits) => {
                let s = f64::from_bits(bits);
                &self.abs_pow(Which::TStar, 2.0 - 2.0 * s)? * &self.abs_pow(Which::T, 2.0 * s)?
            }
            RadiusKey::TStarS => &self.t.adjoint() * self.s_or_err()?,
            RadiusKey::SStarT => &self.s_or_err()?.adjoint() * &self.t,
            RadiusKey::S2T2 => {
                let s = self.s_or_err()?;
                &(&s.adjoint() * s) * &(&self.t.adjoint() * &self.t)
            }
        };
        let v = numerical_radius(&m, &self.radius)?.value;
        self.radii.borrow_mut().insert(key, v);
        Ok(v)
    }
}

/// `Operands` evaluated at `c·T` (and `c·S`).
#[derive(Clone, Copy)]
pub struct View<'a> {
    ops: &'a Operands,
    c: f64,
}

impl<'a> View<'a> {
    pub fn scale(&self) -> f64 {
        self.c
    }

    pub fn operands(&self) -> &'a Operands {
        self.ops
    }

    fn cp(&self, degree: f64) -> f64 {
        if self.c == 1.0 {
            1.0
        } else {
            self.c.powf(degree)
        }
    }

    pub fn norm(&self) -> f64 {
        self.c * self.ops.norm()
    }

    pub fn norm_s(&self) -> Result<f64, BoundError> {
        Ok(self.c * self.ops.norm_s()?)
    }

    /// `‖T^k‖`
    pub fn norm_pow(&self, k: u32) -> f64 {
        self.cp(k as f64) * self.ops.pow_norm(k)
    }

    pub fn w(&self) -> Result<f64, BoundError> {
        self.w_pow(1)
    }

    /// `w(T^k)`
    pub fn w_pow(&self, k: u32) -> Result<f64, BoundError> {
        Ok(self.cp(k as f64) * self.ops.radius_of(RadiusKey::Pow(k))?)
    }

    /// `w(|T| + i|T*|)`
    pub fn w_abs_sum(&self) -> Result<f64, BoundError> {
        Ok(self.c * self.ops.radius_of(RadiusKey::AbsSum)?)
    }

    /// `w(|T*|^{2−2s}|T|^{2s})`
    pub fn w_mixed(&self, s: f64) -> Result<f64, BoundError> {
        Ok(self.cp(2.0) * self.ops.radius_of(RadiusKey::Mixed(s.to_bits()))?)
    }

    /// `w(|T||T*|) = w(|T*||T|)`, the two being adjoint.
    pub fn w_abs_prod(&self) -> Result<f64, BoundError> {
        self.w_mixed(0.5)
    }

    pub fn w_tstar_s(&self) -> Result<f64, BoundError> {
        Ok(self.cp(2.0) * self.ops.radius_of(RadiusKey::TStarS)?)
    }

    pub fn w_sstar_t(&self) -> Result<f64, BoundError> {
        Ok(self.cp(2.0) * self.ops.radius_of(RadiusKey::SStarT)?)
    }

    /// `w(|S|²|T|²)`
    pub fn w_s2t2(&self) -> Result<f64, BoundError> {
        Ok(self.cp(4.0) * self.ops.radius_of(RadiusKey::S2T2)?)
    }

    /// `f(|X|)` for the scaled operand, by spectral mapping of `X*X`.
    pub fn abs_map(
        &self,
        which: Which,
        mut f: impl FnMut(f64) -> Result<f64, BoundError>,
    ) -> Result<CMatrix, BoundError> {
        let eig = self.ops.gram(which)?;
        let c = self.c;
        crate::linalg::map_spectrum(eig, |l| f(c * l.sqrt()))
    }

    /// `f(|X|^p)` evaluated as `f((c²λ)^{p/2})` on the Gram spectrum, which
    /// avoids a square root followed by a power.
    pub fn abs_pow_map(
        &self,
        which: Which,
        p: f64,
        mut f: impl FnMut(f64) -> Result<f64, BoundError>,
    ) -> Result<CMatrix, BoundError> {
        let eig = self.ops.gram(which)?;
        let c2 = self.c * self.c;
        let half = p / 2.0;
        crate::linalg::map_spectrum(eig, |l| f(power(c2 * l, half)))
    }

    /// `|X|^p` for the scaled operand.
    pub fn abs_pow(&self, which: Which, p: f64) -> Result<CMatrix, BoundError> {
        if self.c == 1.0 {
            self.ops.abs_pow(which, p)
        } else {
            self.abs_pow_map(which, p, Ok)
        }
    }

    /// Whether `T^k` vanishes exactly.
    pub fn power_is_zero(&self, k: u32) -> bool {
        self.ops.power(k).is_zero()
    }
}

/// `‖Σ c_i A_i‖` for Hermitian `A_i`.
pub fn norm_of_combination(terms: &[(f64, &CMatrix)]) -> f64 {
    let mut acc = terms[0].1.scale_real(terms[0].0);
    for (c, m) in &terms[1..] {
        acc.add_scaled(*c, m);
    }
    // exponential integrands can reach 1e300; the eigensolver squares entries
    let big = acc.max_abs();
    if big.is_finite() && big > 1e100 {
        return big * hermitian_norm(&acc.scale_real(1.0 / big));
    }
    hermitian_norm(&acc)
}
