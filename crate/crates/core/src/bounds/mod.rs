//! Catalogue of numerical-radius inequalities and their evaluation.
//!
//! Each case produces a chain `c_0 ≤ c_1 ≤ … ≤ c_m`; every adjacent link is
//! checked with an absolute plus relative tolerance.

mod case;
mod eval;
mod operands;
mod vector;

pub use case::{BoundCase, CaseId, CaseKind, CaseParams, LhsForm, Param, Variant, MAX_N};
pub use eval::{log_mix, nilpotent_constant};
pub use operands::{norm_of_combination, Operands, View, Which};
pub use vector::VectorInputs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError};
use crate::numrad::{NumradError, RadiusOptions};
use crate::orlicz::OrliczError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BoundError {
    #[error("unknown bound case {0:?}")]
    UnknownCase(String),
    #[error("malformed case label: {0}")]
    Parse(String),
    #[error("{case} requires parameter {param}")]
    MissingParam { case: String, param: String },
    #[error("{case} does not take parameter {param}")]
    UnexpectedParam { case: String, param: String },
    #[error("{case}: {param} = {value} outside {expected}")]
    ParamRange {
        case: String,
        param: String,
        value: f64,
        expected: String,
    },
    #[error("{case} needs a sub-multiplicative phi; {phi} has status {status}")]
    NotSubmultiplicative { case: String, phi: String, status: String },
    #[error("{case} is stated for {allowed}, not {phi}")]
    PhiNotAllowed { case: String, phi: String, allowed: String },
    #[error("this case needs a second operator S")]
    MissingSecondOperator,
    #[error("{0} takes a single operator")]
    UnexpectedSecondOperator(String),
    #[error("T is {t}x{t} but S is {s}x{s}")]
    DimensionMismatch { t: usize, s: usize },
    #[error("{0} is a vector lemma")]
    VectorCase(String),
    #[error("{0} is an operator inequality, not a vector lemma")]
    NotVectorCase(String),
    #[error("invalid vector input: {0}")]
    BadVectorInput(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("untestable: {0}")]
    Untestable(OrliczError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Numrad(#[from] NumradError),
}

impl From<OrliczError> for BoundError {
    fn from(e: OrliczError) -> Self {
        BoundError::Untestable(e)
    }
}

impl BoundError {
    /// Overflow or a value outside the domain of φ: the inequality could not
    /// be tested, which is not a violation.
    pub fn is_untestable(&self) -> bool {
        matches!(
            self,
            BoundError::Untestable(_) | BoundError::Linalg(LinalgError::NonFiniteFunctionValue { .. })
        )
    }

    /// The hypothesis of the case does not hold for this input.
    pub fn is_not_applicable(&self) -> bool {
        matches!(self, BoundError::NotApplicable(_))
    }
}

/// A link `lhs ≤ rhs` passes iff `lhs ≤ rhs + abs + rel·max(1, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-7, rel: 1e-7 }
    }
}

impl Tolerance {
    pub fn allowance(&self, rhs: f64) -> f64 {
        self.abs + self.rel * rhs.abs().max(1.0)
    }

    pub fn link(&self, lhs: f64, rhs: f64) -> Link {
        let slack = rhs - lhs;
        let status = if !(lhs.is_finite() && rhs.is_finite()) {
            LinkStatus::Fail
        } else if slack >= 0.0 {
            LinkStatus::Pass
        } else if -slack <= self.allowance(rhs) {
            LinkStatus::Graze
        } else {
            LinkStatus::Fail
        };
        // ratios against a right-hand side that is zero up to tolerance are noise
        let ratio = (rhs.abs() > 100.0 * (self.abs + self.rel)).then(|| lhs / rhs);
        Link { slack, ratio, status }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Pass,
    /// Holds only thanks to the tolerance.
    Graze,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    /// `rhs − lhs`
    pub slack: f64,
    /// `lhs / rhs`, absent when `rhs` is zero up to tolerance.
    pub ratio: Option<f64>,
    pub status: LinkStatus,
}

impl Link {
    pub fn holds(&self) -> bool {
        self.status != LinkStatus::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainMember {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub case: BoundCase,
    pub dimension: usize,
    /// Factor `c` applied to the operands (`1` unless normalized).
    pub scale: f64,
    pub chain: Vec<ChainMember>,
    pub links: Vec<Link>,
    pub quantities: Vec<Quantity>,
    pub tolerance: Tolerance,
}

impl BoundEvaluation {
    fn assemble(
        case: &BoundCase,
        dimension: usize,
        scale: f64,
        mut values: Vec<f64>,
        quantities: Vec<Quantity>,
        tolerance: Tolerance,
    ) -> Self {
        if case.is_corrupt() {
            if let Some(last) = values.last_mut() {
                *last *= 0.1;
            }
        }
        let names = case.id().chain_names();
        debug_assert_eq!(names.len(), values.len());
        let links = values.windows(2).map(|p| tolerance.link(p[0], p[1])).collect();
        let chain = names
            .iter()
            .zip(values)
            .map(|(n, value)| ChainMember {
                name: n.to_string(),
                value,
            })
            .collect();
        Self {
            case: case.clone(),
            dimension,
            scale,
            chain,
            links,
            quantities,
            tolerance,
        }
    }

    pub fn holds(&self) -> bool {
        self.links.iter().all(Link::holds)
    }

    pub fn violations(&self) -> usize {
        self.links.iter().filter(|l| !l.holds()).count()
    }

    pub fn values(&self) -> Vec<f64> {
        self.chain.iter().map(|m| m.value).collect()
    }

    /// Smallest slack over all links.
    pub fn worst_slack(&self) -> f64 {
        self.links.iter().map(|l| l.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    /// Upper estimate of `w(T)` read off the member just right of the
    /// `w`-dependent one, undoing the scaling. `None` for cases that do not
    /// bound the numerical radius of a single operator.
    pub fn w_estimate(&self) -> Result<Option<f64>, BoundError> {
        let Some((idx, form)) = self.case.lhs_form() else {
            return Ok(None);
        };
        let y = self.chain[idx + 1].value;
        let est = match form {
            LhsForm::Power(k) => y.max(0.0).powf(1.0 / k),
            LhsForm::Phi(k) => {
                let phi = self.case.phi().expect("phi form carries phi");
                phi.inverse(y.max(0.0), 1e-13)?.powf(1.0 / k)
            }
        };
        Ok(Some(est / self.scale))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub tolerance: Tolerance,
    pub radius: RadiusOptions,
}

/// Scale factor that keeps every φ argument below the overflow threshold of
/// an exponential φ: `min(1, cap/‖T‖)`.
pub fn normalization(case: &BoundCase, norm: f64) -> f64 {
    match case.exp_cap() {
        Some(cap) if norm > cap => cap / norm,
        _ => 1.0,
    }
}

/// Evaluates an operator inequality on `T` (and `S`) as given.
pub fn evaluate_bound(
    case: &BoundCase,
    t: &CMatrix,
    s: Option<&CMatrix>,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, BoundError> {
    let ops = Operands::new(t.clone(), s.cloned(), opts.radius)?;
    evaluate_with(case, ops.view(1.0), opts.tolerance)
}

/// Like [`evaluate_bound`] but first scales the operands by
/// [`normalization`], as the suite runner does.
pub fn evaluate_normalized(
    case: &BoundCase,
    t: &CMatrix,
    s: Option<&CMatrix>,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, BoundError> {
    let ops = Operands::new(t.clone(), s.cloned(), opts.radius)?;
    let scale = normalization(case, ops.norm());
    evaluate_with(case, ops.view(scale), opts.tolerance)
}

/// Evaluates an operator inequality on a (possibly scaled) cached operand set.
pub fn evaluate_with(case: &BoundCase, view: View<'_>, tolerance: Tolerance) -> Result<BoundEvaluation, BoundError> {
    let id = case.id();
    if id.is_vector() {
        return Err(BoundError::VectorCase(id.name().to_string()));
    }
    match (id.needs_second(), view.operands().s().is_some()) {
        (true, false) => return Err(BoundError::MissingSecondOperator),
        (false, true) => return Err(BoundError::UnexpectedSecondOperator(id.name().to_string())),
        _ => {}
    }
    let (values, quantities) = eval::operator_chain(case, view)?;
    Ok(BoundEvaluation::assemble(
        case,
        view.operands().t().n(),
        view.scale(),
        values,
        quantities,
        tolerance,
    ))
}

/// Evaluates a vector lemma.
pub fn check_vector_lemma(
    case: &BoundCase,
    inputs: &VectorInputs,
    tolerance: Tolerance,
) -> Result<BoundEvaluation, BoundError> {
    let (values, quantities) = vector::vector_chain(case, inputs)?;
    let dim = inputs.vectors.first().map_or(0, Vec::len);
    Ok(BoundEvaluation::assemble(case, dim, 1.0, values, quantities, tolerance))
}
