//! Scalar Orlicz functions: continuous, convex, increasing `φ: [0,∞) → [0,∞)`
//! with `φ(0) = 0`, `φ(t) > 0` for `t > 0` and `φ(t) → ∞`.
//!
//! Exponential kinds refuse arguments whose image would overflow instead of
//! saturating, so no comparison downstream is ever made against infinity.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest argument accepted by `e^t − 1`.
pub const EXPM1_MAX_ARG: f64 = 700.0;
/// Largest argument accepted by `e^{t²} − 1`.
pub const EXPSQ_MAX_ARG: f64 = 26.0;

/// Probe grid used to classify the built-in non-power kinds.
pub const SUBMULT_PROBE_GRID: [f64; 12] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OrliczError {
    #[error("argument {0} is negative or not finite")]
    BadArgument(f64),
    #[error("{name}({t}) overflows")]
    Overflow { name: String, t: f64 },
    #[error("{t} lies outside the tabulated domain [0, {max}]")]
    OutsideTable { t: f64, max: f64 },
    #[error("target {y} exceeds the largest representable value {max} of {name}")]
    InverseOutOfRange { name: String, y: f64, max: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("invalid table: {0}")]
    BadTable(String),
    #[error("cannot parse Orlicz function {0:?}; expected power:p=<p>, expm1, powerlog:p=<p>, expsq or table:<file>")]
    Parse(String),
}

/// Tabulated `(t, φ(t))` pairs evaluated by piecewise-linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    source: Option<PathBuf>,
    points: Vec<(f64, f64)>,
}

impl Table {
    /// Validates that the table starts at `(0, 0)`, has strictly increasing
    /// abscissae and ordinates, and nondecreasing slopes (convexity).
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, OrliczError> {
        if points.len() < 2 {
            return Err(OrliczError::BadTable("need at least two points".into()));
        }
        if points.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
            return Err(OrliczError::BadTable("non-finite entry".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(OrliczError::BadTable("first point must be (0, 0)".into()));
        }
        let mut prev_slope = 0.0;
        for w in points.windows(2) {
            let (t0, y0) = w[0];
            let (t1, y1) = w[1];
            if t1 <= t0 || y1 <= y0 {
                return Err(OrliczError::BadTable(format!(
                    "points must be strictly increasing, violated at t = {t1}"
                )));
            }
            let slope = (y1 - y0) / (t1 - t0);
            if slope < prev_slope * (1.0 - 1e-12) {
                return Err(OrliczError::BadTable(format!("slopes decrease at t = {t0}; not convex")));
            }
            prev_slope = slope;
        }
        Ok(Self { source: None, points })
    }

    /// Reads `t,phi` rows; a non-numeric first row is treated as a header.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self, OrliczError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| OrliczError::BadTable(format!("{}: {e}", path.display())))?;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (a, b) = (parts.next(), parts.next());
            let parsed = match (a, b) {
                (Some(a), Some(b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some(p) => points.push(p),
                None if i == 0 => continue,
                None => return Err(OrliczError::BadTable(format!("line {}: expected `t,phi`", i + 1))),
            }
        }
        let mut table = Self::new(points)?;
        table.source = Some(path.to_path_buf());
        Ok(table)
    }

    pub fn max_t(&self) -> f64 {
        self.points.last().map(|p| p.0).unwrap_or(0.0)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, t: f64) -> Result<f64, OrliczError> {
        let max = self.max_t();
        if t > max {
            return Err(OrliczError::OutsideTable { t, max });
        }
        let idx = self.points.partition_point(|p| p.0 <= t);
        if idx >= self.points.len() {
            return Ok(self.points[self.points.len() - 1].1);
        }
        let (t0, y0) = self.points[idx - 1];
        let (t1, y1) = self.points[idx];
        Ok(y0 + (y1 - y0) * (t - t0) / (t1 - t0))
    }
}

/// A user-supplied closure, used for probes that are not tabulated.
#[derive(Clone)]
pub struct CustomFn {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFn({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum OrliczKind {
    Power { p: f64 },
    ExpMinusOne,
    PowerLog { p: f64 },
    ExpSquareMinusOne,
    Table(Arc<Table>),
    Custom(CustomFn),
}

/// Outcome of a sub-multiplicativity probe, `φ(t₁t₂) ≤ φ(t₁)φ(t₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SubmultStatus {
    /// Holds identically (power functions).
    Exact,
    /// Held on every testable grid pair spanning `[lo, hi]`.
    Checked { lo: f64, hi: f64, untestable: usize },
    Unchecked,
    /// The worst violating pair found.
    Fails { t1: f64, t2: f64, lhs: f64, rhs: f64 },
}

impl SubmultStatus {
    pub fn admits(&self) -> bool {
        matches!(self, SubmultStatus::Exact | SubmultStatus::Checked { .. })
    }
}

#[derive(Debug, Clone)]
pub struct OrliczFn {
    kind: OrliczKind,
    submult: SubmultStatus,
}

impl OrliczFn {
    /// `t^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self, OrliczError> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(OrliczError::BadParameter(format!("power exponent must be >= 1, got {p}")));
        }
        Ok(Self {
            kind: OrliczKind::Power { p },
            submult: SubmultStatus::Exact,
        })
    }

    pub fn linear() -> Self {
        Self::power(1.0).expect("p = 1 is valid")
    }

    /// `e^t − 1`.
    pub fn expm1() -> Self {
        Self::classified(OrliczKind::ExpMinusOne)
    }

    /// `t^p log(1 + t)`, `p > 0`.
    pub fn power_log(p: f64) -> Result<Self, OrliczError> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(OrliczError::BadParameter(format!("power_log exponent must be > 0, got {p}")));
        }
        Ok(Self::classified(OrliczKind::PowerLog { p }))
    }

    /// `e^{t²} − 1`.
    pub fn expsq() -> Self {
        Self::classified(OrliczKind::ExpSquareMinusOne)
    }

    /// Tabulated function; sub-multiplicativity is probed on the table's own
    /// abscissae.
    pub fn table(table: Table) -> Self {
        let grid: Vec<f64> = table.points.iter().map(|p| p.0).filter(|&t| t > 0.0).collect();
        let mut f = Self {
            kind: OrliczKind::Table(Arc::new(table)),
            submult: SubmultStatus::Unchecked,
        };
        f.submult = f.check_submultiplicative(&grid).into_status();
        f
    }

    /// Arbitrary closure. Not assumed to satisfy any axiom; sub-multiplicativity
    /// stays unchecked.
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: OrliczKind::Custom(CustomFn {
                name: name.into(),
                f: Arc::new(f),
            }),
            submult: SubmultStatus::Unchecked,
        }
    }

    fn classified(kind: OrliczKind) -> Self {
        let mut f = Self {
            kind,
            submult: SubmultStatus::Unchecked,
        };
        f.submult = f.check_submultiplicative(&SUBMULT_PROBE_GRID).into_status();
        f
    }

    pub fn kind(&self) -> &OrliczKind {
        &self.kind
    }

    pub fn submult_status(&self) -> &SubmultStatus {
        &self.submult
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self.kind, OrliczKind::ExpMinusOne | OrliczKind::ExpSquareMinusOne)
    }

    /// Largest admissible argument, if bounded.
    pub fn max_arg(&self) -> Option<f64> {
        match &self.kind {
            OrliczKind::ExpMinusOne => Some(EXPM1_MAX_ARG),
            OrliczKind::ExpSquareMinusOne => Some(EXPSQ_MAX_ARG),
            OrliczKind::Table(t) => Some(t.max_t()),
            _ => None,
        }
    }

    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            OrliczKind::Power { p } => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, OrliczError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(OrliczError::BadArgument(t));
        }
        let y = match &self.kind {
            OrliczKind::Power { p } => crate::linalg::power(t, *p),
            OrliczKind::ExpMinusOne => {
                if t > EXPM1_MAX_ARG {
                    return Err(self.overflow(t));
                }
                t.exp_m1()
            }
            OrliczKind::PowerLog { p } => crate::linalg::power(t, *p) * t.ln_1p(),
            OrliczKind::ExpSquareMinusOne => {
                if t > EXPSQ_MAX_ARG {
                    return Err(self.overflow(t));
                }
                (t * t).exp_m1()
            }
            OrliczKind::Table(table) => table.eval(t)?,
            OrliczKind::Custom(c) => (c.f)(t),
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(self.overflow(t))
        }
    }

    fn overflow(&self, t: f64) -> OrliczError {
        OrliczError::Overflow { name: self.to_string(), t }
    }

    /// Monotone inverse: `t` with `|φ(t) − y| ≤ tol·max(1, y)`, by bracketing
    /// and bisection.
    pub fn inverse(&self, y: f64, tol: f64) -> Result<f64, OrliczError> {
        if !(y >= 0.0 && y.is_finite()) {
            return Err(OrliczError::BadArgument(y));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let limit = self.max_arg();
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        loop {
            if let Some(max) = limit {
                if hi >= max {
                    hi = max;
                    let top = self.eval(max)?;
                    if top < y {
                        return Err(OrliczError::InverseOutOfRange {
                            name: self.to_string(),
                            y,
                            max: top,
                        });
                    }
                    break;
                }
            }
            match self.eval(hi) {
                Ok(v) if v >= y => break,
                Ok(_) => {
                    lo = hi;
                    hi *= 2.0;
                }
                Err(e) => return Err(e),
            }
            if hi > 1e300 {
                return Err(OrliczError::InverseOutOfRange {
                    name: self.to_string(),
                    y,
                    max: f64::INFINITY,
                });
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid)? < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let flo = self.eval(lo)?;
        let fhi = self.eval(hi)?;
        let t = if (fhi - y).abs() <= (y - flo).abs() { hi } else { lo };
        let err = (self.eval(t)? - y).abs();
        if err > tol * y.max(1.0) {
            // flat or discontinuous region; the closest endpoint is still the best answer
            return Ok(t);
        }
        Ok(t)
    }

    /// Axiom checks on a sorted grid (at least 8 points spanning `[0, 10]`).
    pub fn check_axioms(&self, grid: &[f64]) -> AxiomReport {
        let mut values = Vec::with_capacity(grid.len());
        for &t in grid {
            values.push(self.eval(t).ok());
        }
        let mut report = AxiomReport::default();

        report.zero_at_origin = match grid.iter().position(|&t| t == 0.0) {
            Some(i) => match values[i] {
                Some(v) if v == 0.0 => AxiomCheck::pass(),
                _ => AxiomCheck::fail(0.0, 0.0),
            },
            None => match self.eval(0.0) {
                Ok(v) if v == 0.0 => AxiomCheck::pass(),
                _ => AxiomCheck::fail(0.0, 0.0),
            },
        };

        report.positive = AxiomCheck::pass();
        for (&t, v) in grid.iter().zip(&values) {
            if t > 0.0 && !matches!(v, Some(y) if *y > 0.0) {
                report.positive = AxiomCheck::fail(t, t);
                break;
            }
        }

        report.increasing = AxiomCheck::pass();
        for i in 1..grid.len() {
            match (values[i - 1], values[i]) {
                (Some(a), Some(b)) if b > a => {}
                (Some(_), Some(_)) => {
                    report.increasing = AxiomCheck::fail(grid[i - 1], grid[i]);
                    break;
                }
                _ => {}
            }
        }

        report.convex = AxiomCheck::pass();
        'outer: for i in 0..grid.len() {
            for j in (i + 1)..grid.len() {
                let (a, b) = (grid[i], grid[j]);
                let (Some(fa), Some(fb)) = (values[i], values[j]) else { continue };
                let Ok(fm) = self.eval(0.5 * (a + b)) else { continue };
                if fm > 0.5 * (fa + fb) + 1e-12 * fb.max(1.0) {
                    report.convex = AxiomCheck::fail(a, b);
                    break 'outer;
                }
            }
        }

        // growth: the last finite increment must be positive; with convexity
        // that forces φ(t) → ∞
        report.unbounded = AxiomCheck::fail(f64::NAN, f64::NAN);
        let finite: Vec<(f64, f64)> = grid
            .iter()
            .zip(&values)
            .filter_map(|(&t, v)| v.map(|y| (t, y)))
            .collect();
        if let [.., (t0, y0), (t1, y1)] = finite[..] {
            report.unbounded = if y1 > y0 {
                AxiomCheck::pass()
            } else {
                AxiomCheck::fail(t0, t1)
            };
        }
        report.untestable = values.iter().filter(|v| v.is_none()).count();
        report
    }

    /// Probes `φ(t₁t₂) ≤ φ(t₁)φ(t₂)` on the product lattice of `grid`.
    ///
    /// Power functions are exact without sampling. Pairs whose values
    /// overflow are counted as untestable, not as failures. A failing probe
    /// reports the pair with the largest ratio `φ(t₁t₂) / (φ(t₁)φ(t₂))`.
    pub fn check_submultiplicative(&self, grid: &[f64]) -> SubmultCheck {
        if matches!(self.kind, OrliczKind::Power { .. }) {
            return SubmultCheck::Exact;
        }
        let pts: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0 && t.is_finite()).collect();
        let mut untestable = 0;
        let mut worst: Option<(f64, f64, f64, f64, f64)> = None;
        for (i, &t1) in pts.iter().enumerate() {
            for &t2 in &pts[i..] {
                let (Ok(a), Ok(b), Ok(lhs)) = (self.eval(t1), self.eval(t2), self.eval(t1 * t2)) else {
                    untestable += 1;
                    continue;
                };
                let rhs = a * b;
                if !rhs.is_finite() {
                    untestable += 1;
                    continue;
                }
                if lhs > rhs * (1.0 + 1e-12) {
                    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
                    if worst.is_none_or(|w| ratio > w.4) {
                        worst = Some((t1, t2, lhs, rhs, ratio));
                    }
                }
            }
        }
        match worst {
            Some((t1, t2, lhs, rhs, _)) => SubmultCheck::Fail { t1, t2, lhs, rhs },
            None => {
                let lo = pts.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = pts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                SubmultCheck::Pass { lo, hi, untestable }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubmultCheck {
    Exact,
    Pass { lo: f64, hi: f64, untestable: usize },
    Fail { t1: f64, t2: f64, lhs: f64, rhs: f64 },
}

impl SubmultCheck {
    pub fn into_status(self) -> SubmultStatus {
        match self {
            SubmultCheck::Exact => SubmultStatus::Exact,
            SubmultCheck::Pass { lo, hi, untestable } if lo.is_finite() => {
                SubmultStatus::Checked { lo, hi, untestable }
            }
            SubmultCheck::Pass { .. } => SubmultStatus::Unchecked,
            SubmultCheck::Fail { t1, t2, lhs, rhs } => SubmultStatus::Fails { t1, t2, lhs, rhs },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// First violating pair (or point, repeated) when the check fails.
    pub witness: Option<(f64, f64)>,
}

impl AxiomCheck {
    fn pass() -> Self {
        Self {
            passed: true,
            witness: None,
        }
    }

    fn fail(a: f64, b: f64) -> Self {
        Self {
            passed: false,
            witness: Some((a, b)),
        }
    }
}

impl Default for AxiomCheck {
    fn default() -> Self {
        Self::pass()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub zero_at_origin: AxiomCheck,
    pub positive: AxiomCheck,
    pub convex: AxiomCheck,
    pub increasing: AxiomCheck,
    pub unbounded: AxiomCheck,
    pub untestable: usize,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        [self.zero_at_origin, self.positive, self.convex, self.increasing, self.unbounded]
            .iter()
            .all(|c| c.passed)
    }
}

/// `{0, 0.1, …, 10}`.
pub fn default_axiom_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 10.0).collect()
}

impl fmt::Display for OrliczFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OrliczKind::Power { p } => write!(f, "power:p={p}"),
            OrliczKind::ExpMinusOne => write!(f, "expm1"),
            OrliczKind::PowerLog { p } => write!(f, "powerlog:p={p}"),
            OrliczKind::ExpSquareMinusOne => write!(f, "expsq"),
            OrliczKind::Table(t) => match &t.source {
                Some(path) => write!(f, "table:{}", path.display()),
                None => write!(f, "table:<inline>"),
            },
            OrliczKind::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

fn parse_p(rest: &str, original: &str) -> Result<f64, OrliczError> {
    rest.strip_prefix("p=")
        .and_then(|v| v.parse::<f64>().ok())
        .ok_or_else(|| OrliczError::Parse(original.to_string()))
}

impl FromStr for OrliczFn {
    type Err = OrliczError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "power" => Self::power(parse_p(rest, s)?),
            "powerlog" => Self::power_log(parse_p(rest, s)?),
            "expm1" if rest.is_empty() => Ok(Self::expm1()),
            "expsq" if rest.is_empty() => Ok(Self::expsq()),
            "table" if !rest.is_empty() => Ok(Self::table(Table::from_csv_path(rest)?)),
            _ => Err(OrliczError::Parse(s.to_string())),
        }
    }
}

impl PartialEq for OrliczFn {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

impl Serialize for OrliczFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OrliczFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(OrliczFn::expm1().eval(0.0).unwrap(), 0.0);
        assert_eq!(OrliczFn::power(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        let pl = OrliczFn::power_log(1.0).unwrap().eval(1.0).unwrap();
        assert!((pl - 2f64.ln()).abs() < 1e-15);
        assert!((pl - 0.693147).abs() < 1e-6);
    }

    #[test]
    fn eval_errors() {
        let e = OrliczFn::expm1();
        assert!(matches!(e.eval(-1.0), Err(OrliczError::BadArgument(_))));
        assert!(matches!(e.eval(700.5), Err(OrliczError::Overflow { .. })));
        assert!(e.eval(700.0).unwrap().is_finite());
        let q = OrliczFn::expsq();
        assert!(matches!(q.eval(26.1), Err(OrliczError::Overflow { .. })));
        assert!(q.eval(26.0).unwrap().is_finite());
        assert!(matches!(
            OrliczFn::power(1e3).unwrap().eval(1e10),
            Err(OrliczError::Overflow { .. })
        ));
        assert!(OrliczFn::power(0.5).is_err());
        assert!(OrliczFn::power_log(0.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let e = OrliczFn::expm1();
        assert!((e.inverse(1f64.exp() - 1.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        assert!((OrliczFn::power(2.0).unwrap().inverse(9.0, 1e-12).unwrap() - 3.0).abs() < 1e-12);
        let pl = OrliczFn::power_log(1.0).unwrap();
        assert!((pl.inverse(2f64.ln(), 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(e.inverse(0.0, 1e-12).unwrap(), 0.0);
        assert!(matches!(e.inverse(1e305, 1e-12), Err(OrliczError::InverseOutOfRange { .. })));
    }

    #[test]
    fn axioms_of_registered_functions() {
        let grid = default_axiom_grid();
        assert!(OrliczFn::power(1.5).unwrap().check_axioms(&grid).all_pass());
        assert!(OrliczFn::expsq().check_axioms(&grid).all_pass());
        assert!(OrliczFn::expm1().check_axioms(&grid).all_pass());
        assert!(OrliczFn::power_log(1.0).unwrap().check_axioms(&grid).all_pass());
    }

    #[test]
    fn square_root_is_not_convex() {
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let r = OrliczFn::custom("sqrt", f64::sqrt).check_axioms(&grid);
        assert!(!r.convex.passed);
        assert_eq!(r.convex.witness, Some((0.0, 1.0)));
        assert!(r.increasing.passed && r.zero_at_origin.passed);
    }

    #[test]
    fn submultiplicativity_classification() {
        assert_eq!(
            OrliczFn::power(3.0).unwrap().check_submultiplicative(&[0.5, 2.0]),
            SubmultCheck::Exact
        );
        match OrliczFn::expm1().check_submultiplicative(&[1.0, 2.0, 3.0]) {
            SubmultCheck::Fail { t1, t2, lhs, rhs } => {
                assert_eq!((t1, t2), (3.0, 3.0));
                assert!((lhs - 9f64.exp_m1()).abs() < 1e-9);
                assert!((rhs - 3f64.exp_m1().powi(2)).abs() < 1e-9);
            }
            other => panic!("expected failure, got {other:?}"),
        }
        let unit: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
        assert!(matches!(
            OrliczFn::expm1().check_submultiplicative(&unit),
            SubmultCheck::Pass { lo, hi, .. } if lo == 0.05 && hi == 1.0
        ));
        assert!(matches!(OrliczFn::expm1().submult_status(), SubmultStatus::Fails { .. }));
        assert!(matches!(OrliczFn::expsq().submult_status(), SubmultStatus::Fails { .. }));
        assert!(matches!(
            OrliczFn::power_log(1.0).unwrap().submult_status(),
            SubmultStatus::Fails { .. }
        ));
    }

    #[test]
    fn submult_overflow_is_untestable() {
        let r = OrliczFn::expsq().check_submultiplicative(&[0.1, 20.0]);
        // 20*20 = 400 is outside the domain, so that pair is skipped
        match r {
            SubmultCheck::Fail { .. } | SubmultCheck::Pass { .. } => {}
            SubmultCheck::Exact => panic!("not a power"),
        }
        if let SubmultCheck::Pass { untestable, .. } = OrliczFn::expsq().check_submultiplicative(&[0.05, 30.0]) {
            assert!(untestable >= 1);
        }
    }

    #[test]
    fn table_interpolates_and_validates() {
        let t = Table::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 4.0), (3.0, 9.0)]).unwrap();
        let f = OrliczFn::table(t);
        assert_eq!(f.eval(1.5).unwrap(), 2.5);
        assert_eq!(f.eval(3.0).unwrap(), 9.0);
        assert!(matches!(f.eval(3.5), Err(OrliczError::OutsideTable { .. })));
        // (1.5)(1.5) = 2.25 -> 5.25 vs 2.5*2.5 = 6.25; 3*... outside -> untestable
        assert!(f.submult_status().admits() || matches!(f.submult_status(), SubmultStatus::Fails { .. }));
        assert!(Table::new(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(Table::new(vec![(0.5, 0.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["power:p=2", "power:p=1.5", "expm1", "powerlog:p=1", "expsq"] {
            let f: OrliczFn = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("power".parse::<OrliczFn>().is_err());
        assert!("cosh".parse::<OrliczFn>().is_err());
        assert!("table:/does/not/exist.csv".parse::<OrliczFn>().is_err());
    }

    #[test]
    fn table_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi.csv");
        std::fs::write(&path, "t,phi\n0,0\n1,1\n2,4\n4,16\n").unwrap();
        let f: OrliczFn = format!("table:{}", path.display()).parse().unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 10.0);
        assert!(f.to_string().starts_with("table:"));
    }
}
