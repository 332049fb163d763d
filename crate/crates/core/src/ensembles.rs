//! Seeded random-matrix families.
//!
//! A draw is a pure function of `(spec, index)`: the generator stream is keyed
//! by the seed (mixed with a family tag) and addressed by the draw index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::linalg::{inner, operator_norm, vec_norm, CMatrix, LinalgError, MAX_DIM};
use crate::rng::CounterRng;

/// XOR mask turning a seed into the seed of the paired operator `S`.
pub const PAIR_SEED_MASK: u64 = 0x9E37_79B9_7F4A_7C15;
/// XOR mask for the stream of auxiliary vectors.
pub const VECTOR_SEED_MASK: u64 = 0xC2B2_AE3D_27D4_EB4F;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EnsembleError {
    #[error("unknown ensemble family {0:?}")]
    UnknownFamily(String),
    #[error("dimension {0} outside 1..=64")]
    Dimension(usize),
    #[error("draw index {index} out of range for count {count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("invalid ensemble parameter: {0}")]
    BadParam(String),
    #[error("malformed ensemble spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Ginibre,
    Hermitian,
    Normal,
    Unitary,
    /// Superdiagonal ones broken into Jordan blocks of size `block`.
    NilpotentJordan { block: Option<usize> },
    NilpotentRandom,
    Rank1,
    Scaled { base: Box<Family>, c: f64 },
}

impl Family {
    pub const STANDARD: [&'static str; 7] = [
        "ginibre",
        "hermitian",
        "normal",
        "unitary",
        "nilpotent_jordan",
        "nilpotent_random",
        "rank1",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ginibre => "ginibre",
            Family::Hermitian => "hermitian",
            Family::Normal => "normal",
            Family::Unitary => "unitary",
            Family::NilpotentJordan { .. } => "nilpotent_jordan",
            Family::NilpotentRandom => "nilpotent_random",
            Family::Rank1 => "rank1",
            Family::Scaled { .. } => "scaled",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            Family::Ginibre => 1,
            Family::Hermitian => 2,
            Family::Normal => 3,
            Family::Unitary => 4,
            Family::NilpotentJordan { .. } => 5,
            Family::NilpotentRandom => 6,
            Family::Rank1 => 7,
            Family::Scaled { base, .. } => base.tag(),
        }
    }

    /// Draws use no randomness at all.
    pub fn is_deterministic(&self) -> bool {
        match self {
            Family::NilpotentJordan { .. } => true,
            Family::Scaled { base, .. } => base.is_deterministic(),
            _ => false,
        }
    }

    fn parse(name: &str, params: &Map<String, Value>) -> Result<Self, EnsembleError> {
        Ok(match name {
            "ginibre" => Family::Ginibre,
            "hermitian" => Family::Hermitian,
            "normal" => Family::Normal,
            "unitary" => Family::Unitary,
            "nilpotent_jordan" => Family::NilpotentJordan {
                block: match params.get("block") {
                    None => None,
                    Some(v) => Some(
                        v.as_u64()
                            .filter(|&b| b >= 1)
                            .ok_or_else(|| EnsembleError::BadParam("block must be a positive integer".into()))?
                            as usize,
                    ),
                },
            },
            "nilpotent_random" => Family::NilpotentRandom,
            "rank1" => Family::Rank1,
            "scaled" => {
                let base = params
                    .get("base")
                    .and_then(Value::as_str)
                    .ok_or_else(|| EnsembleError::BadParam("scaled needs a string parameter \"base\"".into()))?;
                if base == "scaled" {
                    return Err(EnsembleError::BadParam("scaled cannot wrap scaled".into()));
                }
                let c = params
                    .get("c")
                    .and_then(Value::as_f64)
                    .filter(|c| c.is_finite())
                    .ok_or_else(|| EnsembleError::BadParam("scaled needs a finite number \"c\"".into()))?;
                Family::Scaled {
                    base: Box::new(Family::parse(base, params)?),
                    c,
                }
            }
            other => return Err(EnsembleError::UnknownFamily(other.to_string())),
        })
    }

    fn write_params(&self, params: &mut Map<String, Value>) {
        match self {
            Family::NilpotentJordan { block: Some(b) } => {
                params.insert("block".into(), Value::from(*b));
            }
            Family::Scaled { base, c } => {
                params.insert("base".into(), Value::from(base.name()));
                params.insert("c".into(), Value::from(*c));
                base.write_params(params);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    /// Rescale every draw to unit operator norm.
    pub normalize: bool,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    family: String,
    n: usize,
    count: usize,
    seed: u64,
    #[serde(default)]
    params: Map<String, Value>,
}

impl EnsembleSpec {
    pub fn new(family: Family, n: usize, count: usize, seed: u64) -> Result<Self, EnsembleError> {
        if n == 0 || n > MAX_DIM {
            return Err(EnsembleError::Dimension(n));
        }
        Ok(Self {
            family,
            n,
            count,
            seed,
            normalize: false,
        })
    }

    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        self
    }

    fn from_raw(raw: RawSpec) -> Result<Self, EnsembleError> {
        let family = Family::parse(&raw.family, &raw.params)?;
        let normalize = match raw.params.get("normalize") {
            None => false,
            Some(v) => v
                .as_bool()
                .ok_or_else(|| EnsembleError::BadParam("normalize must be a boolean".into()))?,
        };
        let mut spec = Self::new(family, raw.n, raw.count, raw.seed)?;
        spec.normalize = normalize;
        Ok(spec)
    }

    fn to_raw(&self) -> RawSpec {
        let mut params = Map::new();
        self.family.write_params(&mut params);
        if self.normalize {
            params.insert("normalize".into(), Value::Bool(true));
        }
        RawSpec {
            family: self.family.name().to_string(),
            n: self.n,
            count: self.count,
            seed: self.seed,
            params,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, EnsembleError> {
        let raw: RawSpec = serde_json::from_str(s).map_err(|e| EnsembleError::Parse(e.to_string()))?;
        Self::from_raw(raw)
    }

    /// Spec for the paired operator `S`.
    pub fn paired(&self) -> Self {
        Self {
            seed: self.seed ^ PAIR_SEED_MASK,
            ..self.clone()
        }
    }

    fn stream(&self, index: usize) -> CounterRng {
        let key = self.seed ^ self.family.tag().wrapping_mul(0xD1B5_4A32_D192_ED03);
        CounterRng::new(key, index as u64)
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl FromStr for EnsembleSpec {
    type Err = EnsembleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_json(s)
    }
}

impl Serialize for EnsembleSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EnsembleSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Self::from_raw(RawSpec::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// Matrix number `index` of the ensemble.
pub fn generate(spec: &EnsembleSpec, index: usize) -> Result<CMatrix, EnsembleError> {
    if index >= spec.count {
        return Err(EnsembleError::IndexOutOfRange {
            index,
            count: spec.count,
        });
    }
    let mut rng = spec.stream(index);
    let m = draw(&spec.family, spec.n, &mut rng)?;
    if spec.normalize {
        let nrm = operator_norm(&m);
        if nrm > 0.0 {
            return Ok(m.scale_real(1.0 / nrm));
        }
    }
    Ok(m)
}

/// `(T, S)` with `S` drawn from the paired seed.
pub fn generate_pair(spec: &EnsembleSpec, index: usize) -> Result<(CMatrix, CMatrix), EnsembleError> {
    Ok((generate(spec, index)?, generate(&spec.paired(), index)?))
}

/// `k` standard complex Gaussian vectors of length `spec.n` plus a unit
/// vector, from a stream independent of the matrix draws.
pub fn draw_vectors(spec: &EnsembleSpec, index: usize, k: usize) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let mut rng = CounterRng::new(spec.seed ^ VECTOR_SEED_MASK, index as u64);
    let vectors = (0..k).map(|_| rng.complex_gaussian_vec(spec.n)).collect();
    let unit = loop {
        let e = rng.complex_gaussian_vec(spec.n);
        let nrm = vec_norm(&e);
        if nrm > 1e-8 {
            break e.into_iter().map(|z| z / nrm).collect();
        }
    };
    (vectors, unit)
}

fn gaussian_matrix(n: usize, rng: &mut CounterRng) -> Result<CMatrix, LinalgError> {
    CMatrix::new(n, rng.complex_gaussian_vec(n * n))
}

fn draw(family: &Family, n: usize, rng: &mut CounterRng) -> Result<CMatrix, EnsembleError> {
    Ok(match family {
        Family::Ginibre => gaussian_matrix(n, rng)?,
        Family::Hermitian => gaussian_matrix(n, rng)?.hermitian_part(),
        Family::Normal => {
            let u = haar_unitary(n, rng)?;
            let eigs = rng.complex_gaussian_vec(n);
            let mut ud = u.clone();
            for i in 0..n {
                for j in 0..n {
                    ud.set(i, j, u.get(i, j) * eigs[j]);
                }
            }
            &ud * &u.adjoint()
        }
        Family::Unitary => haar_unitary(n, rng)?,
        Family::NilpotentJordan { block } => {
            let b = block.unwrap_or(n).min(n);
            let mut m = CMatrix::zeros(n)?;
            for i in 0..n.saturating_sub(1) {
                if (i + 1) % b != 0 {
                    m.set(i, i + 1, Complex64::new(1.0, 0.0));
                }
            }
            m
        }
        Family::NilpotentRandom => {
            let mut m = CMatrix::zeros(n)?;
            for i in 0..n {
                for j in (i + 1)..n {
                    m.set(i, j, rng.complex_gaussian());
                }
            }
            m
        }
        Family::Rank1 => {
            let x = rng.complex_gaussian_vec(n);
            let y = rng.complex_gaussian_vec(n);
            CMatrix::from_fn(n, |i, j| x[i] * y[j].conj())?
        }
        Family::Scaled { base, c } => draw(base, n, rng)?.scale_real(*c),
    })
}

/// Columns of a Gaussian matrix orthonormalized by modified Gram–Schmidt with
/// one reorthogonalization pass. A rank-deficient draw (probability zero)
/// is replaced by a fresh one.
fn haar_unitary(n: usize, rng: &mut CounterRng) -> Result<CMatrix, EnsembleError> {
    'retry: loop {
        let g = gaussian_matrix(n, rng)?;
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
        for j in 0..n {
            for _pass in 0..2 {
                for k in 0..j {
                    let proj = inner(&cols[j], &cols[k]);
                    let (head, tail) = cols.split_at_mut(j);
                    for (a, b) in tail[0].iter_mut().zip(&head[k]) {
                        *a -= proj * b;
                    }
                }
            }
            let nrm = vec_norm(&cols[j]);
            if nrm < 1e-8 {
                continue 'retry;
            }
            for z in cols[j].iter_mut() {
                *z /= nrm;
            }
        }
        return Ok(CMatrix::from_fn(n, |i, j| cols[j][i])?);
    }
}

/// Deviation of `m` from the family predicate (`0` means exact).
pub fn family_defect(family: &Family, m: &CMatrix) -> f64 {
    let n = m.n();
    match family {
        Family::Ginibre | Family::Rank1 => 0.0,
        Family::Hermitian => m.hermitian_defect(),
        Family::Normal => {
            let a = m * &m.adjoint();
            let b = &m.adjoint() * m;
            a.max_abs_diff(&b) / m.max_abs().powi(2).max(1.0)
        }
        Family::Unitary => (&m.adjoint() * m).max_abs_diff(&CMatrix::identity(n).expect("valid dimension")),
        Family::NilpotentJordan { block } => {
            let k = block.unwrap_or(n).min(n) as u32;
            m.pow(k).max_abs()
        }
        Family::NilpotentRandom => {
            let mut worst = 0.0_f64;
            for i in 0..n {
                for j in 0..=i {
                    worst = worst.max(m.get(i, j).norm());
                }
            }
            worst
        }
        Family::Scaled { base, c } => {
            if *c == 0.0 {
                m.max_abs()
            } else {
                family_defect(base, &m.scale_real(1.0 / c))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> EnsembleSpec {
        json.parse().unwrap()
    }

    #[test]
    fn json_round_trip() {
        for s in [
            r#"{"family":"ginibre","n":4,"count":10,"seed":7,"params":{}}"#,
            r#"{"family":"nilpotent_jordan","n":6,"count":1,"seed":0,"params":{"block":3}}"#,
            r#"{"family":"scaled","n":3,"count":5,"seed":1,"params":{"base":"unitary","c":2.5}}"#,
            r#"{"family":"hermitian","n":3,"count":5,"seed":1,"params":{"normalize":true}}"#,
        ] {
            let a = spec(s);
            assert_eq!(spec(&a.to_json()), a);
        }
        assert!(matches!(
            EnsembleSpec::from_json(r#"{"family":"wishart","n":2,"count":1,"seed":0}"#),
            Err(EnsembleError::UnknownFamily(_))
        ));
        assert!(matches!(
            EnsembleSpec::from_json(r#"{"family":"ginibre","n":65,"count":1,"seed":0}"#),
            Err(EnsembleError::Dimension(65))
        ));
    }

    #[test]
    fn index_must_be_below_count() {
        let s = EnsembleSpec::new(Family::Ginibre, 2, 3, 0).unwrap();
        assert!(generate(&s, 2).is_ok());
        assert!(matches!(generate(&s, 3), Err(EnsembleError::IndexOutOfRange { .. })));
    }

    #[test]
    fn jordan_blocks() {
        let s = spec(r#"{"family":"nilpotent_jordan","n":5,"count":1,"seed":0,"params":{"block":2}}"#);
        let m = generate(&s, 0).unwrap();
        assert!(m.pow(2).is_zero());
        assert!(!m.is_zero());
    }
}
