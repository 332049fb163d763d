//! Matrix file formats.
//!
//! JSON: `{"n": 2, "data": [[re, im], ...]}` with `n²` row-major entries.
//! Text: first line `n`, then `n²` lines `re im`.
//! Writers emit 17 significant digits so values round-trip bit-exactly.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CMatrix, LinalgError};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<[f64; 2]>,
}

/// Same shape as the JSON file format.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n(),
            data: self.data().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let data = raw.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        CMatrix::new(raw.n, data).map_err(serde::de::Error::custom)
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json_string(m: &CMatrix) -> String {
    let entries: Vec<String> = m
        .data()
        .iter()
        .map(|z| format!("[{}, {}]", fmt17(z.re), fmt17(z.im)))
        .collect();
    format!("{{\"n\": {}, \"data\": [{}]}}\n", m.n(), entries.join(", "))
}

pub fn from_json_str(s: &str) -> Result<CMatrix, LinalgError> {
    let raw: MatrixJson = serde_json::from_str(s).map_err(|e| LinalgError::Parse(e.to_string()))?;
    let data = raw.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    CMatrix::new(raw.n, data)
}

pub fn to_text_string(m: &CMatrix) -> String {
    let mut out = format!("{}\n", m.n());
    for z in m.data() {
        out.push_str(&fmt17(z.re));
        out.push(' ');
        out.push_str(&fmt17(z.im));
        out.push('\n');
    }
    out
}

pub fn from_text_str(s: &str) -> Result<CMatrix, LinalgError> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| LinalgError::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|e| LinalgError::Parse(format!("bad dimension: {e}")))?;
    let mut data = Vec::with_capacity(n.saturating_mul(n).min(64 * 64));
    for (k, line) in lines.enumerate() {
        let mut parts = line.split_whitespace();
        let mut num = |what: &str| -> Result<f64, LinalgError> {
            parts
                .next()
                .ok_or_else(|| LinalgError::Parse(format!("entry {k}: missing {what} part")))?
                .parse::<f64>()
                .map_err(|e| LinalgError::Parse(format!("entry {k}: {e}")))
        };
        let re = num("real")?;
        let im = num("imaginary")?;
        if parts.next().is_some() {
            return Err(LinalgError::Parse(format!("entry {k}: trailing tokens")));
        }
        data.push(Complex64::new(re, im));
    }
    CMatrix::new(n, data)
}

/// Parses either format, choosing JSON when the first non-blank character is `{`.
pub fn parse_matrix(s: &str) -> Result<CMatrix, LinalgError> {
    if s.trim_start().starts_with('{') {
        from_json_str(s)
    } else {
        from_text_str(s)
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix, LinalgError> {
    let path = path.as_ref();
    let s = fs::read_to_string(path).map_err(|e| LinalgError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&s)
}

pub fn write_matrix_json(m: &CMatrix, path: impl AsRef<Path>) -> Result<(), LinalgError> {
    let path = path.as_ref();
    fs::write(path, to_json_string(m)).map_err(|e| LinalgError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |x| x.is_finite()),
            -1e3..1e3f64,
            Just(0.0),
            Just(-0.0),
            Just(f64::MIN_POSITIVE),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn both_formats_round_trip_bit_exactly(n in 1usize..5, vals in proptest::collection::vec(entry(), 50)) {
            let m = CMatrix::from_fn(n, |i, j| {
                let k = 2 * (i * n + j);
                Complex64::new(vals[k % 50], vals[(k + 1) % 50])
            }).unwrap();
            let from_json = from_json_str(&to_json_string(&m)).unwrap();
            let from_text = from_text_str(&to_text_string(&m)).unwrap();
            prop_assert!(from_json.bit_identical(&m));
            prop_assert!(from_text.bit_identical(&m));
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_matrix("{\"n\": 2, \"data\": [[1, 0]]}").is_err());
        assert!(parse_matrix("2\n1 0\n0 0\n0 0\n").is_err());
        assert!(parse_matrix("1\n1 nan\n").is_err());
        assert!(parse_matrix("1\n1 0 3\n").is_err());
        assert!(parse_matrix("").is_err());
        let ok = parse_matrix("1\n  2.5 -1\n").unwrap();
        assert_eq!(ok.get(0, 0), Complex64::new(2.5, -1.0));
    }
}
