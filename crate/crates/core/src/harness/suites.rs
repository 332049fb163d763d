//! Built-in suites.

use super::{CaseTemplate, EnsembleTemplate, OneOrMany, Scalar, SuiteConfig};
use crate::bounds::Tolerance;
use crate::ensembles::Family;
use crate::numrad::RadiusOptions;

pub const BUILTIN_SUITES: [&str; 2] = ["default", "selftest"];

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_COUNT: usize = 200;

fn nums(xs: &[f64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::Num(x)).collect()
}

fn texts(xs: &[&str]) -> Vec<Scalar> {
    xs.iter().map(|s| Scalar::Text(s.to_string())).collect()
}

fn range(lo: u32, hi: u32) -> Vec<Scalar> {
    (lo..=hi).map(|n| Scalar::Num(n as f64)).collect()
}

const PHI_ALL: [&str; 6] = ["power:p=1", "power:p=1.5", "power:p=2", "expm1", "powerlog:p=1", "expsq"];
/// Sub-multiplicative members of `PHI_ALL`.
const PHI_SUBMULT: [&str; 3] = ["power:p=1", "power:p=1.5", "power:p=2"];
const UNIT_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const R_GRID: [f64; 3] = [1.0, 1.5, 2.0];

fn label(s: &str) -> CaseTemplate {
    CaseTemplate::Label(s.to_string())
}

/// Every catalogue case over its default parameter grid.
pub fn default_cases() -> Vec<CaseTemplate> {
    let phi = || ("phi", texts(&PHI_ALL));
    let phi_sub = || ("phi", texts(&PHI_SUBMULT));
    let unit = |k: &'static str| (k, nums(&UNIT_GRID));
    let r = || ("r", nums(&R_GRID));
    let variant = || ("variant", texts(&["a", "b"]));
    vec![
        label("base_norm"),
        label("base_kittaneh"),
        CaseTemplate::grid("base_elhaddad", &[r()]),
        label("base_abuomar"),
        label("base_bhunia"),
        CaseTemplate::grid("dragomir_product", &[r()]),
        label("power_norm"),
        CaseTemplate::grid("power_norm_phi", &[phi()]),
        CaseTemplate::grid("th1_product", &[phi_sub(), unit("v")]),
        CaseTemplate::grid("th1_power", &[unit("v"), r()]),
        label("cor_N1"),
        CaseTemplate::grid("cor_11", &[("v", nums(&[0.25, 0.5, 0.75]))]),
        CaseTemplate::grid("th2_gh", &[phi_sub(), unit("v"), unit("s")]),
        label("cor_22"),
        CaseTemplate::grid("th3_alpha", &[phi(), unit("alpha"), variant()]),
        CaseTemplate::grid("th4_gh_alpha", &[phi(), unit("alpha"), unit("s"), variant()]),
        CaseTemplate::grid("cor_halfsum_sq", &[phi()]),
        CaseTemplate::grid("th5", &[phi()]),
        CaseTemplate::grid("cor_halfsum", &[phi()]),
        CaseTemplate::grid("th6", &[phi()]),
        CaseTemplate::grid("th8", &[phi()]),
        label("cor_1_1"),
        label("cor_1_2"),
        label("cor_prop1"),
        CaseTemplate::grid("th7_power", &[phi(), ("n", range(2, 5))]),
        CaseTemplate::grid("cor_nil", &[("n", range(2, 5))]),
        label("cor_N222"),
        CaseTemplate::grid("cor_nilpotent", &[("n", range(2, 8))]),
        label("buzano_vec"),
        CaseTemplate::grid("gen_cauchy_vec", &[unit("v")]),
        CaseTemplate::grid("mccarthy_vec", &[r()]),
        CaseTemplate::grid("mixed_schwarz_vec", &[unit("s")]),
        CaseTemplate::grid("op_jensen_vec", &[phi()]),
        CaseTemplate::grid("ext_buzano_vec", &[("n", range(2, 5))]),
        CaseTemplate::grid("orlicz_buzano_vec", &[phi()]),
        CaseTemplate::grid("orlicz_buzano_log", &[("phi", texts(&["expm1", "expsq"]))]),
    ]
}

/// The seven standard families, n = 2..=8, `count` draws each.
pub fn standard_ensembles(count: usize, seed: u64) -> Vec<EnsembleTemplate> {
    Family::STANDARD
        .iter()
        .map(|f| EnsembleTemplate {
            family: f.to_string(),
            n: OneOrMany::Many((2..=8).collect()),
            count,
            seed,
            params: Default::default(),
        })
        .collect()
}

pub fn default_suite() -> SuiteConfig {
    SuiteConfig {
        name: "default".to_string(),
        cases: default_cases(),
        ensembles: standard_ensembles(DEFAULT_COUNT, DEFAULT_SEED),
        tolerance: Tolerance::default(),
        radius: RadiusOptions::default(),
        witness_limit: 5,
        jobs: None,
    }
}

/// Planted falsehoods (outermost right-hand side scaled by 0.1) next to
/// their clean counterparts; a working harness must report violations.
pub fn selftest_suite() -> SuiteConfig {
    SuiteConfig {
        name: "selftest".to_string(),
        cases: vec![
            label("base_kittaneh"),
            label("corrupt:base_kittaneh"),
            label("corrupt:power_norm"),
            label("corrupt:th6[phi=power:p=1]"),
        ],
        ensembles: vec![EnsembleTemplate {
            family: "ginibre".to_string(),
            n: OneOrMany::Many(vec![2, 3, 4]),
            count: 20,
            seed: DEFAULT_SEED,
            params: Default::default(),
        }],
        tolerance: Tolerance::default(),
        radius: RadiusOptions::default(),
        witness_limit: 5,
        jobs: None,
    }
}

pub fn builtin_suite(name: &str) -> Option<SuiteConfig> {
    match name {
        "default" => Some(default_suite()),
        "selftest" => Some(selftest_suite()),
        _ => None,
    }
}
