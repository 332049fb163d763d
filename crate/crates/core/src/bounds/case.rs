//! Catalogue identifiers, parameters and the `BoundCase` label syntax
//! `id[phi=expm1,alpha=0.5,s=0.25,variant=a]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BoundError;
use crate::orlicz::{OrliczFn, OrliczKind};

/// Upper limit on the integer parameter `n`.
pub const MAX_N: u32 = 16;

macro_rules! case_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CaseId {
            $($variant),*
        }

        impl CaseId {
            pub const ALL: &'static [CaseId] = &[$(CaseId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CaseId::$variant => $name),*
                }
            }

            pub fn from_name(s: &str) -> Option<Self> {
                match s {
                    $($name => Some(CaseId::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

case_ids! {
    BaseNorm => "base_norm",
    BaseKittaneh => "base_kittaneh",
    BaseElhaddad => "base_elhaddad",
    BaseAbuomar => "base_abuomar",
    BaseBhunia => "base_bhunia",
    DragomirProduct => "dragomir_product",
    PowerNorm => "power_norm",
    PowerNormPhi => "power_norm_phi",
    Th1Product => "th1_product",
    Th1Power => "th1_power",
    CorN1 => "cor_N1",
    Cor11 => "cor_11",
    Th2Gh => "th2_gh",
    Cor22 => "cor_22",
    Th3Alpha => "th3_alpha",
    Th4GhAlpha => "th4_gh_alpha",
    CorHalfsumSq => "cor_halfsum_sq",
    Th5 => "th5",
    CorHalfsum => "cor_halfsum",
    Th6 => "th6",
    Th8 => "th8",
    Cor1_1 => "cor_1_1",
    Cor1_2 => "cor_1_2",
    CorProp1 => "cor_prop1",
    Th7Power => "th7_power",
    CorNil => "cor_nil",
    CorN222 => "cor_N222",
    CorNilpotent => "cor_nilpotent",
    BuzanoVec => "buzano_vec",
    GenCauchyVec => "gen_cauchy_vec",
    MccarthyVec => "mccarthy_vec",
    MixedSchwarzVec => "mixed_schwarz_vec",
    OpJensenVec => "op_jensen_vec",
    ExtBuzanoVec => "ext_buzano_vec",
    OrliczBuzanoVec => "orlicz_buzano_vec",
    OrliczBuzanoLog => "orlicz_buzano_log",
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Phi,
    Alpha,
    V,
    S,
    R,
    N,
    Variant,
}

impl Param {
    pub const ORDER: [Param; 7] = [Param::Phi, Param::Alpha, Param::V, Param::S, Param::R, Param::N, Param::Variant];

    pub fn name(self) -> &'static str {
        match self {
            Param::Phi => "phi",
            Param::Alpha => "alpha",
            Param::V => "v",
            Param::S => "s",
            Param::R => "r",
            Param::N => "n",
            Param::Variant => "variant",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ORDER.into_iter().find(|p| p.name() == s)
    }
}

/// Which side of the adjoint pair a two-variant theorem starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::A => "a",
            Variant::B => "b",
        }
    }
}

/// How the left end of a chain relates to `w(T)`; used to turn a chain
/// member into an upper estimate for `w(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LhsForm {
    /// `w^k`
    Power(f64),
    /// `φ(w^k)`
    Phi(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Baseline,
    Lemma,
    Proposition,
    Theorem,
    Corollary,
}

impl CaseKind {
    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Baseline => "baseline",
            CaseKind::Lemma => "lemma",
            CaseKind::Proposition => "proposition",
            CaseKind::Theorem => "theorem",
            CaseKind::Corollary => "corollary",
        }
    }
}

impl CaseId {
    pub fn params(self) -> &'static [Param] {
        use CaseId::*;
        use Param as P;
        match self {
            BaseNorm | BaseKittaneh | BaseAbuomar | BaseBhunia | PowerNorm | CorN1 | Cor22 | Cor1_1 | Cor1_2
            | CorProp1 | CorN222 | BuzanoVec => &[],
            BaseElhaddad | DragomirProduct | MccarthyVec => &[P::R],
            PowerNormPhi | CorHalfsumSq | Th5 | CorHalfsum | Th6 | Th8 | OpJensenVec | OrliczBuzanoVec
            | OrliczBuzanoLog => &[P::Phi],
            Th1Product => &[P::Phi, P::V],
            Th1Power => &[P::V, P::R],
            Cor11 | GenCauchyVec => &[P::V],
            Th2Gh => &[P::Phi, P::V, P::S],
            Th3Alpha => &[P::Phi, P::Alpha, P::Variant],
            Th4GhAlpha => &[P::Phi, P::Alpha, P::S, P::Variant],
            Th7Power => &[P::Phi, P::N],
            CorNil | CorNilpotent | ExtBuzanoVec => &[P::N],
            MixedSchwarzVec => &[P::S],
        }
    }

    pub fn is_vector(self) -> bool {
        use CaseId::*;
        matches!(
            self,
            BuzanoVec | GenCauchyVec | MccarthyVec | MixedSchwarzVec | OpJensenVec | ExtBuzanoVec | OrliczBuzanoVec
                | OrliczBuzanoLog
        )
    }

    /// Cases stated for a pair of operators `T, S`.
    pub fn needs_second(self) -> bool {
        use CaseId::*;
        matches!(self, DragomirProduct | Th1Product | Th1Power | CorN1 | Cor11)
    }

    pub fn requires_submultiplicative(self) -> bool {
        matches!(self, CaseId::Th1Product | CaseId::Th2Gh)
    }

    pub fn kind(self) -> CaseKind {
        use CaseId::*;
        match self {
            BaseNorm | BaseKittaneh | BaseElhaddad | BaseAbuomar | BaseBhunia | DragomirProduct => CaseKind::Baseline,
            BuzanoVec | GenCauchyVec | MccarthyVec | MixedSchwarzVec | OpJensenVec | ExtBuzanoVec => CaseKind::Lemma,
            PowerNorm | PowerNormPhi | OrliczBuzanoVec | OrliczBuzanoLog => CaseKind::Proposition,
            Th1Product | Th2Gh | Th3Alpha | Th4GhAlpha | Th5 | Th6 | Th7Power | Th8 => CaseKind::Theorem,
            Th1Power | CorN1 | Cor11 | Cor22 | CorHalfsumSq | CorHalfsum | Cor1_1 | Cor1_2 | CorProp1 | CorNil
            | CorN222 | CorNilpotent => CaseKind::Corollary,
        }
    }

    /// Plain-language statement of the inequality chain.
    pub fn statement(self) -> &'static str {
        use CaseId::*;
        match self {
            BaseNorm => "||T||/2 <= w(T) <= ||T||",
            BaseKittaneh => "w(T) <= 1/2 || |T| + |T*| ||",
            BaseElhaddad => "w^(2r)(T) <= 1/2 || |T|^(2r) + |T*|^(2r) ||",
            BaseAbuomar => "w^2(T) <= 1/4 || |T|^2 + |T*|^2 || + 1/2 w(T^2)",
            BaseBhunia => "w^2(T) <= 1/4 || |T|^2 + |T*|^2 || + 1/2 w(|T||T*|)",
            DragomirProduct => "w^r(S*T) <= 1/2 || |T|^(2r) + |S|^(2r) ||",
            PowerNorm => "w(T) <= log(1/2 e^||T|| + 1/2 e^(||T^2||^(1/2))) <= ||T||",
            PowerNormPhi => "phi(w(T)) <= 1/2 (phi(||T||) + phi(||T^2||^(1/2))) <= phi(||T||)",
            Th1Product => {
                "phi(w^2(T*S)) <= phi(w(T*S)) ||phi(|T|^2)+phi(|S|^2)|| / (2(1+v)) + v phi(w(|S|^2|T|^2)) / (2(1+v)) + v ||phi(|T|^4)+phi(|S|^4)|| / (4(1+v))"
            }
            Th1Power => "th1_product with phi = t^r, followed by <= 1/2 || |T|^(4r) + |S|^(4r) ||",
            CorN1 => {
                "w^2(T*S) <= 1/3 || |T|^2+|S|^2 || w(T*S) + 1/12 || |T|^4+|S|^4 || + 1/6 w(|S|^2|T|^2) <= 1/3 || |T|^2+|S|^2 || w(T*S) + 1/6 || |T|^4+|S|^4 ||"
            }
            Cor11 => {
                "w^2(T*S) <= || |T|^2+|S|^2 || w(T*S) / (2(1+v)) + v || |T|^4+|S|^4 || / (4(1+v)) + v w(|S|^2|T|^2) / (2(1+v)) <= || |T|^2+|S|^2 || w(T*S) / (2(1+v)) + v || |T|^4+|S|^4 || / (2(1+v)), 0 < v < 1"
            }
            Th2Gh => {
                "phi(w^2(T)) <= v ||phi(|T|^(4s)) + phi(|T*|^(4-4s))|| / (4(1+v)) + v phi(w(|T*|^(2-2s)|T|^(2s))) / (2(1+v)) + phi(w(T)) ||phi(|T|^(2s)) + phi(|T*|^(2-2s))|| / (2(1+v))"
            }
            Cor22 => {
                "w^2(T) <= 1/12 || |T|^2+|T*|^2 || + 1/6 w(|T*||T|) + 1/3 w(T) || |T|+|T*| || <= 1/6 || |T|^2+|T*|^2 || + 1/3 w(T) || |T|+|T*| ||"
            }
            Th3Alpha => {
                "phi(w^2(T)) <= alpha/2 phi(w(T^2)) + || alpha/4 phi(|T|^2) + (1 - 3 alpha/4) phi(|T*|^2) || (variant b swaps T and T*)"
            }
            Th4GhAlpha => {
                "phi(w^2(T)) <= || alpha/2 [phi(|T|^(4s)) + phi(|T*|^(4-4s))] + (1-alpha) phi(|T*|^2) || (variant b swaps T and T*)"
            }
            CorHalfsumSq => "phi(w^2(T)) <= 1/2 || phi(|T|^2) + phi(|T*|^2) ||",
            Th5 => {
                "phi(w^2(T)) <= 1/2 phi(1/2 w^2(|T| + i|T*|)) + 1/4 phi(w(|T||T*|)) + 1/8 || phi(|T|^2) + phi(|T*|^2) ||"
            }
            CorHalfsum => "phi(w(T)) <= 1/2 || phi(|T|) + phi(|T*|) ||",
            Th6 => {
                "phi(w^2(T)) <= 1/2 min{phi(w(|T||T*|)), phi(w(T^2))} + 1/4 || phi(|T|^2) + phi(|T*|^2) ||"
            }
            Th8 => "phi(w^2(T)) <= 1/2 min{phi(w(|T||T*|)), phi(w(T^2))} + 1/2 phi(1/2 || |T|^2 + |T*|^2 ||)",
            Cor1_1 => "w^2(T) <= log(1/2 e^w(T^2) + 1/2 e^(||T*T+TT*||/2)) <= ||T*T+TT*||/2",
            Cor1_2 => "w^2(T) <= log(1/2 e^w(|T||T*|) + 1/2 e^(||T*T+TT*||/2)) <= ||T*T+TT*||/2",
            CorProp1 => "w^4(T) <= log(1/2 e^(w^2(T^2)) + 1/2 e^(|| |T|^4+|T*|^4 ||/2)) <= || |T|^4+|T*|^4 ||/2",
            Th7Power => {
                "phi(w^n(T)) <= 2^(1-n) phi(w(T^n)) + sum_{k=1}^{n-1} 2^(-k) phi(||T^k|| ||T||^(n-k)) <= 2^(1-n) phi(w(T^n)) + (1-2^(1-n)) phi(||T||^n)"
            }
            CorNil => "w(T) <= (log(2^(1-n) e^w(T^n) + (1-2^(1-n)) e^(||T||^n)))^(1/n) <= ||T||",
            CorN222 => "w(T) <= (log(1/2 e^w(T^2) + 1/2 e^(||T||^2)))^(1/2) <= ||T||",
            CorNilpotent => "if T^n = 0: w(T) <= (log(2^(1-n) + (1-2^(1-n)) e))^(1/n) ||T|| <= ||T||",
            BuzanoVec => "|<x,e><e,y>| <= 1/2 (||x|| ||y|| + |<x,y>|), ||e|| = 1",
            GenCauchyVec => {
                "|<x,y>|^2 <= v/(1+v) ||x||^2 ||y||^2 + 1/(1+v) |<x,y>| ||x|| ||y|| <= ||x||^2 ||y||^2"
            }
            MccarthyVec => "<Ax,x>^r <= <A^r x,x>, A >= 0, ||x|| = 1, r >= 1",
            MixedSchwarzVec => "|<Tx,y>| <= || |T|^s x || || |T*|^(1-s) y ||",
            OpJensenVec => "phi(<Ax,x>) <= <phi(A) x,x>, A >= 0, ||x|| = 1",
            ExtBuzanoVec => {
                "|prod_k <x_k,e>| <= 1/2 (|<x_1,x_2> prod_{k>=3} <x_k,e>| + prod_k ||x_k||), ||e|| = 1"
            }
            OrliczBuzanoVec => {
                "phi(|<x,e><e,y>|) <= phi(m) <= 1/2 (phi(||x|| ||y||) + phi(|<x,y>|)) <= phi(||x|| ||y||), m = 1/2 (||x|| ||y|| + |<x,y>|)"
            }
            OrliczBuzanoLog => {
                "phi = e^t - 1: |<x,e><e,y>| <= log(1/2 e^(||x|| ||y||) + 1/2 e^|<x,y>|) <= ||x|| ||y||; phi = e^(t^2) - 1: |<x,e><e,y>| <= sqrt(log(1/2 e^(||x||^2 ||y||^2) + 1/2 e^(|<x,y>|^2))) <= ||x|| ||y||"
            }
        }
    }

    /// Names of the chain members, left to right.
    pub fn chain_names(self) -> &'static [&'static str] {
        use CaseId::*;
        match self {
            BaseNorm => &["norm/2", "w", "norm"],
            BaseKittaneh => &["w", "half_norm_abs_sum"],
            BaseElhaddad => &["w^2r", "half_norm_abs_pow_sum"],
            BaseAbuomar | BaseBhunia => &["w^2", "rhs"],
            DragomirProduct => &["w^r(S*T)", "half_norm_pow_sum"],
            PowerNorm => &["w", "log_mean_exp", "norm"],
            PowerNormPhi => &["phi(w)", "mean_phi", "phi(norm)"],
            Th1Product => &["phi(w^2(T*S))", "rhs"],
            Th1Power => &["w^2r(T*S)", "rhs", "half_norm_pow4_sum"],
            CorN1 | Cor11 => &["w^2(T*S)", "refined", "tail"],
            Th2Gh | Th3Alpha | Th4GhAlpha | Th5 | Th6 | Th8 => &["phi(w^2)", "rhs"],
            Cor22 => &["w^2", "refined", "tail"],
            CorHalfsumSq => &["phi(w^2)", "half_norm_phi_sum"],
            CorHalfsum => &["phi(w)", "half_norm_phi_sum"],
            Cor1_1 | Cor1_2 => &["w^2", "log_mean_exp", "half_norm_gram_sum"],
            CorProp1 => &["w^4", "log_mean_exp", "half_norm_abs4_sum"],
            Th7Power => &["phi(w^n)", "power_sum", "norm_tail"],
            CorNil | CorN222 => &["w", "root_log_mean_exp", "norm"],
            CorNilpotent => &["w", "c_n*norm", "norm"],
            BuzanoVec => &["|<x,e><e,y>|", "rhs"],
            GenCauchyVec => &["|<x,y>|^2", "refined", "|x|^2|y|^2"],
            MccarthyVec => &["<Ax,x>^r", "<A^r x,x>"],
            MixedSchwarzVec => &["|<Tx,y>|", "mixed_norm_product"],
            OpJensenVec => &["phi(<Ax,x>)", "<phi(A)x,x>"],
            ExtBuzanoVec => &["|prod<x_k,e>|", "rhs"],
            OrliczBuzanoVec => &["phi(|<x,e><e,y>|)", "phi(mean)", "mean_phi", "phi(|x||y|)"],
            OrliczBuzanoLog => &["|<x,e><e,y>|", "log_form", "|x||y|"],
        }
    }
}

/// Parameter values of one case instance; absent parameters are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseParams {
    pub phi: Option<OrliczFn>,
    pub alpha: Option<f64>,
    pub v: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub n: Option<u32>,
    pub variant: Option<Variant>,
}

impl CaseParams {
    pub fn has(&self, p: Param) -> bool {
        match p {
            Param::Phi => self.phi.is_some(),
            Param::Alpha => self.alpha.is_some(),
            Param::V => self.v.is_some(),
            Param::S => self.s.is_some(),
            Param::R => self.r.is_some(),
            Param::N => self.n.is_some(),
            Param::Variant => self.variant.is_some(),
        }
    }

    fn render(&self, p: Param) -> Option<String> {
        match p {
            Param::Phi => self.phi.as_ref().map(|f| f.to_string()),
            Param::Alpha => self.alpha.map(|x| x.to_string()),
            Param::V => self.v.map(|x| x.to_string()),
            Param::S => self.s.map(|x| x.to_string()),
            Param::R => self.r.map(|x| x.to_string()),
            Param::N => self.n.map(|x| x.to_string()),
            Param::Variant => self.variant.map(|x| x.name().to_string()),
        }
    }

    /// `k=v` pairs in canonical order, comma separated.
    pub fn render_all(&self) -> String {
        Param::ORDER
            .iter()
            .filter_map(|&p| self.render(p).map(|v| format!("{}={v}", p.name())))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn set(&mut self, p: Param, value: &str) -> Result<(), BoundError> {
        let bad = |what: &str| BoundError::Parse(format!("{}={value}: expected {what}", p.name()));
        let real = || value.parse::<f64>().map_err(|_| bad("a number"));
        match p {
            Param::Phi => self.phi = Some(value.parse().map_err(|e| BoundError::Parse(format!("phi: {e}")))?),
            Param::Alpha => self.alpha = Some(real()?),
            Param::V => self.v = Some(real()?),
            Param::S => self.s = Some(real()?),
            Param::R => self.r = Some(real()?),
            Param::N => self.n = Some(value.parse().map_err(|_| bad("an integer"))?),
            Param::Variant => {
                self.variant = Some(match value {
                    "a" | "A" => Variant::A,
                    "b" | "B" => Variant::B,
                    _ => return Err(bad("a or b")),
                })
            }
        }
        Ok(())
    }
}

/// One instance of a catalogue inequality: identifier, parameters, and the
/// self-test flag that scales the outermost right-hand side by 0.1.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCase {
    id: CaseId,
    params: CaseParams,
    corrupt: bool,
}

fn range_err(id: CaseId, p: Param, value: f64, expected: &str) -> BoundError {
    BoundError::ParamRange {
        case: id.name().to_string(),
        param: p.name().to_string(),
        value,
        expected: expected.to_string(),
    }
}

impl BoundCase {
    pub fn new(id: CaseId, params: CaseParams) -> Result<Self, BoundError> {
        let wanted = id.params();
        for p in Param::ORDER {
            match (wanted.contains(&p), params.has(p)) {
                (true, false) => {
                    return Err(BoundError::MissingParam {
                        case: id.name().to_string(),
                        param: p.name().to_string(),
                    })
                }
                (false, true) => {
                    return Err(BoundError::UnexpectedParam {
                        case: id.name().to_string(),
                        param: p.name().to_string(),
                    })
                }
                _ => {}
            }
        }
        let unit = |p: Param, x: Option<f64>| -> Result<(), BoundError> {
            match x {
                Some(x) if !(0.0..=1.0).contains(&x) => Err(range_err(id, p, x, "[0, 1]")),
                _ => Ok(()),
            }
        };
        unit(Param::Alpha, params.alpha)?;
        unit(Param::S, params.s)?;
        if let Some(v) = params.v {
            if id == CaseId::Cor11 {
                if !(v > 0.0 && v < 1.0) {
                    return Err(range_err(id, Param::V, v, "(0, 1)"));
                }
            } else if !(v >= 0.0 && v.is_finite()) {
                return Err(range_err(id, Param::V, v, "a finite value >= 0"));
            }
        }
        if let Some(r) = params.r {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(range_err(id, Param::R, r, "a finite value >= 1"));
            }
        }
        if let Some(n) = params.n {
            if !(2..=MAX_N).contains(&n) {
                return Err(range_err(id, Param::N, n as f64, "an integer in 2..=16"));
            }
        }
        if let Some(phi) = &params.phi {
            if id.requires_submultiplicative() && !phi.submult_status().admits() {
                return Err(BoundError::NotSubmultiplicative {
                    case: id.name().to_string(),
                    phi: phi.to_string(),
                    status: format!("{:?}", phi.submult_status()),
                });
            }
            if id == CaseId::OrliczBuzanoLog
                && !matches!(phi.kind(), OrliczKind::ExpMinusOne | OrliczKind::ExpSquareMinusOne)
            {
                return Err(BoundError::PhiNotAllowed {
                    case: id.name().to_string(),
                    phi: phi.to_string(),
                    allowed: "expm1 or expsq".to_string(),
                });
            }
        }
        Ok(Self {
            id,
            params,
            corrupt: false,
        })
    }

    /// Parameter-free case.
    pub fn simple(id: CaseId) -> Result<Self, BoundError> {
        Self::new(id, CaseParams::default())
    }

    /// The same case with its outermost right-hand side scaled by 0.1.
    pub fn corrupted(mut self) -> Self {
        self.corrupt = true;
        self
    }

    pub fn id(&self) -> CaseId {
        self.id
    }

    pub fn params(&self) -> &CaseParams {
        &self.params
    }

    pub fn is_corrupt(&self) -> bool {
        self.corrupt
    }

    pub fn phi(&self) -> Option<&OrliczFn> {
        self.params.phi.as_ref()
    }

    pub(crate) fn alpha(&self) -> f64 {
        self.params.alpha.expect("validated")
    }

    pub(crate) fn v(&self) -> f64 {
        self.params.v.expect("validated")
    }

    pub(crate) fn s(&self) -> f64 {
        self.params.s.expect("validated")
    }

    pub(crate) fn r(&self) -> f64 {
        self.params.r.expect("validated")
    }

    pub(crate) fn n(&self) -> u32 {
        match self.id {
            CaseId::CorN222 => 2,
            _ => self.params.n.expect("validated"),
        }
    }

    pub(crate) fn variant(&self) -> Variant {
        self.params.variant.expect("validated")
    }

    pub(crate) fn phi_ref(&self) -> &OrliczFn {
        self.params.phi.as_ref().expect("validated")
    }

    /// Position of `w`-dependent member and its form, for cases whose chain
    /// bounds the numerical radius of a single operator. The member right
    /// after it is the tightest upper estimate.
    pub fn lhs_form(&self) -> Option<(usize, LhsForm)> {
        use CaseId::*;
        let phi_or_power = |k: f64| match self.phi() {
            Some(_) => LhsForm::Phi(k),
            None => LhsForm::Power(k),
        };
        Some(match self.id {
            BaseNorm => (1, LhsForm::Power(1.0)),
            BaseKittaneh | PowerNorm | CorNil | CorN222 | CorNilpotent => (0, LhsForm::Power(1.0)),
            BaseElhaddad => (0, LhsForm::Power(2.0 * self.r())),
            BaseAbuomar | BaseBhunia | Cor22 | Cor1_1 | Cor1_2 => (0, LhsForm::Power(2.0)),
            CorProp1 => (0, LhsForm::Power(4.0)),
            PowerNormPhi | CorHalfsum => (0, phi_or_power(1.0)),
            Th2Gh | Th3Alpha | Th4GhAlpha | CorHalfsumSq | Th5 | Th6 | Th8 => (0, phi_or_power(2.0)),
            Th7Power => (0, phi_or_power(self.n() as f64)),
            _ => return None,
        })
    }

    /// `(K, d)` such that every argument passed to φ is at most `K·‖T‖^d`
    /// once `‖T‖ ≥ 1`; `None` for cases that never evaluate φ on operator
    /// quantities.
    pub fn growth(&self) -> Option<(f64, f64)> {
        use CaseId::*;
        self.phi()?;
        Some(match self.id {
            PowerNormPhi | CorHalfsum | OpJensenVec => (1.0, 1.0),
            Th3Alpha | CorHalfsumSq | Th6 | Th8 => (1.0, 2.0),
            Th5 => (2.0, 2.0),
            Th4GhAlpha => {
                let s = self.s();
                (1.0, 2f64.max(4.0 * s).max(4.0 - 4.0 * s))
            }
            Th2Gh => {
                let s = self.s();
                (1.0, 2f64.max(4.0 * s).max(4.0 - 4.0 * s))
            }
            Th1Product => (1.0, 4.0),
            Th7Power => (1.0, self.n() as f64),
            OrliczBuzanoVec => (1.0, 2.0),
            _ => return None,
        })
    }

    /// Largest admissible `‖T‖` (or vector norm) for exponential φ:
    /// `min(4, (0.9·L/K)^{1/d})`, `L` the overflow threshold of φ.
    pub fn exp_cap(&self) -> Option<f64> {
        let phi = self.phi()?;
        if !phi.is_exponential() {
            return None;
        }
        let (k, d) = self.growth()?;
        let limit = phi.max_arg()?;
        Some(4f64.min((0.9 * limit / k).powf(1.0 / d)))
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.corrupt {
            f.write_str("corrupt:")?;
        }
        f.write_str(self.id.name())?;
        let params = self.params.render_all();
        if !params.is_empty() {
            write!(f, "[{params}]")?;
        }
        Ok(())
    }
}

impl FromStr for BoundCase {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (corrupt, rest) = match s.strip_prefix("corrupt:") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (name, body) = match rest.split_once('[') {
            Some((name, tail)) => {
                let body = tail
                    .strip_suffix(']')
                    .ok_or_else(|| BoundError::Parse(format!("unterminated parameter list in {s:?}")))?;
                (name, Some(body))
            }
            None => (rest, None),
        };
        let id = CaseId::from_name(name).ok_or_else(|| BoundError::UnknownCase(name.to_string()))?;
        let mut params = CaseParams::default();
        if let Some(body) = body {
            for item in body.split(',').map(str::trim).filter(|i| !i.is_empty()) {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| BoundError::Parse(format!("expected key=value, got {item:?}")))?;
                let p = Param::from_name(k.trim())
                    .ok_or_else(|| BoundError::Parse(format!("unknown parameter {k:?}")))?;
                params.set(p, v.trim())?;
            }
        }
        let case = BoundCase::new(id, params)?;
        Ok(if corrupt { case.corrupted() } else { case })
    }
}

impl Serialize for BoundCase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BoundCase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for label in [
            "base_norm",
            "th4_gh_alpha[phi=expm1,alpha=0.5,s=0.25,variant=a]",
            "th1_product[phi=power:p=2,v=0.5]",
            "th7_power[phi=expsq,n=3]",
            "corrupt:base_kittaneh",
            "cor_11[v=0.25]",
            "mccarthy_vec[r=1.5]",
        ] {
            let case: BoundCase = label.parse().unwrap();
            assert_eq!(case.to_string(), label);
        }
        // parameter order in the input does not matter
        let c: BoundCase = "th3_alpha[variant=b,alpha=1,phi=expsq]".parse().unwrap();
        assert_eq!(c.to_string(), "th3_alpha[phi=expsq,alpha=1,variant=b]");
    }

    #[test]
    fn names_are_unique() {
        for (i, a) in CaseId::ALL.iter().enumerate() {
            assert_eq!(CaseId::from_name(a.name()), Some(*a));
            for b in &CaseId::ALL[i + 1..] {
                assert_ne!(a.name(), b.name());
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!("nope".parse::<BoundCase>(), Err(BoundError::UnknownCase(_))));
        assert!(matches!("th5".parse::<BoundCase>(), Err(BoundError::MissingParam { .. })));
        assert!(matches!(
            "base_norm[r=2]".parse::<BoundCase>(),
            Err(BoundError::UnexpectedParam { .. })
        ));
        assert!(matches!(
            "th3_alpha[phi=expm1,alpha=1.5,variant=a]".parse::<BoundCase>(),
            Err(BoundError::ParamRange { .. })
        ));
        assert!(matches!("cor_11[v=1]".parse::<BoundCase>(), Err(BoundError::ParamRange { .. })));
        assert!(matches!("base_elhaddad[r=0.5]".parse::<BoundCase>(), Err(BoundError::ParamRange { .. })));
        assert!(matches!("cor_nil[n=1]".parse::<BoundCase>(), Err(BoundError::ParamRange { .. })));
        assert!(matches!(
            "th1_product[phi=expm1,v=0.5]".parse::<BoundCase>(),
            Err(BoundError::NotSubmultiplicative { .. })
        ));
        assert!(matches!(
            "th2_gh[phi=powerlog:p=1,v=0.5,s=0.5]".parse::<BoundCase>(),
            Err(BoundError::NotSubmultiplicative { .. })
        ));
        assert!(matches!(
            "orlicz_buzano_log[phi=power:p=2]".parse::<BoundCase>(),
            Err(BoundError::PhiNotAllowed { .. })
        ));
        assert!("th2_gh[phi=power:p=1.5,v=0.5,s=0.5]".parse::<BoundCase>().is_ok());
    }

    #[test]
    fn exponential_caps() {
        let c: BoundCase = "th5[phi=expm1]".parse().unwrap();
        assert_eq!(c.exp_cap(), Some(4.0));
        let c: BoundCase = "th7_power[phi=expsq,n=5]".parse().unwrap();
        let cap = c.exp_cap().unwrap();
        assert!((cap - (0.9f64 * 26.0).powf(0.2)).abs() < 1e-15);
        let c: BoundCase = "th6[phi=power:p=2]".parse().unwrap();
        assert_eq!(c.exp_cap(), None);
    }
}
