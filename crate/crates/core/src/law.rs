use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The laws handled by the crate.
///
/// `CoshLaw`, `SinhLaw` and `TanhLaw` have characteristic functions
/// `1/cosh t`, `t/sinh t` and `tanh t / t`. `Laplace` is the double
/// exponential law with characteristic function `1/(1+t²)`. The three
/// `Bdlp*` laws are the time-one marginals of the background driving Lévy
/// processes of the hyperbolic laws; they are infinitely divisible with a
/// finite logarithmic moment but are not selfdecomposable in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LawId {
    Laplace,
    CoshLaw,
    SinhLaw,
    TanhLaw,
    BdlpCosh,
    BdlpSinh,
    BdlpTanh,
}

impl LawId {
    pub const ALL: [LawId; 7] = [
        LawId::Laplace,
        LawId::CoshLaw,
        LawId::SinhLaw,
        LawId::TanhLaw,
        LawId::BdlpCosh,
        LawId::BdlpSinh,
        LawId::BdlpTanh,
    ];

    pub const HYPERBOLIC: [LawId; 3] = [LawId::CoshLaw, LawId::SinhLaw, LawId::TanhLaw];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::Laplace => "Laplace",
            LawId::CoshLaw => "CoshLaw",
            LawId::SinhLaw => "SinhLaw",
            LawId::TanhLaw => "TanhLaw",
            LawId::BdlpCosh => "BdlpCosh",
            LawId::BdlpSinh => "BdlpSinh",
            LawId::BdlpTanh => "BdlpTanh",
        }
    }

    pub fn is_selfdecomposable(self) -> bool {
        matches!(
            self,
            LawId::Laplace | LawId::CoshLaw | LawId::SinhLaw | LawId::TanhLaw
        )
    }

    pub fn is_bdlp(self) -> bool {
        !self.is_selfdecomposable()
    }

    /// Law of `Y(1)` for the driving process of a hyperbolic law.
    pub fn bdlp(self) -> Option<LawId> {
        match self {
            LawId::CoshLaw => Some(LawId::BdlpCosh),
            LawId::SinhLaw => Some(LawId::BdlpSinh),
            LawId::TanhLaw => Some(LawId::BdlpTanh),
            _ => None,
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawId::ALL
            .into_iter()
            .find(|law| law.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown law `{s}`")))
    }
}
