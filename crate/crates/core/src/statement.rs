//! Identifiers for the checked congruences and their named parameters.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modring::{format_fraction, ExactRational};

/// Every congruence or identity the verifier knows how to check.
///
/// Variants are listed in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    /// `sum D_k(x,y) D_k(-1-x,y) ≡ (-1)^<x>` for `y` a unit.
    DComplement,
    /// `sum S_k(x,y)^2 ≡ (-1/p)` or `0` according to `x ≡ -1/2`.
    SSquare,
    /// Two-parameter `D` product sum.
    DProduct,
    /// Two-parameter `S` product sum.
    SProduct,
    /// Central-binomial product sum with `a = 2`, `b = -6`.
    CentralPairTwoMinusSix,
    /// Squared binomial-weighted Catalan sums, general `a`.
    CatalanSquare,
    CatalanSquareTwo,
    CatalanSquareMinusSix,
    /// Central-binomial product sum, general `a`, `b`.
    CentralPair,
    /// `D_n(-1/2,a) D_n(-1/3,b)` product sum for `p ≡ 1 (mod 3)`.
    HalvesThirds,
    /// Product sum of the `C(2k,k)C(3k,k)` and `C(2k,k)C(4k,2k)` transforms.
    ThirdsQuarters,
    /// The finite telescoping identity and its difference certificate.
    Telescope,
    /// `sum C_k / m^k` modulo `p`.
    CatalanSum,
    /// `sum J~2(n)^2 ≡ (-1/p) (mod p^3)`.
    J2SquareCube,
}

impl Statement {
    pub const ALL: [Statement; 14] = [
        Statement::DComplement,
        Statement::SSquare,
        Statement::DProduct,
        Statement::SProduct,
        Statement::CentralPairTwoMinusSix,
        Statement::CatalanSquare,
        Statement::CatalanSquareTwo,
        Statement::CatalanSquareMinusSix,
        Statement::CentralPair,
        Statement::HalvesThirds,
        Statement::ThirdsQuarters,
        Statement::Telescope,
        Statement::CatalanSum,
        Statement::J2SquareCube,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::DComplement => "eq1.1",
            Statement::SSquare => "eq1.2",
            Statement::DProduct => "eq1.3",
            Statement::SProduct => "eq1.4",
            Statement::CentralPairTwoMinusSix => "eq1.5",
            Statement::CatalanSquare => "eq1.6",
            Statement::CatalanSquareTwo => "eq1.7",
            Statement::CatalanSquareMinusSix => "eq1.8",
            Statement::CentralPair => "eq2.3",
            Statement::HalvesThirds => "cor2.4",
            Statement::ThirdsQuarters => "cor2.5",
            Statement::Telescope => "lemma2.2",
            Statement::CatalanSum => "lemma3.1",
            Statement::J2SquareCube => "kw-p3",
        }
    }

    /// Smallest prime covered by the statement's hypothesis.
    pub fn min_prime(self) -> u64 {
        match self {
            Statement::CentralPairTwoMinusSix
            | Statement::CatalanSquareTwo
            | Statement::CatalanSquareMinusSix
            | Statement::ThirdsQuarters
            | Statement::J2SquareCube => 5,
            _ => 3,
        }
    }

    /// Exponent of the residue ring the statement lives in.
    pub fn exponent(self) -> u32 {
        match self {
            Statement::J2SquareCube => 3,
            Statement::Telescope => 0,
            _ => 1,
        }
    }

    /// Prime ceiling used by the full suite.
    pub fn suite_p_max(self) -> u64 {
        match self {
            Statement::CentralPairTwoMinusSix
            | Statement::CatalanSquare
            | Statement::CatalanSquareTwo
            | Statement::CatalanSquareMinusSix
            | Statement::CatalanSum => 499,
            Statement::J2SquareCube => 97,
            _ => 199,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s.trim())
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

/// Ordered list of named rational parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(Vec<(String, ExactRational)>);

impl Params {
    pub fn new() -> Self {
        Params(Vec::new())
    }

    pub fn with(mut self, name: &str, value: ExactRational) -> Self {
        self.0.push((name.to_string(), value));
        self
    }

    pub fn get(&self, name: &str) -> Result<&ExactRational> {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ExactRational)> {
        self.0.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `name=value` pairs joined by `;`.
    pub fn to_compact(&self) -> String {
        self.0
            .iter()
            .map(|(n, v)| format!("{n}={}", format_fraction(v)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl PartialOrd for Params {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Params {
    /// Lexicographic in parameter order, comparing values numerically.
    fn cmp(&self, other: &Self) -> Ordering {
        for ((na, va), (nb, vb)) in self.0.iter().zip(&other.0) {
            let ord = na.cmp(nb).then_with(|| va.cmp(vb));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}
