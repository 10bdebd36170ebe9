//! JSON file formats for dice, sacks, factorizations and reports.
//!
//! Dice are read either as a support array of exponents (`[0, 2, 3, 5]`), a
//! polynomial string (`"1+x^2+x^3+x^5"`), `{"support": [...]}`, or a rational
//! probability vector `{"probs": ["1/4", "0", ...]}`. A sack is an array of
//! dice or any object with a `dice` field, so every sack this tool writes can
//! be read back.

use std::str::FromStr;

use fairsack_core::construct::{IntervalPartition, OrderedFactorization, Sack};
use fairsack_core::decompose::{DieChain, Decomposition};
use fairsack_core::dice::{denormalize, normalize, RationalDie};
use fairsack_core::enumerate::EnumerationResult;
use fairsack_core::poly::SupportPoly;
use fairsack_core::verify::FairnessReport;
use fairsack_core::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid support: {0}")]
    Support(#[from] fairsack_core::poly::PolyError),
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("invalid die: {0}")]
    Die(#[from] fairsack_core::dice::DieError),
    #[error("invalid sack: {0}")]
    Sack(#[from] fairsack_core::construct::ConstructError),
}

/// A die as written in input files.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum DieJson {
    Exponents(Vec<u64>),
    Text(String),
    Support { support: Vec<u64> },
    Probs { probs: Vec<String> },
}

/// A die after parsing: supports stay exact sets, probability vectors become
/// rational dice.
#[derive(Clone, Debug, PartialEq)]
pub enum InputDie {
    Support(SupportPoly),
    Rational(RationalDie),
}

impl InputDie {
    /// Support form, checking semifairness for rational dice.
    pub fn normalized(&self) -> Result<SupportPoly, FormatError> {
        match self {
            InputDie::Support(s) => Ok(s.clone()),
            InputDie::Rational(d) => Ok(normalize(d)?),
        }
    }

    pub fn rational(&self) -> Result<RationalDie, FormatError> {
        match self {
            InputDie::Support(s) => Ok(denormalize(s)?),
            InputDie::Rational(d) => Ok(d.clone()),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    BigRational::from_str(s.trim()).map_err(|_| FormatError::Rational(s.to_string()))
}

pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl TryFrom<DieJson> for InputDie {
    type Error = FormatError;

    fn try_from(d: DieJson) -> Result<Self, FormatError> {
        Ok(match d {
            DieJson::Exponents(e) | DieJson::Support { support: e } => {
                InputDie::Support(SupportPoly::new(e)?)
            }
            DieJson::Text(t) => InputDie::Support(t.parse()?),
            DieJson::Probs { probs } => {
                let probs = probs.iter().map(|p| parse_rational(p)).collect::<Result<_, _>>()?;
                InputDie::Rational(RationalDie::new(probs)?)
            }
        })
    }
}

pub fn die_to_json(d: &RationalDie) -> DieJson {
    DieJson::Probs { probs: d.probs().iter().map(render_rational).collect() }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SackJsonIn {
    Bare(Vec<DieJson>),
    Object { dice: Vec<DieJson> },
}

pub fn parse_die(text: &str) -> Result<InputDie, FormatError> {
    let trimmed = text.trim();
    let raw: DieJson = if trimmed.starts_with(['[', '{', '"']) {
        serde_json::from_str(trimmed)?
    } else {
        DieJson::Text(trimmed.to_string())
    };
    raw.try_into()
}

pub fn parse_dice(text: &str) -> Result<Vec<InputDie>, FormatError> {
    let raw: SackJsonIn = serde_json::from_str(text)?;
    let dice = match raw {
        SackJsonIn::Bare(d) | SackJsonIn::Object { dice: d } => d,
    };
    dice.into_iter().map(InputDie::try_from).collect()
}

/// Parses and normalizes a sack; rational dice must be semifair.
pub fn parse_sack(text: &str) -> Result<Sack, FormatError> {
    let dice = parse_dice(text)?
        .iter()
        .map(InputDie::normalized)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sack::new(dice)?)
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct FactorizationJson {
    pub a: Vec<u64>,
    pub blocks: Vec<Vec<usize>>,
}

impl FactorizationJson {
    pub fn new(a: &OrderedFactorization, p: &IntervalPartition) -> Self {
        Self { a: a.factors().to_vec(), blocks: p.blocks() }
    }

    pub fn parse(&self) -> Result<(OrderedFactorization, IntervalPartition), FormatError> {
        Ok((
            OrderedFactorization::new(self.a.clone())?,
            IntervalPartition::from_blocks(&self.blocks)?,
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionJson {
    pub a: Vec<u64>,
    pub blocks: Vec<Vec<usize>>,
    /// Input die index for each block.
    pub die_order: Vec<usize>,
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        Self {
            a: d.factorization.factors().to_vec(),
            blocks: d.partition.blocks(),
            die_order: d.die_order.clone(),
        }
    }
}

/// A sack with optionally its factorization description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SackJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    pub dice: Vec<Vec<u64>>,
}

impl SackJson {
    pub fn bare(sack: &Sack) -> Self {
        Self {
            t: Some(sack.total()),
            a: None,
            blocks: None,
            dice: sack.dice().iter().map(|d| d.exponents().to_vec()).collect(),
        }
    }

    pub fn described(sack: &Sack, a: &OrderedFactorization, p: &IntervalPartition) -> Self {
        Self { a: Some(a.factors().to_vec()), blocks: Some(p.blocks()), ..Self::bare(sack) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CollisionJson {
    pub total: u64,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
}

/// Report with stable field names.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FairnessReportJson {
    pub fair: bool,
    pub semifair_failures: Vec<usize>,
    pub total_collisions: Vec<CollisionJson>,
    pub missing_totals: Vec<u64>,
}

impl From<&FairnessReport> for FairnessReportJson {
    fn from(r: &FairnessReport) -> Self {
        Self {
            fair: r.fair,
            semifair_failures: r.semifair_failures.clone(),
            total_collisions: r
                .total_collisions
                .iter()
                .map(|c| CollisionJson { total: c.total, first: c.first.clone(), second: c.second.clone() })
                .collect(),
            missing_totals: r.missing_totals.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EnumeratedJson {
    pub a: Vec<u64>,
    pub blocks: Vec<Vec<usize>>,
    pub dice: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EnumerationJson {
    pub t: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    pub sacks: Vec<EnumeratedJson>,
}

impl EnumerationJson {
    pub fn new(r: &EnumerationResult, oracle: Option<bool>) -> Self {
        Self {
            t: r.total,
            count: r.sacks.len(),
            oracle: oracle.map(|ok| if ok { "agree" } else { "disagree" }.to_string()),
            sacks: r
                .sacks
                .iter()
                .map(|s| EnumeratedJson {
                    a: s.factorization.factors().to_vec(),
                    blocks: s.partition.blocks(),
                    dice: s.sack.dice().iter().map(|d| d.exponents().to_vec()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ChainJson {
    pub chain: Vec<[u64; 2]>,
    pub minimal_total: u64,
}

impl From<&DieChain> for ChainJson {
    fn from(c: &DieChain) -> Self {
        Self { chain: c.pairs().iter().map(|&(a, b)| [a, b]).collect(), minimal_total: c.minimal_total() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dice_forms() {
        let dice = parse_dice(r#"[[0,1], "1+x^2", {"support":[0,4,8]}, {"probs":["1/2","1/2"]}]"#)
            .unwrap();
        assert_eq!(dice.len(), 4);
        assert_eq!(dice[1].normalized().unwrap().exponents(), &[0, 2]);
        assert_eq!(dice[3].normalized().unwrap().exponents(), &[0, 1]);
        let sack = parse_sack(r#"{"t": 3, "dice": [[0,1],[0,2]]}"#).unwrap();
        assert_eq!(sack.total(), 3);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(render_rational(&parse_rational("2/8").unwrap()), "1/4");
        assert_eq!(render_rational(&parse_rational("0").unwrap()), "0");
        assert!(parse_rational("1/x").is_err());
        let d = denormalize(&SupportPoly::new(vec![0, 2]).unwrap()).unwrap();
        assert_eq!(
            serde_json::to_string(&die_to_json(&d)).unwrap(),
            r#"{"probs":["1/2","0","1/2"]}"#
        );
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(parse_dice("[[0,1"), Err(FormatError::Json(_))));
        assert!(matches!(parse_dice("[[1,0]]"), Err(FormatError::Support(_))));
        assert!(matches!(parse_dice(r#"[{"probs":["1/2"]}]"#), Err(FormatError::Die(_))));
        assert!(matches!(
            parse_sack(r#"[{"probs":["1/2","1/4","1/4"]}]"#),
            Err(FormatError::Die(_))
        ));
        assert!(matches!(parse_sack("[[1,2]]"), Err(FormatError::Sack(_))));
    }

    #[test]
    fn sack_json_round_trips() {
        let sack = parse_sack("[[0,1,4,5,8,9],[0,2]]").unwrap();
        let text = serde_json::to_string(&SackJson::bare(&sack)).unwrap();
        assert_eq!(text, r#"{"t":11,"dice":[[0,1,4,5,8,9],[0,2]]}"#);
        assert_eq!(parse_sack(&text).unwrap(), sack);
    }
}
