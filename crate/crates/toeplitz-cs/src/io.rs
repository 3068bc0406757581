//! JSON file format for symbols and parsing/serialization helpers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{Mat2, MatrixSymbol, ScalarSymbol, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Scalar,
    Block2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffValue {
    Scalar([f64; 2]),
    Block([[[f64; 2]; 2]; 2]),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub n: i64,
    pub value: CoeffValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub kind: SymbolKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub coeffs: Vec<CoeffEntry>,
}

#[derive(Debug, Clone)]
pub enum ParsedSymbol {
    Scalar(ScalarSymbol),
    Block(MatrixSymbol),
}

impl ParsedSymbol {
    pub fn kind(&self) -> SymbolKind {
        match self {
            ParsedSymbol::Scalar(_) => SymbolKind::Scalar,
            ParsedSymbol::Block(_) => SymbolKind::Block2,
        }
    }

    pub fn band_degree(&self) -> i64 {
        match self {
            ParsedSymbol::Scalar(s) => s.band_degree(),
            ParsedSymbol::Block(m) => m.band_degree(),
        }
    }
}

fn c(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

fn pair(v: C64) -> [f64; 2] {
    [v.re, v.im]
}

impl SymbolFile {
    pub fn from_scalar(s: &ScalarSymbol, name: Option<&str>) -> Self {
        SymbolFile {
            kind: SymbolKind::Scalar,
            name: name.map(str::to_owned),
            seed: None,
            coeffs: s
                .iter()
                .map(|(n, v)| CoeffEntry { n, value: CoeffValue::Scalar(pair(v)) })
                .collect(),
        }
    }

    pub fn from_block(m: &MatrixSymbol, name: Option<&str>) -> Self {
        SymbolFile {
            kind: SymbolKind::Block2,
            name: name.map(str::to_owned),
            seed: None,
            coeffs: m
                .iter()
                .map(|(n, a)| CoeffEntry {
                    n,
                    value: CoeffValue::Block([
                        [pair(a[(0, 0)]), pair(a[(0, 1)])],
                        [pair(a[(1, 0)]), pair(a[(1, 1)])],
                    ]),
                })
                .collect(),
        }
    }

    pub fn from_parsed(p: &ParsedSymbol, name: Option<&str>) -> Self {
        match p {
            ParsedSymbol::Scalar(s) => SymbolFile::from_scalar(s, name),
            ParsedSymbol::Block(m) => SymbolFile::from_block(m, name),
        }
    }

    pub fn to_symbol(&self) -> Result<ParsedSymbol> {
        match self.kind {
            SymbolKind::Scalar => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len());
                for e in &self.coeffs {
                    match &e.value {
                        CoeffValue::Scalar(v) => coeffs.push((e.n, c(*v))),
                        CoeffValue::Block(_) => {
                            return Err(Error::Parse(format!(
                                "coefficient n={} is a 2x2 block but kind is \"scalar\"",
                                e.n
                            )))
                        }
                    }
                }
                Ok(ParsedSymbol::Scalar(ScalarSymbol::new(coeffs)))
            }
            SymbolKind::Block2 => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len());
                for e in &self.coeffs {
                    match &e.value {
                        CoeffValue::Block(b) => coeffs.push((
                            e.n,
                            Mat2::new(c(b[0][0]), c(b[0][1]), c(b[1][0]), c(b[1][1])),
                        )),
                        CoeffValue::Scalar(_) => {
                            return Err(Error::Parse(format!(
                                "coefficient n={} is scalar but kind is \"block2\"",
                                e.n
                            )))
                        }
                    }
                }
                Ok(ParsedSymbol::Block(MatrixSymbol::new(coeffs)))
            }
        }
    }
}

pub fn parse_symbol(text: &str) -> Result<ParsedSymbol> {
    let file: SymbolFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_symbol()
}

/// Canonical serialization: coefficients sorted by index, duplicates merged,
/// negligible entries dropped, full double precision.
pub fn serialize_symbol(symbol: &ParsedSymbol, name: Option<&str>) -> String {
    let file = SymbolFile::from_parsed(symbol, name);
    serde_json::to_string_pretty(&file).expect("symbol files always serialize")
}
