//! Linear character layout and the bin arithmetic that maps normalized
//! pressure onto it.
//!
//! The unit interval is split into `N` equally sized bins. Bin `i` owns
//! `[i/N, (i+1)/N)`, except the last one which is closed at `1.0`. Bin
//! boundaries are the `f64` values `i as f64 / N as f64`, so a pressure that
//! compares `>=` against boundary `k` always lands in bin `k` or later.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("layout needs at least 2 symbols, got {0}")]
    TooFewSymbols(usize),
    #[error("duplicate symbol {0} in layout")]
    DuplicateSymbol(Symbol),
    #[error("backspace must be the last symbol of the layout")]
    BackspaceNotLast,
    #[error("normalized pressure {0} outside [0, 1]")]
    PressureOutOfRange(f64),
    #[error("bin index {index} out of range for {len} symbols")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("symbol {0} is not part of the layout")]
    UnknownSymbol(Symbol),
    #[error("cannot parse symbol {0:?}")]
    BadSymbol(String),
}

/// One selectable entry of the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Char(char),
    Space,
    Backspace,
}

impl Symbol {
    /// Text this symbol appends on commit, if any.
    pub fn as_char(self) -> Option<char> {
        match self {
            Symbol::Char(c) => Some(c),
            Symbol::Space => Some(' '),
            Symbol::Backspace => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Char(c) => write!(f, "{c}"),
            Symbol::Space => f.write_str("SP"),
            Symbol::Backspace => f.write_str("BS"),
        }
    }
}

impl FromStr for Symbol {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SP" => Ok(Symbol::Space),
            "BS" => Ok(Symbol::Backspace),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if !c.is_whitespace() => Ok(Symbol::Char(c)),
                    _ => Err(LayoutError::BadSymbol(s.to_owned())),
                }
            }
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered symbol list. Lower pressure selects earlier symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct LayoutConfig {
    symbols: Vec<Symbol>,
}

impl Default for LayoutConfig {
    /// `A`..`Z`, then space, then backspace at the maximum-pressure end.
    fn default() -> Self {
        let mut symbols: Vec<Symbol> = ('A'..='Z').map(Symbol::Char).collect();
        symbols.push(Symbol::Space);
        symbols.push(Symbol::Backspace);
        Self { symbols }
    }
}

impl TryFrom<Vec<Symbol>> for LayoutConfig {
    type Error = LayoutError;

    fn try_from(symbols: Vec<Symbol>) -> Result<Self, Self::Error> {
        Self::new(symbols)
    }
}

impl From<LayoutConfig> for Vec<Symbol> {
    fn from(layout: LayoutConfig) -> Self {
        layout.symbols
    }
}

impl LayoutConfig {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, LayoutError> {
        if symbols.len() < 2 {
            return Err(LayoutError::TooFewSymbols(symbols.len()));
        }
        let mut seen = HashSet::with_capacity(symbols.len());
        for &s in &symbols {
            if !seen.insert(s) {
                return Err(LayoutError::DuplicateSymbol(s));
            }
        }
        if symbols.last() != Some(&Symbol::Backspace) {
            return Err(LayoutError::BackspaceNotLast);
        }
        Ok(Self { symbols })
    }

    /// Builds a layout of `n` symbols: `n - 1` distinct characters followed
    /// by backspace. Handy for sweeping bin counts.
    pub fn with_len(n: usize) -> Result<Self, LayoutError> {
        if n < 2 {
            return Err(LayoutError::TooFewSymbols(n));
        }
        let symbols = ('A'..='Z')
            .chain('a'..='z')
            .chain('0'..='9')
            .chain((0x3B1..).filter_map(char::from_u32))
            .take(n - 1)
            .map(Symbol::Char)
            .chain(std::iter::once(Symbol::Backspace))
            .collect();
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; a layout holds at least two symbols.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn bin_width(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn last_index(&self) -> usize {
        self.len() - 1
    }

    pub fn symbol(&self, index: usize) -> Result<Symbol, LayoutError> {
        self.symbols.get(index).copied().ok_or(LayoutError::IndexOutOfRange {
            index,
            len: self.len(),
        })
    }

    pub fn index_of(&self, symbol: Symbol) -> Result<usize, LayoutError> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .ok_or(LayoutError::UnknownSymbol(symbol))
    }

    /// Lower edge of bin `index`.
    pub fn lower_edge(&self, index: usize) -> f64 {
        index as f64 / self.len() as f64
    }

    /// Index of the bin containing `p`.
    pub fn bin_index(&self, p: f64) -> Result<usize, LayoutError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(LayoutError::PressureOutOfRange(p));
        }
        let n = self.len();
        let mut i = ((p * n as f64).floor() as usize).min(n - 1);
        // p * n may round across a boundary; settle against the edges themselves.
        while i > 0 && p < self.lower_edge(i) {
            i -= 1;
        }
        while i + 1 < n && p >= self.lower_edge(i + 1) {
            i += 1;
        }
        Ok(i)
    }

    pub fn bin_center(&self, index: usize) -> Result<f64, LayoutError> {
        if index >= self.len() {
            return Err(LayoutError::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok((index as f64 + 0.5) / self.len() as f64)
    }

    pub fn symbol_at(&self, p: f64) -> Result<Symbol, LayoutError> {
        Ok(self.symbols[self.bin_index(p)?])
    }
}
