//! Permutation primitives.
//!
//! A [`Perm`] is a string of pairwise-distinct positive symbols. Instances built
//! by the reductions usually use the contiguous alphabet `1..=L`, but nothing in
//! this module requires it; [`Perm::normalized`] relabels onto `1..=L` when an
//! external format needs it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single 1-based symbol.
pub type Symbol = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("symbol at position {0} occurs earlier in the string")]
    DuplicateSymbol(usize),
    #[error("symbol at position {0} is not a positive integer")]
    NonPositiveSymbol(usize),
    #[error("symbol at position {0} does not fit in a 32-bit symbol")]
    SymbolOverflow(usize),
}

/// Checks that `seq` has pairwise distinct, positive entries.
///
/// Positions in errors are 0-based; for duplicates the position of the second
/// occurrence is reported.
pub fn validate(seq: &[i64]) -> Result<(), PermError> {
    let mut seen = HashSet::with_capacity(seq.len());
    for (pos, &v) in seq.iter().enumerate() {
        if v <= 0 {
            return Err(PermError::NonPositiveSymbol(pos));
        }
        if v > i64::from(Symbol::MAX) {
            return Err(PermError::SymbolOverflow(pos));
        }
        if !seen.insert(v) {
            return Err(PermError::DuplicateSymbol(pos));
        }
    }
    Ok(())
}

fn check_symbols(symbols: &[Symbol]) -> Result<(), PermError> {
    let max = symbols.iter().copied().max().unwrap_or(0) as usize;
    // Dense marking when the alphabet is compact, hashing otherwise.
    if max <= 8 * symbols.len() + 64 {
        let mut seen = vec![false; max + 1];
        for (pos, &s) in symbols.iter().enumerate() {
            if s == 0 {
                return Err(PermError::NonPositiveSymbol(pos));
            }
            if std::mem::replace(&mut seen[s as usize], true) {
                return Err(PermError::DuplicateSymbol(pos));
            }
        }
    } else {
        let mut seen = HashSet::with_capacity(symbols.len());
        for (pos, &s) in symbols.iter().enumerate() {
            if s == 0 {
                return Err(PermError::NonPositiveSymbol(pos));
            }
            if !seen.insert(s) {
                return Err(PermError::DuplicateSymbol(pos));
            }
        }
    }
    Ok(())
}

/// A string without repeated symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct Perm(Vec<Symbol>);

impl Perm {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, PermError> {
        check_symbols(&symbols)?;
        Ok(Self(symbols))
    }

    /// Wraps symbols that are distinct and positive by construction.
    pub(crate) fn from_vec_unchecked(symbols: Vec<Symbol>) -> Self {
        debug_assert!(check_symbols(&symbols).is_ok(), "invalid permutation {symbols:?}");
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `1 2 ... n`.
    pub fn identity(n: usize) -> Self {
        Self((1..=n as Symbol).collect())
    }

    /// `from, from+1, ..., from+len-1`.
    pub fn run(from: Symbol, len: usize) -> Self {
        Self((0..len as Symbol).map(|i| from + i).collect())
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_symbol(&self) -> Symbol {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn min_symbol(&self) -> Symbol {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// The occurring symbols in increasing order.
    pub fn alphabet(&self) -> Vec<Symbol> {
        let mut a = self.0.clone();
        a.sort_unstable();
        a
    }

    pub fn same_alphabet(&self, other: &Perm) -> bool {
        self.len() == other.len() && self.alphabet() == other.alphabet()
    }

    /// True when the symbols are exactly `1..=len`.
    pub fn is_contiguous(&self) -> bool {
        let n = self.len() as Symbol;
        self.0.iter().all(|&s| s <= n)
    }

    /// Adds `k` to every symbol.
    pub fn shift(&self, k: Symbol) -> Perm {
        Self(self.0.iter().map(|&s| s + k).collect())
    }

    /// The subsequence made of the symbols in `sub`, in this string's order.
    pub fn restrict(&self, sub: &HashSet<Symbol>) -> Perm {
        Self(self.0.iter().copied().filter(|s| sub.contains(s)).collect())
    }

    /// The subsequence made of the symbols in `lo..=hi`.
    pub fn restrict_range(&self, lo: Symbol, hi: Symbol) -> Perm {
        Self(self.0.iter().copied().filter(|&s| lo <= s && s <= hi).collect())
    }

    pub fn reversed(&self) -> Perm {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Order-preserving relabelling of the alphabet onto `1..=len`.
    pub fn normalized(&self) -> Perm {
        let alphabet = self.alphabet();
        let rank: HashMap<Symbol, Symbol> = alphabet
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i as Symbol + 1))
            .collect();
        Self(self.0.iter().map(|s| rank[s]).collect())
    }

    /// Applies `map` to every symbol. The caller guarantees injectivity.
    pub(crate) fn map_symbols(&self, map: impl Fn(Symbol) -> Symbol) -> Perm {
        Perm::from_vec_unchecked(self.0.iter().map(|&s| map(s)).collect())
    }

    /// Concatenates parts whose alphabets are already pairwise disjoint.
    pub fn concat_disjoint<'a>(parts: impl IntoIterator<Item = &'a Perm>) -> Result<Perm, PermError> {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Perm::new(out)
    }
}

impl TryFrom<Vec<Symbol>> for Perm {
    type Error = PermError;

    fn try_from(v: Vec<Symbol>) -> Result<Self, Self::Error> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<Symbol> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl AsRef<[Symbol]> for Perm {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Adds `k` to every symbol of `s`.
pub fn offset_shift(s: &Perm, k: Symbol) -> Perm {
    s.shift(k)
}

/// Deletes every symbol of `s` outside `sub`.
pub fn restrict(s: &Perm, sub: &HashSet<Symbol>) -> Perm {
    s.restrict(sub)
}

/// Tracks which symbol ranges have been handed out when gluing strings
/// together with fresh symbols.
///
/// Block `i` was shifted by `block_offsets[i]`; the next block starts above
/// `next_free - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreshSymbolLedger {
    pub next_free: Symbol,
    pub block_offsets: Vec<Symbol>,
}

impl Default for FreshSymbolLedger {
    fn default() -> Self {
        Self::new()
    }
}

impl FreshSymbolLedger {
    pub fn new() -> Self {
        Self { next_free: 1, block_offsets: Vec::new() }
    }

    /// Reserves a block for `part`, returning the offset that moves it above
    /// every previously reserved symbol.
    pub fn reserve(&mut self, part: &Perm) -> Symbol {
        let offset = self.next_free - 1;
        self.block_offsets.push(offset);
        self.next_free = offset + part.max_symbol() + 1;
        offset
    }
}

/// Concatenates `parts`, shifting each one above all previous blocks.
///
/// Offsets are non-decreasing and strictly increasing across non-empty parts,
/// so every block occupies its own symbol range.
pub fn concat_fresh(parts: &[Perm], mut ledger: FreshSymbolLedger) -> (Perm, FreshSymbolLedger) {
    let mut out = Vec::with_capacity(parts.iter().map(Perm::len).sum());
    for part in parts {
        let offset = ledger.reserve(part);
        out.extend(part.as_slice().iter().map(|&s| s + offset));
    }
    (Perm::from_vec_unchecked(out), ledger)
}

/// Parses whitespace-separated symbols, e.g. `"3 1 2"`.
impl std::str::FromStr for Perm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw: Vec<i64> = s
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| format!("bad symbol {t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        validate(&raw).map_err(|e| e.to_string())?;
        Ok(Perm(raw.into_iter().map(|v| v as Symbol).collect()))
    }
}

#[cfg(test)]
pub(crate) fn p(s: &str) -> Perm {
    // Compact digit notation for tests: "2134".
    Perm::new(s.bytes().map(|b| Symbol::from(b - b'0')).collect()).unwrap()
}
