//! Brute-force references. Everything here is written straight from the
//! definitions and shares no code path with the solvers or reductions it is
//! used to check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{BinaryVector, VectorSet};
use crate::metric::lcs_oracle;
use crate::perm::{Perm, Symbol};
use crate::reductions::maxcut::Graph;

pub const MAX_CUT_ORACLE_VERTICES: usize = 24;
pub const TWO_PERM_MEDIAN_GUARD: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {0} vertices; brute force is limited to {MAX_CUT_ORACLE_VERTICES}")]
    TooLarge(usize),
    #[error("length {0} exceeds the exhaustive-search guard {1}")]
    GuardExceeded(usize, usize),
    #[error("vector sets have different dimensions")]
    DimensionMismatch,
    #[error("permutations are over different alphabets")]
    AlphabetMismatch,
}

/// Quantifier prefix over `(a, b, c, e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuantifierPattern {
    /// exists a, b, c, e
    #[serde(rename = "eeee")]
    ExistsExistsExistsExists,
    /// exists a, for all b, exists c, e
    #[serde(rename = "eaee")]
    ExistsForallExistsExists,
}

impl QuantifierPattern {
    pub fn tag(self) -> &'static str {
        match self {
            QuantifierPattern::ExistsExistsExistsExists => "eeee",
            QuantifierPattern::ExistsForallExistsExists => "eaee",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "eeee" => Some(QuantifierPattern::ExistsExistsExistsExists),
            "eaee" => Some(QuantifierPattern::ExistsForallExistsExists),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifiedOVInstance {
    pub a: VectorSet,
    pub b: VectorSet,
    pub c: VectorSet,
    pub e: VectorSet,
    pub pattern: QuantifierPattern,
}

impl QuantifiedOVInstance {
    pub fn new(
        a: VectorSet,
        b: VectorSet,
        c: VectorSet,
        e: VectorSet,
        pattern: QuantifierPattern,
    ) -> Result<Self, OracleError> {
        let d = a.dim();
        if [&b, &c, &e].iter().any(|s| s.dim() != d) {
            return Err(OracleError::DimensionMismatch);
        }
        Ok(Self { a, b, c, e, pattern })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn evaluate(&self) -> bool {
        match self.pattern {
            QuantifierPattern::ExistsExistsExistsExists => ov4_bruteforce(&self.a, &self.b, &self.c, &self.e),
            QuantifierPattern::ExistsForallExistsExists => qov_eaee_bruteforce(&self.a, &self.b, &self.c, &self.e),
        }
    }
}

/// `sum_i a[i] b[i] c[i] e[i] == 0`.
pub fn orthogonal4(a: &BinaryVector, b: &BinaryVector, c: &BinaryVector, e: &BinaryVector) -> bool {
    let (a, b, c, e) = (a.bits(), b.bits(), c.bits(), e.bits());
    let mut sum = 0u32;
    for i in 0..a.len() {
        sum += u32::from(a[i]) * u32::from(b[i]) * u32::from(c[i]) * u32::from(e[i]);
    }
    sum == 0
}

fn exists_ce(a: &BinaryVector, b: &BinaryVector, c: &VectorSet, e: &VectorSet) -> bool {
    c.iter().any(|cv| e.iter().any(|ev| orthogonal4(a, b, cv, ev)))
}

/// Is there an orthogonal quadruple?
pub fn ov4_bruteforce(a: &VectorSet, b: &VectorSet, c: &VectorSet, e: &VectorSet) -> bool {
    a.iter().any(|av| b.iter().any(|bv| exists_ce(av, bv, c, e)))
}

/// Is there an `a` such that every `b` completes to an orthogonal quadruple?
pub fn qov_eaee_bruteforce(a: &VectorSet, b: &VectorSet, c: &VectorSet, e: &VectorSet) -> bool {
    a.iter().any(|av| b.iter().all(|bv| exists_ce(av, bv, c, e)))
}

/// Size of a maximum cut, by trying every side assignment with vertex 1
/// pinned to the first side.
pub fn maxcut_bruteforce(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    if n > MAX_CUT_ORACLE_VERTICES {
        return Err(OracleError::TooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    let mut best = 0;
    for mask in 0u32..(1u32 << (n - 1)) {
        // Bit v-2 set means vertex v (v >= 2) sits on the second side.
        let side = |v: u32| v >= 2 && mask >> (v - 2) & 1 == 1;
        let cut = g.edges().iter().filter(|&&(u, v)| side(u) != side(v)).count();
        best = best.max(cut);
    }
    Ok(best)
}

fn all_perms(symbols: &[Symbol]) -> Vec<Vec<Symbol>> {
    if symbols.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &s) in symbols.iter().enumerate() {
        let mut rest = symbols.to_vec();
        rest.remove(i);
        for mut tail in all_perms(&rest) {
            tail.insert(0, s);
            out.push(tail);
        }
    }
    out
}

/// Every permutation minimizing `d(σ, a) + d(σ, b)`, in lexicographic order.
pub fn two_perm_median_exhaustive(a: &Perm, b: &Perm) -> Result<Vec<Perm>, OracleError> {
    if !a.same_alphabet(b) {
        return Err(OracleError::AlphabetMismatch);
    }
    if a.len() > TWO_PERM_MEDIAN_GUARD {
        return Err(OracleError::GuardExceeded(a.len(), TWO_PERM_MEDIAN_GUARD));
    }
    let n = a.len();
    let scored: Vec<(usize, Vec<Symbol>)> = all_perms(&a.alphabet())
        .into_iter()
        .map(|s| {
            let cost = 2 * n - lcs_oracle(&s, a.as_slice()) - lcs_oracle(&s, b.as_slice());
            (cost, s)
        })
        .collect();
    let best = scored.iter().map(|(c, _)| *c).min().unwrap_or(0);
    Ok(scored
        .into_iter()
        .filter(|(c, _)| *c == best)
        .map(|(_, s)| Perm::new(s).expect("permutation of a valid alphabet"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::p;

    fn set(rows: &[&str]) -> VectorSet {
        VectorSet::new(rows.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn ov4_examples() {
        let z = set(&["000"]);
        let o = set(&["111"]);
        assert!(ov4_bruteforce(&z, &z, &z, &z));
        assert!(!ov4_bruteforce(&o, &o, &o, &o));
        assert!(ov4_bruteforce(&o, &o, &set(&["111", "011"]), &set(&["100"])));
    }

    #[test]
    fn eaee_examples() {
        let o = set(&["11"]);
        let empty = VectorSet::with_dim(2, vec![]).unwrap();
        assert!(qov_eaee_bruteforce(&o, &empty, &o, &o));
        assert!(!qov_eaee_bruteforce(&o, &o, &o, &o));
        // a = 10 needs c or e to kill coordinate 1 for both b's.
        let a = set(&["10", "11"]);
        let b = set(&["11", "10"]);
        let c = set(&["01"]);
        let e = set(&["11"]);
        assert!(qov_eaee_bruteforce(&a, &b, &c, &e));
        assert!(!qov_eaee_bruteforce(&a, &b, &set(&["10"]), &e));
    }

    #[test]
    fn maxcut_examples() {
        assert_eq!(maxcut_bruteforce(&Graph::new(2, vec![(1, 2)]).unwrap()), Ok(1));
        assert_eq!(maxcut_bruteforce(&Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()), Ok(2));
        let c5 = Graph::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        assert_eq!(maxcut_bruteforce(&c5), Ok(4));
        let big = Graph::new(25, vec![(1, 2)]).unwrap();
        assert_eq!(maxcut_bruteforce(&big), Err(OracleError::TooLarge(25)));
    }

    #[test]
    fn two_perm_examples() {
        assert_eq!(two_perm_median_exhaustive(&p("312"), &p("312")).unwrap(), vec![p("312")]);
        assert_eq!(two_perm_median_exhaustive(&p("12"), &p("21")).unwrap(), vec![p("12"), p("21")]);
        for m in two_perm_median_exhaustive(&p("21453"), &p("45123")).unwrap() {
            assert_eq!(*m.as_slice().last().unwrap(), 3);
        }
        assert!(matches!(
            two_perm_median_exhaustive(&Perm::identity(8), &Perm::identity(8)),
            Err(OracleError::GuardExceeded(8, 7))
        ));
    }
}
