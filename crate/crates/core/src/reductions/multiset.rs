//! Multiset to set for the continuous median.
//!
//! Permutation `i` of the multiset gets the suffix `Δ_n(τ_i)`, where `τ_i` is
//! the identity on `2m` symbols with `2i-1` and `2i` swapped. The suffixes
//! make all members distinct and add exactly `m` to the optimal cost.

use serde::{Deserialize, Serialize};

use crate::aggregation::UlamInstance;
use crate::perm::{Perm, Symbol};

use super::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetCertificate {
    pub original: Vec<Perm>,
    pub original_tau: u64,
}

/// Identity on `2m` symbols with `2i-1` and `2i` swapped (`i` is 1-based).
pub fn swap_suffix(m: usize, i: usize) -> Perm {
    let mut v: Vec<Symbol> = (1..=2 * m as Symbol).collect();
    v.swap(2 * i - 2, 2 * i - 1);
    Perm::new(v).expect("identity with one swap")
}

/// Returns a set instance over `n + 2m` symbols with threshold `τ + m`.
///
/// Members of the input must be permutations of `1..=n`.
pub fn multiset_to_set(inst: &UlamInstance) -> Result<(UlamInstance, MultisetCertificate), ReductionError> {
    let m = inst.len();
    if m == 0 {
        return Err(ReductionError::Shape("the multiset is empty".into()));
    }
    if let Some(i) = inst.perms().iter().position(|p| !p.is_contiguous()) {
        return Err(ReductionError::Shape(format!("permutation {i} is not over 1..=n")));
    }
    let n = inst.length() as Symbol;
    let perms = inst
        .perms()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let suffix = swap_suffix(m, i + 1).shift(n);
            Perm::concat_disjoint([p, &suffix]).expect("suffix lives above n")
        })
        .collect();
    let out = UlamInstance::new(perms, inst.tau() + m as u64)?;
    let cert = MultisetCertificate { original: inst.perms().to_vec(), original_tau: inst.tau() };
    Ok((out, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::{continuous_median_exhaustive, DEFAULT_CONTINUOUS_GUARD};
    use crate::perm::p;

    #[test]
    fn duplicate_pair() {
        let inst = UlamInstance::new(vec![p("12"), p("12")], 0).unwrap();
        let (out, _) = multiset_to_set(&inst).unwrap();
        assert_eq!(out.perms(), &[p("124356"), p("123465")]);
        assert!(!out.is_multiset());
        assert_eq!(out.tau(), 2);
    }

    #[test]
    fn triple_shifts_cost_by_three() {
        let inst = UlamInstance::new(vec![p("213"); 3], 0).unwrap();
        let (out, _) = multiset_to_set(&inst).unwrap();
        assert_eq!(out.length(), 9);
        let before = continuous_median_exhaustive(inst.perms(), DEFAULT_CONTINUOUS_GUARD).unwrap();
        let after = continuous_median_exhaustive(out.perms(), DEFAULT_CONTINUOUS_GUARD).unwrap();
        assert_eq!(after.cost, before.cost + 3);
    }

    #[test]
    fn rejects_non_contiguous() {
        let inst = UlamInstance::new(vec![Perm::new(vec![2, 5]).unwrap()], 0).unwrap();
        assert!(matches!(multiset_to_set(&inst), Err(ReductionError::Shape(_))));
    }
}
