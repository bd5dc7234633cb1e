//! Bichromatic median to monochromatic median.
//!
//! Every `x_i` and `y_i` is tripled on fresh symbols, so all bichromatic
//! costs become multiples of 3. The within-`X` sums `k_i` come from the
//! generating vectors, balancing makes `k_i + Σ_j d_U(π_i, π_j)` equal to `D`
//! up to 1, and the tails `μ` / `η_i` push every `y` far away:
//!
//! * `x'_i = x̂_i π_i μ` costs `3 c_i + nM + nK + D ± 1`, where `c_i` is
//!   the bichromatic cost of `x_i`;
//! * `y'_i = ŷ_i τ η_i` costs at least `2nK`.
//!
//! The ±1 cannot reorder multiples of 3, so medians are preserved and the
//! decision threshold becomes `3τ + nM + nK + D + 1`.

use serde::{Deserialize, Serialize};

use crate::aggregation::{BichromaticInstance, UlamInstance};
use crate::balancing::{balance_full, BalanceOutput};
use crate::embeddings::embed_ternary;
use crate::metric::structured_f_distance;
use crate::perm::{concat_fresh, FreshSymbolLedger, Perm, Symbol};

use super::ov::{ov4_to_bichromatic_median, Ov4Certificate};
use super::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCertificate {
    pub base: Ov4Certificate,
    /// Length `L` of each untripled `x_i`.
    pub gadget_length: usize,
    /// `k_i = Σ_{j≠i} d_U(x̂_i, x̂_j)` on the tripled permutations.
    pub k: Vec<u64>,
    /// Length `L'` of the balancing permutations.
    pub balance_length: usize,
    /// Balancing target `D`.
    pub balance_target: u64,
    /// Shared distance `M = d_U(π_i, τ)`.
    pub tau_distance: u64,
    /// `K = 10 (3L + L')`.
    pub tail_weight: u64,
    /// Symbol offsets of the blocks `x̂ / ŷ`, balancing, tail.
    pub block_offsets: Vec<Symbol>,
    /// `3 τ + nM + nK + D + 1` with `τ` the bichromatic threshold.
    pub tau: u64,
}

/// The three copies of `p` on fresh symbols.
pub fn triplicate(p: &Perm) -> Perm {
    concat_fresh(&[p.clone(), p.clone(), p.clone()], FreshSymbolLedger::new()).0
}

/// `μ = 0^{2K}` and `η = 0^K 1^K`, `1^K 0^K` through the ternary embedding.
pub fn tail_gadgets(k: usize) -> (Perm, Perm, Perm) {
    let strings = vec![vec![0u8; 2 * k], [vec![0u8; k], vec![1u8; k]].concat(), [vec![1u8; k], vec![0u8; k]].concat()];
    let mut out = embed_ternary(&strings).expect("binary strings of equal length").perms.into_iter();
    (out.next().unwrap(), out.next().unwrap(), out.next().unwrap())
}

/// Within-`X` distance sums of the tripled permutations, from the vectors.
pub fn tripled_sums(base: &Ov4Certificate) -> Result<Vec<u64>, ReductionError> {
    let sets = &base.sets;
    let v: Vec<_> = (0..sets.n()).map(|i| sets.v_set(i)).collect();
    let mut k = vec![0u64; v.len()];
    for i in 0..v.len() {
        for j in 0..i {
            let d = structured_f_distance(&v[i], &v[j], 3)? as u64;
            k[i] += d;
            k[j] += d;
        }
    }
    Ok(k)
}

/// Builds `Z` from a bichromatic instance produced by
/// [`ov4_to_bichromatic_median`] and its certificate.
///
/// Members of `Z`: `x'_1..x'_n`, then `y'_1..y'_n`. The first `n/2` of the
/// `η_i` are `0^K 1^K`, the rest `1^K 0^K`.
pub fn bichromatic_to_monochromatic_median(
    inst: &BichromaticInstance,
    base: Option<&Ov4Certificate>,
) -> Result<(UlamInstance, MonoCertificate), ReductionError> {
    let base = base.ok_or(ReductionError::MissingCertificate)?;
    let n = base.sets.n();
    if !n.is_multiple_of(4) {
        return Err(ReductionError::NotDivisibleBy4(n));
    }
    let (expected, _) = ov4_to_bichromatic_median(&base.sets)?;
    if expected != *inst {
        return Err(ReductionError::CertificateMismatch(
            "the bichromatic instance is not the one the certificate describes".into(),
        ));
    }

    let l = base.gadget_length;
    let k = tripled_sums(base)?;
    let balance: BalanceOutput = balance_full(&k, l)?;
    let l_prime = balance.tau.len();
    let big_k = 10 * (3 * l + l_prime);
    let (mu, eta_low, eta_high) = tail_gadgets(big_k);

    let x_hat: Vec<Perm> = inst.x.iter().map(triplicate).collect();
    let y_hat: Vec<Perm> = inst.y.iter().map(triplicate).collect();
    let offsets: Vec<Symbol> = vec![0, 3 * l as Symbol, (3 * l + l_prime) as Symbol];
    let assemble = |head: &Perm, mid: &Perm, tail: &Perm| {
        let v: Vec<Symbol> = head
            .as_slice()
            .iter()
            .copied()
            .chain(mid.as_slice().iter().map(|s| s + offsets[1]))
            .chain(tail.as_slice().iter().map(|s| s + offsets[2]))
            .collect();
        Perm::new(v).expect("blocks occupy disjoint ranges")
    };

    let mut perms: Vec<Perm> = (0..n).map(|i| assemble(&x_hat[i], &balance.perms[i], &mu)).collect();
    perms.extend((0..n).map(|i| {
        let eta = if i < n / 2 { &eta_low } else { &eta_high };
        assemble(&y_hat[i], &balance.tau, eta)
    }));

    let n64 = n as u64;
    let tau = 3 * inst.tau + n64 * balance.tau_distance + n64 * big_k as u64 + balance.d + 1;
    let cert = MonoCertificate {
        base: base.clone(),
        gadget_length: l,
        k,
        balance_length: l_prime,
        balance_target: balance.d,
        tau_distance: balance.tau_distance,
        tail_weight: big_k as u64,
        block_offsets: offsets,
        tau,
    };
    Ok((UlamInstance::new(perms, tau)?, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::{bichromatic_median, discrete_costs, discrete_median, Objective};
    use crate::gadgets::{BinaryVector, VectorSet};
    use crate::metric::ulam_distance;
    use crate::perm::p;
    use crate::reductions::ov::OvSets;

    fn uniform(n: usize, m: usize, v: &str) -> OvSets {
        let set = |k: usize| VectorSet::new(vec![v.parse::<BinaryVector>().unwrap(); k]).unwrap();
        OvSets::new(set(n), set(n), set(m), set(m)).unwrap()
    }

    #[test]
    fn triplicate_and_tails() {
        assert_eq!(triplicate(&p("21")), p("214365"));
        let (mu, a, b) = tail_gadgets(2);
        assert_eq!(mu.len(), 12);
        assert_eq!(ulam_distance(&mu, &a), Ok(2));
        assert_eq!(ulam_distance(&mu, &b), Ok(2));
        assert_eq!(ulam_distance(&a, &b), Ok(4));
    }

    #[test]
    fn tripled_sums_match_direct_distances() {
        let a = VectorSet::new(["101", "011", "111", "000"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        let c = VectorSet::new(["110", "011"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        let sets = OvSets::new(a.clone(), a, c.clone(), c).unwrap();
        let (inst, cert) = ov4_to_bichromatic_median(&sets).unwrap();
        let k = tripled_sums(&cert).unwrap();
        let tripled: Vec<Perm> = inst.x.iter().map(triplicate).collect();
        for i in 0..4 {
            let direct: usize = (0..4).filter(|&j| j != i).map(|j| ulam_distance(&tripled[i], &tripled[j]).unwrap()).sum();
            assert_eq!(k[i], direct as u64);
        }
    }

    #[test]
    fn end_to_end_yes_and_no() {
        for (v, yes) in [("000", true), ("111", false)] {
            let sets = uniform(4, 2, v);
            let (bi, cert) = ov4_to_bichromatic_median(&sets).unwrap();
            let (z, mono) = bichromatic_to_monochromatic_median(&bi, Some(&cert)).unwrap();
            assert_eq!(z.len(), 8);
            let res = discrete_median(&z).unwrap();
            assert!(res.index.unwrap() < 4);
            assert_eq!(res.within(mono.tau), yes);
            assert_eq!(bichromatic_median(&bi).unwrap().within(bi.tau), yes);
            let costs = discrete_costs(z.perms(), Objective::Median).unwrap();
            let floor = 2 * 4 * mono.tail_weight;
            assert!(costs[4..].iter().all(|&c| c >= floor));
        }
    }

    #[test]
    fn requires_certificate_and_divisibility() {
        let sets = uniform(3, 1, "1");
        let (bi, cert) = ov4_to_bichromatic_median(&sets).unwrap();
        assert!(matches!(bichromatic_to_monochromatic_median(&bi, None), Err(ReductionError::MissingCertificate)));
        assert!(matches!(
            bichromatic_to_monochromatic_median(&bi, Some(&cert)),
            Err(ReductionError::NotDivisibleBy4(3))
        ));
    }
}
