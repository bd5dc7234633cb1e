//! Exact embeddings of Hamming distance into Ulam distance.
//!
//! * [`embed_ternary`]: strings over `{0,1,2}`; each position becomes one of
//!   three mutually distance-1 permutations on its own symbol triple.
//! * [`embed_interleave`]: permutations of `[L]`, interleaved with the fixed
//!   skeleton `L+1, ..., 2L`.
//! * [`embed_norepeat`]: strings without repeated symbols. Each string is
//!   completed to a permutation with [`max_hamming_completion`], which makes
//!   the completions pairwise disjoint position by position, and the result
//!   goes through [`embed_interleave`]. Distances come out shifted by a
//!   common `K`.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::perm::{Perm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("string {0} contains a character outside the alphabet")]
    BadAlphabet(usize),
    #[error("string {0} has a different length from string 0")]
    LengthMismatch(usize),
    #[error("input {0} is not a permutation of 1..=L")]
    NotAPermutation(usize),
    #[error("string {0} repeats a symbol")]
    RepeatedSymbol(usize),
    #[error("alphabet {0} has a different size from alphabet 0")]
    UnequalSizes(usize),
    #[error("fresh symbols must start above every input symbol")]
    FreshOverlap,
}

/// Permutations whose pairwise Ulam distances equal the input Hamming
/// distances plus `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingOutput {
    pub perms: Vec<Perm>,
    pub offset: usize,
}

const TERNARY: [[Symbol; 3]; 3] = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];

fn check_lengths<T>(strings: &[Vec<T>]) -> Result<usize, EmbeddingError> {
    let len = strings.first().map_or(0, Vec::len);
    match strings.iter().position(|s| s.len() != len) {
        Some(i) => Err(EmbeddingError::LengthMismatch(i)),
        None => Ok(len),
    }
}

/// Embeds strings over `{0,1,2}` into `S_{3L}` with `d_U = d_H`.
///
/// Position `j` (0-based) is written on symbols `3j+1..=3j+3` as `123`, `231`
/// or `312`.
pub fn embed_ternary(strings: &[Vec<u8>]) -> Result<EmbeddingOutput, EmbeddingError> {
    check_lengths(strings)?;
    let perms = strings
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut out = Vec::with_capacity(3 * s.len());
            for (j, &c) in s.iter().enumerate() {
                let block = TERNARY.get(c as usize).ok_or(EmbeddingError::BadAlphabet(i))?;
                out.extend(block.iter().map(|x| x + 3 * j as Symbol));
            }
            Ok(Perm::from_vec_unchecked(out))
        })
        .collect::<Result<_, _>>()?;
    Ok(EmbeddingOutput { perms, offset: 0 })
}

/// `π[1], L+1, π[2], L+2, ..., π[L], 2L`.
pub fn interleave(p: &Perm) -> Perm {
    let l = p.len() as Symbol;
    let out = p
        .as_slice()
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| [s, l + 1 + i as Symbol])
        .collect();
    Perm::from_vec_unchecked(out)
}

/// Embeds permutations of `[L]` into `S_{2L}` with `d_U = d_H`.
pub fn embed_interleave(perms: &[Perm]) -> Result<EmbeddingOutput, EmbeddingError> {
    let len = perms.first().map_or(0, Perm::len);
    for (i, p) in perms.iter().enumerate() {
        if p.len() != len || !p.is_contiguous() {
            return Err(EmbeddingError::NotAPermutation(i));
        }
    }
    Ok(EmbeddingOutput { perms: perms.iter().map(interleave).collect(), offset: 0 })
}

/// Output of [`max_hamming_completion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    /// Shared fresh symbols, increasing.
    pub phi: Vec<Symbol>,
    /// `strings[i]` is a permutation of `Σ_i ⊔ Φ`; distinct strings differ
    /// at every position.
    pub strings: Vec<Vec<Symbol>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Sym {
    Base(Symbol),
    Fresh(u32),
    /// Filler for padding sets; never reaches an output.
    Sentinel(u32),
}

#[derive(Default)]
struct Supply {
    fresh: u32,
    sentinel: u32,
}

impl Supply {
    fn fresh(&mut self, k: usize) -> Vec<Sym> {
        let out = (0..k as u32).map(|i| Sym::Fresh(self.fresh + i)).collect();
        self.fresh += k as u32;
        out
    }

    fn sentinels(&mut self, k: usize) -> BTreeSet<Sym> {
        let out = (0..k as u32).map(|i| Sym::Sentinel(self.sentinel + i)).collect();
        self.sentinel += k as u32;
        out
    }
}

/// Recursive core. Requires `n >= 1` sets of a common size `s >= n`.
fn complete(supply: &mut Supply, mut sets: Vec<BTreeSet<Sym>>) -> (Vec<Sym>, Vec<Vec<Sym>>) {
    let n = sets.len();
    let mut s = sets[0].len();
    debug_assert!(s >= n);

    if n == 1 {
        return (Vec::new(), vec![sets.pop().unwrap().into_iter().collect()]);
    }

    // Peel off pairwise-distinct symbols until s == n. Each round's picks
    // end up in front of the previous round's.
    let mut rounds: Vec<Vec<Sym>> = Vec::new();
    while s > n {
        let mut picked: Vec<Sym> = Vec::with_capacity(n);
        for set in &mut sets {
            let sym = *set
                .iter()
                .find(|x| !picked.contains(x))
                .expect("s > n leaves a free symbol");
            set.remove(&sym);
            picked.push(sym);
        }
        rounds.push(picked);
        s -= 1;
    }

    let k = n.div_ceil(2);
    let second_real = n - k;
    let mut second: Vec<BTreeSet<Sym>> = sets.split_off(k);
    let first = sets;
    // An odd split gets one padding set so both halves have the same shape
    // and hence equally many fresh symbols.
    for _ in second_real..k {
        second.push(supply.sentinels(s));
    }
    let (phi1, mut left) = complete(supply, first);
    let (phi2, right) = complete(supply, second);
    assert_eq!(phi1.len(), phi2.len(), "halves of equal shape use equally many fresh symbols");

    let identify: HashMap<Sym, Sym> = phi2.iter().copied().zip(phi1.iter().copied()).collect();
    let right: Vec<Vec<Sym>> = right
        .into_iter()
        .take(second_real)
        .map(|b| b.into_iter().map(|x| identify.get(&x).copied().unwrap_or(x)).collect())
        .collect();

    let psi = supply.fresh(s + phi1.len());
    let rotation = |r: usize| -> Vec<Sym> {
        let mut c = psi.clone();
        c.rotate_left(r);
        c
    };

    let mut out = Vec::with_capacity(n);
    for (i, b) in left.iter_mut().enumerate() {
        b.extend(rotation(i));
        out.push(std::mem::take(b));
    }
    for (i, b) in right.into_iter().enumerate() {
        let mut c = rotation(i);
        c.extend(b);
        out.push(c);
    }
    for (i, b) in out.iter_mut().enumerate() {
        for round in rounds.iter().rev() {
            b.push(round[i]);
        }
    }

    let mut phi = phi1;
    phi.extend(psi);
    (phi, out)
}

/// Upper bound on `|Φ|` produced by [`max_hamming_completion`] for `n` sets of
/// size `s`: `φ(n) + max(0, n - s)` with `φ(1) = 0` and
/// `φ(n) = 2 φ(⌈n/2⌉) + n`, which stays below `2 n ⌈log₂ n⌉`.
pub fn completion_fresh_bound(n: usize, s: usize) -> usize {
    fn phi(n: usize) -> usize {
        if n <= 1 {
            0
        } else {
            2 * phi(n.div_ceil(2)) + n
        }
    }
    let pad = if n > 1 { n.saturating_sub(s) } else { 0 };
    phi(n) + pad
}

/// Completes equal-size alphabets `Σ_1..Σ_n` to strings over `Σ_i ⊔ Φ` that
/// pairwise disagree at every position.
///
/// Fresh symbols are numbered from `fresh_start`, which must exceed every
/// input symbol. Greedy picks take the smallest available symbol, rotations
/// are left rotations by `i - 1`, and the fresh alphabets of two halves are
/// identified in index order.
pub fn max_hamming_completion(sets: &[BTreeSet<Symbol>], fresh_start: Symbol) -> Result<Completion, EmbeddingError> {
    let n = sets.len();
    if n == 0 {
        return Ok(Completion { phi: Vec::new(), strings: Vec::new() });
    }
    let s = sets[0].len();
    if let Some(i) = sets.iter().position(|x| x.len() != s) {
        return Err(EmbeddingError::UnequalSizes(i));
    }
    if sets.iter().flatten().any(|&x| x >= fresh_start) {
        return Err(EmbeddingError::FreshOverlap);
    }
    if n == 1 {
        return Ok(Completion { phi: Vec::new(), strings: vec![sets[0].iter().copied().collect()] });
    }

    let mut supply = Supply::default();
    let padding = supply.fresh(n.saturating_sub(s));
    let work: Vec<BTreeSet<Sym>> = sets
        .iter()
        .map(|set| set.iter().map(|&x| Sym::Base(x)).chain(padding.iter().copied()).collect())
        .collect();
    let (phi_inner, strings) = complete(&mut supply, work);

    let mut phi_syms = padding;
    phi_syms.extend(phi_inner);
    let rename: HashMap<Sym, Symbol> = phi_syms
        .iter()
        .enumerate()
        .map(|(r, &x)| (x, fresh_start + r as Symbol))
        .collect();
    let strings = strings
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|x| match x {
                    Sym::Base(v) => v,
                    Sym::Fresh(_) => rename[&x],
                    Sym::Sentinel(_) => unreachable!("padding sets are dropped"),
                })
                .collect()
        })
        .collect();
    let phi = (0..phi_syms.len()).map(|r| fresh_start + r as Symbol).collect();
    Ok(Completion { phi, strings })
}

/// Embeds strings without repeated symbols into the Ulam metric with
/// `d_U(π_i, π_j) = d_H(a_i, a_j) + K` for all `i != j`.
///
/// `alphabet` is the common alphabet `Σ`; every string must draw from it.
/// The output permutations have length `2(|Σ| + |Φ|)` and `K = |Σ| - L + |Φ|`.
pub fn embed_norepeat(strings: &[Vec<Symbol>], alphabet: &[Symbol]) -> Result<EmbeddingOutput, EmbeddingError> {
    check_lengths(strings)?;
    let sigma: BTreeSet<Symbol> = alphabet.iter().copied().collect();
    let mut unused = Vec::with_capacity(strings.len());
    for (i, a) in strings.iter().enumerate() {
        let seen: BTreeSet<Symbol> = a.iter().copied().collect();
        if seen.len() != a.len() {
            return Err(EmbeddingError::RepeatedSymbol(i));
        }
        if !seen.is_subset(&sigma) {
            return Err(EmbeddingError::BadAlphabet(i));
        }
        unused.push(sigma.difference(&seen).copied().collect::<BTreeSet<_>>());
    }
    let fresh_start = sigma.last().map_or(1, |m| m + 1);
    let completion = max_hamming_completion(&unused, fresh_start)?;
    let k = unused.first().map_or(0, BTreeSet::len) + completion.phi.len();

    // Σ ⊔ Φ relabelled onto 1..=|Σ|+|Φ|, preserving order.
    let rank: HashMap<Symbol, Symbol> = sigma
        .iter()
        .chain(completion.phi.iter())
        .enumerate()
        .map(|(r, &x)| (x, r as Symbol + 1))
        .collect();
    let perms = strings
        .iter()
        .zip(&completion.strings)
        .map(|(a, b)| {
            let full: Vec<Symbol> = a.iter().chain(b).map(|x| rank[x]).collect();
            interleave(&Perm::from_vec_unchecked(full))
        })
        .collect();
    Ok(EmbeddingOutput { perms, offset: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{hamming_distance, ulam_distance, ulam_distance_oracle};
    use crate::perm::p;

    #[test]
    fn ternary_examples() {
        let out = embed_ternary(&[vec![0], vec![1]]).unwrap();
        assert_eq!(out.perms, vec![p("123"), p("231")]);
        assert_eq!(ulam_distance(&out.perms[0], &out.perms[1]), Ok(1));

        let out = embed_ternary(&[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(out.perms, vec![p("123564"), p("231645")]);
        assert_eq!(ulam_distance_oracle(&out.perms[0], &out.perms[1]), Ok(2));

        let same = embed_ternary(&[vec![2, 0, 1], vec![2, 0, 1]]).unwrap();
        assert_eq!(same.perms[0], same.perms[1]);

        assert_eq!(embed_ternary(&[vec![0], vec![3]]), Err(EmbeddingError::BadAlphabet(1)));
        assert_eq!(embed_ternary(&[vec![0], vec![1, 1]]), Err(EmbeddingError::LengthMismatch(1)));
    }

    #[test]
    fn interleave_examples() {
        let out = embed_interleave(&[p("12"), p("21")]).unwrap();
        assert_eq!(out.perms, vec![p("1324"), p("2314")]);
        assert_eq!(ulam_distance_oracle(&out.perms[0], &out.perms[1]), Ok(2));
        assert_eq!(
            embed_interleave(&[p("12"), Perm::new(vec![1, 3]).unwrap()]),
            Err(EmbeddingError::NotAPermutation(1))
        );
    }

    #[test]
    fn completion_single_set() {
        let c = max_hamming_completion(&[BTreeSet::from([5, 2])], 10).unwrap();
        assert!(c.phi.is_empty());
        assert_eq!(c.strings, vec![vec![2, 5]]);
    }

    #[test]
    fn completion_two_equal_singletons() {
        let sets = vec![BTreeSet::from([7]), BTreeSet::from([7])];
        let c = max_hamming_completion(&sets, 8).unwrap();
        let len = 1 + c.phi.len();
        assert_eq!(c.strings[0].len(), len);
        assert_eq!(hamming_distance(&c.strings[0], &c.strings[1]), Ok(len));
    }

    #[test]
    fn completion_rejects_bad_input() {
        let sets = vec![BTreeSet::from([1, 2]), BTreeSet::from([3])];
        assert_eq!(max_hamming_completion(&sets, 9), Err(EmbeddingError::UnequalSizes(1)));
        let sets = vec![BTreeSet::from([1]), BTreeSet::from([3])];
        assert_eq!(max_hamming_completion(&sets, 3), Err(EmbeddingError::FreshOverlap));
    }

    #[test]
    fn completion_four_disjoint() {
        let sets: Vec<BTreeSet<Symbol>> = (0..4).map(|i| (4 * i + 1..=4 * i + 4).collect()).collect();
        let c = max_hamming_completion(&sets, 17).unwrap();
        let len = 4 + c.phi.len();
        for (i, set) in sets.iter().enumerate() {
            let mut alpha: Vec<Symbol> = set.iter().chain(&c.phi).copied().collect();
            alpha.sort_unstable();
            let mut got = c.strings[i].clone();
            got.sort_unstable();
            assert_eq!(got, alpha);
            for j in 0..i {
                assert_eq!(hamming_distance(&c.strings[i], &c.strings[j]), Ok(len));
            }
        }
        assert_eq!(c.phi.len(), completion_fresh_bound(4, 4));
    }

    #[test]
    fn norepeat_examples() {
        let out = embed_norepeat(&[vec![1, 2], vec![2, 1]], &[1, 2, 3]).unwrap();
        let d = ulam_distance_oracle(&out.perms[0], &out.perms[1]).unwrap();
        assert_eq!(d - out.offset, 2);

        let out = embed_norepeat(&[vec![3, 1], vec![3, 1], vec![3, 1]], &[1, 2, 3, 4]).unwrap();
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(ulam_distance(&out.perms[i], &out.perms[j]), Ok(out.offset));
            }
        }
        assert_eq!(embed_norepeat(&[vec![1, 1]], &[1, 2]), Err(EmbeddingError::RepeatedSymbol(0)));
        assert_eq!(embed_norepeat(&[vec![1, 5]], &[1, 2]), Err(EmbeddingError::BadAlphabet(0)));
    }

    #[test]
    fn fresh_bound_is_below_documented_constant() {
        for n in 1..=64usize {
            let log = usize::BITS - (n - 1).leading_zeros();
            let bound = 2 * n * log as usize + n;
            for s in 0..=n + 2 {
                assert!(completion_fresh_bound(n, s) <= bound, "n={n} s={s}");
            }
        }
    }
}
