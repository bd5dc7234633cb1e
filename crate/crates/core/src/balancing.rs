//! Distance balancing.
//!
//! Given weights `k_1..k_n`, build permutations `π_1..π_n` and a reference
//! `τ` such that every `k_i + Σ_{j≠i} d_U(π_i, π_j)` lands near a common
//! target `d` while `d_U(π_i, τ)` is the same for every `i`.
//!
//! The coarse stage gets within `n` using short binary strings; the fine
//! stage gets within 1 using strings without repeated symbols; the full
//! stage runs coarse then fine and concatenates the results.

use std::collections::HashSet;

use thiserror::Error;

use crate::embeddings::{embed_norepeat, embed_ternary, EmbeddingError};
use crate::perm::{Perm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("number of weights {0} is not a positive multiple of 4")]
    NotDivisibleBy4(usize),
    #[error("weight {index} is {value}, above the bound {bound}")]
    OutOfRange { index: usize, value: u64, bound: u64 },
    #[error("fine balancing needs at least 3 weights, got {0}")]
    TooFewStrings(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceOutput {
    pub perms: Vec<Perm>,
    pub tau: Perm,
    /// Common target for `k_i + d_i` with `d_i` measured in Ulam distance.
    pub d: u64,
    /// The shared value of `d_U(π_i, τ)`.
    pub tau_distance: u64,
    /// Target before embedding, measured in Hamming distance on the
    /// intermediate strings. Equal to `d` for the coarse stage.
    pub string_target: u64,
}

impl BalanceOutput {
    /// Largest `|k_i + d_i - d|`, recomputed from the permutations.
    pub fn max_deviation(&self, k: &[u64]) -> u64 {
        let n = self.perms.len();
        (0..n)
            .map(|i| {
                let di: u64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| crate::metric::ulam_distance(&self.perms[i], &self.perms[j]).expect("same alphabet") as u64)
                    .sum();
                (k[i] + di).abs_diff(self.d)
            })
            .max()
            .unwrap_or(0)
    }
}

fn check_range(k: &[u64], bound: u64) -> Result<(), BalanceError> {
    match k.iter().position(|&v| v > bound) {
        Some(index) => Err(BalanceError::OutOfRange { index, value: k[index], bound }),
        None => Ok(()),
    }
}

/// Iteration cap for the coarse loop. Each round shrinks the spread by
/// `n/4` on average, so `4⌈N/n⌉` rounds suffice; the slack catches bugs
/// without looping forever.
fn coarse_cap(n: usize, big_n: u64) -> usize {
    4 * (big_n as usize).div_ceil(n) + 16
}

/// Binary strings for the coarse stage plus their pairwise-distance sums.
fn coarse_strings(k: &[u64], big_n: u64) -> Result<(Vec<Vec<u8>>, Vec<u64>), BalanceError> {
    let n = k.len();
    let quarter = n / 4;
    let mut strings: Vec<Vec<u8>> = vec![Vec::new(); n];
    let mut sums = vec![0u64; n];
    let level = |sums: &[u64], i: usize| k[i] + sums[i];

    let cap = coarse_cap(n, big_n);
    for _ in 0..=cap {
        let (lo, hi) = (0..n)
            .map(|i| level(&sums, i))
            .fold((u64::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi - lo <= n as u64 {
            return Ok((strings, sums));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (level(&sums, i), i));

        let mut pattern = vec![[0u8, 0u8]; n];
        for (rank, &i) in order.iter().enumerate() {
            pattern[i] = if rank < quarter {
                [0, 1]
            } else if rank < 2 * quarter {
                [1, 0]
            } else {
                [0, 0]
            };
        }
        let count = |p: [u8; 2]| pattern.iter().filter(|&&q| q == p).count() as u64;
        let (c01, c10, c00) = (count([0, 1]), count([1, 0]), count([0, 0]));
        for i in 0..n {
            let gain = match pattern[i] {
                [0, 1] => 2 * c10 + c00,
                [1, 0] => 2 * c01 + c00,
                _ => c01 + c10,
            };
            let expected = if pattern[i] == [0, 0] { n as u64 / 2 } else { n as u64 };
            if gain != expected {
                return Err(BalanceError::Internal(format!("coarse round gave index {i} gain {gain}, expected {expected}")));
            }
            sums[i] += gain;
            strings[i].extend_from_slice(&pattern[i]);
        }
    }
    Err(BalanceError::Internal(format!("coarse balancing did not converge within {cap} rounds")))
}

/// Within-`n` balancing for `n` divisible by 4 and `k_i ≤ N`.
///
/// Strings over `{0,1}` are grown two characters per round (the lightest
/// quarter gets `01`, the next quarter `10`, the heavier half `00`) until the
/// spread of `k_i + d_i` is at most `n`, then embedded with
/// [`embed_ternary`]. `τ` embeds the all-2 string and `d` is the floor of the
/// average level.
pub fn balance_coarse(k: &[u64], big_n: u64) -> Result<BalanceOutput, BalanceError> {
    let n = k.len();
    if n == 0 || !n.is_multiple_of(4) {
        return Err(BalanceError::NotDivisibleBy4(n));
    }
    check_range(k, big_n)?;
    let (strings, sums) = coarse_strings(k, big_n)?;
    let len = strings[0].len();

    let mut all = strings;
    all.push(vec![2; len]);
    let mut perms = embed_ternary(&all)?.perms;
    let tau = perms.pop().expect("reference string was pushed");

    let total: u64 = k.iter().zip(&sums).map(|(a, b)| a + b).sum();
    let d = total / n as u64;
    Ok(BalanceOutput { perms, tau, d, tau_distance: len as u64, string_target: d })
}

/// Strings without repeated symbols for the fine stage. Returns the strings,
/// the alphabet size used and the final minimum level.
fn fine_strings(k: &[u64], big_n: u64) -> (Vec<Vec<Symbol>>, Symbol, u64) {
    let n = k.len();
    let steps = 3 * big_n as usize;
    let sigma = (6 * big_n + n as u64 + 1) as Symbol;
    let mut strings: Vec<Vec<Symbol>> = vec![Vec::with_capacity(steps); n];
    let mut used: Vec<HashSet<Symbol>> = vec![HashSet::new(); n];
    let mut level: Vec<u64> = k.to_vec();

    for _ in 0..steps {
        let min = *level.iter().min().expect("n >= 3");
        let above: Vec<usize> = (0..n).filter(|&i| level[i] > min).collect();

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        if above.len() == 1 {
            let i = above[0];
            let j = (0..n).find(|&j| j != i).expect("n >= 3");
            pairs.push((i.min(j), i.max(j)));
        } else {
            let mut members = above.clone();
            if members.len() % 2 == 1 {
                // Sitting out a maximizer can cycle forever, e.g. on
                // (0,0,0,0,0,2); sitting out the lowest member converges.
                let low = members.iter().map(|&i| level[i]).min().expect("non-empty");
                let drop = members.iter().position(|&i| level[i] == low).expect("minimizer exists");
                members.remove(drop);
            }
            pairs.extend(members.chunks(2).map(|c| (c[0], c[1])));
        }

        let mut chosen: Vec<Option<Symbol>> = vec![None; n];
        let mut taken: HashSet<Symbol> = HashSet::new();
        let pick = |avoid: &[usize], taken: &mut HashSet<Symbol>| -> Symbol {
            let c = (1..=sigma)
                .find(|c| !taken.contains(c) && avoid.iter().all(|&i| !used[i].contains(c)))
                .expect("alphabet of size 6N+n+1 always leaves a free character");
            taken.insert(c);
            c
        };
        for &(a, b) in &pairs {
            let c = pick(&[a, b], &mut taken);
            chosen[a] = Some(c);
            chosen[b] = Some(c);
        }
        for (i, slot) in chosen.iter_mut().enumerate() {
            if slot.is_none() {
                *slot = Some(pick(&[i], &mut taken));
            }
        }
        let chosen: Vec<Symbol> = chosen.into_iter().map(|c| c.expect("assigned")).collect();
        for i in 0..n {
            let same = chosen.iter().filter(|&&c| c == chosen[i]).count() as u64;
            level[i] += n as u64 - same;
            strings[i].push(chosen[i]);
            used[i].insert(chosen[i]);
        }
    }
    let min = *level.iter().min().expect("n >= 3");
    (strings, sigma, min)
}

/// Within-1 balancing for `n ≥ 3` and `k_i ≤ N`.
///
/// Runs `3N` rounds. Each round pairs up the indices above the current
/// minimum level (consecutive in index order; with an odd count the
/// smallest-index member of lowest level sits out; a lone index is paired
/// with the smallest other index). Paired indices receive a shared character and the
/// rest distinct ones, always the smallest character still allowed. The
/// strings are then embedded with [`embed_norepeat`] together with a
/// reference string `b` over `3N` unused symbols.
pub fn balance_fine(k: &[u64], big_n: u64) -> Result<BalanceOutput, BalanceError> {
    let n = k.len();
    if n < 3 {
        return Err(BalanceError::TooFewStrings(n));
    }
    check_range(k, big_n)?;
    let (mut strings, sigma, min_level) = fine_strings(k, big_n);
    let len = strings[0].len();
    strings.push((sigma + 1..=sigma + len as Symbol).collect());
    let alphabet: Vec<Symbol> = (1..=sigma + len as Symbol).collect();

    let embedded = embed_norepeat(&strings, &alphabet)?;
    let mut perms = embedded.perms;
    let tau = perms.pop().expect("reference string was pushed");
    let offset = embedded.offset as u64;
    Ok(BalanceOutput {
        perms,
        tau,
        d: min_level + (n as u64 - 1) * offset,
        tau_distance: len as u64 + offset,
        string_target: min_level,
    })
}

/// Within-1 balancing for `n` divisible by 4 and `k_i ≤ 3nL`.
///
/// Coarse balancing with `N = max k`, then fine balancing on the residual
/// spread; `π_i` and `τ` are the coarse parts followed by the fine parts on
/// shifted symbols.
pub fn balance_full(k: &[u64], l: usize) -> Result<BalanceOutput, BalanceError> {
    let n = k.len();
    if n == 0 || !n.is_multiple_of(4) {
        return Err(BalanceError::NotDivisibleBy4(n));
    }
    check_range(k, 3 * (n * l) as u64)?;
    let big_n = k.iter().copied().max().unwrap_or(0);
    let coarse = balance_coarse(k, big_n)?;

    let k1: Vec<u64> = (0..n)
        .map(|i| {
            let di: u64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| crate::metric::ulam_distance(&coarse.perms[i], &coarse.perms[j]).expect("same alphabet") as u64)
                .sum();
            k[i] + di
        })
        .collect();
    let base = *k1.iter().min().expect("n >= 4");
    let residual: Vec<u64> = k1.iter().map(|v| v - base).collect();
    let spread = residual.iter().copied().max().unwrap_or(0);
    let fine = balance_fine(&residual, spread)?;

    let shift = coarse.tau.len() as Symbol;
    let join = |a: &Perm, b: &Perm| {
        let mut v = a.as_slice().to_vec();
        v.extend(b.as_slice().iter().map(|s| s + shift));
        Perm::from_vec_unchecked(v)
    };
    let perms = coarse.perms.iter().zip(&fine.perms).map(|(a, b)| join(a, b)).collect();
    let d = fine.d + base;
    Ok(BalanceOutput {
        perms,
        tau: join(&coarse.tau, &fine.tau),
        d,
        tau_distance: coarse.tau_distance + fine.tau_distance,
        string_target: d,
    })
}
