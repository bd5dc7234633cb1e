//! Exact distances: Ulam via longest increasing subsequence, a quadratic LCS
//! reference, Hamming, and the closed form for concatenated OR-gadget outputs.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::gadgets::VectorSet;
use crate::perm::{Perm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("permutations are over different alphabets")]
    AlphabetMismatch,
    #[error("strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("vector sets have incompatible shapes")]
    ShapeMismatch,
}

/// Length of a longest common subsequence by the textbook dynamic program.
///
/// Quadratic time, linear space. Repeated symbols are fine; this is the
/// reference the fast path is checked against.
pub fn lcs_oracle<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    if x.is_empty() || y.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; y.len() + 1];
    let mut cur = vec![0usize; y.len() + 1];
    for a in x {
        for (j, b) in y.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// Length of a longest strictly increasing subsequence (patience sorting).
pub fn lis_length(seq: &[u32]) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &x in seq {
        let at = tails.partition_point(|&t| t < x);
        if at == tails.len() {
            tails.push(x);
        } else {
            tails[at] = x;
        }
    }
    tails.len()
}

/// Symbol-to-position lookup for one permutation, reused across many
/// distance queries against it.
#[derive(Debug, Clone)]
pub struct PositionIndex {
    len: usize,
    table: Table,
}

#[derive(Debug, Clone)]
enum Table {
    Dense(Vec<u32>),
    Sparse(HashMap<Symbol, u32>),
}

const ABSENT: u32 = u32::MAX;

impl PositionIndex {
    pub fn new(p: &Perm) -> Self {
        let max = p.max_symbol() as usize;
        let table = if max <= 8 * p.len() + 64 {
            let mut dense = vec![ABSENT; max + 1];
            for (i, &s) in p.as_slice().iter().enumerate() {
                dense[s as usize] = i as u32;
            }
            Table::Dense(dense)
        } else {
            Table::Sparse(p.as_slice().iter().enumerate().map(|(i, &s)| (s, i as u32)).collect())
        };
        Self { len: p.len(), table }
    }

    pub fn position(&self, s: Symbol) -> Option<u32> {
        match &self.table {
            Table::Dense(d) => d.get(s as usize).copied().filter(|&i| i != ABSENT),
            Table::Sparse(m) => m.get(&s).copied(),
        }
    }

    /// Ulam distance from the indexed permutation to `other`.
    pub fn ulam_to(&self, other: &Perm) -> Result<usize, MetricError> {
        if other.len() != self.len {
            return Err(MetricError::AlphabetMismatch);
        }
        // `other` has no repeats, so equal length plus full membership means
        // equal alphabets.
        let mapped = other
            .as_slice()
            .iter()
            .map(|&s| self.position(s).ok_or(MetricError::AlphabetMismatch))
            .collect::<Result<Vec<u32>, _>>()?;
        Ok(self.len - lis_length(&mapped))
    }
}

/// Minimum number of symbol relocations turning `a` into `b`.
///
/// Computed as `|a| - LIS(pos_a(b))` in `O(L log L)`.
pub fn ulam_distance(a: &Perm, b: &Perm) -> Result<usize, MetricError> {
    PositionIndex::new(a).ulam_to(b)
}

/// Ulam distance through the LCS dynamic program, for cross-checking.
pub fn ulam_distance_oracle(a: &Perm, b: &Perm) -> Result<usize, MetricError> {
    if !a.same_alphabet(b) {
        return Err(MetricError::AlphabetMismatch);
    }
    Ok(a.len() - lcs_oracle(a.as_slice(), b.as_slice()))
}

pub fn hamming_distance<T: PartialEq>(x: &[T], y: &[T]) -> Result<usize, MetricError> {
    if x.len() != y.len() {
        return Err(MetricError::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// Ulam distance between `copies`-fold fresh concatenations of the OR gadget
/// `f` applied to `t` and `t2`, without building either permutation.
///
/// Vector `i` of each set contributes one normalized gadget per column, and
/// two same-side gadgets differ in exactly the coordinates where their
/// vectors differ, so the distance is `copies * m * sum_i d_H(t_i, t2_i)`.
pub fn structured_f_distance(t: &VectorSet, t2: &VectorSet, copies: usize) -> Result<usize, MetricError> {
    if t.len() != t2.len() || t.dim() != t2.dim() {
        return Err(MetricError::ShapeMismatch);
    }
    let m = t.len();
    let total: usize = t
        .iter()
        .zip(t2.iter())
        .map(|(a, b)| hamming_distance(a.bits(), b.bits()))
        .sum::<Result<usize, _>>()?;
    Ok(copies * m * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// Patience-sorting LIS.
    Fast,
    /// Quadratic LCS dynamic program.
    Oracle,
}

/// Dense symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<usize>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }
}

/// All pairwise Ulam distances. Rows are computed in parallel; the result does
/// not depend on scheduling.
pub fn pairwise_matrix(perms: &[Perm], mode: DistanceMode) -> Result<DistanceMatrix, MetricError> {
    let n = perms.len();
    let rows: Vec<Vec<usize>> = perms
        .par_iter()
        .enumerate()
        .map(|(i, pi)| {
            let index = (mode == DistanceMode::Fast).then(|| PositionIndex::new(pi));
            let mut row = vec![0usize; n];
            for j in (i + 1)..n {
                row[j] = match &index {
                    Some(idx) => idx.ulam_to(&perms[j])?,
                    None => ulam_distance_oracle(pi, &perms[j])?,
                };
            }
            Ok(row)
        })
        .collect::<Result<_, MetricError>>()?;
    let mut cells = vec![0usize; n * n];
    for (i, row) in rows.iter().enumerate() {
        for j in (i + 1)..n {
            cells[i * n + j] = row[j];
            cells[j * n + i] = row[j];
        }
    }
    Ok(DistanceMatrix { n, cells })
}

/// Distances from every `x` to every `y`; entry `[i][j]` is `d_U(x_i, y_j)`.
pub fn cross_matrix(xs: &[Perm], ys: &[Perm]) -> Result<Vec<Vec<usize>>, MetricError> {
    xs.par_iter()
        .map(|x| {
            let idx = PositionIndex::new(x);
            ys.iter().map(|y| idx.ulam_to(y)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{or_gadget_f, BinaryVector};
    use crate::perm::{concat_fresh, p, FreshSymbolLedger};
    use proptest::prelude::*;

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_oracle(p("123").as_slice(), p("132").as_slice()), 2);
        assert_eq!(lcs_oracle(p("4312").as_slice(), p("2134").as_slice()), 1);
        assert_eq!(lcs_oracle(b"abcab", b"abcab"), 5);
        assert_eq!(lcs_oracle(b"aab", b"aba"), 2);
        assert_eq!(lcs_oracle::<u8>(b"", b"abc"), 0);
    }

    #[test]
    fn ulam_examples() {
        assert_eq!(ulam_distance(&p("123"), &p("231")), Ok(1));
        assert_eq!(ulam_distance(&p("2134"), &p("1234")), Ok(1));
        assert_eq!(ulam_distance(&p("4312"), &p("4312")), Ok(0));
        assert_eq!(ulam_distance(&p("123"), &p("124")), Err(MetricError::AlphabetMismatch));
        assert_eq!(ulam_distance(&p("12"), &p("123")), Err(MetricError::AlphabetMismatch));
        assert_eq!(ulam_distance(&Perm::empty(), &Perm::empty()), Ok(0));
    }

    #[test]
    fn sparse_alphabets_work() {
        let a = Perm::new(vec![1_000_000, 5, 99_999]).unwrap();
        let b = Perm::new(vec![5, 99_999, 1_000_000]).unwrap();
        assert_eq!(ulam_distance(&a, &b), Ok(1));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(b"00", b"01"), Ok(1));
        assert_eq!(hamming_distance(b"10", b"00"), Ok(1));
        assert_eq!(hamming_distance(b"012", b"210"), Ok(2));
        assert_eq!(hamming_distance(b"012", b"012"), Ok(0));
        assert_eq!(hamming_distance(b"01", b"0"), Err(MetricError::LengthMismatch(2, 1)));
    }

    fn vs(rows: &[&str]) -> VectorSet {
        VectorSet::new(rows.iter().map(|r| r.parse::<BinaryVector>().unwrap()).collect()).unwrap()
    }

    fn fresh_copies(x: &Perm, copies: usize) -> Perm {
        concat_fresh(&vec![x.clone(); copies], FreshSymbolLedger::new()).0
    }

    #[test]
    fn structured_distance_examples() {
        let t = vs(&["01", "10"]);
        assert_eq!(structured_f_distance(&t, &t, 3), Ok(0));

        // f({0}) = 4123, f({1}) = 4312.
        let (a, b) = (vs(&["0"]), vs(&["1"]));
        assert_eq!(structured_f_distance(&a, &b, 1), Ok(1));
        assert_eq!(ulam_distance(&or_gadget_f(&a), &or_gadget_f(&b)), Ok(1));

        // m = 2, copies = 3, total Hamming 3 → 18.
        let (t, t2) = (vs(&["011", "100"]), vs(&["001", "111"]));
        assert_eq!(structured_f_distance(&t, &t2, 3), Ok(18));
        let (x, x2) = (fresh_copies(&or_gadget_f(&t), 3), fresh_copies(&or_gadget_f(&t2), 3));
        assert_eq!(ulam_distance_oracle(&x, &x2), Ok(18));

        assert_eq!(structured_f_distance(&vs(&["0"]), &vs(&["0", "1"]), 1), Err(MetricError::ShapeMismatch));
        assert_eq!(structured_f_distance(&vs(&["0"]), &vs(&["01"]), 1), Err(MetricError::ShapeMismatch));
    }

    #[test]
    fn matrix_examples() {
        let single = pairwise_matrix(&[p("312")], DistanceMode::Fast).unwrap();
        assert_eq!(single.size(), 1);
        assert_eq!(single.get(0, 0), 0);

        let cyc = [p("123"), p("231"), p("312")];
        let m = pairwise_matrix(&cyc, DistanceMode::Fast).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), usize::from(i != j));
            }
        }
        assert_eq!(m, pairwise_matrix(&cyc, DistanceMode::Oracle).unwrap());
        assert_eq!(
            pairwise_matrix(&[p("12"), p("13")], DistanceMode::Fast),
            Err(MetricError::AlphabetMismatch)
        );
    }

    fn perm_of_len(max: usize) -> impl Strategy<Value = (Perm, Perm)> {
        (0..=max).prop_flat_map(|n| {
            let base: Vec<Symbol> = (1..=n as Symbol).collect();
            (Just(base.clone()).prop_shuffle(), Just(base).prop_shuffle())
                .prop_map(|(a, b)| (Perm::new(a).unwrap(), Perm::new(b).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn fast_matches_lcs((a, b) in perm_of_len(64)) {
            prop_assert_eq!(ulam_distance(&a, &b).unwrap(), a.len() - lcs_oracle(a.as_slice(), b.as_slice()));
        }

        #[test]
        fn symmetric_and_triangle((a, b) in perm_of_len(20), seed in any::<u64>()) {
            let mut c = a.as_slice().to_vec();
            // Cheap deterministic shuffle for the third point.
            let n = c.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                c.swap(i, (s >> 33) as usize % (i + 1));
            }
            let c = Perm::new(c).unwrap();
            let ab = ulam_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, ulam_distance(&b, &a).unwrap());
            prop_assert_eq!(ulam_distance(&a, &a).unwrap(), 0);
            prop_assert!(ab <= ulam_distance(&a, &c).unwrap() + ulam_distance(&c, &b).unwrap());
        }
    }
}
