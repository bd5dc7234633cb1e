//! Median and center solvers.
//!
//! The discrete solvers are the plain "all pairwise distances, then pick the
//! best row" baseline. The continuous median is exhaustive and only meant for
//! tiny alphabets; [`restricted_median_search`] instead scans the `2^n`
//! cut-shaped permutations of a Max-Cut instance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::metric::{cross_matrix, pairwise_matrix, DistanceMode, MetricError, PositionIndex};
use crate::perm::{Perm, Symbol};
use crate::reductions::maxcut::{cut_permutation, MaxCutCertificate};

pub const DEFAULT_CONTINUOUS_GUARD: usize = 9;
pub const MAX_RESTRICTED_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregationError {
    #[error("instance has no permutations")]
    EmptyInstance,
    #[error("permutations are over different alphabets")]
    AlphabetMismatch,
    #[error("alphabet size {0} exceeds the exhaustive-search guard {1}")]
    GuardExceeded(usize, usize),
    #[error("instance does not match the Max-Cut certificate: {0}")]
    NotAMaxcutInstance(String),
}

impl From<MetricError> for AggregationError {
    fn from(_: MetricError) -> Self {
        AggregationError::AlphabetMismatch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Sum of distances.
    Median,
    /// Maximum distance.
    Center,
}

impl Objective {
    fn fold(self, dists: impl Iterator<Item = usize>) -> u64 {
        match self {
            Objective::Median => dists.map(|d| d as u64).sum(),
            Objective::Center => dists.map(|d| d as u64).max().unwrap_or(0),
        }
    }
}

/// Equal-length permutations over one alphabet (duplicates allowed) and a
/// decision threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlamInstance {
    perms: Vec<Perm>,
    tau: u64,
    multiset: bool,
}

impl UlamInstance {
    pub fn new(perms: Vec<Perm>, tau: u64) -> Result<Self, AggregationError> {
        check_common_alphabet(perms.iter())?;
        let mut sorted: Vec<&Perm> = perms.iter().collect();
        sorted.sort();
        let multiset = sorted.windows(2).any(|w| w[0] == w[1]);
        Ok(Self { perms, tau, multiset })
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn into_perms(self) -> Vec<Perm> {
        self.perms
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn with_tau(mut self, tau: u64) -> Self {
        self.tau = tau;
        self
    }

    /// Permutation length `L`.
    pub fn length(&self) -> usize {
        self.perms.first().map_or(0, Perm::len)
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// True when some permutation occurs more than once.
    pub fn is_multiset(&self) -> bool {
        self.multiset
    }
}

/// Candidates `X`, targets `Y`, threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BichromaticInstance {
    pub x: Vec<Perm>,
    pub y: Vec<Perm>,
    pub tau: u64,
}

impl BichromaticInstance {
    pub fn new(x: Vec<Perm>, y: Vec<Perm>, tau: u64) -> Result<Self, AggregationError> {
        check_common_alphabet(x.iter().chain(y.iter()))?;
        Ok(Self { x, y, tau })
    }

    pub fn length(&self) -> usize {
        self.x.first().or(self.y.first()).map_or(0, Perm::len)
    }
}

fn check_common_alphabet<'a>(mut perms: impl Iterator<Item = &'a Perm>) -> Result<(), AggregationError> {
    let Some(first) = perms.next() else { return Ok(()) };
    let alphabet = first.alphabet();
    for p in perms {
        if p.len() != alphabet.len() || p.alphabet() != alphabet {
            return Err(AggregationError::AlphabetMismatch);
        }
    }
    Ok(())
}

/// A chosen solution and its objective value.
///
/// `index` is set for discrete and bichromatic solvers and points into the
/// candidate list; `perm` is always the solution itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub index: Option<usize>,
    pub perm: Perm,
    pub cost: u64,
}

impl SolveResult {
    pub fn within(&self, tau: u64) -> bool {
        self.cost <= tau
    }
}

/// Objective value of every member of `perms` against the whole family
/// (itself included, at distance 0).
pub fn discrete_costs(perms: &[Perm], objective: Objective) -> Result<Vec<u64>, AggregationError> {
    let m = pairwise_matrix(perms, DistanceMode::Fast)?;
    Ok((0..perms.len()).map(|i| objective.fold(m.row(i).iter().copied())).collect())
}

fn lowest_argmin(costs: &[u64]) -> Option<usize> {
    // `min_by_key` keeps the first minimum.
    costs.iter().enumerate().min_by_key(|(_, &c)| c).map(|(i, _)| i)
}

fn solve_discrete(s: &UlamInstance, objective: Objective) -> Result<SolveResult, AggregationError> {
    if s.is_empty() {
        return Err(AggregationError::EmptyInstance);
    }
    let costs = discrete_costs(s.perms(), objective)?;
    let i = lowest_argmin(&costs).expect("non-empty");
    Ok(SolveResult { index: Some(i), perm: s.perms()[i].clone(), cost: costs[i] })
}

/// Member minimizing the sum of distances to all members; lowest index on ties.
pub fn discrete_median(s: &UlamInstance) -> Result<SolveResult, AggregationError> {
    solve_discrete(s, Objective::Median)
}

/// Member minimizing the maximum distance to all members; lowest index on ties.
pub fn discrete_center(s: &UlamInstance) -> Result<SolveResult, AggregationError> {
    solve_discrete(s, Objective::Center)
}

/// Objective of every `x` against all of `Y`.
pub fn bichromatic_costs(inst: &BichromaticInstance, objective: Objective) -> Result<Vec<u64>, AggregationError> {
    let m = cross_matrix(&inst.x, &inst.y)?;
    Ok(m.into_iter().map(|row| objective.fold(row.into_iter())).collect())
}

fn solve_bichromatic(inst: &BichromaticInstance, objective: Objective) -> Result<SolveResult, AggregationError> {
    if inst.x.is_empty() || inst.y.is_empty() {
        return Err(AggregationError::EmptyInstance);
    }
    let costs = bichromatic_costs(inst, objective)?;
    let i = lowest_argmin(&costs).expect("non-empty");
    Ok(SolveResult { index: Some(i), perm: inst.x[i].clone(), cost: costs[i] })
}

pub fn bichromatic_median(inst: &BichromaticInstance) -> Result<SolveResult, AggregationError> {
    solve_bichromatic(inst, Objective::Median)
}

pub fn bichromatic_center(inst: &BichromaticInstance) -> Result<SolveResult, AggregationError> {
    solve_bichromatic(inst, Objective::Center)
}

/// Rearranges `v` into the next permutation in lexicographic order; false
/// once `v` is the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Distinct permutations with multiplicities, indexed for repeated queries.
pub(crate) fn weighted_targets(perms: &[Perm]) -> Vec<(PositionIndex, u64)> {
    let mut counts: BTreeMap<&Perm, u64> = BTreeMap::new();
    for p in perms {
        *counts.entry(p).or_default() += 1;
    }
    counts.into_iter().map(|(p, c)| (PositionIndex::new(p), c)).collect()
}

pub(crate) fn weighted_cost(targets: &[(PositionIndex, u64)], candidate: &Perm) -> u64 {
    targets
        .iter()
        .map(|(idx, c)| c * idx.ulam_to(candidate).expect("candidate spans the instance alphabet") as u64)
        .sum()
}

/// Best permutation of the full alphabet by exhaustive enumeration.
///
/// Duplicates count with multiplicity. Among optimal permutations the
/// lexicographically smallest is returned.
pub fn continuous_median_exhaustive(perms: &[Perm], guard: usize) -> Result<SolveResult, AggregationError> {
    let first = perms.first().ok_or(AggregationError::EmptyInstance)?;
    check_common_alphabet(perms.iter())?;
    let n = first.len();
    if n > guard {
        return Err(AggregationError::GuardExceeded(n, guard));
    }
    let targets = weighted_targets(perms);
    let mut candidate: Vec<Symbol> = first.alphabet();
    let mut best: Option<(u64, Vec<Symbol>)> = None;
    loop {
        let perm = Perm::from_vec_unchecked(candidate.clone());
        let cost = weighted_cost(&targets, &perm);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, candidate.clone()));
        }
        if !next_permutation(&mut candidate) {
            break;
        }
    }
    let (cost, perm) = best.expect("at least one candidate");
    Ok(SolveResult { index: None, perm: Perm::from_vec_unchecked(perm), cost })
}

/// Best cut-shaped permutation `π^{A,B}` for a Max-Cut reduction output.
///
/// Scans all `2^n` vertex subsets `A`; ties go to the lexicographically
/// smallest permutation.
pub fn restricted_median_search(
    instance: &UlamInstance,
    cert: &MaxCutCertificate,
) -> Result<SolveResult, AggregationError> {
    let n = cert.graph.vertex_count();
    if n > MAX_RESTRICTED_VERTICES {
        return Err(AggregationError::GuardExceeded(n, MAX_RESTRICTED_VERTICES));
    }
    let expected_count = 2 * cert.graph.edges().len() + 2 * cert.t as usize;
    if instance.length() != 3 * n + 2 {
        return Err(AggregationError::NotAMaxcutInstance(format!(
            "length {} but the certified graph needs {}",
            instance.length(),
            3 * n + 2
        )));
    }
    if instance.len() != expected_count {
        return Err(AggregationError::NotAMaxcutInstance(format!(
            "{} permutations but the certified graph needs {}",
            instance.len(),
            expected_count
        )));
    }
    let targets = weighted_targets(instance.perms());
    let best = (0u64..(1u64 << n))
        .into_par_iter()
        .map(|mask| {
            let perm = cut_permutation(n, mask);
            (weighted_cost(&targets, &perm), perm)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least the empty cut");
    Ok(SolveResult { index: None, perm: best.1, cost: best.0 })
}
