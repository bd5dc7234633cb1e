//! Orthogonal-vectors reductions.
//!
//! Both start from `V_a = {a ⊙ c : c ∈ C}` and `W_b = {b ⊙ e : e ∈ E}` and
//! set `x_a = f(V_a)`, `y_b = g(W_b)`, so `d_U(x_a, y_b) = 3dm² - #{orthogonal
//! pairs between V_a and W_b}` with `m = |C| = |E|`.
//!
//! * Center: `x_a` is within `3dm² - 1` of every `y_b` iff every `b` has a
//!   witness, i.e. the `∃a ∀b ∃c ∃e` question. Three padding runs turn the
//!   bichromatic question into a plain discrete center on length `4L`.
//! * Median: `Σ_b d_U(x_a, y_b) ≤ 3dm²n - 1` iff some `b` has a witness.

use serde::{Deserialize, Serialize};

use crate::aggregation::{BichromaticInstance, UlamInstance};
use crate::gadgets::{or_gadget_f, or_gadget_g, VectorSet};
use crate::perm::{Perm, Symbol};

use super::ReductionError;

/// The four vector sets behind an OV reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvSets {
    pub a: VectorSet,
    pub b: VectorSet,
    pub c: VectorSet,
    pub e: VectorSet,
}

impl OvSets {
    pub fn new(a: VectorSet, b: VectorSet, c: VectorSet, e: VectorSet) -> Result<Self, ReductionError> {
        let d = a.dim();
        if [&b, &c, &e].iter().any(|s| s.dim() != d) {
            return Err(ReductionError::Shape("vector sets have different dimensions".into()));
        }
        if a.is_empty() || a.len() != b.len() {
            return Err(ReductionError::Shape(format!("|A| = {} and |B| = {} must be equal and positive", a.len(), b.len())));
        }
        if c.is_empty() || c.len() != e.len() {
            return Err(ReductionError::Shape(format!("|C| = {} and |E| = {} must be equal and positive", c.len(), e.len())));
        }
        Ok(Self { a, b, c, e })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `L = (5d - 1) m²`.
    pub fn gadget_length(&self) -> usize {
        (5 * self.dim() - 1) * self.m() * self.m()
    }

    /// `3 d m²`: the distance `d_U(x_a, y_b)` when nothing is orthogonal.
    pub fn base_distance(&self) -> u64 {
        (3 * self.dim() * self.m() * self.m()) as u64
    }

    pub fn v_set(&self, i: usize) -> VectorSet {
        self.c.masked_by(self.a.get(i))
    }

    pub fn w_set(&self, j: usize) -> VectorSet {
        self.e.masked_by(self.b.get(j))
    }

    pub fn x_perms(&self) -> Vec<Perm> {
        (0..self.n()).map(|i| or_gadget_f(&self.v_set(i))).collect()
    }

    pub fn y_perms(&self) -> Vec<Perm> {
        (0..self.n()).map(|j| or_gadget_g(&self.w_set(j))).collect()
    }

    /// Orthogonal pairs between `V_{a_i}` and `W_{b_j}`, counted directly.
    pub fn hits(&self, i: usize, j: usize) -> usize {
        self.v_set(i).orthogonal_pairs(&self.w_set(j))
    }
}

/// Duplicates the first vector of `A` and of `B` until both sizes are
/// multiples of 4. `C` and `E` are unchanged.
pub fn pad_ov_for_divisibility(sets: &OvSets) -> OvSets {
    let pad = |s: &VectorSet| {
        let mut s = s.clone();
        let first = s.get(0).clone();
        while !s.len().is_multiple_of(4) {
            s.push(first.clone()).expect("same dimension");
        }
        s
    };
    OvSets { a: pad(&sets.a), b: pad(&sets.b), c: sets.c.clone(), e: sets.e.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QovCenterCertificate {
    pub sets: OvSets,
    /// Gadget length `L`; the instance has length `4L`.
    pub gadget_length: usize,
    /// Bichromatic threshold `3dm² - 1`.
    pub tau_bichromatic: u64,
    /// Instance threshold `2L - 1 + tau_bichromatic`.
    pub tau: u64,
}

/// Prefix runs for a length-`L` tail: `p1 = L+1..=2L`, `p2 = 2L+1..=4L`,
/// `p3 = 1..=L`.
pub fn center_prefixes(l: usize) -> (Perm, Perm, Perm) {
    (Perm::run(l as Symbol + 1, l), Perm::run(2 * l as Symbol + 1, 2 * l), Perm::identity(l))
}

fn join(parts: &[&Perm]) -> Perm {
    Perm::concat_disjoint(parts.iter().copied()).expect("padding runs and tail use disjoint ranges")
}

/// `∃∀∃∃` vectors to a discrete center instance.
///
/// Members, in order: `p2ᴿ p1 x_a` for each `a`, `p2 p1 y_b` for each `b`,
/// then the far permutation `p2ᴿ p1ᴿ p3`.
pub fn qov_to_discrete_center(sets: &OvSets) -> Result<(UlamInstance, QovCenterCertificate), ReductionError> {
    let l = sets.gadget_length();
    let (p1, p2, p3) = center_prefixes(l);
    let (p1r, p2r) = (p1.reversed(), p2.reversed());
    let mut perms: Vec<Perm> = sets.x_perms().iter().map(|x| join(&[&p2r, &p1, x])).collect();
    perms.extend(sets.y_perms().iter().map(|y| join(&[&p2, &p1, y])));
    perms.push(join(&[&p2r, &p1r, &p3]));

    let tau_bichromatic = sets.base_distance() - 1;
    let tau = 2 * l as u64 - 1 + tau_bichromatic;
    let instance = UlamInstance::new(perms, tau)?;
    Ok((instance, QovCenterCertificate { sets: sets.clone(), gadget_length: l, tau_bichromatic, tau }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ov4Certificate {
    pub sets: OvSets,
    pub gadget_length: usize,
    /// `3dm²n - 1`.
    pub tau: u64,
}

/// 4-OV to a bichromatic median instance with threshold `3dm²n - 1`.
pub fn ov4_to_bichromatic_median(sets: &OvSets) -> Result<(BichromaticInstance, Ov4Certificate), ReductionError> {
    let tau = sets.base_distance() * sets.n() as u64 - 1;
    let instance = BichromaticInstance::new(sets.x_perms(), sets.y_perms(), tau)?;
    Ok((instance, Ov4Certificate { sets: sets.clone(), gadget_length: sets.gadget_length(), tau }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::{bichromatic_median, discrete_center};
    use crate::gadgets::BinaryVector;
    use crate::metric::ulam_distance;
    use crate::oracles::{ov4_bruteforce, qov_eaee_bruteforce};

    fn uniform(n: usize, m: usize, v: &str) -> OvSets {
        let set = |k: usize| VectorSet::new(vec![v.parse::<BinaryVector>().unwrap(); k]).unwrap();
        OvSets::new(set(n), set(n), set(m), set(m)).unwrap()
    }

    #[test]
    fn center_yes_and_no() {
        let zero = uniform(2, 2, "000");
        let (inst, cert) = qov_to_discrete_center(&zero).unwrap();
        assert_eq!(inst.len(), 5);
        assert_eq!(inst.length(), 4 * cert.gadget_length);
        assert!(qov_eaee_bruteforce(&zero.a, &zero.b, &zero.c, &zero.e));
        assert!(discrete_center(&inst).unwrap().within(cert.tau));

        let ones = uniform(2, 2, "111");
        let (inst, cert) = qov_to_discrete_center(&ones).unwrap();
        let res = discrete_center(&inst).unwrap();
        assert_eq!(res.cost, 2 * cert.gadget_length as u64 - 1 + ones.base_distance());
        assert_eq!(res.cost, cert.tau + 1);
    }

    #[test]
    fn median_yes_and_no() {
        let zero = uniform(2, 2, "000");
        let (inst, cert) = ov4_to_bichromatic_median(&zero).unwrap();
        let res = bichromatic_median(&inst).unwrap();
        // Every pair of masked vectors is orthogonal: m² hits per y.
        assert_eq!(res.cost, 2 * (zero.base_distance() - 4));
        assert!(res.within(cert.tau));
        assert!(ov4_bruteforce(&zero.a, &zero.b, &zero.c, &zero.e));

        let ones = uniform(2, 2, "111");
        let (inst, cert) = ov4_to_bichromatic_median(&ones).unwrap();
        assert_eq!(bichromatic_median(&inst).unwrap().cost, cert.tau + 1);
    }

    #[test]
    fn gadget_distance_counts_hits() {
        let a = VectorSet::new(vec!["10".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        let b = VectorSet::new(vec!["01".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        let c = VectorSet::new(vec!["11".parse().unwrap(), "01".parse().unwrap()]).unwrap();
        let sets = OvSets::new(a, b, c.clone(), c).unwrap();
        let (xs, ys) = (sets.x_perms(), sets.y_perms());
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                let d = ulam_distance(x, y).unwrap() as u64;
                assert_eq!(d, sets.base_distance() - sets.hits(i, j) as u64);
            }
        }
    }

    #[test]
    fn padding_to_multiple_of_four() {
        let sets = uniform(3, 1, "01");
        let padded = pad_ov_for_divisibility(&sets);
        assert_eq!((padded.a.len(), padded.b.len()), (4, 4));
        assert_eq!(padded.a.get(3), sets.a.get(0));
        let four = uniform(4, 1, "01");
        assert_eq!(pad_ov_for_divisibility(&four), four);
        assert_eq!(pad_ov_for_divisibility(&uniform(5, 1, "1")).n(), 8);
    }

    #[test]
    fn shape_errors() {
        let one = VectorSet::new(vec!["1".parse().unwrap()]).unwrap();
        let two = VectorSet::new(vec!["11".parse().unwrap()]).unwrap();
        assert!(OvSets::new(one.clone(), one.clone(), one.clone(), two).is_err());
        let pair = VectorSet::new(vec!["1".parse().unwrap(); 2]).unwrap();
        assert!(OvSets::new(one.clone(), pair, one.clone(), one).is_err());
    }
}
