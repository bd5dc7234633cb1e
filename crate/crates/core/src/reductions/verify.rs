//! Replays the exact identities behind each reduction on a concrete instance.
//!
//! Checks run in a fixed order and stop at the first failure, which is
//! reported by tag. Identity checks read the instance as given; the final
//! `reconstruction` check rebuilds the instance from the certificate and
//! compares it member by member.

use std::fmt;

use crate::aggregation::{discrete_costs, Objective, UlamInstance};
use crate::metric::{structured_f_distance, ulam_distance};
use crate::perm::{Perm, Symbol};

use super::certificate::{Certificate, CertificateBody};
use super::maxcut::{cut_permutation, is_cut, maxcut_to_median, MaxCutCertificate};
use super::monochromatic::{bichromatic_to_monochromatic_median, MonoCertificate};
use super::multiset::{multiset_to_set, swap_suffix, MultisetCertificate};
use super::ov::{ov4_to_bichromatic_median, qov_to_discrete_center, Ov4Certificate, OvSets, QovCenterCertificate};
use super::ReducedInstance;
use crate::aggregation::BichromaticInstance;

/// Cut masks tried exhaustively up to this many vertices, sampled beyond.
const EXHAUSTIVE_MASK_VERTICES: usize = 8;
const SAMPLED_MASKS: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub tag: &'static str,
    pub detail: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag, self.detail)
    }
}

type Outcome = Result<(), CheckFailure>;

struct Checker {
    passed: Vec<&'static str>,
}

impl Checker {
    fn run(&mut self, tag: &'static str, check: impl FnOnce() -> Result<(), String>) -> Outcome {
        check().map_err(|detail| CheckFailure { tag, detail })?;
        self.passed.push(tag);
        Ok(())
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn dist(a: &Perm, b: &Perm) -> Result<u64, String> {
    ulam_distance(a, b).map(|d| d as u64).map_err(|e| e.to_string())
}

/// Symbols `offset+1..=offset+len` of `p`, shifted down to `1..=len`.
fn block(p: &Perm, offset: usize, len: usize) -> Perm {
    let off = offset as Symbol;
    p.restrict_range(off + 1, off + len as Symbol).map_symbols(|s| s - off)
}

/// Verifies `instance` against `cert`. On success returns the tags of all
/// checks that ran.
pub fn verify(instance: &ReducedInstance, cert: &Certificate) -> Result<Vec<&'static str>, CheckFailure> {
    let mut c = Checker { passed: Vec::new() };
    match (&cert.body, instance) {
        (CertificateBody::MaxcutMedian(body), ReducedInstance::Mono(inst)) => verify_maxcut(&mut c, inst, body)?,
        (CertificateBody::MultisetSet(body), ReducedInstance::Mono(inst)) => verify_multiset(&mut c, inst, body)?,
        (CertificateBody::QovCenter(body), ReducedInstance::Mono(inst)) => verify_qov(&mut c, inst, body)?,
        (CertificateBody::Ov4Bimedian(body), ReducedInstance::Bi(inst)) => verify_ov4(&mut c, inst, body)?,
        (CertificateBody::BiMonomedian(body), ReducedInstance::Mono(inst)) => verify_mono(&mut c, inst, body)?,
        _ => {
            return Err(CheckFailure {
                tag: "instance-kind",
                detail: format!("a {} certificate does not describe this kind of instance", cert.kind()),
            })
        }
    }
    Ok(c.passed)
}

fn masks(n: usize) -> Vec<u64> {
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n <= EXHAUSTIVE_MASK_VERTICES {
        return (0..=full).collect();
    }
    // Deterministic spread of subsets (splitmix64 finalizer).
    (0..SAMPLED_MASKS)
        .map(|i| {
            let mut z = i.wrapping_add(0x9E37_79B9_7F4A_7C15);
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            (z ^ (z >> 31)) & full
        })
        .collect()
}

fn verify_maxcut(c: &mut Checker, inst: &UlamInstance, cert: &MaxCutCertificate) -> Outcome {
    let g = &cert.graph;
    let n = g.vertex_count();
    let e = g.edges().len();
    let t = cert.t as usize;
    c.run("instance-shape", || {
        ensure(inst.len() == 2 * e + 2 * t && inst.length() == 3 * n + 2, || {
            format!("{} permutations of length {}, expected {} of length {}", inst.len(), inst.length(), 2 * e + 2 * t, 3 * n + 2)
        })
    })?;
    let perms = inst.perms();
    let (lefts, rights) = perms[2 * e..].split_at(t);
    let masks = masks(n);

    c.run("aux-pair-sum", || {
        for &mask in &masks {
            let pi = cut_permutation(n, mask);
            for (l, r) in lefts.iter().zip(rights) {
                let s = dist(&pi, l)? + dist(&pi, r)?;
                ensure(s == n as u64, || format!("cut {mask:#b}: auxiliary pair sums to {s}, expected {n}"))?;
            }
        }
        Ok(())
    })?;
    c.run("edge-gadget-sum", || {
        for &mask in &masks {
            let pi = cut_permutation(n, mask);
            for (idx, &edge) in g.edges().iter().enumerate() {
                let s = dist(&pi, &perms[2 * idx])? + dist(&pi, &perms[2 * idx + 1])?;
                let want = if is_cut(mask, edge) { 2 * n - 2 } else { 2 * n - 1 } as u64;
                ensure(s == want, || format!("edge {edge:?}, cut {mask:#b}: gadget sum {s}, expected {want}"))?;
            }
        }
        Ok(())
    })?;
    c.run("cut-cost", || {
        for &mask in &masks {
            let pi = cut_permutation(n, mask);
            let mut total = 0;
            for p in perms {
                total += dist(&pi, p)?;
            }
            let want = cert.cost_for_cut(g.cut_size(mask));
            ensure(total == want, || format!("cut {mask:#b}: cost {total}, expected {want}"))?;
        }
        Ok(())
    })?;
    c.run("threshold", || {
        let want = cert.cost_for_cut(cert.target_cut);
        ensure(inst.tau() == want, || format!("threshold {} but the target cut gives {want}", inst.tau()))
    })?;
    c.run("reconstruction", || {
        let (rebuilt, rebuilt_cert) = maxcut_to_median(g, cert.target_cut).map_err(|e| e.to_string())?;
        ensure(rebuilt_cert == *cert, || "certificate is not self-consistent".into())?;
        compare_members(rebuilt.perms(), perms)
    })
}

fn compare_members(expected: &[Perm], got: &[Perm]) -> Result<(), String> {
    ensure(expected.len() == got.len(), || format!("{} members, expected {}", got.len(), expected.len()))?;
    match expected.iter().zip(got).position(|(a, b)| a != b) {
        Some(i) => Err(format!("member {i} differs from the rebuilt instance")),
        None => Ok(()),
    }
}

fn verify_multiset(c: &mut Checker, inst: &UlamInstance, cert: &MultisetCertificate) -> Outcome {
    let m = cert.original.len();
    let n = cert.original.first().map_or(0, Perm::len);
    c.run("instance-shape", || {
        ensure(inst.len() == m && inst.length() == n + 2 * m, || {
            format!("{} permutations of length {}, expected {m} of length {}", inst.len(), inst.length(), n + 2 * m)
        })
    })?;
    c.run("prefix-restriction", || {
        for (i, (p, orig)) in inst.perms().iter().zip(&cert.original).enumerate() {
            ensure(block(p, 0, n) == *orig, || format!("member {i} restricted to 1..={n} is not the original"))?;
        }
        Ok(())
    })?;
    c.run("suffix-swap", || {
        for (i, p) in inst.perms().iter().enumerate() {
            ensure(block(p, n, 2 * m) == swap_suffix(m, i + 1), || format!("member {i} has the wrong swap suffix"))?;
        }
        Ok(())
    })?;
    c.run("threshold", || {
        let want = cert.original_tau + m as u64;
        ensure(inst.tau() == want, || format!("threshold {} but expected {want}", inst.tau()))
    })?;
    c.run("reconstruction", || {
        let orig = UlamInstance::new(cert.original.clone(), cert.original_tau).map_err(|e| e.to_string())?;
        let (rebuilt, _) = multiset_to_set(&orig).map_err(|e| e.to_string())?;
        compare_members(rebuilt.perms(), inst.perms())
    })
}

fn gadget_distances(c: &mut Checker, sets: &OvSets, xs: &[Perm], ys: &[Perm]) -> Outcome {
    c.run("or-gadget-distance", || {
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                let d = dist(x, y)?;
                let want = sets.base_distance() - sets.hits(i, j) as u64;
                ensure(d == want, || format!("d_U(x_{i}, y_{j}) = {d}, expected {want}"))?;
            }
        }
        Ok(())
    })
}

fn verify_qov(c: &mut Checker, inst: &UlamInstance, cert: &QovCenterCertificate) -> Outcome {
    let sets = &cert.sets;
    let n = sets.n();
    let l = cert.gadget_length;
    c.run("instance-shape", || {
        ensure(inst.len() == 2 * n + 1 && inst.length() == 4 * l && l == sets.gadget_length(), || {
            format!("{} permutations of length {}, expected {} of length {}", inst.len(), inst.length(), 2 * n + 1, 4 * l)
        })
    })?;
    let perms = inst.perms();
    let (xs, rest) = perms.split_at(n);
    let (ys, far) = rest.split_at(n);
    let far = &far[0];
    let tails = |ps: &[Perm]| ps.iter().map(|p| block(p, 0, l)).collect::<Vec<_>>();
    let (x_tails, y_tails) = (tails(xs), tails(ys));
    gadget_distances(c, sets, &x_tails, &y_tails)?;

    let l64 = l as u64;
    c.run("pad-x-x", || {
        for (i, a) in xs.iter().enumerate() {
            for b in &xs[..i] {
                let d = dist(a, b)?;
                ensure(d < l64, || format!("two X members at distance {d} >= L = {l}"))?;
            }
        }
        Ok(())
    })?;
    c.run("pad-x-far", || {
        for x in xs {
            let d = dist(x, far)?;
            ensure(d + 2 <= 2 * l64, || format!("X member at distance {d} from the far member, above 2L - 2"))?;
        }
        Ok(())
    })?;
    c.run("pad-y-far", || {
        for y in ys {
            let d = dist(y, far)?;
            ensure(d + 2 >= 3 * l64, || format!("Y member at distance {d} from the far member, below 3L - 2"))?;
        }
        Ok(())
    })?;
    c.run("pad-x-y", || {
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                let d = dist(x, y)?;
                let want = 2 * l64 - 1 + dist(&x_tails[i], &y_tails[j])?;
                ensure(d == want, || format!("d_U(x_{i}, y_{j}) = {d}, expected {want}"))?;
            }
        }
        Ok(())
    })?;
    c.run("threshold", || {
        let want = 2 * l64 - 1 + sets.base_distance() - 1;
        ensure(inst.tau() == want && cert.tau == want, || format!("threshold {} but expected {want}", inst.tau()))
    })?;
    c.run("reconstruction", || {
        let (rebuilt, rebuilt_cert) = qov_to_discrete_center(sets).map_err(|e| e.to_string())?;
        ensure(rebuilt_cert == *cert, || "certificate is not self-consistent".into())?;
        compare_members(rebuilt.perms(), perms)
    })
}

fn verify_ov4(c: &mut Checker, inst: &BichromaticInstance, cert: &Ov4Certificate) -> Outcome {
    let sets = &cert.sets;
    let n = sets.n();
    let l = cert.gadget_length;
    c.run("instance-shape", || {
        ensure(inst.x.len() == n && inst.y.len() == n && inst.length() == l && l == sets.gadget_length(), || {
            format!("{} x {} permutations of length {}, expected {n} x {n} of length {l}", inst.x.len(), inst.y.len(), inst.length())
        })
    })?;
    gadget_distances(c, sets, &inst.x, &inst.y)?;
    c.run("threshold", || {
        let want = sets.base_distance() * n as u64 - 1;
        ensure(inst.tau == want && cert.tau == want, || format!("threshold {} but expected {want}", inst.tau))
    })?;
    c.run("reconstruction", || {
        let (rebuilt, _) = ov4_to_bichromatic_median(sets).map_err(|e| e.to_string())?;
        compare_members(&rebuilt.x, &inst.x)?;
        compare_members(&rebuilt.y, &inst.y)
    })
}

fn verify_mono(c: &mut Checker, inst: &UlamInstance, cert: &MonoCertificate) -> Outcome {
    let sets = &cert.base.sets;
    let n = sets.n();
    let l = cert.gadget_length;
    let lp = cert.balance_length;
    let big_k = cert.tail_weight;
    let tail_len = 6 * big_k as usize;
    c.run("instance-shape", || {
        ensure(inst.len() == 2 * n && inst.length() == 3 * l + lp + tail_len && cert.k.len() == n, || {
            format!("{} permutations of length {}, expected {} of length {}", inst.len(), inst.length(), 2 * n, 3 * l + lp + tail_len)
        })
    })?;
    let perms = inst.perms();
    let head = |p: &Perm| block(p, 0, 3 * l);
    let mid = |p: &Perm| block(p, 3 * l, lp);
    let tail = |p: &Perm| block(p, 3 * l + lp, tail_len);
    let (xs, ys) = perms.split_at(n);
    let n64 = n as u64;

    c.run("tripled-distance", || {
        let v: Vec<_> = (0..n).map(|i| sets.v_set(i)).collect();
        let mut k = vec![0u64; n];
        for i in 0..n {
            for j in 0..i {
                let d = dist(&head(&xs[i]), &head(&xs[j]))?;
                let want = structured_f_distance(&v[i], &v[j], 3).map_err(|e| e.to_string())? as u64;
                ensure(d == want, || format!("tripled x_{i}, x_{j} at distance {d}, expected {want}"))?;
                k[i] += d;
                k[j] += d;
            }
        }
        ensure(k == cert.k, || "within-X sums differ from the certificate".into())
    })?;
    c.run("balance-bound", || {
        for i in 0..n {
            let mut s = cert.k[i];
            for j in 0..n {
                if j != i {
                    s += dist(&mid(&xs[i]), &mid(&xs[j]))?;
                }
            }
            ensure(s.abs_diff(cert.balance_target) <= 1, || {
                format!("x_{i}: balanced sum {s} is more than 1 away from {}", cert.balance_target)
            })?;
        }
        Ok(())
    })?;
    c.run("tau-distance", || {
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                let d = dist(&mid(x), &mid(y))?;
                ensure(d == cert.tau_distance, || format!("balance parts of x_{i}, y_{j} at distance {d}, expected {}", cert.tau_distance))?;
            }
        }
        Ok(())
    })?;
    c.run("tail-gadget", || {
        for (i, y) in ys.iter().enumerate() {
            let eta = tail(y);
            for x in xs {
                let d = dist(&tail(x), &eta)?;
                ensure(d == big_k, || format!("tail of y_{i} at distance {d} from mu, expected K = {big_k}"))?;
            }
            let mut s = 0;
            for other in ys {
                s += dist(&eta, &tail(other))?;
            }
            ensure(s == n64 * big_k, || format!("tail of y_{i} sums to {s} against the others, expected nK"))?;
        }
        Ok(())
    })?;
    let costs = discrete_costs(perms, Objective::Median).map_err(|e| CheckFailure { tag: "median-cost-identity", detail: e.to_string() })?;
    c.run("median-cost-identity", || {
        let fixed = n64 * cert.tau_distance + n64 * big_k + cert.balance_target;
        for (i, &cost) in costs.iter().enumerate().take(n) {
            let bichromatic: u64 = (0..n).map(|j| sets.base_distance() - sets.hits(i, j) as u64).sum();
            let want = 3 * bichromatic + fixed;
            ensure(cost.abs_diff(want) <= 1, || format!("x'_{i} costs {cost}, expected {want} up to 1"))?;
        }
        Ok(())
    })?;
    c.run("y-far", || {
        let floor = 2 * n64 * big_k;
        match costs[n..].iter().position(|&v| v < floor) {
            Some(j) => Err(format!("y'_{j} costs {} below 2nK = {floor}", costs[n + j])),
            None => Ok(()),
        }
    })?;
    c.run("threshold", || {
        let want = 3 * cert.base.tau + n64 * cert.tau_distance + n64 * big_k + cert.balance_target + 1;
        ensure(inst.tau() == want && cert.tau == want, || format!("threshold {} but expected {want}", inst.tau()))
    })?;
    c.run("reconstruction", || {
        let (bi, base) = ov4_to_bichromatic_median(sets).map_err(|e| e.to_string())?;
        let (rebuilt, rebuilt_cert) = bichromatic_to_monochromatic_median(&bi, Some(&base)).map_err(|e| e.to_string())?;
        ensure(rebuilt_cert == *cert, || "certificate is not self-consistent".into())?;
        compare_members(rebuilt.perms(), perms)
    })
}
