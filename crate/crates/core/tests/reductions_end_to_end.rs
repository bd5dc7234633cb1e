use ulam_core::aggregation::{continuous_median_exhaustive, discrete_center, restricted_median_search};
use ulam_core::gadgets::{BinaryVector, VectorSet};
use ulam_core::oracles::{maxcut_bruteforce, qov_eaee_bruteforce};
use ulam_core::reductions::certificate::{Certificate, CertificateBody};
use ulam_core::reductions::maxcut::{maxcut_to_median, Graph};
use ulam_core::reductions::multiset::multiset_to_set;
use ulam_core::reductions::ov::{ov4_to_bichromatic_median, qov_to_discrete_center, OvSets};
use ulam_core::reductions::verify::verify;
use ulam_core::reductions::ReducedInstance;
use ulam_core::{Perm, UlamInstance};

fn set(rows: &[&str]) -> VectorSet {
    VectorSet::new(rows.iter().map(|r| r.parse::<BinaryVector>().unwrap()).collect()).unwrap()
}

#[test]
fn maxcut_threshold_separates_cut_sizes() {
    let g = Graph::new(4, vec![(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)]).unwrap();
    let best = maxcut_bruteforce(&g).unwrap();
    assert_eq!(best, 4);
    for k in [best, best + 1] {
        let (inst, cert) = maxcut_to_median(&g, k).unwrap();
        let res = restricted_median_search(&inst, &cert).unwrap();
        assert_eq!(res.within(inst.tau()), k <= best, "target {k}");
        let c = Certificate::with_oracle(CertificateBody::MaxcutMedian(cert));
        assert_eq!(c.oracle_decision, Some(k <= best));
        assert!(verify(&ReducedInstance::Mono(inst), &c).is_ok());
    }
}

#[test]
fn multiset_optimum_shifts_by_count() {
    let id: Perm = "1 2 3".parse().unwrap();
    let sw: Perm = "3 1 2".parse().unwrap();
    let inst = UlamInstance::new(vec![id.clone(), id, sw], 1).unwrap();
    let (out, cert) = multiset_to_set(&inst).unwrap();
    assert_eq!(out.length(), 3 + 2 * 3);
    assert_eq!(out.tau(), 1 + 3);
    let before = continuous_median_exhaustive(inst.perms(), 9).unwrap().cost;
    let after = continuous_median_exhaustive(out.perms(), 9).unwrap().cost;
    assert_eq!(after, before + 3);
    let c = Certificate::with_oracle(CertificateBody::MultisetSet(cert));
    assert!(verify(&ReducedInstance::Mono(out), &c).is_ok());
}

#[test]
fn quantified_center_follows_oracle() {
    let cases = [
        (set(&["10", "01"]), set(&["01", "10"]), set(&["11", "10"]), set(&["01", "11"])),
        (set(&["11", "11"]), set(&["11", "01"]), set(&["11"]), set(&["11"])),
        (set(&["00", "11"]), set(&["11", "11"]), set(&["10"]), set(&["01"])),
    ];
    for (a, b, c, e) in cases {
        let want = qov_eaee_bruteforce(&a, &b, &c, &e);
        let sets = OvSets::new(a, b, c, e).unwrap();
        let (inst, cert) = qov_to_discrete_center(&sets).unwrap();
        assert_eq!(discrete_center(&inst).unwrap().within(inst.tau()), want);
        let c = Certificate::with_oracle(CertificateBody::QovCenter(cert));
        assert_eq!(verify(&ReducedInstance::Mono(inst), &c).map(|t| t.contains(&"threshold")), Ok(true));
    }
}

#[test]
fn verify_rejects_the_wrong_kind() {
    let sets = OvSets::new(set(&["1"]), set(&["1"]), set(&["1"]), set(&["0"])).unwrap();
    let (bi, cert) = ov4_to_bichromatic_median(&sets).unwrap();
    let (mono, _) = qov_to_discrete_center(&sets).unwrap();
    let c = Certificate::with_oracle(CertificateBody::Ov4Bimedian(cert));
    assert!(verify(&ReducedInstance::Bi(bi), &c).is_ok());
    assert_eq!(verify(&ReducedInstance::Mono(mono), &c).unwrap_err().tag, "instance-kind");
}
