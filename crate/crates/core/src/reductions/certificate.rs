//! Reduction sidecars: enough to rebuild the output instance and threshold,
//! plus the brute-force answer where one is affordable.

use serde::{Deserialize, Serialize};

use crate::oracles::{maxcut_bruteforce, ov4_bruteforce, qov_eaee_bruteforce};

use super::maxcut::MaxCutCertificate;
use super::monochromatic::MonoCertificate;
use super::multiset::MultisetCertificate;
use super::ov::{Ov4Certificate, OvSets, QovCenterCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateBody {
    MaxcutMedian(MaxCutCertificate),
    MultisetSet(MultisetCertificate),
    QovCenter(QovCenterCertificate),
    Ov4Bimedian(Ov4Certificate),
    BiMonomedian(MonoCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub body: CertificateBody,
    /// Answer of the source problem by brute force, when it was computed.
    pub oracle_decision: Option<bool>,
}

fn ov4(s: &OvSets) -> bool {
    ov4_bruteforce(&s.a, &s.b, &s.c, &s.e)
}

impl Certificate {
    /// Wraps `body` and fills in the brute-force answer where one exists:
    /// Max-Cut of at least the target size (graphs the oracle accepts),
    /// `∃∀∃∃` or plain 4-OV. The multiset transform has none.
    pub fn with_oracle(body: CertificateBody) -> Self {
        let oracle_decision = match &body {
            CertificateBody::MaxcutMedian(c) => maxcut_bruteforce(&c.graph).ok().map(|best| best >= c.target_cut),
            CertificateBody::MultisetSet(_) => None,
            CertificateBody::QovCenter(c) => Some(qov_eaee_bruteforce(&c.sets.a, &c.sets.b, &c.sets.c, &c.sets.e)),
            CertificateBody::Ov4Bimedian(c) => Some(ov4(&c.sets)),
            CertificateBody::BiMonomedian(c) => Some(ov4(&c.base.sets)),
        };
        Self { body, oracle_decision }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            CertificateBody::MaxcutMedian(_) => "maxcut-median",
            CertificateBody::MultisetSet(_) => "multiset-set",
            CertificateBody::QovCenter(_) => "qov-center",
            CertificateBody::Ov4Bimedian(_) => "ov4-bimedian",
            CertificateBody::BiMonomedian(_) => "bi-monomedian",
        }
    }
}
