//! Proof-trace certificates for the truncated-sum comparison
//! `Σ_{k>K}(k·α_k − t)₊ ≥ Σ_{k≤K}(−k·α_k − t)₊` at a given `t ≥ 0`.
//!
//! [`certify_lemma1`] replays the two-case proof of the comparison on a
//! concrete instance and records every intermediate inequality with its
//! exact left- and right-hand values. Writing `A` for the positive-side
//! truncated sum and `B` for the negative-side one, the trace is:
//!
//! * `B = 0` — nothing to prove; a trivial certificate.
//! * `n ≤ 3K+1` (small case): a pigeonhole witness index `l` with
//!   `−l·α_l − t ≥ B/K`; the zero-sum bound `Σ_{k>K} α_k ≥ B/K + t`; the
//!   rearrangement bound `Σ_{k>K} k·α_k ≥ ((n+K+1)/2)·Σ_{k>K} α_k`;
//!   dropping the plus-parts `A ≥ Σ_{k>K} k·α_k − (n−K)·t`; and the
//!   combined bound `((n+K+1)/2K)·B + ((3K+1−n)/2)·t ≥ B`.
//! * `n > 3K+1` (large case): the same opening, then with `M = n−2K−1`
//!   the tail-average bound `Σ_{k>M} α_k ≥ ((n−M)/(n−K))·Σ_{k>K} α_k`,
//!   rearrangement over `k > M`, plus-dropping over `k > M`, and the
//!   reduced bound `((2K+1)/K)·B ≥ B` (the `t` coefficient
//!   `(M+2K+1−n)(n−M)/(2(n−K))` vanishes identically at this `M`).
//!
//! [`check_certificate`] is an independent auditor: it recomputes every
//! field and every step from the instance alone, in exact arithmetic, and
//! rejects a certificate at the first field that disagrees. It shares no
//! code with the generator beyond the scalar type.
//!
//! Certificates are exact-rational only. A certificate whose inputs have
//! been rounded certifies nothing, so approximate scalars are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::sequence::OrderedZeroSumSequence;

#[derive(Debug, Error, PartialEq)]
pub enum CertificateError {
    #[error("certificates require exact rational inputs")]
    RequiresExact,
    #[error("threshold must be nonnegative (got {t})")]
    NegativeThreshold { t: String },
    #[error("internal invariant violated while generating certificate: {0}")]
    InternalInvariant(String),
}

/// Which branch of the two-case proof the certificate records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateCase {
    /// The negative-side truncated sum is zero; the comparison is immediate.
    TrivialZero,
    /// `n ≤ 3K+1`.
    SmallN,
    /// `n > 3K+1`, estimated through the tail `k > M` with `M = n−2K−1`.
    LargeN,
}

/// Names of the recorded inequality steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepName {
    /// `−l·α_l − t ≥ B/K` for the chosen witness index `l`.
    Pigeonhole,
    /// `Σ_{k>K} α_k ≥ B/K + t` via the zero-sum condition.
    ZeroSumTail,
    /// `Σ_{k>M} α_k ≥ ((n−M)/(n−K))·Σ_{k>K} α_k` (large case only).
    TailAverage,
    /// Index-weighted tail versus mean-index times plain tail.
    Rearrangement,
    /// `A ≥ Σ k·α_k − (count)·t` over the estimating tail.
    DropPlus,
    /// The assembled lower bound on `A` is at least `B`.
    CoefficientBound,
    /// `A ≥ B`.
    Conclusion,
}

/// One audited inequality: `lhs ≥ rhs` with both sides evaluated exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStep {
    pub name: StepName,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// The audited trace of the truncated-sum comparison at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Certificate {
    pub n: usize,
    /// The threshold `t`.
    pub threshold: Scalar,
    /// `K`: number of strictly negative entries.
    pub negative_count: usize,
    pub case: CertificateCase,
    /// `A = Σ_{k>K}(k·α_k − t)₊`.
    pub positive_stop_loss: Scalar,
    /// `B = Σ_{k≤K}(−k·α_k − t)₊`.
    pub negative_stop_loss: Scalar,
    /// Witness index `l ≤ K` with `−l·α_l − t ≥ B/K` (1-based); present
    /// iff `B > 0`. Chosen as the argmax of `−k·α_k`, smallest index on
    /// ties, so generation is deterministic.
    pub pigeonhole_index: Option<usize>,
    /// `M = n−2K−1`; present iff the large case applies.
    pub tail_start: Option<usize>,
    pub bound_chain: Vec<BoundStep>,
}

/// Outcome of an independent certificate audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CertificateCheck {
    Valid,
    /// The first field or step that failed recomputation.
    Invalid { field: String },
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid)
    }

    pub fn failing_field(&self) -> Option<&str> {
        match self {
            CertificateCheck::Valid => None,
            CertificateCheck::Invalid { field } => Some(field),
        }
    }
}

fn require_exact(seq: &OrderedZeroSumSequence, t: &Scalar) -> bool {
    t.is_exact() && seq.values().iter().all(Scalar::is_exact)
}

/// `Σ_{k≤K}(−k·α_k − t)₊` — the negative-side truncated sum.
fn negative_side_sum(seq: &OrderedZeroSumSequence, t: &Scalar) -> Scalar {
    let k_count = seq.negative_count();
    seq.values()[..k_count]
        .iter()
        .enumerate()
        .map(|(i, v)| (-(Scalar::from_int(i as i64 + 1) * v) - t).plus_part())
        .sum()
}

/// `Σ_{k>start}(k·α_k − t)₊`.
fn positive_side_sum(seq: &OrderedZeroSumSequence, start: usize, t: &Scalar) -> Scalar {
    seq.values()
        .iter()
        .enumerate()
        .skip(start)
        .map(|(i, v)| (Scalar::from_int(i as i64 + 1) * v - t).plus_part())
        .sum()
}

/// `Σ_{k>start} α_k` (start is 0-based count of skipped entries).
fn plain_tail_sum(seq: &OrderedZeroSumSequence, start: usize) -> Scalar {
    seq.values()[start..].iter().sum()
}

/// `Σ_{k>start} k·α_k`.
fn weighted_tail_sum(seq: &OrderedZeroSumSequence, start: usize) -> Scalar {
    seq.values()
        .iter()
        .enumerate()
        .skip(start)
        .map(|(i, v)| Scalar::from_int(i as i64 + 1) * v)
        .sum()
}

/// Generate the proof trace for the instance at threshold `t`.
pub fn certify_lemma1(
    seq: &OrderedZeroSumSequence,
    t: &Scalar,
) -> Result<Lemma1Certificate, CertificateError> {
    if !require_exact(seq, t) {
        return Err(CertificateError::RequiresExact);
    }
    if t.is_negative() {
        return Err(CertificateError::NegativeThreshold { t: t.to_string() });
    }

    let n = seq.len();
    let k_count = seq.negative_count();
    let b = negative_side_sum(seq, t);
    let a = positive_side_sum(seq, k_count, t);

    if b.is_zero() {
        return Ok(Lemma1Certificate {
            n,
            threshold: t.clone(),
            negative_count: k_count,
            case: CertificateCase::TrivialZero,
            positive_stop_loss: a.clone(),
            negative_stop_loss: b.clone(),
            pigeonhole_index: None,
            tail_start: None,
            bound_chain: vec![BoundStep {
                name: StepName::Conclusion,
                lhs: a,
                rhs: b,
            }],
        });
    }

    if k_count == 0 {
        return Err(CertificateError::InternalInvariant(
            "nonzero negative-side sum with no negative entries".into(),
        ));
    }

    // Witness index: argmax of −k·α_k over k ≤ K, smallest index on ties.
    let mut l = 1usize;
    let mut best = -(Scalar::from_int(1) * &seq.values()[0]);
    for k in 2..=k_count {
        let cand = -(Scalar::from_int(k as i64) * &seq.values()[k - 1]);
        if cand > best {
            best = cand;
            l = k;
        }
    }

    let ni = n as i64;
    let ki = k_count as i64;
    let b_over_k = &b / Scalar::from_int(ki);
    let pigeonhole_lhs = &best - t;
    if pigeonhole_lhs < b_over_k {
        return Err(CertificateError::InternalInvariant(
            "pigeonhole witness fails its bound".into(),
        ));
    }

    let mut chain = vec![
        BoundStep {
            name: StepName::Pigeonhole,
            lhs: pigeonhole_lhs,
            rhs: b_over_k.clone(),
        },
        BoundStep {
            name: StepName::ZeroSumTail,
            lhs: plain_tail_sum(seq, k_count),
            rhs: &b_over_k + t,
        },
    ];

    let small_case = ni <= 3 * ki + 1;
    let (case, tail_start) = if small_case {
        (CertificateCase::SmallN, None)
    } else {
        (CertificateCase::LargeN, Some((ni - 2 * ki - 1) as usize))
    };

    if small_case {
        let tail = plain_tail_sum(seq, k_count);
        let weighted = weighted_tail_sum(seq, k_count);
        chain.push(BoundStep {
            name: StepName::Rearrangement,
            lhs: weighted.clone(),
            rhs: Scalar::ratio(ni + ki + 1, 2) * &tail,
        });
        chain.push(BoundStep {
            name: StepName::DropPlus,
            lhs: a.clone(),
            rhs: weighted - Scalar::from_int(ni - ki) * t,
        });
        chain.push(BoundStep {
            name: StepName::CoefficientBound,
            lhs: Scalar::ratio(ni + ki + 1, 2 * ki) * &b
                + Scalar::ratio(3 * ki + 1 - ni, 2) * t,
            rhs: b.clone(),
        });
    } else {
        let m = tail_start.expect("large case sets M") as i64;
        if m <= ki {
            return Err(CertificateError::InternalInvariant(
                "tail start must exceed the negative count in the large case".into(),
            ));
        }
        // The t coefficient (M+2K+1−n)(n−M)/(2(n−K)) vanishes at M = n−2K−1,
        // and the B coefficient reduces to (2K+1)/K; both are replayed here
        // so a generator regression cannot slip through.
        if m + 2 * ki + 1 - ni != 0 {
            return Err(CertificateError::InternalInvariant(
                "t-term of the large-case bound failed to vanish".into(),
            ));
        }
        let general = Scalar::ratio((ni + m + 1) * (ni - m), 2 * ki * (ni - ki));
        let reduced = Scalar::ratio(2 * ki + 1, ki);
        if general != reduced {
            return Err(CertificateError::InternalInvariant(
                "large-case coefficient identity failed".into(),
            ));
        }
        let tail = plain_tail_sum(seq, m as usize);
        let weighted = weighted_tail_sum(seq, m as usize);
        chain.push(BoundStep {
            name: StepName::TailAverage,
            lhs: tail.clone(),
            rhs: Scalar::ratio(ni - m, ni - ki) * plain_tail_sum(seq, k_count),
        });
        chain.push(BoundStep {
            name: StepName::Rearrangement,
            lhs: weighted.clone(),
            rhs: Scalar::ratio(ni + m + 1, 2) * &tail,
        });
        chain.push(BoundStep {
            name: StepName::DropPlus,
            lhs: a.clone(),
            rhs: weighted - Scalar::from_int(ni - m) * t,
        });
        chain.push(BoundStep {
            name: StepName::CoefficientBound,
            lhs: reduced * &b,
            rhs: b.clone(),
        });
    }

    chain.push(BoundStep {
        name: StepName::Conclusion,
        lhs: a.clone(),
        rhs: b.clone(),
    });

    for step in &chain {
        if step.lhs < step.rhs {
            return Err(CertificateError::InternalInvariant(format!(
                "step {:?} does not hold: {} < {}",
                step.name, step.lhs, step.rhs
            )));
        }
    }

    Ok(Lemma1Certificate {
        n,
        threshold: t.clone(),
        negative_count: k_count,
        case,
        positive_stop_loss: a,
        negative_stop_loss: b,
        pigeonhole_index: Some(l),
        tail_start,
        bound_chain: chain,
    })
}

/// Independently audit a certificate against the instance it claims to
/// describe: every field and every bound-chain step is recomputed from
/// `(seq, t)` alone in exact arithmetic, and the first disagreement is
/// reported by name.
pub fn check_certificate(
    cert: &Lemma1Certificate,
    seq: &OrderedZeroSumSequence,
    t: &Scalar,
) -> CertificateCheck {
    let invalid = |field: &str| CertificateCheck::Invalid {
        field: field.to_string(),
    };

    if !require_exact(seq, t)
        || !cert.threshold.is_exact()
        || !cert.positive_stop_loss.is_exact()
        || !cert.negative_stop_loss.is_exact()
        || cert
            .bound_chain
            .iter()
            .any(|s| !s.lhs.is_exact() || !s.rhs.is_exact())
    {
        return invalid("exact-arithmetic-required");
    }
    if t.is_negative() {
        return invalid("threshold-nonnegative");
    }

    if cert.n != seq.len() {
        return invalid("n");
    }
    if &cert.threshold != t {
        return invalid("threshold");
    }

    // Recompute K directly from the entries.
    let mut k_count = 0usize;
    for v in seq.values() {
        if v.is_negative() {
            k_count += 1;
        }
    }
    if cert.negative_count != k_count {
        return invalid("negative_count");
    }

    // Recompute both truncated sums by direct loops.
    let mut b = Scalar::zero();
    for (i, v) in seq.values().iter().enumerate().take(k_count) {
        let term = -(Scalar::from_int(i as i64 + 1) * v) - t;
        b = b + term.plus_part();
    }
    let mut a = Scalar::zero();
    for (i, v) in seq.values().iter().enumerate().skip(k_count) {
        let term = Scalar::from_int(i as i64 + 1) * v - t;
        a = a + term.plus_part();
    }

    let ni = seq.len() as i64;
    let ki = k_count as i64;
    let expected_case = if b.is_zero() {
        CertificateCase::TrivialZero
    } else if ni <= 3 * ki + 1 {
        CertificateCase::SmallN
    } else {
        CertificateCase::LargeN
    };
    if cert.case != expected_case {
        return invalid("case");
    }
    if cert.negative_stop_loss != b {
        return invalid("negative_stop_loss");
    }
    if cert.positive_stop_loss != a {
        return invalid("positive_stop_loss");
    }

    // Expected witness index and tail start.
    let expected_l = if b.is_zero() {
        None
    } else {
        let mut l = 1usize;
        let mut best = -(Scalar::from_int(1) * &seq.values()[0]);
        for k in 2..=k_count {
            let cand = -(Scalar::from_int(k as i64) * &seq.values()[k - 1]);
            if cand > best {
                best = cand;
                l = k;
            }
        }
        Some(l)
    };
    if cert.pigeonhole_index != expected_l {
        return invalid("pigeonhole_index");
    }
    let expected_m = if expected_case == CertificateCase::LargeN {
        Some((ni - 2 * ki - 1) as usize)
    } else {
        None
    };
    if cert.tail_start != expected_m {
        return invalid("tail_start");
    }

    // Rebuild the expected bound chain for the case.
    let mut expected: Vec<BoundStep> = Vec::new();
    match expected_case {
        CertificateCase::TrivialZero => {
            expected.push(BoundStep {
                name: StepName::Conclusion,
                lhs: a.clone(),
                rhs: b.clone(),
            });
        }
        CertificateCase::SmallN | CertificateCase::LargeN => {
            let l = expected_l.expect("B > 0 fixes a witness index");
            let b_over_k = &b / Scalar::from_int(ki);
            let lhs = -(Scalar::from_int(l as i64) * &seq.values()[l - 1]) - t;
            expected.push(BoundStep {
                name: StepName::Pigeonhole,
                lhs,
                rhs: b_over_k.clone(),
            });

            let mut tail_after_k = Scalar::zero();
            for v in &seq.values()[k_count..] {
                tail_after_k = tail_after_k + v;
            }
            expected.push(BoundStep {
                name: StepName::ZeroSumTail,
                lhs: tail_after_k.clone(),
                rhs: b_over_k + t,
            });

            let start = match expected_case {
                CertificateCase::SmallN => k_count,
                CertificateCase::LargeN => expected_m.expect("large case sets M"),
                CertificateCase::TrivialZero => unreachable!(),
            };
            let si = start as i64;
            let mut tail = Scalar::zero();
            let mut weighted = Scalar::zero();
            for (i, v) in seq.values().iter().enumerate().skip(start) {
                tail = tail + v;
                weighted = weighted + Scalar::from_int(i as i64 + 1) * v;
            }

            if expected_case == CertificateCase::LargeN {
                expected.push(BoundStep {
                    name: StepName::TailAverage,
                    lhs: tail.clone(),
                    rhs: Scalar::ratio(ni - si, ni - ki) * &tail_after_k,
                });
            }
            expected.push(BoundStep {
                name: StepName::Rearrangement,
                lhs: weighted.clone(),
                rhs: Scalar::ratio(ni + si + 1, 2) * &tail,
            });
            expected.push(BoundStep {
                name: StepName::DropPlus,
                lhs: a.clone(),
                rhs: weighted - Scalar::from_int(ni - si) * t,
            });
            let bound = match expected_case {
                CertificateCase::SmallN => {
                    Scalar::ratio(ni + ki + 1, 2 * ki) * &b
                        + Scalar::ratio(3 * ki + 1 - ni, 2) * t
                }
                CertificateCase::LargeN => Scalar::ratio(2 * ki + 1, ki) * &b,
                CertificateCase::TrivialZero => unreachable!(),
            };
            expected.push(BoundStep {
                name: StepName::CoefficientBound,
                lhs: bound,
                rhs: b.clone(),
            });
            expected.push(BoundStep {
                name: StepName::Conclusion,
                lhs: a.clone(),
                rhs: b.clone(),
            });
        }
    }

    if cert.bound_chain.len() != expected.len() {
        return invalid("bound_chain length");
    }
    for (i, (got, want)) in cert.bound_chain.iter().zip(&expected).enumerate() {
        if got.name != want.name {
            return invalid(&format!("bound_chain[{i}] name"));
        }
        if got.lhs != want.lhs {
            return invalid(&format!("bound_chain[{i}] lhs"));
        }
        if got.rhs != want.rhs {
            return invalid(&format!("bound_chain[{i}] rhs"));
        }
        if want.lhs < want.rhs {
            return invalid(&format!("bound_chain[{i}] inequality"));
        }
    }

    if a < b {
        return invalid("conclusion");
    }

    CertificateCheck::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarPolicy;

    fn seq(values: &[i64]) -> OrderedZeroSumSequence {
        OrderedZeroSumSequence::new(
            values.iter().map(|&v| Scalar::from_int(v)).collect(),
            &ScalarPolicy::exact(),
        )
        .unwrap()
    }

    fn step<'a>(cert: &'a Lemma1Certificate, name: StepName) -> &'a BoundStep {
        cert.bound_chain
            .iter()
            .find(|s| s.name == name)
            .unwrap_or_else(|| panic!("step {name:?} missing"))
    }

    #[test]
    fn small_case_hand_trace() {
        // n=4, K=2, t=0: B=4, B/K=2, witness l=1; chain 3 ≥ 2, 11 ≥ 10.5,
        // bound 7 ≥ 4; actual A = 11.
        let s = seq(&[-2, -1, 1, 2]);
        let cert = certify_lemma1(&s, &Scalar::zero()).unwrap();
        assert_eq!(cert.case, CertificateCase::SmallN);
        assert_eq!(cert.negative_count, 2);
        assert_eq!(cert.negative_stop_loss, Scalar::from_int(4));
        assert_eq!(cert.positive_stop_loss, Scalar::from_int(11));
        assert_eq!(cert.pigeonhole_index, Some(1));
        assert_eq!(cert.tail_start, None);

        let p = step(&cert, StepName::Pigeonhole);
        assert_eq!((p.lhs.clone(), p.rhs.clone()), (Scalar::from_int(2), Scalar::from_int(2)));
        let z = step(&cert, StepName::ZeroSumTail);
        assert_eq!((z.lhs.clone(), z.rhs.clone()), (Scalar::from_int(3), Scalar::from_int(2)));
        let r = step(&cert, StepName::Rearrangement);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Scalar::from_int(11), Scalar::ratio(21, 2)));
        let c = step(&cert, StepName::CoefficientBound);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (Scalar::from_int(7), Scalar::from_int(4)));
    }

    #[test]
    fn large_case_hand_trace() {
        // n=5, K=1, t=0: M=2, B=4, tail-average 3 ≥ 3, coefficient 3,
        // bound 12, actual A = 14.
        let s = seq(&[-4, 1, 1, 1, 1]);
        let cert = certify_lemma1(&s, &Scalar::zero()).unwrap();
        assert_eq!(cert.case, CertificateCase::LargeN);
        assert_eq!(cert.negative_count, 1);
        assert_eq!(cert.tail_start, Some(2));
        assert_eq!(cert.negative_stop_loss, Scalar::from_int(4));
        assert_eq!(cert.positive_stop_loss, Scalar::from_int(14));

        let ta = step(&cert, StepName::TailAverage);
        assert_eq!((ta.lhs.clone(), ta.rhs.clone()), (Scalar::from_int(3), Scalar::from_int(3)));
        let c = step(&cert, StepName::CoefficientBound);
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (Scalar::from_int(12), Scalar::from_int(4)));
        let d = step(&cert, StepName::DropPlus);
        assert_eq!((d.lhs.clone(), d.rhs.clone()), (Scalar::from_int(14), Scalar::from_int(12)));
    }

    #[test]
    fn trivial_case_when_threshold_beyond_entries() {
        // (1−5)₊ = 0.
        let s = seq(&[-1, 1]);
        let cert = certify_lemma1(&s, &Scalar::from_int(5)).unwrap();
        assert_eq!(cert.case, CertificateCase::TrivialZero);
        assert!(cert.negative_stop_loss.is_zero());
        assert_eq!(cert.pigeonhole_index, None);
        assert_eq!(cert.bound_chain.len(), 1);
    }

    #[test]
    fn all_zero_sequence_is_trivial() {
        let s = seq(&[0, 0, 0]);
        let cert = certify_lemma1(&s, &Scalar::zero()).unwrap();
        assert_eq!(cert.case, CertificateCase::TrivialZero);
    }

    #[test]
    fn negative_threshold_rejected() {
        let s = seq(&[-1, 1]);
        assert!(matches!(
            certify_lemma1(&s, &Scalar::from_int(-1)),
            Err(CertificateError::NegativeThreshold { .. })
        ));
    }

    #[test]
    fn approx_inputs_rejected() {
        let s = seq(&[-1, 1]);
        assert_eq!(
            certify_lemma1(&s, &Scalar::approx(0.5)).unwrap_err(),
            CertificateError::RequiresExact
        );
    }

    #[test]
    fn round_trip_certificates_check() {
        for (values, t) in [
            (&[-2, -1, 1, 2][..], Scalar::zero()),
            (&[-4, 1, 1, 1, 1][..], Scalar::zero()),
            (&[-4, 1, 1, 1, 1][..], Scalar::ratio(3, 2)),
            (&[-1, 1][..], Scalar::from_int(5)),
            (&[-3, -1, 0, 4][..], Scalar::ratio(1, 3)),
        ] {
            let s = seq(values);
            let cert = certify_lemma1(&s, &t).unwrap();
            let check = check_certificate(&cert, &s, &t);
            assert!(check.is_valid(), "{values:?} at {t}: {check:?}");
        }
    }

    #[test]
    fn perturbed_sum_is_rejected_at_its_field() {
        let s = seq(&[-2, -1, 1, 2]);
        let t = Scalar::zero();
        let mut cert = certify_lemma1(&s, &t).unwrap();
        cert.negative_stop_loss = &cert.negative_stop_loss + Scalar::one();
        assert_eq!(
            check_certificate(&cert, &s, &t).failing_field(),
            Some("negative_stop_loss")
        );
    }

    #[test]
    fn perturbed_case_is_rejected() {
        let s = seq(&[-2, -1, 1, 2]);
        let t = Scalar::zero();
        let mut cert = certify_lemma1(&s, &t).unwrap();
        cert.case = CertificateCase::LargeN;
        assert_eq!(check_certificate(&cert, &s, &t).failing_field(), Some("case"));
    }

    #[test]
    fn perturbed_step_value_is_rejected_at_that_step() {
        let s = seq(&[-2, -1, 1, 2]);
        let t = Scalar::zero();
        let mut cert = certify_lemma1(&s, &t).unwrap();
        let idx = cert
            .bound_chain
            .iter()
            .position(|st| st.name == StepName::Rearrangement)
            .unwrap();
        cert.bound_chain[idx].rhs = &cert.bound_chain[idx].rhs - Scalar::one();
        assert_eq!(
            check_certificate(&cert, &s, &t).failing_field(),
            Some(format!("bound_chain[{idx}] rhs").as_str())
        );
    }

    #[test]
    fn wrong_witness_index_is_rejected() {
        let s = seq(&[-2, -1, 1, 2]);
        let t = Scalar::zero();
        let mut cert = certify_lemma1(&s, &t).unwrap();
        // Index 2 also satisfies the pigeonhole bound here, but the
        // canonical choice is the smallest argmax.
        cert.pigeonhole_index = Some(2);
        assert_eq!(
            check_certificate(&cert, &s, &t).failing_field(),
            Some("pigeonhole_index")
        );
    }

    #[test]
    fn mismatched_threshold_is_rejected() {
        let s = seq(&[-2, -1, 1, 2]);
        let cert = certify_lemma1(&s, &Scalar::zero()).unwrap();
        assert_eq!(
            check_certificate(&cert, &s, &Scalar::one()).failing_field(),
            Some("threshold")
        );
    }

    #[test]
    fn certificate_serde_round_trip() {
        let s = seq(&[-4, 1, 1, 1, 1]);
        let cert = certify_lemma1(&s, &Scalar::ratio(1, 2)).unwrap();
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Lemma1Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(check_certificate(&back, &s, &Scalar::ratio(1, 2)).is_valid());
    }
}
