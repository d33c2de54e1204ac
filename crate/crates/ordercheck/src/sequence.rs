//! The two foundational input types: sorted zero-sum sequences and
//! nonnegative multisets.
//!
//! An [`OrderedZeroSumSequence`] is a nondecreasing vector
//! `α_1 ≤ α_2 ≤ … ≤ α_n` with `Σ α_j = 0`, together with the derived count
//! `K` of strictly negative entries. Unless every entry is zero,
//! `1 ≤ K ≤ n−1` and `α_K < 0 ≤ α_{K+1}`.
//!
//! [`split_instance`](OrderedZeroSumSequence::split_instance) produces the
//! two nonnegative multisets compared throughout the crate: the
//! index-weighted positive side `{k·α_k : k > K}` and the negated negative
//! side `{−k·α_k : k ≤ K}`.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Scalar, ScalarPolicy};

/// Validation errors for sequence construction.
#[derive(Debug, Error, PartialEq)]
pub enum SequenceError {
    #[error("sequence must be non-empty")]
    Empty,
    #[error("input not nondecreasing at position {index}")]
    NotSorted { index: usize },
    #[error("entries do not sum to zero (sum = {sum})")]
    NonZeroSum { sum: String },
    #[error("approximate value at position {index} rejected by exact-mode policy")]
    ApproxValueInExactMode { index: usize },
}

/// Validation errors for multiset construction.
#[derive(Debug, Error, PartialEq)]
pub enum MultisetError {
    #[error("negative entry at position {index}")]
    NegativeEntry { index: usize },
}

/// A nondecreasing sequence with zero sum, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedZeroSumSequence {
    values: Vec<Scalar>,
    negative_count: usize,
}

impl OrderedZeroSumSequence {
    /// Validate `values` as given. The input order is checked, never fixed
    /// up: an unsorted input is a caller bug and is reported as such.
    pub fn new(values: Vec<Scalar>, policy: &ScalarPolicy) -> Result<Self, SequenceError> {
        Self::validate(values, policy)
    }

    /// Subtract the mean, then validate. The only mutation this type offers;
    /// useful when the caller has raw samples that should sum to zero.
    pub fn recentered(values: Vec<Scalar>, policy: &ScalarPolicy) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        let n = Scalar::from_int(values.len() as i64);
        let mean = values.iter().sum::<Scalar>() / n;
        let shifted = values.into_iter().map(|v| v - &mean).collect();
        Self::validate(shifted, policy)
    }

    fn validate(values: Vec<Scalar>, policy: &ScalarPolicy) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        for (index, v) in values.iter().enumerate() {
            if !policy.admits(v) {
                return Err(SequenceError::ApproxValueInExactMode { index });
            }
        }
        for i in 1..values.len() {
            if values[i - 1] > values[i] {
                return Err(SequenceError::NotSorted { index: i });
            }
        }
        let sum: Scalar = values.iter().sum();
        let ok = if policy.is_exact() {
            sum.is_zero()
        } else {
            sum.to_f64().abs() <= policy.abs_tol
        };
        if !ok {
            return Err(SequenceError::NonZeroSum {
                sum: sum.to_string(),
            });
        }
        let negative_count = values.iter().filter(|v| v.is_negative()).count();
        let seq = OrderedZeroSumSequence {
            values,
            negative_count,
        };
        debug_assert!(seq.check_split_invariant());
        Ok(seq)
    }

    fn check_split_invariant(&self) -> bool {
        if self.is_all_zero() {
            return true;
        }
        let k = self.negative_count;
        k >= 1
            && k <= self.len() - 1
            && self.values[k - 1].is_negative()
            && !self.values[k].is_negative()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// `K`: the number of strictly negative entries. Zeros count to the
    /// nonnegative side, so `α_K < 0 ≤ α_{K+1}` whenever `K ≥ 1`.
    pub fn negative_count(&self) -> usize {
        self.negative_count
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// The index-weighted image `(1·α_1, 2·α_2, …, n·α_n)`.
    pub fn weighted_image(&self) -> Vec<Scalar> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| Scalar::from_int(i as i64 + 1) * v)
            .collect()
    }

    /// Split into the positive-side multiset `{k·α_k : k > K}` and the
    /// negated negative-side multiset `{−k·α_k : k ≤ K}`. Both are
    /// nonnegative by the sign structure; an all-zero sequence yields
    /// `n` zeros on the positive side and an empty negative side.
    pub fn split_instance(&self) -> (NonnegMultiset, NonnegMultiset) {
        let k = self.negative_count;
        let weighted = self.weighted_image();
        let mut positive = Vec::with_capacity(self.len() - k);
        let mut negative = Vec::with_capacity(k);
        for (i, w) in weighted.into_iter().enumerate() {
            if i < k {
                negative.push(-w);
            } else {
                positive.push(w);
            }
        }
        let positive =
            NonnegMultiset::new(positive).expect("positive side is nonnegative by construction");
        let negative =
            NonnegMultiset::new(negative).expect("negative side is positive by construction");
        (positive, negative)
    }
}

/// A finite unordered collection of nonnegative scalars. Stored sorted for
/// canonical display and knot extraction; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonnegMultiset {
    entries: Vec<Scalar>,
}

impl NonnegMultiset {
    pub fn new(entries: Vec<Scalar>) -> Result<Self, MultisetError> {
        if let Some(index) = entries.iter().position(Scalar::is_negative) {
            return Err(MultisetError::NegativeEntry { index });
        }
        let mut entries = entries;
        entries.sort();
        Ok(NonnegMultiset { entries })
    }

    pub fn empty() -> Self {
        NonnegMultiset {
            entries: Vec::new(),
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        NonnegMultiset::new(values.iter().map(|&v| Scalar::from_int(v)).collect())
            .expect("integer literals checked by caller")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in nondecreasing order.
    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.entries.iter()
    }

    /// Sum of all entries, i.e. the stop-loss transform at zero.
    pub fn total(&self) -> Scalar {
        self.entries.iter().sum()
    }

    /// Multiset union (entry concatenation).
    pub fn union(&self, other: &NonnegMultiset) -> NonnegMultiset {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        entries.sort();
        NonnegMultiset { entries }
    }
}
