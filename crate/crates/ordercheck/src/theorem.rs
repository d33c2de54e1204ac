//! Verification of the index-weighted inequality `Σ_j φ(j·α_j) ≥ 0` and its
//! exponential, product-form, and Karamata-style corollaries.
//!
//! [`verify_main`] evaluates the sum directly and, in parallel, re-derives
//! it through the split route: with `P = {k·α_k : k > K}` and
//! `Q = {−k·α_k : k ≤ K}`, oddness gives
//! `Σ_j φ(j·α_j) = Σ_P φ(p) − Σ_Q φ(q)`, and stop-loss dominance of `P`
//! over `Q` is what makes the difference nonnegative. The two routes must
//! agree; a mismatch is reported as an internal error rather than silently
//! resolved.

use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::convexfn::{OddConvexCombination, PLIncreasingConvexFn};
use crate::scalar::{Scalar, ScalarPolicy};
use crate::sequence::{NonnegMultiset, OrderedZeroSumSequence};
use crate::stoploss::{dominates, OrderWitness, StopLossCurve};

#[derive(Debug, Error, PartialEq)]
pub enum TheoremError {
    #[error("exact policy cannot evaluate analytic atoms (sinh); use approximate mode")]
    ExactPolicyAnalyticPhi,
    #[error("internal cross-check failed: direct sum {direct} != split route {split}")]
    CrossCheckMismatch { direct: String, split: String },
    #[error("internal decomposition mismatch: direct difference {direct} != term sum {terms}")]
    DecompositionMismatch { direct: String, terms: String },
    #[error("index range has {indices} entries but {values} values were supplied")]
    LengthMismatch { indices: usize, values: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum ProductFormError {
    #[error("entry {index} is not strictly positive")]
    NonPositiveEntry { index: usize },
    #[error("input not nondecreasing at position {index}")]
    NotSorted { index: usize },
    #[error("product of entries is {product}, not 1")]
    ProductNotOne { product: String },
}

/// `Σ_j φ(j·α_j)`. The nonnegativity assertion lives in [`verify_main`];
/// this just returns the value.
pub fn theorem_sum(seq: &OrderedZeroSumSequence, phi: &OddConvexCombination) -> Scalar {
    seq.weighted_image().iter().map(|w| phi.eval(w)).sum()
}

/// Sum of absolute values of the terms of [`theorem_sum`]; the scale used
/// for tolerance decisions about that sum.
pub fn theorem_scale(seq: &OrderedZeroSumSequence, phi: &OddConvexCombination) -> Scalar {
    seq.weighted_image()
        .iter()
        .map(|w| phi.eval(w).abs())
        .sum()
}

/// Full report for one main-inequality verification.
#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub value: Scalar,
    /// Sum of `|φ(j·α_j)|`, the tolerance scale for `value`.
    pub scale: Scalar,
    pub nonnegative: bool,
    /// `{k·α_k : k > K}`.
    pub positive_part: NonnegMultiset,
    /// `{−k·α_k : k ≤ K}`.
    pub negative_part: NonnegMultiset,
    /// Stop-loss comparison of the two parts.
    pub order: OrderWitness,
    /// `Σ_P φ − Σ_Q φ`; equals `value` by oddness (cross-checked).
    pub split_difference: Scalar,
}

/// Evaluate the inequality and its split route, cross-check the two, and
/// certify nonnegativity under the policy.
pub fn verify_main(
    seq: &OrderedZeroSumSequence,
    phi: &OddConvexCombination,
    policy: &ScalarPolicy,
) -> Result<MainTheoremReport, TheoremError> {
    if policy.is_exact() && !phi.is_rational_closed() {
        return Err(TheoremError::ExactPolicyAnalyticPhi);
    }

    let terms: Vec<Scalar> = seq.weighted_image().iter().map(|w| phi.eval(w)).collect();
    let value: Scalar = terms.iter().sum();
    let scale: Scalar = terms.iter().map(Scalar::abs).sum();

    let (positive_part, negative_part) = seq.split_instance();
    let order = dominates(&positive_part, &negative_part, policy);

    let split_difference = positive_part.iter().map(|p| phi.eval(p)).sum::<Scalar>()
        - negative_part.iter().map(|q| phi.eval(q)).sum::<Scalar>();

    if !policy.certify_eq(&value, &split_difference, &scale) {
        return Err(TheoremError::CrossCheckMismatch {
            direct: value.to_string(),
            split: split_difference.to_string(),
        });
    }

    let nonnegative = policy.certify_nonneg(&value, &scale);
    Ok(MainTheoremReport {
        value,
        scale,
        nonnegative,
        positive_part,
        negative_part,
        order,
        split_difference,
    })
}

/// Report for the exponential inequality `Σ e^{kα_k} ≥ Σ e^{−kα_k}`.
#[derive(Debug, Clone, Serialize)]
pub struct ExpInequalityReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub margin: Scalar,
    /// The same margin computed as `Σ (e^{kα_k} − e^{−kα_k})`, i.e. the
    /// `2·sinh` route; agrees with `margin` up to rounding.
    pub sinh_route_margin: Scalar,
    /// Scale (`lhs + rhs`) for tolerance decisions.
    pub scale: Scalar,
}

/// Evaluate both sides of the exponential inequality. Always approximate.
pub fn exp_inequality_check(seq: &OrderedZeroSumSequence) -> ExpInequalityReport {
    let weighted = seq.weighted_image();
    let lhs: Scalar = weighted.iter().map(Scalar::exp).sum();
    let rhs: Scalar = weighted.iter().map(|w| (-w).exp()).sum();
    let margin = &lhs - &rhs;
    let phi = OddConvexCombination::exp_diff(Scalar::one()).expect("unit weight");
    let sinh_route_margin = theorem_sum(seq, &phi);
    let scale = &lhs + &rhs;
    ExpInequalityReport {
        lhs,
        rhs,
        margin,
        sinh_route_margin,
        scale,
    }
}

/// Report for the product form `Σ x_k^k ≥ Σ x_k^{−k}` over positive
/// nondecreasing `x` with unit product.
#[derive(Debug, Clone, Serialize)]
pub struct ProductFormReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub margin: Scalar,
    pub scale: Scalar,
}

/// Check the product form. Exact when the entries are exact rationals.
pub fn product_form_check(
    xs: &[Scalar],
    policy: &ScalarPolicy,
) -> Result<ProductFormReport, ProductFormError> {
    for (index, x) in xs.iter().enumerate() {
        if !x.is_positive() {
            return Err(ProductFormError::NonPositiveEntry { index });
        }
    }
    for i in 1..xs.len() {
        if xs[i - 1] > xs[i] {
            return Err(ProductFormError::NotSorted { index: i });
        }
    }
    let product = xs.iter().fold(Scalar::one(), |acc, x| acc * x);
    let unit = if policy.is_exact() {
        product == Scalar::one()
    } else {
        (product.to_f64() - 1.0).abs() <= policy.abs_tol + policy.rel_tol
    };
    if !unit {
        return Err(ProductFormError::ProductNotOne {
            product: product.to_string(),
        });
    }

    let mut lhs = Scalar::zero();
    let mut rhs = Scalar::zero();
    for (i, x) in xs.iter().enumerate() {
        let k = (i + 1) as u32;
        lhs = lhs + x.pow_u32(k);
        rhs = rhs + (Scalar::one() / x).pow_u32(k);
    }
    let margin = &lhs - &rhs;
    let scale = &lhs + &rhs;
    Ok(ProductFormReport {
        lhs,
        rhs,
        margin,
        scale,
    })
}

/// Whether the hypothesis (stop-loss dominance) of the convex comparison
/// was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KaramataVerdict {
    Holds,
    HypothesisFailed,
}

/// One term of the plus-function decomposition of `ΣF(a) − ΣF(b)`.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionTerm {
    /// `0` for the linear part, otherwise the breakpoint knot.
    pub threshold: Scalar,
    /// `s₀` or the slope increment at the knot.
    pub weight: Scalar,
    /// `π_A(threshold) − π_B(threshold)`.
    pub order_margin: Scalar,
    /// `weight · order_margin`.
    pub contribution: Scalar,
}

/// Report for one truncated-sum Karamata comparison.
#[derive(Debug, Clone, Serialize)]
pub struct KaramataReport {
    pub verdict: KaramataVerdict,
    pub sum_a: Scalar,
    pub sum_b: Scalar,
    pub difference: Scalar,
    /// `difference >= 0` under the policy (guaranteed when the verdict is
    /// `Holds`; reported honestly either way).
    pub comparison_holds: bool,
    /// `ΣF(a) − ΣF(b) = s₀·(π_A(0) − π_B(0)) + Σ Δs_i·(π_A(k_i) − π_B(k_i))`;
    /// when dominance holds, every contribution is individually nonnegative.
    pub decomposition: Vec<DecompositionTerm>,
    pub order: OrderWitness,
}

/// Compare `Σ F(a)` with `Σ F(b)` for increasing convex `F` with `F(0)=0`,
/// proving the inequality through the plus-function decomposition when
/// stop-loss dominance holds.
pub fn karamata_compare(
    a: &NonnegMultiset,
    b: &NonnegMultiset,
    f: &PLIncreasingConvexFn,
    policy: &ScalarPolicy,
) -> Result<KaramataReport, TheoremError> {
    let order = dominates(a, b, policy);
    let sum_a: Scalar = a.iter().map(|x| f.eval(x)).sum();
    let sum_b: Scalar = b.iter().map(|x| f.eval(x)).sum();
    let difference = &sum_a - &sum_b;

    let curve_a = StopLossCurve::from_multiset(a);
    let curve_b = StopLossCurve::from_multiset(b);
    let margin_at = |t: &Scalar| -> Scalar {
        curve_a.eval(t).expect("nonnegative threshold")
            - curve_b.eval(t).expect("nonnegative threshold")
    };

    let decomposition_of = f.decompose_plus();
    let mut decomposition = Vec::with_capacity(1 + decomposition_of.atoms.len());
    let zero = Scalar::zero();
    let m0 = margin_at(&zero);
    decomposition.push(DecompositionTerm {
        threshold: zero,
        weight: decomposition_of.initial_slope.clone(),
        contribution: &decomposition_of.initial_slope * &m0,
        order_margin: m0,
    });
    for (weight, knot) in &decomposition_of.atoms {
        let m = margin_at(knot);
        decomposition.push(DecompositionTerm {
            threshold: knot.clone(),
            weight: weight.clone(),
            contribution: weight * &m,
            order_margin: m,
        });
    }

    let term_sum: Scalar = decomposition.iter().map(|t| t.contribution.clone()).sum();
    let scale = sum_a.abs() + sum_b.abs();
    if !policy.certify_eq(&difference, &term_sum, &scale) {
        return Err(TheoremError::DecompositionMismatch {
            direct: difference.to_string(),
            terms: term_sum.to_string(),
        });
    }

    let comparison_holds = policy.certify_nonneg(&difference, &scale);
    Ok(KaramataReport {
        verdict: if order.dominates {
            KaramataVerdict::Holds
        } else {
            KaramataVerdict::HypothesisFailed
        },
        sum_a,
        sum_b,
        difference,
        comparison_holds,
        decomposition,
        order,
    })
}

/// Similarly-ordered rearrangement bound: for a nondecreasing `tail`
/// aligned with consecutive increasing `indices`,
/// `Σ index·value ≥ mean(indices) · Σ value`.
/// Returns `(lhs, rhs)` of that inequality.
pub fn rearrangement_lower_bound(
    indices: RangeInclusive<i64>,
    tail: &[Scalar],
) -> Result<(Scalar, Scalar), TheoremError> {
    let (start, end) = (*indices.start(), *indices.end());
    let count = if end >= start {
        (end - start + 1) as usize
    } else {
        0
    };
    if count != tail.len() {
        return Err(TheoremError::LengthMismatch {
            indices: count,
            values: tail.len(),
        });
    }
    debug_assert!(tail.windows(2).all(|w| w[0] <= w[1]), "tail must be sorted");
    let lhs: Scalar = tail
        .iter()
        .enumerate()
        .map(|(i, v)| Scalar::from_int(start + i as i64) * v)
        .sum();
    let mean = Scalar::ratio(start + end, 2);
    let rhs = mean * tail.iter().sum::<Scalar>();
    Ok((lhs, rhs))
}
